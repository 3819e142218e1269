//! Dominance checks: fuzzy efficiency over objective values and grades, and
//! plain Pareto optimality over a crisp region.

use fuzzy_moqp::fixtures::{illustrative, illustrative_system};
use fuzzy_moqp::solver::{check_fuzzy_efficiency, check_pareto, solve_phase1, solve_phase2, SolverSettings};
use fuzzy_moqp::Variant;

fn main() -> fuzzy_moqp::Result<()> {
    let system = illustrative_system();
    let settings = SolverSettings::default();
    let p2 = solve_phase2(&system, &solve_phase1(&system, &settings)?, &settings)?;

    for (label, x) in [("x_eff", p2.x_eff.clone()), ("origin", vec![0.0, 0.0]), ("(2, 2)", vec![2.0, 2.0])] {
        println!("{label:<8} {:?}", check_fuzzy_efficiency(&system, &x, &settings.oracle)?);
    }

    let inst = illustrative();
    let region = inst.crisp_variant(0, Variant::Nominal)?.polyhedron()?;
    for x in [[2.0, 7.0], [2.0, 2.0], [5.0, 5.0]] {
        println!("pareto {x:?}: {:?}", check_pareto(&inst.objectives, &region, &x, &settings.oracle)?);
    }
    Ok(())
}
