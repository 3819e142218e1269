//! Maximizes the smallest membership grade by bisection on the level and by
//! direct ascent, and compares both with the grid oracle.

use fuzzy_moqp::fixtures::illustrative_system;
use fuzzy_moqp::solver::{level_feasible, solve_phase1, solve_phase1_oracle_only, SolverSettings};

fn main() -> fuzzy_moqp::Result<()> {
    let system = illustrative_system();
    let settings = SolverSettings::default();

    for lambda in [0.2, 0.33, 0.34, 0.5] {
        let witness = level_feasible(&system, lambda, &settings)?;
        println!("level {lambda}: {}", witness.map_or("unreachable".into(), |x| format!("reached at {x:.4?}")));
    }

    let r = solve_phase1(&system, &settings)?;
    println!("lambda* = {:.7} at {:.6?} ({:?})", r.lambda_star, r.x_star, r.certification);
    println!("  bisection {:.7?}, direct ascent {:.7?}", r.bisection_lambda, r.direct_lambda);
    println!("  grid oracle {:.7} at {:.6?} over {} points", r.oracle_lambda, r.oracle_point, r.oracle_points);
    let binding: Vec<String> = r.binding.iter().map(ToString::to_string).collect();
    println!("  binding grades: {}", binding.join(", "));

    let grid = solve_phase1_oracle_only(&system, &settings)?;
    println!("grid only: {:.7}", grid.lambda_star);
    Ok(())
}
