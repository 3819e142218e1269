//! Max-min phase followed by the sum phase: keep every grade at the max-min
//! level and raise the total as far as possible.

use fuzzy_moqp::fixtures::illustrative_system;
use fuzzy_moqp::solver::{solve_phase1, solve_phase2, SolverSettings};

fn main() -> fuzzy_moqp::Result<()> {
    let system = illustrative_system();
    let settings = SolverSettings { seed: 7, ..Default::default() };
    let p1 = solve_phase1(&system, &settings)?;
    let p2 = solve_phase2(&system, &p1, &settings)?;

    println!("lambda* = {:.7}", p1.lambda_star);
    println!("{:<14}{:>12}{:>12}", "grade", "max-min", "sum phase");
    for ((id, a), (_, b)) in p1.memberships.iter().zip(p2.memberships().iter()) {
        println!("{:<14}{a:>12.7}{b:>12.7}", id.to_string());
    }
    println!("sum {:.7} -> {:.7}", p1.memberships.sum(), p2.sum_memberships);
    println!("Z(x_eff) = {:.6?} at {:.6?}", p2.objective_values, p2.x_eff);
    match (&p2.oracle, &p2.discrepancy) {
        (None, _) => println!("grid oracle: no grid point inside the level set"),
        (Some(h), None) => println!("grid oracle: best sum {:.7}, consistent", h.value),
        (Some(_), Some(d)) => println!("grid oracle: better point {:?} (sum {:.7})", d.point, d.oracle_sum),
    }
    Ok(())
}
