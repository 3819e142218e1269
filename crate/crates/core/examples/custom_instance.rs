//! Builds a three-variable instance in code, shows what validation reports
//! for broken data, saves the instance as JSON and solves it from the file.

use fuzzy_moqp::report::{render_summary, run_pipeline, SolveOptions};
use fuzzy_moqp::{validate, FuzzyBounds, FuzzyMoqpInstance, FuzzyRow, QuadraticObjective};

fn diag(d: [f64; 3]) -> Vec<Vec<f64>> {
    (0..3).map(|i| (0..3).map(|j| if i == j { d[i] } else { 0.0 }).collect()).collect()
}

fn main() -> fuzzy_moqp::Result<()> {
    let inst = FuzzyMoqpInstance::new(
        vec![
            QuadraticObjective::new(vec![3.0, 1.0, 2.0], diag([1.0, 0.5, 0.0])),
            QuadraticObjective::new(vec![1.0, 4.0, 1.0], diag([0.0, 2.0, 1.0])),
        ],
        vec![
            FuzzyRow { a: vec![1.0, 1.0, 1.0], d: vec![0.5, 0.5, 0.5], b: 12.0, p: 3.0 },
            FuzzyRow { a: vec![2.0, 1.0, 0.0], d: vec![1.0, 0.5, 0.1], b: 14.0, p: 4.0 },
        ],
        FuzzyBounds { l: vec![1.0; 3], r: vec![0.5; 3], u: vec![6.0, 7.0, 5.0], t: vec![1.0; 3] },
    );

    let mut broken = inst.clone();
    broken.objectives[1].q[0][1] = 3.0;
    broken.rows[0].p = 0.0;
    for v in validate(&broken) {
        println!("rejected: {v}");
    }

    let path = std::env::temp_dir().join("fuzzy-moqp-custom.json");
    std::fs::write(&path, inst.to_canonical_json())?;
    // a coarser grid keeps the three-dimensional oracle quick
    let options = SolveOptions { grid: 81, seed: 3, ..Default::default() };
    let solved = run_pipeline(&path, &options)?;
    print!("{}", render_summary(&solved.report));
    Ok(())
}
