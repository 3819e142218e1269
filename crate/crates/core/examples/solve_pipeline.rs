//! Runs every step on an instance file (default: the bundled two-variable
//! example) and prints the summary table followed by the JSON report.
//!
//! ```text
//! cargo run --release --example solve_pipeline -- [instance.json]
//! ```

use fuzzy_moqp::fixtures::illustrative;
use fuzzy_moqp::report::{render_summary, run_pipeline, solve_instance, SolveOptions};

fn main() -> fuzzy_moqp::Result<()> {
    let options = SolveOptions { timings: true, ..Default::default() };
    let solved = match std::env::args().nth(1) {
        Some(path) => run_pipeline(path, &options)?,
        None => solve_instance(&illustrative(), &options)?,
    };
    println!("{}", render_summary(&solved.report));
    println!("{}", solved.report.to_json());
    Ok(())
}
