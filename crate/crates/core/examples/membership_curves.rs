//! Evaluates, inverts and samples each kind of membership function, then
//! writes the curves of the example system as CSV files.
//!
//! ```text
//! cargo run --example membership_curves -- [out_dir]
//! ```

use fuzzy_moqp::fixtures::illustrative_system;
use fuzzy_moqp::membership::{
    sample_curve, FuzzyParamKind, FuzzyParamMf, LinearBoundMf, RaySlice, TrigConstraintMf, TrigObjectiveMf,
};
use fuzzy_moqp::report::emit_curves;

fn main() -> fuzzy_moqp::Result<()> {
    let z1 = TrigObjectiveMf::new(42.0, 228.75)?;
    let row = TrigConstraintMf::new(vec![1.0, 1.0], vec![1.0, 1.0], 10.0, 5.0)?;
    let upper = LinearBoundMf::upper(9.0, 3.0)?;
    let resource = FuzzyParamMf::new(FuzzyParamKind::Resource, 10.0, 5.0)?;

    println!("objective grade at 82.09: {:.6}", z1.eval(82.09));
    println!("row grade at (1.33, 5.80): {:.6}", row.eval(&[1.33, 5.80]));
    println!("upper-bound grade at 10.5: {}", upper.eval(10.5));
    println!("resource 12.5 believed to degree {}", resource.eval(12.5));

    for lambda in [0.25, 0.5, 1.0] {
        let r = row.invert_level(lambda)?;
        println!(
            "level {lambda}: Z1 ≥ {:.4}, row {:?}·x ≤ {:.4}, x1 {:?}",
            z1.invert_level(lambda)?,
            r.coeffs,
            r.rhs,
            upper.invert_level(lambda)?
        );
    }

    for (z, mu) in sample_curve(&z1, &(42.0, 228.75), 5)? {
        println!("  Z1 = {z:>8.3}  grade {mu:.4}");
    }
    for (t, mu) in sample_curve(&row, &RaySlice::diagonal(2, 10.0), 6)? {
        println!("  x = ({t}, {t})  grade {mu:.4}");
    }

    let dir = std::env::args().nth(1).map(Into::into).unwrap_or_else(|| std::env::temp_dir().join("fuzzy-moqp-curves"));
    let files = emit_curves(&illustrative_system(), &dir, None)?;
    println!("wrote {} curves to {}", files.len(), dir.display());
    Ok(())
}
