//! Lists the extreme points of a bounded polyhedron with their active rows,
//! including a degenerate vertex where three rows meet.

use fuzzy_moqp::fixtures::illustrative;
use fuzzy_moqp::{Polyhedron, Variant};

fn print_vertices(title: &str, p: &Polyhedron) -> fuzzy_moqp::Result<()> {
    println!("{title}");
    for v in p.enumerate_vertices()? {
        println!("  {:?}  active rows {:?}", v.x, v.active);
    }
    Ok(())
}

fn main() -> fuzzy_moqp::Result<()> {
    let qp = illustrative().crisp_variant(0, Variant::Nominal)?;
    print_vertices("nominal region of the example:", &qp.polyhedron()?)?;

    // x + y ≤ 1 passes through the corner (1, 0) of the unit box
    let p = Polyhedron::from_rows_and_box(&[vec![1.0, 1.0]], &[1.0], &[0.0, 0.0], &[1.0, 1.0])?;
    print_vertices("triangle with a degenerate corner:", &p)?;

    let open = Polyhedron::new(2, vec![vec![-1.0, 0.0], vec![0.0, -1.0]], vec![0.0, 0.0]);
    println!("positive quadrant: {}", open.unwrap_err());
    Ok(())
}
