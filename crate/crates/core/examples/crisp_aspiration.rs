//! Solves the four crisp versions of each objective exactly and prints the
//! aspiration intervals they induce.

use fuzzy_moqp::crisp::aspiration;
use fuzzy_moqp::fixtures::illustrative;
use fuzzy_moqp::Variant;

fn main() -> fuzzy_moqp::Result<()> {
    let inst = illustrative();
    println!("{:<6}{:>10}{:>12}{:>10}{:>10}", "", "nominal", "tightened", "widened", "relaxed");
    for q in 0..inst.k {
        let a = aspiration(&inst, q)?;
        print!("Z{:<5}", q + 1);
        for v in Variant::ALL {
            print!("{:>10.4}", a.optimum(v).value);
        }
        println!("   -> [{}, {}]", a.interval.lo, a.interval.hi);
    }

    // where the best value of each variant is attained
    for v in Variant::ALL {
        let qp = inst.crisp_variant(0, v)?;
        let opt = fuzzy_moqp::solve_crisp(&qp)?;
        println!("Z1 variant {}: box [{:?}, {:?}], argmax {:?}", v.number(), qp.lo, qp.hi, opt.argmax);
    }
    Ok(())
}
