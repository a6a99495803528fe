// Series on X and on X' agree after q1 -> 1/q1', q2 -> q1' q2'.

use flopgw::qlocal::{verify_flop_invariance, Insertion};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let r = 2;
    let ins = |k, a, b| Insertion::monomial(r, k, a, b);
    let lists = [
        vec![ins(0, 2, 0), ins(0, 2, 0), ins(0, 2, 3)],
        vec![ins(0, 1, 1), ins(0, 0, 2), ins(4, 0, 1)],
        vec![ins(0, 1, 3), ins(0, 2, 2), ins(0, 2, 3)],
    ];
    for list in &lists {
        let rep = verify_flop_invariance(r, list, 12)?;
        println!("d2 = {}  {:?}", rep.d2, rep.insertions);
        println!("  X:  {}  ->  {}", rep.fit, rep.continued);
        println!("  X': {}  {:?}", rep.transformed_fit, rep.transformed);
        println!("  {}", if rep.passed { "pass" } else { "FAIL" });
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("flop invariance example");
}
