// The small quantum ring presentation maps to its primed counterpart.

use flopgw::qlocal::batyrev_check;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for r in 1..=5 {
        let rep = batyrev_check(r);
        println!(
            "r = {r}: first {}, second {}",
            rep.first_relation, rep.second_relation
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("quantum ring example");
}
