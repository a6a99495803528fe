// The correspondence is an isometry but not a ring map; the failure on
// triples is a product of pairings against [Z].

use flopgw::classical::{
    defect_sweep, excess_chern_check, flop_transform, local_model, predicted_defect, triple_defect,
    verify_isometry,
};
use flopgw::corealg::{CohClass, ModelSpec};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelSpec::flop(2);
    let h = CohClass::monomial(model, 1, 0);
    let h2 = CohClass::monomial(model, 2, 0);
    println!("F(h^2) = {}", flop_transform(&h2));

    let rep = verify_isometry(model)?;
    println!("isometry on {model}: {}", rep.passed);

    let d = triple_defect(&h2, &h2, &h)?;
    let p = predicted_defect(&h2, &h2, &h)?;
    println!("defect(h^2, h^2, h) = {d}, product formula = {p}");

    for (r, rp) in [(2, 2), (1, 3), (3, 2)] {
        let sweep = defect_sweep(local_model(r, rp));
        println!(
            "{}: {} triples, {} mismatches",
            sweep.model,
            sweep.checked,
            sweep.mismatches.len()
        );
    }

    let ec = excess_chern_check(2, 3);
    println!("top Chern class on P^2 x P^3: {}", ec.top_chern);
    println!("excess identity holds: {}", ec.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("classical example");
}
