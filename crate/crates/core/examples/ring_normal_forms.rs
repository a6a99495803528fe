// Normal forms in the cohomology ring of the local P^r flop.
//
// `cargo run --example ring_normal_forms`

use flopgw::corealg::rational::rat;
use flopgw::corealg::{
    gram_and_dual, integrate, normalize, CohClass, Generator, ModelSpec, Ring, RingExpr,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelSpec::flop(2);
    let ring = Ring::get(model);
    println!(
        "{model}: {} basis monomials, dimension {}",
        ring.len(),
        model.dim()
    );

    // xi^4 is past the top xi-degree and rewrites through the relation.
    let xi4 = CohClass::monomial(model, 0, 4);
    println!("xi^4 = {xi4}");

    let expr = RingExpr::term(rat(2), &[(Generator::H, 1), (Generator::Xi, 4)])
        .plus(rat(-1), &[(Generator::H, 3)]);
    println!("2 h xi^4 - h^3 = {}", normalize(&expr, model)?);

    let xi = CohClass::monomial(model, 0, 1);
    println!("int xi^5 = {}", integrate(&xi.pow(5)));

    let gram = gram_and_dual(model)?;
    let h2 = CohClass::monomial(model, 2, 0);
    let idx = ring
        .index_of(flopgw::corealg::Monomial::new(2, 0))
        .expect("h^2 is a basis monomial");
    println!("dual of h^2: {}", gram.dual[idx]);
    println!("(h^2 . dual) = {}", integrate(&(&h2 * &gram.dual[idx])));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("ring example");
}
