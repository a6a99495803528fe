// Generating functions in q1 at the unique admissible d2.

use flopgw::corealg::novikov::fit_ratfn_default;
use flopgw::corealg::rational::fmt_rational;
use flopgw::corealg::CurveDegree;
use flopgw::qlocal::{
    admissible_d2, gw_invariant, n_point_series, one_point_local, p_beta, Insertion,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let r = 2;
    let ins = |a, b| Insertion::monomial(r, 0, a, b);

    // P_beta for beta = l + gamma down to z^-6.
    println!("P_(1,1) = {:?}", p_beta(r, 1, 1, 6)?);
    let pt = flopgw::corealg::CohClass::monomial(flopgw::corealg::ModelSpec::flop(r), 2, 3);
    println!(
        "<tau_2 pt>_(0,1) = {}",
        one_point_local(r, 2, &pt, CurveDegree::new(0, 1))?
    );

    let list = [ins(2, 0), ins(2, 0), ins(2, 3)];
    println!("d2 = {}", admissible_d2(r, &list)?);
    println!(
        "<h^2, h^2, pt>_(2,1) = {}",
        gw_invariant(r, &list, CurveDegree::new(2, 1))?
    );

    let tau4 = Insertion::monomial(r, 4, 0, 1);
    for list in [
        vec![ins(2, 0), ins(2, 0), tau4.clone()],
        vec![ins(0, 2), ins(0, 2), tau4.clone()],
    ] {
        let s = n_point_series(r, &list, 10)?;
        let coeffs: Vec<String> = s.coeffs.iter().map(fmt_rational).collect();
        println!(
            "{list:?}: [{}] = {}",
            coeffs.join(", "),
            fit_ratfn_default(&s)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("series example");
}
