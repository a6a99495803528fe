// Recovering a rational function from a truncated series, then continuing it.

use flopgw::corealg::novikov::{continue_ratfn, default_fit_bounds, fit_ratfn, FitError};
use flopgw::corealg::{NovikovSeries, QPoly, RatFn};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let f = RatFn::new(QPoly::from_i64(&[0, 2]), QPoly::from_i64(&[1, -3]), 1);
    let s = f.expand(10);
    let (p, q, g) = default_fit_bounds(s.cutoff());
    let back = fit_ratfn(&s, p, q, g)?;
    println!(
        "{f} -> {:?} -> {back}",
        s.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
    );
    println!("continued: {}", continue_ratfn(&back)?);

    // q1^7 is invisible below the guard: the check rejects the wrong fit.
    let tail = NovikovSeries::from_i64(1, &[1, 0, 0, 0, 0, 0, 0, 5, 0, 0]);
    match fit_ratfn(&tail, 1, 1, 3) {
        Err(e @ FitError::ValidationFailed { .. }) => println!("rejected: {e}"),
        other => println!("unexpected: {other:?}"),
    }

    // A q1 pole at the origin after continuation.
    let g = RatFn::poly(QPoly::from_i64(&[0, 0, 0, 1]), 1);
    println!("{g} continues to {:?}", continue_ratfn(&g));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("reconstruction example");
}
