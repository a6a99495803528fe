// Invariants along the extremal ray: closed forms, the N recursion and the
// invariance identity with its classical defect.

use flopgw::corealg::rational::fmt_rational;
use flopgw::extremal::{
    admissible_degree_vectors, compute_n, extremal_series, n_point_extremal, one_point_descendent,
    three_point_descendent, two_point_descendent, verify_extremal_invariance,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let r = 2;
    for d in 1..=4 {
        println!(
            "d={d}: <tau_2 h>={}  <h^2, h^2>={}  <h, h, tau_1 h^2>={}",
            fmt_rational(&one_point_descendent(r, 2, 1, d)),
            fmt_rational(&two_point_descendent(r, 0, 2, 0, 2, d)),
            fmt_rational(&three_point_descendent(r, 1, 1, 1, 2, d)),
        );
    }

    for n in 3..=5 {
        for v in admissible_degree_vectors(r, n) {
            let series = extremal_series(r, &v)?;
            println!(
                "N{v:?} = {}  series {}",
                fmt_rational(&compute_n(r, &v)?),
                series.fmt_q1()
            );
        }
    }
    println!(
        "<h, h, h^2, h^2>_3 = {}",
        fmt_rational(&n_point_extremal(r, &[1, 1, 2, 2], 3))
    );

    let rep = verify_extremal_invariance(r, &[1, 2, 2])?;
    println!(
        "X side {}, continued F side {}, defect {}: {}",
        rep.x_side.fmt_q1(),
        rep.f_side_continued.fmt_q1(),
        fmt_rational(&rep.defect),
        if rep.passed { "pass" } else { "fail" }
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("extremal example");
}
