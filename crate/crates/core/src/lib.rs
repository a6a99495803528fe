//! Exact intersection theory and genus-zero Gromov-Witten invariants of
//! simple ordinary P^r flops, computed in the local model
//! `P_{P^r}(O(-1)^{r+1} + O)`.
//!
//! - [`corealg`]: rationals, the graded rings, Poincare pairing, z-series,
//!   q1-polynomials and rational reconstruction.
//! - [`classical`]: the graph correspondence `F`, its isometry and the
//!   triple-product defect.
//! - [`extremal`]: invariants of degree `d * line` in closed form and by recursion.
//! - [`qlocal`]: the hypergeometric one-point series and the reconstruction
//!   engine for all `(d1, d2)`.
//! - [`cli`]: the `flopgw` command.
//!
//! ```
//! use flopgw::qlocal::{verify_flop_invariance, Insertion};
//!
//! let ins = |a, b| Insertion::monomial(2, 0, a, b);
//! let rep = verify_flop_invariance(2, &[ins(2, 0), ins(2, 0), ins(2, 3)], 8).unwrap();
//! assert_eq!(rep.fit.to_string(), "(q1^2/(1+q1))*q2");
//! assert!(rep.passed);
//! ```

pub mod classical;
pub mod cli;
pub mod corealg;
pub mod extremal;
pub mod qlocal;
