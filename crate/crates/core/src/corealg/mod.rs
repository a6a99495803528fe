//! Arithmetic, ring and series infrastructure.

pub mod linalg;
pub mod model;
pub mod novikov;
pub mod pairing;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod zseries;

pub use linalg::QMatrix;
pub use model::{ModelError, ModelKind, ModelSpec};
pub use novikov::{
    continue_ratfn, default_fit_bounds, fit_ratfn, fit_ratfn_default, ContinuationError,
    CurveDegree, FitError, NovikovSeries, RatFn,
};
pub use pairing::{gram_and_dual, integrate, pairing, Gram};
pub use poly::QPoly;
pub use rational::Rational;
pub use ring::{normalize, CohClass, Generator, Monomial, Ring, RingError, RingExpr};
pub use zseries::ZSeries;
