//! Genus-zero quantum cohomology of the local flop model.

pub mod batyrev;
pub mod engine;
pub mod pbeta;
pub mod series;

use thiserror::Error;

use crate::corealg::model::ModelSpec;
use crate::corealg::novikov::{ContinuationError, FitError};

pub use batyrev::{batyrev_check, BatyrevReport};
pub use engine::{gw_invariant, EngineOptions, GwEngine, Insertion, ReductionVariant};
pub use pbeta::{one_point_local, p_beta, virtual_dimension};
pub use series::{
    admissible_d2, delta_h, delta_h_ratfn, n_point_series, transform_insertions,
    verify_flop_invariance, Divisor, FlopInvarianceReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QlocalError {
    #[error("recursion depth {depth} exceeded; the reduction is not terminating")]
    NonTermination { depth: usize },
    #[error("class lives in {0}, not in a flop model of the engine's rank")]
    WrongModel(ModelSpec),
    #[error("the curve class is zero")]
    ZeroDegree,
    #[error("z-order {z_order} keeps no coefficient; the expansion starts at z^-{leading}")]
    ZOrderTooSmall { z_order: u32, leading: u32 },
    #[error("no curve degree d2 >= 0 matches the insertion degrees")]
    NoAdmissibleD2,
    #[error("insertion {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
}
