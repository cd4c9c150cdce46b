//! The catalog of translation identities and a residual verifier.
//!
//! Every identity is evaluated as a pair of independently computed sides. The
//! right-hand `m`-sums share the stopping rule of the continuation code.

mod catalog;
mod eval;
mod verify;

pub use catalog::{default_grid, instantiate, list_identities, valid_params, IdentityId, IdentityInstance};
pub use eval::{eval_sides, eval_sides_in, rhs_term, rhs_weight, EvalMode};
pub use verify::{
    sample_continued_points, sample_points, verify, verify_all, verify_in, verify_sampled, PointResidual,
    ResidualReport, DEFAULT_POINTS,
};

pub(crate) use eval::zeta_series_coefficient;
