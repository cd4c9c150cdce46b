//! Multiprecision evaluation of `Li_z(s)`, `φ(s,a,z)` and `ζ(s)`.
//!
//! Complex powers of positive real bases always go through the real logarithm.

mod checks;
mod complex;
mod context;
mod continuation;
mod lerch;
mod series;

pub use checks::{lerch_multiplication_check, lerch_shift_check, taylor_expansion_check};
pub use complex::{format_float, ComplexHP, MIN_PRECISION};
pub use context::{
    default_moduli, validate_modulus, EvalContext, DEFAULT_GUARD_BITS, DEFAULT_MAX_TERMS,
    DEFAULT_PRECISION,
};
pub use continuation::{li_continue, li_continue_forced, zeta_continue, zeta_continue_with_route, ZetaRoute};
pub use lerch::{lerch_direct, li_direct, zeta_direct};
pub use series::{rising_factor, RisingFactor, TailCertificate};

pub(crate) use continuation::{ladder_depth, li_continue_raw, translation_sum, zeta_continue_raw, WeightBound};
pub(crate) use lerch::{int_pow_neg, lerch_raw, li_raw, LiLadder};
pub(crate) use series::log2_abs;
