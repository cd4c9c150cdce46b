//! Ramaswami/Apostol-type translation formulae for polylogarithms at roots of
//! unity, with the exact number theory they rest on.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact_arith`]: big rationals, roots of unity, cyclotomic fields, Möbius, binomials.
//! - [`special_sequences`]: Bernoulli numbers, generalised Euler polynomials, tangent
//!   numbers and the (root-of-unity weighted) power sums.
//! - [`analytic`]: multiprecision `Li_z(s)`, Lerch `φ(s,a,z)` and `ζ(s)`, including
//!   continuation to `Re(s) ≤ 1` by recursive use of the translation formula.
//! - [`identity`]: a closed catalog of translation identities with a residual verifier.
//! - [`exact_identities`]: Bernoulli/tangent recurrences, congruences and the
//!   odd-zeta series representation, checked in exact arithmetic.

pub mod analytic;
pub mod error;
pub mod exact_arith;
pub mod exact_identities;
pub mod identity;
pub mod special_sequences;

pub use analytic::{ComplexHP, EvalContext};
pub use error::{Error, Result};
pub use exact_arith::{BigInt, BigRational, CyclotomicNumber, RootOfUnity};
pub use identity::{IdentityId, IdentityInstance, ResidualReport};
