//! Exact integer, rational and cyclotomic arithmetic.
//!
//! Rationals are GMP rationals, which are canonical (reduced, positive
//! denominator) after every operation. They print as `p/q`, or `p` when `q = 1`.

mod cyclotomic;
mod number_theory;
mod poly;
mod root;

pub use cyclotomic::{cyclo_arith, cyclo_embed, cyclo_from_power, CycloOp, CyclotomicNumber};
pub use number_theory::{binomial, divisors, gcd, mobius, totient};
pub use poly::{cyclotomic_polynomial, IntPoly, QPoly};
pub use root::RootOfUnity;

pub(crate) use root::unit_power;

pub use rug::Integer as BigInt;
pub use rug::Rational as BigRational;

use crate::error::{Error, Result};

/// Parse `"p/q"` or `"p"`; the result is canonical.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad_rational(text))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad_rational(text))?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            BigRational::from((n, d))
        }
        None => BigRational::from(t.parse::<BigInt>().map_err(|_| bad_rational(text))?),
    };
    Ok(parsed)
}

fn bad_rational(text: &str) -> Error {
    Error::Parse(format!("malformed rational {text:?}"))
}
