use std::fmt;

use rug::{float::Constant, Complex, Float};

use super::number_theory::gcd;
use crate::error::{Error, Result};

/// A primitive `q`-th root of unity `z = e^{2πij/q}`.
///
/// `(q, j) = (1, 0)` encodes `z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    q: u64,
    j: u64,
}

impl RootOfUnity {
    pub fn new(q: u64, j: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("root of unity order must be positive".into()));
        }
        let j = j % q;
        if q >= 2 && gcd(j, q) != 1 {
            return Err(Error::NotPrimitiveRoot { q, j });
        }
        Ok(RootOfUnity { q, j })
    }

    pub const fn one() -> Self {
        RootOfUnity { q: 1, j: 0 }
    }

    pub const fn minus_one() -> Self {
        RootOfUnity { q: 2, j: 1 }
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn exponent(&self) -> u64 {
        self.j
    }

    pub fn is_one(&self) -> bool {
        self.q == 1
    }

    /// Integral part of `1/q`.
    pub fn delta(&self) -> u64 {
        u64::from(self.q == 1)
    }

    /// Exponent `t ∈ [0, q)` with `z^e = ζ_q^t`.
    pub fn power_index(&self, e: i64) -> u64 {
        let q = self.q as i128;
        ((self.j as i128 * e as i128).rem_euclid(q)) as u64
    }

    /// `z^e` as a primitive root of its own (possibly smaller) order.
    pub fn pow(&self, e: i64) -> RootOfUnity {
        let t = self.power_index(e);
        let g = gcd(t, self.q);
        if t == 0 {
            return RootOfUnity::one();
        }
        RootOfUnity {
            q: self.q / g,
            j: t / g,
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        unit_power(self.q, self.j, prec)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{}/{})", self.j, self.q)
    }
}

/// `e^{2πi t/q}` at `prec` bits, exact for the quarter turns.
pub(crate) fn unit_power(q: u64, t: u64, prec: u32) -> Complex {
    let t = t % q;
    if 4 * t == 0 {
        return Complex::with_val(prec, (1, 0));
    }
    if 4 * t == q {
        return Complex::with_val(prec, (0, 1));
    }
    if 2 * t == q {
        return Complex::with_val(prec, (-1, 0));
    }
    if 4 * t == 3 * q {
        return Complex::with_val(prec, (0, -1));
    }
    let mut angle = Float::with_val(prec + 8, Constant::Pi);
    angle *= 2 * t;
    angle /= q;
    let (s, c) = angle.sin_cos(Float::new(prec + 8));
    Complex::with_val(prec, (c, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RootOfUnity::new(4, 2).is_err());
        assert!(RootOfUnity::new(0, 0).is_err());
        assert_eq!(RootOfUnity::new(1, 0).unwrap(), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(6, 5).unwrap().delta(), 0);
        assert_eq!(RootOfUnity::one().delta(), 1);
    }

    #[test]
    fn powers_reduce_order() {
        let z = RootOfUnity::new(6, 1).unwrap();
        assert_eq!(z.pow(2), RootOfUnity::new(3, 1).unwrap());
        assert_eq!(z.pow(3), RootOfUnity::minus_one());
        assert_eq!(z.pow(6), RootOfUnity::one());
        assert_eq!(z.pow(-1), RootOfUnity::new(6, 5).unwrap());
    }
}
