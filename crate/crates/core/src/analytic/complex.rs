use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 16;

/// Multiprecision complex number with an explicit binary precision.
///
/// Binary operators produce a result at the smaller precision of the operands.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexHP {
    value: Complex,
}

impl ComplexHP {
    pub fn new(prec: u32, re: f64, im: f64) -> Self {
        assert!(prec >= MIN_PRECISION, "precision below {MIN_PRECISION} bits");
        ComplexHP {
            value: Complex::with_val(prec, (re, im)),
        }
    }

    pub fn from_complex(value: Complex) -> Self {
        let (pr, pi) = value.prec();
        assert!(pr.min(pi) >= MIN_PRECISION, "precision below {MIN_PRECISION} bits");
        if pr != pi {
            let p = pr.min(pi);
            return ComplexHP {
                value: Complex::with_val(p, value),
            };
        }
        ComplexHP { value }
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        Self::from_complex(Complex::with_val(prec, (r, 0)))
    }

    /// Parse `"RE,IM"` (decimal parts) or a bare real `"RE"`.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        if prec < MIN_PRECISION {
            return Err(Error::Domain(format!(
                "precision {prec} below minimum {MIN_PRECISION}"
            )));
        }
        let bad = || Error::Parse(format!("malformed complex value {text:?}, expected RE,IM"));
        let (re, im) = match text.split_once(',') {
            Some((r, i)) => (r.trim(), i.trim()),
            None => (text.trim(), "0"),
        };
        let re = Float::parse(re).map_err(|_| bad())?;
        let im = Float::parse(im).map_err(|_| bad())?;
        Ok(ComplexHP {
            value: Complex::with_val(prec, (re, im)),
        })
    }

    pub fn precision(&self) -> u32 {
        self.value.prec().0
    }

    pub fn as_complex(&self) -> &Complex {
        &self.value
    }

    pub fn into_complex(self) -> Complex {
        self.value
    }

    pub fn re(&self) -> &Float {
        self.value.real()
    }

    pub fn im(&self) -> &Float {
        self.value.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.precision(), self.value.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_complex(Complex::with_val(prec, &self.value))
    }

    /// Decimal strings for the real and imaginary parts, `digits` significant digits.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            format_float(self.value.real(), digits),
            format_float(self.value.imag(), digits),
        )
    }

    /// Significant decimal digits carried by the precision.
    pub fn decimal_digits(&self) -> usize {
        (self.precision() as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

/// Decimal rendering in scientific notation, zero printed as `0`.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

impl fmt::Display for ComplexHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_pair(self.decimal_digits());
        write!(f, "{re},{im}")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexHP> for &ComplexHP {
            type Output = ComplexHP;
            fn $method(self, rhs: &ComplexHP) -> ComplexHP {
                let p = self.precision().min(rhs.precision());
                ComplexHP { value: Complex::with_val(p, &self.value $op &rhs.value) }
            }
        }

        impl $tr<ComplexHP> for ComplexHP {
            type Output = ComplexHP;
            fn $method(self, rhs: ComplexHP) -> ComplexHP {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for ComplexHP {
    type Output = ComplexHP;
    fn neg(self) -> ComplexHP {
        ComplexHP { value: -self.value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_is_minimum_of_operands() {
        let a = ComplexHP::new(64, 1.0, 2.0);
        let b = ComplexHP::new(128, 3.0, -1.0);
        let c = &a * &b;
        assert_eq!(c.precision(), 64);
        assert_eq!((c.re_f64(), c.im_f64()), (5.0, 5.0));
        assert_eq!((&b - &b).abs_f64(), 0.0);
    }

    #[test]
    fn parse_pairs() {
        let s = ComplexHP::parse("2.5,-1", 80).unwrap();
        assert_eq!((s.re_f64(), s.im_f64()), (2.5, -1.0));
        assert_eq!(ComplexHP::parse("-3", 80).unwrap().im_f64(), 0.0);
        assert!(ComplexHP::parse("a,b", 80).is_err());
        assert!(ComplexHP::parse("1,1", 8).is_err());
    }
}
