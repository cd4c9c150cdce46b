//! Dense univariate polynomials, just enough for cyclotomic fields.
//!
//! Coefficients are stored lowest degree first and trailing zeros are trimmed,
//! so the zero polynomial is the empty vector.

use rug::{Integer, Rational};

use super::number_theory::divisors;

/// Integer polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<Integer>);

impl IntPoly {
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![Integer::new(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        let mut p = IntPoly(out);
        p.trim();
        p
    }

    /// Exact quotient by a monic divisor; panics if `divisor` is not monic.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert_eq!(divisor.0[dd], 1, "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (IntPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![Integer::new(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone();
            if c != 0 {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[i + j] -= Integer::from(&c * d);
                }
            }
            quot[i] = c;
        }
        let mut q = IntPoly(quot);
        q.trim();
        let mut r = IntPoly(rem);
        r.trim();
        (q, r)
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| *c == 0) {
            self.0.pop();
        }
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly(self.0.iter().map(Rational::from).collect())
    }
}

/// `Φ_q`, obtained by dividing `x^q − 1` by `Φ_d` for every proper divisor `d` of `q`.
pub fn cyclotomic_polynomial(q: u64) -> IntPoly {
    assert!(q >= 1, "cyclotomic polynomial needs q >= 1");
    let mut num = vec![Integer::new(); q as usize + 1];
    num[0] = Integer::from(-1);
    num[q as usize] = Integer::from(1);
    let mut p = IntPoly(num);
    for d in divisors(q) {
        if d == q {
            continue;
        }
        let (quot, rem) = p.div_exact_monic(&cyclotomic_polynomial(d));
        debug_assert!(rem.0.is_empty());
        p = quot;
    }
    p
}

/// Rational polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Rational>);

impl QPoly {
    pub fn trimmed(mut v: Vec<Rational>) -> QPoly {
        while v.last().is_some_and(|c| *c == 0) {
            v.pop();
        }
        QPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rational::new(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        QPoly::trimmed(out)
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Rational::new(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        QPoly::trimmed(out)
    }

    pub fn divrem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (QPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = Rational::from(&rem[i + dd] / &lead);
            if c != 0 {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[i + j] -= Rational::from(&c * d);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (QPoly::trimmed(quot), QPoly::trimmed(rem))
    }

    /// Inverse of `self` modulo `modulus`, if `gcd(self, modulus) = 1`.
    pub fn inverse_mod(&self, modulus: &QPoly) -> Option<QPoly> {
        // Track s with s * self ≡ r (mod modulus).
        let (mut r0, mut r1) = (modulus.clone(), self.divrem(modulus).1);
        let (mut s0, mut s1) = (QPoly(Vec::new()), QPoly(vec![Rational::from(1)]));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.0[0].clone();
        let inv = QPoly(s0.0.into_iter().map(|x| x / &c).collect());
        Some(inv.divrem(modulus).1)
    }
}
