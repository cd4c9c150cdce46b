//! Exact arithmetic in `Q(ζ_q)`.
//!
//! Elements are coordinate vectors in the power basis `1, ζ_q, …, ζ_q^{φ(q)−1}`,
//! always reduced modulo `Φ_q`, so equality is coordinate equality.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Integer, Rational};

use super::number_theory::totient;
use super::poly::{cyclotomic_polynomial, QPoly};
use super::root::{unit_power, RootOfUnity};
use crate::analytic::ComplexHP;
use crate::error::{Error, Result};

/// Per-order data shared by every element of `Q(ζ_q)`.
#[derive(Debug)]
struct Field {
    degree: usize,
    modulus: QPoly,
    /// Coordinates of `x^t mod Φ_q` for `t < max(q, 2·degree)`.
    powers: Vec<Vec<Integer>>,
}

impl Field {
    fn build(q: u64) -> Field {
        let phi = cyclotomic_polynomial(q);
        let degree = totient(q) as usize;
        let span = (q as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(span);
        let mut cur = vec![Integer::new(); degree];
        cur[0] = Integer::from(1);
        for _ in 0..span {
            powers.push(cur.clone());
            // multiply by x, then fold the overflow coefficient back with Φ_q (monic).
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, Integer::new());
            if top != 0 {
                for (i, c) in phi.0.iter().take(degree).enumerate() {
                    cur[i] -= Integer::from(&top * c);
                }
            }
        }
        Field {
            degree,
            modulus: phi.to_rational(),
            powers,
        }
    }
}

fn field(q: u64) -> Arc<Field> {
    static FIELDS: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = map.lock().expect("field cache poisoned").get(&q) {
        return f.clone();
    }
    // Build outside the lock; a racing builder produces the identical value.
    let built = Arc::new(Field::build(q));
    map.lock()
        .expect("field cache poisoned")
        .entry(q)
        .or_insert(built)
        .clone()
}

/// Element of the cyclotomic field `Q(ζ_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coords: Vec<Rational>,
}

/// Binary operation selector for [`cyclo_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        CyclotomicNumber {
            order,
            coords: vec![Rational::new(); totient(order) as usize],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::from(1))
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut c = Self::zero(order);
        c.coords[0] = r;
        c
    }

    /// Build from arbitrary coordinates, reducing modulo `Φ_q`.
    pub fn from_coords(order: u64, coords: Vec<Rational>) -> Self {
        let f = field(order);
        let mut out = Self::zero(order);
        for (t, c) in coords.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let idx = t % order as usize;
            for (i, p) in f.powers[idx].iter().enumerate() {
                if *p != 0 {
                    out.coords[i] += Rational::from(&c * p);
                }
            }
        }
        out
    }

    /// `ζ_q^t` in `Q(ζ_q)`.
    pub fn unit(order: u64, t: u64) -> Self {
        let f = field(order);
        let idx = (t % order) as usize;
        CyclotomicNumber {
            order,
            coords: f.powers[idx].iter().map(Rational::from).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(|c| *c == 0) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from(1));
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &Rational::from(-1));
        Ok(out)
    }

    /// `self += factor · other`; orders must agree.
    pub fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if *b != 0 {
                *a += Rational::from(b * factor);
            }
        }
    }

    /// `self += factor · ζ_q^t`.
    pub fn add_unit_scaled(&mut self, t: u64, factor: &Rational) {
        let f = field(self.order);
        let idx = (t % self.order) as usize;
        for (a, p) in self.coords.iter_mut().zip(&f.powers[idx]) {
            if *p != 0 {
                *a += Rational::from(factor * p);
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coords: self.coords.iter().map(|c| Rational::from(c * factor)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from(-1))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let f = field(self.order);
        let mut prod = vec![Rational::new(); 2 * f.degree - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if *b != 0 {
                    prod[i + j] += Rational::from(a * b);
                }
            }
        }
        let mut out = Self::zero(self.order);
        for (t, c) in prod.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, p) in f.powers[t].iter().enumerate() {
                if *p != 0 {
                    out.coords[i] += Rational::from(&c * p);
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo `Φ_q`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = field(self.order);
        let a = QPoly::trimmed(self.coords.clone());
        let inv = a
            .inverse_mod(&f.modulus)
            .ok_or_else(|| Error::Consistency("non-invertible element of a field".into()))?;
        let mut coords = inv.0;
        coords.resize(f.degree, Rational::new());
        Ok(CyclotomicNumber {
            order: self.order,
            coords,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        self.mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Complex value at `ζ_q = e^{2πi/q}`, precision `prec` bits.
    pub fn embed(&self, prec: u32) -> ComplexHP {
        ComplexHP::from_complex(self.embed_complex(prec))
    }

    pub(crate) fn embed_complex(&self, prec: u32) -> Complex {
        let wp = prec + 8;
        let mut acc = Complex::with_val(wp, 0);
        for (i, c) in self.coords.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let mut term = unit_power(self.order, i as u64, wp);
            term *= c;
            acc += term;
        }
        Complex::with_val(prec, acc)
    }
}

/// `ζ_q^{je mod q}` for `z = ζ_q^j`, reduced modulo `Φ_q`.
pub fn cyclo_from_power(z: RootOfUnity, e: i64) -> CyclotomicNumber {
    CyclotomicNumber::unit(z.order(), z.power_index(e))
}

pub fn cyclo_arith(
    a: &CyclotomicNumber,
    b: &CyclotomicNumber,
    op: CycloOp,
) -> Result<CyclotomicNumber> {
    match op {
        CycloOp::Add => a.add(b),
        CycloOp::Sub => a.sub(b),
        CycloOp::Mul => a.mul(b),
        CycloOp::Div => a.div(b),
    }
}

pub fn cyclo_embed(a: &CyclotomicNumber, precision: u32) -> ComplexHP {
    a.embed(precision)
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.order)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CyclotomicNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed cyclotomic number {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (order, rest) = inner.split_once(';').ok_or_else(bad)?;
        let order: u64 = order.trim().parse().map_err(|_| bad())?;
        if order == 0 {
            return Err(bad());
        }
        let coords = rest
            .split(',')
            .map(|c| super::parse_rational(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != totient(order) as usize {
            return Err(Error::Parse(format!(
                "expected {} coordinates for order {order}, got {}",
                totient(order),
                coords.len()
            )));
        }
        Ok(CyclotomicNumber { order, coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn elem(order: u64, c: &[i64]) -> CyclotomicNumber {
        CyclotomicNumber::from_coords(order, c.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn from_power_examples() {
        let z2 = RootOfUnity::new(2, 1).unwrap();
        assert_eq!(cyclo_from_power(z2, 1), elem(2, &[-1]));
        let z4 = RootOfUnity::new(4, 1).unwrap();
        assert_eq!(cyclo_from_power(z4, 2), elem(4, &[-1, 0]));
        let z3 = RootOfUnity::new(3, 1).unwrap();
        let w = cyclo_from_power(z3, 1);
        assert_eq!(w.coords(), &[q(0, 1), q(1, 1)]);
        assert_eq!(w.mul(&w).unwrap(), elem(3, &[-1, -1]));
    }

    #[test]
    fn arith_examples() {
        let z3 = RootOfUnity::new(3, 1).unwrap();
        let w = cyclo_from_power(z3, 1);
        let sum = CyclotomicNumber::one(3)
            .add(&w)
            .unwrap()
            .add(&cyclo_from_power(z3, 2))
            .unwrap();
        assert!(sum.is_zero());

        let i = cyclo_from_power(RootOfUnity::new(4, 1).unwrap(), 1);
        assert_eq!(cyclo_arith(&i, &i, CycloOp::Mul).unwrap(), elem(4, &[-1]));

        let d = w.sub(&CyclotomicNumber::one(3)).unwrap();
        assert_eq!(d.div(&d).unwrap(), CyclotomicNumber::one(3));
        assert_eq!(d.div(&CyclotomicNumber::zero(3)), Err(Error::DivisionByZero));
        assert!(matches!(
            d.add(&CyclotomicNumber::one(4)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn powers_of_roots_return_to_one() {
        for order in 1..=12u64 {
            for j in 0..order {
                let Ok(z) = RootOfUnity::new(order, j) else { continue };
                for e in 0..=(3 * order as i64) {
                    let w = cyclo_from_power(z, e);
                    assert_eq!(w.pow(order as u32), CyclotomicNumber::one(order));
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let p = 128;
        let m1 = elem(2, &[-1]).embed(p);
        assert_eq!(m1.re_f64(), -1.0);
        assert_eq!(m1.im_f64(), 0.0);
        let i = cyclo_from_power(RootOfUnity::new(4, 1).unwrap(), 1).embed(p);
        assert_eq!((i.re_f64(), i.im_f64()), (0.0, 1.0));

        // 1 + ζ_3 + ζ_3² built without reduction, then embedded
        let raw = CyclotomicNumber {
            order: 3,
            coords: vec![q(1, 1), q(1, 1)],
        };
        let z2 = CyclotomicNumber::unit(3, 2);
        let total = raw.add(&z2).unwrap();
        assert!(total.is_zero());
        let mut v = raw.embed_complex(p);
        v += z2.embed_complex(p);
        let bound = rug::Float::with_val(p, rug::Float::i_exp(1, -(p as i32 - 4)));
        assert!(*v.abs().real() < bound);
    }

    #[test]
    fn text_round_trip() {
        let a = CyclotomicNumber::from_coords(5, vec![q(1, 2), q(-3, 1), q(0, 1), q(7, 9)]);
        let s = a.to_string();
        assert_eq!(s, "[5; 1/2, -3, 0, 7/9]");
        assert_eq!(s.parse::<CyclotomicNumber>().unwrap(), a);
        assert!("[4; 1]".parse::<CyclotomicNumber>().is_err());
    }

    fn arb_elem(order: u64) -> impl Strategy<Value = CyclotomicNumber> {
        let deg = totient(order) as usize;
        proptest::collection::vec((-20i64..20, 1i64..6), deg).prop_map(move |v| {
            CyclotomicNumber::from_coords(order, v.into_iter().map(|(n, d)| q(n, d)).collect())
        })
    }

    fn order_and_pair() -> impl Strategy<Value = (CyclotomicNumber, CyclotomicNumber)> {
        (1u64..=12).prop_flat_map(|o| (arb_elem(o), arb_elem(o)))
    }

    proptest! {
        #[test]
        fn embedding_respects_products((a, b) in order_and_pair()) {
            let p = 96u32;
            let ab = a.mul(&b).unwrap().embed_complex(p);
            let ea = a.embed_complex(p);
            let eb = b.embed_complex(p);
            let prod = Complex::with_val(p, &ea * &eb);
            let diff = Complex::with_val(p, &ab - &prod).abs().real().to_f64();
            let na = 1.0 + ea.abs().real().to_f64();
            let nb = 1.0 + eb.abs().real().to_f64();
            prop_assert!(diff < 2f64.powi(-(p as i32 - 8)) * na * nb);
        }

        #[test]
        fn division_inverts_multiplication((a, b) in order_and_pair()) {
            prop_assume!(!b.is_zero());
            let back = a.mul(&b).unwrap().div(&b).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
