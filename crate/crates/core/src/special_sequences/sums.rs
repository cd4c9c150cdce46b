//! Power sums weighted by roots of unity, alternating signs, or coprimality.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::euler::EulerPolyTable;
use crate::error::{Error, Result};
use crate::exact_arith::{cyclo_from_power, gcd, CyclotomicNumber, RootOfUnity};

/// Orientation of the root-of-unity weight `z^{±h}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `Σ_{h ∈ range} z^{±h} h^m` over the given `h`, exactly in `Q(ζ_q)`.
fn weighted_sum<I: IntoIterator<Item = u64>>(
    z: RootOfUnity,
    hs: I,
    m: u64,
    sign: Sign,
) -> CyclotomicNumber {
    let q = z.order();
    // gather integer weights per residue of the exponent before reducing mod Φ_q
    let mut raw = vec![Integer::new(); q as usize];
    for h in hs {
        let t = z.power_index(sign.value() * h as i64) as usize;
        raw[t] += Integer::from(h).pow(m as u32);
    }
    CyclotomicNumber::from_coords(q, raw.into_iter().map(Rational::from).collect())
}

/// `Σ_{h=1}^{k−1} z^{±h} h^m` by direct summation.
pub fn weighted_power_sum_direct(z: RootOfUnity, k: u64, m: u64, sign: Sign) -> CyclotomicNumber {
    weighted_sum(z, 1..k, m, sign)
}

/// `Σ_{h=1}^{k−1} z^h h^m` through the generalised Euler polynomials:
/// `(1/q) Σ_{j=1}^{q−1} z(z^j − 1)/(z − 1) · (E_{q,m}(j) − z^{k−1} E_{q,m}(k+j−1))`.
///
/// `table` must have the same order as `z`.
pub fn weighted_power_sum_closed(
    table: &mut EulerPolyTable,
    z: RootOfUnity,
    k: u64,
    m: u64,
) -> Result<CyclotomicNumber> {
    let q = z.order();
    if q < 2 {
        return Err(Error::Domain(
            "closed form needs z != 1; use power_sum for z = 1".into(),
        ));
    }
    if table.order() != q {
        return Err(Error::OrderMismatch {
            left: table.order(),
            right: q,
        });
    }
    if k == 0 || m == 0 {
        return Err(Error::Domain(format!("closed form needs k, m >= 1 (got k={k}, m={m})")));
    }
    let one = CyclotomicNumber::one(q);
    let zc = cyclo_from_power(z, 1);
    let inv_den = zc.sub(&one)?.inverse()?;
    let z_km1 = cyclo_from_power(z, k as i64 - 1);
    let mut acc = CyclotomicNumber::zero(q);
    for j in 1..q {
        let geom = zc.mul(&cyclo_from_power(z, j as i64).sub(&one)?)?.mul(&inv_den)?;
        let e_lo = table.value(m as usize, &Rational::from(j));
        let e_hi = table.value(m as usize, &Rational::from(k + j - 1));
        let mut inner = CyclotomicNumber::from_rational(q, e_lo);
        inner.add_scaled(&z_km1, &(-e_hi));
        acc = acc.add(&geom.mul(&inner)?)?;
    }
    Ok(acc.scale(&Rational::from((1, q))))
}

/// `T(m, k) = Σ_{h=1}^{k−1} (−1)^h h^m`.
pub fn alt_power_sum(m: u64, k: u64) -> Rational {
    let mut acc = Integer::new();
    for h in 1..k {
        let p = Integer::from(h).pow(m as u32);
        if h % 2 == 1 {
            acc -= p;
        } else {
            acc += p;
        }
    }
    Rational::from(acc)
}

/// `Σ z^{±h} h^m` over `1 ≤ h ≤ k` (or `2h ≤ k` when `half`) with `gcd(h, k) = 1`.
pub fn coprime_weighted_sum(
    z: RootOfUnity,
    k: u64,
    m: u64,
    sign: Sign,
    half: bool,
) -> CyclotomicNumber {
    let top = if half { k / 2 } else { k };
    weighted_sum(z, (1..=top).filter(|&h| gcd(h, k) == 1), m, sign)
}

/// `φ(m, k) = Σ_{1 ≤ h ≤ k/2, (h,k)=1} h^m`.
pub fn apostol_phi(m: u64, k: u64) -> Result<Rational> {
    if k <= 2 {
        return Err(Error::Domain(format!("apostol_phi needs k > 2 (got {k})")));
    }
    let s = coprime_weighted_sum(RootOfUnity::one(), k, m, Sign::Plus, true);
    Ok(s.to_rational().expect("z = 1 sums are rational"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_sequences::power_sum;
    use crate::special_sequences::BernoulliCache;

    fn root(q: u64, j: u64) -> RootOfUnity {
        RootOfUnity::new(q, j).unwrap()
    }

    fn rat(c: &CyclotomicNumber) -> Rational {
        c.to_rational().unwrap()
    }

    #[test]
    fn direct_examples() {
        let m1 = RootOfUnity::minus_one();
        assert_eq!(rat(&weighted_power_sum_direct(m1, 3, 1, Sign::Plus)), 1);
        assert!(weighted_power_sum_direct(root(4, 1), 5, 0, Sign::Plus).is_zero());
        let mut c = BernoulliCache::new();
        assert_eq!(
            rat(&weighted_power_sum_direct(RootOfUnity::one(), 4, 2, Sign::Plus)),
            power_sum(&mut c, 4, 2).unwrap()
        );
        assert_eq!(rat(&weighted_power_sum_direct(RootOfUnity::one(), 4, 2, Sign::Plus)), 14);
    }

    #[test]
    fn closed_examples() {
        let m1 = RootOfUnity::minus_one();
        let mut t2 = EulerPolyTable::new(2).unwrap();
        assert_eq!(rat(&weighted_power_sum_closed(&mut t2, m1, 3, 1).unwrap()), 1);
        assert_eq!(rat(&weighted_power_sum_closed(&mut t2, m1, 2, 1).unwrap()), -1);

        let w = root(3, 1);
        let mut t3 = EulerPolyTable::new(3).unwrap();
        let got = weighted_power_sum_closed(&mut t3, w, 4, 1).unwrap();
        assert_eq!(got.coords(), &[Rational::from(1), Rational::from(-1)]);

        assert!(weighted_power_sum_closed(&mut t2, RootOfUnity::one(), 3, 1).is_err());
        assert!(weighted_power_sum_closed(&mut t2, w, 3, 1).is_err());
    }

    #[test]
    fn closed_form_equals_direct_for_every_k() {
        // the closed form holds for all k >= 1, not only k ≡ 1 (mod q)
        for q in 2..=6u64 {
            let mut t = EulerPolyTable::new(q).unwrap();
            for j in (1..q).filter(|&j| gcd(j, q) == 1) {
                let z = root(q, j);
                for k in 1..=2 * q + 3 {
                    for m in 1..=6 {
                        assert_eq!(
                            weighted_power_sum_closed(&mut t, z, k, m).unwrap(),
                            weighted_power_sum_direct(z, k, m, Sign::Plus),
                            "q={q} j={j} k={k} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn alternating_sums() {
        assert_eq!(alt_power_sum(0, 7), 0);
        assert_eq!(alt_power_sum(2, 3), 3);
        assert_eq!(alt_power_sum(1, 5), 2);
        for m in 0..=30u32 {
            let expected = Integer::from(Integer::u_pow_u(2, m)) - 1;
            assert_eq!(alt_power_sum(m as u64, 3), expected, "m={m}");
        }
        // T(m, k) is the q = 2 weighted sum
        for k in (3..20).step_by(2) {
            for m in 0..10 {
                let w = weighted_power_sum_direct(RootOfUnity::minus_one(), k, m, Sign::Plus);
                assert_eq!(rat(&w), alt_power_sum(m, k));
            }
        }
    }

    #[test]
    fn coprime_sums_and_phi() {
        let one = RootOfUnity::one();
        assert_eq!(rat(&coprime_weighted_sum(one, 3, 1, Sign::Plus, false)), 3);
        assert_eq!(rat(&coprime_weighted_sum(one, 3, 5, Sign::Plus, true)), 1);
        assert_eq!(rat(&coprime_weighted_sum(one, 6, 0, Sign::Plus, true)), 1);
        assert_eq!(apostol_phi(7, 3).unwrap(), 1);
        assert_eq!(apostol_phi(1, 5).unwrap(), 3);
        assert_eq!(apostol_phi(0, 6).unwrap(), 1);
        assert!(apostol_phi(1, 2).is_err());
    }
}
