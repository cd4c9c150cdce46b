use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::binomial;
use crate::special_sequences::{alt_power_sum, BernoulliCache};

/// `Li_{−1}(−n)`: `B_1` at `n = 0`, else `(1 − 2^{n+1}) B_{n+1}/(n+1)`.
pub fn li_minus1_neg(cache: &mut BernoulliCache, n: u64) -> Rational {
    let b = cache.number(n as usize + 1).clone();
    if n == 0 {
        return b;
    }
    let factor = Integer::from(1) - Integer::from(Integer::u_pow_u(2, n as u32 + 1));
    b * factor / (n + 1)
}

/// `T(m, k) = Σ_{h=1}^{k−1} (−1)^h h^m`, summed term by term.
pub fn t_sum(m: u64, k: u64) -> Rational {
    alt_power_sum(m, k)
}

fn check_odd_modulus(k: u64) -> Result<()> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidModulus {
            k,
            context: "alternating recurrences".into(),
            reason: "k must be odd and at least 3".into(),
        });
    }
    Ok(())
}

fn check_positive(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("recurrences are indexed from n = 1".into()));
    }
    Ok(())
}

fn pow(base: u64, e: u64) -> Rational {
    Rational::from(Integer::from(Integer::u_pow_u(base as u32, e as u32)))
}

fn binom(n: u64, k: u64) -> Rational {
    Rational::from(binomial(n, k))
}

/// `B_{2i}/(2i)`.
fn b_over(cache: &mut BernoulliCache, i: u64) -> Rational {
    cache.number(2 * i as usize).clone() / (2 * i)
}

/// The translation identity at `s = −2n`, with `Li_{−1}` at negative integers
/// written through Bernoulli numbers: the left side minus the (zero) right side.
pub fn negint_even(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<Rational> {
    check_positive(n)?;
    check_odd_modulus(k)?;
    let mut acc = t_sum(2 * n, k);
    for m in 1..=n {
        let li = li_minus1_neg(cache, 2 * n - 2 * m + 1);
        acc += Rational::from(2) * binom(2 * n, 2 * m - 1) * li * pow(k, 2 * n - 2 * m + 1) * t_sum(2 * m - 1, k);
    }
    Ok(acc)
}

/// The translation identity at `s = 1 − 2n`: left side minus right side.
pub fn negint_odd(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<Rational> {
    check_positive(n)?;
    check_odd_modulus(k)?;
    let lhs = Rational::from(2) * li_minus1_neg(cache, 2 * n - 1) * (Rational::from(1) - pow(k, 2 * n - 1));
    let mut rhs = t_sum(2 * n - 1, k);
    for m in 1..n {
        let li = li_minus1_neg(cache, 2 * n - 1 - 2 * m);
        rhs += Rational::from(2) * binom(2 * n - 1, 2 * m) * li * pow(k, 2 * n - 1 - 2 * m) * t_sum(2 * m, k);
    }
    Ok(lhs - rhs)
}

/// Both negative-integer specializations vanish exactly.
pub fn check_negint_specializations(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<bool> {
    Ok(negint_even(cache, n, k)?.cmp0().is_eq() && negint_odd(cache, n, k)?.cmp0().is_eq())
}

/// `T(2n,k) − 2Σ_{i=1}^{n} C(2n,2i−1)(B_{2i}/2i)(2^{2i}−1)k^{2i−1}T(2n−2i+1,k)`.
pub fn bernoulli_recurrence_a(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<Rational> {
    check_positive(n)?;
    check_odd_modulus(k)?;
    let mut rhs = Rational::new();
    for i in 1..=n {
        rhs += binom(2 * n, 2 * i - 1)
            * b_over(cache, i)
            * (pow(2, 2 * i) - 1u32)
            * pow(k, 2 * i - 1)
            * t_sum(2 * n - 2 * i + 1, k);
    }
    Ok(t_sum(2 * n, k) - rhs * 2u32)
}

/// `(1−2^{2n})(1−k^{2n−1})B_{2n}/2n − T(2n−1,k)/2
///   − Σ_{i=1}^{n−1} C(2n−1,2i−1)(B_{2i}/2i)k^{2i−1}(1−2^{2i})T(2n−2i,k)`.
pub fn bernoulli_recurrence_b(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<Rational> {
    check_positive(n)?;
    check_odd_modulus(k)?;
    let lhs = (Rational::from(1) - pow(2, 2 * n)) * (Rational::from(1) - pow(k, 2 * n - 1)) * b_over(cache, n);
    let mut rhs = t_sum(2 * n - 1, k) / 2u32;
    for i in 1..n {
        rhs += binom(2 * n - 1, 2 * i - 1)
            * b_over(cache, i)
            * pow(k, 2 * i - 1)
            * (Rational::from(1) - pow(2, 2 * i))
            * t_sum(2 * n - 2 * i, k);
    }
    Ok(lhs - rhs)
}

/// Both Bernoulli recurrences hold exactly at `(n, k)`.
pub fn check_bernoulli_recurrences(cache: &mut BernoulliCache, n: u64, k: u64) -> Result<bool> {
    Ok(bernoulli_recurrence_a(cache, n, k)?.cmp0().is_eq() && bernoulli_recurrence_b(cache, n, k)?.cmp0().is_eq())
}

/// The `k = 3` form scaled by `3^{2n−1}`: left minus right of
/// `B_{2n}(2^{2n}−1)3^{2n−1} = (2^{2n}−1)/2 + Σ_{i<n} C(2n,2i−1)(B_{2i}/2i)(1−2^{2i})3^{2i−1}(2^{2n−2i+1}−1)`.
pub fn k3_recurrence_a(cache: &mut BernoulliCache, n: u64) -> Result<Rational> {
    check_positive(n)?;
    let lhs = cache.number(2 * n as usize).clone() * (pow(2, 2 * n) - 1u32) * pow(3, 2 * n - 1);
    let mut rhs = (pow(2, 2 * n) - 1u32) / 2u32;
    for i in 1..n {
        rhs += binom(2 * n, 2 * i - 1)
            * b_over(cache, i)
            * (Rational::from(1) - pow(2, 2 * i))
            * pow(3, 2 * i - 1)
            * (pow(2, 2 * n - 2 * i + 1) - 1u32);
    }
    Ok(lhs - rhs)
}

/// The `k = 3` form with the factor `(1−2^{2n})(1−3^{2n−1})`: left minus right of
/// `(1−2^{2n})(1−3^{2n−1})B_{2n}/2n = (2^{2n−1}−1)/2 + Σ_{i<n} C(2n−1,2i−1)(B_{2i}/2i)3^{2i−1}(1−2^{2i})(2^{2n−2i}−1)`.
pub fn k3_recurrence_b(cache: &mut BernoulliCache, n: u64) -> Result<Rational> {
    check_positive(n)?;
    let lhs = (Rational::from(1) - pow(2, 2 * n)) * (Rational::from(1) - pow(3, 2 * n - 1)) * b_over(cache, n);
    let mut rhs = (pow(2, 2 * n - 1) - 1u32) / 2u32;
    for i in 1..n {
        rhs += binom(2 * n - 1, 2 * i - 1)
            * b_over(cache, i)
            * pow(3, 2 * i - 1)
            * (Rational::from(1) - pow(2, 2 * i))
            * (pow(2, 2 * n - 2 * i) - 1u32);
    }
    Ok(lhs - rhs)
}

/// Both `k = 3` recurrences hold exactly at `n`.
pub fn check_k3_recurrences(cache: &mut BernoulliCache, n: u64) -> Result<bool> {
    Ok(k3_recurrence_a(cache, n)?.cmp0().is_eq() && k3_recurrence_b(cache, n)?.cmp0().is_eq())
}

/// Which family of exact checks to scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecurrenceKind {
    /// both Bernoulli recurrences for a given odd `k`
    Thm41,
    /// both `k = 3` recurrences
    K3,
    /// both negative-integer specializations for a given odd `k`
    Negint,
    /// tangent numbers from the `k = 3` recurrence
    Tangent3,
    /// tangent numbers from the `k = 5` recurrence
    Tangent5,
}

impl RecurrenceKind {
    pub const ALL: [RecurrenceKind; 5] = [
        RecurrenceKind::Thm41,
        RecurrenceKind::K3,
        RecurrenceKind::Negint,
        RecurrenceKind::Tangent3,
        RecurrenceKind::Tangent5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecurrenceKind::Thm41 => "thm41",
            RecurrenceKind::K3 => "k3",
            RecurrenceKind::Negint => "negint",
            RecurrenceKind::Tangent3 => "tangent3",
            RecurrenceKind::Tangent5 => "tangent5",
        }
    }

    /// Whether the family takes a modulus `k`.
    pub fn uses_k(self) -> bool {
        matches!(self, RecurrenceKind::Thm41 | RecurrenceKind::Negint)
    }
}

impl std::str::FromStr for RecurrenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RecurrenceKind::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown recurrence '{s}' (expected thm41, k3, negint, tangent3 or tangent5)")))
    }
}

/// Outcome of one exact check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceRow {
    pub n: u64,
    pub k: Option<u64>,
    pub pass: bool,
}

/// Runs one family for `1 ≤ n ≤ n_max`.
pub fn recurrence_scan(kind: RecurrenceKind, n_max: u64, k: u64) -> Result<Vec<RecurrenceRow>> {
    use super::tangent::{tangent_via_recurrence, TangentVariant};
    use crate::special_sequences::tangent_number;

    if kind.uses_k() {
        check_odd_modulus(k)?;
    }
    let mut cache = BernoulliCache::new();
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let pass = match kind {
            RecurrenceKind::Thm41 => check_bernoulli_recurrences(&mut cache, n, k)?,
            RecurrenceKind::K3 => check_k3_recurrences(&mut cache, n)?,
            RecurrenceKind::Negint => check_negint_specializations(&mut cache, n, k)?,
            RecurrenceKind::Tangent3 | RecurrenceKind::Tangent5 => {
                let variant = if kind == RecurrenceKind::Tangent3 {
                    TangentVariant::Mod3
                } else {
                    TangentVariant::Mod5
                };
                let mut expected = tangent_number(&mut cache, n)?;
                if n % 2 == 1 {
                    expected = -expected;
                }
                tangent_via_recurrence(n, variant)? == expected
            }
        };
        rows.push(RecurrenceRow {
            n,
            k: kind.uses_k().then_some(k),
            pass,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn li_minus1_small_values() {
        let mut c = BernoulliCache::new();
        assert_eq!(li_minus1_neg(&mut c, 0), r(-1, 2));
        assert_eq!(li_minus1_neg(&mut c, 1), r(-1, 4));
        assert_eq!(li_minus1_neg(&mut c, 2), r(0, 1));
        // (1 − 16)·B_4/4 = −15·(−1/30)/4
        assert_eq!(li_minus1_neg(&mut c, 3), r(1, 8));
    }

    #[test]
    fn li_minus1_matches_continuation() {
        use crate::analytic::{li_continue, ComplexHP, EvalContext};
        use crate::exact_arith::RootOfUnity;
        use rug::Float;
        let mut c = BernoulliCache::new();
        let mut ctx = EvalContext::default();
        let tol = Float::with_val(64, Float::i_exp(1, -104));
        for n in 0..=20u64 {
            let v = li_continue(&ComplexHP::new(128, -(n as f64), 0.0), RootOfUnity::minus_one(), &mut ctx).unwrap();
            let exact = li_minus1_neg(&mut c, n);
            let d = Float::with_val(200, v.as_complex().real() - &exact).abs();
            let scale = Float::with_val(200, exact.clone().abs()).max(&Float::with_val(200, 1));
            assert!(d / scale < tol, "n={n}");
            assert!(v.as_complex().imag().is_zero() || Float::with_val(64, v.as_complex().imag().abs_ref()) < tol);
        }
    }

    #[test]
    fn t_sum_at_three() {
        for m in 0..20 {
            assert_eq!(t_sum(m, 3), Rational::from(Integer::from(Integer::u_pow_u(2, m as u32)) - 1u32));
        }
    }

    #[test]
    fn hand_checked_first_cases() {
        let mut c = BernoulliCache::new();
        assert_eq!(t_sum(2, 3), 3);
        assert!(check_negint_specializations(&mut c, 1, 3).unwrap());
        assert!(check_negint_specializations(&mut c, 1, 5).unwrap());
        assert!(check_negint_specializations(&mut c, 10, 9).unwrap());
        assert!(check_bernoulli_recurrences(&mut c, 1, 3).unwrap());
        assert!(check_bernoulli_recurrences(&mut c, 1, 5).unwrap());
        assert!(check_bernoulli_recurrences(&mut c, 30, 7).unwrap());
        for n in [1, 2, 25] {
            assert!(check_k3_recurrences(&mut c, n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn even_or_small_modulus_is_rejected() {
        let mut c = BernoulliCache::new();
        for k in [1u64, 2, 4, 10] {
            assert!(matches!(check_negint_specializations(&mut c, 1, k), Err(Error::InvalidModulus { .. })));
            assert!(matches!(check_bernoulli_recurrences(&mut c, 1, k), Err(Error::InvalidModulus { .. })));
        }
        assert!(check_k3_recurrences(&mut c, 0).is_err());
    }

    #[test]
    fn scan_reports_rows() {
        let rows = recurrence_scan(RecurrenceKind::Thm41, 6, 5).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.pass && r.k == Some(5)));
        let rows = recurrence_scan(RecurrenceKind::Tangent5, 8, 0).unwrap();
        assert!(rows.iter().all(|r| r.pass && r.k.is_none()));
        assert!(recurrence_scan(RecurrenceKind::Negint, 3, 4).is_err());
        assert_eq!("k3".parse::<RecurrenceKind>().unwrap(), RecurrenceKind::K3);
        assert!("thm42".parse::<RecurrenceKind>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn all_families_hold(n in 1u64..16, half in 1u64..7) {
            let k = 2 * half + 1;
            let mut c = BernoulliCache::new();
            prop_assert!(check_negint_specializations(&mut c, n, k).unwrap());
            prop_assert!(check_bernoulli_recurrences(&mut c, n, k).unwrap());
            prop_assert!(check_k3_recurrences(&mut c, n).unwrap());
        }
    }
}
