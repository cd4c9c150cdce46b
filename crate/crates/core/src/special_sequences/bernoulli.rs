use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact_arith::binomial;

/// Memoised Bernoulli numbers `B_0, B_1, …` with `B_1 = −1/2`.
///
/// Grows monotonically through `Σ_{j=0}^{n} C(n+1, j) B_j = 0`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: vec![Rational::from(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn number(&mut self, n: usize) -> &Rational {
        self.extend_to(n);
        &self.values[n]
    }

    /// Already computed value, if any.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let next = self.values.len();
            let value = self.compute(next);
            match next {
                1 => assert_eq!(value, Rational::from((-1, 2)), "B_1 must be -1/2"),
                m if m % 2 == 1 => assert_eq!(value, 0, "odd Bernoulli number B_{m} must vanish"),
                _ => {}
            }
            self.values.push(value);
        }
    }

    fn compute(&self, n: usize) -> Rational {
        let top = n as u64 + 1;
        let mut acc = Rational::new();
        // C(n+1, j), updated incrementally
        let mut c = Integer::from(1);
        for (j, b) in self.values.iter().enumerate().take(n) {
            if *b != 0 {
                acc += Rational::from(b * &c);
            }
            c *= top - j as u64;
            c.div_exact_u_mut(j as u32 + 1);
        }
        -acc / Rational::from(top)
    }
}

pub fn bernoulli_number(cache: &mut BernoulliCache, n: usize) -> Rational {
    cache.number(n).clone()
}

/// `B_n(x) = Σ_k C(n,k) B_k x^{n−k}`.
pub fn bernoulli_poly_value(cache: &mut BernoulliCache, n: usize, x: &Rational) -> Rational {
    cache.extend_to(n);
    // Horner in x over the coefficients C(n,k) B_k of x^{n-k}
    let mut acc = Rational::new();
    for k in 0..=n {
        acc *= x;
        let b = &cache.values[k];
        if *b != 0 {
            acc += Rational::from(b * binomial(n as u64, k as u64));
        }
    }
    acc
}

/// `Σ_{h=1}^{k−1} h^m = (B_{m+1}(k) − B_{m+1})/(m+1)`.
pub fn power_sum(cache: &mut BernoulliCache, k: u64, m: u64) -> Result<Rational> {
    if k == 0 || m == 0 {
        return Err(Error::Domain(format!("power_sum needs k, m >= 1 (got k={k}, m={m})")));
    }
    let n = m as usize + 1;
    let at_k = bernoulli_poly_value(cache, n, &Rational::from(k));
    let at_0 = cache.number(n).clone();
    Ok((at_k - at_0) / Rational::from(n as u64))
}

/// Tangent number `T_n = (−1)^n 2^{2n} (1 − 2^{2n}) B_{2n} / (2n)`.
pub fn tangent_number(cache: &mut BernoulliCache, n: u64) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Domain("tangent numbers start at n = 1".into()));
    }
    let two_n = 2 * n as u32;
    let pow = Integer::from(Integer::u_pow_u(2, two_n));
    let b = cache.number(two_n as usize).clone();
    let mut t = b * Rational::from(&pow * Integer::from(1 - &pow)) / Rational::from(two_n);
    if n % 2 == 1 {
        t = -t;
    }
    if *t.denom() != 1 {
        return Err(Error::Consistency(format!("tangent number T_{n} = {t} is not an integer")));
    }
    Ok(t.into_numer_denom().0)
}
