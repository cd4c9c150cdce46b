use std::collections::HashMap;

use rug::{Complex, Float};

use super::complex::MIN_PRECISION;
use crate::error::{Error, Result};
use crate::exact_arith::{CyclotomicNumber, RootOfUnity};
use crate::special_sequences::{weighted_power_sum_direct, BernoulliCache, EulerPolyTable, Sign};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_GUARD_BITS: u32 = 24;
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// log2 of the margin above `Re(s) = 1` that counts as inside the half-plane.
pub(crate) const MARGIN_LOG2: i32 = -8;

/// Evaluation settings plus the caches an evaluation fills as it goes.
///
/// A context is mutated by every evaluation; give each thread its own.
#[derive(Clone, Debug)]
pub struct EvalContext {
    precision: u32,
    guard_bits: u32,
    max_terms: usize,
    modulus_list: Option<Vec<u64>>,
    pub(crate) bernoulli: BernoulliCache,
    /// `B_{2j}/(2j)!` for `j ≥ 1`, at `em_prec` bits
    em_coeffs: Vec<Float>,
    em_prec: u32,
    /// `Σ_{h<k} z^{±h} h^m` keyed by `(q, j, k, m, plus)`
    weights: HashMap<(u64, u64, u64, u64, bool), CyclotomicNumber>,
    embedded: HashMap<(WeightKey, u32), Option<Complex>>,
    euler: HashMap<u64, EulerPolyTable>,
    /// per-root factors of the Euler-polynomial weights, keyed by `(q, j)`
    pub(crate) euler_factors: HashMap<(u64, u64), Vec<CyclotomicNumber>>,
}

impl Default for EvalContext {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION).expect("default precision is valid")
    }
}

impl EvalContext {
    pub fn new(precision: u32) -> Result<Self> {
        if precision < MIN_PRECISION {
            return Err(Error::Domain(format!(
                "precision {precision} below minimum {MIN_PRECISION}"
            )));
        }
        Ok(EvalContext {
            precision,
            guard_bits: DEFAULT_GUARD_BITS,
            max_terms: DEFAULT_MAX_TERMS,
            modulus_list: None,
            bernoulli: BernoulliCache::new(),
            em_coeffs: Vec::new(),
            em_prec: 0,
            weights: HashMap::new(),
            embedded: HashMap::new(),
            euler: HashMap::new(),
            euler_factors: HashMap::new(),
        })
    }

    pub fn with_guard_bits(mut self, g: u32) -> Self {
        self.guard_bits = g;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    /// Fallback moduli tried in order by the continuation engine.
    pub fn with_modulus_list(mut self, ks: Vec<u64>) -> Self {
        self.modulus_list = Some(ks);
        self
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn modulus_list(&self) -> Option<&[u64]> {
        self.modulus_list.as_deref()
    }

    /// `p + g`.
    pub fn working_precision(&self) -> u32 {
        self.precision + self.guard_bits
    }

    /// log2 of `2^{-p/4}`.
    pub fn degeneracy_threshold_log2(&self) -> f64 {
        -(self.precision as f64) / 4.0
    }

    pub fn degeneracy_threshold(&self) -> Float {
        let mut t = Float::with_val(64, 1);
        t >>= self.precision / 4;
        if !self.precision.is_multiple_of(4) {
            t /= Float::with_val(64, (self.precision % 4) as f64 / 4.0).exp2();
        }
        t
    }

    /// The moduli for primitive roots of order `q`: the override list if one
    /// was given, else the three smallest `k ≥ 2` with `k ≡ 1 (mod q)`.
    pub fn moduli_for(&self, q: u64) -> Result<Vec<u64>> {
        match &self.modulus_list {
            Some(ks) => {
                for &k in ks {
                    validate_modulus(k, q, "continuation")?;
                }
                if ks.is_empty() {
                    return Err(Error::Domain("modulus list is empty".into()));
                }
                Ok(ks.clone())
            }
            None => Ok(default_moduli(q)),
        }
    }

    /// `B_{2j}/(2j)!` for `j = 1..=count`, at `prec` bits or better.
    pub(crate) fn em_coefficients(&mut self, count: usize, prec: u32) -> &[Float] {
        if self.em_prec < prec {
            self.em_coeffs.clear();
            self.em_prec = prec;
        }
        if self.em_coeffs.len() < count {
            self.bernoulli.extend_to(2 * count);
            let mut fact = rug::Integer::from(1);
            for i in 1..=2 * self.em_coeffs.len() as u32 {
                fact *= i;
            }
            for j in self.em_coeffs.len() + 1..=count {
                let j2 = 2 * j as u32;
                fact *= (j2 - 1) * j2;
                let b = self.bernoulli.get(j2 as usize).expect("extended above");
                let c = rug::Rational::from(b / &fact);
                self.em_coeffs.push(Float::with_val(self.em_prec, &c));
            }
        }
        &self.em_coeffs[..count]
    }

    /// Exact `Σ_{h=1}^{k−1} z^{±h} h^m`.
    pub(crate) fn power_weight(&mut self, z: RootOfUnity, k: u64, m: u64, sign: Sign) -> &CyclotomicNumber {
        self.weights
            .entry((z.order(), z.exponent(), k, m, sign == Sign::Plus))
            .or_insert_with(|| weighted_power_sum_direct(z, k, m, sign))
    }

    /// Shared table of `E_{q,n}` for order `q ≥ 2`.
    pub(crate) fn euler_table(&mut self, q: u64) -> Result<&mut EulerPolyTable> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.euler.entry(q) {
            e.insert(EulerPolyTable::new(q)?);
        }
        Ok(self.euler.get_mut(&q).expect("inserted above"))
    }

    /// Embedding of an exact weight, memoised under `key` at `prec` bits.
    /// `None` when the weight is exactly zero.
    pub(crate) fn embedded_weight(
        &mut self,
        key: WeightKey,
        prec: u32,
        exact: impl FnOnce(&mut Self) -> CyclotomicNumber,
    ) -> Option<Complex> {
        if let Some(c) = self.embedded.get(&(key, prec)) {
            return c.clone();
        }
        let w = exact(self);
        let c = (!w.is_zero()).then(|| w.embed_complex(prec));
        self.embedded.insert((key, prec), c.clone());
        c
    }
}

/// Cache key for an embedded weight: a tag naming the weight family, then `(q, j, k, m)`.
pub(crate) type WeightKey = (&'static str, u64, u64, u64, u64);

/// The three smallest `k ≥ 2` with `k ≡ 1 (mod q)`.
pub fn default_moduli(q: u64) -> Vec<u64> {
    if q == 1 {
        vec![2, 3, 4]
    } else {
        vec![q + 1, 2 * q + 1, 3 * q + 1]
    }
}

/// Checks `k ≥ 2` and `k ≡ 1 (mod q)`.
pub fn validate_modulus(k: u64, q: u64, context: &str) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidModulus {
            k,
            context: context.into(),
            reason: "k must be at least 2".into(),
        });
    }
    if q == 0 || k % q != 1 % q {
        return Err(Error::InvalidModulus {
            k,
            context: context.into(),
            reason: format!("k must be congruent to 1 mod {q}"),
        });
    }
    Ok(())
}
