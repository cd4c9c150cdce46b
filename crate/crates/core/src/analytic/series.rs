use rug::{Complex, Float};

use super::complex::ComplexHP;

/// `P_m(s) = s(s+1)⋯(s+m−1)/m!`, built one step at a time.
#[derive(Clone, Debug)]
pub struct RisingFactor {
    pub m: u64,
    pub value: ComplexHP,
    s: Complex,
}

impl RisingFactor {
    pub fn new(s: &ComplexHP) -> Self {
        RisingFactor {
            m: 0,
            value: ComplexHP::from_complex(Complex::with_val(s.precision(), (1, 0))),
            s: s.as_complex().clone(),
        }
    }

    /// Advance to `P_{m+1}(s) = P_m(s)(s+m)/(m+1)`.
    pub fn advance(&mut self) -> &ComplexHP {
        let prec = self.value.precision();
        let mut v = self.value.as_complex().clone();
        v *= Complex::with_val(prec, &self.s + self.m);
        v /= self.m + 1;
        self.m += 1;
        self.value = ComplexHP::from_complex(v);
        &self.value
    }
}

pub fn rising_factor(s: &ComplexHP, m: u64) -> ComplexHP {
    let mut r = RisingFactor::new(s);
    for _ in 0..m {
        r.advance();
    }
    r.value
}

/// Incremental `P_m(s)` on raw values, used inside the series loops.
pub(crate) struct Rising {
    s: Complex,
    m: u64,
    value: Complex,
}

impl Rising {
    pub(crate) fn new(s: &Complex) -> Self {
        Rising {
            s: s.clone(),
            m: 0,
            value: Complex::with_val(s.prec(), (1, 0)),
        }
    }

    /// Moves to `P_{m+1}` and returns it.
    pub(crate) fn next_value(&mut self) -> &Complex {
        let prec = self.value.prec();
        self.value *= Complex::with_val(prec, &self.s + self.m);
        self.value /= self.m + 1;
        self.m += 1;
        &self.value
    }
}

/// `log2 |x|`, `-inf` at zero.
pub(crate) fn log2_abs(x: &Complex) -> f64 {
    let a = Float::with_val(53, x.abs_ref());
    log2_float(&a)
}

pub(crate) fn log2_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// Term-ratio stopping rule for the `m`-sums.
///
/// The asymptotic term ratio `r` is known from the weights; the cap is the
/// midpoint of `r` and 1. Three consecutive decreasing terms with ratios under
/// the cap let the remaining tail be bounded by `last · cap/(1 − cap)`.
#[derive(Clone, Debug)]
pub struct TailCertificate {
    cap: f64,
    target_log2: f64,
    prev: Option<f64>,
    streak: u32,
}

impl TailCertificate {
    /// `asymptotic_ratio` in `[0, 1)`; the tail must fall below `2^{target_log2}·max(1, |sum|)`.
    pub fn new(asymptotic_ratio: f64, target_log2: f64) -> Self {
        let r = asymptotic_ratio.clamp(0.0, 1.0 - 1e-9);
        TailCertificate {
            cap: r + (1.0 - r) / 2.0,
            target_log2,
            prev: None,
            streak: 0,
        }
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Feeds `log2 |term|` for a nonzero term and `log2 |partial sum|`; true once the tail is certified.
    pub fn accept(&mut self, term_log2: f64, sum_log2: f64) -> bool {
        if term_log2 == f64::NEG_INFINITY {
            return false;
        }
        if let Some(prev) = self.prev {
            let ratio_log2 = term_log2 - prev;
            if ratio_log2 < 0.0 && ratio_log2 < self.cap.log2() {
                self.streak += 1;
            } else {
                self.streak = 0;
            }
        }
        self.prev = Some(term_log2);
        if self.streak < 2 {
            return false;
        }
        let tail = term_log2 + (self.cap / (1.0 - self.cap)).log2();
        tail < self.target_log2 + sum_log2.max(0.0)
    }
}
