use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::analytic::{li_raw, EvalContext};
use crate::error::{Error, Result};
use crate::exact_arith::RootOfUnity;
use crate::identity::zeta_series_coefficient;

/// `x = Σ_{m≥1} c_m ζ(2m+1)`, first `M` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSeriesRep {
    pub target: Rational,
    /// `c_1, …, c_M`
    pub coefficients: Vec<Rational>,
}

impl ZSeriesRep {
    /// `c_m`, `m ≥ 1`.
    pub fn coefficient(&self, m: usize) -> Option<&Rational> {
        m.checked_sub(1).and_then(|i| self.coefficients.get(i))
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    /// `|16x/3|·(M+1)·(4/9)^M`, a bound on the omitted tail.
    pub fn envelope(&self, prec: u32) -> Float {
        let m = self.terms() as u32;
        let scale = Float::with_val(prec, Rational::from(&self.target * 16u32) / 3u32).abs();
        let ratio = Float::with_val(prec, Rational::from((4, 9)));
        scale * (m + 1) * ratio.pow(m)
    }
}

/// `c_m = (−16x/3)·m(2^{2m−1}−1)(2^{−2m}−1)/3^{2m+1}`.
pub fn zseries_representation(x: &Rational, terms: usize) -> Result<ZSeriesRep> {
    if terms == 0 {
        return Err(Error::Domain("a zeta series needs at least one term".into()));
    }
    let scale = Rational::from(x * -16i32) / 3u32;
    let coefficients = (1..=terms as u64)
        .map(|m| Rational::from(&scale * &zeta_series_coefficient(m)))
        .collect();
    Ok(ZSeriesRep {
        target: x.clone(),
        coefficients,
    })
}

/// Numeric comparison of a partial sum with its target.
#[derive(Clone, Debug)]
pub struct ZSeriesCheck {
    pub partial_sum: Float,
    /// `|x − Σ_{m≤M} c_m ζ(2m+1)|`
    pub error: Float,
    pub envelope: Float,
    pub pass: bool,
}

/// Sums the representation with `ζ(2m+1)` at the working precision.
pub fn zseries_check(rep: &ZSeriesRep, ctx: &mut EvalContext) -> Result<ZSeriesCheck> {
    let wp = ctx.working_precision();
    let mut sum = Float::new(wp);
    for (i, c) in rep.coefficients.iter().enumerate() {
        if c.cmp0().is_eq() {
            continue;
        }
        let s = Complex::with_val(wp, (2 * i as u32 + 3, 0));
        let zeta = li_raw(&s, RootOfUnity::one(), wp, ctx)?;
        sum += Float::with_val(wp, zeta.real() * c);
    }
    let error = Float::with_val(wp, &sum - &rep.target).abs();
    let envelope = rep.envelope(wp);
    let pass = error < envelope || error.is_zero();
    Ok(ZSeriesCheck {
        partial_sum: sum,
        error,
        envelope,
        pass,
    })
}
