//! Continuation of `Li_z(s)` and `ζ(s)` to the left of `Re(s) = 1`.
//!
//! Values on the ladder `s + j`, `j ≥ d`, come from the half-plane sums. The
//! levels `j = d−1, …, 0` are solved one at a time from the translation
//! formula
//!
//! `Li_z(s')(1 − k^{δ−s'}) = Σ_{m≥1} P_m(s') Li_z(s'+m) k^{-(s'+m)} Σ_{h<k} z^{-h} h^m`.
//!
//! Where `1 − k^{δ−s'}` vanishes, the subtracted form
//!
//! `0 = Σ_{h<k} z^h h^{-t} + Σ_{m≥1} P_m(t) Li_z(t+m) k^{-(t+m)} Σ_{h<k} (z^h(−1)^m − z^{-h}) h^m`
//!
//! at `t = s' − 1` is solved for its `m = 1` term instead, then the next modulus is tried.

use rug::{Complex, Float};

use super::complex::ComplexHP;
use super::context::EvalContext;
use super::lerch::{check_half_plane, int_pow_neg, li_raw, LiLadder};
use super::series::{log2_abs, Rising, TailCertificate};
use crate::error::{Error, Result};
use crate::exact_arith::{unit_power, RootOfUnity};
use crate::special_sequences::Sign;

/// Result of a translation-type `m`-sum.
pub(crate) struct SeriesOutcome {
    pub(crate) value: Complex,
    /// log2 of the estimated absolute error: rounding, propagated input error and the tail
    pub(crate) error_log2: f64,
}

/// `log2(2^a + 2^b)`.
pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Bound `|w_m| ≤ total · base^m` on the weights of an `m`-sum.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WeightBound {
    /// sum of the absolute coefficients in front of the `h^m`
    pub(crate) total: f64,
    /// largest `h`
    pub(crate) base: u64,
}

impl WeightBound {
    pub(crate) fn new(total: f64, base: u64) -> Self {
        WeightBound { total, base }
    }

    fn log2_at(&self, m: u64) -> f64 {
        self.total.log2() + m as f64 * (self.base as f64).log2()
    }
}

/// `Σ_{m≥m0} P_m(s) L(m) k^{-(s+m)} w_m` under the tail certificate.
///
/// `weight` returns `None` for exactly vanishing weights; those terms are skipped.
/// `lval` returns `L(m)` with log2 of its absolute error.
/// The certificate runs on the envelope `|P_m(s) L(m) k^{-(s+m)}|·total·base^m`
/// rather than on the terms, whose weights may cancel at alternate `m`.
/// Terms before `certify_from` do not feed the stopping rule, since their `L(m)`
/// need not be near the asymptotic size.
/// A vanishing `P_m(s)` ends the sum, since every later one vanishes too.
#[allow(clippy::too_many_arguments)]
pub(crate) fn translation_sum<W, L>(
    s: &Complex,
    k: u64,
    m0: u64,
    certify_from: u64,
    bound: WeightBound,
    prec: u32,
    ctx: &mut EvalContext,
    mut weight: W,
    mut lval: L,
) -> Result<SeriesOutcome>
where
    W: FnMut(&mut EvalContext, u64) -> Option<Complex>,
    L: FnMut(&mut EvalContext, u64) -> Result<(Complex, f64)>,
{
    let s = Complex::with_val(prec, s);
    let mut rising = Rising::new(&s);
    let mut p_m = Complex::with_val(prec, (1, 0));
    for _ in 0..m0 {
        p_m = rising.next_value().clone();
    }
    let mut k_pow = int_pow_neg(k, &Complex::with_val(prec, &s + m0), prec);
    let ratio = (bound.base as f64 / k as f64).min(1.0);
    let mut cert = TailCertificate::new(ratio, -(prec as f64));
    let mut sum = Complex::new(prec);
    let mut err = f64::NEG_INFINITY;
    let rounding = -(prec as f64) + 2.0;
    let mut m = m0;
    loop {
        if m > 0 && p_m.is_zero() {
            break;
        }
        if let Some(w) = weight(ctx, m) {
            let base = Complex::with_val(prec, &p_m * &k_pow);
            let base_log2 = log2_abs(&base);
            let mut t = base * &w;
            let coeff_log2 = log2_abs(&t);
            let (l, l_err) = lval(ctx, m)?;
            let envelope = base_log2 + log2_abs(&l) + bound.log2_at(m);
            t *= l;
            let tl = log2_abs(&t);
            err = log2_add(err, log2_add(coeff_log2 + l_err, tl + rounding));
            sum += &t;
            if m >= certify_from && cert.accept(envelope, log2_abs(&sum)) {
                err = log2_add(err, envelope + (cert.cap() / (1.0 - cert.cap())).log2());
                break;
            }
        }
        m += 1;
        if (m - m0) as usize > ctx.max_terms() {
            return Err(Error::ConvergenceFailure {
                terms: ctx.max_terms(),
            });
        }
        p_m = rising.next_value().clone();
        k_pow /= k;
    }
    Ok(SeriesOutcome {
        value: sum,
        error_log2: err,
    })
}

/// Ladder state for one continuation run.
struct Ladder {
    depth: usize,
    prec: u32,
    solved: Vec<Option<(Complex, f64)>>,
    upper: LiLadder,
}

impl Ladder {
    /// `Li_z(s + j)` and log2 of its absolute error.
    fn get(&mut self, j: u64, ctx: &mut EvalContext) -> Result<(Complex, f64)> {
        let j = j as usize;
        if j >= self.depth {
            let v = self.upper.get(j - self.depth, ctx)?.clone();
            let e = log2_abs(&v) - self.prec as f64;
            return Ok((v, e));
        }
        Ok(self.solved[j].clone().expect("ladder solved top-down"))
    }
}

/// Solves levels `depth−1 … 0`; returns `Li_z(s)` and log2 of its estimated absolute error.
fn run_ladder(
    s: &Complex,
    z: RootOfUnity,
    depth: usize,
    moduli: &[u64],
    prec: u32,
    ctx: &mut EvalContext,
) -> Result<(Complex, f64)> {
    let top = Complex::with_val(prec, s + depth as u32);
    let mut ladder = Ladder {
        depth,
        prec,
        solved: vec![None; depth],
        upper: LiLadder::new(&top, z, prec),
    };
    let thr = ctx.degeneracy_threshold_log2();
    let delta = z.delta();
    let rounding = -(prec as f64) + 2.0;
    for j in (0..depth).rev() {
        let sj = Complex::with_val(prec, s + j as u32);
        let mut solved = None;
        for &k in moduli {
            // main form
            let mut divisor = int_pow_neg(k, &Complex::with_val(prec, &sj - delta), prec);
            divisor = Complex::with_val(prec, 1 - divisor);
            let d_log = log2_abs(&divisor);
            if d_log >= thr {
                let out = translation_sum(
                    &sj,
                    k,
                    1,
                    (depth - j) as u64,
                    WeightBound::new((k - 1) as f64, k - 1),
                    prec,
                    ctx,
                    |c, m| {
                        c.embedded_weight(("minus", z.order(), z.exponent(), k, m), prec, |c| {
                            c.power_weight(z, k, m, Sign::Minus).clone()
                        })
                    },
                    |c, m| ladder.get(j as u64 + m, c),
                )?;
                let v = Complex::with_val(prec, &out.value / &divisor);
                // the divisor itself is only known to about 2^{-prec} absolutely
                let e = log2_add(out.error_log2, log2_abs(&v) + rounding) - d_log;
                solved = Some((v, e));
                break;
            }
            // subtracted form at t = s' − 1, solved for Li_z(s')
            let t = Complex::with_val(prec, &sj - 1u32);
            let c1 = ctx
                .embedded_weight(("sub", z.order(), z.exponent(), k, 1), prec, |c| sub_weight(c, z, k, 1))
                .unwrap_or_else(|| Complex::new(prec));
            let lead = Complex::with_val(prec, &t * &c1);
            let lead_log = log2_abs(&lead);
            if lead_log < thr {
                continue;
            }
            let out = translation_sum(
                &t,
                k,
                2,
                (depth - j + 1) as u64,
                WeightBound::new(2.0 * (k - 1) as f64, k - 1),
                prec,
                ctx,
                |c, m| c.embedded_weight(("sub", z.order(), z.exponent(), k, m), prec, |c| sub_weight(c, z, k, m)),
                |c, m| ladder.get(j as u64 + m - 1, c),
            )?;
            let mut finite = Complex::new(prec);
            for h in 1..k {
                let mut term = int_pow_neg(h, &t, prec);
                term *= unit_power(z.order(), z.power_index(h as i64), prec);
                finite += term;
            }
            let bracket = Complex::with_val(prec, &finite + &out.value);
            let coeff = Complex::with_val(prec, &lead * &int_pow_neg(k, &sj, prec));
            let v = -Complex::with_val(prec, &bracket / &coeff);
            let bracket_err = log2_add(out.error_log2, log2_abs(&finite) + rounding + (k as f64).log2());
            let e = log2_add(bracket_err - log2_abs(&coeff), log2_abs(&v) + rounding);
            solved = Some((v, e));
            break;
        }
        match solved {
            Some(v) => ladder.solved[j] = Some(v),
            None => {
                return Err(Error::DegenerateDivisor {
                    at: ComplexHP::from_complex(Complex::with_val(53, &sj)).to_string(),
                })
            }
        }
    }
    ladder.get(0, ctx)
}

/// `Σ_{h<k} (z^h(−1)^m − z^{-h}) h^m`.
fn sub_weight(ctx: &mut EvalContext, z: RootOfUnity, k: u64, m: u64) -> crate::exact_arith::CyclotomicNumber {
    let plus = ctx.power_weight(z, k, m, Sign::Plus).clone();
    let minus = ctx.power_weight(z, k, m, Sign::Minus).clone();
    let plus = if m % 2 == 1 { plus.neg() } else { plus };
    plus.sub(&minus).expect("same order")
}

/// Smallest `d ≥ 0` with `s + d` inside the half-plane.
pub(crate) fn ladder_depth(s: &Complex) -> usize {
    let mut d = 0usize;
    let guess = (1.0 - s.real().to_f64()).floor();
    if guess > 1.0 {
        d = guess as usize - 1;
    }
    while check_half_plane(&Complex::with_val(s.prec(), s + d as u32)).is_err() {
        d += 1;
    }
    d
}

fn near_pole(s: &Complex, ctx: &EvalContext) -> bool {
    let dist = Complex::with_val(s.prec(), s - 1u32);
    log2_abs(&dist) < ctx.degeneracy_threshold_log2()
}

/// Runs the ladder, raising the working precision until the error estimate
/// is below `2^{-(p+g)}·max(1, |value|)`.
fn continue_with_depth(s: &Complex, z: RootOfUnity, depth: usize, ctx: &mut EvalContext) -> Result<Complex> {
    let moduli = ctx.moduli_for(z.order())?;
    let target = ctx.working_precision();
    let mut prec = target;
    for _ in 0..4 {
        let (v, err) = run_ladder(s, z, depth, &moduli, prec, ctx)?;
        let allowed = -(target as f64) + log2_abs(&v).max(0.0);
        if err <= allowed {
            return Ok(v);
        }
        prec += (err - allowed).ceil() as u32 + 8;
    }
    Err(Error::ConvergenceFailure {
        terms: ctx.max_terms(),
    })
}

pub(crate) fn li_continue_raw(s: &Complex, z: RootOfUnity, ctx: &mut EvalContext) -> Result<Complex> {
    if z.is_one() && near_pole(s, ctx) {
        return Err(Error::PoleAtOne);
    }
    let wp = ctx.working_precision();
    let s = Complex::with_val(wp.max(s.prec().0), s);
    let depth = ladder_depth(&s);
    if depth == 0 {
        return li_raw(&s, z, wp, ctx);
    }
    continue_with_depth(&s, z, depth, ctx)
}

/// `Li_z(s)` for any `s`, by the half-plane sum or by continuation.
pub fn li_continue(s: &ComplexHP, z: RootOfUnity, ctx: &mut EvalContext) -> Result<ComplexHP> {
    let v = li_continue_raw(s.as_complex(), z, ctx)?;
    Ok(ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)))
}

/// Continuation forced through `depth` translation steps even where the direct sum applies.
pub fn li_continue_forced(
    s: &ComplexHP,
    z: RootOfUnity,
    depth: usize,
    ctx: &mut EvalContext,
) -> Result<ComplexHP> {
    if z.is_one() && near_pole(s.as_complex(), ctx) {
        return Err(Error::PoleAtOne);
    }
    let wp = ctx.working_precision();
    let sc = Complex::with_val(wp.max(s.precision()), s.as_complex());
    let top = Complex::with_val(wp, &sc + depth as u32);
    check_half_plane(&top)?;
    let v = continue_with_depth(&sc, z, depth, ctx)?;
    Ok(ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)))
}

/// Which formula `zeta_continue` used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaRoute {
    Direct,
    Principal,
    Alternating,
}

pub(crate) fn zeta_continue_raw(s: &Complex, ctx: &mut EvalContext) -> Result<(Complex, ZetaRoute)> {
    if near_pole(s, ctx) {
        return Err(Error::PoleAtOne);
    }
    let wp = ctx.working_precision();
    let s = Complex::with_val(wp.max(s.prec().0), s);
    let depth = ladder_depth(&s);
    if depth == 0 {
        return Ok((li_raw(&s, RootOfUnity::one(), wp, ctx)?, ZetaRoute::Direct));
    }
    // the z = 1 ladder passes the pole when some s + j (j ≥ 1) is near 1
    let quarter = Float::with_val(53, 0.25);
    let crosses_pole = (1..depth).any(|j| {
        let d = Complex::with_val(53, &s + (j as u32)) - 1u32;
        Float::with_val(53, d.abs_ref()) < quarter
    });
    if !crosses_pole {
        match continue_with_depth(&s, RootOfUnity::one(), depth, ctx) {
            Ok(v) => return Ok((v, ZetaRoute::Principal)),
            Err(Error::DegenerateDivisor { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let factor = Complex::with_val(wp, int_pow_neg(2, &Complex::with_val(wp, &s - 1u32), wp) - 1u32);
    let f_log = log2_abs(&factor);
    if f_log < ctx.degeneracy_threshold_log2() {
        return Err(Error::DegenerateDivisor {
            at: ComplexHP::from_complex(Complex::with_val(53, &s)).to_string(),
        });
    }
    // extra bits for the cancellation inside 2^{1-s} − 1
    let extra = (-f_log).max(0.0).ceil() as u32;
    let mut wide = ctx.clone().with_guard_bits(ctx.guard_bits() + extra);
    let alt = li_continue_raw(&s, RootOfUnity::minus_one(), &mut wide)?;
    let factor = Complex::with_val(
        wp + extra,
        int_pow_neg(2, &Complex::with_val(wp + extra, &s - 1u32), wp + extra) - 1u32,
    );
    Ok((Complex::with_val(wp, alt / factor), ZetaRoute::Alternating))
}

/// `ζ(s)` for any `s ≠ 1`.
pub fn zeta_continue(s: &ComplexHP, ctx: &mut EvalContext) -> Result<ComplexHP> {
    let (v, _) = zeta_continue_raw(s.as_complex(), ctx)?;
    Ok(ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)))
}

/// `ζ(s)` together with the route taken.
pub fn zeta_continue_with_route(s: &ComplexHP, ctx: &mut EvalContext) -> Result<(ComplexHP, ZetaRoute)> {
    let (v, r) = zeta_continue_raw(s.as_complex(), ctx)?;
    Ok((ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::lerch::li_direct;
    use crate::special_sequences::BernoulliCache;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rug::Rational;

    fn tol_log2(ctx: &EvalContext) -> f64 {
        -((ctx.precision() - ctx.guard_bits() - 8) as f64)
    }

    fn rel_err(a: &ComplexHP, b: &Complex) -> f64 {
        let d = Complex::with_val(256, a.as_complex() - b);
        let scale = Float::with_val(256, b.abs_ref()).max(&Float::with_val(256, 1));
        let r = Float::with_val(256, Float::with_val(256, d.abs_ref()) / scale);
        log2_abs(&Complex::with_val(256, (r, 0)))
    }

    fn exact(r: &Rational) -> Complex {
        Complex::with_val(256, (r, 0))
    }

    /// (1 − 2^{n+1}) B_{n+1}/(n+1), with B_1 at n = 0
    fn li_minus_one_at_neg(n: u64, b: &mut BernoulliCache) -> Rational {
        if n == 0 {
            return b.number(1).clone();
        }
        let bn = b.number(n as usize + 1).clone();
        let f = Rational::from(1 - rug::Integer::from(rug::Integer::u_pow_u(2, n as u32 + 1)));
        f * bn / Rational::from(n + 1)
    }

    #[test]
    fn anchors_at_negative_integers() {
        let mut ctx = EvalContext::default();
        let mut b = BernoulliCache::new();
        for n in 0..=20u64 {
            let s = ComplexHP::new(128, -(n as f64), 0.0);
            let v = li_continue(&s, RootOfUnity::minus_one(), &mut ctx).unwrap();
            let e = exact(&li_minus_one_at_neg(n, &mut b));
            assert!(rel_err(&v, &e) < -100.0, "n={n} got {v} err {}", rel_err(&v, &e));
        }
    }

    #[test]
    fn spec_examples() {
        let mut ctx = EvalContext::default();
        let m1 = RootOfUnity::minus_one();
        let v = li_continue(&ComplexHP::new(128, 0.0, 0.0), m1, &mut ctx).unwrap();
        assert!(rel_err(&v, &exact(&Rational::from((-1, 2)))) < -110.0);
        let v = li_continue(&ComplexHP::new(128, -2.0, 0.0), m1, &mut ctx).unwrap();
        assert!(v.abs_f64() < 2f64.powi(-110));
        let v = li_continue(&ComplexHP::new(128, -1.0, 0.0), m1, &mut ctx).unwrap();
        assert!(rel_err(&v, &exact(&Rational::from((-1, 4)))) < -110.0);
    }

    #[test]
    fn zeta_values() {
        let mut ctx = EvalContext::default();
        let v = zeta_continue(&ComplexHP::new(128, -1.0, 0.0), &mut ctx).unwrap();
        assert!(rel_err(&v, &exact(&Rational::from((-1, 12)))) < -100.0);
        for k in 1..=5 {
            let v = zeta_continue(&ComplexHP::new(128, -2.0 * k as f64, 0.0), &mut ctx).unwrap();
            assert!(v.abs_f64() < 2f64.powi(-100), "k={k} {v}");
        }
        let s = ComplexHP::parse("1.00000095367431640625", 128).unwrap(); // 1 + 2^-20
        let v = zeta_continue(&s, &mut ctx).unwrap();
        let eps = Complex::with_val(128, s.as_complex() - 1u32);
        let r = Complex::with_val(128, v.as_complex() * &eps);
        assert!((r.real().to_f64() - 1.0).abs() < 2f64.powi(-10));
        assert_eq!(zeta_continue(&ComplexHP::new(128, 1.0, 0.0), &mut ctx), Err(Error::PoleAtOne));
        assert_eq!(
            li_continue(&ComplexHP::new(128, 1.0, 0.0), RootOfUnity::one(), &mut ctx),
            Err(Error::PoleAtOne)
        );
    }

    #[test]
    fn zeta_routes_agree() {
        let mut ctx = EvalContext::default();
        for (re, im) in [(-0.5, 3.0), (0.3, -7.0), (-2.7, 1.2)] {
            let s = Complex::with_val(152, (re, im));
            let d = ladder_depth(&s);
            let a = continue_with_depth(&s, RootOfUnity::one(), d, &mut ctx).unwrap();
            let alt = li_continue_raw(&s, RootOfUnity::minus_one(), &mut ctx).unwrap();
            let f = Complex::with_val(152, int_pow_neg(2, &Complex::with_val(152, &s - 1u32), 152) - 1u32);
            let b = Complex::with_val(152, alt / f);
            let err = rel_err(&ComplexHP::from_complex(a), &b);
            assert!(err < tol_log2(&ctx), "s={re},{im} err={err}");
        }
    }

    #[test]
    fn region_overlap() {
        let mut ctx = EvalContext::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            let q = rng.gen_range(1..=4u64);
            let j = (1..=q).find(|j| crate::exact_arith::gcd(*j, q) == 1).unwrap() % q;
            let z = RootOfUnity::new(q, j).unwrap();
            let s = ComplexHP::new(128, rng.gen_range(1.01..1.5), rng.gen_range(-4.0..4.0));
            let a = li_continue_forced(&s, z, 1, &mut ctx).unwrap();
            let b = li_direct(&s, z, &mut ctx).unwrap();
            let err = rel_err(&a, b.as_complex());
            assert!(err < tol_log2(&ctx), "q={q} s={s} err={err}");
        }
    }

    #[test]
    fn moduli_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            let q = rng.gen_range(1..=4u64);
            let z = RootOfUnity::new(q, if q == 1 { 0 } else { q - 1 }).unwrap();
            let s = ComplexHP::new(128, rng.gen_range(-3.0..1.0), rng.gen_range(-5.0..5.0));
            let ks = crate::analytic::context::default_moduli(q);
            let mut c1 = EvalContext::default().with_modulus_list(vec![ks[0], ks[1]]);
            let mut c2 = EvalContext::default().with_modulus_list(vec![ks[1], ks[2]]);
            let a = li_continue(&s, z, &mut c1).unwrap();
            let b = li_continue(&s, z, &mut c2).unwrap();
            let err = rel_err(&a, b.as_complex());
            assert!(err < tol_log2(&c1), "q={q} s={s} err={err}");
        }
    }

    #[test]
    fn degenerate_points_fall_back() {
        // s' = 2πi/ln 3 zeroes 1 − 3^{-s'} for q = 2; the next modulus takes over
        let mut ctx = EvalContext::default();
        let mut tau = Float::with_val(152, rug::float::Constant::Pi);
        tau *= 2;
        tau /= Float::with_val(152, 3).ln();
        let s = ComplexHP::from_complex(Complex::with_val(152, (0, &tau)));
        let v = li_continue(&s, RootOfUnity::minus_one(), &mut ctx).unwrap();
        let mut other = EvalContext::default().with_modulus_list(vec![5]);
        let w = li_continue(&s, RootOfUnity::minus_one(), &mut other).unwrap();
        assert!(rel_err(&v, w.as_complex()) < tol_log2(&ctx));
        let mut only = EvalContext::default().with_modulus_list(vec![3]);
        // the subtracted form still solves this point
        assert!(li_continue(&s, RootOfUnity::minus_one(), &mut only).is_ok());
    }

    #[test]
    fn invalid_modulus_list() {
        let mut ctx = EvalContext::default().with_modulus_list(vec![4]);
        let s = ComplexHP::new(128, -0.5, 0.0);
        assert!(matches!(
            li_continue(&s, RootOfUnity::minus_one(), &mut ctx),
            Err(Error::InvalidModulus { .. })
        ));
    }
}
