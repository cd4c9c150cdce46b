use rug::ops::Pow;
use rug::{Complex, Integer, Rational};

use super::catalog::{IdentityId, IdentityInstance};
use crate::analytic::{
    int_pow_neg, ladder_depth, lerch_raw, li_continue_raw, li_raw, log2_abs, translation_sum,
    zeta_continue_raw, ComplexHP, EvalContext, LiLadder, TailCertificate, WeightBound,
};
use crate::error::{Error, Result};
use crate::exact_arith::{cyclo_from_power, gcd, mobius, unit_power, CyclotomicNumber, RootOfUnity};
use crate::special_sequences::{
    alt_power_sum, apostol_phi, coprime_weighted_sum, power_sum, weighted_power_sum_direct, Sign,
};

/// Where the function values on both sides come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvalMode {
    /// Direct sums; every argument must lie in the half-plane `Re(s) > 1`.
    #[default]
    HalfPlane,
    /// Values left of the half-plane come from `li_continue` / `zeta_continue`.
    Continued,
}

/// `(LHS, RHS)` at `s` from the half-plane sums.
pub fn eval_sides(
    inst: &IdentityInstance,
    s: &ComplexHP,
    ctx: &mut EvalContext,
) -> Result<(ComplexHP, ComplexHP)> {
    eval_sides_in(inst, s, EvalMode::HalfPlane, ctx)
}

/// `(LHS, RHS)` at `s`, each side computed on its own.
pub fn eval_sides_in(
    inst: &IdentityInstance,
    s: &ComplexHP,
    mode: EvalMode,
    ctx: &mut EvalContext,
) -> Result<(ComplexHP, ComplexHP)> {
    let (lhs, rhs) = eval_sides_raw(inst, s, mode, ctx)?;
    let p = ctx.precision();
    Ok((
        ComplexHP::from_complex(Complex::with_val(p, lhs)),
        ComplexHP::from_complex(Complex::with_val(p, rhs)),
    ))
}

/// Both sides at the working precision, before rounding.
pub(crate) fn eval_sides_raw(
    inst: &IdentityInstance,
    s: &ComplexHP,
    mode: EvalMode,
    ctx: &mut EvalContext,
) -> Result<(Complex, Complex)> {
    let wp = ctx.working_precision();
    if inst.id() == IdentityId::ZetaSeries {
        return zeta_series_sides(inst.terms(), wp, ctx);
    }
    let sc = Complex::with_val(wp, s.as_complex());
    Ok((lhs(inst, &sc, mode, wp, ctx)?, rhs(inst, &sc, mode, wp, ctx)?))
}

fn value(s: &Complex, z: RootOfUnity, mode: EvalMode, prec: u32, ctx: &mut EvalContext) -> Result<Complex> {
    match mode {
        EvalMode::HalfPlane => li_raw(s, z, prec, ctx),
        EvalMode::Continued if z.is_one() => Ok(zeta_continue_raw(s, ctx)?.0),
        EvalMode::Continued => li_continue_raw(s, z, ctx),
    }
}

/// `Σ_{h ∈ hs} z^h h^{-s}`.
fn finite_sum(z: RootOfUnity, hs: impl Iterator<Item = u64>, s: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for h in hs {
        let mut t = int_pow_neg(h, s, prec);
        if !z.is_one() {
            t *= unit_power(z.order(), z.power_index(h as i64), prec);
        }
        acc += t;
    }
    acc
}

/// `φ(s, 1/2, z)`. Outside the half-plane it is rebuilt from
/// `2^s w^{-1} (Li_w(s) − Li_{−w}(s))/2` with `w² = z`, which needs `q` odd.
fn lerch_half(s: &Complex, z: RootOfUnity, mode: EvalMode, prec: u32, ctx: &mut EvalContext) -> Result<Complex> {
    if mode == EvalMode::HalfPlane {
        return lerch_raw(s, &Rational::from((1, 2)), z, prec, ctx);
    }
    let q = z.order();
    let w = z.pow(q.div_ceil(2) as i64);
    let neg_w = RootOfUnity::new(2 * w.order(), (2 * w.exponent() + w.order()) % (2 * w.order()))?;
    let mut v = Complex::with_val(prec, value(s, w, mode, prec, ctx)? - value(s, neg_w, mode, prec, ctx)?);
    v /= int_pow_neg(2, s, prec);
    v *= unit_power(w.order(), w.power_index(-1), prec);
    v /= 2u32;
    Ok(v)
}

fn lhs(inst: &IdentityInstance, s: &Complex, mode: EvalMode, prec: u32, ctx: &mut EvalContext) -> Result<Complex> {
    let z = inst.root();
    let k = inst.k();
    let one_minus = |e: Complex| Complex::with_val(prec, 1 - e);
    Ok(match inst.id() {
        IdentityId::Ramaswami2 | IdentityId::Ramaswami3 | IdentityId::ApostolK | IdentityId::MobiusK3 => {
            let f = one_minus(int_pow_neg(k, &Complex::with_val(prec, s - 1u32), prec));
            value(s, z, mode, prec, ctx)? * f
        }
        IdentityId::Ramaswami6 => {
            let mut f = Complex::with_val(prec, (1, 0));
            for b in [2, 3, 6] {
                f -= int_pow_neg(b, s, prec);
            }
            value(s, z, mode, prec, ctx)? * f
        }
        IdentityId::ApostolMobius | IdentityId::MobiusAlt | IdentityId::Mobius | IdentityId::TaHalf => {
            let mut acc = Complex::new(prec);
            for &d in inst.divisors() {
                let mu = mobius(d)?;
                if mu == 0 {
                    continue;
                }
                let mut t = value(s, z.pow(d as i64), mode, prec, ctx)?;
                t *= int_pow_neg(d, s, prec);
                if mu < 0 {
                    acc -= t;
                } else {
                    acc += t;
                }
            }
            acc
        }
        IdentityId::TransMain | IdentityId::TransAlt | IdentityId::TransEuler | IdentityId::TransAdd => {
            let e = Complex::with_val(prec, s - inst.delta());
            let mut v = value(s, z, mode, prec, ctx)? * one_minus(int_pow_neg(k, &e, prec));
            if inst.id() == IdentityId::TransAdd {
                v *= 2u32;
            }
            v
        }
        IdentityId::TransSub | IdentityId::MobiusSub => Complex::new(prec),
        IdentityId::GcdFree => {
            let k_pow = int_pow_neg(k, s, prec);
            let mut v = value(s, z, mode, prec, ctx)? * one_minus(k_pow.clone());
            if k.is_multiple_of(2) {
                let mut extra = lerch_half(s, z, mode, prec, ctx)?;
                extra *= k_pow;
                extra *= unit_power(z.order(), z.power_index((k / 2) as i64), prec);
                v += extra;
            }
            v
        }
        IdentityId::AltEven => {
            let f = one_minus(int_pow_neg(k, s, prec));
            value(s, z, mode, prec, ctx)? * f * 2u32
        }
        IdentityId::AltOdd => finite_sum(z, 1..k, s, prec),
        IdentityId::ZetaSeries => unreachable!("handled by zeta_series_sides"),
    })
}

/// First index `m0` of the `m`-sum and a bound on its weights.
fn shape(inst: &IdentityInstance) -> (u64, WeightBound) {
    let k = inst.k();
    let top = k - 1;
    let half = k / 2;
    let full = WeightBound::new(top as f64, top);
    let paired = WeightBound::new(2.0 * top as f64, top);
    let halves = WeightBound::new(2.0 * half as f64, half);
    match inst.id() {
        IdentityId::Ramaswami2 => (1, WeightBound::new(1.0, 1)),
        IdentityId::Ramaswami3 | IdentityId::Ramaswami6 => (1, WeightBound::new(2.0, 1)),
        IdentityId::MobiusK3 => (1, WeightBound::new(2.0, 2)),
        IdentityId::ApostolMobius | IdentityId::TaHalf | IdentityId::GcdFree => (0, halves),
        IdentityId::MobiusAlt | IdentityId::Mobius => (0, full),
        IdentityId::MobiusSub => (0, paired),
        IdentityId::TransAdd | IdentityId::TransSub | IdentityId::AltEven | IdentityId::AltOdd => (1, paired),
        _ => (1, full),
    }
}

fn skips(id: IdentityId, m: u64) -> bool {
    match id {
        IdentityId::Ramaswami3 | IdentityId::Ramaswami6 | IdentityId::ApostolMobius | IdentityId::AltEven => {
            m % 2 == 1
        }
        IdentityId::AltOdd => m.is_multiple_of(2),
        _ => false,
    }
}

fn finite_part(inst: &IdentityInstance, s: &Complex, prec: u32) -> Complex {
    let z = inst.root();
    let k = inst.k();
    let coprime = move |h: &u64| gcd(*h, k) == 1;
    match inst.id() {
        IdentityId::Ramaswami3 | IdentityId::Ramaswami6 => Complex::with_val(prec, (1, 0)),
        IdentityId::ApostolMobius | IdentityId::TaHalf => finite_sum(z, (1..=k / 2).filter(coprime), s, prec),
        IdentityId::TransAlt | IdentityId::TransAdd | IdentityId::TransSub | IdentityId::AltEven => {
            finite_sum(z, 1..k, s, prec)
        }
        IdentityId::MobiusAlt | IdentityId::MobiusSub => finite_sum(z, (1..=k).filter(coprime), s, prec),
        IdentityId::GcdFree => finite_sum(z, 1..=k / 2, s, prec),
        _ => Complex::new(prec),
    }
}

fn alternate(x: CyclotomicNumber, m: u64) -> CyclotomicNumber {
    if m % 2 == 1 {
        x.neg()
    } else {
        x
    }
}

/// `(1/q) Σ_{j<q} (z^j − 1)/(z^j (z − 1)) · (E_{q,m}(j) − E_{q,m}(k+j−1))`.
fn euler_weight(ctx: &mut EvalContext, z: RootOfUnity, k: u64, m: u64) -> Result<CyclotomicNumber> {
    let q = z.order();
    let key = (q, z.exponent());
    if let std::collections::hash_map::Entry::Vacant(e) = ctx.euler_factors.entry(key) {
        // (z^j − 1)/(z^j (z − 1)), j = 1..q−1
        let one = CyclotomicNumber::one(q);
        let inv = cyclo_from_power(z, 1).sub(&one)?.inverse()?;
        let factors = (1..q)
            .map(|j| {
                cyclo_from_power(z, j as i64)
                    .sub(&one)?
                    .mul(&cyclo_from_power(z, -(j as i64)))?
                    .mul(&inv)
            })
            .collect::<Result<Vec<_>>>()?;
        e.insert(factors);
    }
    let points: Vec<u64> = (1..q).flat_map(|j| [j, k + j - 1]).collect();
    // both values carry the denominator q^m
    let values = ctx.euler_table(q)?.scaled_values(m as usize, &points);
    let factors = &ctx.euler_factors[&key];
    let mut acc = CyclotomicNumber::zero(q);
    for (geom, pair) in factors.iter().zip(values.chunks(2)) {
        acc.add_scaled(geom, &Rational::from(Integer::from(&pair[0] - &pair[1])));
    }
    let den = Integer::from(Integer::u_pow_u(q as u32, m as u32 + 1));
    Ok(acc.scale(&Rational::from((1, den))))
}

/// The exact weight of `P_m(s) Li_z(s+m) k^{-(s+m)}` on the right-hand side;
/// `None` where the sum skips index `m`.
pub fn rhs_weight(inst: &IdentityInstance, m: u64, ctx: &mut EvalContext) -> Result<Option<CyclotomicNumber>> {
    let (m0, _) = shape(inst);
    if inst.id() == IdentityId::ZetaSeries || m < m0 || skips(inst.id(), m) {
        return Ok(None);
    }
    let z = inst.root();
    let q = z.order();
    let k = inst.k();
    let rat = |r: Rational| CyclotomicNumber::from_rational(q, r);
    let w = match inst.id() {
        IdentityId::Ramaswami2 => rat(Rational::from(1)),
        IdentityId::Ramaswami3 | IdentityId::Ramaswami6 => rat(Rational::from(2)),
        IdentityId::ApostolK => rat(power_sum(&mut ctx.bernoulli, k, m)?),
        IdentityId::ApostolMobius => rat(apostol_phi(m, k)? * 2u32),
        IdentityId::TransMain => ctx.power_weight(z, k, m, Sign::Minus).clone(),
        IdentityId::TransEuler => euler_weight(ctx, z, k, m)?,
        IdentityId::TransAlt => alternate(ctx.power_weight(z, k, m, Sign::Plus).clone(), m),
        IdentityId::TransAdd | IdentityId::TransSub => {
            let plus = alternate(ctx.power_weight(z, k, m, Sign::Plus).clone(), m);
            let minus = ctx.power_weight(z, k, m, Sign::Minus);
            if inst.id() == IdentityId::TransAdd {
                plus.add(minus)?
            } else {
                plus.sub(minus)?
            }
        }
        IdentityId::MobiusAlt => alternate(coprime_weighted_sum(z, k, m, Sign::Plus, false), m),
        IdentityId::Mobius => coprime_weighted_sum(z, k, m, Sign::Minus, false),
        IdentityId::MobiusSub => alternate(coprime_weighted_sum(z, k, m, Sign::Plus, false), m)
            .sub(&coprime_weighted_sum(z, k, m, Sign::Minus, false))?,
        IdentityId::MobiusK3 => rat(Rational::from(Integer::from(2).pow(m as u32) + 1u32)),
        IdentityId::TaHalf => alternate(coprime_weighted_sum(z, k, m, Sign::Plus, true), m)
            .add(&coprime_weighted_sum(z, k, m, Sign::Minus, true))?,
        IdentityId::GcdFree => alternate(weighted_power_sum_direct(z, k / 2 + 1, m, Sign::Plus), m)
            .add(&weighted_power_sum_direct(z, k / 2 + 1, m, Sign::Minus))?,
        IdentityId::AltEven | IdentityId::AltOdd => rat(alt_power_sum(m, k) * 2u32),
        IdentityId::ZetaSeries => unreachable!("checked above"),
    };
    Ok(Some(w))
}

fn embedded_weight(inst: &IdentityInstance, m: u64, prec: u32, ctx: &mut EvalContext) -> Option<Complex> {
    let (m0, _) = shape(inst);
    if m < m0 || skips(inst.id(), m) {
        return None;
    }
    let key = (inst.id().name(), inst.q(), inst.j(), inst.k(), m);
    ctx.embedded_weight(key, prec, |c| {
        rhs_weight(inst, m, c)
            .expect("weights of a validated instance are defined")
            .expect("index not skipped")
    })
}

fn rhs(inst: &IdentityInstance, s: &Complex, mode: EvalMode, prec: u32, ctx: &mut EvalContext) -> Result<Complex> {
    let (m0, bound) = shape(inst);
    let z = inst.root();
    let depth = match mode {
        EvalMode::HalfPlane => 0,
        EvalMode::Continued => ladder_depth(s),
    };
    let mut upper = LiLadder::new(&Complex::with_val(prec, s + depth as u32), z, prec);
    let out = translation_sum(
        s,
        inst.k(),
        m0,
        depth as u64,
        bound,
        prec,
        ctx,
        |c, m| embedded_weight(inst, m, prec, c),
        |c, m| {
            let v = if (m as usize) < depth {
                value(&Complex::with_val(prec, s + m as u32), z, mode, prec, c)?
            } else {
                upper.get(m as usize - depth, c)?.clone()
            };
            let e = log2_abs(&v) - prec as f64;
            Ok((v, e))
        },
    )?;
    Ok(finite_part(inst, s, prec) + out.value)
}

/// One right-hand-side term `P_m(s) Li_z(s+m) k^{-(s+m)} w_m`, zero where `m` is skipped.
pub fn rhs_term(inst: &IdentityInstance, s: &ComplexHP, m: u64, ctx: &mut EvalContext) -> Result<ComplexHP> {
    let wp = ctx.working_precision();
    let p = ctx.precision();
    let Some(w) = rhs_weight(inst, m, ctx)? else {
        return Ok(ComplexHP::from_complex(Complex::new(p)));
    };
    let sc = Complex::with_val(wp, s.as_complex());
    let sm = Complex::with_val(wp, &sc + m as u32);
    let mut t = crate::analytic::rising_factor(&ComplexHP::from_complex(sc), m).into_complex();
    t *= li_raw(&sm, inst.root(), wp, ctx)?;
    t *= int_pow_neg(inst.k(), &sm, wp);
    t *= w.embed_complex(wp);
    Ok(ComplexHP::from_complex(Complex::with_val(p, t)))
}

/// `m 3^{-(2m+1)} (2^{2m−1} − 1)(2^{−2m} − 1)`.
pub(crate) fn zeta_series_coefficient(m: u64) -> Rational {
    let m32 = m as u32;
    let a = Integer::from(Integer::u_pow_u(2, 2 * m32 - 1)) - 1u32;
    let b = Rational::from((1, Integer::from(Integer::u_pow_u(2, 2 * m32)))) - 1u32;
    let d = Integer::from(Integer::u_pow_u(3, 2 * m32 + 1));
    b * Rational::from((a * m, d))
}

fn zeta_series_sides(terms: Option<u64>, prec: u32, ctx: &mut EvalContext) -> Result<(Complex, Complex)> {
    let lhs = Complex::with_val(prec, (Rational::from((-3, 16)), 0));
    let mut sum = Complex::new(prec);
    let mut cert = TailCertificate::new(4.0 / 9.0, -(prec as f64));
    let mut m = 1u64;
    loop {
        if let Some(n) = terms {
            if m > n {
                break;
            }
        }
        if m as usize > ctx.max_terms() {
            return Err(Error::ConvergenceFailure {
                terms: ctx.max_terms(),
            });
        }
        let zeta = li_raw(&Complex::with_val(prec, (2 * m + 1, 0)), RootOfUnity::one(), prec, ctx)?;
        let t = zeta * Complex::with_val(prec, (zeta_series_coefficient(m), 0));
        let tl = log2_abs(&t);
        sum += t;
        if terms.is_none() && cert.accept(tl, log2_abs(&sum)) {
            break;
        }
        m += 1;
    }
    Ok((lhs, sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::instantiate;
    use rug::Float;

    fn s(re: f64, im: f64) -> ComplexHP {
        ComplexHP::new(160, re, im)
    }

    fn residual_log2(pair: &(ComplexHP, ComplexHP)) -> f64 {
        let d = Complex::with_val(256, pair.0.as_complex() - pair.1.as_complex());
        log2_abs(&d)
    }

    fn check(id: IdentityId, q: u64, j: u64, k: u64, at: &ComplexHP) {
        let inst = instantiate(id, q, j, k).unwrap();
        let mut ctx = EvalContext::default();
        let pair = eval_sides(&inst, at, &mut ctx).unwrap();
        let scale = pair.0.abs_f64().max(1.0).log2();
        assert!(residual_log2(&pair) < -96.0 + scale, "{inst} at {at}: {}", residual_log2(&pair));
    }

    #[test]
    fn ramaswami_two_at_two() {
        check(IdentityId::Ramaswami2, 1, 0, 2, &s(2.0, 0.0));
    }

    #[test]
    fn every_identity_at_its_defaults() {
        for id in IdentityId::ALL {
            let (q, j, k) = id.default_params();
            check(id, q, j, k, &s(1.7, 2.5));
        }
    }

    #[test]
    fn trans_sub_has_zero_lhs() {
        let inst = instantiate(IdentityId::TransSub, 2, 1, 3).unwrap();
        let mut ctx = EvalContext::default();
        let (l, r) = eval_sides(&inst, &s(2.0, 0.0), &mut ctx).unwrap();
        assert!(l.as_complex().is_zero());
        assert!(r.abs_f64() < 1e-35);
    }

    #[test]
    fn zeta_series_with_fifty_terms() {
        let inst = instantiate(IdentityId::ZetaSeries, 1, 0, 3).unwrap().with_terms(50);
        let mut ctx = EvalContext::default();
        let (l, r) = eval_sides(&inst, &s(0.0, 0.0), &mut ctx).unwrap();
        assert_eq!(l.re_f64(), -3.0 / 16.0);
        let err = (&l - &r).abs_f64();
        assert!(err < 1e-14 && err > 0.0, "{err}");
        assert_eq!(zeta_series_coefficient(1), Rational::from((-1, 36)));
    }

    #[test]
    fn trans_main_matches_apostol_termwise() {
        let mut ctx = EvalContext::default();
        let at = s(2.3, -1.1);
        for k in [2u64, 3, 5, 8] {
            let main = instantiate(IdentityId::TransMain, 1, 0, k).unwrap();
            let apostol = instantiate(IdentityId::ApostolK, 1, 0, k).unwrap();
            for m in 1..=30 {
                let a = rhs_weight(&main, m, &mut ctx).unwrap().unwrap();
                let b = rhs_weight(&apostol, m, &mut ctx).unwrap().unwrap();
                assert_eq!(a, b, "k={k} m={m}");
                let ta = rhs_term(&main, &at, m, &mut ctx).unwrap();
                let tb = rhs_term(&apostol, &at, m, &mut ctx).unwrap();
                assert_eq!(ta.as_complex(), tb.as_complex());
            }
        }
    }

    #[test]
    fn ta_half_reduces_to_ramaswami() {
        let mut ctx = EvalContext::default();
        let at = s(1.9, 0.7);
        for (k, id) in [(3u64, IdentityId::Ramaswami3), (6, IdentityId::Ramaswami6)] {
            let ta = instantiate(IdentityId::TaHalf, 1, 0, k).unwrap();
            let ram = instantiate(id, 1, 0, k).unwrap();
            let (ta_l, ta_r) = eval_sides(&ta, &at, &mut ctx).unwrap();
            let (ram_l, ram_r) = eval_sides(&ram, &at, &mut ctx).unwrap();
            // the m = 0 term of the half-sum form is 2 k^{-s} ζ(s)
            let shift = rhs_term(&ta, &at, 0, &mut ctx).unwrap();
            let moved_l = &ta_l - &shift;
            let moved_r = &ta_r - &shift;
            assert!((&moved_l - &ram_l).abs_f64() < 1e-35, "k={k}");
            assert!((&moved_r - &ram_r).abs_f64() < 1e-35, "k={k}");
        }
    }

    #[test]
    fn mobius_difference_is_mobius_sub() {
        let mut ctx = EvalContext::default();
        let at = s(1.6, 3.0);
        for (q, j, k) in [(1, 0, 6), (3, 2, 7), (4, 1, 9)] {
            let alt = instantiate(IdentityId::MobiusAlt, q, j, k).unwrap();
            let plain = instantiate(IdentityId::Mobius, q, j, k).unwrap();
            let sub = instantiate(IdentityId::MobiusSub, q, j, k).unwrap();
            let (_, ra) = eval_sides(&alt, &at, &mut ctx).unwrap();
            let (_, rp) = eval_sides(&plain, &at, &mut ctx).unwrap();
            let (_, rs) = eval_sides(&sub, &at, &mut ctx).unwrap();
            let diff = &(&ra - &rp) - &rs;
            assert!(diff.abs_f64() < 1e-35, "{q},{j},{k}");
        }
    }

    #[test]
    fn add_and_sub_residuals_are_bounded() {
        let mut ctx = EvalContext::default();
        let at = s(1.4, -2.2);
        for (q, j, k) in [(2, 1, 5), (5, 3, 6), (1, 0, 4)] {
            let res = |id: IdentityId, ctx: &mut EvalContext| {
                let inst = instantiate(id, q, j, k).unwrap();
                let (l, r) = eval_sides(&inst, &at, ctx).unwrap();
                Float::with_val(256, Complex::with_val(256, l.as_complex() - r.as_complex()).abs_ref())
            };
            let main = res(IdentityId::TransMain, &mut ctx);
            let alt = res(IdentityId::TransAlt, &mut ctx);
            let roundoff = Float::with_val(256, Float::i_exp(1, -120));
            let bound = Float::with_val(256, &main + &alt) + &roundoff;
            assert!(res(IdentityId::TransAdd, &mut ctx) <= bound);
            assert!(res(IdentityId::TransSub, &mut ctx) <= bound);
        }
    }

    #[test]
    fn alt_odd_at_two_is_the_zeta_series() {
        let mut ctx = EvalContext::default();
        let alt = instantiate(IdentityId::AltOdd, 2, 1, 3).unwrap();
        let (l, r) = eval_sides(&alt, &s(2.0, 0.0), &mut ctx).unwrap();
        assert_eq!(l.re_f64(), -0.75);
        let series = instantiate(IdentityId::ZetaSeries, 1, 0, 3).unwrap();
        let (_, zs) = eval_sides(&series, &s(2.0, 0.0), &mut ctx).unwrap();
        let quarter = &r / &ComplexHP::new(128, 4.0, 0.0);
        assert!((&quarter - &zs).abs_f64() < 1e-35);
    }

    #[test]
    fn euler_form_weights_match_direct_sums() {
        let mut ctx = EvalContext::default();
        for (q, j, k) in [(2, 1, 3), (3, 2, 7), (6, 5, 13)] {
            let euler = instantiate(IdentityId::TransEuler, q, j, k).unwrap();
            let main = instantiate(IdentityId::TransMain, q, j, k).unwrap();
            for m in 1..=12 {
                assert_eq!(
                    rhs_weight(&euler, m, &mut ctx).unwrap(),
                    rhs_weight(&main, m, &mut ctx).unwrap()
                );
            }
        }
    }

    #[test]
    fn half_lerch_from_polylogs() {
        let mut ctx = EvalContext::default();
        let at = Complex::with_val(152, (2.2, 1.3));
        for z in [RootOfUnity::one(), RootOfUnity::new(3, 1).unwrap(), RootOfUnity::new(5, 3).unwrap()] {
            let direct = lerch_half(&at, z, EvalMode::HalfPlane, 152, &mut ctx).unwrap();
            let rebuilt = lerch_half(&at, z, EvalMode::Continued, 152, &mut ctx).unwrap();
            let d = Complex::with_val(152, &direct - &rebuilt);
            assert!(log2_abs(&d) < -130.0, "{z}");
        }
    }

    #[test]
    fn continued_mode_left_of_the_line() {
        let mut ctx = EvalContext::default();
        for (id, q, j, k) in [
            (IdentityId::TransMain, 3, 1, 4),
            (IdentityId::TransSub, 2, 1, 5),
            (IdentityId::Mobius, 4, 3, 5),
            (IdentityId::GcdFree, 3, 1, 4),
            (IdentityId::ApostolK, 1, 0, 3),
        ] {
            let inst = instantiate(id, q, j, k).unwrap();
            let pair = eval_sides_in(&inst, &s(-1.3, 2.1), EvalMode::Continued, &mut ctx).unwrap();
            let scale = pair.0.abs_f64().max(1.0).log2();
            assert!(residual_log2(&pair) < -96.0 + scale, "{inst}: {}", residual_log2(&pair));
        }
    }

    #[test]
    fn half_plane_mode_rejects_the_left() {
        let inst = instantiate(IdentityId::TransMain, 2, 1, 3).unwrap();
        let mut ctx = EvalContext::default();
        assert!(matches!(
            eval_sides(&inst, &s(0.5, 1.0), &mut ctx),
            Err(Error::Domain(_))
        ));
    }
}
