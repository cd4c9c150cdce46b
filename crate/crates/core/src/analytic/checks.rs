//! Residuals of the Lerch functional equations, evaluated term by term.

use rug::{Complex, Rational};

use super::complex::ComplexHP;
use super::context::EvalContext;
use super::lerch::{check_half_plane, int_pow_neg, lerch_raw, LiLadder};
use super::series::Rising;
use crate::error::{Error, Result};
use crate::exact_arith::{unit_power, BigRational, RootOfUnity};

fn finish(v: Complex, ctx: &EvalContext) -> ComplexHP {
    ComplexHP::from_complex(Complex::with_val(ctx.precision(), v))
}

/// `φ(s,a,z) − z φ(s,a+1,z) − a^{-s}`.
pub fn lerch_shift_check(
    s: &ComplexHP,
    a: &BigRational,
    z: RootOfUnity,
    ctx: &mut EvalContext,
) -> Result<ComplexHP> {
    let wp = ctx.working_precision();
    let s = s.as_complex();
    let lhs = lerch_raw(s, a, z, wp, ctx)?;
    let shifted = lerch_raw(s, &Rational::from(a + 1u32), z, wp, ctx)?;
    let a_pow = super::lerch::real_pow_neg(&rug::Float::with_val(wp, a), s, wp);
    let mut r = lhs;
    r -= Complex::with_val(wp, &shifted * &z.to_complex(wp));
    r -= a_pow;
    Ok(finish(r, ctx))
}

/// `φ(s,ka,z) − k^{-s} Σ_{i<k} z^i φ(s, i/k + a, z^k)`.
pub fn lerch_multiplication_check(
    s: &ComplexHP,
    a: &BigRational,
    z: RootOfUnity,
    k: u64,
    ctx: &mut EvalContext,
) -> Result<ComplexHP> {
    if k == 0 {
        return Err(Error::Domain("multiplication formula needs k >= 1".into()));
    }
    let wp = ctx.working_precision();
    let s = s.as_complex();
    let lhs = lerch_raw(s, &Rational::from(a * k), z, wp, ctx)?;
    let zk = z.pow(k as i64);
    let mut rhs = Complex::new(wp);
    for i in 0..k {
        let shift = Rational::from((i, k)) + a;
        let mut t = lerch_raw(s, &shift, zk, wp, ctx)?;
        t *= unit_power(z.order(), z.power_index(i as i64), wp);
        rhs += t;
    }
    rhs *= int_pow_neg(k, s, wp);
    Ok(finish(lhs - rhs, ctx))
}

/// `z φ(s,a+1,z) − Σ_{m=0}^{M} (−a)^m P_m(s) Li_z(s+m)`.
pub fn taylor_expansion_check(
    s: &ComplexHP,
    a: &BigRational,
    z: RootOfUnity,
    terms: usize,
    ctx: &mut EvalContext,
) -> Result<ComplexHP> {
    if a.clone().abs() > Rational::from((9, 10)) {
        return Err(Error::Domain(format!("Taylor check needs |a| <= 0.9 (got {a})")));
    }
    check_half_plane(s.as_complex())?;
    let wp = ctx.working_precision();
    let s = Complex::with_val(wp, s.as_complex());
    let mut lhs = lerch_raw(&s, &Rational::from(a + 1u32), z, wp, ctx)?;
    lhs *= z.to_complex(wp);

    let mut ladder = LiLadder::new(&s, z, wp);
    let mut rising = Rising::new(&s);
    let neg_a = Rational::from(-a);
    let mut a_pow = Rational::from(1);
    let mut sum = ladder.get(0, ctx)?.clone();
    for m in 1..=terms {
        a_pow *= &neg_a;
        if a_pow == 0 {
            break;
        }
        let mut t = Complex::with_val(wp, rising.next_value() * ladder.get(m, ctx)?);
        t *= &a_pow;
        sum += t;
    }
    Ok(finish(lhs - sum, ctx))
}
