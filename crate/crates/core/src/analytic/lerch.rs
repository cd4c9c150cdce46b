//! Half-plane evaluation of `φ(s,a,z) = Σ_{n≥0} z^n (n+a)^{-s}` and `Li_z(s)`.
//!
//! Short sums stop on the integral tail bound. When that would need too many
//! terms, the sum is split by residue class of `n` mod `q` into Hurwitz tails
//! `Σ_{i≥N} (i+b)^{-s}` and each tail is replaced by its Euler–Maclaurin
//! expansion with the remainder bound
//! `4|(s)_{2J}|/(2π)^{2J} · x^{1−σ−2J}/(σ+2J−1)`, `x = N + b`.

use rug::{Complex, Float, Rational};

use super::complex::ComplexHP;
use super::context::{EvalContext, MARGIN_LOG2};
use super::series::log2_abs;
use crate::error::{Error, Result};
use crate::exact_arith::{unit_power, BigRational, RootOfUnity};

/// Terms tried before switching to the Euler–Maclaurin tail.
const DIRECT_CAP: usize = 64;
/// Bits carried beyond the caller's working precision inside a sum.
const INNER_BITS: u32 = 8;

pub(crate) fn check_half_plane(s: &Complex) -> Result<()> {
    let mut excess = Float::with_val(s.prec().0, s.real() - 1u32);
    excess <<= -MARGIN_LOG2;
    if excess > 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Re(s) = {} is not above 1 + 2^{MARGIN_LOG2}",
            s.real().to_f64()
        )))
    }
}

/// Powers `z^t`, `t < q`.
pub(crate) fn unit_table(z: RootOfUnity, prec: u32) -> Vec<Complex> {
    (0..z.order()).map(|t| unit_power(z.order(), t, prec)).collect()
}

/// `b^{-s}` for a positive real `b`, through the real logarithm.
pub(crate) fn real_pow_neg(b: &Float, s: &Complex, prec: u32) -> Complex {
    let ln = Float::with_val(prec, b.ln_ref());
    let mut e = Complex::with_val(prec, s * &ln);
    e = -e;
    e.exp()
}

/// `k^{-s}` for a positive integer `k`.
pub(crate) fn int_pow_neg(k: u64, s: &Complex, prec: u32) -> Complex {
    real_pow_neg(&Float::with_val(prec, k), s, prec)
}

/// log2 of the Euler–Maclaurin remainder bound for the tail from `x`, minimised over `J`.
fn em_plan(sigma: f64, tau: f64, x: f64, max_j: usize) -> (usize, f64) {
    let two_pi = (2.0 * std::f64::consts::PI).log2();
    let lx = x.log2();
    let mut poch = 0.0;
    let mut best = (1, f64::INFINITY);
    for j in 1..=max_j {
        let i0 = 2.0 * (j - 1) as f64;
        poch += (sigma + i0).hypot(tau).log2() + (sigma + i0 + 1.0).hypot(tau).log2();
        let jj = 2.0 * j as f64;
        let lb = 2.0 + poch - jj * two_pi + (1.0 - sigma - jj) * lx - (sigma + jj - 1.0).log2();
        if lb < best.1 {
            best = (j, lb);
        } else if j > best.0 + 8 {
            break;
        }
    }
    best
}

/// `n^{-s}` for positive integers, filled multiplicatively so that only primes
/// need an exponential.
pub(crate) struct PowerTable {
    s: Complex,
    prec: u32,
    values: Vec<Complex>,
    spf: Vec<u32>,
}

impl PowerTable {
    pub(crate) fn new(s: &Complex, prec: u32) -> Self {
        PowerTable {
            s: Complex::with_val(prec, s),
            prec,
            values: vec![Complex::new(prec), Complex::with_val(prec, 1)],
            spf: Vec::new(),
        }
    }

    pub(crate) fn get(&mut self, n: u64) -> &Complex {
        let n = n as usize;
        if n >= self.values.len() {
            self.extend((n + 1).max(2 * self.values.len()));
        }
        &self.values[n]
    }

    fn extend(&mut self, len: usize) {
        self.spf = smallest_prime_factors(len);
        for n in self.values.len()..len {
            let p = self.spf[n] as usize;
            let v = if p == n {
                int_pow_neg(n as u64, &self.s, self.prec)
            } else {
                Complex::with_val(self.prec, &self.values[p] * &self.values[n / p])
            };
            self.values.push(v);
        }
    }
}

fn smallest_prime_factors(len: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = (0..len as u32).collect();
    let mut p = 2;
    while p * p < len {
        if spf[p] == p as u32 {
            for m in (p * p..len).step_by(p) {
                if spf[m] == m as u32 {
                    spf[m] = p as u32;
                }
            }
        }
        p += 1;
    }
    spf
}

/// Euler–Maclaurin value of `Σ_{i≥0} (i+x)^{-s}` with `J` Bernoulli corrections,
/// returned as a multiple of `x^{-s}`.
fn em_bracket(s: &Complex, x: &Float, j_terms: usize, coeffs: &[Float], prec: u32) -> Complex {
    let s_minus_1 = Complex::with_val(prec, s - 1u32);
    let mut out = Complex::with_val(prec, x / &s_minus_1);
    out += 0.5f64;
    let inv_x = Float::with_val(prec, x.recip_ref());
    let inv_x2 = Float::with_val(prec, inv_x.square_ref());
    let mut xp = inv_x;
    let mut poch = s.clone();
    for (j, c) in coeffs.iter().enumerate().take(j_terms) {
        let mut t = Complex::with_val(prec, &poch * &xp);
        t *= c;
        out += t;
        let base = 2 * j as u32 + 1;
        poch *= Complex::with_val(prec, s + base);
        poch *= Complex::with_val(prec, s + (base + 1));
        xp *= &inv_x2;
    }
    out
}

/// `Σ_{n≥0} z^n (n+a)^{-s}` at `prec` bits, relative accuracy about `2^{-prec}`.
pub(crate) fn lerch_raw(
    s: &Complex,
    a: &Rational,
    z: RootOfUnity,
    prec: u32,
    ctx: &mut EvalContext,
) -> Result<Complex> {
    check_half_plane(s)?;
    if a.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::Domain(format!("Lerch parameter a = {a} must be positive")));
    }
    let wp = prec + INNER_BITS;
    let s = Complex::with_val(wp, s);
    let small = a.numer().to_u64().zip(a.denom().to_u64()).filter(|&(u, v)| u <= 1 << 20 && v <= 16);
    let Some((u, v)) = small else {
        let a_f = Float::with_val(wp, a);
        let mut pow = |n: u64| real_pow_neg(&Float::with_val(wp, &a_f + n), &s, wp);
        return lerch_core(&s, a, (0, 1), z, prec, ctx, &mut pow);
    };
    let mut table = PowerTable::new(&s, wp);
    let mut pow = |n: u64| table.get(n).clone();
    let mut v_sum = lerch_core(&s, a, (u, v), z, prec, ctx, &mut pow)?;
    if v > 1 {
        v_sum *= real_pow_neg(&Float::with_val(wp, v), &Complex::with_val(wp, -&s), wp);
    }
    Ok(Complex::with_val(prec, v_sum))
}

/// The Lerch sum in units of `v^{-s}`, where `pow(v·n + u)` supplies
/// `(v·n + u)^{-s}` at `prec + INNER_BITS` bits. With `v = 1, u = 0` any
/// positive `a` can be served by a `pow` that returns `(n + a)^{-s}`.
#[allow(clippy::too_many_arguments)]
fn lerch_core(
    s: &Complex,
    a: &Rational,
    (u, v): (u64, u64),
    z: RootOfUnity,
    prec: u32,
    ctx: &mut EvalContext,
    pow: &mut dyn FnMut(u64) -> Complex,
) -> Result<Complex> {
    let wp = prec + INNER_BITS;
    let sigma = s.real().to_f64();
    let tau = s.imag().to_f64();
    let a_f64 = a.to_f64();
    let units = unit_table(z, wp);
    let target = -(prec as f64);
    // bounds below are for the unscaled sum
    let scale = -sigma * (v as f64).log2();

    let mut term = |n: u64| -> Complex {
        let mut t = pow(v * n + u);
        if !z.is_one() {
            t *= &units[z.power_index(n as i64) as usize];
        }
        t
    };

    let mut sum = Complex::new(wp);
    let cap = DIRECT_CAP.min(ctx.max_terms());
    let log_sigma_m1 = (sigma - 1.0).log2();
    for n in 0..cap as u64 {
        sum += term(n);
        let tail = (1.0 - sigma) * (n as f64 + a_f64).log2() - log_sigma_m1 + scale;
        if tail < target + log2_abs(&sum) {
            return Ok(Complex::with_val(prec, &sum));
        }
    }
    if ctx.max_terms() <= DIRECT_CAP {
        return Err(Error::ConvergenceFailure {
            terms: ctx.max_terms(),
        });
    }

    // residue classes mod q, each an Hurwitz tail from i = N
    let q = z.order();
    let est = log2_abs(&sum) - 1.0;
    let class_factor = (1.0 - sigma) * (q as f64).log2() + scale;
    let mut n_cut = (cap as u64).div_ceil(q).max(8);
    let mut summed = cap as u64;
    loop {
        if (q * n_cut) as usize > ctx.max_terms() {
            return Err(Error::ConvergenceFailure {
                terms: ctx.max_terms(),
            });
        }
        let x_min = n_cut as f64 + a_f64 / q as f64;
        let (j_terms, lb) = em_plan(sigma, tau, x_min, 400);
        if lb + class_factor >= target + est {
            n_cut *= 2;
            continue;
        }
        while summed < q * n_cut {
            sum += term(summed);
            summed += 1;
        }
        let coeffs = ctx.em_coefficients(j_terms, wp).to_vec();
        let mut tails = Complex::new(wp);
        for r in 0..q {
            let b = Rational::from(a + r) / q;
            let x = Float::with_val(wp, &b) + n_cut;
            // (q·x)^{-s} in units of v^{-s} is the first omitted term of the class
            let mut t = em_bracket(s, &x, j_terms, &coeffs, wp);
            t *= term(q * n_cut + r);
            tails += t;
        }
        let total = Complex::with_val(wp, &sum + &tails);
        if lb + class_factor < target + log2_abs(&total) {
            return Ok(Complex::with_val(prec, &total));
        }
        n_cut *= 2;
    }
}

/// `Li_z(s) = Σ_{n≥1} z^n n^{-s}` at `prec` bits.
pub(crate) fn li_raw(s: &Complex, z: RootOfUnity, prec: u32, ctx: &mut EvalContext) -> Result<Complex> {
    let mut v = lerch_raw(s, &Rational::from(1), z, prec, ctx)?;
    if !z.is_one() {
        v *= unit_power(z.order(), z.exponent(), prec);
    }
    Ok(v)
}

pub fn lerch_direct(
    s: &ComplexHP,
    a: &BigRational,
    z: RootOfUnity,
    ctx: &mut EvalContext,
) -> Result<ComplexHP> {
    let wp = ctx.working_precision();
    let v = lerch_raw(s.as_complex(), a, z, wp, ctx)?;
    Ok(ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)))
}

pub fn li_direct(s: &ComplexHP, z: RootOfUnity, ctx: &mut EvalContext) -> Result<ComplexHP> {
    let wp = ctx.working_precision();
    let v = li_raw(s.as_complex(), z, wp, ctx)?;
    Ok(ComplexHP::from_complex(Complex::with_val(ctx.precision(), v)))
}

pub fn zeta_direct(s: &ComplexHP, ctx: &mut EvalContext) -> Result<ComplexHP> {
    li_direct(s, RootOfUnity::one(), ctx)
}

/// Lazily filled `Li_z(s + m)`, `m = 0, 1, 2, …`, in the half-plane.
///
/// One table of `n^{-s}` serves every rung; rung `m` rescales it by `n^{-m}`.
pub(crate) struct LiLadder {
    s: Complex,
    z: RootOfUnity,
    prec: u32,
    values: Vec<Complex>,
    table: PowerTable,
    /// `(e, n^{-e})` per `n`, advanced one step at a time
    shifts: Vec<(u32, Float)>,
}

/// Steps of repeated division before `n^{-m}` is recomputed from scratch.
const SHIFT_REFRESH: u32 = 32;

impl LiLadder {
    pub(crate) fn new(s: &Complex, z: RootOfUnity, prec: u32) -> Self {
        let wp = prec + INNER_BITS;
        LiLadder {
            s: Complex::with_val(prec, s),
            z,
            prec,
            values: Vec::new(),
            table: PowerTable::new(s, wp),
            shifts: Vec::new(),
        }
    }

    pub(crate) fn get(&mut self, m: usize, ctx: &mut EvalContext) -> Result<&Complex> {
        while self.values.len() <= m {
            let rung = self.values.len() as u32;
            let sm = Complex::with_val(self.prec, &self.s + rung);
            check_half_plane(&sm)?;
            let wp = self.prec + INNER_BITS;
            let (table, shifts) = (&mut self.table, &mut self.shifts);
            let mut pow = |n: u64| -> Complex {
                let base = table.get(n);
                if rung == 0 || n == 1 {
                    return base.clone();
                }
                let i = n as usize;
                if shifts.len() <= i {
                    shifts.resize(i + 1, (0, Float::with_val(wp, 1)));
                }
                let (e, f) = &mut shifts[i];
                if *e + 1 == rung && !rung.is_multiple_of(SHIFT_REFRESH) {
                    *f /= n;
                } else if *e != rung {
                    *f = Float::with_val(wp, Float::u_pow_u(n as u32, rung));
                    f.recip_mut();
                }
                *e = rung;
                Complex::with_val(wp, base * &*f)
            };
            let mut v = lerch_core(&sm, &Rational::from(1), (1, 1), self.z, self.prec, ctx, &mut pow)?;
            if !self.z.is_one() {
                v *= unit_power(self.z.order(), self.z.exponent(), self.prec);
            }
            self.values.push(Complex::with_val(self.prec, v));
        }
        Ok(&self.values[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn ctx() -> EvalContext {
        EvalContext::new(128).unwrap()
    }

    fn close(a: &Complex, b: &Complex, bits: i32) -> bool {
        let d = Complex::with_val(200, a - b);
        let scale = Float::with_val(200, b.abs_ref()).max(&Float::with_val(200, 1));
        let rel = Float::with_val(200, Float::with_val(200, d.abs_ref()) / scale);
        rel.is_zero() || rel.to_f64().log2() < -(bits as f64)
    }

    fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    /// Σ n^{-s} with the first two Euler–Maclaurin terms, in plain f64
    fn zeta_f64(s: f64) -> f64 {
        let n = 200_000;
        let mut acc = 0.0;
        for i in (1..n).rev() {
            acc += (i as f64).powf(-s);
        }
        let x = n as f64;
        acc + x.powf(1.0 - s) / (s - 1.0) + x.powf(-s) / 2.0 + s * x.powf(-s - 1.0) / 12.0
    }

    #[test]
    fn zeta_two_and_alternating() {
        let mut c = ctx();
        let s = Complex::with_val(152, (2, 0));
        let z2 = lerch_raw(&s, &Rational::from(1), RootOfUnity::one(), 152, &mut c).unwrap();
        let exact = Complex::with_val(152, pi(152).square() / 6u32);
        assert!(close(&z2, &exact, 145));
        let alt = lerch_raw(&s, &Rational::from(1), RootOfUnity::minus_one(), 152, &mut c).unwrap();
        let exact = Complex::with_val(152, pi(152).square() / 12u32);
        assert!(close(&alt, &exact, 145));
        let li = li_raw(&s, RootOfUnity::minus_one(), 152, &mut c).unwrap();
        assert!(close(&li, &Complex::with_val(152, -&exact), 145));
    }

    #[test]
    fn zeta_against_f64_oracle() {
        let mut c = ctx();
        for s in [1.3, 1.75, 2.5, 3.0, 4.2, 7.0] {
            let v = li_raw(&Complex::with_val(152, (s, 0)), RootOfUnity::one(), 152, &mut c).unwrap();
            let o = zeta_f64(s);
            assert!((v.real().to_f64() - o).abs() < 1e-11 * o, "s={s}");
        }
    }

    #[test]
    fn alternating_relation() {
        // Li_{-1}(s) = (2^{1-s} − 1) ζ(s)
        let mut c = ctx();
        for (re, im) in [(3.0, 0.0), (1.2, 4.0), (2.5, -3.3)] {
            let s = Complex::with_val(152, (re, im));
            let l = li_raw(&s, RootOfUnity::minus_one(), 152, &mut c).unwrap();
            let zeta = li_raw(&s, RootOfUnity::one(), 152, &mut c).unwrap();
            let f = Complex::with_val(152, int_pow_neg(2, &Complex::with_val(152, &s - 1u32), 152) - 1u32);
            assert!(close(&l, &Complex::with_val(152, &f * &zeta), 140), "s={re},{im}");
        }
    }

    #[test]
    fn even_split_of_quarter_roots() {
        // Li_i(s) + Li_{-i}(s) = 2^{1-s} Li_{-1}(s)... at s = 2 this is Li_{-1}(2)/2
        let mut c = ctx();
        let s = Complex::with_val(152, (2, 0));
        let i = RootOfUnity::new(4, 1).unwrap();
        let mi = RootOfUnity::new(4, 3).unwrap();
        let a = li_raw(&s, i, 152, &mut c).unwrap();
        let b = li_raw(&s, mi, 152, &mut c).unwrap();
        let m = li_raw(&s, RootOfUnity::minus_one(), 152, &mut c).unwrap();
        assert!(close(&Complex::with_val(152, &a + &b), &Complex::with_val(152, &m / 2u32), 140));
    }

    #[test]
    fn lerch_is_li_over_z() {
        let mut c = ctx();
        for q in 1..=6u64 {
            let z = RootOfUnity::new(q, 1).unwrap();
            let s = Complex::with_val(152, (1.7, 2.1));
            let phi = lerch_raw(&s, &Rational::from(1), z, 152, &mut c).unwrap();
            let li = li_raw(&s, z, 152, &mut c).unwrap();
            let zc = z.to_complex(152);
            assert!(close(&Complex::with_val(152, &phi * &zc), &li, 140), "q={q}");
        }
    }

    #[test]
    fn public_wrappers_round_to_precision() {
        let mut c = ctx();
        let s = ComplexHP::new(128, 2.0, 0.0);
        let v = li_direct(&s, RootOfUnity::one(), &mut c).unwrap();
        assert_eq!(v.precision(), 128);
        assert!((v.re_f64() - 1.6449340668482264).abs() < 1e-15);
        let half = lerch_direct(&s, &BigRational::from((1, 2)), RootOfUnity::one(), &mut c).unwrap();
        // φ(2, 1/2, 1) = 3ζ(2)
        assert!((half.re_f64() - 3.0 * 1.6449340668482264).abs() < 1e-14);
    }

    #[test]
    fn domain_and_budget_errors() {
        let mut c = ctx();
        let near = ComplexHP::new(128, 1.001, 0.0);
        assert!(matches!(li_direct(&near, RootOfUnity::one(), &mut c), Err(Error::Domain(_))));
        let s = ComplexHP::new(128, 2.0, 0.0);
        assert!(lerch_direct(&s, &BigRational::from(0), RootOfUnity::one(), &mut c).is_err());
        let mut small = EvalContext::new(128).unwrap().with_max_terms(100);
        assert!(matches!(
            li_direct(&ComplexHP::new(128, 1.01, 4000.0), RootOfUnity::one(), &mut small),
            Err(Error::ConvergenceFailure { .. })
        ));
    }

    #[test]
    fn ladder_matches_direct() {
        let mut c = ctx();
        let z = RootOfUnity::new(3, 2).unwrap();
        let s = Complex::with_val(152, (1.5, -0.5));
        let mut l = LiLadder::new(&s, z, 152);
        for m in [0usize, 1, 3, 17, 40, 90, 300] {
            let v = l.get(m, &mut c).unwrap().clone();
            let d = li_raw(&Complex::with_val(152, &s + m as u32), z, 152, &mut c).unwrap();
            assert!(close(&v, &d, 146), "m={m}");
        }
    }
}
