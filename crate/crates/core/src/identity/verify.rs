use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float};
use serde_json::{json, Value};

use super::catalog::{default_grid, IdentityId, IdentityInstance};
use super::eval::{eval_sides_raw, EvalMode};
use crate::analytic::{format_float, ComplexHP, EvalContext};
use crate::error::{Error, Result};

/// Points sampled per identity when none are given.
pub const DEFAULT_POINTS: usize = 10;

/// Outcome at one evaluation point.
#[derive(Clone, Debug)]
pub struct PointResidual {
    pub s: ComplexHP,
    pub lhs: Option<ComplexHP>,
    pub rhs: Option<ComplexHP>,
    /// `|LHS − RHS|` at the working precision, absent when evaluation failed
    pub residual: Option<Float>,
    pub error: Option<Error>,
}

/// Residuals of one identity instance over a list of points.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub instance: IdentityInstance,
    pub mode: EvalMode,
    pub precision: u32,
    pub guard_bits: u32,
    pub seed: Option<u64>,
    pub points: Vec<PointResidual>,
    pub max_residual: Float,
    /// `max(1, |LHS|)` over the points
    pub scale: Float,
    /// `2^{−(p−g−8)}·scale`
    pub tolerance: Float,
    pub pass: bool,
}

impl ResidualReport {
    pub fn errors(&self) -> impl Iterator<Item = &PointResidual> {
        self.points.iter().filter(|p| p.error.is_some())
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let (re, im) = p.s.to_decimal_pair(20);
                let mut v = json!({
                    "re": re,
                    "im": im,
                    "residual": p.residual.as_ref().map_or_else(|| "nan".to_string(), |r| format_float(r, 10)),
                });
                if let Some(e) = &p.error {
                    v["error"] = json!(e.to_string());
                }
                v
            })
            .collect();
        json!({
            "identity": self.instance.id().name(),
            "q": self.instance.q(),
            "j": self.instance.j(),
            "k": self.instance.k(),
            "precision_bits": self.precision,
            "seed": self.seed,
            "points": points,
            "max_residual": format_float(&self.max_residual, 10),
            "pass": self.pass,
        })
    }

    /// One line per report: verdict, instance, worst residual and tolerance.
    pub fn summary(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{verdict} {} max_residual={} tolerance={}",
            self.instance,
            format_float(&self.max_residual, 6),
            format_float(&self.tolerance, 6)
        );
        let failed = self.errors().count();
        if failed > 0 {
            line.push_str(&format!(" errors={failed}"));
        }
        line
    }
}

/// `n` points with `Re(s)` uniform in `(1.1, 4)` and `Im(s)` uniform in `(−5, 5)`.
pub fn sample_points(n: usize, seed: u64, prec: u32) -> Vec<ComplexHP> {
    sample_in(n, seed, prec, (1.1, 4.0))
}

/// `n` points left of the half-plane, `Re(s)` uniform in `(−3, 0.75)`.
pub fn sample_continued_points(n: usize, seed: u64, prec: u32) -> Vec<ComplexHP> {
    sample_in(n, seed, prec, (-3.0, 0.75))
}

fn sample_in(n: usize, seed: u64, prec: u32, re: (f64, f64)) -> Vec<ComplexHP> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.gen_range(re.0..re.1);
            let y = rng.gen_range(-5.0..5.0);
            ComplexHP::new(prec, x, y)
        })
        .collect()
}

fn eval_point(inst: &IdentityInstance, s: &ComplexHP, mode: EvalMode, ctx: &mut EvalContext) -> PointResidual {
    match eval_sides_raw(inst, s, mode, ctx) {
        Ok((lhs, rhs)) => {
            let d = Complex::with_val(ctx.working_precision(), &lhs - &rhs);
            let p = ctx.precision();
            PointResidual {
                s: s.clone(),
                residual: Some(Float::with_val(64, d.abs_ref())),
                lhs: Some(ComplexHP::from_complex(Complex::with_val(p, lhs))),
                rhs: Some(ComplexHP::from_complex(Complex::with_val(p, rhs))),
                error: None,
            }
        }
        Err(e) => PointResidual {
            s: s.clone(),
            lhs: None,
            rhs: None,
            residual: None,
            error: Some(e),
        },
    }
}

/// Verifies at the given half-plane points.
pub fn verify(inst: &IdentityInstance, points: &[ComplexHP], ctx: &mut EvalContext) -> Result<ResidualReport> {
    verify_in(inst, points, EvalMode::HalfPlane, ctx)
}

/// Verifies at the given points; failures at a point are recorded, not raised.
///
/// With a single worker the points run in order on `ctx`. Otherwise the point
/// furthest left runs first on `ctx`, filling the weight caches, and the rest
/// run in parallel, each worker on its own copy.
pub fn verify_in(
    inst: &IdentityInstance,
    points: &[ComplexHP],
    mode: EvalMode,
    ctx: &mut EvalContext,
) -> Result<ResidualReport> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let results: Vec<PointResidual> = if rayon::current_num_threads() == 1 {
        points.iter().map(|s| eval_point(inst, s, mode, ctx)).collect()
    } else {
        let lead = (0..points.len())
            .min_by(|&a, &b| points[a].re_f64().total_cmp(&points[b].re_f64()))
            .expect("nonempty");
        let first = eval_point(inst, &points[lead], mode, ctx);
        let template: &EvalContext = ctx;
        let mut rest: Vec<Option<PointResidual>> = points
            .par_iter()
            .enumerate()
            .map_init(
                || template.clone(),
                |local, (i, s)| (i != lead).then(|| eval_point(inst, s, mode, local)),
            )
            .collect();
        rest[lead] = Some(first);
        rest.into_iter().map(|r| r.expect("every point evaluated")).collect()
    };

    let one = Float::with_val(64, 1);
    let mut scale = one.clone();
    let mut max_residual = Float::with_val(64, 0);
    for r in &results {
        if let Some(l) = &r.lhs {
            scale.max_mut(&l.abs());
        }
        if let Some(res) = &r.residual {
            max_residual.max_mut(res);
        }
    }
    let exponent = -(ctx.precision() as i32 - ctx.guard_bits() as i32 - 8);
    let tolerance = Float::with_val(64, Float::i_exp(1, exponent)) * &scale;
    let pass = results.iter().all(|r| r.error.is_none()) && max_residual < tolerance;
    Ok(ResidualReport {
        instance: inst.clone(),
        mode,
        precision: ctx.precision(),
        guard_bits: ctx.guard_bits(),
        seed: None,
        points: results,
        max_residual,
        scale,
        tolerance,
        pass,
    })
}

/// Verifies at `n` seeded random points of the region for `mode`.
pub fn verify_sampled(
    inst: &IdentityInstance,
    n: usize,
    seed: u64,
    mode: EvalMode,
    ctx: &mut EvalContext,
) -> Result<ResidualReport> {
    let prec = ctx.precision();
    let points = match mode {
        EvalMode::HalfPlane => sample_points(n, seed, prec),
        EvalMode::Continued => sample_continued_points(n, seed, prec),
    };
    let mut report = verify_in(inst, &points, mode, ctx)?;
    report.seed = Some(seed);
    Ok(report)
}

/// Every identity over its default parameter grid, `DEFAULT_POINTS` half-plane points each.
///
/// Families run in parallel; instances of one family share a context, so
/// tables that depend only on `q` are built once.
pub fn verify_all(ctx: &EvalContext, seed: u64) -> Result<Vec<ResidualReport>> {
    let families: Vec<Vec<ResidualReport>> = IdentityId::ALL
        .par_iter()
        .map(|&id| {
            let mut local = ctx.clone();
            default_grid(id)
                .iter()
                .map(|inst| verify_sampled(inst, DEFAULT_POINTS, seed, EvalMode::HalfPlane, &mut local))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(families.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::instantiate;

    #[test]
    fn empty_points_are_rejected() {
        let inst = instantiate(IdentityId::Ramaswami3, 1, 0, 3).unwrap();
        let mut ctx = EvalContext::default();
        assert!(matches!(verify(&inst, &[], &mut ctx), Err(Error::EmptyPoints)));
    }

    #[test]
    fn ramaswami_three_passes_at_random_points() {
        let inst = instantiate(IdentityId::Ramaswami3, 1, 0, 3).unwrap();
        let mut ctx = EvalContext::default();
        let report = verify_sampled(&inst, 10, 5, EvalMode::HalfPlane, &mut ctx).unwrap();
        assert!(report.pass, "{}", report.summary());
        assert_eq!(report.points.len(), 10);
        for p in &report.points {
            let re = p.s.re_f64();
            assert!(re > 1.1 && re < 4.0 && p.s.im_f64().abs() < 5.0);
        }
    }

    #[test]
    fn trans_sub_passes_with_zero_lhs() {
        let inst = instantiate(IdentityId::TransSub, 2, 1, 3).unwrap();
        let mut ctx = EvalContext::default();
        let report = verify(&inst, &[ComplexHP::new(128, 2.0, 0.0)], &mut ctx).unwrap();
        assert!(report.pass);
        assert_eq!(report.scale, 1);
        assert!(report.points[0].lhs.as_ref().unwrap().as_complex().is_zero());
    }

    #[test]
    fn failures_are_recorded_per_point() {
        let inst = instantiate(IdentityId::TransMain, 3, 1, 4).unwrap();
        let mut ctx = EvalContext::default();
        let points = [ComplexHP::new(128, 2.0, 1.0), ComplexHP::new(128, 0.5, 0.0)];
        let report = verify(&inst, &points, &mut ctx).unwrap();
        assert!(!report.pass);
        assert!(report.points[0].error.is_none());
        assert!(report.points[1].error.is_some());
        assert_eq!(report.errors().count(), 1);
    }

    #[test]
    fn sampling_is_deterministic_and_ordered() {
        let a = sample_points(10, 42, 128);
        let b = sample_points(10, 42, 128);
        assert_eq!(a, b);
        assert_ne!(a, sample_points(10, 43, 128));
        let inst = instantiate(IdentityId::Ramaswami2, 1, 0, 2).unwrap();
        let mut ctx = EvalContext::default();
        let report = verify(&inst, &a, &mut ctx).unwrap();
        for (p, s) in report.points.iter().zip(&a) {
            assert_eq!(&p.s, s);
        }
    }

    #[test]
    fn json_shape() {
        let inst = instantiate(IdentityId::Ramaswami2, 1, 0, 2).unwrap();
        let mut ctx = EvalContext::default();
        let report = verify_sampled(&inst, 2, 7, EvalMode::HalfPlane, &mut ctx).unwrap();
        let v = report.to_json();
        assert_eq!(v["identity"], "ramaswami-2");
        assert_eq!(v["q"], 1);
        assert_eq!(v["k"], 2);
        assert_eq!(v["precision_bits"], 128);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["pass"], true);
        assert!(v["max_residual"].is_string());
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 2);
        for key in ["re", "im", "residual"] {
            assert!(pts[0][key].is_string());
        }
    }
}
