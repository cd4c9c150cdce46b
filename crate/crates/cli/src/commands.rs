use std::io::{self, Write};

use polylog_core::analytic::{format_float, lerch_direct, li_continue, zeta_continue, MIN_PRECISION};
use polylog_core::exact_identities::{
    congruence_scan, recurrence_scan, zseries_check, zseries_representation, RecurrenceKind,
};
use polylog_core::identity::{
    default_grid, instantiate, verify_all, verify_sampled, EvalMode, IdentityId, IdentityInstance,
};
use polylog_core::special_sequences::{bernoulli_number, tangent_number, BernoulliCache};
use polylog_core::{BigRational, ComplexHP, Error, EvalContext, RootOfUnity};
use rug::Complex;
use serde_json::json;

use crate::args::{Cli, Command, EvalArgs, Function, PrecArg, VerifyArgs, Which};

const DEFAULT_PREC: u32 = 128;
const PREC_ENV: &str = "POLYLOG_PREC";
/// Largest modulus tried when `--k` is left out.
const K_SEARCH: u64 = 64;

pub enum Outcome {
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub enum CliError {
    Usage(String),
    Eval(Error),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Eval(e)
    }
}

type CliResult = Result<Outcome, CliError>;

fn usage(flag: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {detail}"))
}

fn precision(arg: &PrecArg) -> Result<u32, CliError> {
    let (bits, source) = match arg.bits {
        Some(b) => (b, "--prec"),
        None => match std::env::var(PREC_ENV) {
            Ok(v) => (
                v.trim()
                    .parse()
                    .map_err(|_| usage(PREC_ENV, format!("expected a bit count, got {v:?}")))?,
                PREC_ENV,
            ),
            Err(_) => (DEFAULT_PREC, "--prec"),
        },
    };
    if bits < MIN_PRECISION {
        return Err(usage(source, format!("precision {bits} is below the minimum {MIN_PRECISION}")));
    }
    Ok(bits)
}

fn context(arg: &PrecArg) -> Result<EvalContext, CliError> {
    let bits = precision(arg)?;
    EvalContext::new(bits).map_err(|e| usage("--prec", e))
}

fn root(q: Option<u64>, j: Option<u64>) -> Result<RootOfUnity, CliError> {
    let q = q.unwrap_or(1);
    let j = j.unwrap_or(if q == 1 { 0 } else { 1 });
    RootOfUnity::new(q, j).map_err(|e| match e {
        Error::NotPrimitiveRoot { .. } => usage("--j", e),
        _ => usage("--q", e),
    })
}

pub fn run(cli: Cli, out: &mut impl Write) -> CliResult {
    match cli.command {
        Command::Bern { n } => {
            let mut cache = BernoulliCache::new();
            writeln!(out, "{}", bernoulli_number(&mut cache, n as usize))?;
            Ok(Outcome::Pass)
        }
        Command::Tangent { n, modulus } => {
            if n == 0 {
                return Err(usage("N", "tangent numbers start at N = 1"));
            }
            let t = tangent_number(&mut BernoulliCache::new(), n)?;
            match modulus {
                Some(m) => writeln!(out, "{}", t.mod_u(m))?,
                None => writeln!(out, "{t}")?,
            }
            Ok(Outcome::Pass)
        }
        Command::Eval(args) => eval(args, out),
        Command::Verify(args) => verify(args, out),
        Command::VerifyAll { json, seed, prec } => {
            let ctx = context(&prec)?;
            let reports = verify_all(&ctx, seed)?;
            let pass = reports.iter().all(|r| r.pass);
            if json {
                let docs: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "reports": docs, "pass": pass })).expect("json"))?;
            } else {
                for r in &reports {
                    writeln!(out, "{}", r.summary())?;
                }
                let passed = reports.iter().filter(|r| r.pass).count();
                let identities = IdentityId::ALL.len();
                writeln!(out, "{passed}/{} instances passed across {identities} identities", reports.len())?;
            }
            if let Some(e) = reports.iter().flat_map(|r| r.errors()).find_map(|p| p.error.clone()) {
                return Err(CliError::Eval(e));
            }
            Ok(pass.into())
        }
        Command::Recurrence { which, n_max, k, json } => {
            let kind = match which {
                Which::Thm41 => RecurrenceKind::Thm41,
                Which::K3 => RecurrenceKind::K3,
                Which::Negint => RecurrenceKind::Negint,
                Which::Tangent3 => RecurrenceKind::Tangent3,
                Which::Tangent5 => RecurrenceKind::Tangent5,
            };
            if k.is_some() && !kind.uses_k() {
                return Err(usage("--k", format!("{} takes no modulus", kind.name())));
            }
            let k = k.unwrap_or(3);
            let rows = recurrence_scan(kind, n_max, k).map_err(|e| match e {
                Error::InvalidModulus { .. } => usage("--k", e),
                other => CliError::Eval(other),
            })?;
            let pass = rows.iter().all(|r| r.pass);
            if json {
                let doc = json!({
                    "which": kind.name(),
                    "k": kind.uses_k().then_some(k),
                    "n_max": n_max,
                    "rows": rows,
                    "pass": pass,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
            } else {
                for r in &rows {
                    let verdict = if r.pass { "pass" } else { "FAIL" };
                    match r.k {
                        Some(k) => writeln!(out, "n={} k={k} {verdict}", r.n)?,
                        None => writeln!(out, "n={} {verdict}", r.n)?,
                    }
                }
                let verdict = if pass { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict} {} for 1 <= n <= {n_max}", kind.name())?;
            }
            Ok(pass.into())
        }
        Command::Congruence { max_n, json } => {
            if max_n < 2 {
                return Err(usage("--max", "the scan needs N >= 2"));
            }
            let report = congruence_scan(max_n)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("json"))?;
            } else {
                writeln!(out, "n mod2 mod3 mod5 mod10 T_n")?;
                for r in &report.rows {
                    let mark = if r.pass { "" } else { "  FAIL" };
                    writeln!(out, "{} {} {} {} {} {}{mark}", r.n, r.mod2, r.mod3, r.mod5, r.mod10, r.t)?;
                }
                writeln!(out, "T_1 = {} (the odd exception)", report.exception)?;
                let verdict = if report.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict} congruences for 2 <= n <= {max_n}")?;
            }
            Ok(report.pass.into())
        }
        Command::Zseries { x, terms, prec } => {
            let mut ctx = context(&prec)?;
            let rep = zseries_representation(&x, terms as usize)?;
            let check = zseries_check(&rep, &mut ctx)?;
            for (m, c) in rep.coefficients.iter().enumerate() {
                writeln!(out, "c_{} = {c}", m + 1)?;
            }
            writeln!(out, "partial_sum = {}", format_float(&check.partial_sum, 30))?;
            writeln!(out, "error = {}", format_float(&check.error, 6))?;
            writeln!(out, "envelope = {}", format_float(&check.envelope, 6))?;
            writeln!(out, "{}", if check.pass { "PASS" } else { "FAIL" })?;
            Ok(check.pass.into())
        }
        Command::List { json } => {
            if json {
                let items: Vec<_> = IdentityId::ALL
                    .iter()
                    .map(|id| {
                        let (q, j, k) = id.default_params();
                        json!({
                            "name": id.name(),
                            "predicate": id.predicate(),
                            "formula": id.formula(),
                            "default": { "q": q, "j": j, "k": k },
                            "grid_size": default_grid(*id).len(),
                        })
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&items).expect("json"))?;
            } else {
                for id in IdentityId::ALL {
                    writeln!(out, "{:<15} {}", id.name(), id.predicate())?;
                    writeln!(out, "{:<15} {}", "", id.formula())?;
                }
            }
            Ok(Outcome::Pass)
        }
    }
}

fn eval(args: EvalArgs, out: &mut impl Write) -> CliResult {
    let mut ctx = context(&args.prec)?;
    let s = ComplexHP::parse(&args.s, ctx.precision()).map_err(|e| usage("--s", e))?;
    let z = root(args.q, args.j)?;
    if args.a.is_some() && args.function != Function::Lerch {
        return Err(usage("--a", "only lerch takes a parameter a"));
    }
    if args.function == Function::Zeta && (args.q.is_some() || args.j.is_some()) {
        return Err(usage(if args.q.is_some() { "--q" } else { "--j" }, "zeta takes no root of unity"));
    }
    let value = match args.function {
        Function::Li => li_continue(&s, z, &mut ctx)?,
        Function::Zeta => zeta_continue(&s, &mut ctx)?,
        Function::Lerch => {
            let a = args.a.unwrap_or_else(|| BigRational::from(1));
            if a.cmp0().is_le() {
                return Err(usage("--a", "a must be positive"));
            }
            if a == 1 {
                // φ(s,1,z) = Li_z(s)/z, which continues past the half-plane
                let li = li_continue(&s, z, &mut ctx)?;
                let inv = z.pow(-1).to_complex(ctx.working_precision());
                ComplexHP::from_complex(Complex::with_val(ctx.precision(), li.as_complex() * inv))
            } else {
                lerch_direct(&s, &a, z, &mut ctx)?
            }
        }
    };
    writeln!(out, "{value}")?;
    Ok(Outcome::Pass)
}

fn instance(args: &VerifyArgs) -> Result<IdentityInstance, CliError> {
    let id: IdentityId = args.identity.parse().map_err(|e| usage("--identity", e))?;
    let (dq, dj, dk) = id.default_params();
    let q = args.q.unwrap_or(dq);
    let j = args.j.unwrap_or(if args.q.is_none() { dj } else if q == 1 { 0 } else { 1 });
    let diagnose = |e: Error| match e {
        Error::InvalidModulus { .. } => usage("--k", e),
        Error::NotPrimitiveRoot { .. } => usage("--j", e),
        other => usage("--q", other),
    };
    let inst = match args.k {
        Some(k) => instantiate(id, q, j, k).map_err(diagnose)?,
        None if args.q.is_none() && args.j.is_none() => instantiate(id, q, j, dk).map_err(diagnose)?,
        None => (2..=K_SEARCH)
            .find_map(|k| instantiate(id, q, j, k).ok())
            .ok_or_else(|| diagnose(instantiate(id, q, j, dk).expect_err("no valid k")))?,
    };
    match args.terms {
        Some(_) if id != IdentityId::ZetaSeries => Err(usage("--terms", "only zeta-series takes a term count")),
        Some(t) => Ok(inst.with_terms(t)),
        None => Ok(inst),
    }
}

fn verify(args: VerifyArgs, out: &mut impl Write) -> CliResult {
    let mut ctx = context(&args.prec)?;
    let inst = instance(&args)?;
    let mode = if args.continued {
        EvalMode::Continued
    } else {
        EvalMode::HalfPlane
    };
    let report = verify_sampled(&inst, args.points as usize, args.seed, mode, &mut ctx)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("json"))?;
    } else {
        for p in &report.points {
            let (re, im) = p.s.to_decimal_pair(12);
            match (&p.residual, &p.error) {
                (Some(r), _) => writeln!(out, "s = {re},{im} residual = {}", format_float(r, 6))?,
                (None, Some(e)) => writeln!(out, "s = {re},{im} error: {e}")?,
                (None, None) => unreachable!("a point has a residual or an error"),
            }
        }
        writeln!(out, "{}", report.summary())?;
    }
    if let Some(e) = report.errors().find_map(|p| p.error.clone()) {
        return Err(CliError::Eval(e));
    }
    Ok(report.pass.into())
}
