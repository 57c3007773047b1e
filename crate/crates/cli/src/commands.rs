use std::path::{Path, PathBuf};

use asympolar::asymlimit::{growth_exponent, iterate_limit, predicted_limit, LimitResult, Side};
use asympolar::io::{matrix_to_json, parse_matrix_file, MatrixBody, MatrixFile};
use asympolar::jordan::JordanSpec;
use asympolar::liebridge::{
    ad_consistency, group_cmjd_from_spec, lie_limit_from_parts, LieLimit, SlnElement,
};
use asympolar::random::{nonsingular, rng, SeededRng};
use asympolar::{CMatrix, Error, Tolerances};
use serde_json::{json, Value};

use crate::error::CliError;

/// Largest accepted gap between `Ad(limit)` and the prediction on `Ad` matrices.
pub const AD_PREDICTION_TOL: f64 = 1e-7;

pub fn load(path: &str) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: PathBuf::from(path),
        source,
    })?;
    parse_matrix_file(&text).map_err(|source| CliError::Parse {
        path: path.to_string(),
        source,
    })
}

/// `None` is the identity, `"random"` a seeded draw, anything else a file.
fn outer(arg: Option<&str>, n: usize, draws: &mut SeededRng) -> Result<CMatrix, CliError> {
    match arg {
        None => Ok(CMatrix::identity(n)),
        Some("random") => Ok(nonsingular(draws, n, 10.0, false)),
        Some(path) => Ok(load(path)?.matrix()),
    }
}

fn limit_json(r: &LimitResult) -> Value {
    json!({
        "limit": matrix_to_json(r.matrix()),
        "q": matrix_to_json(&r.q),
        "d": r.d,
        "gammas": r.gammas,
        "multiplicities": r.multiplicities,
        "side": r.side,
    })
}

#[derive(Debug, Clone, Default)]
pub struct PredictArgs {
    pub a: String,
    pub b: Option<String>,
    pub c: Option<String>,
    pub side: Side,
    pub seed: u64,
}

pub fn predict(args: &PredictArgs, tol: &Tolerances) -> Result<Value, CliError> {
    let spec = load(&args.a)?.spec(tol)?;
    let mut draws = rng(args.seed);
    let b = outer(args.b.as_deref(), spec.n(), &mut draws)?;
    let c = outer(args.c.as_deref(), spec.n(), &mut draws)?;
    Ok(limit_json(&predicted_limit(&spec, &b, &c, args.side)?))
}

#[derive(Debug, Clone)]
pub struct IterateArgs {
    pub a: String,
    pub b: Option<String>,
    pub c: Option<String>,
    pub schedule: Vec<u64>,
    pub side: Side,
    pub seed: u64,
    pub jobs: usize,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct IterateOutcome {
    pub csv: String,
    pub final_frob_error: f64,
    pub passed: bool,
}

impl IterateOutcome {
    pub fn summary(&self, tol: f64) -> String {
        format!(
            "final frob_error {:.6e} (tol {tol:.1e}): {}",
            self.final_frob_error,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

pub fn iterate(args: &IterateArgs, tol: &Tolerances) -> Result<IterateOutcome, CliError> {
    let spec = load(&args.a)?.spec(tol)?;
    let mut draws = rng(args.seed);
    let b = outer(args.b.as_deref(), spec.n(), &mut draws)?;
    let c = outer(args.c.as_deref(), spec.n(), &mut draws)?;
    let report = iterate_limit(&spec, &b, &c, &args.schedule, args.side, args.jobs)?;
    let final_frob_error = report.final_frob_error();
    Ok(IterateOutcome {
        csv: report.to_csv(),
        final_frob_error,
        passed: final_frob_error <= args.tol,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn classify(a: &str, x: &[asympolar::C64], schedule: &[u64], tol: &Tolerances) -> Result<Value, CliError> {
    let spec = load(a)?.spec(tol)?;
    let g = growth_exponent(&spec, x, schedule, tol)?;
    Ok(json!({
        "gamma": g.gamma,
        "j": g.classified_j,
        "estimate": g.estimate,
    }))
}

#[derive(Debug, Clone)]
pub struct LieArgs {
    pub g: String,
    pub g1: Option<String>,
    pub g2: Option<String>,
    pub m: u64,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct LieOutcome {
    pub report: Value,
    pub agree: bool,
}

fn sl_arg(path: Option<&str>, n: usize) -> Result<SlnElement, CliError> {
    match path {
        None => Ok(SlnElement::identity(n)),
        Some(p) => Ok(load(p)?.sl_element()?),
    }
}

pub fn lie(args: &LieArgs) -> Result<LieOutcome, CliError> {
    let file = load(&args.g)?;
    let g = file.sl_element()?;
    let g1 = sl_arg(args.g1.as_deref(), g.n())?;
    let g2 = sl_arg(args.g2.as_deref(), g.n())?;
    let (limit, consistency): (LieLimit, Option<Value>) = match &file.body {
        MatrixBody::Jordan(spec) => (from_spec(spec, &g2)?, None),
        MatrixBody::Dense(_) => {
            let c = ad_consistency(&g, &g1, &g2, args.m)?;
            let v = json!({
                "m": c.m,
                "prediction_gap": c.prediction_gap,
                "abs_gap": c.abs_gap,
                "iterate_error": c.iterate_error,
            });
            (c.limit, Some(v))
        }
    };
    let agree = match &consistency {
        Some(v) => {
            v["prediction_gap"].as_f64().unwrap() <= AD_PREDICTION_TOL && v["iterate_error"].as_f64().unwrap() <= args.tol
        }
        None => true,
    };
    let report = json!({
        "limit": matrix_to_json(&limit.limit),
        "k": matrix_to_json(&limit.k),
        "b": limit.b,
        "consistency": consistency,
        "agree": agree,
    });
    Ok(LieOutcome { report, agree })
}

fn from_spec(spec: &JordanSpec, g2: &SlnElement) -> Result<LieLimit, CliError> {
    if spec.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            op: "lie",
            left: (spec.n(), spec.n()),
            right: (g2.n(), g2.n()),
        }
        .into());
    }
    let cm = group_cmjd_from_spec(spec)?;
    Ok(lie_limit_from_parts(&cm.q, &cm.b, g2)?)
}
