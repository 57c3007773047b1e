use std::fmt::Write as _;

use super::graded::{graded_root, GradedRoot};
use super::predict::{is_nonsingular, predicted_limit, Side};
use crate::error::{Error, Result};
use crate::jordan::{power_scaled, JordanSpec};
use crate::numlin::{spectral_norm, svd, CMatrix, PsdMatrix};

/// Largest exponent accepted in a schedule.
pub const MAX_EXPONENT: u64 = 1 << 30;

/// Iterates `|B A^m C|^{1/m}` along a schedule with their distances to the
/// predicted limit.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub schedule: Vec<u64>,
    pub iterates: Vec<PsdMatrix>,
    /// `s_i(B A^m C)^{1/m}`, descending, per schedule entry.
    pub sv_roots: Vec<Vec<f64>>,
    pub frob_errors: Vec<f64>,
    pub spec_errors: Vec<f64>,
    pub sv_errors: Vec<f64>,
    pub limit: CMatrix,
}

impl ConvergenceReport {
    /// Compares `roots` (one per schedule entry) to `limit` and its spectrum `d`.
    pub fn from_roots(schedule: Vec<u64>, roots: Vec<GradedRoot>, limit: CMatrix, d: &[f64]) -> Result<Self> {
        let mut frob_errors = Vec::with_capacity(roots.len());
        let mut spec_errors = Vec::with_capacity(roots.len());
        let mut sv_errors = Vec::with_capacity(roots.len());
        let mut iterates = Vec::with_capacity(roots.len());
        let mut sv_roots = Vec::with_capacity(roots.len());
        for r in roots {
            let diff = r.root.matrix() - &limit;
            frob_errors.push(diff.frob_norm());
            spec_errors.push(spectral_norm(&diff)?);
            sv_errors.push(
                r.sv_roots
                    .iter()
                    .zip(d)
                    .map(|(s, d)| (s - d).abs())
                    .fold(0.0, f64::max),
            );
            iterates.push(r.root);
            sv_roots.push(r.sv_roots);
        }
        Ok(ConvergenceReport {
            schedule,
            iterates,
            sv_roots,
            frob_errors,
            spec_errors,
            sv_errors,
            limit,
        })
    }

    /// `m,frob_error,spec_error,sv_error` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,frob_error,spec_error,sv_error\n");
        for k in 0..self.schedule.len() {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e}",
                self.schedule[k], self.frob_errors[k], self.spec_errors[k], self.sv_errors[k]
            )
            .unwrap();
        }
        out
    }

    pub fn final_frob_error(&self) -> f64 {
        self.frob_errors.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_sv_error(&self) -> f64 {
        self.sv_errors.last().copied().unwrap_or(f64::NAN)
    }

    /// Frobenius error at exponent `m`, if scheduled.
    pub fn frob_error_at(&self, m: u64) -> Option<f64> {
        self.schedule.iter().position(|&x| x == m).map(|k| self.frob_errors[k])
    }

    /// True if the last `k` Frobenius errors strictly decrease (ties at
    /// exactly zero count as decreasing).
    pub fn tail_decreasing(&self, k: usize) -> bool {
        let e = &self.frob_errors;
        let start = e.len().saturating_sub(k);
        e[start..].windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0))
    }
}

/// Powers of 4 from 4 to `2^16`.
pub fn default_schedule() -> Vec<u64> {
    geometric_schedule(4, 4, 1 << 16).unwrap()
}

/// `start, start*factor, ...` up to and including `max`.
pub fn geometric_schedule(start: u64, factor: u64, max: u64) -> Result<Vec<u64>> {
    if start == 0 {
        return Err(Error::InvalidSchedule("start must be >= 1".into()));
    }
    if factor < 2 {
        return Err(Error::InvalidSchedule("factor must be >= 2".into()));
    }
    if max > MAX_EXPONENT {
        return Err(Error::InvalidSchedule(format!("max exponent {max} exceeds 2^30")));
    }
    if start > max {
        return Err(Error::InvalidSchedule(format!("start {start} exceeds max {max}")));
    }
    let mut out = vec![start];
    let mut m = start;
    while let Some(next) = m.checked_mul(factor) {
        if next > max {
            break;
        }
        out.push(next);
        m = next;
    }
    Ok(out)
}

/// Strictly increasing, within `[min_m, 2^30]`.
pub fn validate_schedule(schedule: &[u64], min_m: u64) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule("schedule must be strictly increasing".into()));
    }
    let lo = min_m.max(1);
    if schedule[0] < lo {
        return Err(Error::InvalidSchedule(format!(
            "exponent {} below the minimum {lo} (largest nilpotent block)",
            schedule[0]
        )));
    }
    if *schedule.last().unwrap() > MAX_EXPONENT {
        return Err(Error::InvalidSchedule("exponent exceeds 2^30".into()));
    }
    Ok(())
}

/// `|B A^m C|^{1/m}` (right) or `|B A^m C|'^{1/m}` (left) through the
/// graded engine.
pub fn iterate_root(spec: &JordanSpec, b: &CMatrix, c: &CMatrix, m: u64, side: Side) -> Result<GradedRoot> {
    match side {
        Side::Right => graded_root(spec, b, c, m),
        // |X|' = |X*| and X* = C* (A*)^m B*
        Side::Left => graded_root(&spec.adjoint()?, &c.adjoint(), &b.adjoint(), m),
    }
}

/// The same root computed literally: `X = B (A^m / gamma_1^m) C`, `|X|`
/// from an SVD and each singular value mapped to
/// `exp((ln s + log_scale) / m)`. Only reliable while the spread of
/// `A^m`'s singular values stays within double precision.
pub fn direct_root(spec: &JordanSpec, b: &CMatrix, c: &CMatrix, m: u64, side: Side) -> Result<GradedRoot> {
    let p = power_scaled(spec, m)?;
    let mut x = &(b * &p.base) * c;
    if side == Side::Left {
        x = x.adjoint();
    }
    let f = svd(&x)?;
    let mf = m as f64;
    let sv_roots: Vec<f64> = f
        .s
        .iter()
        .map(|&s| if s > 0.0 { ((s.ln() + p.log_scale) / mf).exp() } else { 0.0 })
        .collect();
    Ok(GradedRoot {
        root: PsdMatrix::from_eigen(f.v, sv_roots.clone()),
        sv_roots,
    })
}

/// Runs the schedule, `jobs` entries at a time, and measures each iterate
/// against the closed-form limit. The report does not depend on `jobs`.
pub fn iterate_limit(
    spec: &JordanSpec,
    b: &CMatrix,
    c: &CMatrix,
    schedule: &[u64],
    side: Side,
    jobs: usize,
) -> Result<ConvergenceReport> {
    validate_schedule(schedule, spec.max_zero_block() as u64)?;
    if !is_nonsingular(b)? {
        return Err(Error::SingularB);
    }
    if !is_nonsingular(c)? {
        return Err(Error::SingularC);
    }
    let predicted = predicted_limit(spec, b, c, side)?;
    let left_spec = if side == Side::Left { Some(spec.adjoint()?) } else { None };
    let (spec_used, b_used, c_used) = match &left_spec {
        Some(s) => (s, c.adjoint(), b.adjoint()),
        None => (spec, b.clone(), c.clone()),
    };
    let roots = run_parallel(schedule, jobs, |m| graded_root(spec_used, &b_used, &c_used, m))?;
    ConvergenceReport::from_roots(schedule.to_vec(), roots, predicted.matrix().clone(), &predicted.d)
}

/// Evaluates `f` on every schedule entry with up to `jobs` threads,
/// returning results in schedule order.
pub fn run_parallel<T, F>(schedule: &[u64], jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let jobs = jobs.max(1).min(schedule.len().max(1));
    if jobs == 1 {
        return schedule.iter().map(|&m| f(m)).collect();
    }
    let mut slots: Vec<Option<Result<T>>> = (0..schedule.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let chunks: Vec<_> = slots
            .chunks_mut(schedule.len().div_ceil(jobs))
            .zip(schedule.chunks(schedule.len().div_ceil(jobs)))
            .map(|(out, ms)| {
                scope.spawn(move || {
                    for (slot, &m) in out.iter_mut().zip(ms) {
                        *slot = Some(f(m));
                    }
                })
            })
            .collect();
        for h in chunks {
            h.join().expect("worker panicked");
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}
