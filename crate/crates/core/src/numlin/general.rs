//! General (non-Hermitian) eigenproblem: Householder reduction to Hessenberg
//! form, shifted complex QR for the eigenvalues, inverse iteration for the
//! eigenvectors.

use std::f64::consts::TAU;

use super::lu::Lu;
use super::matrix::{unit_phase, vec_dot, vec_norm, CMatrix, C64, ZERO};
use super::svd::singular_values;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const QR_MAX_ITER_PER_EIG: usize = 60;
const INVERSE_ITERATIONS: usize = 4;

/// `a = V diag(lambda) V^{-1}`, lambda ordered by modulus descending with
/// ties broken by argument in `[0, 2pi)` and then by discovery order.
#[derive(Debug, Clone)]
pub struct EigenG {
    pub v: CMatrix,
    pub lambda: Vec<C64>,
    pub condition_estimate: f64,
}

pub fn eig_general(a: &CMatrix) -> Result<EigenG> {
    eig_general_with(a, &Tolerances::default())
}

pub fn eig_general_with(a: &CMatrix, tol: &Tolerances) -> Result<EigenG> {
    a.ensure_square("eig_general")?;
    a.ensure_finite("eig_general")?;
    let raw = eigenvalues(a)?;
    let order = spectral_order(&raw, tol.group_tol);
    let lambda: Vec<C64> = order.iter().map(|&i| raw[i]).collect();
    let v = eigenvectors(a, &lambda)?;
    let s = singular_values(&v)?;
    let smin = *s.last().unwrap();
    let condition_estimate = if smin > 0.0 { s[0] / smin } else { f64::INFINITY };
    if !(condition_estimate <= tol.cond_max) {
        return Err(Error::DefectiveOrIllConditioned {
            condition: condition_estimate,
        });
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for (k, &lam) in lambda.iter().enumerate() {
        let x = v.column(k);
        let ax = a.mul_vec(&x);
        let res = vec_norm(&ax.iter().zip(&x).map(|(p, q)| p - lam * q).collect::<Vec<_>>());
        if res > 1e-8 * scale {
            return Err(Error::DefectiveOrIllConditioned {
                condition: condition_estimate.max(res / (f64::EPSILON * scale)),
            });
        }
    }
    Ok(EigenG {
        v,
        lambda,
        condition_estimate,
    })
}

/// Argument in `[0, 2pi)`, with negligible imaginary parts read as zero.
pub fn principal_arg(z: C64) -> f64 {
    if z.im.abs() <= 1e-14 * z.norm() {
        return if z.re < 0.0 { std::f64::consts::PI } else { 0.0 };
    }
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Index permutation sorting `values` by modulus descending; moduli within
/// `group_tol` (relative) tie and are then ordered by argument, then index.
pub fn spectral_order(values: &[C64], group_tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].norm().total_cmp(&values[i].norm()).then(i.cmp(&j)));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let head = values[idx[start]].norm();
        let mut end = start + 1;
        while end < idx.len() && same_modulus(head, values[idx[end]].norm(), group_tol) {
            end += 1;
        }
        let mut run = idx[start..end].to_vec();
        run.sort_by(|&i, &j| {
            principal_arg(values[i])
                .total_cmp(&principal_arg(values[j]))
                .then(i.cmp(&j))
        });
        out.extend(run);
        start = end;
    }
    out
}

pub(crate) fn same_modulus(a: f64, b: f64, group_tol: f64) -> bool {
    let hi = a.max(b);
    let lo = a.min(b);
    if hi <= crate::tolerance::ABS_FLOOR {
        return true;
    }
    lo > hi * (1.0 - group_tol)
}

/// Eigenvalues in the order the QR iteration deflates them.
fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let n = a.rows();
    let mut h = hessenberg(a);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // find the top of the active unreduced block
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= eps * diag || sub <= f64::MIN_POSITIVE * 1e3 {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > QR_MAX_ITER_PER_EIG {
            return Err(Error::NoConvergence {
                op: "eig_general",
                iterations: total,
            });
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let nx = vec_norm(&x);
        if nx == 0.0 {
            continue;
        }
        let mut v = x;
        let alpha = -unit_phase(v[0]) * nx;
        v[0] -= alpha;
        let nv = vec_norm(&v);
        if nv == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= nv;
        }
        // H <- P H P, P = I - 2 v v*
        for j in 0..n {
            let d: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                let t = v[i - k - 1] * d * 2.0;
                h[(i, j)] -= t;
            }
        }
        for i in 0..n {
            let d: C64 = (k + 1..n).map(|j| h[(i, j)] * v[j - k - 1]).sum();
            for j in k + 1..n {
                let t = d * v[j - k - 1].conj() * 2.0;
                h[(i, j)] -= t;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let r1 = mean + disc;
    let r2 = mean - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One explicitly shifted QR step on the Hessenberg block `[l, hi]`.
fn qr_step(h: &mut CMatrix, l: usize, hi: usize, shift: C64) {
    for i in l..=hi {
        h[(i, i)] -= shift;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let (c, s) = givens(x, y);
        for j in k..=hi {
            let p = h[(k, j)];
            let q = h[(k + 1, j)];
            h[(k, j)] = p * c + s * q;
            h[(k + 1, j)] = -s.conj() * p + q * c;
        }
        h[(k + 1, k)] = ZERO;
        rots.push((c, s));
    }
    for (off, &(c, s)) in rots.iter().enumerate() {
        let k = l + off;
        let top = (k + 2).min(hi);
        for i in l..=top {
            let p = h[(i, k)];
            let q = h[(i, k + 1)];
            h[(i, k)] = p * c + s.conj() * q;
            h[(i, k + 1)] = -s * p + q * c;
        }
    }
    for i in l..=hi {
        h[(i, i)] += shift;
    }
}

/// `(c, s)` with `[[c, s], [-s*, c]] (x, y)^T = (r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let alpha = x / ax;
    (ax / r, alpha * y.conj() / r)
}

/// Inverse iteration per eigenvalue; vectors of (numerically) equal
/// eigenvalues are orthogonalized against each other.
fn eigenvectors(a: &CMatrix, lambda: &[C64]) -> Result<CMatrix> {
    let n = a.rows();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let cluster_tol = 1e-10 * scale;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &lam) in lambda.iter().enumerate() {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lam;
        }
        let lu = Lu::factor(&shifted)?;
        let lu = perturb_pivots(lu, &shifted, scale);
        let cluster: Vec<usize> = (0..k)
            .filter(|&j| (lambda[j] - lam).norm() <= cluster_tol)
            .collect();
        let mut x = start_vector(n, k);
        for _ in 0..INVERSE_ITERATIONS {
            let mut y = lu.solve_vec(&x);
            if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                y = x.clone();
            }
            for _ in 0..2 {
                for &j in &cluster {
                    let d = vec_dot(&cols[j], &y);
                    for (z, p) in y.iter_mut().zip(&cols[j]) {
                        *z -= d * p;
                    }
                }
            }
            let ny = vec_norm(&y);
            if ny == 0.0 || !ny.is_finite() {
                break;
            }
            x = y.iter().map(|z| z / ny).collect();
        }
        let ph = unit_phase(x[argmax_abs(&x)]).conj();
        cols.push(x.iter().map(|z| z * ph).collect());
    }
    Ok(CMatrix::from_columns(&cols))
}

fn argmax_abs(x: &[C64]) -> usize {
    let mut best = 0;
    for i in 1..x.len() {
        if x[i].norm() > x[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    best
}

/// Re-factors with a tiny diagonal nudge when the exact shift is singular.
fn perturb_pivots(lu: Lu, shifted: &CMatrix, scale: f64) -> Lu {
    let floor = f64::EPSILON * scale;
    if lu.min_pivot > floor {
        return lu;
    }
    let mut m = shifted.clone();
    for i in 0..m.rows() {
        m[(i, i)] += C64::new(floor * 10.0, floor * 3.0);
    }
    Lu::factor(&m).unwrap_or(lu)
}

/// Deterministic, non-degenerate start vectors.
fn start_vector(n: usize, k: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|i| {
            let t = ((i + 1) * (k + 3)) as f64;
            C64::new(1.0 + (t * 0.7548776662).fract(), (t * 0.5698402910).fract() - 0.5)
        })
        .collect();
    let nv = vec_norm(&v);
    v.into_iter().map(|z| z / nv).collect()
}
