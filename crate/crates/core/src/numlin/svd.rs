use super::jacobi::scaled_hestenes;
use super::matrix::{vec_dot, vec_norm, CMatrix, C64, ZERO};
use crate::error::Result;

/// `a = U diag(s) V*` with `s` descending; `U` is `m x k`, `V` is `n x k`,
/// `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

/// One-sided Jacobi SVD: singular values carry an absolute error of order
/// `eps * s_1` instead of the `sqrt(eps) * s_1` a Gram-matrix route gives.
pub fn svd(a: &CMatrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint())?;
        return Ok(SvdFactors {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    a.ensure_finite("svd")?;
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut logs = Vec::with_capacity(n);
    for j in 0..n {
        let mut c = a.column(j);
        let nr = vec_norm(&c);
        if nr > 0.0 {
            for z in c.iter_mut() {
                *z /= nr;
            }
            logs.push(nr.ln());
        } else {
            logs.push(f64::NEG_INFINITY);
        }
        cols.push(c);
    }
    let (v, logs) = scaled_hestenes(&mut cols, logs)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| logs[j].total_cmp(&logs[i]).then(i.cmp(&j)));
    let s: Vec<f64> = order.iter().map(|&k| logs[k].exp()).collect();
    let v = v.select_columns(&order);
    let thresh = s.first().copied().unwrap_or(0.0) * 1e-13;
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (&k, &sk) in order.iter().zip(&s) {
        if sk > thresh && sk > 0.0 {
            let mut u = cols[k].clone();
            // one reorthogonalization pass keeps U orthonormal when s_k is small
            for prev in &ucols {
                let d = vec_dot(prev, &u);
                for (z, p) in u.iter_mut().zip(prev) {
                    *z -= d * p;
                }
            }
            let nu = vec_norm(&u);
            if nu > 0.5 {
                for z in u.iter_mut() {
                    *z /= nu;
                }
                ucols.push(u);
                continue;
            }
        }
        ucols.push(complete_basis(&ucols, m));
    }
    Ok(SvdFactors {
        u: CMatrix::from_columns(&ucols),
        s,
        v,
    })
}

pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.s)
}

/// Spectral norm `s_1(a)`.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// A unit vector orthogonal to `basis` (Gram-Schmidt on standard vectors).
fn complete_basis(basis: &[Vec<C64>], m: usize) -> Vec<C64> {
    let mut best: Option<Vec<C64>> = None;
    let mut best_norm = 0.0;
    for k in 0..m {
        let mut e = vec![ZERO; m];
        e[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis {
                let d = vec_dot(b, &e);
                for (z, p) in e.iter_mut().zip(b) {
                    *z -= d * p;
                }
            }
        }
        let nr = vec_norm(&e);
        if nr > best_norm {
            best_norm = nr;
            best = Some(e);
        }
        if nr > 0.5 {
            break;
        }
    }
    let mut e = best.unwrap_or_else(|| vec![ZERO; m]);
    for z in e.iter_mut() {
        *z /= best_norm;
    }
    e
}
