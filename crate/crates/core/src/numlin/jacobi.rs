//! One-sided (Hestenes) Jacobi on columns carried as unit vectors times
//! `exp(log_scale)`. Rotations only ever see the ratio of two scales, so
//! columns whose norms differ by far more than the double range are
//! orthogonalized correctly.

use super::matrix::{vec_dot, vec_norm, CMatrix, C64};
use crate::error::{Error, Result};

const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 80;

/// One-sided Jacobi on columns `exp(logs[j]) * cols[j]` (`cols[j]` unit
/// vectors). On return the columns are mutually orthogonal, `logs` holds the
/// log singular values (`-inf` for zero) and the returned unitary `V` satisfies
/// `Y V = [orthogonal columns]`.
pub fn scaled_hestenes(cols: &mut [Vec<C64>], mut logs: Vec<f64>) -> Result<(CMatrix, Vec<f64>)> {
    let r = cols.len();
    let mut v = CMatrix::identity(r);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for a in 0..r {
            for b in a + 1..r {
                let (p, q) = if logs[a] >= logs[b] { (a, b) } else { (b, a) };
                let g = vec_dot(&cols[p], &cols[q]);
                let gn = g.norm();
                if !(gn > JACOBI_TOL) {
                    continue;
                }
                rotated = true;
                let e_phi = g / gn;
                let rho = (logs[q] - logs[p]).exp();
                let theta = (rho * rho - 1.0) / (2.0 * gn);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let tau = sign / (theta.abs() + (theta * theta + rho * rho).sqrt());
                let t = tau * rho;
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let ph = e_phi.conj();
                let (wp, wq) = (cols[p].clone(), cols[q].clone());
                for k in 0..wp.len() {
                    cols[p][k] = wp[k] * cs - wq[k] * ph * (tau * cs * rho * rho);
                    cols[q][k] = wp[k] * (tau * cs) + wq[k] * ph * cs;
                }
                for k in 0..r {
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * cs - vq * ph * sn;
                    v[(k, q)] = vp * sn + vq * ph * cs;
                }
                for &j in &[p, q] {
                    let nr = vec_norm(&cols[j]);
                    if nr == 0.0 {
                        // exactly dependent columns: singular value zero
                        logs[j] = f64::NEG_INFINITY;
                        continue;
                    }
                    for z in cols[j].iter_mut() {
                        *z /= nr;
                    }
                    logs[j] += nr.ln();
                }
            }
        }
        if !rotated {
            if logs.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
                return Err(Error::NonFinite { op: "scaled_hestenes" });
            }
            return Ok((v, logs));
        }
    }
    Err(Error::NoConvergence {
        op: "scaled_hestenes",
        iterations: MAX_SWEEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::matrix::{ONE, ZERO};
    use crate::numlin::svd;

    #[test]
    fn hestenes_matches_svd_on_unscaled_columns() {
        let a = CMatrix::from_fn(4, 3, |i, j| C64::new(((i * 3 + j * 5) % 7) as f64 - 3.0, ((i + j * j) % 3) as f64));
        let mut cols: Vec<Vec<C64>> = Vec::new();
        let mut logs = Vec::new();
        for j in 0..3 {
            let mut c = a.column(j);
            let nr = vec_norm(&c);
            c.iter_mut().for_each(|z| *z /= nr);
            cols.push(c);
            logs.push(nr.ln());
        }
        let (v, logs) = scaled_hestenes(&mut cols, logs).unwrap();
        let mut sv: Vec<f64> = logs.iter().map(|x| x.exp()).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let reference = svd(&a).unwrap().s;
        for (x, y) in sv.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-12 * reference[0]);
        }
        assert!((&v.adjoint() * &v).max_dist(&CMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn hestenes_handles_extreme_scale_gaps() {
        // columns e1 + e2 at scale e^0 and e1 at scale e^-2000
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut cols = vec![vec![C64::new(s, 0.0), C64::new(s, 0.0)], vec![ONE, ZERO]];
        let (_, logs) = scaled_hestenes(&mut cols, vec![0.0, -2000.0]).unwrap();
        // singular values: 1 and e^-2000 * sin(45 deg)
        assert!(logs[0].abs() < 1e-14);
        assert!((logs[1] - (-2000.0 + s.ln())).abs() < 1e-12);
    }
}
