//! Householder QR and its adjoint, LQ. Both normalize the triangular factor
//! to a real positive diagonal, which makes them unique for full-rank input.

use super::matrix::{unit_phase, vec_norm, CMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone)]
pub struct QrFactors {
    /// Orthonormal columns, `m x n`.
    pub q: CMatrix,
    /// Upper triangular, `n x n`, real positive diagonal.
    pub r: CMatrix,
}

#[derive(Debug, Clone)]
pub struct LqFactors {
    /// Lower triangular, real positive diagonal.
    pub l: CMatrix,
    /// Orthonormal rows.
    pub q: CMatrix,
}

pub fn qr(a: &CMatrix) -> Result<QrFactors> {
    qr_with(a, &Tolerances::default())
}

pub fn qr_with(a: &CMatrix, tol: &Tolerances) -> Result<QrFactors> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::RankDeficient { diag: 0.0 });
    }
    let scale = a.max_abs();
    let mut r = a.clone();
    // Householder vectors, one per column.
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..n {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let norm_x = vec_norm(&x);
        let mut v = x;
        if norm_x == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = -unit_phase(v[0]) * norm_x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // R <- (I - 2 v v*) R on rows k.., columns k..
        for j in k..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            for i in k..m {
                let t = v[i - k] * dot * 2.0;
                r[(i, j)] -= t;
            }
        }
        for i in k + 1..m {
            r[(i, k)] = ZERO;
        }
        reflectors.push(v);
    }
    // Thin Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
    let mut q = CMatrix::zeros(m, n);
    for j in 0..n {
        q[(j, j)] = C64::new(1.0, 0.0);
    }
    for k in (0..n).rev() {
        let v = &reflectors[k];
        if v.is_empty() {
            continue;
        }
        for j in 0..n {
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * q[(i, j)]).sum();
            for i in k..m {
                let t = v[i - k] * dot * 2.0;
                q[(i, j)] -= t;
            }
        }
    }
    let mut r_sq = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            r_sq[(i, j)] = r[(i, j)];
        }
    }
    // Move the phase of each R diagonal entry into Q.
    for k in 0..n {
        let d = r_sq[(k, k)];
        if d.norm() <= tol.rank_tol * scale || scale == 0.0 {
            return Err(Error::RankDeficient { diag: d.norm() });
        }
        let ph = unit_phase(d);
        if ph.re == 1.0 && ph.im == 0.0 {
            continue;
        }
        for j in k..n {
            r_sq[(k, j)] *= ph.conj();
        }
        for i in 0..m {
            q[(i, k)] *= ph;
        }
        r_sq[(k, k)] = C64::new(r_sq[(k, k)].re, 0.0);
    }
    Ok(QrFactors { q, r: r_sq })
}

/// `a = L Q` computed as the adjoint of `qr(a*)`.
pub fn lq(a: &CMatrix) -> Result<LqFactors> {
    lq_with(a, &Tolerances::default())
}

pub fn lq_with(a: &CMatrix, tol: &Tolerances) -> Result<LqFactors> {
    let f = qr_with(&a.adjoint(), tol)?;
    Ok(LqFactors {
        l: f.r.adjoint(),
        q: f.q.adjoint(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = a.max_dist(b);
        assert!(d <= tol, "distance {d}\n{a:?}\n{b:?}");
    }

    #[test]
    fn qr_of_identity() {
        let f = qr(&CMatrix::identity(4)).unwrap();
        assert_close(&f.q, &CMatrix::identity(4), 0.0);
        assert_close(&f.r, &CMatrix::identity(4), 0.0);
    }

    #[test]
    fn qr_of_permutation() {
        let p = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let f = qr(&p).unwrap();
        assert_close(&f.q, &p, 1e-15);
        assert_close(&f.r, &CMatrix::identity(2), 1e-15);
    }

    #[test]
    fn qr_of_small_example() {
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]);
        let f = qr(&a).unwrap();
        assert!((f.r[(0, 0)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_close(&(&f.q.adjoint() * &f.q), &CMatrix::identity(2), 1e-14);
        assert_close(&(&f.q * &f.r), &a, 1e-14);
    }

    #[test]
    fn real_input_stays_real() {
        let a = CMatrix::from_real_rows(&[&[2.0, -1.0, 0.5], &[-3.0, 1.0, 4.0], &[1.0, 1.0, 1.0]]);
        let f = qr(&a).unwrap();
        assert_eq!(f.q.max_imag(), 0.0);
        assert_eq!(f.r.max_imag(), 0.0);
    }

    #[test]
    fn lq_example_matches_row_gram_schmidt() {
        let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[-1.0, -1.0]]);
        let s5 = 5f64.sqrt();
        let l = CMatrix::from_real_rows(&[&[s5, 0.0], &[-3.0 / s5, 1.0 / s5]]);
        let q = CMatrix::from_real_rows(&[&[2.0 / s5, 1.0 / s5], &[1.0 / s5, -2.0 / s5]]);
        let f = lq(&a).unwrap();
        assert_close(&f.l, &l, 1e-14);
        assert_close(&f.q, &q, 1e-14);
    }

    #[test]
    fn lq_of_positive_lower_triangular_is_trivial() {
        let t = CMatrix::from_real_rows(&[&[2.0, 0.0, 0.0], &[1.0, 3.0, 0.0], &[-4.0, 0.5, 1.0]]);
        let f = lq(&t).unwrap();
        assert_close(&f.l, &t, 1e-14);
        assert_close(&f.q, &CMatrix::identity(3), 1e-15);
    }

    #[test]
    fn rank_deficiency_detected() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(qr(&a), Err(Error::RankDeficient { .. })));
        assert!(matches!(lq(&a), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn complex_qr_has_positive_diagonal() {
        let a = CMatrix::from_fn(4, 3, |i, j| C64::new(((i * 5 + j * j * 3) % 7) as f64 - 3.0, ((i * i + 2 * j) % 5) as f64 * 0.5));
        let f = qr(&a).unwrap();
        for k in 0..3 {
            assert!(f.r[(k, k)].re > 0.0 && f.r[(k, k)].im == 0.0);
            for i in k + 1..3 {
                assert_eq!(f.r[(i, k)], ZERO);
            }
        }
        assert_close(&(&f.q * &f.r), &a, 1e-13);
        assert_close(&(&f.q.adjoint() * &f.q), &CMatrix::identity(3), 1e-13);
    }
}
