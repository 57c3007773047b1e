//! The adjoint representation of `SL(n, R)` on traceless matrices.
//!
//! Basis, orthonormal under `<X, Y> = tr(X^T Y)`:
//! root vectors `E_ij` (`i < j`) by height `j - i` descending, then the
//! Cartan elements `H_k = (E_11 + ... + E_kk - k E_{k+1,k+1}) / sqrt(k(k+1))`,
//! then `E_ij` (`i > j`) by height ascending. Conjugation by a unit upper
//! triangular matrix only adds components of strictly greater height, so in
//! this order `Ad(N)` is unit upper triangular.

use super::SlnElement;
use crate::error::Result;
use crate::numlin::{inverse, CMatrix, C64};

/// Basis element of `sl_n`: either a root vector or a Cartan element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElement {
    Root { i: usize, j: usize },
    Cartan { k: usize },
}

impl BasisElement {
    pub fn matrix(&self, n: usize) -> CMatrix {
        let mut x = CMatrix::zeros(n, n);
        match *self {
            BasisElement::Root { i, j } => x[(i, j)] = C64::new(1.0, 0.0),
            BasisElement::Cartan { k } => {
                let kf = k as f64;
                let s = 1.0 / (kf * (kf + 1.0)).sqrt();
                for i in 0..k {
                    x[(i, i)] = C64::new(s, 0.0);
                }
                x[(k, k)] = C64::new(-kf * s, 0.0);
            }
        }
        x
    }
}

/// The ordered basis of `sl_n`, `n^2 - 1` elements.
pub fn ad_basis(n: usize) -> Vec<BasisElement> {
    let mut out = Vec::with_capacity(n * n - 1);
    for h in (1..n).rev() {
        for i in 0..n - h {
            out.push(BasisElement::Root { i, j: i + h });
        }
    }
    for k in 1..n {
        out.push(BasisElement::Cartan { k });
    }
    for h in 1..n {
        for j in 0..n - h {
            out.push(BasisElement::Root { i: j + h, j });
        }
    }
    out
}

/// Matrix of `X -> g X g^{-1}` in the basis of [`ad_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdMatrix {
    pub matrix: CMatrix,
    /// Size of the underlying group matrices.
    pub n: usize,
}

impl AdMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `Ad(g)` for an element of `SL(n, R)`.
pub fn ad(g: &SlnElement) -> AdMatrix {
    let matrix = ad_of(g.matrix()).expect("SL(n) elements are invertible").real_part();
    AdMatrix { matrix, n: g.n() }
}

/// `Ad(x)` for any invertible complex `x`; used for eigenvector matrices,
/// which live in `GL(n, C)`.
pub fn ad_of(x: &CMatrix) -> Result<CMatrix> {
    x.ensure_square("ad")?;
    let n = x.rows();
    let xi = inverse(x)?;
    let basis: Vec<CMatrix> = ad_basis(n).iter().map(|b| b.matrix(n)).collect();
    let d = basis.len();
    let mut out = CMatrix::zeros(d, d);
    for (col, bb) in basis.iter().enumerate() {
        let img = &(x * bb) * &xi;
        for (row, ba) in basis.iter().enumerate() {
            // basis is real, so <B_a, Y> = sum B_a[p,q] Y[p,q]
            let mut s = C64::new(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    let w = ba[(p, q)];
                    if w.re != 0.0 {
                        s += img[(p, q)] * w.re;
                    }
                }
            }
            out[(row, col)] = s;
        }
    }
    Ok(out)
}

/// Eigenvalues of `Ad(diag(lambda))` on the basis, in basis order:
/// `lambda_i / lambda_j` on `E_ij` and 1 on the Cartan elements.
pub fn ad_diagonal(lambda: &[C64]) -> Vec<C64> {
    ad_basis(lambda.len())
        .iter()
        .map(|b| match *b {
            BasisElement::Root { i, j } => lambda[i] / lambda[j],
            BasisElement::Cartan { .. } => C64::new(1.0, 0.0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(rows: &[&[f64]]) -> SlnElement {
        SlnElement::new(CMatrix::from_real_rows(rows)).unwrap()
    }

    #[test]
    fn basis_is_orthonormal() {
        for n in 2..=4 {
            let b: Vec<CMatrix> = ad_basis(n).iter().map(|e| e.matrix(n)).collect();
            assert_eq!(b.len(), n * n - 1);
            for (a, x) in b.iter().enumerate() {
                assert!(x.trace().norm() < 1e-15);
                for (c, y) in b.iter().enumerate() {
                    let ip = (&x.transpose() * y).trace().re;
                    let want = if a == c { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn two_by_two_order() {
        assert_eq!(
            ad_basis(2),
            vec![
                BasisElement::Root { i: 0, j: 1 },
                BasisElement::Cartan { k: 1 },
                BasisElement::Root { i: 1, j: 0 }
            ]
        );
    }

    #[test]
    fn identity_maps_to_identity() {
        let a = ad(&SlnElement::new(CMatrix::identity(3)).unwrap());
        assert!(a.matrix.max_dist(&CMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn diagonal_weights() {
        let t = 3.0;
        let a = ad(&sl(&[&[t, 0.0], &[0.0, 1.0 / t]]));
        assert!(a.matrix.max_dist(&CMatrix::from_real_diag(&[t * t, 1.0, 1.0 / (t * t)])) < 1e-14);
    }

    #[test]
    fn rotation_doubles_angle() {
        let th: f64 = 0.4;
        let (s, c) = th.sin_cos();
        let a = ad(&sl(&[&[c, -s], &[s, c]])).matrix;
        assert!((&a.transpose() * &a).max_dist(&CMatrix::identity(3)) < 1e-14);
        // E12 - E21 is fixed; on the orthogonal plane spanned by
        // H and (E12 + E21)/sqrt2 the action is rotation by 2 theta
        let r2 = 0.5f64.sqrt();
        let w = [C64::new(r2, 0.0), C64::new(0.0, 0.0), C64::new(-r2, 0.0)];
        let aw = a.mul_vec(&w);
        assert!(aw.iter().zip(&w).all(|(x, y)| (x - y).norm() < 1e-14));
        let u = [C64::new(r2, 0.0), C64::new(0.0, 0.0), C64::new(r2, 0.0)];
        let h = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let au = a.mul_vec(&u);
        let cos2 = au.iter().zip(&u).map(|(x, y)| x.re * y.re).sum::<f64>();
        let sin2 = au.iter().zip(&h).map(|(x, y)| x.re * y.re).sum::<f64>();
        assert!((cos2 - (2.0 * th).cos()).abs() < 1e-14);
        assert!((sin2.abs() - (2.0 * th).sin()).abs() < 1e-14);
    }

    #[test]
    fn unipotent_is_unit_upper_triangular() {
        let a = ad(&sl(&[&[1.0, 0.7, -1.2], &[0.0, 1.0, 2.5], &[0.0, 0.0, 1.0]])).matrix;
        for i in 0..8 {
            assert!((a[(i, i)].re - 1.0).abs() < 1e-14);
            for j in 0..i {
                assert!(a[(i, j)].norm() < 1e-14, "entry ({i},{j}) = {}", a[(i, j)]);
            }
        }
    }

    #[test]
    fn diagonal_eigenvalues_follow_basis() {
        let lam = [C64::new(2.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 0.0)];
        let g = sl(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.5]]);
        let a = ad(&g).matrix;
        assert!(a.max_dist(&CMatrix::from_diag(&ad_diagonal(&lam))) < 1e-14);
    }
}
