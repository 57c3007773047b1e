//! LU with partial pivoting: solves, inverses, determinants and minors.

use super::matrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Pivots below this fraction of the input's max entry count as zero.
const PIVOT_TOL: f64 = 1e-14;

pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// Smallest pivot modulus met during elimination.
    pub min_pivot: f64,
    scale: f64,
}

impl Lu {
    /// Factors without rejecting small pivots; callers decide what singular means.
    pub fn factor(a: &CMatrix) -> Result<Lu> {
        a.ensure_square("lu")?;
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap();
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            min_pivot = min_pivot.min(pivot.norm());
            if pivot == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let t = lu[(k, j)];
                    lu[(i, j)] -= f * t;
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            sign,
            min_pivot,
            scale: a.max_abs(),
        })
    }

    pub fn is_singular(&self) -> bool {
        self.min_pivot <= PIVOT_TOL * self.scale || self.scale == 0.0
    }

    pub fn det(&self) -> C64 {
        let mut d = C64::new(self.sign, 0.0);
        for i in 0..self.lu.rows() {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let cols: Vec<Vec<C64>> = (0..b.cols()).map(|j| self.solve_vec(&b.column(j))).collect();
        CMatrix::from_columns(&cols)
    }
}

/// Solves `a x = b`; fails on a pivot below `1e-14 * max|a|`.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.ensure_square("solve")?;
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let lu = Lu::factor(a)?;
    if lu.is_singular() {
        return Err(Error::SingularMatrix { pivot: lu.min_pivot });
    }
    let x = lu.solve(b);
    x.ensure_finite("solve")?;
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.rows()))
}

pub fn det(a: &CMatrix) -> Result<C64> {
    Ok(Lu::factor(a)?.det())
}

/// Determinant of `a[rows, cols]`.
pub fn minor_det(a: &CMatrix, rows: &[usize], cols: &[usize]) -> Result<C64> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    if let Some(&i) = rows.iter().find(|&&i| i >= a.rows()) {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: a.rows(),
        });
    }
    if let Some(&j) = cols.iter().find(|&&j| j >= a.cols()) {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: a.cols(),
        });
    }
    if rows.is_empty() {
        return Ok(ONE);
    }
    det(&a.submatrix(rows, cols))
}

/// All `p`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..p).collect();
    loop {
        out.push(idx.clone());
        let mut i = p;
        while i > 0 && idx[i - 1] == n - p + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for k in i..p {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Primitive selector for [`arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    /// Conjugate transpose of `a`; `b` is ignored.
    Adjoint,
    /// `a` scaled by `b[(0,0)]`.
    Scale,
    /// `x` with `a x = b`.
    Solve,
}

pub fn arithmetic(a: &CMatrix, b: &CMatrix, kind: ArithKind) -> Result<CMatrix> {
    match kind {
        ArithKind::Add => a.checked_add(b),
        ArithKind::Sub => a.checked_sub(b),
        ArithKind::Mul => a.checked_mul(b),
        ArithKind::Adjoint => Ok(a.adjoint()),
        ArithKind::Scale => {
            if b.shape() != (1, 1) {
                return Err(Error::DimensionMismatch {
                    op: "scale",
                    left: a.shape(),
                    right: b.shape(),
                });
            }
            Ok(a.scale(b[(0, 0)]))
        }
        ArithKind::Solve => solve(a, b),
    }
}
