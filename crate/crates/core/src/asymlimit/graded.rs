//! Overflow- and underflow-free evaluation of `|B A^m C|^{1/m}`.
//!
//! With `A = M J M^{-1}` the power factors as `A^m = M W_m D^m M^{-1}`, where
//! `D = diag|mu_i|` and `W_m` is block diagonal with blocks
//! `(mu/|mu|)^m (I + N/mu)^m`. Writing `M^{-1} C = L Q` gives
//!
//! ```text
//! B A^m C = (B M W_m) (D^m L D^{-m}) D^m Q = Y Q.
//! ```
//!
//! `D^m L D^{-m}` is lower triangular with entries `l_ij (d_i/d_j)^m <= |l_ij|`,
//! so every factor of `Y` except the diagonal `D^m` stays bounded. The columns
//! of `Y` are kept as unit vectors times `exp(c_j)` and a one-sided Jacobi
//! sweep orthogonalizes them without ever forming `exp(c_j)`. Columns with
//! `d_j = 0` vanish once `m` reaches the largest nilpotent block.

use crate::error::{Error, Result};
use crate::jordan::power::{phase_power, place_toeplitz, unipotent_power_coeffs};
use crate::jordan::JordanSpec;
use crate::numlin::jacobi::scaled_hestenes;
use crate::numlin::{vec_norm, CMatrix, PsdMatrix, C64, ONE};

/// Root `|B A^m C|^{1/m}` together with `s_i(B A^m C)^{1/m}` (descending).
#[derive(Debug, Clone)]
pub struct GradedRoot {
    pub root: PsdMatrix,
    pub sv_roots: Vec<f64>,
}

/// `|B A^m C|^{1/m}` for the right polar factor.
pub fn graded_root(spec: &JordanSpec, b: &CMatrix, c: &CMatrix, m: u64) -> Result<GradedRoot> {
    let n = spec.n();
    if m == 0 || (m as usize) < spec.max_zero_block() {
        return Err(Error::InvalidSchedule(format!(
            "exponent {m} is below the largest nilpotent block {}",
            spec.max_zero_block()
        )));
    }
    let (l, q) = row_gram_schmidt(&(spec.m_inv() * c))?;
    let d = spec.moduli();
    let keep: Vec<usize> = (0..n).filter(|&j| d[j] > 0.0).collect();
    let r = keep.len();
    if r == 0 {
        let root = PsdMatrix::from_eigen(q.adjoint(), vec![0.0; n]);
        return Ok(GradedRoot {
            root,
            sv_roots: vec![0.0; n],
        });
    }
    let ln_d: Vec<f64> = d.iter().map(|&x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY }).collect();
    let mf = m as f64;

    // S = D^m L D^{-m}, restricted to the surviving columns
    let mut s = CMatrix::zeros(n, r);
    for (jj, &j) in keep.iter().enumerate() {
        for i in j..n {
            if d[i] == 0.0 {
                continue;
            }
            let ratio = if d[i] == d[j] { 1.0 } else { (mf * (ln_d[i] - ln_d[j])).exp() };
            s[(i, jj)] = l[(i, j)] * ratio;
        }
    }
    let f = &(b * spec.m()) * &phase_unipotent_power(spec, m)?;
    let y = &f * &s;

    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(r);
    let mut logs: Vec<f64> = Vec::with_capacity(r);
    for (jj, &j) in keep.iter().enumerate() {
        let mut w = y.column(jj);
        let nr = vec_norm(&w);
        if nr == 0.0 {
            return Err(Error::SingularB);
        }
        for z in w.iter_mut() {
            *z /= nr;
        }
        cols.push(w);
        logs.push(nr.ln() + mf * ln_d[j]);
    }
    let (v, logs) = scaled_hestenes(&mut cols, logs)?;

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| logs[b].total_cmp(&logs[a]));
    // s_i^{1/m} = d_i exp((ln s_i - m ln d_i) / m): the exponent is the small
    // polynomial correction, so no large logarithm passes through exp
    let mut sv_roots: Vec<f64> = order
        .iter()
        .zip(&keep)
        .map(|(&k, &i)| d[i] * ((logs[k] - mf * ln_d[i]) / mf).exp())
        .collect();
    let v = v.select_columns(&order);

    // eigenvectors Q_r* V, completed by the remaining rows of Q
    let mut basis = CMatrix::zeros(n, n);
    for i in 0..r {
        for k in 0..r {
            basis[(i, k)] = v[(i, k)];
        }
    }
    for k in r..n {
        basis[(k, k)] = ONE;
    }
    let q_rows: Vec<usize> = keep.iter().copied().chain((0..n).filter(|j| d[*j] == 0.0)).collect();
    let q_perm = q.adjoint().select_columns(&q_rows);
    let unitary = &q_perm * &basis;
    sv_roots.resize(n, 0.0);
    Ok(GradedRoot {
        root: PsdMatrix::from_eigen(unitary, sv_roots.clone()),
        sv_roots,
    })
}

/// `W_m`: block diagonal `(mu/|mu|)^m (I + N/mu)^m`, identity on zero blocks.
fn phase_unipotent_power(spec: &JordanSpec, m: u64) -> Result<CMatrix> {
    let n = spec.n();
    let mut w = CMatrix::zeros(n, n);
    for (blk, off) in spec.blocks().iter().zip(spec.block_offsets()) {
        if blk.mu.norm() == 0.0 {
            for i in 0..blk.size {
                w[(off + i, off + i)] = ONE;
            }
            continue;
        }
        let ph = phase_power(blk.mu, m as i64);
        let coeffs: Vec<C64> = unipotent_power_coeffs(blk.mu, blk.size, m, false)?
            .into_iter()
            .map(|z| z * ph)
            .collect();
        place_toeplitz(&mut w, off, &coeffs);
    }
    Ok(w)
}

/// `g = L Q` by twice-iterated modified Gram-Schmidt on the rows; `L` lower
/// triangular with positive diagonal.
pub fn row_gram_schmidt(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = g.rows();
    let scale = g.frob_norm();
    let mut l = CMatrix::zeros(n, n);
    let mut q_rows: Vec<Vec<C64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = g.row(i);
        for _ in 0..2 {
            for (k, qk) in q_rows.iter().enumerate() {
                // coefficient <q_k, row> for row = sum_k l_ik q_k
                let h: C64 = row.iter().zip(qk).map(|(x, y)| x * y.conj()).sum();
                l[(i, k)] += h;
                for (x, y) in row.iter_mut().zip(qk) {
                    *x -= h * y;
                }
            }
        }
        let nr = vec_norm(&row);
        if !(nr > 1e-13 * scale) {
            return Err(Error::SingularC);
        }
        l[(i, i)] = C64::new(nr, 0.0);
        for x in row.iter_mut() {
            *x /= nr;
        }
        q_rows.push(row);
    }
    let mut q = CMatrix::zeros(n, g.cols());
    for (i, row) in q_rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            q[(i, j)] = x;
        }
    }
    Ok((l, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::JordanBlock;

    #[test]
    fn row_gram_schmidt_matches_example() {
        let g = CMatrix::from_real_rows(&[&[2.0, 1.0], &[-1.0, -1.0]]);
        let (l, q) = row_gram_schmidt(&g).unwrap();
        let s5 = 5f64.sqrt();
        assert!(l.max_dist(&CMatrix::from_real_rows(&[&[s5, 0.0], &[-3.0 / s5, 1.0 / s5]])) < 1e-14);
        assert!((&l * &q).max_dist(&g) < 1e-14);
    }

    #[test]
    fn graded_root_of_diagonal_is_exact() {
        let s = JordanSpec::new(CMatrix::identity(2), vec![JordanBlock::real(3.0, 1), JordanBlock::real(1.0, 1)]).unwrap();
        for m in [4, 16, 1 << 16] {
            let g = graded_root(&s, &CMatrix::identity(2), &CMatrix::identity(2), m).unwrap();
            assert!(g.root.matrix().max_dist(&CMatrix::from_real_diag(&[3.0, 1.0])) < 1e-14);
        }
    }
}
