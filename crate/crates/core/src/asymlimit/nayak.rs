use crate::error::Result;
use crate::jordan::JordanSpec;
use crate::numlin::{lq, CMatrix};

/// Orthogonal projections `E_1 >= ... >= E_s` onto the sums of generalized
/// eigenspaces with modulus at most `gamma_j`.
#[derive(Debug, Clone)]
pub struct NayakProjections {
    /// `projections[j]` is `E_{j+1}`; `E_{s+1} = 0` is implicit.
    pub projections: Vec<CMatrix>,
    pub gammas: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// `sum_j gamma_j (E_j - E_{j+1})`.
    pub reconstruction: CMatrix,
}

impl NayakProjections {
    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// `E_j` for 1-based `j`, with `E_{s+1} = 0`.
    pub fn projection(&self, j: usize) -> CMatrix {
        assert!(j >= 1 && j <= self.len() + 1, "projection index {j} out of range");
        if j == self.len() + 1 {
            let n = self.projections[0].rows();
            CMatrix::zeros(n, n)
        } else {
            self.projections[j - 1].clone()
        }
    }

    /// `rank(E_j) = m_j + ... + m_s`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..self.len()).map(|j| self.multiplicities[j..].iter().sum()).collect()
    }
}

/// With `M^{-1} = L Q` and `Q*` split into column blocks `Q_i` by the
/// modulus multiplicities, `E_j = sum_{i >= j} Q_i Q_i*`.
pub fn nayak_projections(spec: &JordanSpec) -> Result<NayakProjections> {
    let n = spec.n();
    let q = lq(spec.m_inv())?.q;
    let qs = q.adjoint();
    let groups = spec.groups();
    let ranges = groups.ranges();
    let s = groups.len();
    let mut pieces: Vec<CMatrix> = Vec::with_capacity(s);
    for r in &ranges {
        let cols: Vec<usize> = r.clone().collect();
        let qi = qs.select_columns(&cols);
        pieces.push(&qi * &qi.adjoint());
    }
    let mut projections = vec![CMatrix::zeros(n, n); s];
    let mut acc = CMatrix::zeros(n, n);
    for j in (0..s).rev() {
        acc = &acc + &pieces[j];
        projections[j] = acc.hermitian_part();
    }
    // E_1 spans everything; pin it to the identity exactly
    projections[0] = CMatrix::identity(n);
    let mut reconstruction = CMatrix::zeros(n, n);
    for (j, piece) in pieces.iter().enumerate() {
        reconstruction = &reconstruction + &piece.scale_real(groups.gammas[j]);
    }
    Ok(NayakProjections {
        projections,
        gammas: groups.gammas,
        multiplicities: groups.multiplicities,
        reconstruction: reconstruction.hermitian_part(),
    })
}
