//! Structured matrices `A = M J M^{-1}` and their multiplicative Jordan
//! decomposition `A = E H U`.

pub mod groups;
pub mod power;

pub use groups::{moduli_groups, ModuliGroups};
pub use power::{power_scaled, ScaledPower};

use crate::error::{Error, Result};
use crate::numlin::{eig_general_with, inverse, singular_values, spectral_order, CMatrix, C64, ONE};
use crate::tolerance::Tolerances;

/// Smallest accepted `s_min / s_max` for the similarity `M`.
const MIN_RECIPROCAL_CONDITION: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub mu: C64,
    pub size: usize,
}

impl JordanBlock {
    pub fn new(mu: C64, size: usize) -> Self {
        JordanBlock { mu, size }
    }

    pub fn real(mu: f64, size: usize) -> Self {
        JordanBlock {
            mu: C64::new(mu, 0.0),
            size,
        }
    }
}

/// `A = M (J(mu_1) + ... + J(mu_k)) M^{-1}` with blocks sorted by modulus
/// descending, equal moduli by argument and then input order.
#[derive(Debug, Clone)]
pub struct JordanSpec {
    m: CMatrix,
    m_inv: CMatrix,
    blocks: Vec<JordanBlock>,
    condition: f64,
    group_tol: f64,
}

impl JordanSpec {
    pub fn new(m: CMatrix, blocks: Vec<JordanBlock>) -> Result<Self> {
        Self::with_group_tol(m, blocks, Tolerances::default().group_tol)
    }

    pub fn with_group_tol(m: CMatrix, blocks: Vec<JordanBlock>, group_tol: f64) -> Result<Self> {
        m.ensure_square("JordanSpec")?;
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("no Jordan blocks".into()));
        }
        if let Some(b) = blocks.iter().find(|b| b.size == 0) {
            return Err(Error::InvalidSpec(format!("block for {} has size 0", b.mu)));
        }
        if blocks.iter().any(|b| !(b.mu.re.is_finite() && b.mu.im.is_finite())) {
            return Err(Error::NonFinite { op: "JordanSpec" });
        }
        let n: usize = blocks.iter().map(|b| b.size).sum();
        if n != m.rows() {
            return Err(Error::InvalidSpec(format!(
                "block sizes sum to {n} but M is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let s = singular_values(&m)?;
        let smin = *s.last().unwrap();
        if !(smin > MIN_RECIPROCAL_CONDITION * s[0]) {
            return Err(Error::SingularM);
        }
        let condition = s[0] / smin;

        let mus: Vec<C64> = blocks.iter().map(|b| b.mu).collect();
        let order = spectral_order(&mus, group_tol);
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in &blocks {
            offsets.push(acc);
            acc += b.size;
        }
        let mut perm = Vec::with_capacity(n);
        for &k in &order {
            perm.extend(offsets[k]..offsets[k] + blocks[k].size);
        }
        let m = m.select_columns(&perm);
        let blocks: Vec<JordanBlock> = order.iter().map(|&k| blocks[k]).collect();
        let m_inv = inverse(&m).map_err(|_| Error::SingularM)?;
        Ok(JordanSpec {
            m,
            m_inv,
            blocks,
            condition,
            group_tol,
        })
    }

    /// Spec of a diagonalizable matrix `V diag(values) V^{-1}`.
    pub fn diagonalizable(v: CMatrix, values: &[C64]) -> Result<Self> {
        Self::new(v, values.iter().map(|&mu| JordanBlock::new(mu, 1)).collect())
    }

    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    pub fn m_inv(&self) -> &CMatrix {
        &self.m_inv
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    /// `s_max(M) / s_min(M)`.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn group_tol(&self) -> f64 {
        self.group_tol
    }

    /// Starting row of each block inside `J`.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.size;
                o
            })
            .collect()
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(|b| b.size).max().unwrap_or(0)
    }

    /// Largest block at eigenvalue zero, or 0 if `A` is nonsingular.
    pub fn max_zero_block(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.mu.norm() == 0.0)
            .map(|b| b.size)
            .max()
            .unwrap_or(0)
    }

    pub fn is_singular(&self) -> bool {
        self.blocks.iter().any(|b| b.mu.norm() == 0.0)
    }

    /// `D`: each `|mu_i|` repeated `n_i` times, descending.
    pub fn moduli(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.mu.norm(), b.size))
            .collect()
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.mu, b.size))
            .collect()
    }

    pub fn groups(&self) -> ModuliGroups {
        moduli_groups(&self.moduli(), self.group_tol)
    }

    /// The Jordan matrix `J`.
    pub fn jordan_matrix(&self) -> CMatrix {
        let n = self.n();
        let mut j = CMatrix::zeros(n, n);
        for (b, off) in self.blocks.iter().zip(self.block_offsets()) {
            for i in 0..b.size {
                j[(off + i, off + i)] = b.mu;
                if i + 1 < b.size {
                    j[(off + i, off + i + 1)] = ONE;
                }
            }
        }
        j
    }

    /// `M X M^{-1}` for a matrix `X` in Jordan coordinates.
    pub fn conjugate(&self, x: &CMatrix) -> CMatrix {
        &(&self.m * x) * &self.m_inv
    }

    /// Spec of `A*`: `J(mu)* = F J(conj mu) F` with `F` the block flip, so
    /// the new similarity is `M^{-*}` with each block's columns reversed.
    pub fn adjoint(&self) -> Result<JordanSpec> {
        let mut perm = Vec::with_capacity(self.n());
        for (b, off) in self.blocks.iter().zip(self.block_offsets()) {
            perm.extend((off..off + b.size).rev());
        }
        let m = self.m_inv.adjoint().select_columns(&perm);
        let blocks = self
            .blocks
            .iter()
            .map(|b| JordanBlock::new(b.mu.conj(), b.size))
            .collect();
        JordanSpec::with_group_tol(m, blocks, self.group_tol)
    }

    /// Same eigenstructure with similarity `M * R`; `r` must commute with `J`
    /// for the assembled matrix to stay the same.
    pub fn with_m(&self, m: CMatrix) -> Result<JordanSpec> {
        JordanSpec::with_group_tol(m, self.blocks.clone(), self.group_tol)
    }
}

/// `M J M^{-1}`.
pub fn assemble(spec: &JordanSpec) -> CMatrix {
    spec.conjugate(&spec.jordan_matrix())
}

/// `A = E H U` (or `A^m = E'^m H^m U'^m` when `A` is singular).
#[derive(Debug, Clone)]
pub struct CmjdFactors {
    pub e: CMatrix,
    pub h: CMatrix,
    pub u: CMatrix,
    pub d: Vec<f64>,
    pub gammas: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub singular_variant: bool,
}

pub fn cmjd_from_spec(spec: &JordanSpec) -> CmjdFactors {
    let n = spec.n();
    let mut ej = CMatrix::zeros(n, n);
    let mut hj = CMatrix::zeros(n, n);
    let mut uj = CMatrix::zeros(n, n);
    for (b, off) in spec.blocks().iter().zip(spec.block_offsets()) {
        let r = b.mu.norm();
        // zero blocks use E' = I and U' = I + J(0)
        let (phase, shift) = if r == 0.0 {
            (ONE, ONE)
        } else {
            (b.mu / r, ONE / b.mu)
        };
        for i in 0..b.size {
            ej[(off + i, off + i)] = phase;
            hj[(off + i, off + i)] = C64::new(r, 0.0);
            uj[(off + i, off + i)] = ONE;
            if i + 1 < b.size {
                uj[(off + i, off + i + 1)] = shift;
            }
        }
    }
    let groups = spec.groups();
    CmjdFactors {
        e: spec.conjugate(&ej),
        h: spec.conjugate(&hj),
        u: spec.conjugate(&uj),
        d: spec.moduli(),
        gammas: groups.gammas,
        multiplicities: groups.multiplicities,
        singular_variant: spec.is_singular(),
    }
}

/// CMJD of a diagonalizable matrix found through its eigenvectors. Defective
/// or ill-conditioned input is refused; such matrices need an explicit spec.
pub fn cmjd_numeric(a: &CMatrix, tol: &Tolerances) -> Result<(JordanSpec, CmjdFactors)> {
    let eg = eig_general_with(a, tol)?;
    let spec = JordanSpec::with_group_tol(
        eg.v,
        eg.lambda.iter().map(|&mu| JordanBlock::new(mu, 1)).collect(),
        tol.group_tol,
    )?;
    let f = cmjd_from_spec(&spec);
    Ok((spec, f))
}
