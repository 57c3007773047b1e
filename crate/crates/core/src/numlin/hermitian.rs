//! Hermitian views, the cyclic complex Jacobi eigensolver, PSD powers and the
//! Löwner order.

use super::matrix::{unit_phase, CMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-14;

/// A square matrix certified Hermitian up to `herm_tol`. The stored base is
/// the exact Hermitian part of the input.
#[derive(Debug, Clone)]
pub struct HermitianView {
    base: CMatrix,
    defect: f64,
}

impl HermitianView {
    pub fn new(a: &CMatrix) -> Result<Self> {
        Self::with_tol(a, &Tolerances::default())
    }

    pub fn with_tol(a: &CMatrix, tol: &Tolerances) -> Result<Self> {
        a.ensure_square("HermitianView")?;
        a.ensure_finite("HermitianView")?;
        let n = a.rows();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((a[(i, j)] - a[(j, i)].conj()).norm());
            }
        }
        if defect > tol.herm_tol * a.max_abs() {
            return Err(Error::NotHermitian { defect });
        }
        Ok(HermitianView {
            base: a.hermitian_part(),
            defect,
        })
    }

    pub fn base(&self) -> &CMatrix {
        &self.base
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.defect
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigenH {
    pub unitary: CMatrix,
    pub eigenvalues: Vec<f64>,
}

impl EigenH {
    /// `U diag(f(eig)) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let u = &self.unitary;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            let mut s = ZERO;
            for k in 0..n {
                if w[k] != 0.0 {
                    s += u[(i, k)] * u[(j, k)].conj() * w[k];
                }
            }
            s
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// entry, then applies the real symmetric rotation that annihilates it.
pub fn eigh(a: &HermitianView) -> Result<EigenH> {
    let mut m = a.base.clone();
    let n = m.rows();
    let mut v = CMatrix::identity(n);
    let norm = m.frob_norm();
    let target = JACOBI_OFF_TOL * norm;
    let mut converged = norm == 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        if off_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                let (c, s) = rotation(app, aqq, r);
                let ph = unit_phase(apq).conj();
                // G = [[c, s], [-s ph, c ph]] on the (p, q) plane
                let g = [[C64::new(c, 0.0), C64::new(s, 0.0)], [-ph * s, ph * c]];
                apply_two_sided(&mut m, p, q, &g);
                apply_right(&mut v, p, q, &g);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
            }
        }
    }
    if !converged && off_norm(&m) > target {
        return Err(Error::NoConvergence {
            op: "eigh",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut unitary = v.select_columns(&order);
    normalize_column_phases(&mut unitary);
    Ok(EigenH {
        unitary,
        eigenvalues,
    })
}

/// Makes the largest-modulus entry of each column real positive.
pub(crate) fn normalize_column_phases(u: &mut CMatrix) {
    for j in 0..u.cols() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..u.rows() {
            let a = u[(i, j)].norm();
            if a > best_abs * (1.0 + 1e-12) {
                best_abs = a;
                best = i;
            }
        }
        let ph = unit_phase(u[(best, j)]).conj();
        if ph != C64::new(1.0, 0.0) {
            for i in 0..u.rows() {
                u[(i, j)] *= ph;
            }
        }
    }
}

fn off_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Rotation `(c, s)` zeroing the real symmetric pair `[[app, r], [r, aqq]]`.
fn rotation(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

/// `m <- G* m G` where `G` acts on the (p, q) coordinate plane.
fn apply_two_sided(m: &mut CMatrix, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    apply_right(m, p, q, g);
    let n = m.cols();
    for j in 0..n {
        let xp = m[(p, j)];
        let xq = m[(q, j)];
        m[(p, j)] = g[0][0].conj() * xp + g[1][0].conj() * xq;
        m[(q, j)] = g[0][1].conj() * xp + g[1][1].conj() * xq;
    }
}

/// `m <- m G`.
fn apply_right(m: &mut CMatrix, p: usize, q: usize, g: &[[C64; 2]; 2]) {
    for i in 0..m.rows() {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp * g[0][0] + xq * g[1][0];
        m[(i, q)] = xp * g[0][1] + xq * g[1][1];
    }
}

/// A Hermitian matrix certified positive semidefinite, with its cached
/// eigendecomposition (eigenvalues clamped at zero).
#[derive(Debug, Clone)]
pub struct PsdMatrix {
    view: HermitianView,
    eig: EigenH,
    min_eigenvalue: f64,
}

impl PsdMatrix {
    pub fn new(a: &CMatrix) -> Result<Self> {
        Self::with_tol(a, &Tolerances::default())
    }

    pub fn with_tol(a: &CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::from_view(HermitianView::with_tol(a, tol)?, tol)
    }

    pub fn from_view(view: HermitianView, tol: &Tolerances) -> Result<Self> {
        let mut eig = eigh(&view)?;
        let raw_min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let scale = view.base.max_abs();
        if raw_min < -tol.psd_tol * scale {
            return Err(Error::NotPsd {
                min_eigenvalue: raw_min,
            });
        }
        for x in eig.eigenvalues.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        Ok(PsdMatrix {
            view,
            eig,
            min_eigenvalue: raw_min.max(0.0),
        })
    }

    /// Builds from an already known decomposition `U diag(w) U*`, `w >= 0`
    /// descending.
    pub fn from_eigen(unitary: CMatrix, eigenvalues: Vec<f64>) -> Self {
        let eig = EigenH {
            unitary,
            eigenvalues,
        };
        let base = eig.reconstruct().hermitian_part();
        let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
        PsdMatrix {
            view: HermitianView { base, defect: 0.0 },
            eig,
            min_eigenvalue,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.view.base
    }

    pub fn view(&self) -> &HermitianView {
        &self.view
    }

    pub fn eigen(&self) -> &EigenH {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }
}

/// `U diag(eig^r) U*`.
pub fn psd_power(a: &PsdMatrix, r: f64) -> Result<PsdMatrix> {
    let has_zero = a.eig.eigenvalues.contains(&0.0);
    if r <= 0.0 && has_zero {
        return Err(Error::SingularBase);
    }
    let mut w: Vec<f64> = a
        .eig
        .eigenvalues
        .iter()
        .map(|&x| if x == 0.0 { 0.0 } else { x.powf(r) })
        .collect();
    let mut u = a.eig.unitary.clone();
    if r < 0.0 {
        // order reverses
        w.reverse();
        let order: Vec<usize> = (0..w.len()).rev().collect();
        u = u.select_columns(&order);
    }
    Ok(PsdMatrix::from_eigen(u, w))
}

/// `|a| = (a* a)^{1/2}`.
pub fn abs(a: &CMatrix) -> Result<PsdMatrix> {
    let s = super::svd::svd(a)?;
    Ok(PsdMatrix::from_eigen(s.v, s.s))
}

/// True iff `b - a` has no eigenvalue below `-tol`.
pub fn loewner_leq(a: &HermitianView, b: &HermitianView, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            op: "loewner_leq",
            left: a.base.shape(),
            right: b.base.shape(),
        });
    }
    let diff = HermitianView {
        base: &b.base - &a.base,
        defect: 0.0,
    };
    let e = eigh(&diff)?;
    Ok(e.eigenvalues.last().copied().unwrap_or(0.0) >= -tol)
}
