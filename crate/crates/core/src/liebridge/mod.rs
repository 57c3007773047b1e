//! The limit of `|g_1 g^m g_2|^{1/m}` in `G = SL(n, R)`, where `K = SO(n)`,
//! `A` is the positive diagonals, `N` the unit upper triangular matrices and
//! `g* = g^T`.

pub mod ad;

pub use ad::{ad, ad_basis, ad_diagonal, ad_of, AdMatrix, BasisElement};

use crate::asymlimit::{graded_root, predicted_limit_right};
use crate::error::{Error, Result};
use crate::jordan::{cmjd_from_spec, cmjd_numeric, CmjdFactors, JordanSpec};
use crate::numlin::{abs, det, inverse, psd_power, qr, CMatrix, PsdMatrix, C64};
use crate::tolerance::Tolerances;

/// Largest accepted `|det g - 1|`.
pub const DET_TOL: f64 = 1e-9;
/// Largest accepted imaginary part, relative to the largest entry.
const REAL_TOL: f64 = 1e-9;

/// A real matrix with determinant 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SlnElement {
    g: CMatrix,
    det_defect: f64,
}

impl SlnElement {
    pub fn new(g: CMatrix) -> Result<Self> {
        g.ensure_square("SlnElement")?;
        g.ensure_finite("SlnElement")?;
        if g.max_imag() > REAL_TOL * g.max_abs().max(1.0) {
            return Err(Error::NotInSl(format!("complex entries (imaginary part {:.3e})", g.max_imag())));
        }
        let g = g.real_part();
        let d = det(&g)?.re;
        let det_defect = (d - 1.0).abs();
        if !(det_defect <= DET_TOL) {
            return Err(Error::NotInSl(format!("det = {d:.12e}")));
        }
        Ok(SlnElement { g, det_defect })
    }

    pub fn identity(n: usize) -> Self {
        SlnElement {
            g: CMatrix::identity(n),
            det_defect: 0.0,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn det_defect(&self) -> f64 {
        self.det_defect
    }

    pub fn transpose(&self) -> SlnElement {
        SlnElement {
            g: self.g.transpose(),
            det_defect: self.det_defect,
        }
    }
}

/// `g = k p` with `k` orthogonal and `p = (g^T g)^{1/2}`.
#[derive(Debug, Clone)]
pub struct CartanPolar {
    pub k: CMatrix,
    pub p: PsdMatrix,
}

pub fn cartan_polar(g: &SlnElement) -> Result<CartanPolar> {
    let gtg = PsdMatrix::new(&(&g.matrix().transpose() * g.matrix()))?;
    let p = psd_power(&gtg, 0.5)?;
    let p_inv = psd_power(&gtg, -0.5)?;
    let k = (g.matrix() * p_inv.matrix()).real_part();
    Ok(CartanPolar { k, p })
}

/// `g = k a nfac` with `k` in `SO(n)`, `a` positive diagonal and `nfac` unit
/// upper triangular.
#[derive(Debug, Clone)]
pub struct IwasawaKAN {
    pub k: CMatrix,
    pub a: Vec<f64>,
    pub nfac: CMatrix,
}

impl IwasawaKAN {
    pub fn reconstruct(&self) -> CMatrix {
        &(&self.k * &CMatrix::from_real_diag(&self.a)) * &self.nfac
    }
}

pub fn iwasawa(g: &SlnElement) -> Result<IwasawaKAN> {
    let f = qr(g.matrix())?;
    let n = g.n();
    let a: Vec<f64> = (0..n).map(|i| f.r[(i, i)].re).collect();
    let mut nfac = f.r.real_part();
    for i in 0..n {
        for j in i..n {
            nfac[(i, j)] /= a[i];
        }
        nfac[(i, i)] = C64::new(1.0, 0.0);
    }
    Ok(IwasawaKAN {
        k: f.q.real_part(),
        a,
        nfac,
    })
}

/// `g = e h u` with `h = q b q^{-1}`, `b` positive diagonal descending.
#[derive(Debug, Clone)]
pub struct GroupCmjd {
    pub e: SlnElement,
    pub h: SlnElement,
    pub u: SlnElement,
    pub q: SlnElement,
    pub b: Vec<f64>,
    /// Jordan data the decomposition was built from.
    pub spec: JordanSpec,
}

/// CMJD of a diagonalizable `g`, eigenvectors found numerically.
pub fn group_cmjd(g: &SlnElement) -> Result<GroupCmjd> {
    let (spec, f) = cmjd_numeric(g.matrix(), &Tolerances::default())?;
    assemble_group_cmjd(spec, f)
}

/// CMJD from a supplied Jordan spec of `g`, for defective elements.
pub fn group_cmjd_from_spec(spec: &JordanSpec) -> Result<GroupCmjd> {
    let f = cmjd_from_spec(spec);
    assemble_group_cmjd(spec.clone(), f)
}

fn assemble_group_cmjd(spec: JordanSpec, f: CmjdFactors) -> Result<GroupCmjd> {
    if spec.is_singular() {
        return Err(Error::NotInSl("singular element".into()));
    }
    let n = spec.n();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for r in spec.groups().ranges() {
        let idx: Vec<usize> = r.collect();
        cols.extend(real_basis(&spec.m().select_columns(&idx))?);
    }
    let mut q = CMatrix::from_fn(n, n, |i, j| C64::new(cols[j][i], 0.0));
    let d = det(&q)?.re;
    q = q.scale_real(d.abs().powf(-1.0 / n as f64));
    if d < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    Ok(GroupCmjd {
        e: SlnElement::new(f.e)?,
        h: SlnElement::new(f.h)?,
        u: SlnElement::new(f.u)?,
        q: SlnElement::new(q)?,
        b: f.d,
        spec,
    })
}

/// Orthonormal real basis of a conjugation-closed complex column space,
/// chosen greedily among the real and imaginary parts of the columns.
fn real_basis(cols: &CMatrix) -> Result<Vec<Vec<f64>>> {
    let (n, k) = cols.shape();
    let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(2 * k);
    for j in 0..k {
        candidates.push((0..n).map(|i| cols[(i, j)].re).collect());
        candidates.push((0..n).map(|i| cols[(i, j)].im).collect());
    }
    let scale = candidates.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 0.0;
        for c in &candidates {
            let mut r = c.clone();
            for _ in 0..2 {
                for b in &basis {
                    let h: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                    r.iter_mut().zip(b).for_each(|(x, y)| *x -= h * y);
                }
            }
            let nr = norm(&r);
            if nr > best_norm {
                best_norm = nr;
                best = Some(r);
            }
        }
        let mut v = match best {
            Some(v) if best_norm > 1e-8 * scale => v,
            _ => return Err(Error::DefectiveOrIllConditioned { condition: f64::INFINITY }),
        };
        let pivot = v.iter().copied().fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc });
        let s = pivot.signum() / best_norm;
        v.iter_mut().for_each(|x| *x *= s);
        basis.push(v);
    }
    Ok(basis)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `k b k^T` together with its factors.
#[derive(Debug, Clone)]
pub struct LieLimit {
    pub limit: CMatrix,
    pub k: CMatrix,
    pub b: Vec<f64>,
}

/// `lim |g_1 g^m g_2|^{1/m} = k b k^{-1}` with `k` from the Iwasawa
/// decomposition `g_2^T q^{-T} = k a n`. `g_1` does not enter the limit.
pub fn lie_limit(g: &SlnElement, g1: &SlnElement, g2: &SlnElement) -> Result<LieLimit> {
    for x in [g1, g2] {
        if x.n() != g.n() {
            return Err(Error::DimensionMismatch {
                op: "lie_limit",
                left: (g.n(), g.n()),
                right: (x.n(), x.n()),
            });
        }
    }
    let cm = group_cmjd(g)?;
    lie_limit_from_parts(&cm.q, &cm.b, g2)
}

/// The limit for a given `q` with `h(g) = q b q^{-1}`.
pub fn lie_limit_from_parts(q: &SlnElement, b: &[f64], g2: &SlnElement) -> Result<LieLimit> {
    let x = &g2.matrix().transpose() * &inverse(q.matrix())?.transpose();
    let kan = iwasawa(&SlnElement::new(x)?)?;
    let k = kan.k;
    let limit = (&(&k * &CMatrix::from_real_diag(b)) * &k.transpose()).hermitian_part();
    Ok(LieLimit {
        limit,
        k,
        b: b.to_vec(),
    })
}

/// Agreement between the group-level limit and its image under `Ad`.
#[derive(Debug, Clone)]
pub struct AdConsistency {
    pub limit: LieLimit,
    /// `max |Ad(limit) - predicted limit of Ad(g_1) Ad(g)^m Ad(g_2)|`.
    pub prediction_gap: f64,
    /// `max |Ad(|x|) - |Ad(x)||` over the samples `g` and `g_1 g g_2`.
    pub abs_gap: f64,
    /// `|| |g_1 g^m g_2|^{1/m} - limit ||_F` at `m`.
    pub iterate_error: f64,
    pub m: u64,
}

/// Checks the limit through the adjoint representation and against the
/// numeric iterate at exponent `m`. `g` must be diagonalizable.
pub fn ad_consistency(g: &SlnElement, g1: &SlnElement, g2: &SlnElement, m: u64) -> Result<AdConsistency> {
    let limit = lie_limit(g, g1, g2)?;
    let spec = group_cmjd(g)?.spec;

    let lambda = spec.eigenvalues();
    let ad_spec = JordanSpec::diagonalizable(ad_of(spec.m())?, &ad_diagonal(&lambda))?;
    let predicted = predicted_limit_right(&ad_spec, &ad(g2).matrix)?;
    let ad_limit = ad_of(&limit.limit)?;
    let prediction_gap = ad_limit.max_dist(predicted.matrix());

    let x = &(g1.matrix() * g.matrix()) * g2.matrix();
    let mut abs_gap: f64 = 0.0;
    for s in [g.matrix(), &x] {
        let lhs = ad_of(abs(s)?.matrix())?;
        let rhs = abs(&ad_of(s)?)?;
        abs_gap = abs_gap.max(lhs.max_dist(rhs.matrix()));
    }

    let root = graded_root(&spec, g1.matrix(), g2.matrix(), m)?;
    let iterate_error = root.root.matrix().frob_dist(&limit.limit);
    Ok(AdConsistency {
        limit,
        prediction_gap,
        abs_gap,
        iterate_error,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(rows: &[&[f64]]) -> SlnElement {
        SlnElement::new(CMatrix::from_real_rows(rows)).unwrap()
    }

    fn rotation(th: f64) -> SlnElement {
        let (s, c) = th.sin_cos();
        sl(&[&[c, -s], &[s, c]])
    }

    fn upper() -> SlnElement {
        sl(&[&[2.0, 1.0], &[0.0, 0.5]])
    }

    #[test]
    fn rejects_non_unit_determinant() {
        let r = SlnElement::new(CMatrix::from_real_diag(&[2.0, 1.0]));
        assert!(matches!(r, Err(Error::NotInSl(_))));
        let r = SlnElement::new(CMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]));
        assert!(matches!(r, Err(Error::NotInSl(_))));
    }

    #[test]
    fn cartan_trivial_cases() {
        let p = sl(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let c = cartan_polar(&p).unwrap();
        assert!(c.k.max_dist(&CMatrix::identity(2)) < 1e-14);
        assert!(c.p.matrix().max_dist(p.matrix()) < 1e-14);
        let r = rotation(0.9);
        let c = cartan_polar(&r).unwrap();
        assert!(c.k.max_dist(r.matrix()) < 1e-14);
        assert!(c.p.matrix().max_dist(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn cartan_upper_example() {
        let g = upper();
        let c = cartan_polar(&g).unwrap();
        // 2x2 PSD square root: sqrt(X) = (X + sqrt(det X) I) / sqrt(tr X + 2 sqrt(det X))
        let x = &g.matrix().transpose() * g.matrix();
        let sd = det(&x).unwrap().re.sqrt();
        let t = (x.trace().re + 2.0 * sd).sqrt();
        let p = (&x + &CMatrix::identity(2).scale_real(sd)).scale_real(1.0 / t);
        assert!(c.p.matrix().max_dist(&p) < 1e-14);
        assert!((&c.k.transpose() * &c.k).max_dist(&CMatrix::identity(2)) < 1e-14);
        assert!((&c.k * c.p.matrix()).max_dist(g.matrix()) < 1e-14);
        assert!((det(&c.k).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn iwasawa_examples() {
        let g = upper();
        let f = iwasawa(&g).unwrap();
        assert!(f.k.max_dist(&CMatrix::identity(2)) < 1e-15);
        let f = iwasawa(&rotation(0.3)).unwrap();
        assert!(f.a.iter().all(|a| (a - 1.0).abs() < 1e-14));
        assert!(f.nfac.max_dist(&CMatrix::identity(2)) < 1e-14);

        let g = sl(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let f = iwasawa(&g).unwrap();
        let r2 = 0.5f64.sqrt();
        assert!(f.k.max_dist(&CMatrix::from_real_rows(&[&[r2, -r2], &[r2, r2]])) < 1e-15);
        assert!((f.a[0] - 2f64.sqrt()).abs() < 1e-15 && (f.a[1] - r2).abs() < 1e-15);
        assert!(f.nfac.max_dist(&CMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]])) < 1e-15);
        assert!(f.reconstruct().max_dist(g.matrix()) < 1e-14);
    }

    #[test]
    fn group_cmjd_diagonal_and_elliptic() {
        let g = sl(&[&[2.0, 0.0], &[0.0, 0.5]]);
        let c = group_cmjd(&g).unwrap();
        assert!(c.e.matrix().max_dist(&CMatrix::identity(2)) < 1e-14);
        assert!(c.u.matrix().max_dist(&CMatrix::identity(2)) < 1e-14);
        assert!(c.h.matrix().max_dist(g.matrix()) < 1e-14);
        assert_eq!(c.b, vec![2.0, 0.5]);
        assert!(c.q.matrix().max_dist(&CMatrix::identity(2)) < 1e-14);

        let r = rotation(1.1);
        let c = group_cmjd(&r).unwrap();
        assert!(c.h.matrix().max_dist(&CMatrix::identity(2)) < 1e-12);
        assert!(c.e.matrix().max_dist(r.matrix()) < 1e-12);
        assert!(c.b.iter().all(|b| (b - 1.0).abs() < 1e-12));
    }

    #[test]
    fn group_cmjd_upper_example() {
        let g = upper();
        let c = group_cmjd(&g).unwrap();
        assert!((c.b[0] - 2.0).abs() < 1e-14 && (c.b[1] - 0.5).abs() < 1e-14);
        let q = c.q.matrix();
        // columns are multiples of (1, 0) and (-2/3, 1)
        assert!(q[(1, 0)].norm() < 1e-14);
        assert!((q[(0, 1)].re / q[(1, 1)].re + 2.0 / 3.0).abs() < 1e-14);
        assert!((det(q).unwrap().re - 1.0).abs() < 1e-12);
        let ehu = &(c.e.matrix() * c.h.matrix()) * c.u.matrix();
        assert!(ehu.max_dist(g.matrix()) < 1e-12);
        let h = &(q * &CMatrix::from_real_diag(&c.b)) * &inverse(q).unwrap();
        assert!(h.max_dist(c.h.matrix()) < 1e-12);
    }

    #[test]
    fn lie_limit_examples() {
        let g = sl(&[&[2.0, 0.0], &[0.0, 0.5]]);
        let i = SlnElement::identity(2);
        let l = lie_limit(&g, &i, &i).unwrap();
        assert!(l.limit.max_dist(g.matrix()) < 1e-14);
        let l = lie_limit(&rotation(0.7), &i, &i).unwrap();
        assert!(l.limit.max_dist(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn lie_limit_matches_matrix_theorem() {
        let g = upper();
        let g1 = sl(&[&[1.0, 2.0], &[0.5, 2.0]]);
        let g2 = sl(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let l = lie_limit(&g, &g1, &g2).unwrap();
        let (spec, _) = cmjd_numeric(g.matrix(), &Tolerances::default()).unwrap();
        let p = predicted_limit_right(&spec, g2.matrix()).unwrap();
        assert!(l.limit.max_dist(p.matrix()) < 1e-12);
    }

    #[test]
    fn ad_consistency_diagonal() {
        let g = sl(&[&[2.0, 0.0], &[0.0, 0.5]]);
        let i = SlnElement::identity(2);
        let r = ad_consistency(&g, &i, &i, 1 << 16).unwrap();
        assert!(ad_of(&r.limit.limit).unwrap().max_dist(&CMatrix::from_real_diag(&[4.0, 1.0, 0.25])) < 1e-14);
        assert!(r.prediction_gap < 1e-12);
        assert!(r.abs_gap < 1e-12);
        assert!(r.iterate_error < 1e-12);
    }

    #[test]
    fn ad_consistency_elliptic() {
        let i = SlnElement::identity(2);
        let r = ad_consistency(&rotation(0.5), &i, &i, 1 << 10).unwrap();
        assert!(r.limit.limit.max_dist(&CMatrix::identity(2)) < 1e-12);
        assert!(r.prediction_gap < 1e-10);
        assert!(r.iterate_error < 1e-10);
    }
}
