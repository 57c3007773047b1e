//! The auxiliary limit statements as executable checks: monotonicity of
//! matrix roots, the squeeze lemma, `|D^m L|^{1/m} -> D` and the invariance
//! of the limit under factors of subexponential size.

use serde::{Deserialize, Serialize};

use super::graded::graded_root;
use super::iterate::{validate_schedule, ConvergenceReport};
use super::predict::{is_nonsingular, Side};
use crate::error::{Error, Result};
use crate::jordan::power::{phase_power, place_toeplitz, unipotent_power_coeffs};
use crate::jordan::{JordanBlock, JordanSpec};
use crate::numlin::{eigh, inverse, psd_power, spectral_norm, CMatrix, HermitianView, PsdMatrix, ONE};
use crate::random::{lower_triangular, rng, strictly_upper, unitary};

/// `lambda_min(B^{1/(2m)} - A^{1/(2m)})` for `m = 1..=max_m`; the roots are
/// Löwner monotone, so every entry is `>= 0` up to rounding when `A <= B`.
pub fn monotone_root_property(a: &PsdMatrix, b: &PsdMatrix, max_m: u32) -> Result<Vec<f64>> {
    let mut margins = Vec::with_capacity(max_m as usize);
    for m in 1..=max_m {
        let r = 1.0 / (2.0 * m as f64);
        let ar = psd_power(a, r)?;
        let br = psd_power(b, r)?;
        let diff = HermitianView::new(&(br.matrix() - ar.matrix()).hermitian_part())?;
        margins.push(eigh(&diff)?.eigenvalues.last().copied().unwrap_or(0.0));
    }
    Ok(margins)
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub schedule: Vec<u64>,
    /// `A_m <= B_m <= C_m` held at each `m`.
    pub ordered: Vec<bool>,
    /// `||B_m - B||_F`.
    pub distances: Vec<f64>,
    /// `max(||A_m - B||_F, ||C_m - B||_F)`.
    pub envelope: Vec<f64>,
}

/// Squeezes `B_m = B + P/m` between `A_m = B - I/m` and `C_m = B + 2I/m`
/// (`0 <= P <= I`) and records how `B_m` approaches `B`.
pub fn sandwich_property(b: &CMatrix, p: &CMatrix, schedule: &[u64], tol: f64) -> Result<SandwichReport> {
    validate_schedule(schedule, 1)?;
    let n = b.rows();
    let id = CMatrix::identity(n);
    let mut ordered = Vec::new();
    let mut distances = Vec::new();
    let mut envelope = Vec::new();
    for &m in schedule {
        let h = 1.0 / m as f64;
        let am = b - &id.scale_real(h);
        let bm = b + &p.scale_real(h);
        let cm = b + &id.scale_real(2.0 * h);
        let lo = crate::numlin::loewner_leq(&HermitianView::new(&am)?, &HermitianView::new(&bm)?, tol)?;
        let hi = crate::numlin::loewner_leq(&HermitianView::new(&bm)?, &HermitianView::new(&cm)?, tol)?;
        ordered.push(lo && hi);
        distances.push(bm.frob_dist(b));
        envelope.push(am.frob_dist(b).max(cm.frob_dist(b)));
    }
    Ok(SandwichReport {
        schedule: schedule.to_vec(),
        ordered,
        distances,
        envelope,
    })
}

/// `|D^m L|^{1/m}` along the schedule against the limit `diag(D)`.
pub fn diag_lower_limit(d: &[f64], l: &CMatrix, schedule: &[u64]) -> Result<ConvergenceReport> {
    let n = d.len();
    if l.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "diag_lower_limit",
            left: (n, n),
            right: l.shape(),
        });
    }
    if d.iter().any(|&x| !(x >= 0.0)) || d.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidSpec("D must be nonnegative and descending".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if l[(i, j)].norm() != 0.0 {
                return Err(Error::InvalidSpec("L must be lower triangular".into()));
            }
        }
    }
    if !is_nonsingular(l)? {
        return Err(Error::SingularL);
    }
    let spec = diagonal_spec(d)?;
    super::iterate::iterate_limit(&spec, &CMatrix::identity(n), l, schedule, Side::Right, 1)
}

fn diagonal_spec(d: &[f64]) -> Result<JordanSpec> {
    let n = d.len();
    JordanSpec::new(CMatrix::identity(n), d.iter().map(|&x| JordanBlock::real(x, 1)).collect())
}

/// Families of factors `B_m` with `s_1(B_m)^{1/m}, s_n(B_m)^{1/m} -> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// `E^m U^m M` from the spec's multiplicative Jordan decomposition.
    EllipticUnipotent,
    /// Independent random unitaries.
    Unitary,
    /// `I + m K` with `K` strictly upper triangular.
    BoundedPolynomial,
}

#[derive(Debug, Clone)]
pub struct PerturbedReport {
    pub schedule: Vec<u64>,
    pub s1_roots: Vec<f64>,
    pub sn_roots: Vec<f64>,
    /// `|| |B_m D^m L|^{1/m} - D ||_F`.
    pub frob_errors: Vec<f64>,
    /// `|| |D^m L|^{1/m} - D ||_F`, the unperturbed sequence.
    pub base_errors: Vec<f64>,
}

/// Checks that `B_m` has subexponential singular values and that it leaves
/// the limit of `|D^m L|^{1/m}` unchanged; `D` comes from the spec's moduli
/// and `L` is a seeded random lower triangular matrix.
pub fn perturbed_limit_property(
    kind: PerturbationKind,
    spec: &JordanSpec,
    schedule: &[u64],
    seed: u64,
) -> Result<PerturbedReport> {
    validate_schedule(schedule, 1)?;
    let n = spec.n();
    let mut r = rng(seed);
    let l = lower_triangular(&mut r, n);
    let k = strictly_upper(&mut r, n);
    let d = spec.moduli();
    let dspec = diagonal_spec(&d)?;
    let target = CMatrix::from_real_diag(&d);
    let id = CMatrix::identity(n);

    let mut report = PerturbedReport {
        schedule: schedule.to_vec(),
        s1_roots: Vec::new(),
        sn_roots: Vec::new(),
        frob_errors: Vec::new(),
        base_errors: Vec::new(),
    };
    for &m in schedule {
        let (bm, bm_inv) = match kind {
            PerturbationKind::EllipticUnipotent => elliptic_unipotent(spec, m)?,
            PerturbationKind::Unitary => {
                let u = unitary(&mut rng(seed ^ m.wrapping_mul(0x9e37_79b9_7f4a_7c15)), n, false);
                let ui = u.adjoint();
                (u, ui)
            }
            PerturbationKind::BoundedPolynomial => {
                let b = &id + &k.scale_real(m as f64);
                let bi = inverse(&b)?;
                (b, bi)
            }
        };
        let mf = m as f64;
        report.s1_roots.push((spectral_norm(&bm)?.ln() / mf).exp());
        report.sn_roots.push((-spectral_norm(&bm_inv)?.ln() / mf).exp());
        let perturbed = graded_root(&dspec, &bm, &l, m)?;
        report.frob_errors.push(perturbed.root.matrix().frob_dist(&target));
        let base = graded_root(&dspec, &id, &l, m)?;
        report.base_errors.push(base.root.matrix().frob_dist(&target));
    }
    Ok(report)
}

/// `E^m U^m M = M W_m` and its inverse `W_m^{-1} M^{-1}`, where `W_m` is the
/// block power of the elliptic and unipotent parts in Jordan coordinates
/// (`E' = I`, `U' = I + N` on nilpotent blocks).
fn elliptic_unipotent(spec: &JordanSpec, m: u64) -> Result<(CMatrix, CMatrix)> {
    let n = spec.n();
    let mut w = CMatrix::zeros(n, n);
    let mut wi = CMatrix::zeros(n, n);
    for (blk, off) in spec.blocks().iter().zip(spec.block_offsets()) {
        let (mu, ph) = if blk.mu.norm() == 0.0 {
            (ONE, ONE)
        } else {
            (blk.mu, phase_power(blk.mu, m as i64))
        };
        let f: Vec<_> = unipotent_power_coeffs(mu, blk.size, m, false)?.into_iter().map(|z| z * ph).collect();
        let g: Vec<_> = unipotent_power_coeffs(mu, blk.size, m, true)?
            .into_iter()
            .map(|z| z * ph.conj())
            .collect();
        place_toeplitz(&mut w, off, &f);
        place_toeplitz(&mut wi, off, &g);
    }
    Ok((spec.m() * &w, &wi * spec.m_inv()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymlimit::default_schedule;
    use crate::numlin::C64;

    #[test]
    fn diag_lower_identity_is_exact() {
        let r = diag_lower_limit(&[2.0, 1.0], &CMatrix::identity(2), &default_schedule()).unwrap();
        assert!(r.frob_errors.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn diag_lower_examples() {
        let l = CMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let r = diag_lower_limit(&[2.0, 1.0], &l, &default_schedule()).unwrap();
        assert!(r.final_frob_error() <= 3e-3);
        let l = CMatrix::from_real_rows(&[&[1.0, 0.0], &[5.0, 1.0]]);
        let r = diag_lower_limit(&[1.0, 0.0], &l, &[1 << 12]).unwrap();
        assert!(r.final_frob_error() < 1e-3);
    }

    #[test]
    fn diag_lower_rejects_bad_input() {
        let upper = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(diag_lower_limit(&[2.0, 1.0], &upper, &[4]).is_err());
        let sing = CMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert!(matches!(diag_lower_limit(&[2.0, 1.0], &sing, &[4]), Err(Error::SingularL)));
        assert!(diag_lower_limit(&[1.0, 2.0], &CMatrix::identity(2), &[4]).is_err());
    }

    #[test]
    fn unipotent_factor_has_subexponential_growth() {
        let s = JordanSpec::new(CMatrix::identity(2), vec![JordanBlock::real(1.0, 2)]).unwrap();
        let r = perturbed_limit_property(PerturbationKind::EllipticUnipotent, &s, &[1 << 16], 1).unwrap();
        assert!((r.s1_roots[0] - 1.0).abs() < 1e-3 && r.s1_roots[0] > 1.0);
        assert!((r.sn_roots[0] - 1.0).abs() < 1e-3 && r.sn_roots[0] < 1.0);
    }

    #[test]
    fn identity_and_unitary_families() {
        let s = JordanSpec::new(CMatrix::identity(2), vec![JordanBlock::real(3.0, 1), JordanBlock::real(1.0, 1)]).unwrap();
        let r = perturbed_limit_property(PerturbationKind::EllipticUnipotent, &s, &[4, 64], 1).unwrap();
        // B_m = M = I for a diagonal positive spec
        assert!(r.s1_roots.iter().chain(&r.sn_roots).all(|&x| (x - 1.0).abs() < 1e-15));
        let r = perturbed_limit_property(PerturbationKind::Unitary, &s, &default_schedule(), 1).unwrap();
        assert!(r.s1_roots.iter().chain(&r.sn_roots).all(|&x| (x - 1.0).abs() < 1e-14));
        for (a, b) in r.frob_errors.iter().zip(&r.base_errors) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn squeeze() {
        let b = CMatrix::from_real_diag(&[2.0, 1.0]);
        let p = CMatrix::from_rows(&[vec![C64::new(0.5, 0.0), C64::new(0.0, 0.2)], vec![C64::new(0.0, -0.2), C64::new(0.3, 0.0)]]);
        let r = sandwich_property(&b, &p, &default_schedule(), 1e-12).unwrap();
        assert!(r.ordered.iter().all(|&x| x));
        assert!(r.distances.iter().zip(&r.envelope).all(|(d, e)| d <= e));
        assert!(r.distances.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn roots_are_monotone() {
        let a = PsdMatrix::new(&CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let b = PsdMatrix::new(&CMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]])).unwrap();
        let margins = monotone_root_property(&a, &b, 6).unwrap();
        assert!(margins.iter().all(|&x| x >= -1e-12));
    }
}
