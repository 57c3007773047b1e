use super::iterate::validate_schedule;
use super::nayak::{nayak_projections, NayakProjections};
use crate::error::{Error, Result};
use crate::jordan::power::{phase_power, unipotent_power_coeffs};
use crate::jordan::JordanSpec;
use crate::numlin::{vec_norm, CMatrix, C64, ZERO};
use crate::tolerance::Tolerances;

/// Components of `M^{-1} x` below this fraction of its norm are treated as
/// rounding noise from a vector that lies in a smaller invariant subspace.
const SNAP_TOL: f64 = 1e-10;
/// `x` is in `Im E_j` when `||E_j x - x|| <= MEMBERSHIP_TOL ||x||`.
const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    /// `||A^m x||^{1/m}` at the largest scheduled `m`.
    pub estimate: f64,
    /// `(m, ||A^m x||^{1/m})` along the schedule.
    pub trace: Vec<(u64, f64)>,
    /// 1-based group index of the nearest `gamma` in log space.
    pub classified_j: usize,
    /// 1-based `j` with `x` in `Im E_j` but not in `Im E_{j+1}`.
    pub membership_j: usize,
    pub gamma: f64,
}

/// `ln ||A^m x||`, evaluated block by block in Jordan coordinates so that no
/// power is ever formed; `-inf` when `A^m x = 0`.
pub fn log_power_norm(spec: &JordanSpec, x: &[C64], m: u64) -> Result<f64> {
    let y = spec.m_inv().mul_vec(x);
    let ynorm = vec_norm(&y);
    let mut parts: Vec<(usize, Vec<C64>, f64)> = Vec::new();
    for (blk, off) in spec.blocks().iter().zip(spec.block_offsets()) {
        let yb = &y[off..off + blk.size];
        if vec_norm(yb) <= SNAP_TOL * ynorm {
            continue;
        }
        let t = blk.size;
        if blk.mu.norm() == 0.0 {
            // J(0)^m shifts up by m places
            let m = m as usize;
            if m >= t {
                continue;
            }
            let mut z = vec![ZERO; t];
            z[..t - m].copy_from_slice(&yb[m..]);
            if vec_norm(&z) > 0.0 {
                parts.push((off, z, 0.0));
            }
            continue;
        }
        let coeffs = unipotent_power_coeffs(blk.mu, t, m, false)?;
        let ph = phase_power(blk.mu, m as i64);
        let z: Vec<C64> = (0..t)
            .map(|i| (i..t).map(|k| coeffs[k - i] * yb[k]).sum::<C64>() * ph)
            .collect();
        parts.push((off, z, m as f64 * blk.mu.norm().ln()));
    }
    let cmax = parts.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
    if cmax == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let mut w = vec![ZERO; spec.n()];
    for (off, z, c) in &parts {
        let f = (c - cmax).exp();
        for (i, zi) in z.iter().enumerate() {
            w[off + i] += zi * f;
        }
    }
    let v = spec.m().mul_vec(&w);
    Ok(cmax + vec_norm(&v).ln())
}

/// Largest 1-based `j` with `x` in `Im E_j`.
pub fn membership_index(projections: &NayakProjections, x: &[C64]) -> usize {
    let xn = vec_norm(x);
    let mut best = 1;
    for j in 1..=projections.len() {
        let ex = projections.projection(j).mul_vec(x);
        let diff: Vec<C64> = ex.iter().zip(x).map(|(a, b)| a - b).collect();
        if vec_norm(&diff) <= MEMBERSHIP_TOL * xn {
            best = j;
        }
    }
    best
}

/// Estimates `lim ||A^m x||^{1/m}` and classifies `x` by the modulus group
/// it grows with, cross-checked against the projection membership test.
pub fn growth_exponent(spec: &JordanSpec, x: &[C64], schedule: &[u64], tol: &Tolerances) -> Result<GrowthEstimate> {
    if x.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            op: "growth_exponent",
            left: (spec.n(), 1),
            right: (x.len(), 1),
        });
    }
    if vec_norm(x) == 0.0 {
        return Err(Error::ZeroVector);
    }
    validate_schedule(schedule, spec.max_zero_block() as u64)?;
    let mut trace = Vec::with_capacity(schedule.len());
    for &m in schedule {
        let lg = log_power_norm(spec, x, m)?;
        trace.push((m, (lg / m as f64).exp()));
    }
    let estimate = trace.last().unwrap().1;

    let groups = spec.groups();
    let match_tol = tol.match_tol.unwrap_or_else(|| groups.default_match_tol());
    let classified_j = classify(estimate, &groups.gammas, match_tol)?;
    let projections = nayak_projections(spec)?;
    let membership_j = membership_index(&projections, x);
    if classified_j != membership_j {
        return Err(Error::ClassificationMismatch {
            numeric: classified_j,
            membership: membership_j,
        });
    }
    Ok(GrowthEstimate {
        estimate,
        trace,
        classified_j,
        membership_j,
        gamma: groups.gammas[classified_j - 1],
    })
}

/// 1-based index of the `gamma` nearest to `estimate` in log space.
fn classify(estimate: f64, gammas: &[f64], match_tol: f64) -> Result<usize> {
    if estimate == 0.0 {
        return match gammas.iter().position(|&g| g == 0.0) {
            Some(j) => Ok(j + 1),
            None => Err(Error::AmbiguousClassification {
                estimate,
                nearest: gammas.last().copied().into_iter().collect(),
            }),
        };
    }
    let le = estimate.ln();
    let mut ranked: Vec<(f64, usize)> = gammas
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0.0)
        .map(|(j, &g)| ((le - g.ln()).abs(), j))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    match ranked.first() {
        Some(&(dist, j)) if dist <= match_tol => Ok(j + 1),
        _ => Err(Error::AmbiguousClassification {
            estimate,
            nearest: ranked.iter().take(2).map(|&(_, j)| gammas[j]).collect(),
        }),
    }
}

/// `A` maps `Im E_j` into itself: returns `max_j ||E_j A E_j x - A E_j x||`
/// relative to `||A|| ||x||`.
pub fn invariance_defect(spec: &JordanSpec, a: &CMatrix, x: &[C64]) -> Result<f64> {
    let p = nayak_projections(spec)?;
    let scale = a.frob_norm().max(f64::MIN_POSITIVE) * vec_norm(x);
    let mut worst: f64 = 0.0;
    for j in 1..=p.len() {
        let e = p.projection(j);
        let aex = a.mul_vec(&e.mul_vec(x));
        let eaex = e.mul_vec(&aex);
        let diff: Vec<C64> = eaex.iter().zip(&aex).map(|(u, v)| u - v).collect();
        worst = worst.max(vec_norm(&diff) / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymlimit::default_schedule;
    use crate::jordan::JordanBlock;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn example_spec() -> JordanSpec {
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]);
        JordanSpec::new(m, vec![JordanBlock::real(2.0, 1), JordanBlock::real(1.0, 1)]).unwrap()
    }

    #[test]
    fn diagonal_example() {
        let s = JordanSpec::new(CMatrix::identity(2), vec![JordanBlock::real(3.0, 1), JordanBlock::real(1.0, 1)]).unwrap();
        let g = growth_exponent(&s, &[c(1.0), c(0.0)], &default_schedule(), &Tolerances::default()).unwrap();
        assert!((g.estimate - 3.0).abs() < 1e-12);
        assert_eq!(g.classified_j, 1);
    }

    #[test]
    fn eigenvector_of_smaller_modulus() {
        let g = growth_exponent(&example_spec(), &[c(1.0), c(-1.0)], &default_schedule(), &Tolerances::default()).unwrap();
        // ||A^m x|| = ||x|| = sqrt 2, so the estimate is 2^{1/(2m)}
        assert!((g.estimate - 2f64.powf(0.5 / 65536.0)).abs() < 1e-14);
        assert_eq!(g.classified_j, 2);
    }

    #[test]
    fn generic_vector_grows_with_top_modulus() {
        let s = example_spec();
        let x = [c(0.0), c(1.0)];
        let g = growth_exponent(&s, &x, &default_schedule(), &Tolerances::default()).unwrap();
        assert!((g.estimate - 2.0).abs() < 1e-4);
        assert_eq!(g.classified_j, 1);
        // brute-force power iteration at moderate m agrees
        let a = crate::jordan::assemble(&s);
        let mut v = x.to_vec();
        let mut lg = 0.0;
        for _ in 0..2000 {
            v = a.mul_vec(&v);
            let nr = vec_norm(&v);
            lg += nr.ln();
            v.iter_mut().for_each(|z| *z /= nr);
        }
        assert!(((lg / 2000.0).exp() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn zero_vector_rejected() {
        let r = growth_exponent(&example_spec(), &[c(0.0), c(0.0)], &default_schedule(), &Tolerances::default());
        assert!(matches!(r, Err(Error::ZeroVector)));
    }

    #[test]
    fn nilpotent_part_classified_as_zero_group() {
        let s = JordanSpec::new(CMatrix::identity(3), vec![JordanBlock::real(2.0, 1), JordanBlock::real(0.0, 2)]).unwrap();
        let g = growth_exponent(&s, &[c(0.0), c(1.0), c(1.0)], &[2, 8], &Tolerances::default()).unwrap();
        assert_eq!(g.estimate, 0.0);
        assert_eq!(g.classified_j, 2);
    }

    #[test]
    fn log_norm_handles_huge_exponents() {
        let s = example_spec();
        let lg = log_power_norm(&s, &[c(0.0), c(1.0)], 1 << 30).unwrap();
        assert!(lg.is_finite());
        assert!((lg / (1u64 << 30) as f64 - 2f64.ln()).abs() < 1e-8);
    }
}
