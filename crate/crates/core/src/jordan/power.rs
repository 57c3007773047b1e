//! Closed-form powers of Jordan blocks evaluated in log space.
//!
//! Entry `(i, i + k)` of `J_t(mu)^m` is `binom(m, k) mu^(m-k)`. Magnitudes are
//! carried as logarithms and phases are tracked separately so that `m` up to
//! `2^30` never overflows before the common scale is removed.

use std::f64::consts::{PI, TAU};

use super::JordanSpec;
use crate::error::{Error, Result};
use crate::numlin::{CMatrix, C64, ZERO};

/// Largest log-magnitude accepted for a single scaled entry.
const LOG_LIMIT: f64 = 700.0;

/// `A^m` represented as `base * exp(log_scale)`.
#[derive(Debug, Clone)]
pub struct ScaledPower {
    pub base: CMatrix,
    pub log_scale: f64,
    pub m: u64,
}

impl ScaledPower {
    /// The represented matrix; overflows to infinity for large `log_scale`.
    pub fn to_matrix(&self) -> CMatrix {
        self.base.scale_real(self.log_scale.exp())
    }
}

/// `ln binom(m, k)`; `-inf` when `k > m`.
pub fn ln_binom(m: u64, k: u64) -> f64 {
    if k > m {
        return f64::NEG_INFINITY;
    }
    let k = k.min(m - k);
    let mut s = 0.0;
    for i in 0..k {
        s += ((m - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    s
}

/// `ln |binom(-m, k)| = ln binom(m + k - 1, k)`.
pub fn ln_binom_neg(m: u64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    ln_binom(m + k - 1, k)
}

/// `(mu / |mu|)^p` with exact values for real and purely imaginary `mu`.
pub fn phase_power(mu: C64, p: i64) -> C64 {
    if mu.im == 0.0 {
        let neg = mu.re < 0.0 && p.rem_euclid(2) == 1;
        return C64::new(if neg { -1.0 } else { 1.0 }, 0.0);
    }
    if mu.re == 0.0 {
        let q = if mu.im > 0.0 { p.rem_euclid(4) } else { (-p).rem_euclid(4) };
        return match q {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = mu.im.atan2(mu.re);
    // reduce p * theta without forming the full product first
    let turns = theta / TAU;
    let frac = ((p as f64) * turns).rem_euclid(1.0);
    let ang = frac * TAU;
    let ang = if ang > PI { ang - TAU } else { ang };
    C64::from_polar(1.0, ang)
}

/// Coefficients `c_k` (k = 0..size) of `J_size(mu)^m / rho^m` where
/// `ln_rho = ln rho`; the block power is the upper Toeplitz matrix with `c_k`
/// on superdiagonal `k`. The ratio `|mu| / rho` is formed before raising to
/// the power so that equal moduli cancel exactly.
pub fn block_power_coeffs(mu: C64, size: usize, m: u64, ln_rho: f64) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(size);
    let r = mu.norm();
    for k in 0..size as u64 {
        if k > m {
            out.push(ZERO);
            continue;
        }
        if r == 0.0 {
            // only the k == m diagonal survives
            if k == m {
                let lg = ln_binom(m, k) - (m as f64) * ln_rho;
                check_log(lg)?;
                out.push(C64::new(lg.exp(), 0.0));
            } else {
                out.push(ZERO);
            }
            continue;
        }
        let lg = ln_binom(m, k) + ((m - k) as f64) * (r.ln() - ln_rho) - (k as f64) * ln_rho;
        check_log(lg)?;
        out.push(phase_power(mu, (m - k) as i64) * lg.exp());
    }
    Ok(out)
}

/// Coefficients of `(I + N/mu)^m` for a block of `size` (requires `mu != 0`).
/// With `inverse`, coefficients of `(I + N/mu)^{-m}`.
pub fn unipotent_power_coeffs(mu: C64, size: usize, m: u64, inverse: bool) -> Result<Vec<C64>> {
    let r = mu.norm();
    debug_assert!(r > 0.0);
    let mut out = Vec::with_capacity(size);
    for k in 0..size as u64 {
        let (lb, sign) = if inverse {
            (ln_binom_neg(m, k), if k % 2 == 1 { -1.0 } else { 1.0 })
        } else {
            (ln_binom(m, k), 1.0)
        };
        if lb == f64::NEG_INFINITY {
            out.push(ZERO);
            continue;
        }
        let lg = lb - (k as f64) * r.ln();
        check_log(lg)?;
        out.push(phase_power(mu, -(k as i64)) * (sign * lg.exp()));
    }
    Ok(out)
}

fn check_log(lg: f64) -> Result<()> {
    if lg > LOG_LIMIT {
        Err(Error::Overflow { log_magnitude: lg })
    } else {
        Ok(())
    }
}

/// Places an upper Toeplitz block with the given superdiagonal coefficients
/// at `offset` in `out`.
pub fn place_toeplitz(out: &mut CMatrix, offset: usize, coeffs: &[C64]) {
    let t = coeffs.len();
    for i in 0..t {
        for j in i..t {
            out[(offset + i, offset + j)] = coeffs[j - i];
        }
    }
}

/// `A^m` with the common factor `gamma_1^m` removed.
pub fn power_scaled(spec: &JordanSpec, m: u64) -> Result<ScaledPower> {
    if m == 0 {
        return Err(Error::InvalidSchedule("exponent must be >= 1".into()));
    }
    let gamma1 = spec.moduli()[0];
    if gamma1 == 0.0 && (m as usize) < spec.max_block_size() {
        return Err(Error::InvalidSchedule(format!(
            "nilpotent input needs m >= {}",
            spec.max_block_size()
        )));
    }
    let ln_rho = if gamma1 == 0.0 { 0.0 } else { gamma1.ln() };
    let log_scale = (m as f64) * ln_rho;
    let n = spec.n();
    let mut jm = CMatrix::zeros(n, n);
    for (blk, off) in spec.blocks().iter().zip(spec.block_offsets()) {
        let c = block_power_coeffs(blk.mu, blk.size, m, ln_rho)?;
        place_toeplitz(&mut jm, off, &c);
    }
    let base = &(spec.m() * &jm) * spec.m_inv();
    if !base.data().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Overflow {
            log_magnitude: f64::INFINITY,
        });
    }
    Ok(ScaledPower { base, log_scale, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::JordanBlock;

    fn blk(re: f64, im: f64, size: usize) -> JordanBlock {
        JordanBlock {
            mu: C64::new(re, im),
            size,
        }
    }

    #[test]
    fn binomials() {
        assert!((ln_binom(10, 3) - 120f64.ln()).abs() < 1e-13);
        assert_eq!(ln_binom(3, 5), f64::NEG_INFINITY);
        assert_eq!(ln_binom(7, 0), 0.0);
        assert!((ln_binom_neg(4, 2) - 10f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn exact_phases() {
        assert_eq!(phase_power(C64::new(-2.0, 0.0), 7), C64::new(-1.0, 0.0));
        assert_eq!(phase_power(C64::new(-2.0, 0.0), 1 << 30), C64::new(1.0, 0.0));
        assert_eq!(phase_power(C64::new(0.0, 3.0), 3), C64::new(0.0, -1.0));
        assert_eq!(phase_power(C64::new(0.0, -3.0), 1), C64::new(0.0, -1.0));
        let w = C64::from_polar(2.0, 0.3);
        assert!((phase_power(w, 5) - C64::from_polar(1.0, 1.5)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_scaled_power() {
        let spec = JordanSpec::new(CMatrix::identity(2), vec![blk(5.0, 0.0, 1), blk(2.0, 0.0, 1)]).unwrap();
        let p = power_scaled(&spec, 3).unwrap();
        assert!((p.log_scale - 3.0 * 5f64.ln()).abs() < 1e-14);
        let expected = CMatrix::from_real_diag(&[1.0, (0.4f64).powi(3)]);
        assert!(p.base.max_dist(&expected) < 1e-15);
    }

    #[test]
    fn unipotent_block_is_binomial_row() {
        let spec = JordanSpec::new(CMatrix::identity(2), vec![blk(1.0, 0.0, 2)]).unwrap();
        let p = power_scaled(&spec, 4).unwrap();
        assert_eq!(p.log_scale, 0.0);
        assert!(p.base.max_dist(&CMatrix::from_real_rows(&[&[1.0, 4.0], &[0.0, 1.0]])) < 1e-14);
    }

    #[test]
    fn nilpotent_needs_large_enough_exponent() {
        let spec = JordanSpec::new(CMatrix::identity(3), vec![blk(0.0, 0.0, 3)]).unwrap();
        assert!(power_scaled(&spec, 2).is_err());
        assert_eq!(power_scaled(&spec, 3).unwrap().base.max_abs(), 0.0);
    }

    #[test]
    fn huge_exponent_stays_finite() {
        let spec = JordanSpec::new(CMatrix::identity(3), vec![blk(3.0, 0.0, 2), blk(1.0, 0.0, 1)]).unwrap();
        let p = power_scaled(&spec, 1 << 30).unwrap();
        assert!(p.base.max_abs().is_finite());
        assert!((p.log_scale - (1u64 << 30) as f64 * 3f64.ln()).abs() < 1e-6);
        // (0,1) entry: m * 3^(m-1) / 3^m = m / 3
        assert!((p.base[(0, 1)].re / ((1u64 << 30) as f64 / 3.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unipotent_inverse_coeffs_invert() {
        let mu = C64::new(0.5, -1.5);
        let size = 4;
        let f = unipotent_power_coeffs(mu, size, 9, false).unwrap();
        let g = unipotent_power_coeffs(mu, size, 9, true).unwrap();
        let mut a = CMatrix::zeros(size, size);
        let mut b = CMatrix::zeros(size, size);
        place_toeplitz(&mut a, 0, &f);
        place_toeplitz(&mut b, 0, &g);
        assert!((&a * &b).max_dist(&CMatrix::identity(size)) < 1e-11);
    }
}
