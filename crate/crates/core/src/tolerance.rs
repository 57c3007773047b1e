use serde::{Deserialize, Serialize};

/// Tolerance table. All thresholds are relative to the max-modulus entry of
/// the matrix they are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub herm_tol: f64,
    pub psd_tol: f64,
    pub rank_tol: f64,
    /// Relative gap below which two eigenvalue moduli are one group.
    pub group_tol: f64,
    /// Largest accepted eigenvector-matrix condition number.
    pub cond_max: f64,
    /// Log-space window for growth-exponent classification; `None` means half
    /// the smallest log-gap between consecutive moduli.
    pub match_tol: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm_tol: 1e-10,
            psd_tol: 1e-10,
            rank_tol: 1e-12,
            group_tol: 1e-9,
            cond_max: 1e8,
            match_tol: None,
        }
    }
}

/// Moduli below this are treated as exact zeros when grouping.
pub const ABS_FLOOR: f64 = 1e-12;
