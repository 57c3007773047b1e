use serde::{Deserialize, Serialize};

use crate::numlin::general::same_modulus;

/// Distinct eigenvalue moduli `gamma_1 > ... > gamma_s >= 0` with their
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliGroups {
    pub gammas: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl ModuliGroups {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Index ranges of each group inside the descending modulus vector.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    /// Group (0-based) owning position `i` of the modulus vector.
    pub fn group_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (g, &m) in self.multiplicities.iter().enumerate() {
            acc += m;
            if i < acc {
                return g;
            }
        }
        self.multiplicities.len() - 1
    }

    /// Half the smallest log-gap between consecutive nonzero moduli.
    pub fn default_match_tol(&self) -> f64 {
        let logs: Vec<f64> = self.gammas.iter().filter(|&&g| g > 0.0).map(|g| g.ln()).collect();
        logs.windows(2)
            .map(|w| (w[0] - w[1]) / 2.0)
            .fold(f64::INFINITY, f64::min)
            .min(0.5)
    }
}

/// Splits a descending modulus vector into maximal runs whose consecutive
/// ratio exceeds `1 - group_tol`; values below the absolute floor merge.
pub fn moduli_groups(d: &[f64], group_tol: f64) -> ModuliGroups {
    let mut gammas: Vec<f64> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    for (i, &x) in d.iter().enumerate() {
        if i > 0 && same_modulus(d[i - 1], x, group_tol) {
            *multiplicities.last_mut().unwrap() += 1;
        } else {
            gammas.push(x);
            multiplicities.push(1);
        }
    }
    ModuliGroups {
        gammas,
        multiplicities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = moduli_groups(&[3.0, 3.0, 1.0], 1e-9);
        assert_eq!(g.gammas, vec![3.0, 1.0]);
        assert_eq!(g.multiplicities, vec![2, 1]);

        let g = moduli_groups(&[2.0, 0.0, 0.0], 1e-9);
        assert_eq!(g.gammas, vec![2.0, 0.0]);
        assert_eq!(g.multiplicities, vec![1, 2]);

        let g = moduli_groups(&[1.0 + 1e-15, 1.0], 1e-9);
        assert_eq!(g.gammas, vec![1.0 + 1e-15]);
        assert_eq!(g.multiplicities, vec![2]);
    }

    #[test]
    fn ranges_and_lookup() {
        let g = moduli_groups(&[5.0, 2.0, 2.0, 2.0, 0.5], 1e-9);
        assert_eq!(g.ranges(), vec![0..1, 1..4, 4..5]);
        assert_eq!(g.group_of(3), 1);
        assert_eq!(g.group_of(4), 2);
    }

    #[test]
    fn match_tol_is_half_min_log_gap() {
        let g = moduli_groups(&[4.0, 2.0, 1.9, 0.0], 1e-9);
        let expected = (2.0f64.ln() - 1.9f64.ln()) / 2.0;
        assert!((g.default_match_tol() - expected).abs() < 1e-15);
    }
}
