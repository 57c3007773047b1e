//! Seeded generators for test and experiment inputs. All draws go through a
//! ChaCha stream so a seed reproduces the same matrices on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::jordan::{JordanBlock, JordanSpec};
use crate::numlin::{qr, singular_values, CMatrix, C64, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Entries with independent standard normal real and imaginary parts.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), normal(rng)))
}

pub fn real_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), 0.0))
}

pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(normal(rng), normal(rng))).collect()
}

/// Redraws until `s_max / s_min <= max_condition`.
pub fn nonsingular<R: Rng + ?Sized>(rng: &mut R, n: usize, max_condition: f64, real: bool) -> CMatrix {
    loop {
        let a = if real {
            real_matrix(rng, n, n)
        } else {
            complex_matrix(rng, n, n)
        };
        let s = singular_values(&a).expect("finite input");
        if s[n - 1] > 0.0 && s[0] / s[n - 1] <= max_condition {
            return a;
        }
    }
}

/// Haar-distributed unitary (orthogonal when `real`).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, real: bool) -> CMatrix {
    let a = nonsingular(rng, n, 1e6, real);
    qr(&a).expect("nonsingular").q
}

/// Hermitian `0 <= P <= scale * I`.
pub fn psd_bounded<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    let u = unitary(rng, n, false);
    let d: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * scale).collect();
    (&(&u * &CMatrix::from_real_diag(&d)) * &u.adjoint()).hermitian_part()
}

/// Hermitian positive definite with eigenvalues in `[lo, hi]`.
pub fn psd_with_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> CMatrix {
    let u = unitary(rng, n, false);
    let d: Vec<f64> = (0..n).map(|_| lo + rng.random::<f64>() * (hi - lo)).collect();
    (&(&u * &CMatrix::from_real_diag(&d)) * &u.adjoint()).hermitian_part()
}

/// Lower triangular with diagonal moduli in `[0.5, 2]`.
pub fn lower_triangular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = C64::new(normal(rng), normal(rng));
        }
        let r = 0.5 + 1.5 * rng.random::<f64>();
        let th = rng.random::<f64>() * std::f64::consts::TAU;
        l[(i, i)] = C64::from_polar(r, th);
    }
    l
}

/// Strictly upper triangular, standard normal entries.
pub fn strictly_upper<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if j > i {
            C64::new(normal(rng), normal(rng))
        } else {
            ZERO
        }
    })
}

/// Options for [`jordan_spec`].
#[derive(Debug, Clone)]
pub struct SpecShape {
    pub n: usize,
    pub max_block: usize,
    /// Probability that a block reuses the previous block's modulus.
    pub tie_probability: f64,
    /// Probability that a block is nilpotent.
    pub zero_probability: f64,
    pub real: bool,
    pub max_condition: f64,
}

impl SpecShape {
    pub fn new(n: usize, max_block: usize) -> Self {
        SpecShape {
            n,
            max_block,
            tie_probability: 0.0,
            zero_probability: 0.0,
            real: false,
            max_condition: 50.0,
        }
    }
}

/// Random spec with moduli in `[0.4, 3]`; distinct moduli are kept at least
/// a ratio `1.15` apart so that growth rates are distinguishable.
pub fn jordan_spec<R: Rng + ?Sized>(rng: &mut R, shape: &SpecShape) -> JordanSpec {
    let mut blocks: Vec<JordanBlock> = Vec::new();
    let mut used: Vec<f64> = Vec::new();
    let mut left = shape.n;
    while left > 0 {
        let size = rng.random_range(1..=shape.max_block.min(left));
        left -= size;
        if rng.random::<f64>() < shape.zero_probability {
            blocks.push(JordanBlock::new(ZERO, size));
            continue;
        }
        let r = match used.last() {
            Some(&prev) if rng.random::<f64>() < shape.tie_probability => prev,
            _ => loop {
                let r = 0.4 * (7.5f64).powf(rng.random::<f64>());
                if used.iter().all(|&u| (r / u).ln().abs() > 1.15f64.ln()) {
                    break r;
                }
            },
        };
        used.push(r);
        let mu = if shape.real {
            if rng.random::<bool>() {
                C64::new(r, 0.0)
            } else {
                C64::new(-r, 0.0)
            }
        } else {
            C64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
        };
        blocks.push(JordanBlock::new(mu, size));
    }
    let m = nonsingular(rng, shape.n, shape.max_condition, shape.real);
    JordanSpec::new(m, blocks).expect("well-conditioned M")
}

/// Random element of `SL(n, R)`.
pub fn sl_element<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let a = nonsingular(rng, n, 1e3, true);
    normalize_det(a)
}

/// `V diag(lambda) V^{-1}` in `SL(n, R)` with real eigenvalues of pairwise
/// moduli ratio at least `min_ratio`, returned as a real matrix.
pub fn sl_separated<R: Rng + ?Sized>(rng: &mut R, n: usize, min_ratio: f64) -> CMatrix {
    let v = nonsingular(rng, n, 30.0, true);
    let mut logs: Vec<f64> = (0..n).map(|k| k as f64 * min_ratio.ln() * (1.0 + 0.5 * rng.random::<f64>())).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    for l in logs.iter_mut() {
        *l -= mean;
    }
    let mut lambda: Vec<C64> = logs.iter().map(|l| C64::new(l.exp(), 0.0)).collect();
    // an even number of sign flips keeps det = 1
    let flips = 2 * rng.random_range(0..=n / 2);
    for z in lambda.iter_mut().take(flips) {
        *z = -*z;
    }
    let a = &(&v * &CMatrix::from_diag(&lambda)) * &crate::numlin::inverse(&v).expect("nonsingular");
    normalize_det(a.real_part())
}

fn normalize_det(a: CMatrix) -> CMatrix {
    let n = a.rows();
    let mut a = a;
    let mut d = crate::numlin::det(&a).expect("square").re;
    if d < 0.0 {
        for i in 0..n {
            a[(i, 0)] = -a[(i, 0)];
        }
        d = -d;
    }
    let s = d.powf(-1.0 / n as f64);
    a.scale_real(s)
}

/// Families of the standard convergence suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteFamily {
    Diagonal,
    Defective2,
    Defective3,
    ComplexElliptic,
    SingularMixed,
}

/// One case of the standard suite: `A` given by its spec, outer factors
/// `B` and `C` drawn with condition number at most 10.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub name: String,
    pub family: SuiteFamily,
    pub spec: JordanSpec,
    pub b: CMatrix,
    pub c: CMatrix,
}

/// Twenty cases, four per family, reproducible from `seed`.
pub fn standard_suite(seed: u64) -> Vec<SuiteCase> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(20);
    let families = [
        SuiteFamily::Diagonal,
        SuiteFamily::Defective2,
        SuiteFamily::Defective3,
        SuiteFamily::ComplexElliptic,
        SuiteFamily::SingularMixed,
    ];
    for family in families {
        for k in 0..4 {
            let real = k % 2 == 0;
            let blocks = suite_blocks(&mut r, family, k, real);
            let n: usize = blocks.iter().map(|b| b.size).sum();
            let m = if family == SuiteFamily::Diagonal {
                CMatrix::identity(n)
            } else {
                nonsingular(&mut r, n, 10.0, real)
            };
            let spec = JordanSpec::new(m, blocks).expect("well-conditioned M");
            let b = nonsingular(&mut r, n, 10.0, real);
            let c = nonsingular(&mut r, n, 10.0, real);
            out.push(SuiteCase {
                name: format!("{family:?}-{k}").to_lowercase(),
                family,
                spec,
                b,
                c,
            });
        }
    }
    out
}

fn suite_blocks<R: Rng + ?Sized>(rng: &mut R, family: SuiteFamily, k: usize, real: bool) -> Vec<JordanBlock> {
    let modulus = |rng: &mut R| 0.5 + 2.5 * rng.random::<f64>();
    let value = |rng: &mut R, r: f64| {
        if real {
            C64::new(if rng.random::<bool>() { r } else { -r }, 0.0)
        } else {
            C64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
        }
    };
    match family {
        SuiteFamily::Diagonal => {
            let n = 2 + k % 3;
            let mut rs: Vec<f64> = Vec::new();
            while rs.len() < n {
                let r = modulus(rng);
                if rs.iter().all(|&u| (r / u).ln().abs() > 1.15f64.ln()) {
                    rs.push(r);
                }
            }
            rs.into_iter().map(|r| JordanBlock::new(value(rng, r), 1)).collect()
        }
        SuiteFamily::Defective2 => {
            let r = modulus(rng);
            vec![JordanBlock::new(value(rng, r), 2)]
        }
        SuiteFamily::Defective3 => {
            let r = modulus(rng);
            if k < 2 {
                vec![JordanBlock::new(value(rng, r), 3)]
            } else {
                let s = r * (1.3 + rng.random::<f64>());
                vec![JordanBlock::new(value(rng, r), 2), JordanBlock::new(value(rng, s), 1)]
            }
        }
        SuiteFamily::ComplexElliptic => {
            // a conjugate pair sharing a modulus, plus a unit-modulus rotation part
            let r = modulus(rng).max(1.3);
            let th = 0.3 + 2.5 * rng.random::<f64>();
            let mut blocks = vec![
                JordanBlock::new(C64::from_polar(r, th), 1),
                JordanBlock::new(C64::from_polar(r, -th), 1),
                JordanBlock::new(C64::from_polar(1.0, 1.0 + th), 1),
            ];
            if k >= 2 {
                blocks.push(JordanBlock::new(C64::from_polar(1.0, -1.0 - th), 1));
            }
            blocks
        }
        SuiteFamily::SingularMixed => {
            let r = modulus(rng);
            let mut blocks = vec![JordanBlock::new(value(rng, r), 1 + k % 2), JordanBlock::new(ZERO, 1 + k / 2)];
            if k % 2 == 1 {
                blocks.push(JordanBlock::new(ZERO, 1));
            }
            blocks
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{det, ONE};

    #[test]
    fn seeds_reproduce() {
        let a = complex_matrix(&mut rng(7), 3, 3);
        let b = complex_matrix(&mut rng(7), 3, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut rng(1), 4, false);
        assert!((&u.adjoint() * &u).max_dist(&CMatrix::identity(4)) < 1e-13);
        let o = unitary(&mut rng(1), 4, true);
        assert_eq!(o.max_imag(), 0.0);
    }

    #[test]
    fn sl_elements_have_unit_determinant() {
        let mut r = rng(3);
        for n in 2..5 {
            let g = sl_element(&mut r, n);
            assert!((det(&g).unwrap() - ONE).norm() < 1e-12);
            let h = sl_separated(&mut r, n, 1.5);
            assert!((det(&h).unwrap() - ONE).norm() < 1e-10);
            assert_eq!(h.max_imag(), 0.0);
        }
    }

    #[test]
    fn standard_suite_shape() {
        let s = standard_suite(42);
        assert_eq!(s.len(), 20);
        assert!(s.iter().filter(|c| c.spec.is_singular()).count() == 4);
        let again = standard_suite(42);
        assert!(s.iter().zip(&again).all(|(x, y)| x.b == y.b && x.c == y.c));
    }

    #[test]
    fn spec_shape_respected() {
        let mut r = rng(11);
        let mut shape = SpecShape::new(6, 3);
        shape.zero_probability = 0.2;
        shape.tie_probability = 0.3;
        for _ in 0..20 {
            let s = jordan_spec(&mut r, &shape);
            assert_eq!(s.n(), 6);
            assert!(s.blocks().iter().all(|b| b.size <= 3));
        }
    }
}
