//! Fixed inputs shared by the benchmarks.

use asympolar::jordan::JordanSpec;
use asympolar::random::{jordan_spec, nonsingular, rng, SpecShape};
use asympolar::CMatrix;

/// A random spec of size `n` with Jordan blocks up to 3 and the outer
/// factors `B`, `C`.
pub fn fixture(n: usize, seed: u64) -> (JordanSpec, CMatrix, CMatrix) {
    let mut r = rng(seed);
    let mut shape = SpecShape::new(n, 3);
    shape.tie_probability = 0.3;
    let spec = jordan_spec(&mut r, &shape);
    let b = nonsingular(&mut r, n, 10.0, false);
    let c = nonsingular(&mut r, n, 10.0, false);
    (spec, b, c)
}
