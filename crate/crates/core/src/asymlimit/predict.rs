use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::JordanSpec;
use crate::numlin::{lq, qr, singular_values, CMatrix, PsdMatrix};

/// Which polar factor is being iterated: `|X| = (X*X)^{1/2}` or
/// `|X|' = (X X*)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Right,
    Left,
}

/// Closed-form limit of `|B A^m C|^{1/m}` (right) or `|B A^m C|'^{1/m}` (left).
#[derive(Debug, Clone)]
pub struct LimitResult {
    pub limit: PsdMatrix,
    /// Unitary factor: the limit is `Q* D Q` (right) or `Q D Q*` (left).
    pub q: CMatrix,
    pub d: Vec<f64>,
    pub gammas: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub side: Side,
}

impl LimitResult {
    pub fn matrix(&self) -> &CMatrix {
        self.limit.matrix()
    }
}

/// Smallest accepted `s_min / s_max` for the outer factors `B` and `C`.
pub(crate) const MIN_RECIPROCAL_CONDITION: f64 = 1e-13;

pub(crate) fn is_nonsingular(a: &CMatrix) -> Result<bool> {
    if !a.is_square() {
        return Ok(false);
    }
    let s = singular_values(a)?;
    let smin = *s.last().unwrap();
    Ok(smin > MIN_RECIPROCAL_CONDITION * s[0])
}

fn check_outer(spec: &JordanSpec, x: &CMatrix, err: Error) -> Result<()> {
    if x.shape() != (spec.n(), spec.n()) {
        return Err(Error::DimensionMismatch {
            op: "predicted_limit",
            left: (spec.n(), spec.n()),
            right: x.shape(),
        });
    }
    if !is_nonsingular(x)? {
        return Err(err);
    }
    Ok(())
}

/// `Q* D Q` where `M^{-1} C = L Q`. `B` plays no role in the limit.
pub fn predicted_limit_right(spec: &JordanSpec, c: &CMatrix) -> Result<LimitResult> {
    check_outer(spec, c, Error::SingularC)?;
    let g = spec.m_inv() * c;
    let q = lq(&g).map_err(|_| Error::SingularC)?.q;
    let groups = spec.groups();
    let d = spec.moduli();
    Ok(LimitResult {
        limit: PsdMatrix::from_eigen(q.adjoint(), d.clone()),
        q,
        d,
        gammas: groups.gammas,
        multiplicities: groups.multiplicities,
        side: Side::Right,
    })
}

/// `Q D Q*` where `B M = Q R`. `C` plays no role in the limit.
pub fn predicted_limit_left(spec: &JordanSpec, b: &CMatrix) -> Result<LimitResult> {
    check_outer(spec, b, Error::SingularB)?;
    let bm = b * spec.m();
    let q = qr(&bm).map_err(|_| Error::SingularB)?.q;
    let groups = spec.groups();
    let d = spec.moduli();
    Ok(LimitResult {
        limit: PsdMatrix::from_eigen(q.clone(), d.clone()),
        q,
        d,
        gammas: groups.gammas,
        multiplicities: groups.multiplicities,
        side: Side::Left,
    })
}

/// Dispatches on `side`; the factor the limit does not depend on is still
/// checked for nonsingularity since the iteration needs it.
pub fn predicted_limit(spec: &JordanSpec, b: &CMatrix, c: &CMatrix, side: Side) -> Result<LimitResult> {
    match side {
        Side::Right => {
            check_outer(spec, b, Error::SingularB)?;
            predicted_limit_right(spec, c)
        }
        Side::Left => {
            check_outer(spec, c, Error::SingularC)?;
            predicted_limit_left(spec, b)
        }
    }
}
