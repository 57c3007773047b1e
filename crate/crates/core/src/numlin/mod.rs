//! Dense complex linear algebra: arithmetic, LU, QR/LQ, Hermitian and general
//! eigendecompositions, SVD, PSD powers, the Löwner order and minors.

pub mod general;
pub mod hermitian;
pub mod jacobi;
pub mod lu;
pub mod matrix;
pub mod qr;
pub mod svd;

pub use general::{eig_general, eig_general_with, principal_arg, spectral_order, EigenG};
pub use hermitian::{abs, eigh, loewner_leq, psd_power, EigenH, HermitianView, PsdMatrix};
pub use lu::{arithmetic, det, inverse, minor_det, solve, subsets, ArithKind};
pub use matrix::{unit_phase, vec_dot, vec_norm, CMatrix, C64, ONE, ZERO};
pub use qr::{lq, lq_with, qr, qr_with, LqFactors, QrFactors};
pub use svd::{singular_values, spectral_norm, svd, SvdFactors};
