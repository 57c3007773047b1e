//! Limits of `|B A^m C|^{1/m}`: closed forms, the numeric engine that checks
//! them, projection decompositions and growth exponents.

pub mod graded;
pub mod growth;
pub mod iterate;
pub mod lemmas;
pub mod nayak;
pub mod predict;

pub use graded::{graded_root, GradedRoot};
pub use growth::{growth_exponent, invariance_defect, GrowthEstimate};
pub use iterate::{
    default_schedule, direct_root, geometric_schedule, iterate_limit, iterate_root, validate_schedule,
    ConvergenceReport,
};
pub use lemmas::{
    diag_lower_limit, monotone_root_property, perturbed_limit_property, sandwich_property, PerturbationKind,
    PerturbedReport, SandwichReport,
};
pub use nayak::{nayak_projections, NayakProjections};
pub use predict::{predicted_limit, predicted_limit_left, predicted_limit_right, LimitResult, Side};
