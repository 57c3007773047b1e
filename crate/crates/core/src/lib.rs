//! Asymptotics of `|B A^m C|^{1/m}` for complex matrices.
//!
//! * [`numlin`]: dense complex linear algebra kernels.
//! * [`jordan`]: Jordan-form specs, the complete multiplicative Jordan
//!   decomposition and overflow-safe closed-form powers.
//! * [`asymlimit`]: closed-form limits, projection decompositions, growth
//!   exponents and the graded iteration engine that checks them.
//! * [`liebridge`]: the same limit inside `SL(n, R)` via Cartan, Iwasawa and
//!   the adjoint representation.
//! * [`io`]: the JSON matrix format shared with the command-line tool.

pub mod asymlimit;
pub mod error;
pub mod io;
pub mod jordan;
pub mod liebridge;
pub mod numlin;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use numlin::{CMatrix, C64};
pub use tolerance::Tolerances;
