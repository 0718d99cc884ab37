//! Exact Weil–Petersson volumes of genus-zero moduli spaces.
//!
//! Volumes of moduli spaces of hyperbolic spheres with `n` marked points,
//! where each mark is a cusp, a cone point of angle `t·π` or a geodesic
//! boundary of length `s·π`. Decorations are supplied in π-units so every
//! normalized volume `V_n` is an exact rational number, and
//!
//! ```text
//! vol = (2π²)^(n−3) / (n−3)! · V_n
//! ```
//!
//! The crate is organised as:
//!
//! - [`scalars`]: exact rationals, π-graded values and sparse polynomials.
//! - [`profiles`]: mark decorations, admissibility, pair corrections and
//!   subset enumeration with symmetry reduction.
//! - [`engine`]: the boundary-divisor recursions (cusp, boundary, conical,
//!   one-length specializations) with memoization and a labeled oracle.
//! - [`series`]: truncated generating functions and differential-equation
//!   residuals.
//! - [`hyperelliptic`]: volumes of the hyperelliptic locus from all-π cone
//!   profiles.
//! - [`checks`]: profile grids and engine cross-checks.

pub mod checks;
pub mod engine;
pub mod error;
pub mod hyperelliptic;
pub mod profiles;
pub mod scalars;
pub mod series;

pub use engine::{ConeRule, Engine, EngineConfig, MemoTable, PsiMode, Reduction};
pub use error::{Error, Result};
pub use profiles::{CanonicalKey, Decoration, Family, MarkingProfile};
pub use scalars::{PiGraded, PolyQ, Rational};
