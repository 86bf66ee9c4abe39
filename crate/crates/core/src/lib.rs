//! Computational tools for convex curves in real projective space.
//!
//! A closed curve `γ: S¹ → Pⁿ` is stored as a finite trigonometric
//! polynomial in homogeneous coordinates, so jets, dual curves and
//! projections onto osculating hyperplanes are all computed in closed form.
//! On top of that the crate counts tangency roots `♯_p(γ)`, checks convexity,
//! builds the root filtration of `Pⁿ` with its elliptic hulls, counts the
//! components of the discriminant complement and transports points between
//! the stratifications of two convex curves.

pub mod cli;
pub mod convexity;
pub mod curve;
pub mod discriminant;
mod error;
mod linalg;
pub mod projection;
pub mod projective;
pub mod stratification;
pub mod tangency;
mod tol;
pub mod trig;

pub use curve::{build_model, dual_curve, CurveSpec, ModelKind, ParamCurve};
pub use error::{Error, Result};
pub use projective::{intersect, normalize, osculating_subspace, Jet, ProjPoint, Subspace};
pub use tangency::{count_roots, order_of_tangency, tangency_function, RootCount, Tangency};
pub use tol::Tolerances;
