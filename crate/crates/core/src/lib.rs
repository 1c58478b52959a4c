//! Exact-arithmetic toolkit for translation surfaces.
//!
//! Surfaces are presented either as square-tiled origamis / weighted
//! rectangle complexes or as convex polygons with translation gluings. All
//! geometry is exact over a real quadratic field Q(sqrt(d)); incidence with
//! cone points is decided by exact sign tests, never by epsilon comparisons.

pub mod affine;
pub mod error;
pub mod flow;
pub mod geom;
pub mod illum;
pub mod perm;
pub mod product;
pub mod scalar;
pub mod surface;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{Mat2, Vec2};
pub use perm::Perm;
pub use scalar::{Rational, Scalar};
pub use surface::{Point, RectComplex, Surface};

/// Trace/step budget for leaf walks and separatrix tracing. Overridable via
/// the VEECHLAB_TRACE_BUDGET environment variable.
pub fn trace_budget() -> usize {
    std::env::var("VEECHLAB_TRACE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(200_000)
}
