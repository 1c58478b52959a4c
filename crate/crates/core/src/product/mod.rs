//! Product-space machinery: leaves of the constant-slope foliation of X x X,
//! the torus invariant-subspace classification, Kronecker rotations and the
//! Jacobsthal function.

pub mod leaf;
pub mod kronecker;
pub mod torus;

pub use kronecker::{jacobsthal, kronecker_hit, KroneckerOutcome};
pub use leaf::{build_leaf, cone_order_product, BasePoint, LeafSurface, Slope};
pub use torus::{orbit_covering_radius, torus_orbit_classify, torus_subspace_solutions, varodot_apply, OrbitClass, TorusPoint};

/// Upper bound for the number of connected slope +-1 invariant surfaces:
/// the total order of the given periodic points.
pub fn invariant_surface_bound(orders: &[usize]) -> usize {
    orders.iter().sum()
}
