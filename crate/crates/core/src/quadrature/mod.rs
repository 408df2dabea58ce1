//! Gauss–Legendre rules: plain, iterated over weighted simplices, and
//! piecewise over boxes cut by hyperplane arrangements.

mod arrangement;
mod gauss;
mod simplex;

pub use arrangement::{BoxArrangement, Hyperplane};
pub use gauss::GaussLegendre;
pub use simplex::integrate_weighted_simplex;
