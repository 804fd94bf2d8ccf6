//! Bound quiver algebras over the rationals or a prime field, with tools for
//! finding sequential walks, performing standard reductions and computing
//! homological dimensions of finite-dimensional modules.

pub mod algebra;
pub mod linalg;
pub mod quiver;
pub mod scalar;
pub mod detector;
pub mod reduction;
pub mod homology;
pub mod format;
