//! Exact rational scalars and the linear-algebra primitives built on them.
//!
//! Elimination pivots on the first nonzero entry in row-major order, so every
//! result here is a deterministic function of its inputs.

mod matrix;
mod rat;
mod solve;

pub use matrix::{rank_of, RatMatrix, RowSpace};
pub use rat::{dot, normalize_direction, rat, Rat};
pub use solve::{
    generic_point, nullspace, solve_affine, AffineFunctional, AffineSubspace, GridPoints,
    Solution,
};
