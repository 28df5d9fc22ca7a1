//! Grids over a Y-site, the absolute Galois monoid of a grid, and the fiber
//! functor comparing sheaves with smooth monoid sets.

mod fiber;
mod grid;
mod monoid;

pub use fiber::*;
pub use grid::*;
pub use monoid::*;
