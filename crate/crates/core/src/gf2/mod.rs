//! Linear algebra over the two-element field.

mod matrix;
mod vector;
mod wedge;

pub use matrix::{GF2Matrix, RowEchelon};
pub use vector::GF2Vector;
pub use wedge::{quotient_coords, wedge_subspace, Quotient, WedgeBasis};
