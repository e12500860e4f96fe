//! Tropical cohomology over GF(2), mod-2 divisors and Betti numbers of real
//! Calabi-Yau patchworks built from reflexive polytopes.

pub mod betti;
pub mod builtin;
pub mod complex;
pub mod divisor;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod polytope;
pub mod triangulation;

pub use betti::{betti, BettiOptions, BettiReport, Connectedness};
pub use complex::{CohomologyTable, TropicalComplex};
pub use divisor::{DivisorF2, DivisorLab};
pub use error::{Error, Result};
pub use gf2::{GF2Matrix, GF2Vector, WedgeBasis};
pub use polytope::{AffineF2, Face, Facet, LatticePolytope};
pub use triangulation::{CentralTriangulation, Strategy};
