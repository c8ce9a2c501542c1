//! Truncated buildings of `GL_R(F)`, chain complexes with coefficients, and
//! depth-zero orbit checks.

pub mod chains;
pub mod complex;
pub mod orbit;
pub mod lattice;

pub use chains::{augmentation, boundary, simplicial_checks, Coeff, CoefficientSystem, OrientedChain, SimplicialChecks};
pub use complex::{subspaces, truncated_building, truncated_building_with_limit, ComplexExport, SimplexOrder, TruncatedComplex};
pub use lattice::{Lattice, LatticeSpace};
pub use orbit::{orbit_dimension_check, DepthZeroSpec, OrbitReport};
