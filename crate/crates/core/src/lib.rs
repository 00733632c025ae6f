//! Exact computations behind bounds on transcendental Brauer groups of
//! product abelian surfaces and their Kummer surfaces.
//!
//! * [`modring`]: linear algebra over `Z/nZ` and integer helpers.
//! * [`gl2`]: subgroups of `GL2(Z/nZ)`, commutants, abelian normal forms,
//!   finite subgroups of `GL2(R)` with rational trace and determinant.
//! * [`torsionhom`]: Galois-fixed homomorphisms between torsion modules of
//!   isogenous elliptic curves and the related exact sequences.
//! * [`brauer`]: assembly of the Brauer-group bounds.
//! * [`lattice`]: Gram-matrix lattices (family lattice, Kummer lattice).

pub mod brauer;
pub mod error;
pub mod gl2;
pub mod lattice;
pub mod modring;
pub mod torsionhom;

pub use error::{Error, Result};
