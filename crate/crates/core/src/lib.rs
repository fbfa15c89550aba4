//! Exact Laurent expansions of cluster variables for unpunctured surfaces.
//!
//! The crate computes the expansion of the cluster variable of an arc in
//! the variables of an initial triangulation in three independent ways:
//! a sum over T-paths ([`tpaths`]), a recursion on exchange relations and
//! plain seed mutation ([`oracle`]), and a signed sum over paths through
//! mutant arcs ([`mutant`]).

pub mod golden;
pub mod instances;
pub mod laurent;
pub mod mutant;
pub mod oracle;
pub mod surface;
pub mod tpaths;

pub use laurent::{Exponents, LaurentError, LaurentPoly};
pub use surface::{build_matrix, Arc, Cover, ExtendedMatrix, Pt, SurfaceError, SurfaceSpec, Triangulation};
