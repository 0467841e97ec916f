//! SPQR-trees and sphere-cut decompositions.

pub mod spqr;
pub mod sphere;

pub use spqr::{build_spqr, pertinent_graph, NodeKind, SpqrNode, SpqrTree};
pub use sphere::{build_sphere_cut, validate_sphere_cut, SphereCut};
