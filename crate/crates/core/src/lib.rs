//! Box complexes and Hom complexes of uniform hypergraphs, the equivariant
//! matching between their subdivisions, and checkable collapse certificates.

pub mod boxcx;
pub mod cellcx;
pub mod cli;
pub mod collapse;
pub mod error;
pub mod homcx;
pub mod homology;
pub mod label;
pub mod morse;
pub mod rgraph;

pub use error::{Error, Limits, Result};
pub use label::Label;
pub use rgraph::RGraph;
