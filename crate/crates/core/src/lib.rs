//! Equivariant Magnus matrices, transition graphs and finite abelian covers
//! of train-track graph maps, with an exact search for covers whose lifted
//! homology action has an eigenvalue off the unit circle.

pub mod corpus;
pub mod covers;
pub mod cyclotomic;
pub mod error;
pub mod graph;
pub mod group_ring;
pub mod homology;
pub mod hull;
pub mod intmat;
pub mod magnus;
pub mod poly;
pub mod report;
pub mod ring;
pub mod search;
pub mod transition;

pub use error::{Error, Result};
