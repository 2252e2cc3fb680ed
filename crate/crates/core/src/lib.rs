//! Exhaustive verification of relative notions for functors between finite
//! categories: final, initial and cartesian families, strict epimorphic
//! families, fibrations, pretopological and topological functors, and the
//! Grothendieck construction for poset-valued pseudofunctors.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod families;
pub mod fibered;
pub mod fincat;
pub mod grothendieck;
pub mod lattice;
pub mod mask;
pub mod model;
pub mod report;
pub mod topological;
pub mod verify;

pub use error::{Error, Result};
