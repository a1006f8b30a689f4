pub mod cli;
pub mod completion;
pub mod error;
pub mod graph;
pub mod numerics;
pub mod polytope;
pub mod reduction;
pub mod schema;
pub mod signing;

pub use error::{Error, Result};
