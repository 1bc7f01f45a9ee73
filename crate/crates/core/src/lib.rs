pub mod error;
pub mod geometry;
pub mod gf2;
pub mod hypergraph;
pub mod limits;
pub mod lp;
pub mod recovery;
pub mod rm;
pub mod srr;
pub mod verify;

pub use error::{Error, Result};
