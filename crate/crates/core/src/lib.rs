pub mod cli;
pub mod cohomology;
pub mod diagrams;
pub mod error;
pub mod exactalg;
pub mod fincat;
pub mod homalg;
pub mod specseq;

pub use error::{Error, Result};
