//! Weyl quantization on coadjoint orbits of nilpotent Lie groups.

pub mod cli;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod liecore;
pub mod modspace;
pub mod orbit;
pub mod repgrid;
pub mod wpcalc;

pub use error::{Error, Result};
