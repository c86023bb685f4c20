//! Essential dimension at a prime of normalizers of maximal tori in `PGL_n`:
//! character lattices, Sylow subgroups of symmetric groups, the explicit
//! generically free representations, and exact lower-bound searches.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod edcalc;
pub mod error;
pub mod genfree;
pub mod lattice;
pub mod permgroup;
pub mod properties;

pub use error::{Error, Result};
