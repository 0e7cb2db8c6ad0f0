//! Finite-geometry toolkit for flock generalized quadrangles of order
//! `(q^2, q)` and their hemisystems.

pub mod error;
pub mod blt;
pub mod extension;
pub mod field;
pub mod graph;
pub mod group;
pub mod incidence;
pub mod knarr;
pub mod linspaces;
pub mod search;
pub mod singer;
pub mod typeone;

pub use error::{Error, Result};
pub use field::{Elem, Field};
