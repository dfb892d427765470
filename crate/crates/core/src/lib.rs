//! Exact computations with abstract `SL2(K)`- and `sl2(K)`-modules over small finite fields.

pub mod abelian;
pub mod actions;
pub mod arith;
pub mod error;
pub mod io;
pub mod linearize;
pub mod pbw;
pub mod presentation;
pub mod report;
pub mod suite;
pub mod zoo;

pub use error::{Error, Result};
