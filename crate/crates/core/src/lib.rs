//! Exact p-adic measures, Magnus-embedded free-group words and a symbolic
//! verifier for the octagonal relation at low levels.
//!
//! Everything is exact rational arithmetic. Congruences mod p^e are checked
//! on exact values, and every truncated integral carries the exponent up to
//! which it is trustworthy.

pub mod classical;
pub mod error;
pub mod exec;
pub mod magnus;
pub mod measure;
pub mod octagon;
pub mod padic;
pub mod report;
pub mod ring;
pub mod suites;
pub mod symmetry;

pub use error::{Error, Result};
pub use padic::{PadicNum, PrimeContext};
