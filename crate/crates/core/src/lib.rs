//! High-precision laboratory for the gamma function near its poles.

pub mod bigreal;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;

pub mod gamma_engine;
pub mod gamma_extractor;
pub mod harmonic;
pub mod numerics;
pub mod pole_limits;

pub use bigreal::BigReal;
pub use error::{LabError, Result};
