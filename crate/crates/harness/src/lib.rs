//! Std companion to `chaosforge-core`: file formats, reports, sharded
//! Monte Carlo, convergence sweeps and verification suites.

pub mod error;
pub mod formats;
pub mod mc;
pub mod pool;
pub mod report;
pub mod sweep;
pub mod verify;

pub use error::{HarnessError, Result};
pub use formats::VerificationReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
