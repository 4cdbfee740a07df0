//! Sweeps, high-precision oracle and command-line front end for
//! `meanbound-core`.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod output;
pub mod sampling;
pub mod sweep;

pub use error::Error;
pub use sweep::{run_sweep, SweepConfig, SweepId, VerificationReport};
