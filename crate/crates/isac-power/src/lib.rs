//! Power allocation across line-of-sight and scattered paths in a monostatic
//! integrated sensing and communication (ISAC) system.
//!
//! One transmitter serves both functions: the LoS echo carries the target
//! information while NLoS echoes act as clutter at the radar receiver, yet
//! every path carries payload toward the communication user. This crate
//! estimates per-path reflection coefficients, splits the transmit budget to
//! maximize the communication rate under a radar SCNR floor, and evaluates
//! detection probability and rate both analytically and by Monte Carlo.
//!
//! Module map:
//! - [`core`]: complex vectors, Hermitian solves, ULA steering, the rank-1
//!   inverse identity.
//! - [`channel`]: scenario definition, Rician channel draws, SNR and rate.
//! - [`sensing`]: MVDR beamforming, SCNR, MMSE estimation, detection.
//! - [`allocate`]: the closed-form single-NLoS solver, the SCA loop with its
//!   barrier subproblem solver, and the corner baselines.
//! - [`harness`]: the two-epoch pipeline, threshold/budget sweeps, config
//!   files, CSV output and SVG charts.
//!
//! The `examples/` directory has one runnable program per capability; the
//! `isac-power` binary exposes the same flows as subcommands.

pub mod allocate;
pub mod channel;
pub mod core;
mod error;
pub mod harness;
pub mod sensing;

pub use channel::{ChannelRealization, PowerAllocation, Scenario};
pub use error::{ConfigError, Error, Result};
pub use harness::{RunConfig, SolverKind, TrialRecord, TrialStatus};
