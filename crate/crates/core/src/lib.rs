//! Link physics for hybrid (lumped + distributed Raman) amplified S/C/L-band
//! optical links.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the channel plan
//! and fiber model, ingestion of measured amplifier efficiency curves, the
//! coupled Raman power-evolution solver, the GN-style quality model, the
//! amplifier electrical power ledger and a seeded particle swarm optimizer
//! for backward Raman pumps. File formats, configuration and the command
//! line live in the `hybrid-link` crate.

#![no_std]
// NaN must fail validation, so `!(x > 0.0)` is intentional.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod interp;
pub mod ledger;
pub mod link;
pub mod measurement;
pub mod pipeline;
pub mod pso;
pub mod quality;
pub mod raman;
pub mod units;

pub use error::{Error, Result};
pub use ledger::{EfficiencyPoint, PowerLedger, RamanDraw};
pub use link::{Band, BandLabel, BandPlan, Channel, ChannelGrid, FiberSpec};
pub use measurement::{EfficiencyCurve, PumpDrawCurve};
pub use pipeline::{LinkEvaluation, LinkModel, LinkScenario, LumpedAmplifier, PreparedLink, Warning};
pub use pso::{SwarmConfig, SwarmResult};
pub use quality::{AmplifierSpec, QualityReport};
pub use raman::{PowerProfile, RamanPump, RamanPumpSet, SolverConfig};
