//! Mean-field simulator for driven-dissipative exciton-polariton condensates.
//!
//! Four models share one finite-difference grid and one RK4 integrator:
//! coupled photon/exciton fields under coherent drive (with and without
//! spin), a single-field driven Gross-Pitaevskii equation, and a condensate
//! fed by an incoherently pumped reservoir.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(feature = "cli")]
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod init;
pub mod model;
pub mod pump;
pub mod rk4;
pub mod snapshot;

pub use diagnostics::{condensation_onset, density, peak_report, total_number, RunDiagnostics};
pub use error::{Error, Result};
pub use grid::{laplacian, laplacian_1d, laplacian_2d, Boundary, ComplexField, Dim, Grid, RealField};
pub use init::{init_state, InitKind, InitSpec};
pub use model::{
    Cnrp1Params, Cnrp1SpinParams, Cnrp2Params, HinrpParams, KineticSign, ModelParams, ModelTag, PreparedModel,
    SimState, HBAR, M0,
};
pub use pump::{
    incoherent_pump, power_to_field_amplitude, power_to_pump_rate, pump_field, Extent, IncoherentPumpSpec,
    PumpProfile, PumpSpec,
};
pub use rk4::{cfl_ratio, rk4_step, run_simulation, CflPolicy, MemorySink, NullSink, RunConfig, RunSummary, SnapshotSink};
