//! Experiment configuration, reference solutions, sweeps and the CLI.

mod cli;
mod config;
mod experiment;
pub mod io;
mod record;
mod run;

pub use cli::{exit_code, run_cli};
pub use config::{
    default_dt_sweep, snap_dt, BasisConfig, ExperimentConfig, InitialCondition, Metric, ObserverConfig,
    ReferenceConfig, ReferenceKind,
};
pub use experiment::{compute_reference, Experiment, REFERENCE_TOL};
pub use record::{status_label, BasisRow, RunRecord, Sample, SweepRow};
pub use run::{parallel_map, run_evolve, sample_steps, slope_fit, sweep_basis, sweep_dt, write_run, RunOutput};
