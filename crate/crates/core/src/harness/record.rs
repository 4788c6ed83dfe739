use serde::Serialize;

use crate::schemes::RunStatus;

/// Status column text: `completed` or `blowup(<step>)`.
pub fn status_label(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".to_string(),
        RunStatus::BlowUp { step, .. } => format!("blowup({step})"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub time: f64,
    /// NaN without a reference.
    pub err_inf: f64,
    pub eps_mass: f64,
    /// NaN for models without a conserved Hamiltonian.
    pub eps_ham: f64,
    pub evals_a: u64,
    pub evals_b: u64,
    pub sup_norm: f64,
}

/// Time series of one evolution.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub scheme: String,
    pub dt: f64,
    pub t_final: f64,
    pub steps: usize,
    pub samples: Vec<Sample>,
    pub status: String,
    /// Informational only.
    pub wall_clock_s: f64,
}

impl RunRecord {
    pub fn completed(&self) -> bool {
        self.status == "completed"
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scheme: String,
    pub dt: f64,
    pub err_inf: f64,
    pub eps_mass: f64,
    pub eps_ham: f64,
    pub cost: u64,
    pub status: String,
}

impl SweepRow {
    pub fn completed(&self) -> bool {
        self.status == "completed"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisRow {
    pub n: usize,
    pub dt: f64,
    pub err_inf: f64,
    pub status: String,
}
