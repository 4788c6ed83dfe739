use std::cell::RefCell;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::{closed_form, BasisConfig, ExperimentConfig, InitialCondition, ReferenceConfig, ReferenceKind};
use super::io;
use crate::error::{Error, Result};
use crate::models::{mass, split_problem, Hamiltonian, ModelSpec};
use crate::ode::{Dop853, RkConfig};
use crate::propagators::SplitProblem;
use crate::spectral::{Basis, Field};
use crate::stationary::{solve_ground_state, GroundStateProblem};

/// Tolerance of the rk853 reference integration.
pub const REFERENCE_TOL: f64 = 1e-13;

/// A configuration resolved on one grid: operators, initial state and the
/// invariants at `t = 0`.
#[derive(Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub basis_config: BasisConfig,
    pub model: ModelSpec,
    pub basis: Basis,
    pub problem: SplitProblem,
    pub u0: Vec<Complex64>,
    pub mass0: f64,
    hamiltonian: Option<Hamiltonian>,
    pub ham0: f64,
    /// `ω` of a standing-wave initial state.
    omega: Option<f64>,
}

impl Experiment {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        Self::on_basis(config, &config.basis)
    }

    pub fn on_basis(config: &ExperimentConfig, basis_config: &BasisConfig) -> Result<Self> {
        let model = config.resolved_model()?;
        let basis = basis_config.build()?;
        let problem = split_problem(&model, &basis)?;
        let (u0, omega) = initial_state(&config.initial, &basis)?;
        let field = Field::new(basis.clone(), u0.clone())?;
        let mass0 = mass(&field);
        let (hamiltonian, ham0) = if model.kind.is_hamiltonian() {
            let h = Hamiltonian::new(&basis, model.alpha, model.sign)?;
            let h0 = h.eval(&u0)?;
            (Some(h), h0)
        } else {
            (None, f64::NAN)
        };
        Ok(Experiment {
            config: config.clone(),
            basis_config: basis_config.clone(),
            model,
            basis,
            problem,
            u0,
            mass0,
            hamiltonian,
            ham0,
            omega,
        })
    }

    pub fn mass(&self, u: &[Complex64]) -> f64 {
        let rho: Vec<f64> = u.iter().map(|z| z.norm_sqr()).collect();
        self.basis.integrate(&rho)
    }

    pub fn eps_mass(&self, u: &[Complex64]) -> f64 {
        crate::models::relative_invariant_error(self.mass(u), self.mass0).unwrap_or(f64::NAN)
    }

    pub fn eps_ham(&self, u: &[Complex64]) -> f64 {
        match &self.hamiltonian {
            Some(h) => h
                .eval(u)
                .and_then(|v| crate::models::relative_invariant_error(v, self.ham0))
                .unwrap_or(f64::NAN),
            None => f64::NAN,
        }
    }

    /// Closed-form solution at time `t`, if there is one.
    pub fn exact(&self, t: f64) -> Option<Vec<Complex64>> {
        if let Some(omega) = self.omega {
            let phase = Complex64::from_polar(1.0, omega * t);
            return Some(self.u0.iter().map(|z| z * phase).collect());
        }
        if matches!(self.config.initial, InitialCondition::Gaussian { .. }) {
            return None;
        }
        self.basis
            .nodes()
            .iter()
            .map(|&x| closed_form(&self.config.initial, x, t))
            .collect()
    }

    /// Reference states at `times` per the configured reference kind.
    /// `None` entries have no reference.
    pub fn reference(&self, times: &[f64], cache_dir: Option<&Path>) -> Result<Vec<Option<Vec<Complex64>>>> {
        match &self.config.reference {
            ReferenceConfig::Kind(ReferenceKind::None) => Ok(vec![None; times.len()]),
            ReferenceConfig::Kind(ReferenceKind::Exact) => {
                let states: Option<Vec<_>> = times.iter().map(|&t| self.exact(t)).collect();
                match states {
                    Some(s) => Ok(s.into_iter().map(Some).collect()),
                    None => Err(Error::Config("field `reference`: no exact solution available".into())),
                }
            }
            ReferenceConfig::Kind(ReferenceKind::Rk853) => {
                Ok(compute_reference(self, times, cache_dir)?.into_iter().map(Some).collect())
            }
            ReferenceConfig::File { file } => {
                let (_, z) = io::read_snapshot(file)?;
                if z.len() != self.basis.len() {
                    return Err(Error::SizeMismatch {
                        expected: self.basis.len(),
                        got: z.len(),
                    });
                }
                let t_final = self.config.t_final;
                Ok(times
                    .iter()
                    .map(|&t| ((t - t_final).abs() <= 1e-12 * t_final.max(1.0)).then(|| z.clone()))
                    .collect())
            }
        }
    }

    /// Content hash identifying a reference computation.
    pub fn reference_key(&self, times: &[f64]) -> String {
        let descriptor = json!({
            "format": 1,
            "model": self.model,
            "basis": self.basis_config,
            "tolerance": REFERENCE_TOL,
            "times": times.iter().map(|t| t.to_bits()).collect::<Vec<_>>(),
        });
        let mut h = Sha256::new();
        h.update(descriptor.to_string().as_bytes());
        h.update(io::encode_states(std::slice::from_ref(&self.u0)));
        hex::encode(h.finalize())
    }
}

fn initial_state(initial: &InitialCondition, basis: &Basis) -> Result<(Vec<Complex64>, Option<f64>)> {
    match initial {
        InitialCondition::Stationary { alpha, omega } => {
            let problem = GroundStateProblem::new(*alpha, *omega, basis)?;
            let gs = solve_ground_state(&problem, None)?;
            Ok((gs.to_field()?.into_values(), Some(*omega)))
        }
        InitialCondition::File { path } => {
            let (x, z) = io::read_snapshot(path)?;
            if z.len() != basis.len() {
                return Err(Error::Config(format!(
                    "field `initial`: {} has {} points, the grid has {}",
                    path.display(),
                    z.len(),
                    basis.len()
                )));
            }
            let off = x
                .iter()
                .zip(basis.nodes())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if off > 1e-9 {
                return Err(Error::Config(format!(
                    "field `initial`: {} is sampled on different nodes",
                    path.display()
                )));
            }
            Ok((Field::new(basis.clone(), z)?.into_values(), None))
        }
        other => {
            let values = basis
                .nodes()
                .iter()
                .map(|&x| closed_form(other, x, 0.0).expect("closed-form initial condition"))
                .collect();
            Ok((Field::new(basis.clone(), values)?.into_values(), None))
        }
    }
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("reference-{key}.bin"))
}

/// Integrates the unsplit semi-discrete system with rk853 at tolerance
/// 1e-13 and returns the states at `times` (ascending, non-negative).
///
/// With `cache_dir`, results are stored under a content hash and reused.
pub fn compute_reference(exp: &Experiment, times: &[f64], cache_dir: Option<&Path>) -> Result<Vec<Vec<Complex64>>> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("reference times must be ascending and non-negative".into()));
    }
    let key = exp.reference_key(times);
    if let Some(dir) = cache_dir {
        if let Ok(bytes) = std::fs::read(cache_path(dir, &key)) {
            if let Some(states) = io::decode_states(&bytes) {
                if states.len() == times.len() {
                    return Ok(states);
                }
            }
        }
    }

    let mut rk = Dop853::new(exp.u0.len(), RkConfig::with_tolerance(REFERENCE_TOL))?;
    let failure = RefCell::new(None);
    let rhs = |_: f64, y: &[Complex64], dy: &mut [Complex64]| {
        if let Err(e) = exp.problem.rhs(y, dy) {
            dy.fill(Complex64::new(0.0, 0.0));
            failure.borrow_mut().get_or_insert(e);
        }
    };
    let mut y = exp.u0.clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        rk.integrate(rhs, t, target, &mut y)?;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        t = target;
        out.push(y.clone());
    }

    if let Some(dir) = cache_dir {
        io::ensure_dir(dir)?;
        std::fs::write(cache_path(dir, &key), io::encode_states(&out))?;
    }
    Ok(out)
}
