//! Model catalog: the NLSE and CGLE families as split problems.

mod invariants;
mod solitons;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use invariants::{
    error_inf, fractional_laplacian, hamiltonian, mass, relative_invariant_error, Hamiltonian,
};
pub use solitons::{cgle3_soliton, nlse3_soliton, Cgle3SolitonParams, NlseSolitonParams};

use crate::error::{invalid, Result};
use crate::propagators::{LinearFlow, LinearSymbol, NonlinearFlow, NonlinearParams, SplitProblem};
use crate::spectral::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nlse3,
    Fnlse3,
    Cgle3,
    Cgle5,
    Fcgle5,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Nlse3 => "nlse3",
            ModelKind::Fnlse3 => "fnlse3",
            ModelKind::Cgle3 => "cgle3",
            ModelKind::Cgle5 => "cgle5",
            ModelKind::Fcgle5 => "fcgle5",
        }
    }

    /// Whether mass and Hamiltonian are conserved.
    pub fn is_hamiltonian(self) -> bool {
        matches!(self, ModelKind::Nlse3 | ModelKind::Fnlse3)
    }
}

/// `i u_t = (½ - iβ)(-∂²)^{α/2} u + iδu + (γ + iε)|u|²u + (-ν + iμ)|u|⁴u`.
///
/// For the NLSE kinds the cubic coefficient equals `sign`; when `gamma` is
/// omitted from JSON it is filled in from `sign`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawModelSpec")]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub mu: f64,
    pub sign: f64,
}

#[derive(Deserialize)]
struct RawModelSpec {
    kind: ModelKind,
    #[serde(default = "two")]
    alpha: f64,
    #[serde(default)]
    beta: f64,
    #[serde(default)]
    delta: f64,
    gamma: Option<f64>,
    #[serde(default)]
    epsilon: f64,
    #[serde(default)]
    nu: f64,
    #[serde(default)]
    mu: f64,
    #[serde(default = "focusing")]
    sign: f64,
}

impl From<RawModelSpec> for ModelSpec {
    fn from(r: RawModelSpec) -> Self {
        let nlse = matches!(r.kind, ModelKind::Nlse3 | ModelKind::Fnlse3);
        ModelSpec {
            kind: r.kind,
            alpha: r.alpha,
            beta: r.beta,
            delta: r.delta,
            gamma: r.gamma.unwrap_or(if nlse { r.sign } else { 0.0 }),
            epsilon: r.epsilon,
            nu: r.nu,
            mu: r.mu,
            sign: r.sign,
        }
    }
}

fn two() -> f64 {
    2.0
}

fn focusing() -> f64 {
    -1.0
}

impl ModelSpec {
    fn base(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            alpha: 2.0,
            beta: 0.0,
            delta: 0.0,
            gamma: 0.0,
            epsilon: 0.0,
            nu: 0.0,
            mu: 0.0,
            sign: -1.0,
        }
    }

    pub fn nlse3(sign: f64) -> Result<Self> {
        let m = ModelSpec {
            gamma: sign,
            sign,
            ..Self::base(ModelKind::Nlse3)
        };
        m.validate()?;
        Ok(m)
    }

    pub fn fnlse3(alpha: f64, sign: f64) -> Result<Self> {
        let m = ModelSpec {
            alpha,
            gamma: sign,
            sign,
            ..Self::base(ModelKind::Fnlse3)
        };
        m.validate()?;
        Ok(m)
    }

    pub fn cgle3(beta: f64, delta: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        let m = ModelSpec {
            beta,
            delta,
            gamma,
            epsilon,
            ..Self::base(ModelKind::Cgle3)
        };
        m.validate()?;
        Ok(m)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn cgle5(beta: f64, delta: f64, gamma: f64, epsilon: f64, nu: f64, mu: f64) -> Result<Self> {
        let m = ModelSpec {
            beta,
            delta,
            gamma,
            epsilon,
            nu,
            mu,
            ..Self::base(ModelKind::Cgle5)
        };
        m.validate()?;
        Ok(m)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn fcgle5(
        alpha: f64,
        beta: f64,
        delta: f64,
        gamma: f64,
        epsilon: f64,
        nu: f64,
        mu: f64,
    ) -> Result<Self> {
        let m = ModelSpec {
            alpha,
            beta,
            delta,
            gamma,
            epsilon,
            nu,
            mu,
            ..Self::base(ModelKind::Fcgle5)
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.alpha,
            self.beta,
            self.delta,
            self.gamma,
            self.epsilon,
            self.nu,
            self.mu,
            self.sign,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("model", "parameters must be finite"));
        }
        if !(self.alpha > 1.0 && self.alpha <= 2.0) {
            return Err(invalid("alpha", format!("Lévy index must lie in (1, 2], got {}", self.alpha)));
        }
        if self.beta < 0.0 {
            return Err(invalid("beta", format!("must be non-negative, got {}", self.beta)));
        }
        let name = self.kind.name();
        let need = |ok: bool, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(invalid("model", format!("{name} requires {what}")))
            }
        };
        match self.kind {
            ModelKind::Nlse3 | ModelKind::Fnlse3 => {
                if self.kind == ModelKind::Nlse3 {
                    need(self.alpha == 2.0, "alpha = 2")?;
                }
                need(self.sign.abs() == 1.0, "sign = ±1")?;
                need(self.gamma == self.sign, "gamma = sign")?;
                need(
                    self.beta == 0.0 && self.delta == 0.0 && self.epsilon == 0.0 && self.nu == 0.0 && self.mu == 0.0,
                    "beta = delta = epsilon = nu = mu = 0",
                )
            }
            ModelKind::Cgle3 => {
                need(self.alpha == 2.0, "alpha = 2")?;
                need(self.nu == 0.0 && self.mu == 0.0, "nu = mu = 0")
            }
            ModelKind::Cgle5 => need(self.alpha == 2.0, "alpha = 2"),
            ModelKind::Fcgle5 => Ok(()),
        }
    }

    pub fn nonlinear_params(&self) -> NonlinearParams {
        NonlinearParams {
            gamma: self.gamma,
            epsilon: self.epsilon,
            nu: self.nu,
            mu: self.mu,
        }
    }
}

/// `𝒜(k) = (½ - iβ)|k|^α + iδ`.
pub fn linear_symbol(model: &ModelSpec) -> Result<LinearSymbol> {
    model.validate()?;
    LinearSymbol::fractional(model.alpha, model.beta, model.delta)
}

pub fn nonlinear_flow(model: &ModelSpec) -> Result<NonlinearFlow> {
    model.validate()?;
    Ok(NonlinearFlow::from_params(model.nonlinear_params()))
}

/// The model discretized on `basis`, split into its linear and nonlinear parts.
pub fn split_problem(model: &ModelSpec, basis: &Basis) -> Result<SplitProblem> {
    let linear = LinearFlow::new(linear_symbol(model)?, basis.clone());
    Ok(SplitProblem::new(linear, nonlinear_flow(model)?))
}

/// `u_t + i(Au + B(u))`, which vanishes on exact solutions.
pub fn pde_residual(problem: &SplitProblem, u: &[Complex64], dudt: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut rhs = vec![Complex64::new(0.0, 0.0); u.len()];
    problem.rhs(u, &mut rhs)?;
    Ok(dudt.iter().zip(&rhs).map(|(d, r)| d - r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symbols() {
        let s = linear_symbol(&ModelSpec::nlse3(-1.0).unwrap()).unwrap();
        assert_eq!(s.eval(2.0), Complex64::new(2.0, 0.0));
        let s = linear_symbol(&ModelSpec::fnlse3(1.5, -1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(s.eval(4.0).re, 4.0, epsilon = 1e-14);
        let m = ModelSpec::fcgle5(1.8, 0.1, -0.2, -1.0, 1.7, -0.115, -1.0).unwrap();
        let s = linear_symbol(&m).unwrap();
        assert_eq!(s.eval(0.0), Complex64::new(0.0, -0.2));
    }

    #[test]
    fn validation() {
        assert!(ModelSpec::nlse3(0.5).is_err());
        assert!(ModelSpec::fnlse3(1.0, -1.0).is_err());
        assert!(ModelSpec::fnlse3(2.5, -1.0).is_err());
        assert!(ModelSpec::cgle3(-0.1, 0.0, -1.0, 0.1).is_err());
        let mut m = ModelSpec::nlse3(-1.0).unwrap();
        m.beta = 0.1;
        assert!(m.validate().is_err());
        let mut m = ModelSpec::cgle3(0.25, 0.0, -1.0, 0.1).unwrap();
        m.mu = 0.3;
        assert!(m.validate().is_err());
        m.kind = ModelKind::Cgle5;
        assert!(m.validate().is_ok());
        m.alpha = 1.5;
        assert!(m.validate().is_err());
        m.kind = ModelKind::Fcgle5;
        assert!(m.validate().is_ok());
    }

    #[test]
    fn nonlinear_flow_selection() {
        let m = ModelSpec::nlse3(-1.0).unwrap();
        assert_eq!(nonlinear_flow(&m).unwrap(), NonlinearFlow::Cubic { gamma: -1.0 });
        let m = ModelSpec::cgle3(0.25, 0.0, -1.0, 0.1).unwrap();
        assert!(matches!(nonlinear_flow(&m).unwrap(), NonlinearFlow::CubicGain { .. }));
        let m = ModelSpec::cgle5(0.1, -0.2, -1.0, 1.7, -0.115, -1.0).unwrap();
        assert!(matches!(nonlinear_flow(&m).unwrap(), NonlinearFlow::CubicQuintic { .. }));
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let m = ModelSpec::fcgle5(1.8, 0.1, -0.2, -1.0, 1.7, -0.115, -1.0).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ModelSpec>(&s).unwrap(), m);
        let m: ModelSpec = serde_json::from_str(r#"{"kind": "nlse3", "gamma": -1.0}"#).unwrap();
        assert_eq!(m, ModelSpec::nlse3(-1.0).unwrap());
        let m: ModelSpec = serde_json::from_str(r#"{"kind": "nlse3", "sign": 1.0}"#).unwrap();
        assert_eq!(m, ModelSpec::nlse3(1.0).unwrap());
        let m: ModelSpec = serde_json::from_str(r#"{"kind": "cgle3", "beta": 0.25}"#).unwrap();
        assert_eq!(m.gamma, 0.0);
    }
}
