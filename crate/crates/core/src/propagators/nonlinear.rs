use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{Dop853, RkConfig};

/// Coefficients of `B(u) = (γ + iε)|u|²u + (-ν + iμ)|u|⁴u`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NonlinearParams {
    pub gamma: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub mu: f64,
}

impl NonlinearParams {
    pub fn validate(&self) -> Result<()> {
        if [self.gamma, self.epsilon, self.nu, self.mu].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(crate::error::invalid("nonlinearity", "coefficients must be finite"))
        }
    }
}

/// Pointwise flow of `i u' = B(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearFlow {
    Zero,
    /// `i u' = γ|u|²u`, exact phase rotation.
    Cubic { gamma: f64 },
    /// `i u' = (γ + iε)|u|²u`, exact.
    CubicGain { gamma: f64, epsilon: f64 },
    /// Full cubic-quintic term, integrated numerically. When `delta` is set
    /// the linear gain `iδu` is part of this flow.
    CubicQuintic {
        params: NonlinearParams,
        delta: Option<f64>,
    },
}

impl NonlinearFlow {
    /// Picks the exact flow whenever the quintic part vanishes.
    pub fn from_params(params: NonlinearParams) -> Self {
        if params.nu == 0.0 && params.mu == 0.0 {
            if params.epsilon == 0.0 {
                if params.gamma == 0.0 {
                    NonlinearFlow::Zero
                } else {
                    NonlinearFlow::Cubic {
                        gamma: params.gamma,
                    }
                }
            } else {
                NonlinearFlow::CubicGain {
                    gamma: params.gamma,
                    epsilon: params.epsilon,
                }
            }
        } else {
            NonlinearFlow::CubicQuintic {
                params,
                delta: None,
            }
        }
    }

    pub fn step(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        match *self {
            NonlinearFlow::Zero => Ok(()),
            NonlinearFlow::Cubic { gamma } => {
                cubic_phase(u, gamma, dt);
                Ok(())
            }
            NonlinearFlow::CubicGain { gamma, epsilon } => cgle_cubic_step(u, gamma, epsilon, dt),
            NonlinearFlow::CubicQuintic { params, delta } => {
                quintic_step_numeric(u, params, delta, dt)
            }
        }
    }

    /// `B(u)` on the grid.
    pub fn apply(&self, u: &[Complex64], out: &mut [Complex64]) {
        let (c3, c5, lin) = match *self {
            NonlinearFlow::Zero => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0),
            NonlinearFlow::Cubic { gamma } => {
                (Complex64::new(gamma, 0.0), Complex64::new(0.0, 0.0), 0.0)
            }
            NonlinearFlow::CubicGain { gamma, epsilon } => {
                (Complex64::new(gamma, epsilon), Complex64::new(0.0, 0.0), 0.0)
            }
            NonlinearFlow::CubicQuintic { params, delta } => (
                Complex64::new(params.gamma, params.epsilon),
                Complex64::new(-params.nu, params.mu),
                delta.unwrap_or(0.0),
            ),
        };
        for (o, z) in out.iter_mut().zip(u) {
            let rho = z.norm_sqr();
            *o = (c3 * rho + c5 * (rho * rho) + Complex64::new(0.0, lin)) * z;
        }
    }
}

fn cubic_phase(u: &mut [Complex64], gamma: f64, dt: f64) {
    for z in u.iter_mut() {
        let rho = z.norm_sqr();
        *z *= Complex64::from_polar(1.0, -gamma * rho * dt);
    }
}

/// Exact flow of `i u' = sign·|u|²u`: `u ← u exp(-i sign |u|² Δt)`.
/// The focusing equation has `sign = -1`.
pub fn nlse_cubic_step(u: &mut [Complex64], sign: f64, dt: f64) {
    cubic_phase(u, sign, dt);
}

/// Exact flow of `i u' = (γ + iε)|u|²u`:
/// `|u|² ← |u|² / (1 - 2ε|u|²Δt)` with phase `(γ/2ε) ln(1 - 2ε|u|²Δt)`.
///
/// Returns [`Error::BlowUp`] when the step reaches the singularity.
pub fn cgle_cubic_step(u: &mut [Complex64], gamma: f64, epsilon: f64, dt: f64) -> Result<()> {
    if epsilon == 0.0 {
        cubic_phase(u, gamma, dt);
        return Ok(());
    }
    let rho_max = u.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
    if 1.0 - 2.0 * epsilon * rho_max * dt <= 0.0 {
        return Err(Error::BlowUp {
            dt,
            bound: 1.0 / (2.0 * epsilon * rho_max),
        });
    }
    let ratio = gamma / (2.0 * epsilon);
    for z in u.iter_mut() {
        let rho = z.norm_sqr();
        let l = (-2.0 * epsilon * rho * dt).ln_1p();
        *z *= Complex64::from_polar((-0.5 * l).exp(), ratio * l);
    }
    Ok(())
}

/// Integrates `i u' = (γ + iε)|u|²u + (-ν + iμ)|u|⁴u` (plus `iδu` when
/// `delta` is given) independently at every grid point with the adaptive
/// 8(5,3) integrator at tolerance 1e-13.
pub fn quintic_step_numeric(
    u: &mut [Complex64],
    params: NonlinearParams,
    delta: Option<f64>,
    dt: f64,
) -> Result<()> {
    if dt == 0.0 {
        return Ok(());
    }
    let c3 = Complex64::new(params.epsilon, -params.gamma);
    let c5 = Complex64::new(params.mu, params.nu);
    let lin = delta.unwrap_or(0.0);
    let mut ws = Dop853::new(1, RkConfig::default())?;
    let rhs = |_: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let rho = y[0].norm_sqr();
        dy[0] = (c3 * rho + c5 * (rho * rho) + lin) * y[0];
    };
    for z in u.iter_mut() {
        if *z == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut y = [*z];
        ws.integrate(rhs, 0.0, dt, &mut y)?;
        if !y[0].is_finite() {
            return Err(Error::NonFinite);
        }
        *z = y[0];
    }
    Ok(())
}
