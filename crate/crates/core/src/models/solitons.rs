use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ModelSpec;
use crate::error::{invalid, Result};

/// Travelling sech soliton of the focusing NLSE3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlseSolitonParams {
    pub eta: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub phi0: f64,
}

impl NlseSolitonParams {
    pub fn new(eta: f64, c: f64, x0: f64, phi0: f64) -> Result<Self> {
        let p = NlseSolitonParams { eta, c, x0, phi0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(invalid("eta", format!("must be positive, got {}", self.eta)));
        }
        if ![self.c, self.x0, self.phi0].iter().all(|v| v.is_finite()) {
            return Err(invalid("soliton", "parameters must be finite"));
        }
        Ok(())
    }

    /// `ω = (c² - η²)/2`
    pub fn omega(&self) -> f64 {
        (self.c * self.c - self.eta * self.eta) / 2.0
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let xi = self.eta * (x - self.c * t - self.x0);
        let phase = self.c * x - self.omega() * t + self.phi0;
        Complex64::from_polar(self.eta / xi.cosh(), phase)
    }

    /// `∂_t u` at `(x, t)`.
    pub fn time_derivative(&self, x: f64, t: f64) -> Complex64 {
        let xi = self.eta * (x - self.c * t - self.x0);
        self.eval(x, t) * Complex64::new(self.eta * self.c * xi.tanh(), -self.omega())
    }
}

pub fn nlse3_soliton(params: &NlseSolitonParams, x: f64, t: f64) -> Complex64 {
    params.eval(x, t)
}

/// Chirped stationary soliton of the cubic CGLE with `δ = 0`, `γ = -1`.
///
/// `u = G√F sech(Gx) exp(i(φ₀ + d ln(G√F sech(Gx)))) e^{-iωt}` with
/// `λ = √(1+4β²)`, `d = (λ-1)/2β`, `ω = -dλ²G²/2β` and
/// `F = (2+9β²)λ(λ-1) / (2β²(3λ-1))`. The gain `ε` is fixed by `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cgle3SolitonParams {
    pub beta: f64,
    #[serde(default = "unit")]
    pub g: f64,
    #[serde(default)]
    pub phi0: f64,
}

fn unit() -> f64 {
    1.0
}

impl Cgle3SolitonParams {
    pub fn new(beta: f64, g: f64, phi0: f64) -> Result<Self> {
        let p = Cgle3SolitonParams { beta, g, phi0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(invalid("beta", format!("must be positive, got {}", self.beta)));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(invalid("G", format!("must be positive, got {}", self.g)));
        }
        if !self.phi0.is_finite() {
            return Err(invalid("phi0", "must be finite"));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        (1.0 + 4.0 * self.beta * self.beta).sqrt()
    }

    pub fn d(&self) -> f64 {
        (self.lambda() - 1.0) / (2.0 * self.beta)
    }

    pub fn omega(&self) -> f64 {
        let l = self.lambda();
        -self.d() * l * l * self.g * self.g / (2.0 * self.beta)
    }

    pub fn f(&self) -> f64 {
        let (b, l) = (self.beta, self.lambda());
        (2.0 + 9.0 * b * b) * l * (l - 1.0) / (2.0 * b * b * (3.0 * l - 1.0))
    }

    /// Peak modulus `G√F`.
    pub fn amplitude(&self) -> f64 {
        self.g * self.f().sqrt()
    }

    pub fn gamma(&self) -> f64 {
        -1.0
    }

    /// The nonlinear gain for which the profile is an exact solution.
    pub fn epsilon(&self) -> f64 {
        let (b, d) = (self.beta, self.d());
        let re = (2.0 - d * d) / 2.0 + 3.0 * b * d;
        let im = 1.5 * d - b * (2.0 - d * d);
        -im / re
    }

    pub fn model(&self) -> Result<ModelSpec> {
        ModelSpec::cgle3(self.beta, 0.0, self.gamma(), self.epsilon())
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let modulus = self.amplitude() / (self.g * x).cosh();
        if modulus == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phase = self.phi0 + self.d() * modulus.ln() - self.omega() * t;
        Complex64::from_polar(modulus, phase)
    }

    pub fn time_derivative(&self, x: f64, t: f64) -> Complex64 {
        self.eval(x, t) * Complex64::new(0.0, -self.omega())
    }
}

pub fn cgle3_soliton(params: &Cgle3SolitonParams, x: f64, t: f64) -> Complex64 {
    params.eval(x, t)
}
