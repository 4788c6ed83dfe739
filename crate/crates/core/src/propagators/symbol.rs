use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Result};

type SymbolFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Fourier symbol `𝒜(k)` of the linear operator.
///
/// The built-in family is `𝒜(k) = (½ - iβ)|k|^α + iδ` with `|0|^α = 0`.
#[derive(Clone)]
pub struct LinearSymbol {
    alpha: f64,
    beta: f64,
    delta: f64,
    custom: Option<(String, SymbolFn, bool)>,
}

impl fmt::Debug for LinearSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.custom {
            Some((label, _, _)) => write!(f, "LinearSymbol::Custom({label})"),
            None => f
                .debug_struct("LinearSymbol")
                .field("alpha", &self.alpha)
                .field("beta", &self.beta)
                .field("delta", &self.delta)
                .finish(),
        }
    }
}

impl LinearSymbol {
    pub fn fractional(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 2.0) {
            return Err(invalid("alpha", format!("Lévy index must lie in (0, 2], got {alpha}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(invalid("beta", format!("must be non-negative, got {beta}")));
        }
        if !delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        Ok(LinearSymbol {
            alpha,
            beta,
            delta,
            custom: None,
        })
    }

    /// `½k²`
    pub fn schrodinger() -> Self {
        LinearSymbol {
            alpha: 2.0,
            beta: 0.0,
            delta: 0.0,
            custom: None,
        }
    }

    /// An arbitrary symbol. `real` declares that `Im 𝒜 ≡ 0`.
    pub fn custom<F>(label: impl Into<String>, real: bool, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        LinearSymbol {
            alpha: f64::NAN,
            beta: 0.0,
            delta: 0.0,
            custom: Some((label.into(), Arc::new(f), real)),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_real(&self) -> bool {
        match &self.custom {
            Some((_, _, real)) => *real,
            None => self.beta == 0.0 && self.delta == 0.0,
        }
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        if let Some((_, f, _)) = &self.custom {
            return f(k);
        }
        let ka = abs_pow(k, self.alpha);
        Complex64::new(0.5 * ka, self.delta - self.beta * ka)
    }
}

/// `|k|^α` with `|0|^α = 0`.
pub fn abs_pow(k: f64, alpha: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else if alpha == 2.0 {
        k * k
    } else {
        k.abs().powf(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_values() {
        assert_eq!(LinearSymbol::schrodinger().eval(2.0), Complex64::new(2.0, 0.0));
        let s = LinearSymbol::fractional(1.5, 0.0, 0.0).unwrap();
        assert!((s.eval(4.0) - Complex64::new(4.0, 0.0)).norm() < 1e-14);
        let s = LinearSymbol::fractional(1.8, 0.1, -0.2).unwrap();
        assert_eq!(s.eval(0.0), Complex64::new(0.0, -0.2));
        assert!(!s.is_real());
        let v = s.eval(-3.0);
        let ka = 3f64.powf(1.8);
        assert!((v - Complex64::new(0.5 * ka, -0.2 - 0.1 * ka)).norm() < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LinearSymbol::fractional(2.5, 0.0, 0.0).is_err());
        assert!(LinearSymbol::fractional(0.0, 0.0, 0.0).is_err());
        assert!(LinearSymbol::fractional(1.5, -1.0, 0.0).is_err());
    }
}
