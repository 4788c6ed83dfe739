//! Collocation grids, transforms and quadrature.

mod fourier;
mod hermite;

use std::sync::Arc;

use num_complex::Complex64;

pub use fourier::{fourier_wavenumbers, FourierBasis};
pub use hermite::{
    gauss_hermite, hermite_eval, hermite_functions, hermite_functions_into,
    hermite_nodes_weights, HermiteBasis,
};

use crate::error::{Error, Result};

/// A shared, immutable discretization.
#[derive(Debug, Clone)]
pub enum Basis {
    Fourier(Arc<FourierBasis>),
    Hermite(Arc<HermiteBasis>),
}

impl Basis {
    pub fn fourier(n: usize, interval: (f64, f64)) -> Result<Self> {
        Ok(Basis::Fourier(Arc::new(FourierBasis::new(n, interval)?)))
    }

    pub fn hermite(n: usize, scaling: f64) -> Result<Self> {
        Ok(Basis::Hermite(Arc::new(HermiteBasis::new(n, scaling)?)))
    }

    pub fn len(&self) -> usize {
        match self {
            Basis::Fourier(b) => b.len(),
            Basis::Hermite(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> &[f64] {
        match self {
            Basis::Fourier(b) => b.nodes(),
            Basis::Hermite(b) => b.nodes(),
        }
    }

    /// `∫ f dx` for grid samples of a (real) integrand.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        match self {
            Basis::Fourier(b) => b.spacing() * samples.iter().sum::<f64>(),
            Basis::Hermite(b) => b.weights().iter().zip(samples).map(|(w, f)| w * f).sum(),
        }
    }

    /// Same underlying object.
    pub fn same_as(&self, other: &Basis) -> bool {
        match (self, other) {
            (Basis::Fourier(a), Basis::Fourier(b)) => Arc::ptr_eq(a, b),
            (Basis::Hermite(a), Basis::Hermite(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Basis::Fourier(_) => "fourier",
            Basis::Hermite(_) => "hermite",
        }
    }
}

/// Complex grid values on the nodes of a basis.
#[derive(Debug, Clone)]
pub struct Field {
    values: Vec<Complex64>,
    basis: Basis,
}

impl Field {
    pub fn new(basis: Basis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::SizeMismatch {
                expected: basis.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Field { values, basis })
    }

    /// Samples `f` at the nodes.
    pub fn from_fn(basis: Basis, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = basis.nodes().iter().map(|&x| f(x)).collect();
        Field::new(basis, values)
    }

    pub fn zeros(basis: Basis) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); basis.len()];
        Field { values, basis }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.is_finite())
    }

    /// Replaces the values, keeping the basis.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Field::new(self.basis.clone(), values)
    }
}
