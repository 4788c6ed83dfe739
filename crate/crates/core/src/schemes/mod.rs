//! Composition and symmetric affine splitting integrators.

mod affine;
mod composition;
mod evolve;

use num_complex::Complex64;

pub use affine::{affine_step, solve_affine_coefficients, AffineScheme};
pub use composition::{composition_step, CompositionScheme};
pub use evolve::{evolve, step_count, EvolveOutcome, NoObserver, Observer, RunStatus, BLOWUP_THRESHOLD};

use crate::error::{Error, Result};
use crate::propagators::Splitting;

/// Number of partial-flow evaluations performed so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounter {
    pub evals_a: u64,
    pub evals_b: u64,
}

impl StepCounter {
    pub fn reset(&mut self) {
        *self = StepCounter::default();
    }
}

/// `Φ₁⁺(Δt) = φ_B(Δt)∘φ_A(Δt)`
pub fn lie_trotter_plus<S: Splitting + ?Sized>(
    split: &S,
    u: &mut [Complex64],
    dt: f64,
    counter: &mut StepCounter,
) -> Result<()> {
    split.flow_a(u, dt)?;
    counter.evals_a += 1;
    split.flow_b(u, dt)?;
    counter.evals_b += 1;
    Ok(())
}

/// `Φ₁⁻(Δt) = φ_A(Δt)∘φ_B(Δt)`
pub fn lie_trotter_minus<S: Splitting + ?Sized>(
    split: &S,
    u: &mut [Complex64],
    dt: f64,
    counter: &mut StepCounter,
) -> Result<()> {
    split.flow_b(u, dt)?;
    counter.evals_b += 1;
    split.flow_a(u, dt)?;
    counter.evals_a += 1;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Composition(CompositionScheme),
    Affine(AffineScheme),
}

impl Scheme {
    pub fn name(&self) -> &str {
        match self {
            Scheme::Composition(s) => s.name(),
            Scheme::Affine(s) => s.name(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Scheme::Composition(s) => s.order(),
            Scheme::Affine(s) => s.order(),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Scheme::Affine(_))
    }

    pub fn evaluations_per_step(&self) -> (u64, u64) {
        match self {
            Scheme::Composition(s) => s.evaluations_per_step(),
            Scheme::Affine(s) => s.evaluations_per_step(),
        }
    }

    /// Cost in evaluations of the most expensive propagator. For
    /// composition schemes this is the least invoked one; affine schemes
    /// call both equally often.
    pub fn cost(&self, counter: &StepCounter) -> u64 {
        counter.evals_a.min(counter.evals_b)
    }

    pub fn step<S: Splitting + ?Sized>(
        &self,
        split: &S,
        u: &mut [Complex64],
        dt: f64,
        counter: &mut StepCounter,
    ) -> Result<()> {
        match self {
            Scheme::Composition(s) => composition_step(s, split, u, dt, counter),
            Scheme::Affine(s) => affine_step(s, split, u, dt, counter),
        }
    }
}

pub const SCHEME_NAMES: [&str; 8] = [
    "lie-trotter",
    "strang",
    "ruth",
    "neri",
    "yoshida6",
    "affine2",
    "affine4",
    "affine6",
];

/// The eight built-in schemes in catalog order.
pub fn builtin_schemes() -> Vec<Scheme> {
    SCHEME_NAMES
        .iter()
        .map(|n| scheme_by_name(n).expect("catalog names resolve"))
        .collect()
}

pub fn scheme_by_name(name: &str) -> Result<Scheme> {
    Ok(match name {
        "lie-trotter" => Scheme::Composition(CompositionScheme::lie_trotter()),
        "strang" => Scheme::Composition(CompositionScheme::strang()),
        "ruth" => Scheme::Composition(CompositionScheme::ruth()),
        "neri" => Scheme::Composition(CompositionScheme::neri()),
        "yoshida6" => Scheme::Composition(CompositionScheme::yoshida6()),
        "affine2" => Scheme::Affine(AffineScheme::new(1)?),
        "affine4" => Scheme::Affine(AffineScheme::new(2)?),
        "affine6" => Scheme::Affine(AffineScheme::new(3)?),
        other => return Err(Error::UnknownScheme(other.to_string())),
    })
}
