//! Exact and semi-exact flows of the split subproblems `i u' = A u` and
//! `i u' = B(u)`.

mod linear;
mod nonlinear;
mod symbol;

use num_complex::Complex64;

pub use linear::{build_a_matrix, LinearFlow};
pub use nonlinear::{
    cgle_cubic_step, nlse_cubic_step, quintic_step_numeric, NonlinearFlow, NonlinearParams,
};
pub use symbol::{abs_pow, LinearSymbol};

use crate::error::Result;

/// A pair of partial flows acting in place on a state vector.
pub trait Splitting {
    fn flow_a(&self, u: &mut [Complex64], dt: f64) -> Result<()>;
    fn flow_b(&self, u: &mut [Complex64], dt: f64) -> Result<()>;
}

impl<S: Splitting + ?Sized> Splitting for &S {
    fn flow_a(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        (**self).flow_a(u, dt)
    }

    fn flow_b(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        (**self).flow_b(u, dt)
    }
}

/// Linear part on a basis plus a pointwise nonlinearity.
#[derive(Debug)]
pub struct SplitProblem {
    pub linear: LinearFlow,
    pub nonlinear: NonlinearFlow,
}

impl SplitProblem {
    pub fn new(linear: LinearFlow, nonlinear: NonlinearFlow) -> Self {
        SplitProblem { linear, nonlinear }
    }

    /// Right-hand side `u' = -i (A u + B(u))` of the unsplit system.
    pub fn rhs(&self, u: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let au = self.linear.apply(u)?;
        self.nonlinear.apply(u, out);
        for (o, a) in out.iter_mut().zip(au) {
            let s = *o + a;
            *o = Complex64::new(s.im, -s.re);
        }
        Ok(())
    }
}

impl Splitting for SplitProblem {
    fn flow_a(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        self.linear.step(u, dt)
    }

    fn flow_b(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        self.nonlinear.step(u, dt)
    }
}

/// Two arbitrary closures as a splitting.
pub struct FnSplitting<A, B> {
    pub a: A,
    pub b: B,
}

impl<A, B> Splitting for FnSplitting<A, B>
where
    A: Fn(&mut [Complex64], f64) -> Result<()>,
    B: Fn(&mut [Complex64], f64) -> Result<()>,
{
    fn flow_a(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        (self.a)(u, dt)
    }

    fn flow_b(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        (self.b)(u, dt)
    }
}
