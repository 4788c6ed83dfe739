//! Time-splitting integrators for `i u_t = A u + B(u)` in one dimension.
//!
//! Composition schemes (Lie-Trotter, Strang, Ruth, Neri, Yoshida) and
//! symmetric affine combinations of Lie-Trotter steps, on Fourier or
//! Hermite pseudo-spectral grids, for the (fractional) NLSE and CGLE.
//!
//! ```
//! use affine_split::models::{error_inf, nlse3_soliton, split_problem, ModelSpec, NlseSolitonParams};
//! use affine_split::schemes::{evolve, scheme_by_name, NoObserver};
//! use affine_split::spectral::{Basis, Field};
//!
//! let basis = Basis::fourier(256, (-30.0, 30.0))?;
//! let soliton = NlseSolitonParams::new(1.0, 0.5, 0.0, 0.0)?;
//! let u0 = Field::from_fn(basis.clone(), |x| nlse3_soliton(&soliton, x, 0.0))?;
//! let problem = split_problem(&ModelSpec::nlse3(-1.0)?, &basis)?;
//! let out = evolve(&scheme_by_name("affine4")?, &problem, 0.05, 1.0, u0.values(), 1, &mut NoObserver)?;
//! let exact: Vec<_> = basis.nodes().iter().map(|&x| nlse3_soliton(&soliton, x, 1.0)).collect();
//! assert!(error_inf(&out.state, &exact)? < 1e-5);
//! # Ok::<(), affine_split::Error>(())
//! ```

pub mod error;
pub mod harness;
pub mod linalg;
pub mod models;
pub mod ode;
pub mod propagators;
pub mod schemes;
pub mod spectral;
pub mod stationary;

pub use error::{Error, Result};
