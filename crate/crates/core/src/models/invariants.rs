use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::propagators::{abs_pow, build_a_matrix, LinearSymbol};
use crate::spectral::{Basis, Field};

fn power_symbol(alpha: f64) -> LinearSymbol {
    LinearSymbol::custom(format!("|k|^{alpha}"), true, move |k| Complex64::new(abs_pow(k, alpha), 0.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(invalid("alpha", format!("must lie in (0, 2], got {alpha}")))
    }
}

/// `(-∂²)^{α/2} u`, the Fourier multiplier `|k|^α`.
pub fn fractional_laplacian(field: &Field, alpha: f64) -> Result<Field> {
    check_alpha(alpha)?;
    let values = match field.basis() {
        Basis::Fourier(f) => f.apply_multiplier(field.values(), |k| Complex64::new(abs_pow(k, alpha), 0.0))?,
        Basis::Hermite(h) => {
            let a = build_a_matrix(&power_symbol(alpha), h)?;
            let c = CMatrix::from_vec(h.len(), 1, h.dht_forward(field.values())?);
            h.dht_inverse((&a * c).as_slice())?
        }
    };
    field.with_values(values)
}

/// `∫|u|² dx`
pub fn mass(field: &Field) -> f64 {
    let rho: Vec<f64> = field.values().iter().map(|z| z.norm_sqr()).collect();
    field.basis().integrate(&rho)
}

/// `½∫(|∂^{α/2}u|² + sign·|u|⁴) dx` on a fixed basis.
///
/// On a Hermite basis the kinetic term is the quadratic form of `Â` built
/// for `|k|^α`, assembled once.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    basis: Basis,
    alpha: f64,
    sign: f64,
    form: Option<CMatrix>,
}

impl Hamiltonian {
    pub fn new(basis: &Basis, alpha: f64, sign: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !sign.is_finite() {
            return Err(invalid("sign", "must be finite"));
        }
        let form = match basis {
            Basis::Fourier(_) => None,
            Basis::Hermite(h) => Some(build_a_matrix(&power_symbol(alpha), h)?),
        };
        Ok(Hamiltonian {
            basis: basis.clone(),
            alpha,
            sign,
            form,
        })
    }

    pub fn eval(&self, u: &[Complex64]) -> Result<f64> {
        if u.len() != self.basis.len() {
            return Err(Error::SizeMismatch {
                expected: self.basis.len(),
                got: u.len(),
            });
        }
        let kinetic = match (&self.basis, &self.form) {
            (Basis::Fourier(f), _) => {
                let half = self.alpha / 2.0;
                let d = f.apply_multiplier(u, |k| Complex64::new(abs_pow(k, half), 0.0))?;
                d.iter().map(|z| z.norm_sqr()).sum::<f64>() * f.spacing()
            }
            (Basis::Hermite(h), Some(a)) => {
                let c = CMatrix::from_vec(h.len(), 1, h.dht_forward(u)?);
                (c.adjoint() * a * &c)[(0, 0)].re
            }
            (Basis::Hermite(_), None) => unreachable!("form is built with the basis"),
        };
        let quartic: Vec<f64> = u.iter().map(|z| z.norm_sqr().powi(2)).collect();
        Ok(0.5 * (kinetic + self.sign * self.basis.integrate(&quartic)))
    }
}

pub fn hamiltonian(field: &Field, alpha: f64, sign: f64) -> Result<f64> {
    Hamiltonian::new(field.basis(), alpha, sign)?.eval(field.values())
}

/// `|Q_t/Q_0 - 1|`
pub fn relative_invariant_error(q_t: f64, q_0: f64) -> Result<f64> {
    if q_0 == 0.0 {
        return Err(Error::DivisionByZero("Q_0"));
    }
    Ok((q_t / q_0 - 1.0).abs())
}

/// `max_j |u_j - v_j|`
pub fn error_inf(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::SizeMismatch {
            expected: v.len(),
            got: u.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}
