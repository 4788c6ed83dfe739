use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{lie_trotter_minus, lie_trotter_plus, StepCounter};
use crate::error::{invalid, Error, Result};
use crate::propagators::Splitting;

/// Exact weights of the `s`-stage symmetric affine combination:
/// `Σ γ_j = 1/2` and `Σ γ_j / j^{2k} = 0` for `k = 1..s-1`.
pub fn solve_affine_coefficients(s: usize) -> Result<Vec<BigRational>> {
    if s == 0 {
        return Err(invalid("stages", "need at least one stage"));
    }
    let big = |v: i64| BigRational::from_integer(BigInt::from(v));
    // rows k = 0..s-1, columns j = 1..s, augmented rhs
    let mut m: Vec<Vec<BigRational>> = (0..s)
        .map(|k| {
            let mut row: Vec<BigRational> = (1..=s)
                .map(|j| {
                    let denom = BigInt::from(j as i64).pow(2 * k as u32);
                    BigRational::new(BigInt::one(), denom)
                })
                .collect();
            row.push(if k == 0 {
                BigRational::new(BigInt::one(), BigInt::from(2))
            } else {
                big(0)
            });
            row
        })
        .collect();

    for col in 0..s {
        let pivot = (col..s)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::Singular)?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..s {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=s {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[s].clone()).collect())
}

/// Symmetric affine combination of `s` stages, order `2s`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineScheme {
    name: String,
    gammas: Vec<f64>,
    exact: Vec<BigRational>,
}

impl AffineScheme {
    pub fn new(stages: usize) -> Result<Self> {
        let exact = solve_affine_coefficients(stages)?;
        let gammas = exact
            .iter()
            .map(|g| g.to_f64().ok_or(Error::NonFinite))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineScheme {
            name: format!("affine{}", 2 * stages),
            gammas,
            exact,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.gammas.len()
    }

    pub fn order(&self) -> usize {
        2 * self.stages()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn exact_gammas(&self) -> &[BigRational] {
        &self.exact
    }

    /// `(φ_A, φ_B)` evaluations per step: `s(s+1)` each.
    pub fn evaluations_per_step(&self) -> (u64, u64) {
        let s = self.stages() as u64;
        (s * (s + 1), s * (s + 1))
    }
}

/// One step of `Σ_j γ_j (Φ_j⁺(Δt/j) + Φ_j⁻(Δt/j))`, with `Φ_j^±` the
/// `j`-fold composition of the Lie-Trotter pair. Branches all start from
/// the same input and are summed in ascending `j`, `+` before `-`.
pub fn affine_step<S: Splitting + ?Sized>(
    scheme: &AffineScheme,
    split: &S,
    u: &mut [Complex64],
    dt: f64,
    counter: &mut StepCounter,
) -> Result<()> {
    let mut acc = vec![Complex64::new(0.0, 0.0); u.len()];
    let mut branch = vec![Complex64::new(0.0, 0.0); u.len()];
    for (idx, &gamma) in scheme.gammas.iter().enumerate() {
        let j = idx + 1;
        let h = dt / j as f64;
        for plus in [true, false] {
            branch.copy_from_slice(u);
            for _ in 0..j {
                if plus {
                    lie_trotter_plus(split, &mut branch, h, counter)?;
                } else {
                    lie_trotter_minus(split, &mut branch, h, counter)?;
                }
            }
            for (a, b) in acc.iter_mut().zip(&branch) {
                *a += b * gamma;
            }
        }
    }
    u.copy_from_slice(&acc);
    Ok(())
}
