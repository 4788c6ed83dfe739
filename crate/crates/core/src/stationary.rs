//! Real ground states of the focusing fNLSE3,
//! `½(-∂²)^{α/2}ψ + ωψ - ψ³ = 0`, by Jacobian-free Newton-Krylov.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::propagators::abs_pow;
use crate::spectral::{Basis, Field, FourierBasis};

const RESTART: usize = 30;
const INNER_TOL: f64 = 1e-3;
const MAX_RESTARTS: usize = 20;

#[derive(Debug, Clone)]
pub struct GroundStateProblem {
    pub alpha: f64,
    pub omega: f64,
    pub tolerance: f64,
    pub max_newton: usize,
    basis: Arc<FourierBasis>,
}

impl GroundStateProblem {
    pub fn new(alpha: f64, omega: f64, basis: &Basis) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 1.0 && alpha <= 2.0) {
            return Err(invalid("alpha", format!("Lévy index must lie in (1, 2], got {alpha}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be positive, got {omega}")));
        }
        let Basis::Fourier(f) = basis else {
            return Err(Error::BasisMismatch);
        };
        Ok(GroundStateProblem {
            alpha,
            omega,
            tolerance: 1e-12,
            max_newton: 40,
            basis: f.clone(),
        })
    }

    /// `N = 2¹³` on `[-150, 150]`.
    pub fn default_basis() -> Basis {
        Basis::fourier(1 << 13, (-150.0, 150.0)).expect("valid default grid")
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn basis(&self) -> Basis {
        Basis::Fourier(self.basis.clone())
    }

    fn at_alpha(&self, alpha: f64) -> Self {
        GroundStateProblem {
            alpha,
            ..self.clone()
        }
    }

    /// `η sech(ηx)` with `η = √(2ω)`, exact for `α = 2`.
    pub fn initial_guess(&self) -> Vec<f64> {
        let eta = (2.0 * self.omega).sqrt();
        self.basis.nodes().iter().map(|&x| eta / (eta * x).cosh()).collect()
    }

    fn fractional_laplacian(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let z: Vec<Complex64> = psi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let alpha = self.alpha;
        let out = self.basis.apply_multiplier(&z, |k| Complex64::new(abs_pow(k, alpha), 0.0))?;
        Ok(out.into_iter().map(|z| z.re).collect())
    }

    /// `v ↦ (½|k|^α + ω)⁻¹ v`
    fn precondition(&self, v: &[f64]) -> Result<Vec<f64>> {
        let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let (alpha, omega) = (self.alpha, self.omega);
        let out = self
            .basis
            .apply_multiplier(&z, |k| Complex64::new(1.0 / (0.5 * abs_pow(k, alpha) + omega), 0.0))?;
        Ok(out.into_iter().map(|z| z.re).collect())
    }
}

/// `½(-∂²)^{α/2}ψ + ωψ - ψ³` on the grid.
pub fn ground_state_residual(psi: &[f64], problem: &GroundStateProblem) -> Result<Vec<f64>> {
    if psi.len() != problem.basis.len() {
        return Err(Error::SizeMismatch {
            expected: problem.basis.len(),
            got: psi.len(),
        });
    }
    let lap = problem.fractional_laplacian(psi)?;
    Ok(lap
        .iter()
        .zip(psi)
        .map(|(l, p)| 0.5 * l + problem.omega * p - p * p * p)
        .collect())
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub alpha: f64,
    pub omega: f64,
    pub psi: Vec<f64>,
    /// Max-norm residual.
    pub residual: f64,
    pub newton_iterations: usize,
    /// Lévy indices visited by continuation (empty for a direct solve).
    pub continuation: Vec<f64>,
    basis: Basis,
}

impl GroundState {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn to_field(&self) -> Result<Field> {
        Field::new(self.basis.clone(), self.psi.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// `|ψ|` at the interval ends.
    pub fn boundary_value(&self) -> f64 {
        let n = self.psi.len();
        self.psi[0].abs().max(self.psi[n - 1].abs())
    }

    /// Whether the interval is wide enough: boundary `|ψ| < 10³·tolerance`.
    pub fn boundary_ok(&self, tolerance: f64) -> bool {
        self.boundary_value() < 1e3 * tolerance
    }

    pub fn value_at_origin(&self) -> f64 {
        self.psi[self.psi.len() / 2]
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Averages `ψ(x)` and `ψ(-x)`; node `j` mirrors `N - j` on a periodic grid.
fn symmetrize(psi: &mut [f64]) {
    let n = psi.len();
    for j in 1..n / 2 {
        let m = 0.5 * (psi[j] + psi[n - j]);
        psi[j] = m;
        psi[n - j] = m;
    }
}

/// Restarted GMRES with right preconditioning for `A x = b`, `x₀ = 0`.
fn gmres<A, M>(apply: A, precondition: M, b: &[f64], rel_tol: f64) -> Result<Vec<f64>>
where
    A: Fn(&[f64]) -> Result<Vec<f64>>,
    M: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok(x);
    }
    let target = rel_tol * b_norm;
    for _ in 0..MAX_RESTARTS {
        let ax = apply(&precondition(&x)?)?;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm2(&r);
        if beta <= target {
            break;
        }
        let mut v = vec![r.iter().map(|x| x / beta).collect::<Vec<_>>()];
        let mut h = vec![vec![0.0; RESTART]; RESTART + 1];
        let (mut cs, mut sn) = (vec![0.0; RESTART], vec![0.0; RESTART]);
        let mut g = vec![0.0; RESTART + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..RESTART {
            let mut w = apply(&precondition(&v[k])?)?;
            for i in 0..=k {
                h[i][k] = dot(&w, &v[i]);
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= h[i][k] * vj;
                }
            }
            let wn = norm2(&w);
            h[k + 1][k] = wn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k_used = k + 1;
            if g[k + 1].abs() <= target || wn == 0.0 {
                break;
            }
            v.push(w.into_iter().map(|x| x / wn).collect());
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let s: f64 = (i + 1..k_used).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (i, yi) in y.iter().enumerate() {
            for (xj, vj) in x.iter_mut().zip(&v[i]) {
                *xj += yi * vj;
            }
        }
        if g[k_used].abs() <= target {
            break;
        }
    }
    precondition(&x)
}

fn newton(problem: &GroundStateProblem, mut psi: Vec<f64>) -> std::result::Result<(Vec<f64>, f64, usize), f64> {
    let fail = |best: f64| Err(best);
    let Ok(mut f) = ground_state_residual(&psi, problem) else {
        return fail(f64::INFINITY);
    };
    let mut res = max_norm(&f);
    let mut best = res;
    let mut stalled = 0;
    for it in 0..problem.max_newton {
        if res <= problem.tolerance {
            return Ok((psi, res, it));
        }
        let scale = f64::EPSILON.sqrt() * (1.0 + norm2(&psi));
        let jv = |v: &[f64]| -> Result<Vec<f64>> {
            let vn = norm2(v);
            if vn == 0.0 {
                return Ok(vec![0.0; v.len()]);
            }
            let h = scale / vn;
            let shifted: Vec<f64> = psi.iter().zip(v).map(|(p, v)| p + h * v).collect();
            let fs = ground_state_residual(&shifted, problem)?;
            Ok(fs.iter().zip(&f).map(|(a, b)| (a - b) / h).collect())
        };
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let Ok(delta) = gmres(jv, |v| problem.precondition(v), &rhs, INNER_TOL) else {
            return fail(best);
        };
        let f_norm = norm2(&f);
        let mut lambda = 1.0;
        loop {
            let mut trial: Vec<f64> = psi.iter().zip(&delta).map(|(p, d)| p + lambda * d).collect();
            symmetrize(&mut trial);
            let Ok(ft) = ground_state_residual(&trial, problem) else {
                return fail(best);
            };
            let accept = norm2(&ft) < (1.0 - 1e-4 * lambda) * f_norm || lambda < 1.0 / 32.0;
            if accept {
                psi = trial;
                f = ft;
                break;
            }
            lambda *= 0.5;
        }
        res = max_norm(&f);
        if !res.is_finite() || res > 1e6 {
            return fail(best);
        }
        if res < 0.9 * best {
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 6 {
                return fail(best.min(res));
            }
        }
        best = best.min(res);
    }
    if res <= problem.tolerance {
        Ok((psi, res, problem.max_newton))
    } else {
        fail(best)
    }
}

fn finish(problem: &GroundStateProblem, mut psi: Vec<f64>, residual: f64, iters: usize, path: Vec<f64>) -> GroundState {
    let n = psi.len();
    if psi[n / 2] < 0.0 {
        psi.iter_mut().for_each(|p| *p = -*p);
    }
    GroundState {
        alpha: problem.alpha,
        omega: problem.omega,
        psi,
        residual,
        newton_iterations: iters,
        continuation: path,
        basis: problem.basis(),
    }
}

/// Solves for the even, positive ground state.
///
/// Newton steps backtrack on the residual norm when the full step does
/// not reduce it. Starts from `initial_guess` or `η sech(ηx)`. If that fails and `α < 2`,
/// continues in `α` from 2 downward in steps of 0.1.
pub fn solve_ground_state(problem: &GroundStateProblem, initial_guess: Option<&[f64]>) -> Result<GroundState> {
    let guess = match initial_guess {
        Some(g) if g.len() != problem.basis.len() => {
            return Err(Error::SizeMismatch {
                expected: problem.basis.len(),
                got: g.len(),
            })
        }
        Some(g) => g.to_vec(),
        None => problem.initial_guess(),
    };
    let direct_best = match newton(problem, guess) {
        Ok((psi, r, it)) => return Ok(finish(problem, psi, r, it, Vec::new())),
        Err(best) => best,
    };
    if problem.alpha >= 2.0 {
        return Err(Error::NoConvergence(format!(
            "Newton stalled at residual {direct_best:e} (tolerance {:e})",
            problem.tolerance
        )));
    }

    let mut path = Vec::new();
    let mut a = 2.0;
    while a - 0.1 > problem.alpha + 1e-12 {
        a -= 0.1;
        path.push((a * 10.0).round() / 10.0);
    }
    path.push(problem.alpha);
    let mut psi = problem.initial_guess();
    let mut total = 0;
    for (i, &alpha) in path.iter().enumerate() {
        let step = problem.at_alpha(alpha);
        match newton(&step, psi) {
            Ok((p, r, it)) => {
                total += it;
                psi = p;
                if i + 1 == path.len() {
                    return Ok(finish(problem, psi, r, total, path));
                }
            }
            Err(best) => {
                return Err(Error::NoConvergence(format!(
                    "continuation failed at alpha = {alpha}: best residual {:e} (direct solve reached {direct_best:e})",
                    best
                )))
            }
        }
    }
    unreachable!("continuation path ends at the target alpha")
}
