//! Hermite functions, Gauss-Hermite quadrature with modified weights, and the
//! discrete Hermite transform.
//!
//! The orthonormal Hermite functions are
//! `φ_n(x) = H_n(x) e^{-x²/2} / sqrt(2^n n! √π)`. They are evaluated with the
//! normalized three-term recurrence
//! `φ_{n+1} = sqrt(2/(n+1)) x φ_n - sqrt(n/(n+1)) φ_{n-1}`, carrying the
//! Gaussian factor and a power-of-two scale separately so that neither the
//! polynomial part overflows nor the Gaussian underflows prematurely.
//!
//! A basis with scaling `s` uses `φ_nˢ(x) = √s φ_n(sx)`, nodes `x_j/s` and
//! weights `w_j/s`, which keeps it orthonormal on the real line.

use std::f64::consts::{LN_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const RESCALE_EXP: i32 = 600;

/// Writes `φ_0(x), …, φ_{count-1}(x)` into `out`.
pub fn hermite_functions_into(x: f64, out: &mut [f64]) {
    let count = out.len();
    if count == 0 {
        return;
    }
    let big = 2f64.powi(RESCALE_EXP);
    let gauss = -0.5 * x * x;
    let mut scale_exp: i64 = 0;
    let value = |v: f64, e: i64| -> f64 {
        if v == 0.0 {
            return 0.0;
        }
        v * (gauss + e as f64 * LN_2).exp()
    };

    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    out[0] = value(cur, 0);
    for n in 0..count - 1 {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            cur /= big;
            prev /= big;
            scale_exp += RESCALE_EXP as i64;
        }
        out[n + 1] = value(cur, scale_exp);
    }
}

/// All Hermite functions of degree `< count` at `x`.
pub fn hermite_functions(x: f64, count: usize) -> Vec<f64> {
    let mut out = vec![0.0; count];
    hermite_functions_into(x, &mut out);
    out
}

/// Values of the normalized Hermite function of degree `n` at the points `x`.
pub fn hermite_eval(n: usize, x: &[f64]) -> Vec<f64> {
    let mut buf = vec![0.0; n + 1];
    x.iter()
        .map(|&xi| {
            hermite_functions_into(xi, &mut buf);
            buf[n]
        })
        .collect()
}

/// Zeros of `φ_n` and the modified Gauss-Hermite weights
/// `w_j = 1 / (n φ_{n-1}(x_j)²)`, so that `Σ_j w_j f(x_j) ≈ ∫ f dx`
/// exactly whenever `f` is a product `φ_a φ_b` with `a + b ≤ 2n - 1`.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(invalid("n", "quadrature needs at least one node"));
    }
    // Golub-Welsch: eigenvalues of the Jacobi matrix of the recurrence.
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            ((i + 1) as f64 / 2.0).sqrt()
        } else if i == j + 1 {
            ((j + 1) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jacobi, f64::EPSILON, 0)
        .ok_or_else(|| Error::NoConvergence("Jacobi eigenvalue iteration".into()))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Newton polish on φ_n using φ_n' = sqrt(2n) φ_{n-1} - x φ_n.
    let mut buf = vec![0.0; n + 1];
    let scale = (2.0 * n as f64).sqrt();
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            hermite_functions_into(*x, &mut buf);
            let f = buf[n];
            let df = scale * buf[n - 1] - *x * f;
            if df == 0.0 || !df.is_finite() {
                break;
            }
            let dx = f / df;
            *x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        if !x.is_finite() {
            return Err(Error::NoConvergence(format!(
                "Hermite node refinement diverged for n = {n}"
            )));
        }
    }

    for j in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        nodes[j] = -m;
        nodes[n - 1 - j] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let weights = nodes
        .iter()
        .map(|&x| {
            hermite_functions_into(x, &mut buf[..n]);
            let p = buf[n - 1];
            1.0 / (n as f64 * p * p)
        })
        .collect();
    Ok((nodes, weights))
}

/// Nodes and modified weights of the scaled basis: `x_j / s`, `w_j / s`.
pub fn hermite_nodes_weights(n: usize, scaling: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_scaling(scaling)?;
    let (x, w) = gauss_hermite(n)?;
    Ok((
        x.iter().map(|v| v / scaling).collect(),
        w.iter().map(|v| v / scaling).collect(),
    ))
}

fn check_scaling(scaling: f64) -> Result<()> {
    if !(scaling.is_finite() && scaling > 0.0) {
        return Err(invalid("scaling", format!("must be positive, got {scaling}")));
    }
    Ok(())
}

/// Scaled Hermite basis with dense forward/backward transform matrices.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    n: usize,
    scaling: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `dht[n * N + j] = (w_j / s) φˢ_n(x_j / s)`
    dht: Vec<f64>,
    /// `idht[j * N + n] = φˢ_n(x_j / s)`
    idht: Vec<f64>,
}

impl HermiteBasis {
    pub fn new(n: usize, scaling: f64) -> Result<Self> {
        check_scaling(scaling)?;
        let (raw_nodes, raw_weights) = gauss_hermite(n)?;
        let root_s = scaling.sqrt();
        let mut dht = vec![0.0; n * n];
        let mut idht = vec![0.0; n * n];
        let mut buf = vec![0.0; n];
        for (j, (&x, &w)) in raw_nodes.iter().zip(&raw_weights).enumerate() {
            hermite_functions_into(x, &mut buf);
            for (deg, &phi) in buf.iter().enumerate() {
                dht[deg * n + j] = w * phi / root_s;
                idht[j * n + deg] = root_s * phi;
            }
        }
        Ok(HermiteBasis {
            n,
            scaling,
            nodes: raw_nodes.iter().map(|x| x / scaling).collect(),
            weights: raw_weights.iter().map(|w| w / scaling).collect(),
            dht,
            idht,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major forward transform matrix.
    pub fn dht_matrix(&self) -> &[f64] {
        &self.dht
    }

    /// Row-major backward transform matrix.
    pub fn idht_matrix(&self) -> &[f64] {
        &self.idht
    }

    /// `ũ_n = Σ_j w_j u(x_j) φ_n(x_j)` (scaled form).
    pub fn dht_forward(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(values.len())?;
        Ok(real_matvec(&self.dht, self.n, values))
    }

    /// Grid values `u(x_j) = Σ_n ũ_n φ_n(x_j)`.
    pub fn dht_inverse(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(coeffs.len())?;
        Ok(real_matvec(&self.idht, self.n, coeffs))
    }

    /// Evaluates the expansion `Σ_n c_n φˢ_n(x)` at arbitrary points.
    pub fn evaluate(&self, coeffs: &[Complex64], points: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(coeffs.len())?;
        let root_s = self.scaling.sqrt();
        let mut buf = vec![0.0; self.n];
        Ok(points
            .iter()
            .map(|&x| {
                hermite_functions_into(self.scaling * x, &mut buf);
                coeffs
                    .iter()
                    .zip(&buf)
                    .map(|(c, &phi)| c * phi)
                    .sum::<Complex64>()
                    * root_s
            })
            .collect())
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got,
            });
        }
        Ok(())
    }
}

fn real_matvec(m: &[f64], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    m.chunks_exact(n)
        .map(|row| {
            let (mut re, mut im) = (0.0, 0.0);
            for (&a, z) in row.iter().zip(v) {
                re += a * z.re;
                im += a * z.im;
            }
            Complex64::new(re, im)
        })
        .collect()
}
