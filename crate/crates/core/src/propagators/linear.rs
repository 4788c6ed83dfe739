use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::LinearSymbol;
use crate::error::{Error, Result};
use crate::linalg::{expm, matmul, CMatrix};
use crate::spectral::{gauss_hermite, hermite_functions_into, Basis, HermiteBasis};

const CACHE_CAPACITY: usize = 32;

/// Hermite matrix of the multiplier `𝒜`:
/// `Â_{mn} = (-i)^{n-m} Σ_j w_j φ_m(q_j) 𝒜(s q_j) φ_n(q_j)` on `N + 1`
/// unscaled Gauss-Hermite nodes.
pub fn build_a_matrix(symbol: &LinearSymbol, basis: &HermiteBasis) -> Result<CMatrix> {
    let n = basis.len();
    let s = basis.scaling();
    let (q, w) = gauss_hermite(n + 1)?;
    let mut phi = vec![0.0; n];
    let mut table = vec![0.0; (n + 1) * n];
    let mut weighted = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, (&qj, &wj)) in q.iter().zip(&w).enumerate() {
        hermite_functions_into(qj, &mut phi);
        table[j * n..(j + 1) * n].copy_from_slice(&phi);
        weighted[j] = symbol.eval(s * qj) * wj;
    }
    let phase = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let mut a = CMatrix::zeros(n, n);
    for m in 0..n {
        for k in m..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=n {
                acc += weighted[j] * (table[j * n + m] * table[j * n + k]);
            }
            // (-i)^{k-m} above the diagonal, (-i)^{m-k} = i^{k-m} below
            let p = (k - m) % 4;
            a[(m, k)] = acc * phase[p];
            a[(k, m)] = acc * phase[(4 - p) % 4];
        }
    }
    Ok(a)
}

enum Table {
    /// `exp(-i𝒜(k_j)Δt) / N` per mode.
    Diagonal(Vec<Complex64>),
    /// Row-major grid-space operator `IDHT · exp(-iΔtÂ) · DHT`.
    Dense(Vec<Complex64>),
}

/// Exact flow of `i u' = A u` on a basis, with propagators memoized per step.
pub struct LinearFlow {
    symbol: LinearSymbol,
    basis: Basis,
    cache: Mutex<HashMap<u64, Arc<Table>>>,
    a_hat: OnceLock<CMatrix>,
    generator: OnceLock<Vec<Complex64>>,
}

impl std::fmt::Debug for LinearFlow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearFlow")
            .field("symbol", &self.symbol)
            .field("basis", &self.basis.kind())
            .field("n", &self.basis.len())
            .finish()
    }
}

impl LinearFlow {
    pub fn new(symbol: LinearSymbol, basis: Basis) -> Self {
        LinearFlow {
            symbol,
            basis,
            cache: Mutex::new(HashMap::new()),
            a_hat: OnceLock::new(),
            generator: OnceLock::new(),
        }
    }

    pub fn symbol(&self) -> &LinearSymbol {
        &self.symbol
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// `Â` in Hermite coefficient space (Hermite bases only).
    pub fn a_matrix(&self) -> Result<&CMatrix> {
        let Basis::Hermite(h) = &self.basis else {
            return Err(Error::BasisMismatch);
        };
        if let Some(a) = self.a_hat.get() {
            return Ok(a);
        }
        let a = build_a_matrix(&self.symbol, h)?;
        Ok(self.a_hat.get_or_init(|| a))
    }

    fn table(&self, dt: f64) -> Result<Arc<Table>> {
        let key = dt.to_bits();
        if let Some(t) = self.cache.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(self.build_table(dt)?);
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= CACHE_CAPACITY {
            cache.clear();
        }
        cache.insert(key, table.clone());
        Ok(table)
    }

    fn build_table(&self, dt: f64) -> Result<Table> {
        match &self.basis {
            Basis::Fourier(f) => {
                let scale = 1.0 / f.len() as f64;
                Ok(Table::Diagonal(
                    f.wavenumbers()
                        .iter()
                        .map(|&k| (Complex64::new(0.0, -dt) * self.symbol.eval(k)).exp() * scale)
                        .collect(),
                ))
            }
            Basis::Hermite(h) => {
                let a = self.a_matrix()?;
                let e = expm(&a.map(|z| z * Complex64::new(0.0, -dt)))?;
                Ok(Table::Dense(grid_operator(h, &e)))
            }
        }
    }

    /// Applies `exp(-iΔtA)` to grid values in place.
    pub fn step(&self, u: &mut [Complex64], dt: f64) -> Result<()> {
        self.check_len(u.len())?;
        if dt == 0.0 {
            return Ok(());
        }
        match (&*self.table(dt)?, &self.basis) {
            (Table::Diagonal(t), Basis::Fourier(f)) => {
                f.forward_unnormalized(u);
                for (c, m) in u.iter_mut().zip(t) {
                    *c *= m;
                }
                f.inverse_unnormalized(u);
            }
            (Table::Dense(p), _) => {
                let out = dense_matvec(p, u);
                u.copy_from_slice(&out);
            }
            _ => unreachable!("table kind follows the basis"),
        }
        if u.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `A u` on the grid (the generator, not the flow).
    pub fn apply(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(u.len())?;
        match &self.basis {
            Basis::Fourier(f) => f.apply_multiplier(u, |k| self.symbol.eval(k)),
            Basis::Hermite(h) => {
                let g = match self.generator.get() {
                    Some(g) => g,
                    None => {
                        let g = grid_operator(h, self.a_matrix()?);
                        self.generator.get_or_init(|| g)
                    }
                };
                Ok(dense_matvec(g, u))
            }
        }
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.basis.len() {
            return Err(Error::SizeMismatch {
                expected: self.basis.len(),
                got,
            });
        }
        Ok(())
    }
}

/// Row-major `IDHT · M · DHT`.
fn grid_operator(h: &HermiteBasis, m: &CMatrix) -> Vec<Complex64> {
    let n = h.len();
    let lift = |v: &[f64]| CMatrix::from_row_iterator(n, n, v.iter().map(|&x| Complex64::new(x, 0.0)));
    let p = matmul(&matmul(&lift(h.idht_matrix()), m), &lift(h.dht_matrix()));
    p.transpose().as_slice().to_vec()
}

fn dense_matvec(m: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    m.chunks_exact(n)
        .map(|row| {
            let (mut re, mut im) = (0.0, 0.0);
            for (a, b) in row.iter().zip(v) {
                re += a.re * b.re - a.im * b.im;
                im += a.re * b.im + a.im * b.re;
            }
            Complex64::new(re, im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn hermite(n: usize, s: f64) -> Arc<HermiteBasis> {
        Arc::new(HermiteBasis::new(n, s).unwrap())
    }

    #[test]
    fn a_matrix_of_identity_symbol() {
        let sym = LinearSymbol::custom("1", true, |_| Complex64::new(1.0, 0.0));
        let a = build_a_matrix(&sym, &hermite(6, 1.3)).unwrap();
        assert!((a - CMatrix::identity(6, 6)).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn a_matrix_of_k_squared() {
        let sym = LinearSymbol::custom("k^2", true, |k| Complex64::new(k * k, 0.0));
        let a = build_a_matrix(&sym, &hermite(2, 1.0)).unwrap();
        let expected = [[0.5, 0.0], [0.0, 1.5]];
        for m in 0..2 {
            for n in 0..2 {
                assert!((a[(m, n)] - expected[m][n]).norm() < 1e-14, "{m}{n}: {}", a[(m, n)]);
            }
        }
    }

    #[test]
    fn a_matrix_of_k() {
        let sym = LinearSymbol::custom("k", true, |k| Complex64::new(k, 0.0));
        let a = build_a_matrix(&sym, &hermite(2, 1.0)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!(a[(0, 0)].norm() < 1e-14 && a[(1, 1)].norm() < 1e-14);
        assert!((a[(0, 1)] - Complex64::new(0.0, -r)).norm() < 1e-14);
        assert!((a[(1, 0)] - Complex64::new(0.0, r)).norm() < 1e-14);
    }

    #[test]
    fn a_matrix_hermitian_for_real_symbol() {
        let sym = LinearSymbol::fractional(1.4, 0.0, 0.0).unwrap();
        let a = build_a_matrix(&sym, &hermite(40, 1.25)).unwrap();
        let diff = &a - a.adjoint();
        assert!(diff.iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn scaled_a_matrix_of_k_squared() {
        // <φˢ_n | k² | φˢ_n> = s² (n + ½)
        let s = 1.25;
        let sym = LinearSymbol::custom("k^2", true, |k| Complex64::new(k * k, 0.0));
        let a = build_a_matrix(&sym, &hermite(5, s)).unwrap();
        for n in 0..5 {
            assert!((a[(n, n)].re - s * s * (n as f64 + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_plane_wave_phase() {
        let basis = Basis::fourier(16, (-PI, PI)).unwrap();
        let flow = LinearFlow::new(LinearSymbol::schrodinger(), basis.clone());
        let dt = 0.37;
        let mut u: Vec<_> = basis.nodes().iter().map(|&x| Complex64::new(0.0, x).exp()).collect();
        let expected: Vec<_> = u.iter().map(|z| z * Complex64::new(0.0, -dt / 2.0).exp()).collect();
        flow.step(&mut u, dt).unwrap();
        assert!(max_diff(&u, &expected) < 1e-13);
    }

    #[test]
    fn zero_mode_unchanged() {
        let basis = Basis::fourier(16, (0.0, 3.0)).unwrap();
        let flow = LinearFlow::new(LinearSymbol::fractional(1.3, 0.4, 0.0).unwrap(), basis);
        let mut u = vec![Complex64::new(0.7, -0.1); 16];
        let u0 = u.clone();
        flow.step(&mut u, 0.9).unwrap();
        assert!(max_diff(&u, &u0) < 1e-14);
    }

    fn gaussian(nodes: &[f64]) -> Vec<Complex64> {
        nodes
            .iter()
            .map(|&x| Complex64::new((-(x - 0.5).powi(2)).exp(), 0.3 * (-(x * x)).exp()))
            .collect()
    }

    #[test]
    fn unitary_and_dissipative() {
        for basis in [Basis::fourier(128, (-12.0, 12.0)).unwrap(), Basis::hermite(64, 1.25).unwrap()] {
            let mass = |u: &[Complex64]| basis.integrate(&u.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
            let u0 = gaussian(basis.nodes());
            let conservative = LinearFlow::new(LinearSymbol::fractional(1.5, 0.0, 0.0).unwrap(), basis.clone());
            let mut u = u0.clone();
            conservative.step(&mut u, 0.8).unwrap();
            assert!((mass(&u) - mass(&u0)).abs() < 1e-12 * mass(&u0), "{}", basis.kind());

            let damped = LinearFlow::new(LinearSymbol::fractional(1.5, 0.3, 0.0).unwrap(), basis.clone());
            let mut v = u0.clone();
            damped.step(&mut v, 0.8).unwrap();
            assert!(mass(&v) < mass(&u0));
        }
    }

    #[test]
    fn semigroup_both_bases() {
        for basis in [Basis::fourier(64, (-10.0, 10.0)).unwrap(), Basis::hermite(48, 1.0).unwrap()] {
            let flow = LinearFlow::new(LinearSymbol::fractional(1.7, 0.05, -0.1).unwrap(), basis.clone());
            let u0 = gaussian(basis.nodes());
            let mut a = u0.clone();
            flow.step(&mut a, 0.3).unwrap();
            flow.step(&mut a, 0.45).unwrap();
            let mut b = u0;
            flow.step(&mut b, 0.75).unwrap();
            assert!(max_diff(&a, &b) < 1e-10, "{}", basis.kind());
        }
    }

    #[test]
    fn hermite_agrees_with_fourier() {
        let fb = Basis::fourier(1 << 10, (-40.0, 40.0)).unwrap();
        let Basis::Hermite(hb) = Basis::hermite(200, 1.0).unwrap() else { unreachable!() };
        let f0 = |x: f64| Complex64::new((-x * x / 2.0).exp(), 0.0) * Complex64::new(0.0, 0.5 * x).exp();
        let dt = 1.5;

        let ff = LinearFlow::new(LinearSymbol::schrodinger(), fb.clone());
        let mut uf: Vec<_> = fb.nodes().iter().map(|&x| f0(x)).collect();
        ff.step(&mut uf, dt).unwrap();

        let hf = LinearFlow::new(LinearSymbol::schrodinger(), Basis::Hermite(hb.clone()));
        let mut uh: Vec<_> = hb.nodes().iter().map(|&x| f0(x)).collect();
        hf.step(&mut uh, dt).unwrap();
        let coeffs = hb.dht_forward(&uh).unwrap();

        let window: Vec<(f64, Complex64)> = fb
            .nodes()
            .iter()
            .zip(&uf)
            .filter(|(x, _)| x.abs() < 10.0)
            .map(|(&x, &u)| (x, u))
            .collect();
        let xs: Vec<f64> = window.iter().map(|p| p.0).collect();
        let on_fourier_grid = hb.evaluate(&coeffs, &xs).unwrap();
        let err = window
            .iter()
            .zip(&on_fourier_grid)
            .map(|((_, a), b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err:e}");
    }

    #[test]
    fn generator_matches_multiplier() {
        let basis = Basis::hermite(64, 1.0).unwrap();
        let flow = LinearFlow::new(LinearSymbol::schrodinger(), basis.clone());
        // -½ u'' for u = e^{-x²/2}: ½(1 - x²) e^{-x²/2}
        let u: Vec<_> = basis.nodes().iter().map(|&x| Complex64::new((-x * x / 2.0).exp(), 0.0)).collect();
        let au = flow.apply(&u).unwrap();
        for (&x, v) in basis.nodes().iter().zip(&au) {
            let expected = 0.5 * (1.0 - x * x) * (-x * x / 2.0).exp();
            assert!((v.re - expected).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn negative_steps_invert() {
        let basis = Basis::hermite(32, 1.0).unwrap();
        let flow = LinearFlow::new(LinearSymbol::fractional(2.0, 0.25, 0.0).unwrap(), basis.clone());
        let u0 = gaussian(basis.nodes());
        let mut u = u0.clone();
        flow.step(&mut u, 0.05).unwrap();
        flow.step(&mut u, -0.05).unwrap();
        assert!(max_diff(&u, &u0) < 1e-9);
    }

    #[test]
    fn size_checked() {
        let flow = LinearFlow::new(LinearSymbol::schrodinger(), Basis::fourier(8, (0.0, 1.0)).unwrap());
        assert!(flow.step(&mut [Complex64::new(0.0, 0.0); 4], 0.1).is_err());
    }
}
