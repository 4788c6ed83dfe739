//! Periodic Fourier collocation on a truncated interval.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Wavenumbers `k_j = 2πj/|I|` in standard FFT ordering
/// (`j = 0..N/2-1, -N/2..-1`).
pub fn fourier_wavenumbers(n: usize, interval: (f64, f64)) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 modes, got {n}")));
    }
    let length = interval.1 - interval.0;
    if !(length.is_finite() && length > 0.0) {
        return Err(invalid(
            "interval",
            format!("degenerate interval [{}, {}]", interval.0, interval.1),
        ));
    }
    let dk = 2.0 * PI / length;
    let half = n / 2;
    Ok((0..n)
        .map(|i| {
            let j = if i < n - half { i as i64 } else { i as i64 - n as i64 };
            dk * j as f64
        })
        .collect())
}

/// Fourier basis: equispaced nodes with the right endpoint excluded,
/// wavenumbers in FFT ordering and cached FFT plans.
///
/// Transforms use the unitary normalization (`1/√N` both ways).
pub struct FourierBasis {
    n: usize,
    interval: (f64, f64),
    nodes: Vec<f64>,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FourierBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierBasis")
            .field("n", &self.n)
            .field("interval", &self.interval)
            .finish()
    }
}

impl FourierBasis {
    pub fn new(n: usize, interval: (f64, f64)) -> Result<Self> {
        let wavenumbers = fourier_wavenumbers(n, interval)?;
        let dx = (interval.1 - interval.0) / n as f64;
        let nodes = (0..n).map(|j| interval.0 + j as f64 * dx).collect();
        let mut planner = FftPlanner::new();
        Ok(FourierBasis {
            n,
            interval,
            nodes,
            wavenumbers,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Unitary forward DFT of grid values.
    pub fn forward(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(values.len())?;
        let mut buf = values.to_vec();
        self.forward_unnormalized(&mut buf);
        let scale = 1.0 / (self.n as f64).sqrt();
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(buf)
    }

    /// Unitary inverse DFT back to grid values.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(coeffs.len())?;
        let mut buf = coeffs.to_vec();
        self.inverse_unnormalized(&mut buf);
        let scale = 1.0 / (self.n as f64).sqrt();
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(buf)
    }

    /// In-place `Σ u_j e^{-2πijk/N}` without normalization.
    pub(crate) fn forward_unnormalized(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    pub(crate) fn inverse_unnormalized(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Applies the Fourier multiplier `m(k)` to grid values.
    pub fn apply_multiplier<F>(&self, values: &[Complex64], multiplier: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64) -> Complex64,
    {
        self.check_len(values.len())?;
        let mut buf = values.to_vec();
        self.forward_unnormalized(&mut buf);
        let scale = 1.0 / self.n as f64;
        for (c, &k) in buf.iter_mut().zip(&self.wavenumbers) {
            *c *= multiplier(k) * scale;
        }
        self.inverse_unnormalized(&mut buf);
        Ok(buf)
    }

    /// Mask for the 2/3 dealiasing rule: `true` where `|j| ≤ N/3`.
    pub fn two_thirds_mask(&self) -> Vec<bool> {
        let cutoff = self.n as f64 / 3.0;
        (0..self.n)
            .map(|i| {
                let j = if i < self.n - self.n / 2 {
                    i as f64
                } else {
                    i as f64 - self.n as f64
                };
                j.abs() <= cutoff
            })
            .collect()
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

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wavenumbers_small_interval() {
        let k = fourier_wavenumbers(4, (-PI, PI)).unwrap();
        let expected = [0.0, 1.0, -2.0, -1.0];
        for (a, b) in k.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn nyquist_entry() {
        let k = fourier_wavenumbers(8, (0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(k[4], -8.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn spacing_for_benchmark_grid() {
        let k = fourier_wavenumbers(1 << 11, (-50.0, 50.0)).unwrap();
        assert_abs_diff_eq!(k[1] - k[0], 2.0 * PI / 100.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k[0] - k[2047], 2.0 * PI / 100.0, epsilon = 1e-15);
    }

    #[test]
    fn wavenumber_sum_is_nyquist() {
        for &n in &[2usize, 4, 16, 64] {
            let k = fourier_wavenumbers(n, (-3.0, 7.0)).unwrap();
            let sum: f64 = k.iter().sum();
            let expected = -(n as f64 / 2.0) * 2.0 * PI / 10.0;
            assert_abs_diff_eq!(sum, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fourier_wavenumbers(1, (0.0, 1.0)).is_err());
        assert!(fourier_wavenumbers(8, (1.0, 1.0)).is_err());
        assert!(fourier_wavenumbers(8, (2.0, 1.0)).is_err());
    }

    #[test]
    fn constant_has_only_zero_mode() {
        let b = FourierBasis::new(16, (0.0, 1.0)).unwrap();
        let c = b.forward(&vec![Complex64::new(1.0, 0.0); 16]).unwrap();
        assert_abs_diff_eq!(c[0].re, 4.0, epsilon = 1e-14);
        assert!(c[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn plane_wave_single_mode() {
        let b = FourierBasis::new(32, (-PI, PI)).unwrap();
        let u: Vec<_> = b.nodes().iter().map(|&x| Complex64::new(0.0, x).exp()).collect();
        let c = b.forward(&u).unwrap();
        for (i, z) in c.iter().enumerate() {
            if i == 1 {
                assert_abs_diff_eq!(z.norm(), (32f64).sqrt(), epsilon = 1e-12);
            } else {
                assert!(z.norm() < 1e-12, "mode {i}: {z}");
            }
        }
    }

    #[test]
    fn size_mismatch_is_reported() {
        let b = FourierBasis::new(8, (0.0, 1.0)).unwrap();
        assert_eq!(
            b.forward(&[Complex64::new(0.0, 0.0); 4]),
            Err(Error::SizeMismatch { expected: 8, got: 4 })
        );
    }

    #[test]
    fn left_endpoint_included() {
        let b = FourierBasis::new(4, (-2.0, 2.0)).unwrap();
        assert_eq!(b.nodes(), &[-2.0, -1.0, 0.0, 1.0]);
    }
}
