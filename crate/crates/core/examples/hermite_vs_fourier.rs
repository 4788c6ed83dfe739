//! The fractional Laplacian of a Gaussian computed on both spectral bases.

use affine_split::models::fractional_laplacian;
use affine_split::spectral::{Basis, Field, HermiteBasis};
use num_complex::Complex64;

fn main() -> affine_split::Result<()> {
    let gauss = |x: f64| Complex64::new((-x * x / 2.0).exp(), 0.0);
    let fourier = Field::from_fn(Basis::fourier(1024, (-40.0, 40.0))?, gauss)?;
    let hermite_basis = HermiteBasis::new(128, 1.0)?;
    let hermite = Field::from_fn(Basis::Hermite(hermite_basis.clone().into()), gauss)?;
    let probes: Vec<(usize, f64)> = fourier
        .basis()
        .nodes()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, x)| x.abs() <= 6.0)
        .collect();
    let points: Vec<f64> = probes.iter().map(|p| p.1).collect();

    for alpha in [2.0, 1.8, 1.5, 1.2] {
        let lf = fractional_laplacian(&fourier, alpha)?;
        let lh = fractional_laplacian(&hermite, alpha)?;
        let on_grid = hermite_basis.evaluate(&hermite_basis.dht_forward(lh.values())?, &points)?;
        let gap = probes
            .iter()
            .zip(&on_grid)
            .map(|((i, _), h)| (lf.values()[*i] - h).norm())
            .fold(0.0, f64::max);
        let at0 = lf.values()[fourier.basis().len() / 2].re;
        println!("alpha {alpha}: (-d2)^(alpha/2) gauss at 0 = {at0:.8}, max gap on |x| <= 6: {gap:.1e}");
    }
    Ok(())
}
