//! A Gaussian relaxing to a dissipative soliton of the fractional cubic-quintic CGLE.

use affine_split::models::{split_problem, ModelSpec};
use affine_split::schemes::{evolve, scheme_by_name, StepCounter};
use affine_split::spectral::{Basis, Field};
use num_complex::Complex64;

fn main() -> affine_split::Result<()> {
    let alpha = std::env::args().nth(1).map_or(Ok(1.8), |a| a.parse()).expect("alpha must be a number");
    let model = ModelSpec::fcgle5(alpha, 0.1, -0.2, -1.0, 1.7, -0.115, -1.0)?;
    let basis = Basis::hermite(300, 1.0)?;
    let problem = split_problem(&model, &basis)?;
    let u0 = Field::from_fn(basis.clone(), |x| Complex64::new(1.2 * (-x * x / 2.0).exp(), 0.0))?;

    println!("alpha = {alpha}");
    let mut observer = |_: usize, t: f64, u: &[Complex64], _: &StepCounter| {
        let peak = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let bar = "#".repeat((peak * 40.0) as usize);
        println!("t {t:>6.1}  |u|max {peak:.6} {bar}");
        Ok(())
    };
    evolve(&scheme_by_name("affine6")?, &problem, 0.025, 60.0, u0.values(), 80, &mut observer)?;
    Ok(())
}
