//! Moving NLSE soliton on a Fourier grid: error and invariants over time.

use affine_split::models::{
    error_inf, mass, nlse3_soliton, split_problem, Hamiltonian, ModelSpec, NlseSolitonParams,
};
use affine_split::schemes::{evolve, scheme_by_name, StepCounter};
use affine_split::spectral::{Basis, Field};
use num_complex::Complex64;

fn main() -> affine_split::Result<()> {
    let basis = Basis::fourier(2048, (-50.0, 50.0))?;
    let soliton = NlseSolitonParams::new(1.0, 0.5, 0.0, 0.0)?;
    let u0 = Field::from_fn(basis.clone(), |x| nlse3_soliton(&soliton, x, 0.0))?;
    let problem = split_problem(&ModelSpec::nlse3(-1.0)?, &basis)?;
    let h = Hamiltonian::new(&basis, 2.0, -1.0)?;
    let (m0, h0) = (mass(&u0), h.eval(u0.values())?);
    println!("mass {m0:.12}  hamiltonian {h0:.12}");

    let scheme = scheme_by_name("affine6")?;
    println!("{:>6} {:>12} {:>12} {:>12}", "t", "err_inf", "eps_mass", "eps_ham");
    let mut observer = |_: usize, t: f64, u: &[Complex64], _: &StepCounter| {
        let exact: Vec<_> = basis.nodes().iter().map(|&x| nlse3_soliton(&soliton, x, t)).collect();
        let field = Field::new(basis.clone(), u.to_vec())?;
        let em = ((mass(&field) - m0) / m0).abs();
        let eh = ((h.eval(u)? - h0) / h0).abs();
        println!("{t:>6.2} {:>12.3e} {em:>12.3e} {eh:>12.3e}", error_inf(u, &exact)?);
        Ok(())
    };
    let out = evolve(&scheme, &problem, 0.025, 10.0, u0.values(), 80, &mut observer)?;
    println!("{} steps, {} evaluations of each flow", out.steps_taken, out.counter.evals_a);
    Ok(())
}
