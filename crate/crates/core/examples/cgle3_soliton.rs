//! Chirped CGLE3 soliton on a Hermite basis: composition schemes need
//! backward diffusion steps, affine schemes do not.

use affine_split::models::{cgle3_soliton, error_inf, split_problem, Cgle3SolitonParams};
use affine_split::schemes::{evolve, scheme_by_name, NoObserver};
use affine_split::spectral::{Basis, Field};

fn main() -> affine_split::Result<()> {
    let p = Cgle3SolitonParams::new(0.25, 1.0, 0.0)?;
    println!(
        "beta {}  d {:.6}  omega {:.6}  epsilon {:.6}  peak {:.6}",
        p.beta,
        p.d(),
        p.omega(),
        p.epsilon(),
        p.amplitude()
    );
    let basis = Basis::hermite(300, 1.0)?;
    let problem = split_problem(&p.model()?, &basis)?;
    let u0 = Field::from_fn(basis.clone(), |x| cgle3_soliton(&p, x, 0.0))?;
    let exact: Vec<_> = basis.nodes().iter().map(|&x| cgle3_soliton(&p, x, 10.0)).collect();

    for dt in [0.4, 0.2, 0.1, 0.05] {
        for name in ["strang", "neri", "yoshida6", "affine4", "affine6"] {
            let out = evolve(&scheme_by_name(name)?, &problem, dt, 10.0, u0.values(), 1, &mut NoObserver)?;
            let status = if out.status.is_completed() {
                format!("err {:.2e}", error_inf(&out.state, &exact)?)
            } else {
                format!("unstable after {} steps", out.steps_taken)
            };
            println!("dt {dt:<5} {name:>9}: {status}");
        }
    }
    Ok(())
}
