//! Ground states of the focusing fractional NLSE and their far-field decay.

use affine_split::spectral::Basis;
use affine_split::stationary::{solve_ground_state, GroundStateProblem};

fn main() -> affine_split::Result<()> {
    let basis = Basis::fourier(4096, (-150.0, 150.0))?;
    let nodes = basis.nodes().to_vec();
    let probe = [5.0, 10.0, 20.0, 40.0];
    println!("{:>5} {:>10} {:>10} {:>6}  |psi| at x = {probe:?}", "alpha", "psi(0)", "residual", "newton");
    for alpha in [2.0, 1.8, 1.6, 1.4, 1.2] {
        let gs = solve_ground_state(&GroundStateProblem::new(alpha, 1.0, &basis)?, None)?;
        let tail: Vec<String> = probe
            .iter()
            .map(|&x| format!("{:.2e}", gs.psi[nodes.iter().position(|&y| y >= x).unwrap()].abs()))
            .collect();
        println!(
            "{alpha:>5} {:>10.6} {:>10.1e} {:>6}  {}",
            gs.value_at_origin(),
            gs.residual,
            gs.newton_iterations,
            tail.join(" ")
        );
        if gs.continuation.len() > 1 {
            println!("      reached through continuation {:?}", gs.continuation);
        }
    }
    Ok(())
}
