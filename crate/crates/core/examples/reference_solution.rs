//! rk853 reference of the unsplit semi-discrete system, cached on disk.

use std::time::Instant;

use affine_split::harness::{compute_reference, run_evolve, Experiment, ExperimentConfig};
use affine_split::models::error_inf;

fn main() -> affine_split::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{"model": {"kind": "fnlse3", "alpha": 1.5},
            "basis": {"fourier": {"n": 512, "interval": [-40, 40]}},
            "initial": {"gaussian": {"amplitude": 1.0, "width": 1.5}},
            "t_final": 2, "dt": 0.02, "observers": {"stride": 100000}, "reference": "rk853"}"#,
    )?;
    let exp = Experiment::new(&cfg)?;
    let cache = std::env::temp_dir().join("affine-split-example-cache");

    for attempt in ["computed", "cached"] {
        let start = Instant::now();
        compute_reference(&exp, &[cfg.t_final], Some(&cache))?;
        println!("reference {attempt} in {:.2?}", start.elapsed());
    }
    let reference = compute_reference(&exp, &[cfg.t_final], Some(&cache))?.remove(0);
    for scheme in ["strang", "neri", "affine4", "affine6"] {
        let run = run_evolve(&exp, scheme, 0.02, Some(&cache))?;
        println!("{scheme:>8}: err_inf {:.3e}", error_inf(&run.final_state, &reference)?);
    }
    Ok(())
}
