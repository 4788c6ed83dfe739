//! Error at t = 10 against Δt for every builtin scheme, with fitted orders.

use affine_split::harness::{slope_fit, sweep_dt, Experiment, ExperimentConfig};
use affine_split::schemes::builtin_schemes;

fn main() -> affine_split::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{"basis": {"fourier": {"n": 512, "interval": [-40, 40]}},
            "initial": {"nlse-soliton": {"eta": 1.0, "c": 0.5}},
            "t_final": 10, "dt_sweep": [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625],
            "observers": {"stride": 1000000}}"#,
    )?;
    let exp = Experiment::new(&cfg)?;
    let schemes: Vec<String> = builtin_schemes().iter().map(|s| s.name().to_string()).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rows = sweep_dt(&exp, &schemes, &cfg.resolved_dt_sweep(), workers, None)?;

    for name in &schemes {
        let mine: Vec<_> = rows.iter().filter(|r| &r.scheme == name).collect();
        let errs: Vec<String> = mine.iter().map(|r| format!("{:.1e}", r.err_inf)).collect();
        let (dt, err): (Vec<f64>, Vec<f64>) = mine.iter().map(|r| (r.dt, r.err_inf)).unzip();
        let order = slope_fit(&dt, &err, (1e-9, 1e-2)).map_or("n/a".to_string(), |p| format!("{p:.2}"));
        println!("{name:>12}  order {order:>5}  {}", errs.join(" "));
    }
    Ok(())
}
