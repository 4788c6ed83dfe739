use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::config::{BasisConfig, ExperimentConfig, InitialCondition};
use super::experiment::Experiment;
use super::io;
use super::run::{run_evolve, slope_fit, sweep_basis, sweep_dt, write_run};
use crate::error::{Error, Result};
use crate::schemes::{builtin_schemes, scheme_by_name};
use crate::stationary::{solve_ground_state, GroundStateProblem};

#[derive(Debug, Parser)]
#[command(name = "affine-split", version, about = "Splitting integrators for 1D nonlinear Schrödinger and Ginzburg-Landau equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recompute the reference instead of reading the cache.
    #[arg(long)]
    no_cache: bool,
    /// Scheme override.
    #[arg(long)]
    scheme: Option<String>,
    /// Time step override.
    #[arg(long)]
    dt: Option<f64>,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one configuration and write run.csv, meta.json and snapshots.
    Evolve(Common),
    /// Error, invariants and cost at t_final over a Δt sweep.
    SweepDt(Common),
    /// Error at t_final over a sweep of basis sizes.
    SweepN(Common),
    /// Ground state of the focusing fNLSE3.
    Stationary(StationaryArgs),
    /// Compute and cache the rk853 reference at t_final.
    Reference(Common),
    /// Print the builtin scheme names.
    ListSchemes,
}

#[derive(Debug, Args)]
struct StationaryArgs {
    /// Configuration with a Fourier basis and a `stationary` initial condition.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Grid size (default 8192).
    #[arg(long)]
    n: Option<usize>,
    /// Half-width L of the interval [-L, L] (default 150).
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status for an error: 2 for configuration problems, 3 for numerical
/// failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidParameter { .. }
        | Error::UnknownScheme(_)
        | Error::NonIntegerSteps { .. }
        | Error::SizeMismatch { .. }
        | Error::BasisMismatch => 2,
        Error::NoConvergence(_)
        | Error::BlowUp { .. }
        | Error::NonFinite
        | Error::Ode(_)
        | Error::ExpmOverflow(_)
        | Error::Singular
        | Error::InsufficientPoints { .. }
        | Error::DivisionByZero(_) => 3,
        Error::Io(_) => 1,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load(common: &Common) -> Result<(ExperimentConfig, PathBuf, Option<PathBuf>)> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(s) = &common.scheme {
        scheme_by_name(s).map_err(|e| Error::Config(format!("--scheme: {e}")))?;
        cfg.scheme = s.clone();
    }
    if let Some(dt) = common.dt {
        cfg.dt = Some(dt);
    }
    cfg.validate()?;
    let out = common.out.clone().unwrap_or_else(|| cfg.output.clone());
    let cache = (!common.no_cache).then(|| out.join("cache"));
    Ok((cfg, out, cache))
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::ListSchemes => {
            for s in builtin_schemes() {
                println!("{}", s.name());
            }
            Ok(0)
        }
        Command::Evolve(c) => evolve_cmd(&c),
        Command::SweepDt(c) => sweep_dt_cmd(&c),
        Command::SweepN(c) => sweep_n_cmd(&c),
        Command::Reference(c) => reference_cmd(&c),
        Command::Stationary(a) => stationary_cmd(&a),
    }
}

fn evolve_cmd(c: &Common) -> Result<i32> {
    let (cfg, out, cache) = load(c)?;
    let dt = cfg.resolved_dt()?;
    let exp = Experiment::new(&cfg)?;
    let run = run_evolve(&exp, &cfg.scheme, dt, cache.as_deref())?;
    write_run(&out, &exp, &run)?;
    let last = run.record.last().expect("at least one sample");
    println!(
        "{} dt={} t={} status={} err_inf={:e} eps_mass={:e}",
        run.record.scheme, dt, last.time, run.record.status, last.err_inf, last.eps_mass
    );
    Ok(if run.record.completed() { 0 } else { 3 })
}

fn sweep_dt_cmd(c: &Common) -> Result<i32> {
    let (cfg, out, cache) = load(c)?;
    let exp = Experiment::new(&cfg)?;
    let schemes = match &c.scheme {
        Some(s) => vec![s.clone()],
        None => cfg.resolved_schemes(),
    };
    let dts = match c.dt {
        Some(dt) => vec![dt],
        None => cfg.resolved_dt_sweep(),
    };
    let rows = sweep_dt(&exp, &schemes, &dts, c.workers, cache.as_deref())?;
    io::write_text(&out.join("sweep_dt.csv"), &io::sweep_csv(&rows))?;
    for s in &schemes {
        let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| &r.scheme == s).map(|r| (r.dt, r.err_inf)).unzip();
        match slope_fit(&x, &y, (1e-9, 1e-2)) {
            Ok(p) => println!("{s}: slope {p:.3}"),
            Err(e) => println!("{s}: slope n/a ({e})"),
        }
    }
    Ok(0)
}

fn sweep_n_cmd(c: &Common) -> Result<i32> {
    let (cfg, out, cache) = load(c)?;
    let ns = cfg
        .n_sweep
        .clone()
        .ok_or_else(|| Error::Config("field `n_sweep`: required for sweep-n".into()))?;
    let dt = c.dt.or(cfg.dt).unwrap_or(0.025);
    let exp = Experiment::new(&cfg)?;
    let rows = sweep_basis(&exp, &cfg.scheme, &ns, dt, c.workers, cache.as_deref())?;
    io::write_text(&out.join("sweep_n.csv"), &io::basis_csv(&rows))?;
    for r in &rows {
        println!("N={} err_inf={:e} {}", r.n, r.err_inf, r.status);
    }
    Ok(0)
}

fn reference_cmd(c: &Common) -> Result<i32> {
    let (cfg, out, cache) = load(c)?;
    let exp = Experiment::new(&cfg)?;
    let t = cfg.t_final;
    let state = super::experiment::compute_reference(&exp, &[t], cache.as_deref())?.remove(0);
    let meta = json!({"t": t, "basis": exp.basis_config, "model": exp.model, "key": exp.reference_key(&[t])});
    let path = io::write_snapshot(&out, "reference", exp.basis.nodes(), &state, &meta)?;
    println!("{}", path.display());
    Ok(0)
}

fn stationary_cmd(a: &StationaryArgs) -> Result<i32> {
    let (mut alpha, mut omega, mut n, mut half, mut out) = (None, None, 1usize << 13, 150.0, PathBuf::from("out"));
    let mut interval = None;
    if let Some(path) = &a.config {
        let cfg = ExperimentConfig::load(path)?;
        if let InitialCondition::Stationary { alpha: al, omega: om } = cfg.initial {
            alpha = Some(al);
            omega = Some(om);
        }
        match cfg.basis {
            BasisConfig::Fourier { n: cn, interval: iv } => {
                n = cn;
                interval = Some(iv);
            }
            BasisConfig::Hermite { .. } => {
                return Err(Error::Config("field `basis`: stationary states need a Fourier basis".into()))
            }
        }
        out = cfg.output;
    }
    alpha = a.alpha.or(alpha);
    omega = a.omega.or(omega);
    if let Some(v) = a.n {
        n = v;
    }
    if let Some(h) = a.half_width {
        half = h;
        interval = None;
    }
    if let Some(o) = &a.out {
        out = o.clone();
    }
    let alpha = alpha.ok_or_else(|| Error::Config("--alpha is required".into()))?;
    let omega = omega.ok_or_else(|| Error::Config("--omega is required".into()))?;
    if !(a.tolerance.is_finite() && a.tolerance > 0.0) {
        return Err(Error::Config("--tolerance must be positive".into()));
    }
    let interval = interval.unwrap_or((-half, half));
    let basis = crate::spectral::Basis::fourier(n, interval)?;
    let problem = GroundStateProblem::new(alpha, omega, &basis)?.with_tolerance(a.tolerance);
    let gs = solve_ground_state(&problem, None)?;
    let meta = json!({
        "alpha": alpha,
        "omega": omega,
        "residual": gs.residual,
        "n": n,
        "interval": [interval.0, interval.1],
        "newton_iterations": gs.newton_iterations,
        "continuation": gs.continuation,
        "boundary_value": gs.boundary_value(),
        "boundary_ok": gs.boundary_ok(a.tolerance),
    });
    let field = gs.to_field()?;
    let path = io::write_snapshot(&out, &stem(alpha, omega), basis.nodes(), field.values(), &meta)?;
    println!("{} residual={:e}", path.display(), gs.residual);
    Ok(0)
}

fn stem(alpha: f64, omega: f64) -> String {
    format!("ground_state_a{alpha}_w{omega}")
}
