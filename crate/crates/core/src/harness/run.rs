use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::json;

use super::experiment::Experiment;
use super::io;
use super::record::{status_label, BasisRow, RunRecord, Sample, SweepRow};
use crate::error::{Error, Result};
use crate::models::error_inf;
use crate::schemes::{evolve, scheme_by_name, step_count, NoObserver, StepCounter};

/// Sample times of an evolution: step 0, every `stride`, and the last step.
pub fn sample_steps(steps: usize, stride: usize) -> Vec<usize> {
    let stride = stride.max(1);
    let mut out: Vec<usize> = (0..=steps).step_by(stride).collect();
    if *out.last().unwrap() != steps {
        out.push(steps);
    }
    out
}

pub struct RunOutput {
    pub record: RunRecord,
    pub final_state: Vec<Complex64>,
    /// `(t, state)` at the snapshot stride.
    pub snapshots: Vec<(f64, Vec<Complex64>)>,
}

/// Evolves the experiment's initial state, recording metrics on the
/// observer stride.
pub fn run_evolve(exp: &Experiment, scheme: &str, dt: f64, cache_dir: Option<&Path>) -> Result<RunOutput> {
    let scheme = scheme_by_name(scheme)?;
    let t_final = exp.config.t_final;
    let steps = step_count(dt, t_final)?;
    let stride = exp.config.observers.stride;
    let sample_at = sample_steps(steps, stride);
    let times: Vec<f64> = sample_at.iter().map(|&n| n as f64 * dt).collect();
    let reference = exp.reference(&times, cache_dir)?;
    let snap_stride = exp.config.observers.snapshot_stride;

    let mut samples = Vec::with_capacity(times.len());
    let mut snapshots = Vec::new();
    let mut next = 0;
    let started = Instant::now();
    let mut observer = |n: usize, t: f64, u: &[Complex64], c: &StepCounter| -> Result<()> {
        while next < sample_at.len() && sample_at[next] < n {
            next += 1;
        }
        if next < sample_at.len() && sample_at[next] == n {
            let err = match &reference[next] {
                Some(r) => error_inf(u, r)?,
                None => f64::NAN,
            };
            samples.push(Sample {
                time: t,
                err_inf: err,
                eps_mass: exp.eps_mass(u),
                eps_ham: exp.eps_ham(u),
                evals_a: c.evals_a,
                evals_b: c.evals_b,
                sup_norm: u.iter().map(|z| z.norm()).fold(0.0, f64::max),
            });
        }
        let snap = if snap_stride == 0 { n == 0 || n == steps } else { n % snap_stride == 0 || n == steps };
        if snap {
            snapshots.push((t, u.to_vec()));
        }
        Ok(())
    };
    let observe_every = if snap_stride == 0 { stride } else { gcd(stride, snap_stride) };
    let outcome = evolve(&scheme, &exp.problem, dt, t_final, &exp.u0, observe_every, &mut observer)?;
    let record = RunRecord {
        scheme: scheme.name().to_string(),
        dt,
        t_final,
        steps,
        samples,
        status: status_label(&outcome.status),
        wall_clock_s: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutput {
        record,
        final_state: outcome.state,
        snapshots,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Writes `run.csv`, `meta.json` and `snapshots/` under `dir`.
pub fn write_run(dir: &Path, exp: &Experiment, out: &RunOutput) -> Result<()> {
    io::ensure_dir(dir)?;
    io::write_text(&dir.join("run.csv"), &io::run_csv(&out.record))?;
    let meta = json!({
        "scheme": out.record.scheme,
        "dt": out.record.dt,
        "t_final": out.record.t_final,
        "steps": out.record.steps,
        "status": out.record.status,
        "model": exp.model,
        "basis": exp.basis_config,
        "initial": exp.config.initial,
        "mass0": exp.mass0,
        "hamiltonian0": if exp.ham0.is_nan() { serde_json::Value::Null } else { json!(exp.ham0) },
        "wall_clock_s": out.record.wall_clock_s,
    });
    io::write_json(&dir.join("meta.json"), &meta)?;
    let snap_dir = dir.join("snapshots");
    for (i, (t, u)) in out.snapshots.iter().enumerate() {
        let meta = json!({"t": t, "basis": exp.basis_config, "model": exp.model, "scheme": out.record.scheme});
        io::write_snapshot(&snap_dir, &format!("snap-{i:05}"), exp.basis.nodes(), u, &meta)?;
    }
    Ok(())
}

/// Runs `jobs` on up to `workers` threads and returns results in job order.
pub fn parallel_map<T, R, F>(jobs: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.clamp(1, jobs.len().max(1));
    if workers == 1 {
        return jobs.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut results: Vec<(usize, R)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= jobs.len() {
                            break;
                        }
                        local.push((i, f(&jobs[i])));
                    }
                    local
                })
            })
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect();
        handles
    });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

/// One row per `(scheme, Δt)`, metrics at `t_final`. Blow-ups yield rows
/// with NaN metrics and a `blowup(step)` status.
pub fn sweep_dt(
    exp: &Experiment,
    schemes: &[String],
    dts: &[f64],
    workers: usize,
    cache_dir: Option<&Path>,
) -> Result<Vec<SweepRow>> {
    let t_final = exp.config.t_final;
    let reference = exp.reference(&[t_final], cache_dir)?.pop().flatten();
    let mut jobs = Vec::new();
    for s in schemes {
        scheme_by_name(s)?;
        for &dt in dts {
            step_count(dt, t_final)?;
            jobs.push((s.clone(), dt));
        }
    }
    let rows = parallel_map(&jobs, workers, |(name, dt)| -> Result<SweepRow> {
        let scheme = scheme_by_name(name)?;
        let out = evolve(&scheme, &exp.problem, *dt, t_final, &exp.u0, usize::MAX, &mut NoObserver)?;
        let done = out.status.is_completed();
        let u = &out.state;
        let metric = |v: f64| if done { v } else { f64::NAN };
        Ok(SweepRow {
            scheme: scheme.name().to_string(),
            dt: *dt,
            err_inf: match (&reference, done) {
                (Some(r), true) => error_inf(u, r)?,
                _ => f64::NAN,
            },
            eps_mass: metric(exp.eps_mass(u)),
            eps_ham: metric(exp.eps_ham(u)),
            cost: scheme.cost(&out.counter),
            status: status_label(&out.status),
        })
    });
    rows.into_iter().collect()
}

/// `E∞` at `t_final` for each basis size, at fixed `Δt`.
pub fn sweep_basis(
    exp: &Experiment,
    scheme: &str,
    ns: &[usize],
    dt: f64,
    workers: usize,
    cache_dir: Option<&Path>,
) -> Result<Vec<BasisRow>> {
    let scheme = scheme_by_name(scheme)?;
    let t_final = exp.config.t_final;
    step_count(dt, t_final)?;
    let rows = parallel_map(ns, workers, |&n| -> Result<BasisRow> {
        let e = Experiment::on_basis(&exp.config, &exp.basis_config.with_n(n))?;
        let reference = e
            .reference(&[t_final], cache_dir)?
            .pop()
            .flatten()
            .ok_or_else(|| Error::Config("field `reference`: sweep-n needs a reference".into()))?;
        let out = evolve(&scheme, &e.problem, dt, t_final, &e.u0, usize::MAX, &mut NoObserver)?;
        let err = if out.status.is_completed() { error_inf(&out.state, &reference)? } else { f64::NAN };
        Ok(BasisRow {
            n,
            dt,
            err_inf: err,
            status: status_label(&out.status),
        })
    });
    rows.into_iter().collect()
}

/// Least-squares slope of `log y` against `log x` over the points with
/// `y` inside `window`.
pub fn slope_fit(x: &[f64], y: &[f64], window: (f64, f64)) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&xi, &yi)| xi > 0.0 && yi.is_finite() && yi >= window.0 && yi <= window.1)
        .map(|(xi, yi)| (xi.ln(), yi.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DivisionByZero("all abscissae coincide"));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExperimentConfig;

    fn soliton(n: usize) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"basis": {{"fourier": {{"n": {n}, "interval": [-50, 50]}}}}, "t_final": 1, "dt": 0.05,
                "initial": {{"nlse-soliton": {{"eta": 1.0, "c": 0.5}}}}, "observers": {{"stride": 5}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn slope_examples() {
        let x: Vec<f64> = (1..=8).map(|i| 0.5f64.powi(i)).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        assert!((slope_fit(&x, &y, (0.0, f64::INFINITY)).unwrap() - 2.0).abs() < 1e-12);
        let y6: Vec<f64> = x.iter().map(|v| v.powi(6) + 1e-14).collect();
        let s = slope_fit(&x, &y6, (1e-16, 1.0)).unwrap();
        assert!((5.0..=6.0).contains(&s), "{s}");
        assert!(matches!(slope_fit(&x[..1], &y[..1], (0.0, 1.0)), Err(Error::InsufficientPoints { .. })));
    }

    #[test]
    fn sample_schedule() {
        assert_eq!(sample_steps(10, 4), vec![0, 4, 8, 10]);
        assert_eq!(sample_steps(8, 4), vec![0, 4, 8]);
        assert_eq!(sample_steps(0, 3), vec![0]);
    }

    #[test]
    fn evolve_records_samples() {
        let exp = Experiment::new(&soliton(512)).unwrap();
        let out = run_evolve(&exp, "strang", 0.05, None).unwrap();
        let r = &out.record;
        assert!(r.completed());
        assert_eq!(r.samples.iter().map(|s| s.time).collect::<Vec<_>>(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(r.samples[0].err_inf, 0.0);
        assert_eq!(r.samples[4].evals_b, 20);
        assert!(r.samples[4].err_inf < 1e-3);
        assert!(r.samples[4].eps_mass < 1e-12);
        assert_eq!(out.snapshots.len(), 2);
    }

    #[test]
    fn sweep_costs_follow_counters() {
        let exp = Experiment::new(&soliton(256)).unwrap();
        let names: Vec<String> = ["strang", "neri", "affine6"].iter().map(|s| s.to_string()).collect();
        let rows = sweep_dt(&exp, &names, &[0.1, 0.05], 1, None).unwrap();
        let cost: Vec<u64> = rows.iter().map(|r| r.cost).collect();
        assert_eq!(cost, vec![10, 20, 30, 60, 120, 240]);
        assert!(rows.iter().all(|r| r.completed()));
    }

    #[test]
    fn workers_do_not_change_results() {
        let exp = Experiment::new(&soliton(256)).unwrap();
        let names: Vec<String> = ["ruth", "affine4"].iter().map(|s| s.to_string()).collect();
        let a = sweep_dt(&exp, &names, &[0.1, 0.05, 0.025], 1, None).unwrap();
        let b = sweep_dt(&exp, &names, &[0.1, 0.05, 0.025], 3, None).unwrap();
        assert_eq!(io::sweep_csv(&a), io::sweep_csv(&b));
    }

    #[test]
    fn basis_sweep_improves_with_n() {
        let exp = Experiment::new(&soliton(64)).unwrap();
        let rows = sweep_basis(&exp, "affine6", &[32, 64, 128, 256], 0.05, 2, None).unwrap();
        assert!(rows[0].err_inf > 1e-2, "{}", rows[0].err_inf);
        assert!(rows.windows(2).all(|w| w[1].err_inf <= w[0].err_inf));
    }
}
