//! Acceptance criteria 1-10. Each test prints one `PASS`/`FAIL` line and
//! then asserts, so the summary is visible with or without `--nocapture`.

use std::io::Write;
use std::sync::OnceLock;

use affine_split::harness::{
    default_dt_sweep, slope_fit, sweep_basis, sweep_dt, run_evolve, Experiment, ExperimentConfig, SweepRow,
};
use affine_split::models::{error_inf, hamiltonian, pde_residual, split_problem, Cgle3SolitonParams, ModelSpec};
use affine_split::schemes::{builtin_schemes, evolve, scheme_by_name, NoObserver};
use affine_split::spectral::{Basis, Field};
use affine_split::stationary::{solve_ground_state, GroundStateProblem};
use num_complex::Complex64;

const WINDOW: (f64, f64) = (1e-9, 1e-2);

fn report(id: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {id:>2}: {verdict} | {detail}");
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

const SOLITON_BENCH: &str = r#"{
    "basis": {"fourier": {"n": 2048, "interval": [-50, 50]}},
    "initial": {"nlse-soliton": {"eta": 1.0, "c": 0.5, "x0": 0.0, "phi0": 0.0}},
    "t_final": 10,
    "observers": {"stride": 1000000},
    "reference": "exact"
}"#;

fn soliton_bench_rows() -> &'static [SweepRow] {
    static ROWS: OnceLock<Vec<SweepRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let cfg = ExperimentConfig::from_json(SOLITON_BENCH).unwrap();
        let exp = Experiment::new(&cfg).unwrap();
        let schemes: Vec<String> = builtin_schemes().iter().map(|s| s.name().to_string()).collect();
        let dts = cfg.resolved_dt_sweep();
        assert_eq!(dts.len(), default_dt_sweep().len());
        sweep_dt(&exp, &schemes, &dts, workers(), None).unwrap()
    })
}

fn rows_of<'a>(rows: &'a [SweepRow], scheme: &str) -> Vec<&'a SweepRow> {
    rows.iter().filter(|r| r.scheme == scheme).collect()
}

fn in_window(e: f64) -> bool {
    e >= WINDOW.0 && e <= WINDOW.1
}

/// Pairs `(affine, composition)` at every Δt where either error lies in the window.
fn window_pairs<'a>(rows: &'a [SweepRow], affine: &str, composition: &str) -> Vec<(&'a SweepRow, &'a SweepRow)> {
    let a = rows_of(rows, affine);
    let c = rows_of(rows, composition);
    a.into_iter()
        .zip(c)
        .inspect(|(x, y)| assert_eq!(x.dt, y.dt))
        .filter(|(x, y)| in_window(x.err_inf) || in_window(y.err_inf))
        .collect()
}

#[test]
fn criterion_01_convergence_orders() {
    let rows = soliton_bench_rows();
    let expected = [
        ("lie-trotter", 1.0, 0.3),
        ("strang", 2.0, 0.3),
        ("affine2", 2.0, 0.3),
        ("ruth", 3.0, 0.4),
        ("neri", 4.0, 0.4),
        ("affine4", 4.0, 0.4),
        ("yoshida6", 6.0, 0.5),
        ("affine6", 6.0, 0.5),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, order, tol) in expected {
        let (x, y): (Vec<f64>, Vec<f64>) = rows_of(rows, name).iter().map(|r| (r.dt, r.err_inf)).unzip();
        match slope_fit(&x, &y, WINDOW) {
            Ok(p) => {
                pass &= (p - order).abs() <= tol;
                parts.push(format!("{name} {p:.2}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} n/a ({e})"));
            }
        }
    }
    report(1, pass, &format!("slopes: {}", parts.join(", ")));
    assert!(pass);
}

#[test]
fn criterion_02_affine_accuracy_advantage() {
    let rows = soliton_bench_rows();
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, c) in [("affine4", "neri"), ("affine6", "yoshida6")] {
        let pairs = window_pairs(rows, a, c);
        let bad: Vec<f64> = pairs.iter().filter(|(x, y)| !(x.err_inf < y.err_inf)).map(|(x, _)| x.dt).collect();
        let best = pairs.iter().map(|(x, y)| y.err_inf / x.err_inf).fold(0.0, f64::max);
        pass &= !pairs.is_empty() && bad.is_empty();
        parts.push(format!("{a}<{c} at {}/{} dt (max ratio {best:.1}) bad {bad:?}", pairs.len() - bad.len(), pairs.len()));
    }
    report(2, pass, &parts.join("; "));
    assert!(pass);
}

#[test]
fn criterion_03_mass_conservation() {
    let rows = soliton_bench_rows();
    const TOL: f64 = 1e-10;
    let worst = |name: &str, max_dt: f64| {
        rows_of(rows, name)
            .iter()
            .filter(|r| r.dt <= max_dt)
            .map(|r| (r.eps_mass, r.dt))
            .fold((0.0, 0.0), |a, b| if b.0 > a.0 || b.0.is_nan() { b } else { a })
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["lie-trotter", "strang", "ruth", "neri", "yoshida6"] {
        let (e, dt) = worst(name, f64::INFINITY);
        pass &= e < TOL;
        parts.push(format!("{name} max {e:.1e} (dt {dt:.3})"));
    }
    for (name, max_dt) in [("affine6", 0.1), ("affine4", 0.01)] {
        let (e, dt) = worst(name, max_dt);
        pass &= e < TOL;
        parts.push(format!("{name} dt<={max_dt} max {e:.1e} (dt {dt:.4})"));
    }
    report(3, pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_04_hamiltonian() {
    let basis = Basis::fourier(2048, (-50.0, 50.0)).unwrap();
    let sech = Field::from_fn(basis, |x| Complex64::new(1.0 / x.cosh(), 0.0)).unwrap();
    let h = hamiltonian(&sech, 2.0, -1.0).unwrap();
    let quadrature_ok = (h + 1.0 / 3.0).abs() < 1e-8;

    let rows = soliton_bench_rows();
    let pairs = window_pairs(rows, "affine6", "yoshida6");
    let bad: Vec<String> = pairs
        .iter()
        .filter(|(a, y)| !(a.eps_ham < y.eps_ham))
        .map(|(a, y)| format!("dt {:.4}: {:.1e} vs {:.1e}", a.dt, a.eps_ham, y.eps_ham))
        .collect();
    let pass = quadrature_ok && !pairs.is_empty() && bad.is_empty();
    report(
        4,
        pass,
        &format!(
            "H(sech) = {h:.12} (|err| {:.1e}); eps_H affine6<yoshida6 at {}/{} dt; violations [{}]",
            (h + 1.0 / 3.0).abs(),
            pairs.len() - bad.len(),
            pairs.len(),
            bad.join(", ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_cgle3_irreversibility() {
    let cfg = ExperimentConfig::from_json(
        r#"{"basis": {"hermite": {"n": 300, "scaling": 1.0}},
            "initial": {"cgle3-soliton": {"beta": 0.25, "g": 1.0}},
            "t_final": 10, "dt": 0.05, "observers": {"stride": 1000000}, "reference": "exact"}"#,
    )
    .unwrap();
    let exp = Experiment::new(&cfg).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, must_complete) in [("neri", false), ("yoshida6", false), ("affine4", true), ("affine6", true)] {
        let run = run_evolve(&exp, name, 0.05, None).unwrap();
        let err = run.record.last().map_or(f64::NAN, |s| s.err_inf);
        let ok = if must_complete {
            run.record.completed() && err < 1e-2
        } else {
            !run.record.completed()
        };
        pass &= ok;
        parts.push(format!("{name} {} E={err:.1e}", run.record.status));
    }
    report(5, pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_06_cgle3_soliton() {
    let p = Cgle3SolitonParams::new(0.25, 1.0, 0.0).unwrap();
    let basis = Basis::fourier(2048, (-50.0, 50.0)).unwrap();
    let problem = split_problem(&p.model().unwrap(), &basis).unwrap();
    let u: Vec<_> = basis.nodes().iter().map(|&x| p.eval(x, 0.3)).collect();
    let du: Vec<_> = basis.nodes().iter().map(|&x| p.time_derivative(x, 0.3)).collect();
    let residual = pde_residual(&problem, &u, &du).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let peak = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pass = residual < 1e-8 && (peak - 1.072).abs() <= 1e-3;
    report(6, pass, &format!("residual {residual:.1e}, peak {peak:.5}, epsilon {:.6}", p.epsilon()));
    assert!(pass);
}

fn tail_slope(psi: &[f64], nodes: &[f64], x: f64) -> f64 {
    let at = |x: f64| psi[nodes.iter().position(|&y| y >= x).unwrap()].abs();
    (at(2.0 * x).ln() - at(x).ln()) / 2f64.ln()
}

#[test]
fn criterion_07_fractional_ground_states() {
    let basis = GroundStateProblem::default_basis();
    let nodes = basis.nodes().to_vec();
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [1.2, 1.4, 1.6, 1.8, 2.0] {
        let problem = GroundStateProblem::new(alpha, 1.0, &basis).unwrap();
        let gs = solve_ground_state(&problem, None).unwrap();
        let psi = gs.to_field().unwrap();

        let model = ModelSpec::fnlse3(alpha, -1.0).unwrap();
        let split = split_problem(&model, &basis).unwrap();
        let scheme = scheme_by_name("affine6").unwrap();
        let out = evolve(&scheme, &split, 0.01, 10.0, psi.values(), 1_000_000, &mut NoObserver).unwrap();
        let drift = out
            .state
            .iter()
            .zip(psi.values())
            .map(|(u, p)| (u.norm() - p.norm()).abs())
            .fold(0.0, f64::max);

        let decay_ok = if alpha < 2.0 {
            let (s1, s2) = (tail_slope(&gs.psi, &nodes, 10.0), tail_slope(&gs.psi, &nodes, 20.0));
            parts.push(format!("a={alpha}: res {:.1e}, drift {drift:.1e}, log-log slopes {s1:.2}/{s2:.2}", gs.residual));
            (s1 - s2).abs() < 0.3 && (s2 + 1.0 + alpha).abs() < 0.3
        } else {
            let (s1, s2) = (tail_slope(&gs.psi, &nodes, 5.0), tail_slope(&gs.psi, &nodes, 10.0));
            parts.push(format!("a={alpha}: res {:.1e}, drift {drift:.1e}, log-log slopes {s1:.2}/{s2:.2}", gs.residual));
            s2 < 1.5 * s1
        };
        pass &= out.status.is_completed() && gs.residual <= 1e-12 && drift < 1e-6 && decay_ok;
    }
    report(7, pass, &parts.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_spectral_convergence() {
    let mut cfg = ExperimentConfig::from_json(SOLITON_BENCH).unwrap();
    cfg.scheme = "affine4".into();
    let ns = [64, 96, 128, 192, 256, 384, 512, 1024, 2048];
    let exp = Experiment::new(&cfg).unwrap();
    let rows = sweep_basis(&exp, "affine4", &ns, 0.05, workers(), None).unwrap();
    let errs: Vec<f64> = rows.iter().map(|r| r.err_inf).collect();
    let floor = errs[errs.len() - 1];
    let at_floor = (errs[errs.len() - 1] - errs[errs.len() - 2]).abs() / errs[errs.len() - 2] < 0.1;

    // Resolved points above the floor: local algebraic orders must keep growing.
    let pre: Vec<usize> = (0..ns.len()).filter(|&i| errs[i] < 0.5 && errs[i] > 2.0 * floor).collect();
    let orders: Vec<f64> = pre
        .windows(2)
        .map(|w| (errs[w[0]] / errs[w[1]]).ln() / (ns[w[1]] as f64 / ns[w[0]] as f64).ln())
        .collect();
    let growing = orders.len() >= 2 && orders.windows(2).all(|w| w[1] > w[0]);
    let pass = growing && at_floor && orders.last().is_some_and(|&o| o > 8.0);
    report(8, pass, &format!("E(N) {}; local orders {orders:.1?}; floor {floor:.2e}", errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" ")));
    assert!(pass);
}

fn fcgle5(alpha: f64, t_final: f64) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{"model": {{"kind": "fcgle5", "alpha": {alpha}, "beta": 0.1, "delta": -0.2, "gamma": -1.0,
                        "epsilon": 1.7, "nu": -0.115, "mu": -1.0}},
            "basis": {{"hermite": {{"n": 300, "scaling": 1.0}}}},
            "initial": {{"gaussian": {{"amplitude": 1.2, "width": 1.0}}}},
            "t_final": {t_final}, "dt": 0.025, "observers": {{"stride": 20}}, "reference": "none"}}"#
    ))
    .unwrap()
}

/// `(t, ‖u‖∞)` samples and the final state.
fn fcgle5_run(alpha: f64, t_final: f64) -> (Vec<(f64, f64)>, Vec<Complex64>, Vec<f64>) {
    let exp = Experiment::new(&fcgle5(alpha, t_final)).unwrap();
    let run = run_evolve(&exp, "affine6", 0.025, None).unwrap();
    assert!(run.record.completed(), "alpha {alpha}: {}", run.record.status);
    let series = run.record.samples.iter().map(|s| (s.time, s.sup_norm)).collect();
    (series, run.final_state, exp.basis.nodes().to_vec())
}

/// Earliest sample time after which the amplitude stays within 1% of its final value.
fn settle_time(series: &[(f64, f64)]) -> f64 {
    let last = series.last().unwrap().1;
    let mut t = series.last().unwrap().0;
    for &(ti, a) in series.iter().rev() {
        if ((a - last) / last).abs() > 0.01 {
            break;
        }
        t = ti;
    }
    t
}

#[test]
fn criterion_09_fcgle5_dissipative_soliton() {
    let (s18, u18, nodes) = fcgle5_run(1.8, 250.0);
    let late: Vec<f64> = s18.iter().filter(|(t, _)| *t >= 200.0).map(|p| p.1).collect();
    let (lo, hi) = late.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &a| (l.min(a), h.max(a)));
    let variation = (hi - lo) / hi;
    let peak = u18.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = u18
        .iter()
        .zip(&nodes)
        .filter(|(_, x)| x.abs() > 10.0)
        .map(|(z, _)| z.norm())
        .fold(0.0, f64::max);
    let localized = peak > 0.5 && edge < 1e-3 * peak;

    let (s11, _, _) = fcgle5_run(1.1, 250.0);
    let (t18, t11) = (settle_time(&s18), settle_time(&s11));

    let (m18, _, _) = fcgle5_run(1.8, 50.0);
    let (m11, _, _) = fcgle5_run(1.1, 50.0);
    let (q18, q11) = (settle_time(&m18), settle_time(&m11));

    let pass = localized && variation < 1e-3 && t11 > t18 && q11 > q18;
    report(
        9,
        pass,
        &format!(
            "peak {peak:.4}, tail {edge:.1e}, variation[200,250] {variation:.1e}; settle a=1.8 {t18} vs a=1.1 {t11}; smoke t=50: {q18} vs {q11}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_cost_accounting() {
    let basis = Basis::fourier(64, (-10.0, 10.0)).unwrap();
    let split = split_problem(&ModelSpec::nlse3(-1.0).unwrap(), &basis).unwrap();
    let u0: Vec<Complex64> = basis.nodes().iter().map(|&x| Complex64::new(1.0 / x.cosh(), 0.0)).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for scheme in builtin_schemes() {
        let expected = match scheme.name() {
            "strang" => (2, 1),
            "neri" => (4, 3),
            "affine2" => (2, 2),
            "affine4" => (6, 6),
            "affine6" => (12, 12),
            _ => scheme.evaluations_per_step(),
        };
        let one = evolve(&scheme, &split, 0.1, 0.1, &u0, 1, &mut NoObserver).unwrap().counter;
        let five = evolve(&scheme, &split, 0.1, 0.5, &u0, 1, &mut NoObserver).unwrap().counter;
        let ok = (one.evals_a, one.evals_b) == expected
            && (five.evals_a, five.evals_b) == (5 * expected.0, 5 * expected.1)
            && scheme.evaluations_per_step() == expected;
        pass &= ok;
        parts.push(format!("{} {}/{}", scheme.name(), one.evals_a, one.evals_b));
    }
    report(10, pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn soliton_error_is_reference_consistent() {
    let cfg = ExperimentConfig::from_json(SOLITON_BENCH).unwrap();
    let exp = Experiment::new(&cfg).unwrap();
    assert!(error_inf(&exp.exact(0.0).unwrap(), &exp.u0).unwrap() < 1e-15);
}
