use num_complex::Complex64;

use super::{Scheme, StepCounter};
use crate::error::{invalid, Error, Result};
use crate::propagators::Splitting;

/// `‖u‖∞` above which a run is declared unstable.
pub const BLOWUP_THRESHOLD: f64 = 1e10;

/// Receives the state on the sampling stride.
pub trait Observer {
    fn observe(&mut self, step: usize, t: f64, u: &[Complex64], counter: &StepCounter) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(usize, f64, &[Complex64], &StepCounter) -> Result<()>,
{
    fn observe(&mut self, step: usize, t: f64, u: &[Complex64], counter: &StepCounter) -> Result<()> {
        self(step, t, u, counter)
    }
}

pub struct NoObserver;

impl Observer for NoObserver {
    fn observe(&mut self, _: usize, _: f64, _: &[Complex64], _: &StepCounter) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// Step (1-based) during which the state became unusable.
    BlowUp { step: usize, reason: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    /// Last finite state (the input to the failing step on blow-up).
    pub state: Vec<Complex64>,
    pub status: RunStatus,
    pub steps_taken: usize,
    pub counter: StepCounter,
}

/// `m` with `t_final = m·Δt`, or an error if no such integer exists.
pub fn step_count(dt: f64, t_final: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(invalid("t_final", format!("must be non-negative, got {t_final}")));
    }
    let m = (t_final / dt).round();
    if (m * dt - t_final).abs() > 1e-9 * t_final.max(1.0) {
        return Err(Error::NonIntegerSteps { t_final, dt });
    }
    Ok(m as usize)
}

fn is_instability(e: &Error) -> bool {
    matches!(e, Error::BlowUp { .. } | Error::NonFinite | Error::Ode(_) | Error::ExpmOverflow(_))
}

/// Advances `u0` by `t_final / dt` steps of `scheme`, sampling the
/// observer at step 0, every `stride` steps and at the end.
pub fn evolve<S: Splitting + ?Sized>(
    scheme: &Scheme,
    split: &S,
    dt: f64,
    t_final: f64,
    u0: &[Complex64],
    stride: usize,
    observer: &mut dyn Observer,
) -> Result<EvolveOutcome> {
    let steps = step_count(dt, t_final)?;
    let stride = stride.max(1);
    let mut counter = StepCounter::default();
    let mut u = u0.to_vec();
    let mut next = u.clone();
    observer.observe(0, 0.0, &u, &counter)?;

    for n in 1..=steps {
        next.copy_from_slice(&u);
        let failure = match scheme.step(split, &mut next, dt, &mut counter) {
            Ok(()) => {
                let sup = next.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if !sup.is_finite() {
                    Some("non-finite state".to_string())
                } else if sup > BLOWUP_THRESHOLD {
                    Some(format!("sup norm {sup:e} exceeds {BLOWUP_THRESHOLD:e}"))
                } else {
                    None
                }
            }
            Err(e) if is_instability(&e) => Some(e.to_string()),
            Err(e) => return Err(e),
        };
        if let Some(reason) = failure {
            return Ok(EvolveOutcome {
                state: u,
                status: RunStatus::BlowUp { step: n, reason },
                steps_taken: n - 1,
                counter,
            });
        }
        std::mem::swap(&mut u, &mut next);
        if n % stride == 0 || n == steps {
            observer.observe(n, n as f64 * dt, &u, &counter)?;
        }
    }
    Ok(EvolveOutcome {
        state: u,
        status: RunStatus::Completed,
        steps_taken: steps,
        counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagators::FnSplitting;
    use crate::schemes::scheme_by_name;

    #[test]
    fn step_count_rules() {
        assert_eq!(step_count(0.025, 10.0).unwrap(), 400);
        assert_eq!(step_count(0.1, 0.0).unwrap(), 0);
        assert!(matches!(step_count(0.3, 1.0), Err(Error::NonIntegerSteps { .. })));
        assert!(step_count(0.0, 1.0).is_err());
        assert!(step_count(-0.1, 1.0).is_err());
    }

    #[test]
    fn zero_steps_returns_input() {
        let split = FnSplitting {
            a: |_: &mut [Complex64], _: f64| -> Result<()> { panic!() },
            b: |_: &mut [Complex64], _: f64| -> Result<()> { panic!() },
        };
        let u0 = vec![Complex64::new(0.3, 0.2); 4];
        let out = evolve(&scheme_by_name("affine6").unwrap(), &split, 0.1, 0.0, &u0, 1, &mut NoObserver).unwrap();
        assert_eq!(out.state, u0);
        assert_eq!(out.status, RunStatus::Completed);
    }

    #[test]
    fn growth_is_reported_as_blowup() {
        let split = FnSplitting {
            a: |u: &mut [Complex64], dt: f64| -> Result<()> {
                u.iter_mut().for_each(|z| *z *= (50.0 * dt).exp());
                Ok(())
            },
            b: |_: &mut [Complex64], _: f64| -> Result<()> { Ok(()) },
        };
        let u0 = vec![Complex64::new(1.0, 0.0)];
        let out = evolve(&scheme_by_name("strang").unwrap(), &split, 0.1, 10.0, &u0, 1, &mut NoObserver).unwrap();
        match out.status {
            RunStatus::BlowUp { step, .. } => assert_eq!(step, 5),
            s => panic!("{s:?}"),
        }
        assert_eq!(out.steps_taken, 4);
        assert!(out.state[0].norm() <= BLOWUP_THRESHOLD);
    }

    #[test]
    fn flow_errors_become_blowup_records() {
        let split = FnSplitting {
            a: |_: &mut [Complex64], _: f64| -> Result<()> { Ok(()) },
            b: |_: &mut [Complex64], dt: f64| -> Result<()> { Err(Error::BlowUp { dt, bound: 0.0 }) },
        };
        let u0 = vec![Complex64::new(1.0, 0.0)];
        let out = evolve(&scheme_by_name("neri").unwrap(), &split, 0.1, 1.0, &u0, 1, &mut NoObserver).unwrap();
        assert!(matches!(out.status, RunStatus::BlowUp { step: 1, .. }));
    }

    #[test]
    fn observer_stride() {
        let split = FnSplitting {
            a: |_: &mut [Complex64], _: f64| -> Result<()> { Ok(()) },
            b: |_: &mut [Complex64], _: f64| -> Result<()> { Ok(()) },
        };
        let mut seen = Vec::new();
        let mut obs = |n: usize, _: f64, _: &[Complex64], _: &StepCounter| -> Result<()> {
            seen.push(n);
            Ok(())
        };
        evolve(&scheme_by_name("strang").unwrap(), &split, 0.1, 1.0, &[Complex64::new(1.0, 0.0)], 4, &mut obs)
            .unwrap();
        assert_eq!(seen, vec![0, 4, 8, 10]);
    }
}
