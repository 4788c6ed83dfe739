//! Explicit Runge-Kutta 8(5,3) of Dormand and Prince with embedded error
//! control, for complex-valued systems `y' = f(t, y)`.

use num_complex::Complex64;

/// Integrator failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("more than {max_steps} steps needed (stopped at t = {t})")]
    MaxStepsExceeded { t: f64, max_steps: usize },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("invalid integrator setting: {0}")]
    InvalidConfig(&'static str),

    #[error("state dimension {got} does not match workspace dimension {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Tolerances and step limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
}

impl Default for RkConfig {
    fn default() -> Self {
        RkConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_steps: 1_000_000,
            initial_step: None,
        }
    }
}

impl RkConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        RkConfig {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), OdeError> {
        if !(self.abs_tol >= f64::EPSILON && self.rel_tol >= f64::EPSILON) {
            return Err(OdeError::InvalidConfig(
                "tolerances must be at least machine epsilon",
            ));
        }
        if self.max_steps == 0 {
            return Err(OdeError::InvalidConfig("max_steps must be positive"));
        }
        if let Some(h) = self.initial_step {
            if !(h.is_finite() && h > 0.0) {
                return Err(OdeError::InvalidConfig("initial step must be positive"));
            }
        }
        Ok(())
    }
}

/// Work counters of the last integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RkStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO1: f64 = 1.0 / 8.0 - BETA * 0.75;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;
const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;
const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

/// Reusable stage storage for one state dimension.
#[derive(Debug, Clone)]
pub struct Dop853 {
    config: RkConfig,
    dim: usize,
    k: [Vec<Complex64>; 12],
    y1: Vec<Complex64>,
    y_new: Vec<Complex64>,
    stats: RkStats,
}

/// `out = y + h Σ c_i k_i`
fn combine(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, k) in terms {
            acc += k[i] * c;
        }
        *o = y[i] + acc * h;
    }
}

impl Dop853 {
    pub fn new(dim: usize, config: RkConfig) -> Result<Self, OdeError> {
        config.validate()?;
        let z = vec![Complex64::new(0.0, 0.0); dim];
        Ok(Dop853 {
            config,
            dim,
            k: std::array::from_fn(|_| z.clone()),
            y1: z.clone(),
            y_new: z,
            stats: RkStats::default(),
        })
    }

    pub fn config(&self) -> &RkConfig {
        &self.config
    }

    pub fn stats(&self) -> RkStats {
        self.stats
    }

    /// One 8th-order step from `(t, y)` with `k[0] = f(t, y)` already set.
    /// Leaves the new state in `y_new` and returns the scaled error norm.
    fn step<F>(&mut self, f: &mut F, t: f64, y: &[Complex64], h: f64, estimate: bool) -> f64
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12] = &mut self.k;
        let y1 = &mut self.y1;

        combine(y1, y, h, &[(A21, k1)]);
        f(t + C2 * h, y1, k2);
        combine(y1, y, h, &[(A31, k1), (A32, k2)]);
        f(t + C3 * h, y1, k3);
        combine(y1, y, h, &[(A41, k1), (A43, k3)]);
        f(t + C4 * h, y1, k4);
        combine(y1, y, h, &[(A51, k1), (A53, k3), (A54, k4)]);
        f(t + C5 * h, y1, k5);
        combine(y1, y, h, &[(A61, k1), (A64, k4), (A65, k5)]);
        f(t + C6 * h, y1, k6);
        combine(y1, y, h, &[(A71, k1), (A74, k4), (A75, k5), (A76, k6)]);
        f(t + C7 * h, y1, k7);
        combine(
            y1,
            y,
            h,
            &[(A81, k1), (A84, k4), (A85, k5), (A86, k6), (A87, k7)],
        );
        f(t + C8 * h, y1, k8);
        combine(
            y1,
            y,
            h,
            &[(A91, k1), (A94, k4), (A95, k5), (A96, k6), (A97, k7), (A98, k8)],
        );
        f(t + C9 * h, y1, k9);
        combine(
            y1,
            y,
            h,
            &[
                (A101, k1),
                (A104, k4),
                (A105, k5),
                (A106, k6),
                (A107, k7),
                (A108, k8),
                (A109, k9),
            ],
        );
        f(t + C10 * h, y1, k10);
        combine(
            y1,
            y,
            h,
            &[
                (A111, k1),
                (A114, k4),
                (A115, k5),
                (A116, k6),
                (A117, k7),
                (A118, k8),
                (A119, k9),
                (A1110, k10),
            ],
        );
        f(t + C11 * h, y1, k11);
        combine(
            y1,
            y,
            h,
            &[
                (A121, k1),
                (A124, k4),
                (A125, k5),
                (A126, k6),
                (A127, k7),
                (A128, k8),
                (A129, k9),
                (A1210, k10),
                (A1211, k11),
            ],
        );
        f(t + h, y1, k12);
        self.stats.evaluations += 11;

        let mut err = 0.0;
        let mut err3 = 0.0;
        for i in 0..self.dim {
            let incr = k1[i] * B1
                + k6[i] * B6
                + k7[i] * B7
                + k8[i] * B8
                + k9[i] * B9
                + k10[i] * B10
                + k11[i] * B11
                + k12[i] * B12;
            self.y_new[i] = y[i] + incr * h;
            if estimate {
                let sk = self.config.abs_tol
                    + self.config.rel_tol * y[i].norm().max(self.y_new[i].norm());
                let e3 = incr - k1[i] * BHH1 - k9[i] * BHH2 - k12[i] * BHH3;
                err3 += e3.norm_sqr() / (sk * sk);
                let e5 = k1[i] * ER1
                    + k6[i] * ER6
                    + k7[i] * ER7
                    + k8[i] * ER8
                    + k9[i] * ER9
                    + k10[i] * ER10
                    + k11[i] * ER11
                    + k12[i] * ER12;
                err += e5.norm_sqr() / (sk * sk);
            }
        }
        if !estimate {
            return 0.0;
        }
        let mut deno = err + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        h.abs() * err * (1.0 / (deno * self.dim.max(1) as f64)).sqrt()
    }

    /// Initial step guess (Hairer-Wanner).
    fn initial_step<F>(&mut self, f: &mut F, t: f64, y: &[Complex64], span: f64) -> f64
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let dir = span.signum();
        let hmax = span.abs();
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for i in 0..self.dim {
            let sk = self.config.abs_tol + self.config.rel_tol * y[i].norm();
            dnf += self.k[0][i].norm_sqr() / (sk * sk);
            dny += y[i].norm_sqr() / (sk * sk);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        h = h.min(hmax);
        let (k0, rest) = self.k.split_at_mut(1);
        let f1 = &mut rest[0];
        for i in 0..self.dim {
            self.y1[i] = y[i] + k0[0][i] * (dir * h);
        }
        f(t + dir * h, &self.y1, f1);
        self.stats.evaluations += 1;
        let mut der2 = 0.0;
        for i in 0..self.dim {
            let sk = self.config.abs_tol + self.config.rel_tol * y[i].norm();
            der2 += (f1[i] - k0[0][i]).norm_sqr() / (sk * sk);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(hmax)
    }

    /// Adaptive integration of `y` from `t0` to `t1` in place. Backward
    /// integration (`t1 < t0`) is supported.
    pub fn integrate<F>(
        &mut self,
        mut f: F,
        t0: f64,
        t1: f64,
        y: &mut [Complex64],
    ) -> Result<RkStats, OdeError>
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        if y.len() != self.dim {
            return Err(OdeError::Dimension {
                expected: self.dim,
                got: y.len(),
            });
        }
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(OdeError::InvalidConfig("non-finite time span"));
        }
        self.stats = RkStats::default();
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(self.stats);
        }
        let dir = span.signum();

        f(t0, y, &mut self.k[0]);
        self.stats.evaluations += 1;
        let mut h = match self.config.initial_step {
            Some(h) => h.min(span.abs()),
            None => self.initial_step(&mut f, t0, y, span),
        };

        let mut t = t0;
        let mut facold: f64 = 1e-4;
        let mut last_rejected = false;
        let mut steps = 0usize;
        loop {
            if steps >= self.config.max_steps {
                return Err(OdeError::MaxStepsExceeded {
                    t,
                    max_steps: self.config.max_steps,
                });
            }
            if 0.1 * h <= t.abs() * f64::EPSILON || h < f64::MIN_POSITIVE {
                return Err(OdeError::StepUnderflow { t, h });
            }
            let mut last = false;
            if (t + 1.01 * dir * h - t1) * dir >= 0.0 {
                h = (t1 - t).abs();
                last = true;
            }
            steps += 1;

            let mut err = self.step(&mut f, t, y, dir * h, true);
            if !err.is_finite() || self.y_new.iter().any(|z| !z.is_finite()) {
                err = f64::MAX;
            }
            let fac11 = err.powf(EXPO1);
            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / MAX_FACTOR, 1.0 / MIN_FACTOR);
            let mut h_new = h / fac;

            if err <= 1.0 {
                facold = err.max(1e-4);
                self.stats.accepted += 1;
                y.copy_from_slice(&self.y_new);
                if last {
                    return Ok(self.stats);
                }
                t += dir * h;
                f(t, y, &mut self.k[0]);
                self.stats.evaluations += 1;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                last_rejected = false;
            } else {
                h_new = h / (fac11 / SAFETY).min(1.0 / MIN_FACTOR);
                self.stats.rejected += 1;
                last_rejected = true;
            }
            h = h_new;
        }
    }

    /// `steps` equal steps of the 8th-order formula without error control.
    pub fn integrate_fixed<F>(
        &mut self,
        mut f: F,
        t0: f64,
        t1: f64,
        steps: usize,
        y: &mut [Complex64],
    ) -> Result<RkStats, OdeError>
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        if y.len() != self.dim {
            return Err(OdeError::Dimension {
                expected: self.dim,
                got: y.len(),
            });
        }
        if steps == 0 {
            return Err(OdeError::InvalidConfig("need at least one step"));
        }
        self.stats = RkStats::default();
        let h = (t1 - t0) / steps as f64;
        for n in 0..steps {
            let t = t0 + n as f64 * h;
            f(t, y, &mut self.k[0]);
            self.stats.evaluations += 1;
            self.step(&mut f, t, y, h, false);
            y.copy_from_slice(&self.y_new);
            self.stats.accepted += 1;
        }
        Ok(self.stats)
    }
}

/// Adaptive 8(5,3) integration of `y' = f(t, y)` over `t_span`.
pub fn rk853_integrate<F>(
    f: F,
    y0: &[Complex64],
    t_span: (f64, f64),
    config: RkConfig,
) -> Result<Vec<Complex64>, OdeError>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let mut y = y0.to_vec();
    Dop853::new(y.len(), config)?.integrate(f, t_span.0, t_span.1, &mut y)?;
    Ok(y)
}
