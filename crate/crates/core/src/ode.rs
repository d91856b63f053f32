//! Deterministic explicit integrators for autonomous systems.
//!
//! Both methods advance exactly onto a uniform output grid, so the sampled
//! trajectory depends only on the configuration and the initial state.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with fixed step `dt`.
    FixedRk4 { dt: f64 },
    /// Dormand-Prince 5(4) embedded pair with step control.
    AdaptiveRk45 { abs_tol: f64, rel_tol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub t_start: f64,
    pub t_end: f64,
    /// Output samples per fast carrier period (at least 20).
    pub samples_per_period: usize,
    /// Step attempts allowed over the whole span before giving up.
    pub max_steps: u64,
}

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

impl SolverConfig {
    pub fn adaptive(tol: f64, t_end: f64) -> Self {
        Self {
            method: Method::AdaptiveRk45 {
                abs_tol: tol,
                rel_tol: tol,
            },
            t_start: 0.0,
            t_end,
            samples_per_period: 40,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn fixed(dt: f64, t_end: f64) -> Self {
        Self {
            method: Method::FixedRk4 { dt },
            t_start: 0.0,
            t_end,
            samples_per_period: 40,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn starting_at(mut self, t_start: f64) -> Self {
        self.t_start = t_start;
        self
    }

    pub fn with_samples_per_period(mut self, n: usize) -> Self {
        self.samples_per_period = n;
        self
    }

    pub fn with_max_steps(mut self, n: u64) -> Self {
        self.max_steps = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::FixedRk4 { dt } => {
                if !(dt.is_finite() && dt > 0.0) {
                    return Err(Error::InvalidParameter {
                        field: "dt",
                        reason: format!("must be positive, got {dt}"),
                    });
                }
            }
            Method::AdaptiveRk45 { abs_tol, rel_tol } => {
                for (field, v) in [("abs_tol", abs_tol), ("rel_tol", rel_tol)] {
                    if !(v > 0.0 && v <= 1e-2) {
                        return Err(Error::InvalidParameter {
                            field,
                            reason: format!("must lie in (0, 1e-2], got {v}"),
                        });
                    }
                }
            }
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_end > self.t_start) {
            return Err(Error::InvalidParameter {
                field: "t_end",
                reason: format!("must exceed t_start = {}, got {}", self.t_start, self.t_end),
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                field: "max_steps",
                reason: "must be positive".into(),
            });
        }
        if self.samples_per_period < 20 {
            return Err(Error::InvalidParameter {
                field: "samples_per_period",
                reason: format!("must be at least 20, got {}", self.samples_per_period),
            });
        }
        Ok(())
    }

    /// Output spacing for a carrier of angular frequency `omega`.
    pub fn sample_interval(&self, omega: f64) -> f64 {
        std::f64::consts::TAU / omega / self.samples_per_period as f64
    }
}

/// Integrate `rhs` from `t0` to `t1` (either direction) and return the end state.
pub(crate) fn propagate<const N: usize>(
    rhs: &impl Fn(&[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    t1: f64,
    method: Method,
) -> Result<[f64; N]> {
    let mut stepper = Stepper::new(method, t1 - t0, DEFAULT_MAX_STEPS);
    stepper.advance(rhs, y0, t0, t1)
}

/// Integrate over the configured span and call `record` on every sample of
/// the grid `t_start + i * interval`.
pub(crate) fn sample<const N: usize>(
    rhs: &impl Fn(&[f64; N]) -> [f64; N],
    y0: [f64; N],
    cfg: &SolverConfig,
    interval: f64,
    mut record: impl FnMut(f64, &[f64; N]),
) -> Result<[f64; N]> {
    cfg.validate()?;
    let span = cfg.t_end - cfg.t_start;
    let n = (span / interval + 1e-9).floor() as usize;
    let mut stepper = Stepper::new(cfg.method, interval, cfg.max_steps);
    let mut y = y0;
    let mut t = cfg.t_start;
    record(t, &y);
    for i in 1..=n {
        let target = cfg.t_start + i as f64 * interval;
        y = stepper.advance(rhs, y, t, target)?;
        t = target;
        record(t, &y);
    }
    Ok(y)
}

struct Stepper {
    method: Method,
    /// Step proposal carried between calls (adaptive only), signed.
    h: f64,
    steps: u64,
    budget: u64,
}

impl Stepper {
    fn new(method: Method, span: f64, budget: u64) -> Self {
        let h = match method {
            Method::FixedRk4 { dt } => dt,
            Method::AdaptiveRk45 { .. } => 1e-3 * span.abs().max(1e-12),
        };
        Self {
            method,
            h,
            steps: 0,
            budget,
        }
    }

    fn charge(&mut self, n: u64, t: f64) -> Result<()> {
        self.steps += n;
        if self.steps > self.budget {
            return Err(Error::Integration {
                last_good_t: t,
                reason: format!("step budget of {} exhausted", self.budget),
            });
        }
        Ok(())
    }

    fn advance<const N: usize>(
        &mut self,
        rhs: &impl Fn(&[f64; N]) -> [f64; N],
        y: [f64; N],
        t0: f64,
        t1: f64,
    ) -> Result<[f64; N]> {
        if t1 == t0 {
            return Ok(y);
        }
        match self.method {
            Method::FixedRk4 { dt } => {
                let span = t1 - t0;
                let steps = (span.abs() / dt - 1e-9).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                self.charge(steps as u64, t0)?;
                let mut y = y;
                for _ in 0..steps {
                    y = rk4_step(rhs, &y, h);
                }
                check_finite(&y, t1)?;
                Ok(y)
            }
            Method::AdaptiveRk45 { abs_tol, rel_tol } => {
                self.advance_adaptive(rhs, y, t0, t1, abs_tol, rel_tol)
            }
        }
    }

    fn advance_adaptive<const N: usize>(
        &mut self,
        rhs: &impl Fn(&[f64; N]) -> [f64; N],
        mut y: [f64; N],
        t0: f64,
        t1: f64,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Result<[f64; N]> {
        let dir = (t1 - t0).signum();
        let mut h = self.h.abs() * dir;
        let mut t = t0;
        let mut k1 = rhs(&y);
        while (t1 - t) * dir > 0.0 {
            let remaining = t1 - t;
            let clipped = h.abs() >= remaining.abs();
            let step = if clipped { remaining } else { h };
            if step.abs() <= 1e-14 * t.abs().max(1.0) && !clipped {
                return Err(Error::Integration {
                    last_good_t: t,
                    reason: format!("step size underflow (h = {step:e})"),
                });
            }
            self.charge(1, t)?;
            let (y_new, k_last, err) = dopri_step(rhs, &y, &k1, step, abs_tol, rel_tol);
            if err.is_nan() {
                return Err(Error::Integration {
                    last_good_t: t,
                    reason: "non-finite state".into(),
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = if clipped { t1 } else { t + step };
                y = y_new;
                k1 = k_last;
                // keep the unclipped proposal so grid alignment does not shrink steps
                let proposal = if clipped {
                    h.abs().max(step.abs() * factor)
                } else {
                    step.abs() * factor
                };
                h = proposal * dir;
            } else {
                h = step.abs() * factor.min(1.0) * dir;
            }
        }
        self.h = h;
        check_finite(&y, t1)?;
        Ok(y)
    }
}

fn check_finite<const N: usize>(y: &[f64; N], t: f64) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration {
            last_good_t: t,
            reason: "non-finite state".into(),
        })
    }
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

fn rk4_step<const N: usize>(
    rhs: &impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = rhs(y);
    let k2 = rhs(&axpy(y, &[(0.5 * h, &k1)]));
    let k3 = rhs(&axpy(y, &[(0.5 * h, &k2)]));
    let k4 = rhs(&axpy(y, &[(h, &k3)]));
    axpy(
        y,
        &[
            (h / 6.0, &k1),
            (h / 3.0, &k2),
            (h / 3.0, &k3),
            (h / 6.0, &k4),
        ],
    )
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand-Prince step. Returns the fifth-order solution, the derivative
/// there (first stage of the next step) and the scaled error norm.
fn dopri_step<const N: usize>(
    rhs: &impl Fn(&[f64; N]) -> [f64; N],
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> ([f64; N], [f64; N], f64) {
    let k2 = rhs(&axpy(y, &[(h * A21, k1)]));
    let k3 = rhs(&axpy(y, &[(h * A31, k1), (h * A32, &k2)]));
    let k4 = rhs(&axpy(y, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]));
    let k5 = rhs(&axpy(
        y,
        &[
            (h * A51, k1),
            (h * A52, &k2),
            (h * A53, &k3),
            (h * A54, &k4),
        ],
    ));
    let k6 = rhs(&axpy(
        y,
        &[
            (h * A61, k1),
            (h * A62, &k2),
            (h * A63, &k3),
            (h * A64, &k4),
            (h * A65, &k5),
        ],
    ));
    let y_new = axpy(
        y,
        &[
            (h * B1, k1),
            (h * B3, &k3),
            (h * B4, &k4),
            (h * B5, &k5),
            (h * B6, &k6),
        ],
    );
    let k7 = rhs(&y_new);
    let mut err = 0.0_f64;
    for i in 0..N {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        err = err.max((e / scale).abs());
    }
    (y_new, k7, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |dt: f64| {
            let y = propagate(&oscillator, [1.0, 0.0], 0.0, 10.0, Method::FixedRk4 { dt }).unwrap();
            (y[0] - 10f64.cos()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn adaptive_meets_tolerance() {
        let y = propagate(
            &oscillator,
            [1.0, 0.0],
            0.0,
            20.0,
            Method::AdaptiveRk45 {
                abs_tol: 1e-11,
                rel_tol: 1e-11,
            },
        )
        .unwrap();
        assert!((y[0] - 20f64.cos()).abs() < 1e-9);
        assert!((y[1] + 20f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn backward_propagation() {
        let m = Method::AdaptiveRk45 {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
        };
        let fwd = propagate(&oscillator, [1.0, 0.0], 0.0, 7.0, m).unwrap();
        let back = propagate(&oscillator, fwd, 7.0, 0.0, m).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-10 && back[1].abs() < 1e-10);
    }

    #[test]
    fn sampled_grid_is_exact() {
        let cfg = SolverConfig::adaptive(1e-9, 1.0);
        let mut times = Vec::new();
        sample(&oscillator, [1.0, 0.0], &cfg, 0.125, |t, _| times.push(t)).unwrap();
        assert_eq!(times, (0..=8).map(|i| i as f64 * 0.125).collect::<Vec<_>>());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::fixed(0.0, 1.0).validate().is_err());
        assert!(SolverConfig::adaptive(0.1, 1.0).validate().is_err());
        assert!(SolverConfig::adaptive(1e-6, 0.0).validate().is_err());
        assert!(SolverConfig::adaptive(1e-6, 1.0)
            .with_samples_per_period(10)
            .validate()
            .is_err());
        assert!(SolverConfig::adaptive(1e-6, 1.0).validate().is_ok());
    }

    #[test]
    fn step_budget_is_enforced() {
        let rhs = |y: &[f64; 2]| [y[1], -y[0]];
        let cfg = SolverConfig::fixed(0.01, 10.0).with_max_steps(500);
        let err = sample(&rhs, [1.0, 0.0], &cfg, 0.1, |_, _| {}).unwrap_err();
        assert!(err.to_string().contains("budget"), "{err}");
        let cfg = SolverConfig::adaptive(1e-10, 10.0).with_max_steps(50);
        assert!(sample(&rhs, [1.0, 0.0], &cfg, 0.1, |_, _| {}).is_err());
        assert!(SolverConfig::adaptive(1e-10, 10.0)
            .with_max_steps(0)
            .validate()
            .is_err());
    }

    #[test]
    fn underflow_is_reported() {
        // finite-time blow-up y' = y^2 from y(0) = 1 at t = 1
        let rhs = |y: &[f64; 1]| [y[0] * y[0]];
        let err = propagate(
            &rhs,
            [1.0],
            0.0,
            2.0,
            Method::AdaptiveRk45 {
                abs_tol: 1e-8,
                rel_tol: 1e-8,
            },
        )
        .unwrap_err();
        match err {
            Error::Integration { last_good_t, .. } => {
                assert!(
                    last_good_t > 0.9 && last_good_t < 1.0 + 1e-6,
                    "{last_good_t}"
                )
            }
            other => panic!("unexpected {other}"),
        }
    }
}
