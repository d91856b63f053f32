//! Fast dynamics in two forms.
//!
//! * The second-order system as printed for the expectation values
//!   (`p, S_x, S_y, S_z` and their velocities, eight first-order equations).
//! * The canonical first-order system generated by the classical energy:
//!   the oscillator obeys Hamilton's equations and the spin precesses about
//!   `B = (0, g p, -E_J)`. This form conserves the energy and `|S|` exactly.
//!
//! The two share the `p` and `S_y` equations. The canonical system's `S_z`
//! and `S_x` accelerations contain extra `g omega^2 q` terms that the printed
//! system does not have.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::model::{classical_energy, CanonicalState, DickeParams, PaperState};
use crate::ode::{self, SolverConfig};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FastSystem {
    Paper,
    Canonical,
}

impl fmt::Display for FastSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FastSystem::Paper => "paper",
            FastSystem::Canonical => "canonical",
        })
    }
}

impl FromStr for FastSystem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "paper" => Ok(FastSystem::Paper),
            "canonical" => Ok(FastSystem::Canonical),
            other => Err(format!(
                "unknown system `{other}` (expected `paper` or `canonical`)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FastState {
    Canonical(CanonicalState),
    Paper(PaperState),
}

impl FastState {
    pub fn system(&self) -> FastSystem {
        match self {
            FastState::Canonical(_) => FastSystem::Canonical,
            FastState::Paper(_) => FastSystem::Paper,
        }
    }

    /// Canonical phase point; for the second-order state `q = -p'/omega^2`.
    pub fn canonical(&self, params: &DickeParams) -> CanonicalState {
        match self {
            FastState::Canonical(c) => *c,
            FastState::Paper(p) => p.to_canonical(params),
        }
    }
}

/// Time derivative of the second-order state.
pub fn derivatives_paper(state: &PaperState, params: &DickeParams) -> PaperState {
    let (w, ej, g) = (params.omega(), params.e_j(), params.g());
    let p = state.p;
    let g2p2 = g * g * p * p;
    PaperState {
        p: state.p_dot,
        p_dot: -w * w * (p + g * state.sy),
        sx: state.sx_dot,
        sx_dot: -ej * ej * state.sx - g2p2 * state.sx,
        sy: state.sy_dot,
        sy_dot: -ej * ej * state.sy - g * ej * p * state.sz,
        sz: state.sz_dot,
        sz_dot: -g2p2 * state.sz - g * ej * p * state.sy,
    }
}

/// Time derivative of the canonical phase point.
pub fn derivatives_canonical(state: &CanonicalState, params: &DickeParams) -> CanonicalState {
    let (w, ej, g) = (params.omega(), params.e_j(), params.g());
    CanonicalState {
        q: state.p + g * state.sy,
        p: -w * w * state.q,
        sx: -ej * state.sy - g * state.p * state.sz,
        sy: ej * state.sx,
        sz: g * state.p * state.sx,
    }
}

impl PaperState {
    /// Second-order state whose velocities are the canonical derivatives.
    pub fn from_canonical(c: &CanonicalState, params: &DickeParams) -> Self {
        let d = derivatives_canonical(c, params);
        PaperState {
            p: c.p,
            p_dot: d.p,
            sx: c.sx,
            sx_dot: d.sx,
            sy: c.sy,
            sy_dot: d.sy,
            sz: c.sz,
            sz_dot: d.sz,
        }
    }
}

pub const FAST_CHANNELS: [&str; 7] = ["p", "q", "sx", "sy", "sz", "energy", "spin_norm"];

/// Integrate the fast system selected by the variant of `initial`.
///
/// Channels: `p, q, sx, sy, sz, energy, spin_norm`. For the second-order
/// system `q` is the implied coordinate `-p'/omega^2`.
pub fn integrate(
    initial: &FastState,
    params: &DickeParams,
    cfg: &SolverConfig,
) -> Result<TimeSeries> {
    let mut series = TimeSeries::new(&FAST_CHANNELS);
    let interval = cfg.sample_interval(params.omega());
    let mut push = |t: f64, c: CanonicalState| {
        series.push(
            t,
            &[
                c.p,
                c.q,
                c.sx,
                c.sy,
                c.sz,
                classical_energy(&c, params),
                c.spin_norm_squared().sqrt(),
            ],
        );
    };
    match initial {
        FastState::Canonical(c) => {
            let rhs = canonical_rhs(params);
            ode::sample(&rhs, c.to_array(), cfg, interval, |t, y| {
                push(t, CanonicalState::from_array(y))
            })?;
        }
        FastState::Paper(p) => {
            let rhs = paper_rhs(params);
            ode::sample(&rhs, p.to_array(), cfg, interval, |t, y| {
                push(t, PaperState::from_array(y).to_canonical(params))
            })?;
        }
    }
    Ok(series)
}

/// Advance a state by `duration` (negative runs backward) without sampling.
pub fn propagate(
    initial: &FastState,
    params: &DickeParams,
    method: ode::Method,
    duration: f64,
) -> Result<FastState> {
    Ok(match initial {
        FastState::Canonical(c) => {
            let y = ode::propagate(&canonical_rhs(params), c.to_array(), 0.0, duration, method)?;
            FastState::Canonical(CanonicalState::from_array(&y))
        }
        FastState::Paper(p) => {
            let y = ode::propagate(&paper_rhs(params), p.to_array(), 0.0, duration, method)?;
            FastState::Paper(PaperState::from_array(&y))
        }
    })
}

fn canonical_rhs(params: &DickeParams) -> impl Fn(&[f64; 5]) -> [f64; 5] + '_ {
    move |y| derivatives_canonical(&CanonicalState::from_array(y), params).to_array()
}

fn paper_rhs(params: &DickeParams) -> impl Fn(&[f64; 8]) -> [f64; 8] + '_ {
    move |y| derivatives_paper(&PaperState::from_array(y), params).to_array()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{initial_state, SolutionCase};
    use crate::ode::Method;
    use crate::special_functions::EllipticModulus;
    use std::f64::consts::TAU;

    fn params(g: f64) -> DickeParams {
        DickeParams::new(1.0, 1.0, g, 10.0).unwrap()
    }

    fn sample_state() -> CanonicalState {
        CanonicalState {
            q: 0.4,
            p: -1.3,
            sx: 2.0,
            sy: -3.0,
            sz: 8.0,
        }
    }

    #[test]
    fn decoupled_paper_oscillator() {
        let st = PaperState {
            p: 1.5,
            p_dot: 0.2,
            sx: 0.0,
            sx_dot: 0.0,
            sy: 0.0,
            sy_dot: 0.0,
            sz: 10.0,
            sz_dot: 0.0,
        };
        let d = derivatives_paper(&st, &params(0.0));
        assert_eq!(d.p_dot, -1.5);
        assert_eq!(d.sz_dot, 0.0);
    }

    #[test]
    fn paper_at_zero_momentum() {
        let st = PaperState {
            p: 0.0,
            p_dot: 0.0,
            sx: 1.0,
            sx_dot: 0.0,
            sy: 2.0,
            sy_dot: 0.0,
            sz: 9.0,
            sz_dot: 0.0,
        };
        let d = derivatives_paper(&st, &params(0.6));
        assert_eq!(d.sy_dot, -2.0);
        assert_eq!(d.sz_dot, 0.0);
    }

    #[test]
    fn canonical_implies_shared_second_order_equations() {
        let p = params(0.6);
        let c = sample_state();
        let d = derivatives_canonical(&c, &p);
        // p'' = -omega^2 q' = -omega^2 (p + g S_y)
        let p_ddot = -p.omega().powi(2) * d.q;
        let expected = -p.omega().powi(2) * (c.p + p.g() * c.sy);
        assert!((p_ddot - expected).abs() < 1e-14);
        // S_y'' = E_J S_x' = -E_J^2 S_y - g E_J p S_z
        let sy_ddot = p.e_j() * d.sx;
        let expected = -p.e_j().powi(2) * c.sy - p.g() * p.e_j() * c.p * c.sz;
        assert!((sy_ddot - expected).abs() < 1e-13);
        let paper = derivatives_paper(&PaperState::from_canonical(&c, &p), &p);
        assert!((paper.p_dot - p_ddot).abs() < 1e-14);
        assert!((paper.sy_dot - sy_ddot).abs() < 1e-13);
    }

    #[test]
    fn decoupled_spin_precesses() {
        let p = params(0.0);
        let c = sample_state();
        let d = derivatives_canonical(&c, &p);
        assert_eq!((d.sx, d.sy, d.sz), (3.0, 2.0, 0.0));
        assert_eq!(d.p, -0.4);
    }

    #[test]
    fn paper_derivative_matches_trajectory_differences() {
        let p = params(0.6);
        let init = initial_state(
            &p,
            SolutionCase::CnCase,
            EllipticModulus::new(0.9).unwrap(),
            0.0,
        )
        .unwrap();
        let fast = FastState::Paper(init.paper);
        let m = Method::AdaptiveRk45 {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
        };
        let h = 1e-3;
        let (FastState::Paper(fwd), FastState::Paper(back)) = (
            propagate(&fast, &p, m, h).unwrap(),
            propagate(&fast, &p, m, -h).unwrap(),
        ) else {
            unreachable!()
        };
        let d = derivatives_paper(&init.paper, &p);
        let fd_sz = (fwd.sz_dot - back.sz_dot) / (2.0 * h);
        let fd_p = (fwd.p_dot - back.p_dot) / (2.0 * h);
        assert!((fd_sz - d.sz_dot).abs() < 1e-5 * d.sz_dot.abs().max(1.0));
        assert!((fd_p - d.p_dot).abs() < 1e-5 * d.p_dot.abs().max(1.0));
    }

    #[test]
    fn free_oscillator_matches_closed_form() {
        let p = params(0.0);
        let period = TAU;
        let init = FastState::Canonical(CanonicalState {
            q: 0.0,
            p: 1.0,
            sx: 0.0,
            sy: 0.0,
            sz: 10.0,
        });
        let cfg = SolverConfig::fixed(period / 1000.0, 10.0 * period);
        let ts = integrate(&init, &p, &cfg).unwrap();
        let max_err = ts
            .t()
            .iter()
            .zip(ts.channel("p").unwrap())
            .map(|(t, v)| (v - t.cos()).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-9, "{max_err}");
    }

    #[test]
    fn rk4_convergence_order() {
        let p = params(0.0);
        let init = FastState::Canonical(CanonicalState {
            q: 0.0,
            p: 1.0,
            sx: 0.0,
            sy: 0.0,
            sz: 10.0,
        });
        // end off a whole period so the phase error shows in p
        let t_end = 5.25 * TAU;
        let err = |dt: f64| match propagate(&init, &p, Method::FixedRk4 { dt }, t_end).unwrap() {
            FastState::Canonical(c) => (c.p - t_end.cos()).abs(),
            _ => unreachable!(),
        };
        let ratio = err(TAU / 100.0) / err(TAU / 200.0);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn time_reversal() {
        let m = Method::FixedRk4 { dt: TAU / 2000.0 };
        // the printed system is only smooth well below the critical coupling
        for (ratio, paper) in [(1.9, false), (0.05, true)] {
            let p = params(0.0).with_coupling_ratio(ratio).unwrap();
            let init = initial_state(
                &p,
                SolutionCase::CnCase,
                EllipticModulus::new(0.7).unwrap(),
                0.0,
            )
            .unwrap();
            let start = if paper {
                FastState::Paper(init.paper)
            } else {
                FastState::Canonical(init.canonical)
            };
            let fwd = propagate(&start, &p, m, 3.0 * TAU).unwrap();
            let back = propagate(&fwd, &p, m, -3.0 * TAU).unwrap();
            let (a, b) = (
                start.canonical(&p).to_array(),
                back.canonical(&p).to_array(),
            );
            let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max);
            for (x, y) in a.iter().zip(b) {
                assert!(
                    (x - y).abs() <= 1e-8 * scale,
                    "{:?} {x} {y}",
                    start.system()
                );
            }
        }
    }

    #[test]
    fn canonical_conserves_energy_and_spin() {
        let p = params(0.6);
        let init = initial_state(
            &p,
            SolutionCase::CnCase,
            EllipticModulus::new(0.95).unwrap(),
            0.0,
        )
        .unwrap();
        let cfg = SolverConfig::adaptive(1e-12, 20.0 * TAU);
        let ts = integrate(&FastState::Canonical(init.canonical), &p, &cfg).unwrap();
        for name in ["energy", "spin_norm"] {
            let ch = ts.channel(name).unwrap();
            let drift = ch.iter().map(|v| (v - ch[0]).abs()).fold(0.0, f64::max) / ch[0].abs();
            assert!(drift <= 1e-9, "{name} drift {drift}");
        }
    }

    #[test]
    fn system_names() {
        assert_eq!("paper".parse::<FastSystem>().unwrap(), FastSystem::Paper);
        assert_eq!(FastSystem::Canonical.to_string(), "canonical");
        assert!("other".parse::<FastSystem>().is_err());
    }
}
