//! Averaged slow flow for the condensate envelope `g0`, its velocity and the
//! spin rotation angle.
//!
//! ```text
//! theta' = (g sqrt(2 omega) / 2) g0
//! g0''   = -(g^2 S omega / 4) g0 (C + g0^2 / S),     C = S_z/S - g0^2/S
//! (S_z/S)' = 2 g0 g0' / S
//! ```
//!
//! `S_z/S` is carried as its own coordinate (`polarization`). Along solutions
//! that keep the spin on the sphere of radius `S` it equals `cos(theta)`;
//! the dn branch of the exact solution keeps `|S| = k^2 S` instead, and there
//! only the polarization obeys the invariant. `C` is recomputed from the state
//! on every evaluation, so its drift measures integration error.

use crate::error::Result;
use crate::model::{CanonicalState, DickeParams};
use crate::ode::{self, SolverConfig};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeState {
    /// Condensate envelope amplitude.
    pub g0: f64,
    /// Time derivative of `g0`.
    pub v: f64,
    /// Spin rotation angle.
    pub theta: f64,
    /// Longitudinal polarization `S_z / S`.
    pub polarization: f64,
}

impl EnvelopeState {
    /// Envelope state of a spin on the sphere: polarization `cos(theta)`.
    pub fn on_sphere(g0: f64, v: f64, theta: f64) -> Self {
        Self {
            g0,
            v,
            theta,
            polarization: theta.cos(),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            g0: -self.g0,
            v: -self.v,
            theta: -self.theta,
            polarization: self.polarization,
        }
    }

    /// Full phase point at time `t` through the carrier/envelope ansatz.
    pub fn to_canonical(&self, t: f64, params: &DickeParams) -> CanonicalState {
        let w = params.omega();
        let s = params.s();
        let (sin_wt, cos_wt) = (w * t).sin_cos();
        let amp = (2.0 * w).sqrt();
        let p_dot = -amp * (self.v * cos_wt - w * self.g0 * sin_wt);
        let transverse = s * self.theta.sin();
        CanonicalState {
            q: -p_dot / (w * w),
            p: -amp * self.g0 * cos_wt,
            sx: transverse * cos_wt,
            sy: transverse * sin_wt,
            sz: s * self.theta.cos(),
        }
    }

    fn to_array(self) -> [f64; 4] {
        [self.g0, self.v, self.theta, self.polarization]
    }

    fn from_array(y: &[f64; 4]) -> Self {
        Self {
            g0: y[0],
            v: y[1],
            theta: y[2],
            polarization: y[3],
        }
    }
}

/// `C = S_z/S - g0^2/S`.
pub fn adiabatic_invariant(state: &EnvelopeState, params: &DickeParams) -> f64 {
    state.polarization - state.g0 * state.g0 / params.s()
}

/// Residual of the algebraic relation between `sin(theta)` and `g0'`:
/// `sin(theta) + 2 sqrt(2) g0' / (g S sqrt(omega))`, multiplied through by
/// `g S sqrt(omega)` to stay finite at `g = 0`, then divided back when `g > 0`.
pub fn slaving_residual(state: &EnvelopeState, params: &DickeParams) -> f64 {
    let scale = params.g() * params.s() * params.omega().sqrt();
    let cleared = scale * state.theta.sin() + 2.0 * std::f64::consts::SQRT_2 * state.v;
    if scale > 0.0 {
        cleared / scale
    } else {
        cleared
    }
}

pub fn envelope_rhs(state: &EnvelopeState, params: &DickeParams) -> EnvelopeState {
    let s = params.s();
    let c = adiabatic_invariant(state, params);
    let a2 = params.arg_rate() * params.arg_rate();
    EnvelopeState {
        g0: state.v,
        v: -a2 * state.g0 * (c + state.g0 * state.g0 / s),
        theta: params.rotation_rate() * state.g0,
        polarization: 2.0 * state.g0 * state.v / s,
    }
}

pub const ENVELOPE_CHANNELS: [&str; 6] = [
    "g0",
    "v",
    "theta",
    "polarization",
    "invariant_C",
    "slaving_residual",
];

pub fn integrate_envelope(
    initial: &EnvelopeState,
    params: &DickeParams,
    cfg: &SolverConfig,
) -> Result<TimeSeries> {
    let rhs = |y: &[f64; 4]| envelope_rhs(&EnvelopeState::from_array(y), params).to_array();
    let mut series = TimeSeries::new(&ENVELOPE_CHANNELS);
    ode::sample(
        &rhs,
        initial.to_array(),
        cfg,
        cfg.sample_interval(params.omega()),
        |t, y| {
            let st = EnvelopeState::from_array(y);
            series.push(
                t,
                &[
                    st.g0,
                    st.v,
                    st.theta,
                    st.polarization,
                    adiabatic_invariant(&st, params),
                    slaving_residual(&st, params),
                ],
            );
        },
    )?;
    Ok(series)
}
