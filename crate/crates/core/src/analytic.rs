//! Closed-form envelope solutions in terms of Jacobi elliptic functions.
//!
//! With `a = g sqrt(S omega) / 2` and `u = a t`:
//!
//! | case | invariant `C` | `g0`                  | `S_z`                 | transverse envelope |
//! |------|---------------|-----------------------|-----------------------|---------------------|
//! | cn   | `1 - 2k^2`    | `sqrt(2S) k cn(u)`    | `S (1 - 2k^2 sn^2)`   | `2kS sn dn`         |
//! | dn   | `k^2 - 2`     | `sqrt(2S) dn(u)`      | `S k^2 (1 - 2 sn^2)`  | `2k^2 S sn cn`      |
//!
//! The beat frequency is `Omega = pi a / K(k)`. The dn envelope and the cn
//! intensity `g0^2` repeat after `2 pi / Omega`; the cn envelope itself changes
//! sign over that interval and repeats only after twice as long.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{DickeParams, SolutionCase};
use crate::special_functions::{complete_elliptic_k, jacobi_elliptic, EllipticModulus, Jacobi};

/// Adiabatic invariant of a branch for a given modulus.
pub fn invariant_from_modulus(case: SolutionCase, modulus: EllipticModulus) -> f64 {
    let k2 = modulus.k() * modulus.k();
    match case {
        SolutionCase::CnCase => 1.0 - 2.0 * k2,
        SolutionCase::DnCase => k2 - 2.0,
    }
}

/// Inverse of [`invariant_from_modulus`].
pub fn modulus_from_invariant(c: f64, case: SolutionCase) -> Result<EllipticModulus> {
    let (lo, hi) = match case {
        SolutionCase::CnCase => (-1.0, 1.0),
        SolutionCase::DnCase => (-2.0, -1.0),
    };
    if !c.is_finite() || c < lo || c > hi {
        return Err(Error::domain(format!(
            "invariant C = {c} outside [{lo}, {hi}] admissible for the {case} branch"
        )));
    }
    let k = match case {
        SolutionCase::CnCase => (0.5 * (1.0 - c)).sqrt(),
        SolutionCase::DnCase => (c + 2.0).sqrt(),
    };
    EllipticModulus::new(k.min(1.0))
}

/// `Omega = omega pi g / (2 g_c K(k))`.
pub fn beat_frequency(params: &DickeParams, modulus: EllipticModulus) -> Result<f64> {
    if modulus.is_degenerate_hyperbolic() {
        return Err(Error::domain("infinite beat period at k = 1"));
    }
    let quarter = complete_elliptic_k(modulus)?;
    Ok(params.omega() * PI * params.g() / (2.0 * params.g_c() * quarter))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticWindow {
    /// Smallest modulus inside the slow-evolution window.
    pub threshold: f64,
    /// `k - threshold`.
    pub margin: f64,
    pub ok: bool,
    /// `Omega / omega`; `None` at `k = 1`.
    pub frequency_ratio: Option<f64>,
}

/// Slow-evolution window `1 - 2 exp(-(pi/2)(g/g_c)) <= k <= 1`.
pub fn adiabatic_window(params: &DickeParams, modulus: EllipticModulus) -> AdiabaticWindow {
    let threshold = 1.0 - 2.0 * (-0.5 * PI * params.coupling_ratio()).exp();
    let margin = modulus.k() - threshold;
    AdiabaticWindow {
        threshold,
        margin,
        ok: margin >= 0.0,
        frequency_ratio: beat_frequency(params, modulus)
            .ok()
            .map(|f| f / params.omega()),
    }
}

/// Slow variables of the exact solution at one instant, with time derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticPoint {
    pub g0: f64,
    pub g0_dot: f64,
    pub theta: f64,
    pub s_y_envelope: f64,
    pub s_y_envelope_dot: f64,
    pub s_z: f64,
    pub s_z_dot: f64,
}

impl AnalyticPoint {
    /// Condensate shift `lambda_R = -g0 cos(omega t)`.
    pub fn lambda_r(&self, omega: f64, t: f64) -> f64 {
        -self.g0 * (omega * t).cos()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticSolution {
    case: SolutionCase,
    modulus: EllipticModulus,
    params: DickeParams,
    arg_rate: f64,
}

impl AnalyticSolution {
    pub fn new(params: DickeParams, case: SolutionCase, modulus: EllipticModulus) -> Result<Self> {
        params.require_resonance()?;
        Ok(Self {
            case,
            modulus,
            params,
            arg_rate: params.arg_rate(),
        })
    }

    pub fn case(&self) -> SolutionCase {
        self.case
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }

    pub fn params(&self) -> &DickeParams {
        &self.params
    }

    pub fn arg_rate(&self) -> f64 {
        self.arg_rate
    }

    pub fn invariant(&self) -> f64 {
        invariant_from_modulus(self.case, self.modulus)
    }

    pub fn beat_frequency(&self) -> Result<f64> {
        beat_frequency(&self.params, self.modulus)
    }

    /// `2 pi / Omega`.
    pub fn beat_period(&self) -> Result<f64> {
        Ok(2.0 * PI / self.beat_frequency()?)
    }

    pub fn evaluate(&self, t: f64) -> AnalyticPoint {
        let a = self.arg_rate;
        let k = self.modulus.k();
        let k2 = k * k;
        let s = self.params.s();
        let amp = (2.0 * s).sqrt();
        let Jacobi { sn, cn, dn } = jacobi_elliptic(a * t, self.modulus).unwrap_or(Jacobi {
            sn: f64::NAN,
            cn: f64::NAN,
            dn: f64::NAN,
        });
        let s_z_dot = -4.0 * s * k2 * a * sn * cn * dn;
        let (g0, g0_dot, s_y, s_y_dot, s_z) = match self.case {
            SolutionCase::CnCase => (
                amp * k * cn,
                -amp * k * a * sn * dn,
                2.0 * k * s * sn * dn,
                2.0 * k * s * a * cn * (dn * dn - k2 * sn * sn),
                s * (1.0 - 2.0 * k2 * sn * sn),
            ),
            SolutionCase::DnCase => (
                amp * dn,
                -amp * k2 * a * sn * cn,
                2.0 * k2 * s * sn * cn,
                2.0 * k2 * s * a * dn * (cn * cn - sn * sn),
                s * k2 * (1.0 - 2.0 * sn * sn),
            ),
        };
        // dn branch at k = 0: the (S_z, S_y) pair vanishes and the spin is
        // frozen in the transverse plane.
        let theta = if self.case == SolutionCase::DnCase && k == 0.0 {
            0.5 * PI
        } else {
            (s_y / s).atan2(s_z / s)
        };
        AnalyticPoint {
            g0,
            g0_dot,
            theta,
            s_y_envelope: s_y,
            s_y_envelope_dot: s_y_dot,
            s_z,
            s_z_dot,
        }
    }
}
