//! Model parameters, static superradiant fixed points and construction of
//! phase points consistent with the carrier/envelope ansatz
//!
//! ```text
//! p   = -sqrt(2 omega) g0(t) cos(omega t)
//! S_z =  S cos(theta(t))
//! S_y =  S sin(theta(t)) sin(omega t)
//! S_x =  S sin(theta(t)) cos(omega t)
//! ```
//!
//! Units are natural (hbar = 1). The classical energy function is
//! `H = (p^2 + omega^2 q^2)/2 + g p S_y - E_J S_z`.

use std::fmt;
use std::str::FromStr;

use crate::analytic::AnalyticSolution;
use crate::envelope::EnvelopeState;
use crate::error::{Error, Result};
use crate::special_functions::EllipticModulus;

const RESONANCE_TOL: f64 = 1e-12;

/// Physical parameters of the semiclassical Dicke model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DickeParams {
    omega: f64,
    e_j: f64,
    g: f64,
    s: f64,
    g_c: f64,
}

impl DickeParams {
    pub fn new(omega: f64, e_j: f64, g: f64, s: f64) -> Result<Self> {
        positive("omega", omega)?;
        positive("e_j", e_j)?;
        positive("s", s)?;
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter {
                field: "g",
                reason: format!("must be finite and non-negative, got {g}"),
            });
        }
        Ok(Self {
            omega,
            e_j,
            g,
            s,
            g_c: (e_j / s).sqrt(),
        })
    }

    /// Same physics with the coupling replaced by `ratio * g_c`.
    pub fn with_coupling_ratio(&self, ratio: f64) -> Result<Self> {
        Self::new(self.omega, self.e_j, ratio * self.g_c, self.s)
    }

    pub fn with_coupling(&self, g: f64) -> Result<Self> {
        Self::new(self.omega, self.e_j, g, self.s)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn e_j(&self) -> f64 {
        self.e_j
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Critical coupling `sqrt(E_J / S)`.
    pub fn g_c(&self) -> f64 {
        self.g_c
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.g / self.g_c
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega - self.e_j).abs() <= RESONANCE_TOL * self.omega
    }

    pub fn require_resonance(&self) -> Result<()> {
        if self.is_resonant() {
            Ok(())
        } else {
            Err(Error::NotResonant {
                omega: self.omega,
                e_j: self.e_j,
            })
        }
    }

    /// Rate of the rotation angle per unit envelope: `theta' = rate * g0`.
    pub fn rotation_rate(&self) -> f64 {
        0.5 * self.g * (2.0 * self.omega).sqrt()
    }

    /// Argument scale of the elliptic solutions, `g sqrt(S omega) / 2`.
    pub fn arg_rate(&self) -> f64 {
        0.5 * self.g * (self.s * self.omega).sqrt()
    }

    /// Fast carrier period `2 pi / omega`.
    pub fn fast_period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be finite and positive, got {value}"),
        })
    }
}

/// Branch of the exact envelope solution, labelled by its adiabatic invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionCase {
    /// `C = 1 - 2k^2`, envelope `~ cn`.
    CnCase,
    /// `C = k^2 - 2`, envelope `~ dn`.
    DnCase,
}

impl fmt::Display for SolutionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionCase::CnCase => "cn",
            SolutionCase::DnCase => "dn",
        })
    }
}

impl FromStr for SolutionCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cn" => Ok(SolutionCase::CnCase),
            "dn" => Ok(SolutionCase::DnCase),
            other => Err(format!("unknown case `{other}` (expected `cn` or `dn`)")),
        }
    }
}

/// Time-independent solution with a frozen condensate and rotated spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticState {
    pub theta0: f64,
    pub lambda_r: f64,
}

impl StaticState {
    pub fn mirrored(&self) -> Self {
        Self {
            theta0: -self.theta0,
            lambda_r: -self.lambda_r,
        }
    }
}

/// Phase point of the first-order canonical system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalState {
    pub q: f64,
    pub p: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl CanonicalState {
    pub fn spin_norm_squared(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }

    pub(crate) fn to_array(self) -> [f64; 5] {
        [self.q, self.p, self.sx, self.sy, self.sz]
    }

    pub(crate) fn from_array(y: &[f64; 5]) -> Self {
        Self {
            q: y[0],
            p: y[1],
            sx: y[2],
            sy: y[3],
            sz: y[4],
        }
    }
}

/// Values and first derivatives for the second-order system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaperState {
    pub p: f64,
    pub p_dot: f64,
    pub sx: f64,
    pub sx_dot: f64,
    pub sy: f64,
    pub sy_dot: f64,
    pub sz: f64,
    pub sz_dot: f64,
}

impl PaperState {
    /// Oscillator coordinate implied by `p' = -omega^2 q`.
    pub fn implied_q(&self, params: &DickeParams) -> f64 {
        -self.p_dot / (params.omega * params.omega)
    }

    pub fn to_canonical(&self, params: &DickeParams) -> CanonicalState {
        CanonicalState {
            q: self.implied_q(params),
            p: self.p,
            sx: self.sx,
            sy: self.sy,
            sz: self.sz,
        }
    }

    pub(crate) fn to_array(self) -> [f64; 8] {
        [
            self.p,
            self.p_dot,
            self.sx,
            self.sx_dot,
            self.sy,
            self.sy_dot,
            self.sz,
            self.sz_dot,
        ]
    }

    pub(crate) fn from_array(y: &[f64; 8]) -> Self {
        Self {
            p: y[0],
            p_dot: y[1],
            sx: y[2],
            sx_dot: y[3],
            sy: y[4],
            sy_dot: y[5],
            sz: y[6],
            sz_dot: y[7],
        }
    }
}

/// The three mutually consistent representations of one initial condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialState {
    pub canonical: CanonicalState,
    pub paper: PaperState,
    pub envelope: EnvelopeState,
}

pub fn make_params(omega: f64, e_j: f64, g: f64, s: f64) -> Result<DickeParams> {
    DickeParams::new(omega, e_j, g, s)
}

/// Static solutions. Above the critical coupling the normal point is replaced
/// by a degenerate pair related by `(theta, lambda_r) -> (-theta, -lambda_r)`.
pub fn static_fixed_points(params: &DickeParams) -> Vec<StaticState> {
    if params.g <= params.g_c {
        return vec![StaticState {
            theta0: 0.0,
            lambda_r: 0.0,
        }];
    }
    let cos_theta = params.e_j / (params.g * params.g * params.s);
    let theta0 = cos_theta.acos();
    let sin_theta = theta0.sin();
    let first = StaticState {
        theta0,
        lambda_r: -params.g * params.s * sin_theta / (2.0 * params.omega).sqrt(),
    };
    vec![first, first.mirrored()]
}

/// Residuals of the `S_y` and `p` equations of motion for a frozen state
/// (`S_y = S sin theta`, `S_z = S cos theta`, `p = sqrt(2 omega) lambda_r`).
pub fn static_residuals(state: &StaticState, params: &DickeParams) -> [f64; 2] {
    let p = (2.0 * params.omega).sqrt() * state.lambda_r;
    let sy = params.s * state.theta0.sin();
    let sz = params.s * state.theta0.cos();
    [
        -params.e_j * params.e_j * sy - params.g * params.e_j * p * sz,
        -params.omega * params.omega * (p + params.g * sy),
    ]
}

/// Evaluate the exact solution of `case` at `t0` and express it as a
/// canonical phase point, a second-order state and an envelope state.
pub fn initial_state(
    params: &DickeParams,
    case: SolutionCase,
    modulus: EllipticModulus,
    t0: f64,
) -> Result<InitialState> {
    let solution = AnalyticSolution::new(*params, case, modulus)?;
    let point = solution.evaluate(t0);
    let s = params.s;
    let polarization = point.s_z / s;

    // In the dn branch the analytic (S_z, S_y) pair has length k^2 S; the
    // transverse component is completed onto the sphere of radius S.
    let (transverse, transverse_dot) =
        if case == SolutionCase::DnCase && !modulus.is_degenerate_hyperbolic() {
            let sign = if point.s_y_envelope >= 0.0 { 1.0 } else { -1.0 };
            let perp = sign * s * ((1.0 - polarization) * (1.0 + polarization)).sqrt();
            (perp, -point.s_z * point.s_z_dot / perp)
        } else {
            (point.s_y_envelope, point.s_y_envelope_dot)
        };

    let envelope = EnvelopeState {
        g0: point.g0,
        v: point.g0_dot,
        theta: transverse.atan2(point.s_z),
        polarization,
    };

    let omega = params.omega;
    let (sin_wt, cos_wt) = (omega * t0).sin_cos();
    let amp = (2.0 * omega).sqrt();
    let p = -amp * point.g0 * cos_wt;
    let p_dot = -amp * (point.g0_dot * cos_wt - omega * point.g0 * sin_wt);
    let sx = transverse * cos_wt;
    let sy = transverse * sin_wt;

    let canonical = CanonicalState {
        q: -p_dot / (omega * omega),
        p,
        sx,
        sy,
        sz: point.s_z,
    };
    let paper = PaperState {
        p,
        p_dot,
        sx,
        sx_dot: transverse_dot * cos_wt - omega * transverse * sin_wt,
        sy,
        sy_dot: transverse_dot * sin_wt + omega * transverse * cos_wt,
        sz: point.s_z,
        sz_dot: point.s_z_dot,
    };
    Ok(InitialState {
        canonical,
        paper,
        envelope,
    })
}

/// `H = (p^2 + omega^2 q^2)/2 + g p S_y - E_J S_z`.
pub fn classical_energy(state: &CanonicalState, params: &DickeParams) -> f64 {
    let w = params.omega;
    0.5 * (state.p * state.p + w * w * state.q * state.q) + params.g * state.p * state.sy
        - params.e_j * state.sz
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: f64) -> DickeParams {
        DickeParams::new(1.0, 1.0, g, 10.0).unwrap()
    }

    fn modulus(k: f64) -> EllipticModulus {
        EllipticModulus::new(k).unwrap()
    }

    #[test]
    fn derived_critical_coupling() {
        let p = params(0.5);
        assert!((p.g_c() - 0.1_f64.sqrt()).abs() < 1e-16);
        assert!((p.g_c() - 0.31623).abs() < 1e-5);
        assert!(p.is_resonant());
        assert!((p.g_c() * p.g_c() * p.s() - p.e_j()).abs() < 1e-15);
        assert!(params(0.0).g() == 0.0);
    }

    #[test]
    fn rejects_bad_fields() {
        let err = DickeParams::new(1.0, -1.0, 0.5, 10.0).unwrap_err();
        assert!(err.to_string().contains("e_j"));
        assert!(DickeParams::new(0.0, 1.0, 0.5, 10.0).is_err());
        assert!(DickeParams::new(1.0, 1.0, 0.5, 0.0).is_err());
        assert!(DickeParams::new(1.0, 1.0, -0.1, 10.0).is_err());
        assert!(DickeParams::new(f64::NAN, 1.0, 0.5, 10.0).is_err());
        assert!(!DickeParams::new(1.0, 1.1, 0.5, 10.0).unwrap().is_resonant());
    }

    #[test]
    fn normal_phase_fixed_point() {
        let p = params(0.1_f64.sqrt());
        assert_eq!(
            static_fixed_points(&p),
            vec![StaticState {
                theta0: 0.0,
                lambda_r: 0.0
            }]
        );
        assert_eq!(static_fixed_points(&params(0.1)).len(), 1);
    }

    #[test]
    fn superradiant_pair() {
        let p = params(2.0 * 0.1_f64.sqrt());
        let pts = static_fixed_points(&p);
        assert_eq!(pts.len(), 2);
        assert!((pts[0].theta0.cos() - 0.25).abs() < 1e-12);
        assert!((pts[0].theta0.sin() - 15f64.sqrt() / 4.0).abs() < 1e-12);
        assert_eq!(pts[1], pts[0].mirrored());
        assert_eq!(pts[1].mirrored(), pts[0]);
        for st in &pts {
            let [r5, r7] = static_residuals(st, &p);
            assert!(r5.abs() <= 1e-12 * p.s());
            assert!(r7.abs() <= 1e-12 * p.s());
            // coupling energy g p S_y is negative for both members
            let pval = (2.0 * p.omega()).sqrt() * st.lambda_r;
            assert!(p.g() * pval * p.s() * st.theta0.sin() < 0.0);
        }
    }

    #[test]
    fn static_angle_decreases_with_coupling() {
        let mut prev = 1.0;
        for i in 1..50 {
            let p = params(0.1_f64.sqrt() * (1.0 + 0.1 * i as f64));
            let c = static_fixed_points(&p)[0].theta0.cos();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn cn_initial_state_at_origin() {
        let p = params(0.6);
        let k = 0.7;
        let st = initial_state(&p, SolutionCase::CnCase, modulus(k), 0.0).unwrap();
        let s = p.s();
        assert!((st.envelope.g0 - (2.0 * s).sqrt() * k).abs() < 1e-14);
        assert_eq!(st.envelope.theta, 0.0);
        assert!((st.canonical.p + 2.0 * k * (s * p.omega()).sqrt()).abs() < 1e-13);
        assert_eq!(st.canonical.q, 0.0);
        assert_eq!(
            (st.canonical.sx, st.canonical.sy, st.canonical.sz),
            (0.0, 0.0, s)
        );
    }

    #[test]
    fn dn_initial_state_at_origin() {
        let p = params(0.6);
        let k = 0.8;
        let st = initial_state(&p, SolutionCase::DnCase, modulus(k), 0.0).unwrap();
        let s = p.s();
        assert!((st.envelope.g0 - (2.0 * s).sqrt()).abs() < 1e-14);
        assert!((st.envelope.theta.cos() - k * k).abs() < 1e-14);
        assert!((st.canonical.sz - s * k * k).abs() < 1e-13);
        assert_eq!(st.canonical.sy, 0.0);
        assert!((st.canonical.sx - s * (1.0 - k.powi(4)).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn zero_modulus_is_rest_point() {
        let p = params(0.6);
        let st = initial_state(&p, SolutionCase::CnCase, modulus(0.0), 0.0).unwrap();
        assert_eq!(st.envelope.g0, 0.0);
        assert_eq!(st.canonical.p, 0.0);
        assert_eq!(st.canonical.sz, p.s());
        assert!((classical_energy(&st.canonical, &p) + p.e_j() * p.s()).abs() < 1e-14);
    }

    #[test]
    fn requires_resonance() {
        let p = DickeParams::new(1.0, 1.2, 0.5, 10.0).unwrap();
        let err = initial_state(&p, SolutionCase::CnCase, modulus(0.5), 0.0).unwrap_err();
        assert!(err.to_string().contains("requires resonance"));
    }

    #[test]
    fn representations_agree() {
        let p = params(0.45);
        for case in [SolutionCase::CnCase, SolutionCase::DnCase] {
            for &k in &[0.3, 0.9, 1.0] {
                for &t0 in &[0.0, 0.37, 2.9, -5.1] {
                    let st = initial_state(&p, case, modulus(k), t0).unwrap();
                    let (c, pp) = (st.canonical, st.paper);
                    assert_eq!((pp.p, pp.sx, pp.sy, pp.sz), (c.p, c.sx, c.sy, c.sz));
                    assert!((c.spin_norm_squared() - p.s() * p.s()).abs() <= 1e-12 * p.s() * p.s());
                    let mapped = st.envelope.to_canonical(t0, &p);
                    for (a, b) in mapped.to_array().iter().zip(c.to_array()) {
                        assert!((a - b).abs() <= 1e-12 * p.s(), "{case} k={k} t0={t0}");
                    }
                }
            }
        }
    }

    #[test]
    fn energy_of_cn_initial_state() {
        let p = params(0.6);
        for &k in &[0.2, 0.5, 0.99] {
            let st = initial_state(&p, SolutionCase::CnCase, modulus(k), 0.0).unwrap();
            let expected = 2.0 * k * k * p.s() * p.omega() - p.e_j() * p.s();
            assert!((classical_energy(&st.canonical, &p) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn decoupled_energy_is_separable() {
        let p = params(0.0);
        let st = CanonicalState {
            q: 0.3,
            p: -1.2,
            sx: 1.0,
            sy: 4.0,
            sz: 2.0,
        };
        let expected = 0.5 * (1.44 + 0.09) - 2.0;
        assert!((classical_energy(&st, &p) - expected).abs() < 1e-15);
    }
}
