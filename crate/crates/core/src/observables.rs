//! Cavity observables. All vectors are parallel to the polarization `eps`, so
//! every quantity here is the scalar projection on `eps`.

use crate::error::{Error, Result};
use crate::model::{CanonicalState, DickeParams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityGeometry {
    /// Cavity volume `V`.
    pub volume: f64,
    /// Effective junction thickness `l`.
    pub thickness: f64,
    /// Pair charge `2e`.
    pub charge: f64,
}

impl Default for CavityGeometry {
    fn default() -> Self {
        Self {
            volume: 1.0,
            thickness: 1.0,
            charge: 1.0,
        }
    }
}

impl CavityGeometry {
    pub fn new(volume: f64, thickness: f64, charge: f64) -> Result<Self> {
        for (field, v) in [("volume", volume), ("thickness", thickness)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    field,
                    reason: format!("must be finite and positive, got {v}"),
                });
            }
        }
        if !charge.is_finite() {
            return Err(Error::InvalidParameter {
                field: "charge",
                reason: format!("must be finite, got {charge}"),
            });
        }
        Ok(Self {
            volume,
            thickness,
            charge,
        })
    }
}

/// Slowly varying amplitude of the field, `2 sqrt(omega / V) g0`.
pub fn electric_field_envelope(g0: f64, params: &DickeParams, geom: &CavityGeometry) -> f64 {
    2.0 * (params.omega() / geom.volume).sqrt() * g0
}

/// `E(t) = 2 sqrt(omega / V) g0(t) cos(omega t)`.
pub fn electric_field(t: f64, g0: f64, params: &DickeParams, geom: &CavityGeometry) -> f64 {
    electric_field_envelope(g0, params, geom) * (params.omega() * t).cos()
}

/// `d(t) = 2e l S_y^env(t) sin(omega t)`.
pub fn dipole_moment(
    t: f64,
    s_y_envelope: f64,
    params: &DickeParams,
    geom: &CavityGeometry,
) -> f64 {
    geom.charge * geom.thickness * s_y_envelope * (params.omega() * t).sin()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBreakdown {
    pub photon: f64,
    /// `-E . d`
    pub dipole_coupling: f64,
    /// `-E_J S_z`
    pub zeeman: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnergySource {
    /// Instantaneous phase point of a fast trajectory.
    Canonical(CanonicalState),
    /// Slow variables; photon energy is the fast-period average `omega g0^2`.
    Envelope {
        g0: f64,
        s_y_envelope: f64,
        s_z: f64,
    },
}

pub fn energy_breakdown(
    t: f64,
    source: &EnergySource,
    params: &DickeParams,
    geom: &CavityGeometry,
) -> EnergyBreakdown {
    let w = params.omega();
    match *source {
        EnergySource::Canonical(c) => {
            // g0 cos(omega t) = -p / sqrt(2 omega), S_y^env sin(omega t) = S_y
            let field = -(2.0 / geom.volume).sqrt() * c.p;
            let dipole = geom.charge * geom.thickness * c.sy;
            EnergyBreakdown {
                photon: 0.5 * (c.p * c.p + w * w * c.q * c.q),
                dipole_coupling: -field * dipole,
                zeeman: -params.e_j() * c.sz,
            }
        }
        EnergySource::Envelope {
            g0,
            s_y_envelope,
            s_z,
        } => EnergyBreakdown {
            photon: w * g0 * g0,
            dipole_coupling: -electric_field(t, g0, params, geom)
                * dipole_moment(t, s_y_envelope, params, geom),
            zeeman: -params.e_j() * s_z,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::AnalyticSolution;
    use crate::model::SolutionCase;
    use crate::special_functions::{complete_elliptic_k, EllipticModulus};
    use std::f64::consts::PI;

    fn params(g: f64) -> DickeParams {
        DickeParams::new(1.0, 1.0, g, 10.0).unwrap()
    }

    fn sol(case: SolutionCase, k: f64) -> AnalyticSolution {
        AnalyticSolution::new(params(0.6), case, EllipticModulus::new(k).unwrap()).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(CavityGeometry::new(0.0, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, -1.0, 1.0).is_err());
        assert_eq!(
            CavityGeometry::new(1.0, 1.0, 1.0).unwrap(),
            CavityGeometry::default()
        );
    }

    #[test]
    fn field_values() {
        let p = params(0.6);
        let geom = CavityGeometry::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(electric_field(0.3, 0.0, &p, &geom), 0.0);
        let k = 0.9;
        let g0 = sol(SolutionCase::CnCase, k).evaluate(0.0).g0;
        let expected = 2.0 * (1.0f64 / 2.0).sqrt() * 20f64.sqrt() * k;
        assert!((electric_field(0.0, g0, &p, &geom) - expected).abs() < 1e-13);
        assert!(electric_field(PI / 2.0, 3.0, &p, &geom).abs() < 1e-15);
    }

    #[test]
    fn dipole_values() {
        let p = params(0.6);
        let geom = CavityGeometry::default();
        assert_eq!(dipole_moment(0.0, 5.0, &p, &geom), 0.0);
        let k = 0.8;
        let s = sol(SolutionCase::CnCase, k);
        let quarter = complete_elliptic_k(s.modulus()).unwrap() / s.arg_rate();
        let d = dipole_moment(PI / 2.0, s.evaluate(quarter).s_y_envelope, &p, &geom);
        let kp = s.modulus().complementary();
        assert!((d.abs() - 10.0 * 2.0 * k * kp).abs() < 1e-12);
        let s0 = sol(SolutionCase::CnCase, 0.0);
        for i in 0..20 {
            let t = 0.7 * i as f64;
            assert_eq!(
                dipole_moment(t, s0.evaluate(t).s_y_envelope, &p, &geom),
                0.0
            );
        }
    }

    #[test]
    fn zeeman_excursion() {
        let p = params(0.6);
        let geom = CavityGeometry::default();
        let k = 0.7;
        let s = sol(SolutionCase::CnCase, k);
        let at = |t: f64| {
            let pt = s.evaluate(t);
            energy_breakdown(
                t,
                &EnergySource::Envelope {
                    g0: pt.g0,
                    s_y_envelope: pt.s_y_envelope,
                    s_z: pt.s_z,
                },
                &p,
                &geom,
            )
        };
        assert_eq!(at(0.0).zeeman, -10.0);
        let quarter = complete_elliptic_k(s.modulus()).unwrap() / s.arg_rate();
        assert!((at(quarter).zeeman + 10.0 * (1.0 - 2.0 * k * k)).abs() < 1e-12);
    }

    #[test]
    fn decoupled_has_no_coupling_energy() {
        let p = params(0.0);
        let geom = CavityGeometry::default();
        let st = CanonicalState {
            q: 0.2,
            p: 1.0,
            sx: 0.0,
            sy: 0.0,
            sz: 10.0,
        };
        let e = energy_breakdown(0.4, &EnergySource::Canonical(st), &p, &geom);
        assert_eq!(e.dipole_coupling, 0.0);
    }

    #[test]
    fn canonical_coupling_matches_hamiltonian_sign() {
        // -E.d = 2e l sqrt(2/V) p S_y, same sign as g p S_y
        let p = params(0.6);
        let geom = CavityGeometry::default();
        let st = CanonicalState {
            q: 0.0,
            p: -2.0,
            sx: 1.0,
            sy: 3.0,
            sz: 9.0,
        };
        let e = energy_breakdown(0.0, &EnergySource::Canonical(st), &p, &geom);
        assert!((e.dipole_coupling - 2f64.sqrt() * (-2.0) * 3.0).abs() < 1e-13);
        assert!((e.photon - 2.0).abs() < 1e-15);
    }

    #[test]
    fn envelopes_flip_sign_each_beat_period() {
        let s = sol(SolutionCase::CnCase, 0.9);
        let shift = s.beat_period().unwrap();
        for i in 0..50 {
            let t = -3.0 + 0.37 * i as f64;
            let (a, b) = (s.evaluate(t), s.evaluate(t + shift));
            assert!((a.g0 + b.g0).abs() <= 1e-10);
            assert!((a.s_y_envelope + b.s_y_envelope).abs() <= 1e-10);
        }
    }

    #[test]
    fn case_energies_converge_as_k_to_one() {
        let p = params(0.6);
        let geom = CavityGeometry::default();
        let max_gap = |k: f64| {
            let (a, b) = (sol(SolutionCase::CnCase, k), sol(SolutionCase::DnCase, k));
            (0..200)
                .map(|i| {
                    let t = -5.0 + 0.05 * i as f64;
                    let e = |s: &AnalyticSolution| {
                        let pt = s.evaluate(t);
                        energy_breakdown(
                            t,
                            &EnergySource::Envelope {
                                g0: pt.g0,
                                s_y_envelope: pt.s_y_envelope,
                                s_z: pt.s_z,
                            },
                            &p,
                            &geom,
                        )
                    };
                    let (x, y) = (e(&a), e(&b));
                    (x.photon - y.photon)
                        .abs()
                        .max((x.dipole_coupling - y.dipole_coupling).abs())
                        .max((x.zeeman - y.zeeman).abs())
                })
                .fold(0.0, f64::max)
        };
        let gaps: Vec<f64> = [0.9, 0.99, 0.999, 0.9999]
            .iter()
            .map(|&k| max_gap(k))
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[3] < 1e-2);
    }
}
