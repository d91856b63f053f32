//! Real-argument elliptic kernel: the complete elliptic integral of the first
//! kind and the Jacobi functions sn, cn, dn.
//!
//! `K(k)` is computed from the arithmetic-geometric mean of `1` and the
//! complementary modulus `k'`; the Jacobi triple comes from the descending
//! Landen (Gauss) transformation driven by the same AGM sequence. Both
//! converge quadratically, so a handful of iterations reaches machine
//! precision for every modulus in `[0, 1)`.
//!
//! The modulus carries `k'^2 = (1 - k)(1 + k)` computed once at construction.
//! Near `k = 1` (the regime of interest for slow beats) forming `1 - k*k`
//! directly would lose most significant digits.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Elliptic modulus `k` in `[0, 1]` with its complementary parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    kp2: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(format!(
                "elliptic modulus must lie in [0, 1], got {k}"
            )));
        }
        Ok(Self {
            k,
            kp2: (1.0 - k) * (1.0 + k),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `k'^2 = 1 - k^2`.
    pub fn complementary_squared(&self) -> f64 {
        self.kp2
    }

    /// `k' = sqrt(1 - k^2)`.
    pub fn complementary(&self) -> f64 {
        self.kp2.sqrt()
    }

    pub fn is_degenerate_hyperbolic(&self) -> bool {
        self.kp2 == 0.0
    }
}

/// Values of the three Jacobi elliptic functions at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jacobi {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

const AGM_MAX_ITER: usize = 40;

/// Quarter period `K(k)`.
///
/// Fails for `k = 1`, where the quarter period is infinite.
pub fn complete_elliptic_k(m: EllipticModulus) -> Result<f64> {
    if m.is_degenerate_hyperbolic() {
        return Err(Error::domain(
            "divergent quarter period: K(k) is infinite at k = 1",
        ));
    }
    let mut a = 1.0_f64;
    let mut b = m.complementary();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (a + b))
}

/// Jacobi `sn, cn, dn` at real argument `u`.
///
/// For `k < 1` the argument is first reduced modulo the real period `4K(k)`;
/// at `k = 1` the functions degenerate to `(tanh u, sech u, sech u)`.
pub fn jacobi_elliptic(u: f64, m: EllipticModulus) -> Result<Jacobi> {
    if !u.is_finite() {
        return Err(Error::domain(format!(
            "Jacobi functions need a finite argument, got {u}"
        )));
    }
    if m.is_degenerate_hyperbolic() {
        let sech = 1.0 / u.cosh();
        return Ok(Jacobi {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }
    let period = 4.0 * complete_elliptic_k(m)?;
    let reduced = u - period * (u / period).round();
    Ok(landen_descent(reduced, m.complementary_squared()))
}

/// Descending Landen transformation for `sn, cn, dn` with complementary
/// parameter `emc = k'^2 > 0`.
fn landen_descent(u: f64, kp2: f64) -> Jacobi {
    const CONVERGED: f64 = 1e-9;
    let mut a_seq = [0.0_f64; 16];
    let mut b_seq = [0.0_f64; 16];

    let mut emc = kp2;
    let mut a = 1.0_f64;
    let mut c = 1.0_f64;
    let mut last = 0;
    for i in 0..a_seq.len() {
        last = i;
        a_seq[i] = a;
        emc = emc.sqrt();
        b_seq[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CONVERGED * a {
            break;
        }
        emc *= a;
        a = c;
    }

    let phase = u * c;
    let mut sn = phase.sin();
    let mut cn = phase.cos();
    let mut dn = 1.0_f64;
    if sn != 0.0 {
        let mut ratio = cn / sn;
        c *= ratio;
        for i in (0..=last).rev() {
            let b = a_seq[i];
            ratio *= c;
            c *= dn;
            dn = (b_seq[i] + ratio) / (b + ratio);
            ratio = c / b;
        }
        let s = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { s } else { -s };
        cn = c * sn;
    }
    Jacobi { sn, cn, dn }
}
