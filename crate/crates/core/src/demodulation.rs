//! Lock-in extraction of a slow envelope from a carrier-modulated channel.
//!
//! The estimate at window centre `t_c` is `2 gain <x(t) r(t)>` where `r` is
//! `cos(omega t)` or `sin(omega t)` and the average is a trapezoid mean over a
//! rectangular window of width `W` centred on `t_c`. Samples closer than
//! `W/2` to either end are dropped.

use crate::error::{Error, Result};
use crate::model::DickeParams;
use crate::series::TimeSeries;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    Cos,
    Sin,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemodConfig {
    pub carrier_frequency: f64,
    pub window: f64,
    pub reference: Reference,
    pub gain: f64,
}

impl DemodConfig {
    /// One carrier period window, unit gain.
    pub fn one_period(carrier_frequency: f64, reference: Reference) -> Self {
        Self {
            carrier_frequency,
            window: 2.0 * PI / carrier_frequency,
            reference,
            gain: 1.0,
        }
    }

    /// Recovers `g0` from the `p` channel, `p = -sqrt(2 omega) g0 cos(omega t)`.
    pub fn condensate(params: &DickeParams) -> Self {
        Self {
            gain: -1.0 / (2.0 * params.omega()).sqrt(),
            ..Self::one_period(params.omega(), Reference::Cos)
        }
    }

    /// Recovers `S_y^env` from the `sy` channel.
    pub fn transverse_spin(params: &DickeParams) -> Self {
        Self::one_period(params.omega(), Reference::Sin)
    }
}

fn near_integer(x: f64) -> Option<usize> {
    let r = x.round();
    ((x - r).abs() <= 1e-6 * x.abs().max(1.0) && r >= 0.0).then_some(r as usize)
}

/// Validates the grid and returns the window length in samples.
fn window_samples(series: &TimeSeries, carrier_frequency: f64, window: f64) -> Result<usize> {
    let w = carrier_frequency;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::domain(format!(
            "carrier frequency must be positive, got {w}"
        )));
    }
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::domain(format!(
            "window must be positive, got {window}"
        )));
    }
    let dt = series
        .uniform_step()
        .ok_or_else(|| Error::domain("demodulation needs a uniform time grid"))?;
    let period = 2.0 * PI / w;
    if period / dt < 20.0 * (1.0 - 1e-9) {
        return Err(Error::domain(format!(
            "{:.3} samples per carrier period, need at least 20",
            period / dt
        )));
    }
    if near_integer(window / (0.5 * period)).is_none_or(|n| n == 0) {
        return Err(Error::domain(
            "window must span a whole number of carrier half-periods",
        ));
    }
    let m = near_integer(window / dt)
        .filter(|m| m % 2 == 0)
        .ok_or_else(|| Error::domain("window must span an even number of samples"))?;
    let duration = series.t()[series.len() - 1] - series.t()[0];
    if duration < 2.0 * window * (1.0 - 1e-9) {
        return Err(Error::domain(format!(
            "series spans {duration}, need at least two windows ({})",
            2.0 * window
        )));
    }
    Ok(m)
}

/// Centred trapezoid mean over `m + 1` samples, scaled by `scale`.
fn sliding_mean(t: &[f64], values: &[f64], m: usize, scale: f64, name: &str) -> TimeSeries {
    let half = m / 2;
    let mut out = TimeSeries::new(&[name]);
    let norm = scale / m as f64;
    for c in half..t.len() - half {
        let win = &values[c - half..=c + half];
        let inner: f64 = win[1..m].iter().sum();
        out.push(t[c], &[norm * (inner + 0.5 * (win[0] + win[m]))]);
    }
    out
}

/// Returns a series with one channel `<channel>_envelope`.
pub fn extract_envelope(
    series: &TimeSeries,
    channel: &str,
    cfg: &DemodConfig,
) -> Result<TimeSeries> {
    let x = series.require(channel)?;
    let m = window_samples(series, cfg.carrier_frequency, cfg.window)?;
    let w = cfg.carrier_frequency;
    let mixed: Vec<f64> = series
        .t()
        .iter()
        .zip(x)
        .map(|(&ti, &xi)| {
            let r = match cfg.reference {
                Reference::Cos => (w * ti).cos(),
                Reference::Sin => (w * ti).sin(),
            };
            xi * r
        })
        .collect();
    let name = format!("{channel}_envelope");
    Ok(sliding_mean(series.t(), &mixed, m, 2.0 * cfg.gain, &name))
}

/// Plain sliding mean over one carrier period; channel `<channel>_mean`.
pub fn fast_average(
    series: &TimeSeries,
    channel: &str,
    carrier_frequency: f64,
) -> Result<TimeSeries> {
    let x = series.require(channel)?;
    let m = window_samples(series, carrier_frequency, 2.0 * PI / carrier_frequency)?;
    Ok(sliding_mean(
        series.t(),
        x,
        m,
        1.0,
        &format!("{channel}_mean"),
    ))
}
