//! Mode dispatch and artifact emission.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analytic::{adiabatic_window, invariant_from_modulus, AnalyticSolution};
use crate::demodulation::{extract_envelope, DemodConfig};
use crate::envelope::integrate_envelope;
use crate::error::{Error, Result};
use crate::full_dynamics::{integrate, FastState, FastSystem};
use crate::harness::config::{Mode, RunConfig, ScanParam};
use crate::harness::output::{emit_csv, format_value};
use crate::harness::report::ValidationReport;
use crate::harness::svg::{write_svg, Panel, Stroke, Trace};
use crate::harness::validation::{self, analytic_series, Suite};
use crate::model::{initial_state, DickeParams};
use crate::ode::SolverConfig;
use crate::series::TimeSeries;
use crate::special_functions::EllipticModulus;

#[derive(Debug)]
pub struct RunOutcome {
    /// Main data file of the run (the golden candidate).
    pub primary: PathBuf,
    pub artifacts: Vec<PathBuf>,
    pub report: Option<ValidationReport>,
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    match cfg.mode {
        Mode::Full => run_full(cfg, out_dir),
        Mode::Envelope => run_envelope(cfg, out_dir),
        Mode::Analytic => run_analytic(cfg, out_dir),
        Mode::Validate => run_validate(cfg, out_dir),
        Mode::Scan => run_scan(cfg, out_dir),
    }
}

fn trace<'a>(ts: &'a TimeSeries, label: &'a str, stroke: Stroke) -> Result<Trace<'a>> {
    Ok(Trace {
        label,
        t: ts.t(),
        y: ts.require(label)?,
        stroke,
    })
}

fn run_full(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let p = cfg.params;
    let modulus = cfg.modulus()?;
    let init = initial_state(&p, cfg.case, modulus, cfg.solver.t_start)?;
    let start = match cfg.system {
        FastSystem::Canonical => FastState::Canonical(init.canonical),
        FastSystem::Paper => FastState::Paper(init.paper),
    };
    let mut ts = integrate(&start, &p, &cfg.solver)?;
    let field_gain = -(2.0 / cfg.geometry.volume).sqrt();
    let dipole_gain = cfg.geometry.charge * cfg.geometry.thickness;
    let e: Vec<f64> = ts.require("p")?.iter().map(|v| field_gain * v).collect();
    let d: Vec<f64> = ts.require("sy")?.iter().map(|v| dipole_gain * v).collect();
    ts.add_channel("E", e);
    ts.add_channel("d", d);

    let primary = out.join("full.csv");
    emit_csv(&ts, &primary)?;
    let mut artifacts = vec![primary.clone()];

    let g0 = extract_envelope(&ts, "p", &DemodConfig::condensate(&p))?;
    let sy = extract_envelope(&ts, "sy", &DemodConfig::transverse_spin(&p))?;
    let sol = AnalyticSolution::new(p, cfg.case, modulus)?;
    let mut env = TimeSeries::new(&["g0", "s_y_envelope", "g0_analytic", "E_envelope"]);
    let amp = 2.0 * (p.omega() / cfg.geometry.volume).sqrt();
    for (i, &t) in g0.t().iter().enumerate() {
        let g = g0.require("p_envelope")?[i];
        env.push(
            t,
            &[
                g,
                sy.require("sy_envelope")?[i],
                sol.evaluate(t).g0,
                amp * g,
            ],
        );
    }
    let env_path = out.join("full_envelope.csv");
    emit_csv(&env, &env_path)?;
    artifacts.push(env_path);

    let svg = out.join("full.svg");
    write_svg(
        &[
            Panel {
                title: "cavity field E (solid) and demodulated envelope (dashed)",
                traces: vec![
                    trace(&ts, "E", Stroke::Solid)?,
                    trace(&env, "E_envelope", Stroke::Dashed)?,
                ],
            },
            Panel {
                title: "condensate envelope g0: demodulated (solid), exact (dashed)",
                traces: vec![
                    trace(&env, "g0", Stroke::Solid)?,
                    trace(&env, "g0_analytic", Stroke::Dashed)?,
                ],
            },
            Panel {
                title: "pseudo-spin S_z",
                traces: vec![trace(&ts, "sz", Stroke::Solid)?],
            },
        ],
        &svg,
    )?;
    artifacts.push(svg);
    Ok(RunOutcome {
        primary,
        artifacts,
        report: None,
    })
}

fn run_envelope(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let p = cfg.params;
    let init = initial_state(&p, cfg.case, cfg.modulus()?, cfg.solver.t_start)?;
    let ts = integrate_envelope(&init.envelope, &p, &cfg.solver)?;
    let primary = out.join("envelope.csv");
    emit_csv(&ts, &primary)?;
    let svg = out.join("envelope.svg");
    write_svg(
        &[
            Panel {
                title: "condensate envelope g0",
                traces: vec![trace(&ts, "g0", Stroke::Dashed)?],
            },
            Panel {
                title: "polarization S_z/S and invariant C",
                traces: vec![
                    trace(&ts, "polarization", Stroke::Solid)?,
                    trace(&ts, "invariant_C", Stroke::Dashed)?,
                ],
            },
        ],
        &svg,
    )?;
    Ok(RunOutcome {
        artifacts: vec![primary.clone(), svg],
        primary,
        report: None,
    })
}

fn field_panels(ts: &TimeSeries) -> Result<Vec<Panel<'_>>> {
    Ok(vec![
        Panel {
            title: "cavity field E (solid) with envelope (dashed)",
            traces: vec![
                trace(ts, "E", Stroke::Solid)?,
                trace(ts, "E_envelope", Stroke::Dashed)?,
            ],
        },
        Panel {
            title: "dipole moment d (solid) with envelope (dashed)",
            traces: vec![
                trace(ts, "d", Stroke::Solid)?,
                trace(ts, "d_envelope", Stroke::Dashed)?,
            ],
        },
        Panel {
            title: "Zeeman energy -E_J S_z",
            traces: vec![trace(ts, "zeeman", Stroke::Solid)?],
        },
    ])
}

fn run_analytic(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let sol = AnalyticSolution::new(cfg.params, cfg.case, cfg.modulus()?)?;
    let ts = analytic_series(&sol, &cfg.geometry, &cfg.solver);
    let primary = out.join("analytic.csv");
    emit_csv(&ts, &primary)?;
    let svg = out.join("analytic.svg");
    write_svg(&field_panels(&ts)?, &svg)?;
    Ok(RunOutcome {
        artifacts: vec![primary.clone(), svg],
        primary,
        report: None,
    })
}

fn run_validate(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let suite = Suite::from_config(cfg)?;
    let figs = validation::figures(&suite);
    let mut artifacts = Vec::new();
    if let Ok(f) = &figs {
        let (fc, fs) = (
            out.join("validate_field.csv"),
            out.join("validate_field.svg"),
        );
        emit_csv(&f.field, &fc)?;
        write_svg(&field_panels(&f.field)?, &fs)?;
        let (ec, es) = (
            out.join("validate_energy.csv"),
            out.join("validate_energy.svg"),
        );
        emit_csv(&f.energy, &ec)?;
        write_svg(
            &[Panel {
                title: "fast-period means: photon, -E.d, -E_J S_z",
                traces: vec![
                    trace(&f.energy, "photon_mean", Stroke::Dashed)?,
                    trace(&f.energy, "minus_E_dot_d_mean", Stroke::Dashed)?,
                    trace(&f.energy, "zeeman_mean", Stroke::Dashed)?,
                ],
            }],
            &es,
        )?;
        artifacts.extend([fc, fs, ec, es]);
    }
    let checks = validation::run_suite(&suite, figs.as_ref().ok());
    let mut echo = cfg.echo.clone();
    echo.push(("resolved".into(), validation::describe(&suite)));
    let report = ValidationReport::new(checks, &echo);
    let primary = out.join("report.txt");
    report.write(&primary)?;
    artifacts.insert(0, primary.clone());
    Ok(RunOutcome {
        primary,
        artifacts,
        report: Some(report),
    })
}

pub const SCAN_COLUMNS: [&str; 9] = [
    "k",
    "coupling_ratio",
    "C",
    "beat_ratio",
    "window_threshold",
    "window_ok",
    "g0_peak",
    "s_z_min",
    "envelope_max_dev",
];

/// One summary row of a scan point: exact-solution descriptors plus the
/// deviation of the integrated envelope over one beat period (capped at
/// 200 carrier periods).
fn scan_row(
    params: DickeParams,
    case: crate::model::SolutionCase,
    m: EllipticModulus,
) -> Result<Vec<f64>> {
    let sol = AnalyticSolution::new(params, case, m)?;
    let w = adiabatic_window(&params, m);
    let span = sol
        .beat_period()
        .ok()
        .filter(|p| p.is_finite())
        .map_or(200.0 * params.fast_period(), |p| {
            p.min(200.0 * params.fast_period())
        });
    let init = initial_state(&params, case, m, 0.0)?;
    let ts = integrate_envelope(
        &init.envelope,
        &params,
        &SolverConfig::adaptive(1e-10, span),
    )?;
    let g0 = ts.require("g0")?;
    let mut dev = 0.0f64;
    let (mut peak, mut sz_min) = (0.0f64, f64::INFINITY);
    for (i, &t) in ts.t().iter().enumerate() {
        let pt = sol.evaluate(t);
        dev = dev.max((g0[i] - pt.g0).abs());
        peak = peak.max(pt.g0.abs());
        sz_min = sz_min.min(pt.s_z);
    }
    Ok(vec![
        m.k(),
        params.coupling_ratio(),
        invariant_from_modulus(case, m),
        w.frequency_ratio.unwrap_or(0.0),
        w.threshold,
        if w.ok { 1.0 } else { 0.0 },
        peak,
        sz_min,
        dev,
    ])
}

fn run_scan(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let spec = cfg
        .scan
        .ok_or_else(|| Error::config(0, "scan_param", "missing key"))?;
    let values = spec.values();
    let rows: Vec<Result<Vec<f64>>> = values
        .par_iter()
        .map(|&v| match spec.param {
            ScanParam::K => scan_row(cfg.params, cfg.case, EllipticModulus::new(v)?),
            ScanParam::CouplingRatio => {
                scan_row(cfg.params.with_coupling_ratio(v)?, cfg.case, cfg.modulus()?)
            }
        })
        .collect();
    let mut text = format!("index,{}\n", SCAN_COLUMNS.join(","));
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
        text.push_str(&format!("{i},{}\n", cells.join(",")));
    }
    let primary = out.join("scan.csv");
    std::fs::write(&primary, text).map_err(|e| Error::io(&primary, e))?;
    Ok(RunOutcome {
        artifacts: vec![primary.clone()],
        primary,
        report: None,
    })
}
