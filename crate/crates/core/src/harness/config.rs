//! Flat `key = value` run configuration. `#` starts a comment; blank lines
//! are ignored; every key may appear at most once.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::analytic::{invariant_from_modulus, modulus_from_invariant, AnalyticSolution};
use crate::error::{Error, Result};
use crate::full_dynamics::FastSystem;
use crate::model::{DickeParams, SolutionCase};
use crate::observables::CavityGeometry;
use crate::ode::{Method, SolverConfig, DEFAULT_MAX_STEPS};
use crate::special_functions::EllipticModulus;

pub const KEYS: [&str; 27] = [
    "mode",
    "omega",
    "e_j",
    "g",
    "coupling_ratio",
    "s",
    "case",
    "k",
    "C",
    "system",
    "method",
    "dt",
    "abs_tol",
    "rel_tol",
    "t_start",
    "t_end",
    "samples_per_period",
    "max_steps",
    "volume",
    "thickness",
    "charge",
    "scan_param",
    "scan_min",
    "scan_max",
    "scan_points",
    "out_dir",
    "seed",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Envelope,
    Analytic,
    Validate,
    Scan,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Envelope => "envelope",
            Mode::Analytic => "analytic",
            Mode::Validate => "validate",
            Mode::Scan => "scan",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "full" => Mode::Full,
            "envelope" => Mode::Envelope,
            "analytic" => Mode::Analytic,
            "validate" => Mode::Validate,
            "scan" => Mode::Scan,
            other => return Err(format!("unknown mode `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanParam {
    K,
    CouplingRatio,
}

impl fmt::Display for ScanParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanParam::K => "k",
            ScanParam::CouplingRatio => "coupling_ratio",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSpec {
    pub param: ScanParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl ScanSpec {
    /// Grid values in index order, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: DickeParams,
    pub case: SolutionCase,
    /// Resolved modulus; `None` only when `k` is the scan parameter.
    pub modulus: Option<EllipticModulus>,
    pub system: FastSystem,
    pub solver: SolverConfig,
    pub geometry: CavityGeometry,
    pub scan: Option<ScanSpec>,
    /// Seed for the randomized sample points of the validation suite.
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Non-comment lines as written, for the report provenance block.
    pub echo: Vec<(String, String)>,
}

impl RunConfig {
    pub fn invariant(&self) -> Option<f64> {
        self.modulus.map(|m| invariant_from_modulus(self.case, m))
    }

    pub fn modulus(&self) -> Result<EllipticModulus> {
        self.modulus
            .ok_or_else(|| Error::config(0, "k", "no modulus configured"))
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries(Vec<(String, Entry)>);

impl Entries {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, e)| e)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|err| {
                Error::config(e.line, key, format!("cannot parse `{}`: {err}", e.value))
            }),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        let v = self.parse::<f64>(key)?;
        match (v, self.get(key)) {
            (Some(x), Some(e)) if !x.is_finite() => Err(Error::config(
                e.line,
                key,
                format!("must be finite, got `{}`", e.value),
            )),
            _ => Ok(v),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.get(key).map_or(0, |e| e.line)
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut out: Vec<(String, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::config(line, key, "unknown key"));
        }
        if value.is_empty() {
            return Err(Error::config(line, key, "missing value"));
        }
        if let Some((_, first)) = out.iter().find(|(k, _)| k == key) {
            return Err(Error::config(
                line,
                key,
                format!("duplicate key (first set on line {})", first.line),
            ));
        }
        out.push((
            key.to_owned(),
            Entry {
                line,
                value: value.to_owned(),
            },
        ));
    }
    Ok(Entries(out))
}

fn wrap(line: usize, key: &str, err: Error) -> Error {
    match err {
        Error::Config { .. } => err,
        other => Error::config(line, key, other.to_string()),
    }
}

/// Parse a config whose `mode` key is mandatory.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_for(text, None)
}

/// Parse a config for a mode chosen outside the file. A `mode` key in the
/// file must then agree with it.
pub fn parse_config_for(text: &str, mode: Option<Mode>) -> Result<RunConfig> {
    let e = tokenize(text)?;
    let mode = match (e.parse::<Mode>("mode")?, mode) {
        (Some(file), Some(cli)) if file != cli => {
            return Err(Error::config(
                e.line("mode"),
                "mode",
                format!("config selects `{file}` but `{cli}` was requested"),
            ))
        }
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) => return Err(Error::config(0, "mode", "missing key")),
    };

    let scan = if mode == Mode::Scan {
        let param = match e.get("scan_param") {
            None => return Err(Error::config(0, "scan_param", "missing key")),
            Some(en) => match en.value.as_str() {
                "k" => ScanParam::K,
                "coupling_ratio" => ScanParam::CouplingRatio,
                other => {
                    return Err(Error::config(
                        en.line,
                        "scan_param",
                        format!("expected `k` or `coupling_ratio`, got `{other}`"),
                    ))
                }
            },
        };
        let min = e
            .real("scan_min")?
            .ok_or_else(|| Error::config(0, "scan_min", "missing key"))?;
        let max = e
            .real("scan_max")?
            .ok_or_else(|| Error::config(0, "scan_max", "missing key"))?;
        let points = e
            .parse::<usize>("scan_points")?
            .ok_or_else(|| Error::config(0, "scan_points", "missing key"))?;
        if points == 0 || max < min {
            return Err(Error::config(
                e.line("scan_points"),
                "scan_points",
                "need at least one point and scan_min <= scan_max",
            ));
        }
        if param == ScanParam::K && (min < 0.0 || max > 1.0) {
            return Err(Error::config(
                e.line("scan_max"),
                "scan_max",
                "k grid must lie in [0, 1]",
            ));
        }
        if param == ScanParam::CouplingRatio && min < 0.0 {
            return Err(Error::config(
                e.line("scan_min"),
                "scan_min",
                "coupling ratio must be >= 0",
            ));
        }
        Some(ScanSpec {
            param,
            min,
            max,
            points,
        })
    } else {
        for key in ["scan_param", "scan_min", "scan_max", "scan_points"] {
            if e.get(key).is_some() {
                return Err(Error::config(
                    e.line(key),
                    key,
                    format!("only valid in scan mode, not `{mode}`"),
                ));
            }
        }
        None
    };
    let scanning = |p: ScanParam| scan.is_some_and(|s| s.param == p);

    let omega = e.real("omega")?.unwrap_or(1.0);
    let e_j = e.real("e_j")?.unwrap_or(1.0);
    let s = e.real("s")?.unwrap_or(10.0);
    let field_err = |err: Error| match err {
        Error::InvalidParameter { field, reason } => Error::config(e.line(field), field, reason),
        other => other,
    };
    let base = DickeParams::new(omega, e_j, 0.0, s).map_err(field_err)?;
    let params = match (e.real("g")?, e.real("coupling_ratio")?) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                e.line("coupling_ratio"),
                "coupling_ratio",
                "give either `g` or `coupling_ratio`, not both",
            ))
        }
        (Some(g), None) => base
            .with_coupling(g)
            .map_err(|err| wrap(e.line("g"), "g", err))?,
        (None, Some(r)) => base
            .with_coupling_ratio(r)
            .map_err(|err| wrap(e.line("coupling_ratio"), "coupling_ratio", err))?,
        (None, None) if scanning(ScanParam::CouplingRatio) => base,
        (None, None) => {
            return Err(Error::config(
                0,
                "g",
                "missing key (or give `coupling_ratio`)",
            ))
        }
    };
    if !params.is_resonant() {
        return Err(Error::config(
            e.line("e_j").max(e.line("omega")),
            "e_j",
            format!("resonance required: omega = {omega} but e_j = {e_j}"),
        ));
    }

    let case = e
        .get("case")
        .map(|en| {
            en.value
                .parse::<SolutionCase>()
                .map_err(|err| Error::config(en.line, "case", err))
        })
        .transpose()?
        .unwrap_or(SolutionCase::CnCase);

    let modulus = match (e.real("k")?, e.real("C")?) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                e.line("C"),
                "C",
                "conflicting keys `k` and `C`: give exactly one",
            ))
        }
        _ if scanning(ScanParam::K) => {
            for key in ["k", "C"] {
                if e.get(key).is_some() {
                    return Err(Error::config(e.line(key), key, "`k` is the scan parameter"));
                }
            }
            None
        }
        (Some(k), None) => {
            Some(EllipticModulus::new(k).map_err(|err| wrap(e.line("k"), "k", err))?)
        }
        (None, Some(c)) => {
            Some(modulus_from_invariant(c, case).map_err(|err| wrap(e.line("C"), "C", err))?)
        }
        (None, None) => return Err(Error::config(0, "k", "missing key (or give `C`)")),
    };

    let system = e
        .get("system")
        .map(|en| {
            en.value
                .parse::<FastSystem>()
                .map_err(|err| Error::config(en.line, "system", err))
        })
        .transpose()?
        .unwrap_or(FastSystem::Canonical);

    let method = match e.get("method").map(|en| en.value.as_str()) {
        None | Some("rk45") => {
            if e.get("dt").is_some() {
                return Err(Error::config(
                    e.line("dt"),
                    "dt",
                    "only valid with `method = rk4`",
                ));
            }
            Method::AdaptiveRk45 {
                abs_tol: e.real("abs_tol")?.unwrap_or(1e-10),
                rel_tol: e.real("rel_tol")?.unwrap_or(1e-10),
            }
        }
        Some("rk4") => {
            for key in ["abs_tol", "rel_tol"] {
                if e.get(key).is_some() {
                    return Err(Error::config(
                        e.line(key),
                        key,
                        "only valid with `method = rk45`",
                    ));
                }
            }
            Method::FixedRk4 {
                dt: e.real("dt")?.ok_or_else(|| {
                    Error::config(e.line("method"), "dt", "missing key for `method = rk4`")
                })?,
            }
        }
        Some(other) => {
            return Err(Error::config(
                e.line("method"),
                "method",
                format!("expected `rk4` or `rk45`, got `{other}`"),
            ))
        }
    };
    let t_start = e.real("t_start")?.unwrap_or(0.0);
    let t_end = match e.real("t_end")? {
        Some(t) => t,
        None => t_start + default_span(&params, case, modulus),
    };
    let samples_per_period = e.parse::<usize>("samples_per_period")?.unwrap_or(40);
    let solver = SolverConfig {
        method,
        t_start,
        t_end,
        samples_per_period,
        max_steps: e.parse::<u64>("max_steps")?.unwrap_or(DEFAULT_MAX_STEPS),
    };
    solver.validate().map_err(field_err)?;

    let geometry = CavityGeometry::new(
        e.real("volume")?.unwrap_or(1.0),
        e.real("thickness")?.unwrap_or(1.0),
        e.real("charge")?.unwrap_or(1.0),
    )
    .map_err(field_err)?;

    Ok(RunConfig {
        mode,
        params,
        case,
        modulus,
        system,
        solver,
        geometry,
        scan,
        seed: e.parse::<u64>("seed")?.unwrap_or(20_240_601),
        out_dir: PathBuf::from(e.get("out_dir").map_or("out", |en| en.value.as_str())),
        echo: e.0.into_iter().map(|(k, en)| (k, en.value)).collect(),
    })
}

/// Two beat periods when finite, otherwise twenty carrier periods.
fn default_span(params: &DickeParams, case: SolutionCase, modulus: Option<EllipticModulus>) -> f64 {
    modulus
        .and_then(|m| AnalyticSolution::new(*params, case, m).ok())
        .and_then(|sol| sol.beat_period().ok())
        .filter(|p| p.is_finite())
        .map_or(20.0 * params.fast_period(), |p| 2.0 * p)
}
