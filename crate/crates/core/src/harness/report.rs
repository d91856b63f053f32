//! Machine-readable validation report, serialized as flat `key = value` text.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::output::format_value;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    /// Acceptance criterion number.
    pub criterion: usize,
    pub name: String,
    /// Measured quantity; `pass` compares it against `threshold`.
    pub metric: f64,
    pub threshold: f64,
    pub pass: bool,
    pub details: String,
}

impl Check {
    /// Pass when `metric <= threshold`.
    pub fn at_most(
        criterion: usize,
        name: &str,
        metric: f64,
        threshold: f64,
        details: String,
    ) -> Self {
        Self {
            criterion,
            name: name.to_owned(),
            metric,
            threshold,
            pass: metric <= threshold,
            details,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:>2} {:<31} {}  metric = {:.6e}  threshold = {:.6e}",
            self.criterion,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.metric,
            self.threshold
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
    pub provenance: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn new(checks: Vec<Check>, config_echo: &[(String, String)]) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        let mut provenance = vec![(
            "tool".to_owned(),
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        )];
        provenance.extend(
            config_echo
                .iter()
                .map(|(k, v)| (format!("config.{k}"), v.clone())),
        );
        Self {
            checks,
            overall,
            provenance,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "overall = {}", self.overall);
        let _ = writeln!(out, "checks = {}", self.checks.len());
        for (i, c) in self.checks.iter().enumerate() {
            let p = format!("check.{}", i + 1);
            let _ = writeln!(out, "{p}.criterion = {}", c.criterion);
            let _ = writeln!(out, "{p}.name = {}", c.name);
            let _ = writeln!(out, "{p}.metric = {}", format_value(c.metric));
            let _ = writeln!(out, "{p}.threshold = {}", format_value(c.threshold));
            let _ = writeln!(out, "{p}.pass = {}", c.pass);
            let _ = writeln!(
                out,
                "{p}.details = {}",
                c.details.replace(['\n', '\r'], " ")
            );
        }
        for (k, v) in &self.provenance {
            let _ = writeln!(out, "provenance.{k} = {v}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
