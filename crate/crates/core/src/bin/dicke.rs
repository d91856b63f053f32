//! `dicke <mode> --config <path> [--out-dir <path>] [--regenerate-golden]`
//!
//! Exit codes: 0 ok, 2 config error, 3 integration failure, 4 validation
//! failure, 5 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dicke::harness::config::{parse_config_for, Mode};
use dicke::harness::run::run;
use dicke::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Envelope,
    Analytic,
    Validate,
    Scan,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Envelope => Mode::Envelope,
            ModeArg::Analytic => Mode::Analytic,
            ModeArg::Validate => Mode::Validate,
            ModeArg::Scan => Mode::Scan,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dicke", version, about = "Semiclassical Dicke-model dynamics")]
struct Cli {
    mode: ModeArg,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out_dir` from the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Copy the primary CSV to `<config stem>.golden.csv` next to the config.
    #[arg(long)]
    regenerate_golden: bool,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. }
        | Error::InvalidParameter { .. }
        | Error::NotResonant { .. }
        | Error::Domain(_) => 2,
        Error::Integration { .. } | Error::NonFinite { .. } => 3,
        Error::Io { .. } => 5,
    }
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let text = std::fs::read_to_string(&cli.config).map_err(|source| Error::Io {
        path: cli.config.clone(),
        source,
    })?;
    let cfg = parse_config_for(&text, Some(cli.mode.into()))?;
    let base = cli.config.parent().unwrap_or(Path::new("."));
    let out_dir = match &cli.out_dir {
        Some(dir) => dir.clone(),
        None => base.join(&cfg.out_dir),
    };
    let outcome = run(&cfg, &out_dir)?;
    if cli.regenerate_golden {
        let stem = cli
            .config
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("golden");
        let target = base.join(format!("{stem}.golden.csv"));
        std::fs::copy(&outcome.primary, &target).map_err(|source| Error::Io {
            path: target.clone(),
            source,
        })?;
        println!("golden: {}", target.display());
    }
    for path in &outcome.artifacts {
        println!("wrote {}", path.display());
    }
    Ok(match &outcome.report {
        Some(report) => {
            for check in &report.checks {
                println!("{}", check.summary_line());
            }
            println!("overall: {}", if report.overall { "PASS" } else { "FAIL" });
            report.overall
        }
        None => true,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(err) => {
            eprintln!("dicke: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
