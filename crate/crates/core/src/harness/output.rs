//! CSV emission and reading. Values use 17 significant digits so every
//! float rereads bit-identically; records end in LF.

use std::path::Path;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

fn csv_err(path: &Path, err: csv::Error) -> Error {
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{other:?}")),
        ),
    }
}

/// Reject series containing NaN or infinities.
pub fn check_finite(series: &TimeSeries) -> Result<()> {
    if let Some(i) = series.t().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            channel: "t".into(),
            index: i,
        });
    }
    for (name, values) in series.channels() {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                channel: name.to_owned(),
                index: i,
            });
        }
    }
    Ok(())
}

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_string(series: &TimeSeries) -> Result<String> {
    if series.is_empty() {
        return Err(Error::domain("refusing to emit an empty series"));
    }
    check_finite(series)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("t").chain(series.names().iter().map(String::as_str));
    let here = Path::new("<memory>");
    w.write_record(header).map_err(|e| csv_err(here, e))?;
    let columns: Vec<&[f64]> = series.channels().map(|(_, v)| v).collect();
    for (i, t) in series.t().iter().enumerate() {
        let row =
            std::iter::once(format_value(*t)).chain(columns.iter().map(|c| format_value(c[i])));
        w.write_record(row).map_err(|e| csv_err(here, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io(here, e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn emit_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let text = csv_string(series)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Read a CSV written by [`emit_csv`]; the first column is time.
pub fn read_csv(path: &Path) -> Result<TimeSeries> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.get(0) != Some("t") {
        return Err(Error::domain(format!(
            "{}: first column must be `t`",
            path.display()
        )));
    }
    let names: Vec<&str> = headers.iter().skip(1).collect();
    let mut series = TimeSeries::new(&names);
    for record in r.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let values: Vec<f64> = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::domain(format!("{}: bad number `{f}`", path.display())))
            })
            .collect::<Result<_>>()?;
        series.push(values[0], &values[1..]);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_samples_three_lines() {
        let mut ts = TimeSeries::new(&["a"]);
        ts.push(0.0, &[1.0]);
        ts.push(1.0, &[2.0]);
        let text = csv_string(&ts).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        assert_eq!(text.lines().next(), Some("t,a"));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let mut ts = TimeSeries::new(&["a", "b"]);
        ts.push(0.0, &[0.1, -1.0 / 3.0]);
        ts.push(0.1, &[f64::MIN_POSITIVE, 1e300]);
        emit_csv(&ts, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn nan_is_rejected() {
        let mut ts = TimeSeries::new(&["a"]);
        ts.push(0.0, &[f64::NAN]);
        match csv_string(&ts) {
            Err(Error::NonFinite { channel, index }) => {
                assert_eq!((channel.as_str(), index), ("a", 0))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let mut ts = TimeSeries::new(&["a"]);
        ts.push(0.0, &[1.0]);
        let err = emit_csv(&ts, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
