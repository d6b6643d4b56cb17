//! CSV signal files.
//!
//! Circle signals use a header row and columns `t,value` or `t,re,im`, with
//! `t_j = 2πj/N`. Polar pairs for the Bedrosian check use `t,rho,theta` on
//! the same grid. Real-line signals use `t,value` on any uniform grid.

use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

use afd_core::{CircularSignal, Complex64, LineSignal};

use crate::error::CliError;

/// Allowed deviation of a time stamp from its grid position.
pub const GRID_TOL: f64 = 1e-9;

fn open(path: &Path) -> Result<std::fs::File, CliError> {
    std::fs::File::open(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Header names (trimmed, lowercase) and numeric rows.
fn read_table(reader: impl Read) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::Parse(e.to_string()))?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(CliError::Parse("missing header row".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        let row = rec
            .iter()
            .map(|field| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Parse(format!("row {}: {field:?} is not a finite number", i + 2))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse("no samples".into()));
    }
    Ok((headers, rows))
}

fn expect_columns(headers: &[String], options: &[&[&str]]) -> Result<usize, CliError> {
    options
        .iter()
        .position(|cols| headers.len() == cols.len() && headers.iter().zip(cols.iter()).all(|(h, c)| h == c))
        .ok_or_else(|| {
            let wanted: Vec<String> = options.iter().map(|c| c.join(",")).collect();
            CliError::Parse(format!("header {:?} must be one of {}", headers.join(","), wanted.join(" | ")))
        })
}

/// Checks `t_j = 2πj/N` and that `N` is a valid grid size.
fn check_circle_grid(times: impl ExactSizeIterator<Item = f64>) -> Result<(), CliError> {
    let n = times.len();
    if n < 8 || !n.is_power_of_two() {
        return Err(CliError::Parse(format!("{n} samples; the grid size must be a power of two and at least 8")));
    }
    for (j, t) in times.enumerate() {
        let expected = TAU * j as f64 / n as f64;
        if (t - expected).abs() > GRID_TOL {
            return Err(CliError::Parse(format!("t at row {} is {t}, expected 2π·{j}/{n} = {expected}", j + 2)));
        }
    }
    Ok(())
}

/// Samples on the circle grid; `t,re,im` files may carry imaginary parts.
pub fn parse_signal(reader: impl Read) -> Result<CircularSignal, CliError> {
    let (headers, rows) = read_table(reader)?;
    let layout = expect_columns(&headers, &[&["t", "value"], &["t", "re", "im"]])?;
    check_circle_grid(rows.iter().map(|r| r[0]))?;
    let samples = rows
        .iter()
        .map(|r| if layout == 0 { Complex64::new(r[1], 0.0) } else { Complex64::new(r[1], r[2]) })
        .collect();
    Ok(CircularSignal::new(samples)?)
}

pub fn read_signal(path: &Path) -> Result<CircularSignal, CliError> {
    parse_signal(open(path)?)
}

/// `(ρ, θ)` columns of a `t,rho,theta` file.
pub fn parse_polar(reader: impl Read) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (headers, rows) = read_table(reader)?;
    expect_columns(&headers, &[&["t", "rho", "theta"]])?;
    check_circle_grid(rows.iter().map(|r| r[0]))?;
    Ok(rows.iter().map(|r| (r[1], r[2])).unzip())
}

pub fn read_polar(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    parse_polar(open(path)?)
}

/// Real samples on a uniform, increasing line grid.
pub fn parse_line_signal(reader: impl Read) -> Result<LineSignal, CliError> {
    let (headers, rows) = read_table(reader)?;
    expect_columns(&headers, &[&["t", "value"]])?;
    let n = rows.len();
    if n < 8 || !n.is_power_of_two() {
        return Err(CliError::Parse(format!("{n} samples; the grid size must be a power of two and at least 8")));
    }
    let start = rows[0][0];
    let step = (rows[n - 1][0] - start) / (n - 1) as f64;
    if step.is_nan() || step <= 0.0 {
        return Err(CliError::Parse("time stamps must increase".into()));
    }
    for (j, r) in rows.iter().enumerate() {
        let expected = start + j as f64 * step;
        if (r[0] - expected).abs() > GRID_TOL * expected.abs().max(1.0) {
            return Err(CliError::Parse(format!("t at row {} is {}, expected uniform grid value {expected}", j + 2, r[0])));
        }
    }
    Ok(LineSignal::new(start, step, rows.iter().map(|r| r[1]).collect())?)
}

pub fn read_line_signal(path: &Path) -> Result<LineSignal, CliError> {
    parse_line_signal(open(path)?)
}

/// Writes `t,value` (or `t,re,im` when `complex`) rows.
pub fn write_signal(out: impl Write, s: &CircularSignal, complex: bool) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let to_parse = |e: csv::Error| CliError::Parse(e.to_string());
    if complex {
        w.write_record(["t", "re", "im"]).map_err(to_parse)?;
    } else {
        w.write_record(["t", "value"]).map_err(to_parse)?;
    }
    let n = s.len();
    for (j, v) in s.samples().iter().enumerate() {
        let t = TAU * j as f64 / n as f64;
        if complex {
            w.serialize((t, v.re, v.im)).map_err(to_parse)?;
        } else {
            w.serialize((t, v.re)).map_err(to_parse)?;
        }
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))
}
