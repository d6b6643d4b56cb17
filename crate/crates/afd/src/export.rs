//! Time-frequency atom export and rasterization.

use std::io::Write;

use afd_core::TfdAtom;

use crate::error::CliError;

fn csv_err(e: csv::Error) -> CliError {
    CliError::Parse(e.to_string())
}

/// Writes `component,t,omega,weight` rows.
pub fn write_atoms(out: impl Write, atoms: &[Vec<TfdAtom>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["component", "t", "omega", "weight"]).map_err(csv_err)?;
    for (k, comp) in atoms.iter().enumerate() {
        for a in comp {
            w.serialize((k + 1, a.t, a.omega, a.weight)).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| CliError::io("<tfd>", e))
}

/// Weights binned on a `time × omega` grid. Rows are time bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub t_range: (f64, f64),
    pub omega_range: (f64, f64),
    pub cells: Vec<Vec<f64>>,
}

impl Raster {
    pub fn time_bins(&self) -> usize {
        self.cells.len()
    }

    pub fn omega_bins(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    fn centre(range: (f64, f64), bins: usize, i: usize) -> f64 {
        range.0 + (i as f64 + 0.5) * (range.1 - range.0) / bins as f64
    }
}

fn bin_of(v: f64, range: (f64, f64), bins: usize) -> usize {
    let width = range.1 - range.0;
    if width <= 0.0 {
        return 0;
    }
    let edge = |i: usize| range.0 + width * i as f64 / bins as f64;
    let mut i = (((v - range.0) / width * bins as f64).floor().max(0.0) as usize).min(bins - 1);
    // Settle rounding at the edges so that bin i holds exactly edge(i) <= v < edge(i+1).
    while i + 1 < bins && v >= edge(i + 1) {
        i += 1;
    }
    while i > 0 && v < edge(i) {
        i -= 1;
    }
    i
}

/// Bins every atom into the cell containing `(t, ω)`. Time spans the
/// circle `[0, 2π)`; the frequency range covers all atoms, so each row sum
/// is the total atom weight in that time bin.
pub fn rasterize(atoms: &[Vec<TfdAtom>], time_bins: usize, omega_bins: usize) -> Result<Raster, CliError> {
    if time_bins == 0 || omega_bins == 0 {
        return Err(CliError::Config("raster needs at least one bin per axis".into()));
    }
    let all = || atoms.iter().flatten();
    let lo = all().map(|a| a.omega).fold(f64::INFINITY, f64::min);
    let hi = all().map(|a| a.omega).fold(f64::NEG_INFINITY, f64::max);
    let omega_range = if lo.is_finite() { (lo.floor(), (hi.floor() + 1.0).max(lo.floor() + 1.0)) } else { (0.0, 1.0) };
    let t_range = (0.0, std::f64::consts::TAU);
    let mut cells = vec![vec![0.0; omega_bins]; time_bins];
    for a in all() {
        cells[bin_of(a.t, t_range, time_bins)][bin_of(a.omega, omega_range, omega_bins)] += a.weight;
    }
    Ok(Raster { t_range, omega_range, cells })
}

/// One row per time bin: `t` centre followed by one column per frequency
/// bin, headed by the bin centre.
pub fn write_raster(out: impl Write, r: &Raster) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((0..r.omega_bins()).map(|j| format!("{}", Raster::centre(r.omega_range, r.omega_bins(), j))));
    w.write_record(&header).map_err(csv_err)?;
    for (i, row) in r.cells.iter().enumerate() {
        let mut fields = vec![Raster::centre(r.t_range, r.time_bins(), i).to_string()];
        fields.extend(row.iter().map(f64::to_string));
        w.write_record(&fields).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io("<raster>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms() -> Vec<Vec<TfdAtom>> {
        let n = 32;
        (0..3)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let t = std::f64::consts::TAU * j as f64 / n as f64;
                        TfdAtom { t, omega: k as f64 + 0.3 * t.sin(), weight: 1.0 + 0.5 * (k as f64 + t).cos() }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn raster_conserves_weight_per_time_bin() {
        let a = atoms();
        let r = rasterize(&a, 8, 5).unwrap();
        for (i, row) in r.cells.iter().enumerate() {
            let expected: f64 = a.iter().flatten().filter(|x| bin_of(x.t, r.t_range, 8) == i).map(|x| x.weight).sum();
            assert!((row.iter().sum::<f64>() - expected).abs() < 1e-12);
        }
        let total: f64 = a.iter().flatten().map(|x| x.weight).sum();
        assert!((r.total() - total).abs() < 1e-9);
    }

    #[test]
    fn atom_rows() {
        let mut buf = Vec::new();
        write_atoms(&mut buf, &atoms()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 3 * 32);
        assert!(text.starts_with("component,t,omega,weight"));
    }

    #[test]
    fn constant_lines_fall_in_one_column() {
        let lines: Vec<Vec<TfdAtom>> =
            (0..2).map(|k| (0..16).map(|j| TfdAtom { t: j as f64 * 0.39, omega: k as f64, weight: 1.0 }).collect()).collect();
        let r = rasterize(&lines, 4, 2).unwrap();
        assert!(r.cells.iter().all(|row| row[0] > 0.0 && row[1] > 0.0));
    }
}
