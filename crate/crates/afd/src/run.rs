//! Algorithm dispatch for the command-line front end.

use std::fmt::Write as _;
use std::time::Instant;

use afd_core::atoms::default_radii;
use afd_core::cyclic::warm_start;
use afd_core::{
    analytic_signal, bedrosian_check, core_afd_decompose, cyclic_afd, dirac_tfd, monocomp_check,
    poafd_decompose, sift_with_params, uncertainty_report, uwa_decompose, uwafd_decompose, CircularSignal, Complex64,
    CyclicStop, DiscParam, HardyFunction, LineSignal, NTuple, TfdAtom, UnwindingDecomposition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Algorithm, InitMode, RunConfig};
use crate::error::CliError;
use crate::record::{ComponentRecord, Kind, ResultRecord, Timings, SCHEMA};

/// Radius of the disc that random initial tuples are drawn from.
const RANDOM_INIT_RADIUS: f64 = 0.9;
/// Relative residual below which the Bedrosian identity counts as holding.
pub const BEDROSIAN_TOL: f64 = 1e-6;
/// Discretization slack for the uncertainty chain.
pub const UNCERTAINTY_SLACK: f64 = 1e-6;

/// The Hardy-space function a run decomposes: the analytic signal of real
/// input, or the non-negative-frequency part of complex input.
pub fn hardy_part(s: &CircularSignal, complex: bool) -> Result<HardyFunction, CliError> {
    if complex {
        Ok(HardyFunction::project(s).0)
    } else {
        Ok(analytic_signal(s)?)
    }
}

/// Seeded draws from the disc of radius 0.9, uniform in area.
pub fn random_tuple(n: usize, seed: u64) -> Result<NTuple, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = (0..n)
        .map(|_| {
            let r = RANDOM_INIT_RADIUS * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            DiscParam::clamped(Complex64::from_polar(r, theta))
        })
        .collect();
    Ok(NTuple::new(params)?)
}

fn unwinding_record(config: &RunConfig, order: usize, d: &UnwindingDecomposition) -> ResultRecord {
    ResultRecord {
        schema: SCHEMA,
        algorithm: config.algorithm,
        config: config.clone(),
        order,
        source_energy: d.source_energy,
        components: d
            .terms
            .iter()
            .map(|t| ComponentRecord { a: t.a.map(|a| a.value().into()), c: t.c.into(), kind: Kind::Unwinding })
            .collect(),
        residual_energy: d.residual_energy.clone(),
        objective_trace: None,
        diagnostics: d.diagnostics.iter().map(|x| format!("{x:?}")).collect(),
        timings: Timings::default(),
    }
}

/// Runs the configured algorithm on `f`.
pub fn decompose_hardy(f: &HardyFunction, config: &RunConfig) -> Result<ResultRecord, CliError> {
    config.validate()?;
    if f.norm() < 1e-12 {
        return Err(CliError::ZeroSignal);
    }
    let started = Instant::now();
    let search = config.search();
    let stop = config.stop();
    let order = f.order();
    let mut record = match config.algorithm {
        Algorithm::Core => ResultRecord::from_decomposition(config.algorithm, config, order, &core_afd_decompose(f, &stop, &search)?),
        Algorithm::Uwa => unwinding_record(config, order, &uwa_decompose(f, &stop)?),
        Algorithm::Uwafd => unwinding_record(config, order, &uwafd_decompose(f, &stop, &search)?),
        Algorithm::Poafd => {
            let space = config.space.kernel_space(order);
            ResultRecord::from_decomposition(config.algorithm, config, order, &poafd_decompose(&space, f.coeffs(), &stop, &search)?)
        }
        Algorithm::Cyclic => {
            let init = match config.init {
                InitMode::Auto => warm_start(f, config.tuple_size, &search)?,
                InitMode::Origin => NTuple::origin(config.tuple_size)?,
                InitMode::Random => random_tuple(config.tuple_size, config.seed)?,
            };
            let trace = cyclic_afd(f, &init, &CyclicStop::default(), &search);
            let d = sift_with_params(f, trace.final_tuple().params())?;
            let mut r = ResultRecord::from_decomposition(config.algorithm, config, order, &d);
            r.objective_trace = Some(trace.objectives);
            r
        }
    };
    record.timings.decompose_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(record)
}

/// Runs the configured algorithm on a circle signal; `config.grid_len` is
/// taken from the signal.
pub fn decompose(s: &CircularSignal, config: &RunConfig, complex: bool) -> Result<ResultRecord, CliError> {
    let config = RunConfig { grid_len: s.len(), ..config.clone() };
    config.validate()?;
    if s.norm() < 1e-12 {
        return Err(CliError::ZeroSignal);
    }
    decompose_hardy(&hardy_part(s, complex)?, &config)
}

/// Per-step energy table.
pub fn energy_table(r: &ResultRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algorithm {}  grid {}  order {}", r.algorithm.name(), r.config.grid_len, r.order);
    let _ = writeln!(out, "{:>4}  {:>24}  {:>12}  {:>12}  {:>10}", "step", "a", "|c|^2", "residual", "relative");
    let _ = writeln!(out, "{:>4}  {:>24}  {:>12}  {:>12.6e}  {:>10.3e}", 0, "", "", r.source_energy, 1.0);
    for (k, c) in r.components.iter().enumerate() {
        let a = match c.a {
            Some(a) => format!("{:+.6}{:+.6}i", a.re, a.im),
            None => "-".to_string(),
        };
        let w = Complex64::from(c.c).norm_sqr();
        let res = r.residual_energy[k + 1];
        let _ = writeln!(out, "{:>4}  {:>24}  {:>12.6e}  {:>12.6e}  {:>10.3e}", k + 1, a, w, res, res / r.source_energy);
    }
    let _ = writeln!(out, "energy identity gap {:.3e}", r.energy_gap());
    for d in &r.diagnostics {
        let _ = writeln!(out, "diagnostic: {d}");
    }
    out
}

/// TFD atoms of a stored record on its own grid.
pub fn record_tfd(r: &ResultRecord) -> Result<Vec<Vec<TfdAtom>>, CliError> {
    let d = r.to_decomposition()?;
    Ok(dirac_tfd(&d, r.config.grid_len)?)
}

/// Outcome of a check: a printable report and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub report: String,
    pub passed: bool,
}

pub fn check_mono(s: &CircularSignal) -> Result<CheckOutcome, CliError> {
    let r = monocomp_check(s, &default_radii())?;
    let report = format!(
        "mono-component check\n  min phase derivative  {:.6e}\n  negative fraction     {:.6}\n  mean phase derivative {:.6e}\n",
        r.min_phase_derivative, r.fraction_negative, r.mean_phase_derivative
    );
    Ok(CheckOutcome { report, passed: r.is_mono_component() })
}

pub fn check_bedrosian(rho: &[f64], theta: &[f64]) -> Result<CheckOutcome, CliError> {
    let gap = bedrosian_check(rho, theta)?;
    let report = format!("Bedrosian check\n  relative residual {gap:.3e} (limit {BEDROSIAN_TOL:.0e})\n");
    Ok(CheckOutcome { report, passed: gap < BEDROSIAN_TOL })
}

pub fn check_uncertainty(s: &LineSignal) -> Result<CheckOutcome, CliError> {
    let r = uncertainty_report(s)?;
    let report = format!(
        "uncertainty check\n  sigma_t^2 sigma_w^2 {:.6}\n  extra bound         {:.6}\n  Cohen bound         {:.6}\n  lower bound         0.25\n  product / 0.25      {:.4}\n",
        r.product(),
        r.extra_bound,
        r.cohen_bound,
        r.product() / 0.25
    );
    Ok(CheckOutcome { report, passed: r.chain_holds(UNCERTAINTY_SLACK) })
}
