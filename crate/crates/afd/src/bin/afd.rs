use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afd::config::parse_pair;
use afd::export::{rasterize, write_atoms, write_raster};
use afd::input::{read_line_signal, read_polar, read_signal};
use afd::run::{check_bedrosian, check_mono, check_uncertainty, decompose, energy_table, hardy_part, record_tfd};
use afd::{exit, Algorithm, CliError, InitMode, ResultRecord, RunConfig, Space};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Adaptive Fourier decomposition of sampled signals.
///
/// Exit codes: 0 ok, 2 input error, 3 check failed, 4 numerical degeneracy.
#[derive(Parser)]
#[command(name = "afd", version)]
struct Cli {
    /// Worker threads for grid searches (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a CSV signal and write a JSON result record.
    Decompose(DecomposeArgs),
    /// Export the time-frequency atoms of a result record.
    Tfd(TfdArgs),
    /// Mono-component, Bedrosian or uncertainty checks.
    Check(CheckArgs),
    /// Print grid and format information, or summarize a signal file.
    Info(InfoArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    /// CSV with columns t,value or t,re,im on t_j = 2πj/N.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Core)]
    algo: Algorithm,
    /// Maximum number of terms.
    #[arg(long, default_value_t = 50)]
    terms: usize,
    /// Stop once residual energy / source energy drops below this.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Tuple size for --algo cyclic.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Initial tuple for --algo cyclic.
    #[arg(long, value_enum, default_value_t = InitMode::Auto)]
    init: InitMode,
    /// Kernel space for --algo poafd.
    #[arg(long, value_enum, default_value_t = Space::Hardy)]
    space: Space,
    /// Search grid as ANGLESxRADII.
    #[arg(long, default_value = "64x32", value_parser = parse_pair)]
    grid: (usize, usize),
    /// Simplex diameter at which local refinement stops.
    #[arg(long, default_value_t = 1e-10)]
    refine_tol: f64,
    /// Seed for --init random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accept complex samples; the non-negative-frequency part is decomposed.
    #[arg(long)]
    complex: bool,
    /// Result path (defaults to the input path with a .json extension).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Suppress the energy table.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct TfdArgs {
    /// JSON result record from `afd decompose`.
    result: PathBuf,
    /// Atom CSV path (defaults to stdout).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Raster size as TIMExOMEGA bins.
    #[arg(long, default_value = "64x64", value_parser = parse_pair)]
    bins: (usize, usize),
    /// Also write the binned raster here.
    #[arg(long)]
    raster: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Non-negative analytic phase derivative (input t,value).
    Mono,
    /// H(ρ cos θ) = ρ sin θ (input t,rho,theta).
    Bedrosian,
    /// Uncertainty bound chain on a real-line grid (input t,value).
    Uncertainty,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
}

#[derive(Args)]
struct InfoArgs {
    /// Optional signal file to summarize.
    input: Option<PathBuf>,
    /// Treat the signal as complex.
    #[arg(long)]
    complex: bool,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let config = RunConfig {
        grid_len: 0,
        search_angles: args.grid.0,
        search_radii: args.grid.1,
        refine_tol: args.refine_tol,
        max_terms: args.terms,
        energy_tol: args.tol,
        algorithm: args.algo,
        space: args.space,
        tuple_size: args.n,
        init: args.init,
        seed: args.seed,
    };
    let signal = read_signal(&args.input)?;
    let record = decompose(&signal, &config, args.complex)?;
    let output = args.output.unwrap_or_else(|| args.input.with_extension("json"));
    record.write(&output)?;
    if !args.quiet {
        print!("{}", energy_table(&record));
        println!("wrote {}", output.display());
    }
    Ok(())
}

fn cmd_tfd(args: TfdArgs) -> Result<(), CliError> {
    let record = ResultRecord::read(&args.result)?;
    let atoms = record_tfd(&record)?;
    match &args.output {
        Some(path) => write_atoms(create(path)?, &atoms)?,
        None => write_atoms(io::stdout().lock(), &atoms)?,
    }
    if let Some(path) = &args.raster {
        let raster = rasterize(&atoms, args.bins.0, args.bins.1)?;
        write_raster(create(path)?, &raster)?;
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let outcome = match args.mode {
        Mode::Mono => check_mono(&read_signal(&args.input)?)?,
        Mode::Bedrosian => {
            let (rho, theta) = read_polar(&args.input)?;
            check_bedrosian(&rho, &theta)?
        }
        Mode::Uncertainty => check_uncertainty(&read_line_signal(&args.input)?)?,
    };
    print!("{}", outcome.report);
    if outcome.passed {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(CliError::CheckFailed(outcome.report.lines().next().unwrap_or("check").to_string()))
    }
}

fn cmd_info(args: InfoArgs) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    let w = |e| CliError::io("<stdout>", e);
    match args.input {
        None => {
            writeln!(out, "afd {}", env!("CARGO_PKG_VERSION")).map_err(w)?;
            writeln!(out, "algorithms: core uwa uwafd cyclic poafd").map_err(w)?;
            writeln!(out, "spaces:     hardy bergman").map_err(w)?;
            writeln!(out, "input:      CSV t,value | t,re,im with t_j = 2πj/N, N a power of two >= 8").map_err(w)?;
            writeln!(out, "result:     JSON, schema {}", afd::SCHEMA).map_err(w)?;
            writeln!(out, "exit codes: 0 ok, 2 input error, 3 check failed, 4 numerical degeneracy").map_err(w)?;
        }
        Some(path) => {
            let s = read_signal(&path)?;
            let f = hardy_part(&s, args.complex)?;
            writeln!(out, "samples      {}", s.len()).map_err(w)?;
            writeln!(out, "energy       {:.6e}", s.energy()).map_err(w)?;
            writeln!(out, "mean         {:.6e}{:+.6e}i", s.mean().re, s.mean().im).map_err(w)?;
            writeln!(out, "max |Im|     {:.3e}", s.max_imag()).map_err(w)?;
            writeln!(out, "series order {}", f.order()).map_err(w)?;
            writeln!(out, "hardy energy {:.6e}", f.energy()).map_err(w)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || match cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Tfd(a) => cmd_tfd(a),
        Command::Check(a) => cmd_check(a),
        Command::Info(a) => cmd_info(a),
    };
    let result = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool.install(run),
        Err(e) => Err(CliError::Config(e.to_string())),
    };
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("afd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
