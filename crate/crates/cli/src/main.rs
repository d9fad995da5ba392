//! `interf`: batch sweeps from a TOML experiment file.
//!
//! Exit status is 0 on success, 1 for configuration or I/O errors and 2 when
//! some rows failed (those rows are still written, with an `error` cell).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use interferometry::sweep::{
    fit_scaling, run_overlap, run_photocurrent, run_roc, run_sensitivity, ConfigError, CutoffPolicy,
    ExperimentConfig, Format, SweepOutput, Table, OUT_DIR_ENV,
};

type Runner = fn(&ExperimentConfig) -> Result<SweepOutput, ConfigError>;

#[derive(Parser)]
#[command(name = "interf", version, about = "Binary interferometry sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and brute-force overlaps side by side.
    Overlap(RunArgs),
    /// Minimum detectable perturbation per grid point.
    Sensitivity(RunArgs),
    /// Analytic and Helstrom ROC curves.
    Roc(RunArgs),
    /// Twin-beam difference-photocurrent detection probabilities.
    Photocurrent(RunArgs),
    /// Log-log least-squares fit of two columns of a previous output.
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the config: a fixed dimension or `auto`.
    #[arg(long)]
    cutoff: Option<CutoffPolicy>,
    /// Reserved. All computations are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OutArgs {
    /// Output file. Falls back to the config, then to `$INTERF_OUT_DIR/<command>.<ext>`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct FitArgs {
    /// CSV or JSONL table (by extension).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "n")]
    x: String,
    #[arg(long, default_value = "lambda_min")]
    y: String,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Config(String),
    Rows(usize),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Rows(n)) => {
            eprintln!("{n} row(s) failed; see the `error` column");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (name, args, runner): (_, _, Runner) = match cli.command {
        Command::Overlap(a) => ("overlap", a, run_overlap),
        Command::Sensitivity(a) => ("sensitivity", a, run_sensitivity),
        Command::Roc(a) => ("roc", a, run_roc),
        Command::Photocurrent(a) => ("photocurrent", a, run_photocurrent),
        Command::Fit(a) => return fit(a),
    };
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(policy) = args.cutoff {
        (cfg.cutoff.policy, cfg.cutoff.dim) = match policy {
            CutoffPolicy::Auto => (Some("auto".into()), None),
            CutoffPolicy::Fixed(d) => (Some("fixed".into()), Some(d)),
        };
    }
    let _ = args.seed;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    let out = pool.install(|| runner(&cfg))?;
    let format = args.out.format.unwrap_or(cfg.output.format);
    let path = args.out.out.clone().or_else(|| cfg.output.path.clone());
    emit(&out.table, name, path, format)?;
    match out.failures {
        0 => Ok(()),
        n => Err(Failure::Rows(n)),
    }
}

fn fit(a: FitArgs) -> Result<(), Failure> {
    let file = File::open(&a.input).map_err(|e| Failure::Config(format!("cannot read {}: {e}", a.input.display())))?;
    let is_jsonl = a.input.extension().is_some_and(|e| e == "jsonl");
    let table = if is_jsonl { Table::read_jsonl(file) } else { Table::read_csv(file) }
        .map_err(|e| Failure::Config(e.to_string()))?;
    let f = fit_scaling(&table, &a.x, &a.y).map_err(|e| Failure::Config(e.to_string()))?;
    let mut out = Table::new(["x", "y", "slope", "intercept", "stderr", "points"]);
    out.push(vec![
        a.x.as_str().into(),
        a.y.as_str().into(),
        f.slope.into(),
        f.intercept.into(),
        f.stderr.into(),
        f.points.into(),
    ]);
    emit(&out, "fit", a.out.out, a.out.format.unwrap_or_default())
}

fn emit(table: &Table, name: &str, path: Option<PathBuf>, format: Format) -> Result<(), Failure> {
    let path = path.or_else(|| {
        std::env::var_os(OUT_DIR_ENV).map(|d| Path::new(&d).join(format!("{name}.{}", format.extension())))
    });
    let io_err = |p: &Path, e: io::Error| Failure::Config(format!("cannot write {}: {e}", p.display()));
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            }
            let file = File::create(&p).map_err(|e| io_err(&p, e))?;
            let mut w = BufWriter::new(file);
            table.write(&mut w, format).and_then(|_| w.flush()).map_err(|e| io_err(&p, e))
        }
        None => {
            let stdout = io::stdout();
            table
                .write(stdout.lock(), format)
                .map_err(|e| Failure::Config(format!("stdout: {e}")))
        }
    }
}
