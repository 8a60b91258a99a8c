//! `zeta-lab`: enumerate length spectra, evaluate twisted zeta series, heat
//! traces and functional-equation checks.
//!
//! Exit codes: 0 success, 1 error, 2 usage, 3 a self-check outside its
//! tolerance.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FeArgs, FeCheck, SideArg, Which};
use config::{FileConfig, OutputFormat, Overrides, CACHE_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "zeta-lab",
    version,
    about = "Twisted Selberg/Ruelle zeta numerics on the genus-2 octagon surface"
)]
struct Cli {
    /// TOML file with defaults for the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores); results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Directory of spectrum caches (overrides ZETA_LAB_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Explicit spectrum cache file
    #[arg(long, global = true)]
    spectrum_cache: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Enumerate all conjugacy classes up to a length cutoff and write the cache file
    Enumerate {
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        max_length: Option<f64>,
        /// Spectrum file to write (default: the cache path)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate log Z, log R or the log derivative L at s
    Eval {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Representation TOML file (default: trivial, dim 1)
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        max_length: Option<f64>,
    },
    /// Geometric side of the heat trace on a grid of t
    Trace {
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Trace of exp(-t(Δ - 1/4)) instead of exp(-tΔ)
        #[arg(long)]
        shifted: bool,
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        max_length: Option<f64>,
        /// Eigenvalue table (re_mu,im_mu,multiplicity per line) to compare against
        #[arg(long)]
        spectral_file: Option<PathBuf>,
    },
    /// Functional-equation checks
    Fe {
        #[arg(long, value_enum)]
        check: FeCheck,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// +1, -1 or both
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        side: SideArg,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long)]
        spectral_file: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    let mut flags = Overrides {
        cache_dir: cli.cache_dir.clone(),
        spectrum_cache: cli.spectrum_cache.clone(),
        threads: cli.threads,
        format: cli.format,
        ..Default::default()
    };
    match &cli.cmd {
        Cmd::Enumerate { genus, max_length, .. } => {
            flags.genus = *genus;
            flags.cutoff = *max_length;
        }
        Cmd::Eval { rep, max_length, .. } | Cmd::Trace { rep, max_length, .. } => {
            flags.rep_path = rep.clone();
            flags.cutoff = *max_length;
        }
        Cmd::Fe { .. } => {}
    }
    let env_cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let cfg = config::resolve(flags, file, env_cache).map_err(Failure::Usage)?;
    if cfg.thread_budget > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.thread_budget)
            .build_global()
            .map_err(|e| Failure::Run(e.to_string()))?;
    }
    let complex = |s: &str| commands::parse_complex(s).map_err(Failure::Usage);
    let err = |e: zeta_lab_core::Error| Failure::Run(e.to_string());
    let report = match &cli.cmd {
        Cmd::Enumerate { output, .. } => commands::enumerate(&cfg, output.as_deref()).map_err(err)?,
        Cmd::Eval { which, s, .. } => commands::eval(&cfg, *which, complex(s)?).map_err(err)?,
        Cmd::Trace {
            t,
            shifted,
            spectral_file,
            ..
        } => commands::trace(&cfg, t, *shifted, spectral_file.as_deref()).map_err(err)?,
        Cmd::Fe {
            check,
            s,
            side,
            eps,
            kmax,
            dim,
            genus,
            spectral_file,
        } => {
            let s = s.as_deref().map(complex).transpose()?;
            let args = FeArgs {
                check: *check,
                s,
                side: *side,
                eps,
                kmax: *kmax,
                dim: *dim,
                genus: *genus,
                spectral: spectral_file.as_deref(),
            };
            commands::fe(&cfg, &args).map_err(err)?
        }
    };
    let text = report.render(cfg.output_format);
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Run(e.to_string()))?;
    Ok(report.checks_passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("self-check outside tolerance");
            ExitCode::from(3)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
