//! Run configuration: command-line flags over `ZETA_LAB_CACHE_DIR` over the
//! optional TOML config file over defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const CACHE_ENV: &str = "ZETA_LAB_CACHE_DIR";
pub const DEFAULT_CUTOFF: f64 = 12.0;
pub const DEFAULT_CACHE_DIR: &str = ".zeta-lab-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// η detour-side independence.
    pub side: f64,
    /// `|η(s)η(1−s) − 1|`.
    pub reflection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            side: 1e-8,
            reflection: 1e-9,
        }
    }
}

/// Contents of a `--config` file; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub genus: Option<u32>,
    pub cutoff: Option<f64>,
    pub rep_path: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub spectrum_cache: Option<PathBuf>,
    pub threads: Option<usize>,
    pub format: Option<OutputFormat>,
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub genus: u32,
    pub cutoff: f64,
    pub rep_path: Option<PathBuf>,
    pub spectrum_cache: PathBuf,
    pub tolerances: Tolerances,
    /// 0 = machine parallelism.
    pub thread_budget: usize,
    pub output_format: OutputFormat,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub genus: Option<u32>,
    pub cutoff: Option<f64>,
    pub rep_path: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub spectrum_cache: Option<PathBuf>,
    pub threads: Option<usize>,
    pub format: Option<OutputFormat>,
}

pub fn resolve(flags: Overrides, file: FileConfig, env_cache: Option<PathBuf>) -> Result<RunConfig, String> {
    let genus = flags.genus.or(file.genus).unwrap_or(2);
    let cutoff = flags.cutoff.or(file.cutoff).unwrap_or(DEFAULT_CUTOFF);
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(format!("cutoff must be positive (got {cutoff})"));
    }
    let tolerances = file.tolerances.unwrap_or_default();
    if !(tolerances.side > 0.0 && tolerances.reflection > 0.0) {
        return Err("tolerances must be positive".into());
    }
    let dir = flags
        .cache_dir
        .or(env_cache)
        .or(file.cache_dir)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
    let spectrum_cache = flags
        .spectrum_cache
        .or(file.spectrum_cache)
        .unwrap_or_else(|| dir.join(zeta_lab_core::cache::cache_file_name(genus, cutoff)));
    Ok(RunConfig {
        genus,
        cutoff,
        rep_path: flags.rep_path.or(file.rep_path),
        spectrum_cache,
        tolerances,
        thread_budget: flags.threads.or(file.threads).unwrap_or(0),
        output_format: flags.format.or(file.format).unwrap_or(OutputFormat::Csv),
    })
}
