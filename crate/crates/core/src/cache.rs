//! Length-spectrum cache files.
//!
//! ```text
//! # genus=2 cutoff=<L> slope=<σ> offset=<τ> safety=1.15
//! length,n_gamma,abs_trace,canonical_word,primitive_root
//! 3.0571418390741942e0,1,4.8284271247461898e0,a1.b1.a2.b2,a1.b1.a2.b2
//! ```
//!
//! Reals are written with 17 significant digits, which round-trips f64.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spectrum::{word_length_bound, Certificate, ConjugacyClassRecord, LengthSpectrum};
use crate::words::Word;

pub const HEADER: &str = "length,n_gamma,abs_trace,canonical_word,primitive_root";

/// `spectrum-g<genus>-L<cutoff>.csv`.
pub fn cache_file_name(genus: u32, cutoff: f64) -> String {
    format!("spectrum-g{genus}-L{cutoff}.csv")
}

pub fn to_csv(spec: &LengthSpectrum) -> String {
    let c = &spec.completeness;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# genus={} cutoff={} slope={:.16e} offset={:.16e} safety={}",
        spec.genus, spec.cutoff, c.calibration_slope, c.calibration_offset, c.safety_factor
    );
    out.push_str(HEADER);
    out.push('\n');
    for r in &spec.records {
        let _ = writeln!(
            out,
            "{:.16e},{},{:.16e},{},{}",
            r.length, r.n_gamma, r.abs_trace, r.canonical_word, r.primitive_root
        );
    }
    out
}

fn header_field<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("cache header lacks {key}")))
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

pub fn from_csv(text: &str) -> Result<LengthSpectrum> {
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| Error::Parse("empty cache file".into()))?;
    if !first.starts_with('#') {
        return Err(Error::Parse("cache file must start with a # header".into()));
    }
    let genus: u32 = num(header_field(first, "genus")?, "genus")?;
    let cutoff: f64 = num(header_field(first, "cutoff")?, "cutoff")?;
    let slope: f64 = num(header_field(first, "slope")?, "slope")?;
    let offset: f64 = num(header_field(first, "offset")?, "offset")?;
    let safety: f64 = num(header_field(first, "safety")?, "safety")?;
    if lines.next().map(str::trim) != Some(HEADER) {
        return Err(Error::Parse(format!("second line must be {HEADER:?}")));
    }
    let mut records = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(Error::Parse(format!("cache row has {} fields: {line:?}", f.len())));
        }
        records.push(ConjugacyClassRecord {
            length: num(f[0], "length")?,
            n_gamma: num(f[1], "n_gamma")?,
            abs_trace: num(f[2], "abs_trace")?,
            canonical_word: Word::parse(f[3].trim())?,
            primitive_root: Word::parse(f[4].trim())?,
        });
    }
    Ok(LengthSpectrum {
        genus,
        records,
        cutoff,
        completeness: Certificate {
            word_length_bound: word_length_bound(cutoff, slope, offset),
            calibration_slope: slope,
            calibration_offset: offset,
            safety_factor: safety,
        },
    })
}

/// Writes `text` to `path` through a temporary file in the same directory
/// and a rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::from(e)
    })
}

pub fn save(spec: &LengthSpectrum, path: &Path) -> Result<()> {
    write_atomic(path, &to_csv(spec))
}

pub fn load(path: &Path) -> Result<LengthSpectrum> {
    from_csv(&std::fs::read_to_string(path)?)
}
