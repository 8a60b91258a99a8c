//! The four subcommands. Each returns a [`Report`].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use zeta_lab_core::functional_eq::{
    asy_ratio, eta, ruelle_fe_rhs, singularity_catalog, zero_order_prediction, SingularitySource,
};
use zeta_lab_core::hyperbolic::{gauss_bonnet_volume, octagon_presentation};
use zeta_lab_core::representation::FlatRepresentation;
use zeta_lab_core::spectrum::{enumerate_classes_with, EnumerationOptions, LengthSpectrum};
use zeta_lab_core::trace_formula::{hyperbolic_term, identity_term, spectral_side, SpectralTable};
use zeta_lab_core::zeta_series::TwistedSpectrum;
use zeta_lab_core::{cache, Error};

use crate::config::RunConfig;
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Selberg,
    Ruelle,
    Logderiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FeCheck {
    Eta,
    Rufe,
    Asy,
    Catalog,
    ZeroOrder,
}

/// Detour side selection for `fe --check eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    Plus,
    Minus,
    Both,
}

impl std::str::FromStr for SideArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "+1" | "1" | "plus" => Ok(SideArg::Plus),
            "-1" | "minus" => Ok(SideArg::Minus),
            "both" => Ok(SideArg::Both),
            _ => Err(format!("side must be +1, -1 or both (got {s:?})")),
        }
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, with optional exponents.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}");
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

fn genus_two(genus: u32) -> Result<(), Error> {
    if genus != 2 {
        return Err(Error::UnsupportedGenus(genus));
    }
    Ok(())
}

/// Loads the cached spectrum, enumerating and caching it when absent.
/// A cache with a larger cutoff is truncated.
pub fn spectrum(cfg: &RunConfig) -> Result<LengthSpectrum, Error> {
    genus_two(cfg.genus)?;
    let path = &cfg.spectrum_cache;
    if path.exists() {
        let mut spec = cache::load(path)?;
        if spec.genus != cfg.genus {
            return Err(Error::Parse(format!(
                "{} holds a genus-{} spectrum",
                path.display(),
                spec.genus
            )));
        }
        if spec.cutoff < cfg.cutoff {
            return Err(Error::BeyondCutoff {
                r: cfg.cutoff,
                cutoff: spec.cutoff,
            });
        }
        spec.records.retain(|r| r.length <= cfg.cutoff);
        spec.cutoff = cfg.cutoff;
        return Ok(spec);
    }
    let pres = octagon_presentation(cfg.genus)?;
    let (spec, _) = enumerate_classes_with(&pres, cfg.cutoff, EnumerationOptions::default())?;
    cache::save(&spec, path)?;
    Ok(spec)
}

fn representation(cfg: &RunConfig, spec: &LengthSpectrum) -> Result<FlatRepresentation, Error> {
    let pres = octagon_presentation(cfg.genus)?;
    let rep = match &cfg.rep_path {
        Some(p) => FlatRepresentation::load(p, &pres)?,
        None => FlatRepresentation::trivial(&pres, 1)?,
    };
    rep.with_critical_exponent(spec)
}

pub fn enumerate(cfg: &RunConfig, output: Option<&Path>) -> Result<Report, Error> {
    genus_two(cfg.genus)?;
    let pres = octagon_presentation(cfg.genus)?;
    let (spec, stats) = enumerate_classes_with(&pres, cfg.cutoff, EnumerationOptions::default())?;
    let path: PathBuf = output.map_or_else(|| cfg.spectrum_cache.clone(), Path::to_path_buf);
    cache::save(&spec, &path)?;
    let c = &spec.completeness;
    let mut r = Report::new(&[
        "genus",
        "cutoff",
        "classes",
        "primitive_classes",
        "systole",
        "word_length_bound",
        "calibration_slope",
        "calibration_offset",
        "safety_factor",
        "ball_radius",
        "file",
    ]);
    r.push(vec![
        spec.genus.into(),
        spec.cutoff.into(),
        spec.records.len().into(),
        spec.records.iter().filter(|x| x.n_gamma == 1).count().into(),
        spec.systole().into(),
        c.word_length_bound.into(),
        c.calibration_slope.into(),
        c.calibration_offset.into(),
        c.safety_factor.into(),
        stats.ball_radius.into(),
        path.display().to_string().into(),
    ]);
    Ok(r)
}

pub fn eval(cfg: &RunConfig, which: Which, s: Complex64) -> Result<Report, Error> {
    let spec = spectrum(cfg)?;
    let rep = representation(cfg, &spec)?;
    let tw = TwistedSpectrum::new(&spec, &rep)?;
    let v = match which {
        Which::Selberg => tw.log_selberg(s)?,
        Which::Ruelle => tw.log_ruelle(s)?,
        Which::Logderiv => tw.log_derivative(s)?,
    };
    let name = match which {
        Which::Selberg => "log_selberg",
        Which::Ruelle => "log_ruelle",
        Which::Logderiv => "log_derivative",
    };
    let mut r = Report::new(&[
        "which",
        "s_re",
        "s_im",
        "value_re",
        "value_im",
        "tail_bound",
        "abscissa",
        "c_hat",
        "dim",
        "cutoff",
        "classes",
    ]);
    r.push(vec![
        name.into(),
        s.re.into(),
        s.im.into(),
        v.value.re.into(),
        v.value.im.into(),
        v.tail_bound.into(),
        tw.abscissa().into(),
        rep.c_hat.into(),
        rep.dim.into(),
        v.cutoff_used.into(),
        spec.records.len().into(),
    ]);
    Ok(r)
}

/// Small-t tolerance on `4πt·trace/(dim·Vol)`, checked for t ≤ 0.05.
fn weyl_tolerance(t: f64) -> Option<f64> {
    (t <= 0.05).then(|| (2.0 * t).max(1e-3))
}

pub fn trace(cfg: &RunConfig, ts: &[f64], shifted: bool, spectral: Option<&Path>) -> Result<Report, Error> {
    let spec = spectrum(cfg)?;
    let rep = representation(cfg, &spec)?;
    let tw = TwistedSpectrum::new(&spec, &rep)?;
    let table = spectral.map(SpectralTable::load).transpose()?;
    let vol = gauss_bonnet_volume(cfg.genus)?;
    let mut r = Report::new(&[
        "t",
        "shifted",
        "identity",
        "hyperbolic_re",
        "hyperbolic_im",
        "total_re",
        "total_im",
        "quadrature_error",
        "tail_bound",
        "weyl_ratio",
        "weyl_tolerance",
        "weyl_pass",
        "spectral_re",
        "spectral_im",
        "discrepancy",
    ]);
    for &t in ts {
        let id = identity_term(t, rep.dim, cfg.genus, shifted)?;
        let hyp = hyperbolic_term(t, &tw, shifted)?;
        let total = id.value + hyp.value;
        let weyl = 4.0 * PI * t * total.re / (rep.dim as f64 * vol);
        let tol = if shifted { None } else { weyl_tolerance(t) };
        let pass = tol.map(|e| (weyl - 1.0).abs() <= e);
        if pass == Some(false) {
            r.checks_passed = false;
        }
        let sp = table.as_ref().map(|tb| {
            let v = spectral_side(tb, t) * if shifted { (0.25 * t).exp() } else { 1.0 };
            (v, (v - total).norm())
        });
        r.push(vec![
            t.into(),
            shifted.into(),
            id.value.re.into(),
            hyp.value.re.into(),
            hyp.value.im.into(),
            total.re.into(),
            total.im.into(),
            id.quadrature_error.into(),
            hyp.tail_bound.into(),
            weyl.into(),
            tol.into(),
            pass.into(),
            sp.map(|x| x.0.re).into(),
            sp.map(|x| x.0.im).into(),
            sp.map(|x| x.1).into(),
        ]);
    }
    Ok(r)
}

pub struct FeArgs<'a> {
    pub check: FeCheck,
    pub s: Option<Complex64>,
    pub side: SideArg,
    pub eps: &'a [f64],
    pub kmax: u32,
    pub dim: usize,
    pub genus: u32,
    pub spectral: Option<&'a Path>,
}

/// Tolerances on `|asy_ratio(ε) − 1|` at the reference points.
fn asy_tolerance(eps: f64) -> Option<f64> {
    [(1e-2, 0.15), (1e-3, 0.03), (1e-4, 0.01)]
        .iter()
        .find(|(e, _)| *e == eps)
        .map(|(_, t)| *t)
}

pub fn fe(cfg: &RunConfig, a: &FeArgs) -> Result<Report, Error> {
    let need_s = || a.s.ok_or_else(|| Error::Parse("--s is required for this check".into()));
    match a.check {
        FeCheck::Eta => {
            let s = need_s()?;
            let sides: &[i8] = match a.side {
                SideArg::Plus => &[1],
                SideArg::Minus => &[-1],
                SideArg::Both => &[1, -1],
            };
            let mut vals = Vec::new();
            for &side in sides {
                let v = eta(s, a.dim, a.genus, side)?;
                let refl = v * eta(Complex64::new(1.0, 0.0) - s, a.dim, a.genus, side)?;
                vals.push((side, v, refl));
            }
            let diff = (vals.len() == 2).then(|| (vals[0].1 - vals[1].1).norm());
            let mut r = Report::new(&[
                "check",
                "s_re",
                "s_im",
                "side",
                "value_re",
                "value_im",
                "reflection_re",
                "reflection_im",
                "reflection_error",
                "reflection_tolerance",
                "side_difference",
                "side_tolerance",
                "pass",
            ]);
            for (side, v, refl) in vals {
                let err = (refl - 1.0).norm();
                let pass = err <= cfg.tolerances.reflection && diff.map_or(true, |d| d <= cfg.tolerances.side);
                r.checks_passed &= pass;
                r.push(vec![
                    "eta".into(),
                    s.re.into(),
                    s.im.into(),
                    side.into(),
                    v.re.into(),
                    v.im.into(),
                    refl.re.into(),
                    refl.im.into(),
                    err.into(),
                    cfg.tolerances.reflection.into(),
                    diff.into(),
                    cfg.tolerances.side.into(),
                    pass.into(),
                ]);
            }
            Ok(r)
        }
        FeCheck::Rufe => {
            let s = need_s()?;
            let v = ruelle_fe_rhs(s, a.dim, a.genus)?;
            let mut r = Report::new(&[
                "check",
                "s_re",
                "s_im",
                "value_re",
                "value_im",
                "modulus",
                "deviation_from_one",
            ]);
            r.push(vec![
                "rufe".into(),
                s.re.into(),
                s.im.into(),
                v.re.into(),
                v.im.into(),
                v.norm().into(),
                (v - 1.0).norm().into(),
            ]);
            Ok(r)
        }
        FeCheck::Asy => {
            if a.eps.is_empty() {
                return Err(Error::Parse("--eps is required for the asy check".into()));
            }
            let mut r = Report::new(&["check", "eps", "ratio", "deviation", "tolerance", "improving", "pass"]);
            let mut prev: Option<f64> = None;
            for &e in a.eps {
                let ratio = asy_ratio(e)?;
                let dev = (ratio - 1.0).abs();
                let tol = asy_tolerance(e);
                let improving = prev.map(|p| dev < p);
                let pass = tol.map_or(true, |t| dev <= t) && improving.unwrap_or(true);
                r.checks_passed &= pass;
                prev = Some(dev);
                r.push(vec![
                    "asy".into(),
                    e.into(),
                    ratio.into(),
                    dev.into(),
                    tol.into(),
                    improving.into(),
                    pass.into(),
                ]);
            }
            Ok(r)
        }
        FeCheck::Catalog => {
            let table = match a.spectral {
                Some(p) => SpectralTable::load(p)?,
                None => SpectralTable::default(),
            };
            let cat = singularity_catalog(&table, a.dim, a.genus, a.kmax)?;
            let mut r = Report::new(&["check", "re", "im", "order", "source"]);
            for e in cat.entries {
                let src = match e.source {
                    SingularitySource::Spectral => "spectral",
                    SingularitySource::TrivialLadder => "trivial-ladder",
                    SingularitySource::Merged => "merged",
                };
                r.push(vec![
                    "catalog".into(),
                    e.location.re.into(),
                    e.location.im.into(),
                    e.order.into(),
                    src.into(),
                ]);
            }
            Ok(r)
        }
        FeCheck::ZeroOrder => {
            let (order, lead) = zero_order_prediction(a.dim, a.genus)?;
            let mut r = Report::new(&["check", "dim", "genus", "order", "leading_magnitude"]);
            r.push(vec![
                "zero-order".into(),
                a.dim.into(),
                a.genus.into(),
                order.into(),
                Cell::Real(lead),
            ]);
            Ok(r)
        }
    }
}
