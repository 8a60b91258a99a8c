//! Geometric side of the twisted heat trace formula
//!
//! ```text
//! tr e^{−tΔ_χ} = dim·Vol/(4π²) ∫_R e^{−t(λ²+1/4)} λπ tanh(λπ) dλ
//!              + e^{−t/4}/(2√(4πt)) Σ_{[γ]≠e} l tr χ(γ) e^{−l²/4t} / (n_Γ sinh(l/2))
//! ```
//!
//! and the spectral side for ingested eigenvalue tables.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::gauss_bonnet_volume;
use crate::quadrature::integrate_real;
use crate::summation::{par_sum_complex, Neumaier};
use crate::zeta_series::TwistedSpectrum;

/// Relative size of the certified hyperbolic tail against the identity term
/// above which the cutoff is declared insufficient.
pub const HEAT_TAIL_RTOL: f64 = 1e-6;

/// Largest cutoff considered when reporting the cutoff a run would need.
const MAX_REQUIRED_CUTOFF: f64 = 400.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceValue {
    pub value: Complex64,
    pub quadrature_error: f64,
    pub tail_bound: f64,
    pub t: f64,
    pub shifted: bool,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::BadT(t));
    }
    Ok(())
}

/// `∫_R e^{−t(λ²+1/4)} λπ tanh(λπ) dλ` and its error (quadrature plus the
/// Gaussian tail beyond `Λ = √(35/t)`).
pub fn plancherel_integral(t: f64) -> Result<(f64, f64)> {
    check_t(t)?;
    let cut = (35.0 / t).sqrt();
    let shift = (-0.25 * t).exp();
    let f = |x: f64| (-t * x * x).exp() * x * PI * (x * PI).tanh();
    let scale = PI / t;
    let (v, e) = integrate_real(f, 0.0, cut, 1e-13 * scale.max(1.0), 1e-15);
    let tail = PI * (-t * cut * cut).exp() / t;
    Ok((2.0 * v * shift, 2.0 * e * shift + tail * shift))
}

/// `dim·Vol/(4π²)` times the Plancherel integral.
pub fn identity_term(t: f64, dim: usize, genus: u32, shifted: bool) -> Result<TraceValue> {
    let (p, e) = plancherel_integral(t)?;
    let c = dim as f64 * gauss_bonnet_volume(genus)? / (4.0 * PI * PI);
    let s = if shifted { (0.25 * t).exp() } else { 1.0 };
    Ok(TraceValue {
        value: Complex64::new(c * p * s, 0.0),
        quadrature_error: c * e * s,
        tail_bound: 0.0,
        t,
        shifted,
    })
}

/// `2 sinh(l/2)`.
pub fn weyl_denominator(l: f64) -> f64 {
    2.0 * (0.5 * l).sinh()
}

fn prefactor(t: f64, shifted: bool) -> f64 {
    let g = 1.0 / (2.0 * (4.0 * PI * t).sqrt());
    if shifted {
        g
    } else {
        g * (-0.25 * t).exp()
    }
}

/// Certified bound on the hyperbolic terms with `l > cutoff`; valid once the
/// term envelope `u e^{cu} e^{−u²/4t} / sinh(u/2)` decreases, which holds for
/// `cutoff ≥ 2t(c + 1)`.
pub fn hyperbolic_tail(t: f64, tw: &TwistedSpectrum, cutoff: f64, shifted: bool) -> f64 {
    let c = tw.growth_exponent;
    let env = |u: f64| {
        let log = c * u - u * u / (4.0 * t) + u - (0.5 * u).sinh().ln();
        log.exp() * (1.0 - 1.0 / u)
    };
    let hi = cutoff.max(2.0 * t * (c + 1.5)) + 40.0 * t.sqrt() + 40.0;
    let (v, e) = integrate_real(env, cutoff, hi, 1e-40, 1e-10);
    tw.growth_constant * tw.dim as f64 * (v + e) * prefactor(t, shifted)
}

/// Smallest cutoff (to 1e−3) at which the tail criterion would hold.
pub fn required_cutoff(t: f64, tw: &TwistedSpectrum, scale: f64) -> f64 {
    let floor = 2.0 * t * (tw.growth_exponent + 1.0);
    let ok = |l: f64| l >= floor && hyperbolic_tail(t, tw, l, false) <= HEAT_TAIL_RTOL * scale;
    let (mut lo, mut hi) = (floor.max(1e-3), floor.max(1.0));
    while !ok(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_REQUIRED_CUTOFF {
            return f64::INFINITY;
        }
    }
    if ok(lo) {
        return lo;
    }
    while hi - lo > 1e-3 {
        let m = 0.5 * (lo + hi);
        if ok(m) {
            hi = m;
        } else {
            lo = m;
        }
    }
    hi
}

/// `e^{−t/4}/(2√(4πt)) Σ l tr χ(γ) e^{−l²/4t} / (n_Γ sinh(l/2))` (the
/// factor `e^{−t/4}` dropped when `shifted`). Refuses cutoffs whose
/// certified tail exceeds `HEAT_TAIL_RTOL` times the identity term.
pub fn hyperbolic_term(t: f64, tw: &TwistedSpectrum, shifted: bool) -> Result<TraceValue> {
    check_t(t)?;
    let scale = identity_term(t, tw.dim, tw.genus, false)?.value.re;
    let l = tw.cutoff;
    let tail_unshifted = hyperbolic_tail(t, tw, l, false);
    if l < 2.0 * t * (tw.growth_exponent + 1.0) || !(tail_unshifted <= HEAT_TAIL_RTOL * scale) {
        return Err(Error::CutoffInsufficient {
            t,
            cutoff: l,
            required: required_cutoff(t, tw, scale),
        });
    }
    let pre = prefactor(t, shifted);
    let sum = par_sum_complex(&tw.terms, |term| {
        let l = term.length;
        term.trace * (l * (-l * l / (4.0 * t)).exp() / (term.n_gamma as f64 * (0.5 * l).sinh()))
    });
    let s = if shifted { (0.25 * t).exp() } else { 1.0 };
    Ok(TraceValue {
        value: sum * pre,
        quadrature_error: 0.0,
        tail_bound: tail_unshifted * s,
        t,
        shifted,
    })
}

/// Identity term plus hyperbolic term.
pub fn geometric_heat_trace(t: f64, tw: &TwistedSpectrum, shifted: bool) -> Result<TraceValue> {
    let id = identity_term(t, tw.dim, tw.genus, shifted)?;
    let hyp = hyperbolic_term(t, tw, shifted)?;
    Ok(TraceValue {
        value: id.value + hyp.value,
        quadrature_error: id.quadrature_error,
        tail_bound: hyp.tail_bound,
        t,
        shifted,
    })
}

/// Eigenvalues `λ = 1/4 + μ²` with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralTable {
    pub entries: Vec<(Complex64, u32)>,
}

fn lambda_of(mu: Complex64) -> Complex64 {
    mu * mu + 0.25
}

impl SpectralTable {
    pub fn new(mut entries: Vec<(Complex64, u32)>) -> Result<Self> {
        if let Some((mu, _)) = entries.iter().find(|(_, m)| *m == 0) {
            return Err(Error::Parse(format!("multiplicity 0 for mu = {mu}")));
        }
        entries.sort_by(|a, b| {
            let (la, lb) = (lambda_of(a.0), lambda_of(b.0));
            la.re.total_cmp(&lb.re).then(la.im.total_cmp(&lb.im))
        });
        Ok(Self { entries })
    }

    /// Lines `re_mu,im_mu,multiplicity`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("spectral table line {}: {line:?}", no + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let re: f64 = f[0].parse().map_err(|_| bad())?;
            let im: f64 = f[1].parse().map_err(|_| bad())?;
            let m: u32 = f[2].parse().map_err(|_| bad())?;
            entries.push((Complex64::new(re, im), m));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lambdas(&self) -> impl Iterator<Item = (Complex64, u32)> + '_ {
        self.entries.iter().map(|(mu, m)| (lambda_of(*mu), *m))
    }
}

/// `Σ m e^{−tλ}` over the table.
pub fn spectral_side(table: &SpectralTable, t: f64) -> Complex64 {
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    for (lam, m) in table.lambdas() {
        let v = (-lam * t).exp() * m as f64;
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `|πλ tanh πλ − Σ_{|n| ≤ N odd} λ²/((n/2)² + λ²) − tail(N)|`, the tail
/// being the midpoint integral of the summand beyond the last odd n ≤ N.
pub fn tanh_partial_fraction_check(lambda: f64, n_max: u64) -> f64 {
    let l2 = 4.0 * lambda * lambda;
    let last = if n_max % 2 == 1 { n_max } else { n_max.saturating_sub(1) };
    let mut acc = Neumaier::default();
    let mut n = last;
    while n >= 1 {
        let nf = n as f64;
        acc.add(2.0 * l2 / (nf * nf + l2));
        if n < 2 {
            break;
        }
        n -= 2;
    }
    // Σ_{n odd > last} 2·4λ²/(n² + 4λ²) ≈ ∫_{last+1}^∞ 4λ²/(x² + 4λ²) dx (spacing 2)
    let tail = if lambda == 0.0 {
        0.0
    } else {
        let a = 2.0 * lambda;
        a * (0.5 * PI - ((last + 1) as f64 / a).atan())
    };
    let lhs = PI * lambda * (PI * lambda).tanh();
    (lhs - acc.value() - tail).abs()
}
