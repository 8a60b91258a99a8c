//! Truncated Dirichlet series for log Z(s;χ), log R(s;χ) and the log
//! derivative L(s;χ) over an enumerated length spectrum, with tail bounds.
//!
//! Tails use an empirical envelope for the growth of the counting function
//! beyond the cutoff,
//!
//! ```text
//! N(u) − N(L) ≤ C (e^u/u − e^L/L),   C = 2 · max_{L/2 ≤ R ≤ L} N(R) R e^{−R},
//! ```
//!
//! and the trace bound `|tr χ(γ)| ≤ dim · e^{c l(γ)}` with `c = ĉ + δ_c`.
//! For a decreasing term envelope f this gives
//! `Σ_{l > L} f(l) ≤ C ∫_L^∞ f(u) e^u (1/u − 1/u²) du`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::representation::{FlatRepresentation, DEFAULT_DELTA_C};
use crate::spectrum::LengthSpectrum;
use crate::summation::par_sum_complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub cutoff_used: f64,
    pub s: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub length: f64,
    pub n_gamma: u32,
    pub trace: Complex64,
}

/// Spectrum with the character values of one representation attached.
#[derive(Debug, Clone)]
pub struct TwistedSpectrum {
    pub terms: Vec<Term>,
    pub cutoff: f64,
    pub genus: u32,
    pub dim: usize,
    /// `ĉ + δ_c`.
    pub growth_exponent: f64,
    /// Envelope constant `C` of the counting-function increments.
    pub growth_constant: f64,
}

/// `2 · max N(R) R e^{−R}` over the jumps of N in `[L/2, L]` (and R = L).
pub fn growth_constant(spec: &LengthSpectrum) -> Result<f64> {
    let recs = &spec.records;
    if recs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let l = spec.cutoff;
    let mut best = recs.len() as f64 * l * (-l).exp();
    for (i, r) in recs.iter().enumerate() {
        let last_of_length = i + 1 == recs.len() || recs[i + 1].length > r.length;
        if last_of_length && r.length >= 0.5 * l {
            best = best.max((i + 1) as f64 * r.length * (-r.length).exp());
        }
    }
    Ok(2.0 * best)
}

/// `c_χ + δ_c + 1` with the default slack.
pub fn convergence_abscissa(rep: &FlatRepresentation) -> f64 {
    rep.c_hat + DEFAULT_DELTA_C + 1.0
}

impl TwistedSpectrum {
    pub fn new(spec: &LengthSpectrum, rep: &FlatRepresentation) -> Result<Self> {
        Self::with_slack(spec, rep, DEFAULT_DELTA_C)
    }

    pub fn with_slack(spec: &LengthSpectrum, rep: &FlatRepresentation, delta_c: f64) -> Result<Self> {
        let growth_constant = growth_constant(spec)?;
        let terms = spec
            .records
            .iter()
            .map(|r| Term {
                length: r.length,
                n_gamma: r.n_gamma,
                trace: rep.trace_of(&r.canonical_word),
            })
            .collect();
        Ok(Self {
            terms,
            cutoff: spec.cutoff,
            genus: spec.genus,
            dim: rep.dim,
            growth_exponent: rep.c_hat + delta_c,
            growth_constant,
        })
    }

    pub fn abscissa(&self) -> f64 {
        self.growth_exponent + 1.0
    }

    fn check(&self, s: Complex64) -> Result<f64> {
        let a = self.abscissa();
        if !(s.re > a) {
            return Err(Error::OutsideHalfPlane {
                re_s: s.re,
                abscissa: a,
            });
        }
        Ok(s.re - self.growth_exponent)
    }

    fn value(&self, s: Complex64, v: Complex64, tail_bound: f64) -> ZetaValue {
        ZetaValue {
            value: v,
            tail_bound,
            cutoff_used: self.cutoff,
            s,
        }
    }

    /// `C · K · ∫_L^∞ e^{(1−κ)u} (1/u − 1/u²) du`, bounded by
    /// `C K e^{(1−κ)L} / (L (κ − 1))`.
    pub(crate) fn tail(&self, kappa: f64, k: f64) -> f64 {
        let l = self.cutoff;
        self.growth_constant * k * ((1.0 - kappa) * l).exp() / (l * (kappa - 1.0))
    }

    /// `log Z(s;χ) = −Σ tr χ(γ) e^{−s l} / (n_Γ (1 − e^{−l}))`.
    pub fn log_selberg(&self, s: Complex64) -> Result<ZetaValue> {
        let kappa = self.check(s)?;
        let v = -par_sum_complex(&self.terms, |t| {
            t.trace * (-s * t.length).exp() / (t.n_gamma as f64 * (1.0 - (-t.length).exp()))
        });
        let k = self.dim as f64 / (1.0 - (-self.cutoff).exp());
        Ok(self.value(s, v, self.tail(kappa, k)))
    }

    /// `log R(s;χ) = −Σ tr χ(γ) e^{−s l} / n_Γ`.
    pub fn log_ruelle(&self, s: Complex64) -> Result<ZetaValue> {
        let kappa = self.check(s)?;
        let v = -par_sum_complex(&self.terms, |t| t.trace * (-s * t.length).exp() / t.n_gamma as f64);
        Ok(self.value(s, v, self.tail(kappa, self.dim as f64)))
    }

    /// `L(s;χ) = Σ l tr χ(γ) e^{−(s−1/2) l} / (2 n_Γ sinh(l/2))`.
    pub fn log_derivative(&self, s: Complex64) -> Result<ZetaValue> {
        let kappa = self.check(s)?;
        let v = par_sum_complex(&self.terms, |t| {
            t.trace * t.length * (-(s - 0.5) * t.length).exp() / (2.0 * t.n_gamma as f64 * (0.5 * t.length).sinh())
        });
        // envelope u e^{−κu}: the 1/u factor cancels against u
        let l = self.cutoff;
        let k = self.dim as f64 / (1.0 - (-l).exp());
        let tail = self.growth_constant * k * ((1.0 - kappa) * l).exp() / (kappa - 1.0);
        Ok(self.value(s, v, tail))
    }

    /// `|log R(s) − log Z(s) + log Z(s+1)|` and the sum of the three tails.
    pub fn ruelle_selberg_residual(&self, s: Complex64) -> Result<(f64, f64)> {
        let r = self.log_ruelle(s)?;
        let z0 = self.log_selberg(s)?;
        let z1 = self.log_selberg(s + 1.0)?;
        Ok((
            (r.value - z0.value + z1.value).norm(),
            r.tail_bound + z0.tail_bound + z1.tail_bound,
        ))
    }
}

pub fn log_selberg(s: Complex64, spec: &LengthSpectrum, rep: &FlatRepresentation) -> Result<ZetaValue> {
    TwistedSpectrum::new(spec, rep)?.log_selberg(s)
}

pub fn log_ruelle(s: Complex64, spec: &LengthSpectrum, rep: &FlatRepresentation) -> Result<ZetaValue> {
    TwistedSpectrum::new(spec, rep)?.log_ruelle(s)
}

pub fn log_derivative_l(s: Complex64, spec: &LengthSpectrum, rep: &FlatRepresentation) -> Result<ZetaValue> {
    TwistedSpectrum::new(spec, rep)?.log_derivative(s)
}

pub fn ruelle_selberg_residual(s: Complex64, spec: &LengthSpectrum, rep: &FlatRepresentation) -> Result<f64> {
    TwistedSpectrum::new(spec, rep)?
        .ruelle_selberg_residual(s)
        .map(|(r, _)| r)
}
