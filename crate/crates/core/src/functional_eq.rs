//! Functional-equation integrals of `r tan πr`, the factor η(s), the
//! predicted value of R(s)R(−s), the behaviour of exp A(−ε) near zero and
//! the catalog of zeta singularities.
//!
//! `r tan πr` has simple poles at the half-integers `k + 1/2` with residue
//! `−(k + 1/2)/π`. Straight paths through a pole are deformed by a
//! semicircle of radius 1e−2 (smaller only when an endpoint is closer), on
//! the side chosen by the caller: side `+1` leaves the pole to the right of
//! the path, `−1` to the left. Poles close to but not on the path are
//! bypassed on the side the straight path already passes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::gauss_bonnet_volume;
use crate::quadrature::{integrate_arc, integrate_real, integrate_segment, tanh_sinh};
use crate::trace_formula::SpectralTable;

/// Detour radius around half-integer poles.
pub const DETOUR_RADIUS: f64 = 1e-2;

/// Endpoints closer than this to a pole are rejected.
pub const POLE_GUARD: f64 = 1e-3;

const FE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathDescriptor {
    pub endpoints: (Complex64, Complex64),
    /// Smallest detour radius used (the default radius when no detour).
    pub detour_radius: f64,
    pub detour_side: i8,
    pub detours: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FEIntegral {
    pub value: Complex64,
    pub path: PathDescriptor,
    pub quadrature_error: f64,
}

fn integrand(z: Complex64) -> Complex64 {
    z * (z * PI).tan()
}

fn nearest_pole(z: Complex64) -> f64 {
    (z.re - 0.5).round() + 0.5
}

fn guard(z: Complex64) -> Result<()> {
    let p = nearest_pole(z);
    let d = (z - Complex64::new(p, 0.0)).norm();
    if d < POLE_GUARD {
        return Err(Error::EndpointAtPole {
            endpoint: format!("{z}"),
            pole: p,
            distance: d,
        });
    }
    Ok(())
}

struct Detour {
    pole: Complex64,
    radius: f64,
    enter: f64,
    leave: f64,
    th0: f64,
    th1: f64,
}

/// `∫ r tan(πr) dr` from `z0` to `z1` along the straight segment with pole
/// detours on `side`.
pub fn fe_integral(z0: Complex64, z1: Complex64, side: i8) -> Result<FEIntegral> {
    if side != 1 && side != -1 {
        return Err(Error::Parse(format!("detour side must be +1 or -1 (got {side})")));
    }
    guard(z0)?;
    guard(z1)?;
    let mut path = PathDescriptor {
        endpoints: (z0, z1),
        detour_radius: DETOUR_RADIUS,
        detour_side: side,
        detours: 0,
    };
    if z0 == z1 {
        return Ok(FEIntegral {
            value: Complex64::new(0.0, 0.0),
            path,
            quadrature_error: 0.0,
        });
    }
    let d = z1 - z0;
    let len = d.norm();
    let dir = d / len;
    let phi = dir.arg();
    let lo = z0.re.min(z1.re) - DETOUR_RADIUS;
    let hi = z0.re.max(z1.re) + DETOUR_RADIUS;
    let mut detours = Vec::new();
    let mut k = (lo - 0.5).floor();
    while k + 0.5 <= hi {
        let p = Complex64::new(k + 0.5, 0.0);
        k += 1.0;
        let rel = (p - z0) * dir.conj();
        let (tau, h) = (rel.re, rel.im);
        let r = DETOUR_RADIUS.min((p - z0).norm()).min((p - z1).norm());
        if h.abs() >= r || tau <= 0.0 || tau >= len {
            continue;
        }
        let w = (r * r - h * h).sqrt();
        let on_path = h.abs() <= 1e-14 * (1.0 + p.re.abs());
        let (a0, a1) = ((-w - Complex64::i() * h).arg(), (Complex64::new(w, -h)).arg());
        let (th0, th1) = if on_path {
            if side > 0 {
                (PI, 0.0)
            } else {
                (-PI, 0.0)
            }
        } else {
            (a0, a1)
        };
        detours.push(Detour {
            pole: p,
            radius: r,
            enter: tau - w,
            leave: tau + w,
            th0: th0 + phi,
            th1: th1 + phi,
        });
    }
    detours.sort_by(|a, b| a.enter.total_cmp(&b.enter));
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut pos = 0.0;
    for dt in &detours {
        let q = integrate_segment(integrand, z0 + dir * pos, z0 + dir * dt.enter.max(pos), FE_TOL, FE_TOL);
        value += q.value;
        err += q.error;
        let q = integrate_arc(integrand, dt.pole, dt.radius, dt.th0, dt.th1, FE_TOL, FE_TOL);
        value += q.value;
        err += q.error;
        pos = dt.leave;
        path.detour_radius = path.detour_radius.min(dt.radius);
        path.detours += 1;
    }
    let q = integrate_segment(integrand, z0 + dir * pos, z1, FE_TOL, FE_TOL);
    value += q.value;
    err += q.error;
    Ok(FEIntegral {
        value,
        path,
        quadrature_error: err,
    })
}

/// `η(s) = exp[dim·Vol·∫_0^{s−1/2} r tan πr dr]`.
pub fn eta(s: Complex64, dim: usize, genus: u32, side: i8) -> Result<Complex64> {
    let vol = gauss_bonnet_volume(genus)?;
    let i = fe_integral(Complex64::new(0.0, 0.0), s - 0.5, side)?;
    Ok((i.value * (dim as f64 * vol)).exp())
}

/// Predicted `R(s)R(−s) = exp[−dim·Vol·∫_{s−1/2}^{s+1/2} r tan πr dr]`,
/// detours on side +1.
pub fn ruelle_fe_rhs(s: Complex64, dim: usize, genus: u32) -> Result<Complex64> {
    let vol = gauss_bonnet_volume(genus)?;
    let i = fe_integral(s - 0.5, s + 0.5, 1)?;
    Ok((-i.value * (dim as f64 * vol)).exp())
}

/// `∫_0^x r tan πr dr` for `|x| < 1/2`, accurate up to the pole: the last
/// stretch `[1/2 − 10ε, 1/2 − ε]` (ε = 1/2 − |x|) is taken in the variable
/// `u = 1/2 − r` with the tanh-sinh rule.
fn inner_integral(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let eps = 0.5 - ax;
    let f = |r: f64| r * (PI * r).tan();
    let (v, e) = if eps >= 0.05 {
        integrate_real(f, 0.0, ax, 1e-14, 1e-14)
    } else {
        let split = 0.5 - 10.0 * eps;
        let (v1, e1) = integrate_real(f, 0.0, split, 1e-14, 1e-14);
        let (v2, e2) = tanh_sinh(|u, _, _| (0.5 - u) / (PI * u).tan(), eps, 10.0 * eps, 1e-15);
        (v1 + v2, e1 + e2)
    };
    (v * x.signum(), e)
}

/// `A(s) = −2π ∫_0^{s+1/2} r tan πr dr`; for `s ≥ 0` the path crosses
/// poles and the principal value is returned.
pub fn a_of(s: f64) -> Result<f64> {
    let x = s + 0.5;
    if x.abs() < 0.5 {
        return Ok(-2.0 * PI * inner_integral(x).0);
    }
    let i = fe_integral(Complex64::new(0.0, 0.0), Complex64::new(x, 0.0), 1)?;
    Ok(-2.0 * PI * i.value.re)
}

/// `exp A(−ε) / (2πε)`.
pub fn asy_ratio(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(Error::BadEps(eps));
    }
    Ok(a_of(-eps)?.exp() / (2.0 * PI * eps))
}

/// Order `dim(2g − 2)` of R(s) at zero and the magnitude `(2π)^order` of
/// its leading coefficient; the sign is not determined.
pub fn zero_order_prediction(dim: usize, genus: u32) -> Result<(u32, f64)> {
    if genus < 2 {
        return Err(Error::BadGenus(genus));
    }
    if dim == 0 {
        return Err(Error::BadRepresentation("dimension must be at least 1".into()));
    }
    let order = dim as u32 * (2 * genus - 2);
    Ok((order, (2.0 * PI).powi(order as i32)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularitySource {
    Spectral,
    TrivialLadder,
    /// A spectral point on the trivial ladder; orders summed.
    Merged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub location: Complex64,
    pub order: u32,
    pub source: SingularitySource,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularityCatalog {
    pub entries: Vec<Singularity>,
}

/// Points `1/2 ± iμ` of the table (order = multiplicity) and the ladder
/// `−k`, k = 0..=k_max, of order `dim(2g−2)(1+2k)`; coinciding points
/// (within 1e−12) are merged.
pub fn singularity_catalog(table: &SpectralTable, dim: usize, genus: u32, k_max: u32) -> Result<SingularityCatalog> {
    let (base, _) = zero_order_prediction(dim, genus)?;
    let mut raw: Vec<Singularity> = Vec::new();
    for (mu, m) in &table.entries {
        for sign in [1.0, -1.0] {
            let loc = Complex64::new(0.5, 0.0) + Complex64::i() * *mu * sign;
            raw.push(Singularity {
                location: loc,
                order: *m,
                source: SingularitySource::Spectral,
            });
        }
    }
    for k in 0..=k_max {
        raw.push(Singularity {
            location: Complex64::new(0.0 - k as f64, 0.0),
            order: base * (1 + 2 * k),
            source: SingularitySource::TrivialLadder,
        });
    }
    let mut entries: Vec<Singularity> = Vec::new();
    for s in raw {
        match entries.iter_mut().find(|e| (e.location - s.location).norm() <= 1e-12) {
            Some(e) => {
                e.order += s.order;
                if e.source != s.source {
                    e.source = SingularitySource::Merged;
                }
            }
            None => entries.push(s),
        }
    }
    entries.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(SingularityCatalog { entries })
}
