//! Finite-dimensional representations χ: Γ → GL(V) given by the images of
//! the generators, and the growth exponent of ‖χ(γ)‖ along the spectrum.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::SurfacePresentation;
use crate::spectrum::LengthSpectrum;
use crate::words::Word;

pub type CMatrix = DMatrix<Complex64>;

/// Largest accepted relation residual.
pub const RELATION_TOL: f64 = 1e-8;

/// Smallest accepted `|det|` of a generator image.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Default slack added to the critical-exponent estimate.
pub const DEFAULT_DELTA_C: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct FlatRepresentation {
    pub dim: usize,
    pub generator_images: Vec<CMatrix>,
    inverses: Vec<CMatrix>,
    pub relation_residual: f64,
    /// Growth exponent estimated from a spectrum; zero until
    /// [`FlatRepresentation::with_critical_exponent`] is called.
    pub c_hat: f64,
    trivial: bool,
}

fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Checks the images against the surface relator and builds the
/// representation.
pub fn validate(pres: &SurfacePresentation, images: Vec<CMatrix>, dim: usize) -> Result<FlatRepresentation> {
    let want = pres.num_generators();
    if images.len() != want {
        return Err(Error::BadRepresentation(format!(
            "expected {want} generator images, got {}",
            images.len()
        )));
    }
    if dim == 0 {
        return Err(Error::BadRepresentation("dimension must be at least 1".into()));
    }
    let mut inverses = Vec::with_capacity(want);
    for (index, m) in images.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::BadRepresentation(format!(
                "image {index} is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let det = m.determinant().norm();
        if !(det >= SINGULAR_TOL) {
            return Err(Error::Singular { index, det });
        }
        inverses.push(m.clone().try_inverse().ok_or(Error::Singular { index, det })?);
    }
    let id = CMatrix::identity(dim, dim);
    let trivial = images.iter().all(|m| *m == id);
    let mut rep = FlatRepresentation {
        dim,
        generator_images: images,
        inverses,
        relation_residual: 0.0,
        c_hat: 0.0,
        trivial,
    };
    let r = rep.evaluate(&pres.relator);
    rep.relation_residual = max_entry_distance(&r, &id);
    if !(rep.relation_residual <= RELATION_TOL) {
        return Err(Error::RelationViolated(rep.relation_residual));
    }
    Ok(rep)
}

impl FlatRepresentation {
    /// Trivial representation on C^dim.
    pub fn trivial(pres: &SurfacePresentation, dim: usize) -> Result<Self> {
        validate(pres, vec![CMatrix::identity(dim, dim); pres.num_generators()], dim)
    }

    /// One-dimensional representation with the given scalar images.
    pub fn scalar(pres: &SurfacePresentation, values: &[Complex64]) -> Result<Self> {
        validate(
            pres,
            values.iter().map(|&z| CMatrix::from_element(1, 1, z)).collect(),
            1,
        )
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// χ(w): left-to-right product of images and inverses.
    pub fn evaluate(&self, w: &Word) -> CMatrix {
        let mut acc = CMatrix::identity(self.dim, self.dim);
        for l in w.letters() {
            let m = if l.is_inverse() {
                &self.inverses[l.generator()]
            } else {
                &self.generator_images[l.generator()]
            };
            acc = &acc * m;
        }
        acc
    }

    pub fn trace_of(&self, w: &Word) -> Complex64 {
        if self.trivial {
            return Complex64::new(self.dim as f64, 0.0);
        }
        if self.dim == 1 {
            let mut z = Complex64::new(1.0, 0.0);
            for l in w.letters() {
                let m = if l.is_inverse() {
                    &self.inverses[l.generator()]
                } else {
                    &self.generator_images[l.generator()]
                };
                z *= m[(0, 0)];
            }
            return z;
        }
        self.evaluate(w).trace()
    }

    /// Same images with entries conjugated.
    pub fn conjugate(&self) -> Self {
        let c = |v: &Vec<CMatrix>| v.iter().map(|m| m.map(|z| z.conj())).collect();
        Self {
            generator_images: c(&self.generator_images),
            inverses: c(&self.inverses),
            ..self.clone()
        }
    }

    /// Block-diagonal sum χ ⊕ ψ.
    pub fn direct_sum(&self, o: &Self, pres: &SurfacePresentation) -> Result<Self> {
        let d = self.dim + o.dim;
        let images = self
            .generator_images
            .iter()
            .zip(&o.generator_images)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (o.dim, o.dim)).copy_from(b);
                m
            })
            .collect();
        validate(pres, images, d)
    }

    pub fn with_critical_exponent(mut self, spec: &LengthSpectrum) -> Result<Self> {
        self.c_hat = critical_exponent_estimate(&self, spec)?;
        Ok(self)
    }

    /// Reads the TOML representation file format.
    pub fn load(path: &Path, pres: &SurfacePresentation) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        RepresentationFile::from_toml(&text)?.build(pres)
    }
}

/// `max(0, max over records of log ‖χ(γ)‖₂ / l(γ))` with the spectral norm.
pub fn critical_exponent_estimate(rep: &FlatRepresentation, spec: &LengthSpectrum) -> Result<f64> {
    if spec.records.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if rep.trivial {
        return Ok(0.0);
    }
    let mut c: f64 = 0.0;
    for r in &spec.records {
        let m = rep.evaluate(&r.canonical_word);
        let norm = if rep.dim == 1 {
            m[(0, 0)].norm()
        } else {
            m.singular_values().max()
        };
        c = c.max(norm.ln() / r.length);
    }
    Ok(c)
}

/// On-disk form: `genus`, `dim`, and `generators`, each a row-major list of
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub genus: u32,
    pub dim: usize,
    pub generators: Vec<Vec<[f64; 2]>>,
}

impl RepresentationFile {
    pub fn from_rep(rep: &FlatRepresentation, genus: u32) -> Self {
        let generators = rep
            .generator_images
            .iter()
            .map(|m| {
                let mut v = Vec::with_capacity(rep.dim * rep.dim);
                for i in 0..rep.dim {
                    for j in 0..rep.dim {
                        v.push([m[(i, j)].re, m[(i, j)].im]);
                    }
                }
                v
            })
            .collect();
        Self {
            genus,
            dim: rep.dim,
            generators,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self, pres: &SurfacePresentation) -> Result<FlatRepresentation> {
        if self.genus != pres.genus {
            return Err(Error::BadRepresentation(format!(
                "file is for genus {}, presentation has genus {}",
                self.genus, pres.genus
            )));
        }
        let n = self.dim;
        let images = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                if g.len() != n * n {
                    return Err(Error::BadRepresentation(format!(
                        "generator {k} has {} entries, expected {}",
                        g.len(),
                        n * n
                    )));
                }
                Ok(CMatrix::from_row_iterator(
                    n,
                    n,
                    g.iter().map(|p| Complex64::new(p[0], p[1])),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        validate(pres, images, n)
    }
}
