//! PSL(2,R) matrices, translation lengths and the genus-2 octagon model.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::octagon::Elem;
use crate::words::{Letter, Word};

/// Sign-normalized real unimodular 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMatrix {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// Endpoint of an axis on the boundary R ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl MoebiusMatrix {
    pub const IDENTITY: MoebiusMatrix = MoebiusMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a matrix, checking `|ad − bc − 1| ≤ 1e−12` relative to the
    /// entry scale, and sign-normalizes it.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs()).max(1.0);
        if (det - 1.0).abs() > 1e-12 * scale * scale {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self { a, b, c, d }.sign_normalized())
    }

    /// `diag(λ, 1/λ)`.
    pub fn dilation(lambda: f64) -> Self {
        Self {
            a: lambda,
            b: 0.0,
            c: 0.0,
            d: 1.0 / lambda,
        }
        .sign_normalized()
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .sign_normalized()
    }

    /// First nonzero entry among (a, b, c) made positive.
    pub fn sign_normalized(self) -> Self {
        let lead = [self.a, self.b, self.c].into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            Self {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        } else {
            self
        }
    }

    /// Largest entrywise distance between `self` and `±other`.
    pub fn distance_psl(&self, other: &Self) -> f64 {
        let p = self.entries();
        let q = other.entries();
        let plus = (0..4).map(|i| (p[i] - q[i]).abs()).fold(0.0, f64::max);
        let minus = (0..4).map(|i| (p[i] + q[i]).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn apply(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }
}

/// Sign-normalized matrix product. No determinant rescaling: `ad − bc`
/// cancels catastrophically for long words and would inject its own error.
pub fn compose(m: &MoebiusMatrix, n: &MoebiusMatrix) -> MoebiusMatrix {
    MoebiusMatrix {
        a: m.a * n.a + m.b * n.c,
        b: m.a * n.b + m.b * n.d,
        c: m.c * n.a + m.d * n.c,
        d: m.c * n.b + m.d * n.d,
    }
    .sign_normalized()
}

/// `l = 2 arccosh(|tr|/2)`.
pub fn translation_length(m: &MoebiusMatrix) -> Result<f64> {
    let t = m.trace().abs();
    if t <= 2.0 + 1e-12 {
        return Err(Error::NotHyperbolic { abs_trace: t });
    }
    Ok(2.0 * (0.5 * t).acosh())
}

/// Fixed points of the Möbius action on R ∪ {∞}, attracting first.
pub fn axis_endpoints(m: &MoebiusMatrix) -> Result<(BoundaryPoint, BoundaryPoint)> {
    translation_length(m)?;
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    // normalize so that the trace is positive
    let (a, b, c, d) = if a + d < 0.0 { (-a, -b, -c, -d) } else { (a, b, c, d) };
    let tr = a + d;
    if c == 0.0 {
        // fixes ∞ and b/(d − a); ∞ attracts iff |a| > |d|
        let fin = BoundaryPoint::Finite(b / (d - a));
        return Ok(if a.abs() > d.abs() {
            (BoundaryPoint::Infinity, fin)
        } else {
            (fin, BoundaryPoint::Infinity)
        });
    }
    let disc = (tr * tr - 4.0).sqrt();
    // c x² + (d − a) x − b = 0; derivative at x is 1/(c x + d)²
    // attracting: |c x + d| > 1, i.e. c x + d = (tr + disc)/2
    let attracting = ((a - d) + disc) / (2.0 * c);
    let repelling = ((a - d) - disc) / (2.0 * c);
    Ok((BoundaryPoint::Finite(attracting), BoundaryPoint::Finite(repelling)))
}

/// Generators `a_1, b_1, …, a_g, b_g` and the surface relator.
#[derive(Debug, Clone)]
pub struct SurfacePresentation {
    pub genus: u32,
    pub generators: Vec<MoebiusMatrix>,
    /// Cyclic relator as a word in the generators.
    pub relator: Word,
    pub relator_residual: f64,
}

impl SurfacePresentation {
    /// Matrix of a word (left-to-right product of generators and inverses).
    pub fn word_matrix(&self, w: &Word) -> MoebiusMatrix {
        w.letters().iter().fold(MoebiusMatrix::IDENTITY, |acc, l| {
            let g = &self.generators[l.generator()];
            let g = if l.is_inverse() { g.inverse() } else { *g };
            compose(&acc, &g)
        })
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }
}

/// Genus-2 octagon presentation. The side pairings are the rotations g_k of
/// one seed matrix; the generators are `a1 = g0`, `b1 = g1⁻¹`, `a2 = g2`,
/// `b2 = g3⁻¹`, with relator `a1 b1 a2 b2 a1⁻¹ b1⁻¹ a2⁻¹ b2⁻¹`.
pub fn octagon_presentation(genus: u32) -> Result<SurfacePresentation> {
    if genus != 2 {
        return Err(Error::UnsupportedGenus(genus));
    }
    let generators: Vec<MoebiusMatrix> = (0..4)
        .map(|i| {
            let e = Elem::gen(Letter::new(i, false).gen_index());
            let [a, b, c, d] = e.sl2r();
            MoebiusMatrix::new(a, b, c, d).expect("octagon generator is unimodular")
        })
        .collect();
    let relator = Word::parse("a1.b1.a2.b2.A1.B1.A2.B2").expect("static relator");
    let mut pres = SurfacePresentation {
        genus,
        generators,
        relator,
        relator_residual: 0.0,
    };
    let r = pres.word_matrix(&pres.relator);
    pres.relator_residual = r.distance_psl(&MoebiusMatrix::IDENTITY);
    assert!(
        pres.relator_residual <= 1e-10,
        "octagon relator residual {}",
        pres.relator_residual
    );
    Ok(pres)
}

/// `Vol(X) = 2π(2g − 2)`.
pub fn gauss_bonnet_volume(genus: u32) -> Result<f64> {
    if genus < 2 {
        return Err(Error::BadGenus(genus));
    }
    Ok(2.0 * PI * (2.0 * genus as f64 - 2.0))
}
