//! The genus-2 octagon group in exact form.
//!
//! In the disk model the eight side pairings of the regular octagon with
//! angles π/4 are the rotations of one seed,
//!
//! ```text
//! g_k = [[α, β ω^k], [β ω^-k, α]],   α = 1 + √2,  β = √(2α),  ω = e^{iπ/4},
//! ```
//!
//! with g_{k+4} = g_k⁻¹. Every group element has the form
//! `[[x, β y], [β ȳ, x̄]]` with `x, y ∈ Z[ζ]`, which is what [`Elem`] stores.
//! The Dirichlet domain centred at the origin o is the octagon itself and
//! g_k o is the centre of the neighbouring octagon across side k.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::cyclotomic::{ZSqrt2, Z8};
use crate::error::{Error, Result};

/// α = 1 + √2.
pub const ALPHA: f64 = 1.0 + std::f64::consts::SQRT_2;

/// β = √(2α).
pub fn beta() -> f64 {
    (2.0 * ALPHA).sqrt()
}

/// cosh of the inradius of the octagon: cosh r_in = 1 + √2.
pub const COSH_INRADIUS: f64 = ALPHA;

/// cosh of the circumradius: cosh r_c = (1 + √2)².
pub const COSH_CIRCUMRADIUS: f64 = ALPHA * ALPHA;

/// 2α as an exact element of Z[√2].
const TWO_ALPHA: ZSqrt2 = ZSqrt2::new(2, 2);

/// Group element `[[x, βy], [βȳ, x̄]]` of SU(1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    pub x: Z8,
    pub y: Z8,
}

impl Elem {
    pub const IDENTITY: Elem = Elem {
        x: Z8::ONE,
        y: Z8::ZERO,
    };

    /// Side pairing g_k, k = 0..8.
    pub fn gen(k: usize) -> Elem {
        Elem {
            x: Z8::ALPHA,
            y: Z8::zeta_pow(k % 8),
        }
    }

    pub fn mul(&self, o: &Elem) -> Elem {
        Elem {
            x: self.x * o.x + (self.y * o.y.conj()).mul_alpha() * 2,
            y: self.x * o.y + self.y * o.x.conj(),
        }
    }

    pub fn inverse(&self) -> Elem {
        Elem {
            x: self.x.conj(),
            y: -self.y,
        }
    }

    /// `g_k · self`.
    #[inline]
    pub fn left_gen(&self, k: usize) -> Elem {
        Elem {
            x: (self.x + self.y.conj().mul_zeta_pow(k) * 2).mul_alpha(),
            y: self.y.mul_alpha() + self.x.conj().mul_zeta_pow(k),
        }
    }

    /// `self · g_k`.
    #[inline]
    pub fn right_gen(&self, k: usize) -> Elem {
        Elem {
            x: (self.x + self.y.mul_zeta_pow(8 - k % 8) * 2).mul_alpha(),
            y: self.x.mul_zeta_pow(k) + self.y.mul_alpha(),
        }
    }

    /// `g_k⁻¹ · self · g_k`.
    #[inline]
    pub fn conj_gen(&self, k: usize) -> Elem {
        self.right_gen(k).left_gen((k + 4) % 8)
    }

    pub fn pow(&self, n: u32) -> Elem {
        let mut out = Elem::IDENTITY;
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Product of generators `g_{k_1} g_{k_2} …`.
    pub fn from_gens(ks: &[u8]) -> Elem {
        ks.iter().fold(Elem::IDENTITY, |acc, &k| acc.right_gen(k as usize))
    }

    /// Exact check of `|x|² − 2α|y|² = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.x.norm_sq() - TWO_ALPHA * self.y.norm_sq() == ZSqrt2::new(1, 0)
    }

    /// Representative of ±self with positive trace (or, for trace zero,
    /// with the first nonzero coefficient positive).
    pub fn normalized(&self) -> Elem {
        let s = self.x.re2().signum();
        let flip = if s != 0 {
            s < 0
        } else {
            let first = self.x.c.iter().chain(self.y.c.iter()).find(|&&v| v != 0);
            matches!(first, Some(&v) if v < 0)
        };
        if flip {
            Elem { x: -self.x, y: -self.y }
        } else {
            *self
        }
    }

    /// Equality in PSL(2,R).
    pub fn same_psl(&self, o: &Elem) -> bool {
        self == o || (self.x == -o.x && self.y == -o.y)
    }

    /// `|trace|` as an exact element of Z[√2] (sign-normalized).
    pub fn abs_trace_exact(&self) -> ZSqrt2 {
        let t = self.x.re2();
        if t.signum() < 0 {
            ZSqrt2::new(-t.a, -t.b)
        } else {
            t
        }
    }

    pub fn abs_trace(&self) -> f64 {
        self.abs_trace_exact().to_f64()
    }

    /// Translation length `2 arccosh(|tr|/2)`; `None` unless hyperbolic.
    pub fn length(&self) -> Option<f64> {
        let h = 0.5 * self.abs_trace();
        if h > 1.0 {
            Some(2.0 * h.acosh())
        } else {
            None
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        // |2 Re x| > 2 exactly
        let t = self.abs_trace_exact();
        (t - ZSqrt2::new(2, 0)).signum() > 0
    }

    /// SU(1,1) entries `(A, B)` of `[[A, B], [B̄, Ā]]`.
    pub fn su11(&self) -> (Complex64, Complex64) {
        (self.x.to_complex(), self.y.to_complex() * beta())
    }

    /// Real SL(2,R) matrix `[a, b, c, d]` in the upper half-plane, obtained
    /// through the Cayley map sending o to i.
    pub fn sl2r(&self) -> [f64; 4] {
        let (a, b) = self.su11();
        [a.re + b.re, a.im - b.im, -a.im - b.im, a.re - b.re]
    }

    /// `cosh d(o, self·o) = 2|x|² − 1`.
    pub fn cosh_displacement(&self) -> f64 {
        2.0 * self.x.norm_sq().to_f64() - 1.0
    }

    /// Largest absolute coefficient; coefficients stay small because the
    /// Galois-conjugate group is compact.
    pub fn max_abs_coeff(&self) -> i64 {
        self.x.max_abs_coeff().max(self.y.max_abs_coeff())
    }
}

/// Total order used for conjugacy keys: `|x|²` (distance from o to the axis,
/// for fixed trace) first, then the coefficient vector. Inputs should be
/// normalized.
pub fn key_cmp(a: &Elem, b: &Elem) -> Ordering {
    a.x.norm_sq()
        .cmp(&b.x.norm_sq())
        .then_with(|| (a.x.c, a.y.c).cmp(&(b.x.c, b.y.c)))
}

/// Minkowski form `−p0 q0 + p1 q1 + p2 q2`.
#[inline]
pub fn mink(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    -p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

/// Hyperboloid coordinates of `M·o` for `M = [[A, B], [B̄, Ā]]`.
pub fn orbit_point(a: Complex64, b: Complex64) -> [f64; 3] {
    let ab = a * b;
    [a.norm_sqr() + b.norm_sqr(), 2.0 * ab.re, 2.0 * ab.im]
}

/// Bisector normals `o − g_k o` of the eight sides of the central octagon.
pub fn side_normals() -> [[f64; 3]; 8] {
    let c0 = ALPHA * ALPHA + 2.0 * ALPHA;
    let c1 = 2.0 * ALPHA * beta();
    let mut out = [[0.0; 3]; 8];
    for (k, w) in out.iter_mut().enumerate() {
        let th = k as f64 * std::f64::consts::FRAC_PI_4;
        *w = [1.0 - c0, -c1 * th.cos(), -c1 * th.sin()];
    }
    out
}

/// Axis of a hyperbolic element seen from o: unit normal `n` of the
/// geodesic plane, foot point `u` of o, unit tangent `v` pointing to the
/// attracting end. The axis is `cosh t·u + sinh t·v`.
#[derive(Debug, Clone, Copy)]
pub struct AxisFrame {
    pub n: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl AxisFrame {
    pub fn of(e: &Elem) -> AxisFrame {
        let (a, b) = e.normalized().su11();
        Self::from_su11(a, b)
    }

    /// `a` must have positive real part > 1.
    pub fn from_su11(a: Complex64, b: Complex64) -> AxisFrame {
        let s = (a.re * a.re - 1.0).max(0.0).sqrt();
        let bc = b.conj();
        let zp = (Complex64::new(s, a.im)) / bc;
        let zm = (Complex64::new(-s, a.im)) / bc;
        let lp = [1.0, zp.re, zp.im];
        let lm = [1.0, zm.re, zm.im];
        let c = [
            lp[1] * lm[2] - lp[2] * lm[1],
            lp[2] * lm[0] - lp[0] * lm[2],
            lp[0] * lm[1] - lp[1] * lm[0],
        ];
        let mut n = [-c[0], c[1], c[2]];
        let nn = mink(&n, &n).sqrt();
        n.iter_mut().for_each(|v| *v /= nn);
        let n0 = n[0];
        let scale = 1.0 / (1.0 + n0 * n0).sqrt();
        let u = [(1.0 + n0 * n0) * scale, n0 * n[1] * scale, n0 * n[2] * scale];
        let lu = mink(&lp, &u);
        let v = [
            -(lp[0] + lu * u[0]) / lu,
            -(lp[1] + lu * u[1]) / lu,
            -(lp[2] + lu * u[2]) / lu,
        ];
        AxisFrame { n, u, v }
    }

    /// `sinh` of the distance from o to the axis.
    pub fn sinh_distance_to_origin(&self) -> f64 {
        self.n[0].abs()
    }

    pub fn point(&self, t: f64) -> [f64; 3] {
        let (c, s) = (t.cosh(), t.sinh());
        [
            c * self.u[0] + s * self.v[0],
            c * self.u[1] + s * self.v[1],
            c * self.u[2] + s * self.v[2],
        ]
    }
}

const WALK_EPS: f64 = 1e-9;
/// Distance walked past a cell exit before locating the next cell. Cells
/// whose chord is shorter are skipped; they are side neighbours of the
/// cells before and after them, so `visit` still sees their frames.
const WALK_NUDGE: f64 = 1e-7;
const WALK_MAX_STEPS: usize = 1 << 16;

/// Index of the side of the central octagon whose bisector separates the
/// point `p` from o most strongly, or `None` if `p` lies in the octagon
/// (boundary included, up to rounding).
pub fn outside_side(p: &[f64; 3], normals: &[[f64; 3]; 8]) -> Option<usize> {
    let mut best = None;
    let mut worst = -1e-11 * p[0];
    for (k, w) in normals.iter().enumerate() {
        let f = mink(p, w);
        if f < worst {
            worst = f;
            best = Some(k);
        }
    }
    best
}

/// Image of a hyperboloid point under `g_k⁻¹`.
fn act_inverse_gen(k: usize, p: &[f64; 3]) -> [f64; 3] {
    let z = Complex64::new(p[1], p[2]) / (1.0 + p[0]);
    let a = Complex64::new(ALPHA, 0.0);
    let b = Complex64::from_polar(beta(), ((k + 4) % 8) as f64 * std::f64::consts::FRAC_PI_4);
    let w = (a * z + b) / (b.conj() * z + a);
    let n = w.norm_sqr();
    let d = 1.0 - n;
    [(1.0 + n) / d, 2.0 * w.re / d, 2.0 * w.im / d]
}

/// One cell `hF` crossed by an axis, seen in its own frame `h⁻¹ γ h`.
#[derive(Debug, Clone)]
pub struct WalkCell {
    pub frame: Elem,
    /// Axis distance from the start to where the walk entered the cell.
    pub offset: f64,
    /// Axis distance walked inside the cell.
    pub chord: f64,
    /// Side pairings to the next cell: `h_next = h g_{k_1} ⋯ g_{k_j}`.
    pub moves: Vec<u8>,
}

/// Walk at least `advance` along the axis of `gamma`, starting at the foot
/// point of o (which must lie in the central octagon) and moving towards
/// the attracting end. The frame of every visited cell and of its eight side
/// neighbours is passed to `visit`; returning `false` aborts the walk and
/// yields `Ok(None)`.
pub fn axis_walk(gamma: &Elem, advance: f64, mut visit: impl FnMut(&Elem) -> bool) -> Result<Option<Vec<WalkCell>>> {
    let normals = side_normals();
    let start = gamma.normalized();
    if !start.is_hyperbolic() {
        return Err(Error::NotHyperbolic {
            abs_trace: start.abs_trace(),
        });
    }
    let mut cur = start;
    let mut frame = AxisFrame::of(&cur);
    if outside_side(&frame.u, &normals).is_some() {
        return Err(Error::WalkFailed("axis does not meet the central octagon".into()));
    }
    let visit_all = |c: &Elem, visit: &mut dyn FnMut(&Elem) -> bool| visit(c) && (0..8).all(|k| visit(&c.conj_gen(k)));
    if !visit_all(&cur, &mut visit) {
        return Ok(None);
    }
    let mut cells = Vec::new();
    let (mut tau, mut walked, mut entered) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..WALK_MAX_STEPS {
        let mut t_out = f64::INFINITY;
        for w in &normals {
            let a = mink(&frame.u, w);
            let b = mink(&frame.v, w);
            // f(t) = a cosh t + b sinh t changes sign downwards iff |a| < −b
            if b >= 0.0 || a.abs() >= -b || -b < 1e-9 {
                continue;
            }
            let t = (-a / b).atanh();
            if t > tau - WALK_EPS * (1.0 + tau.abs()) {
                t_out = t_out.min(t);
            }
        }
        if !t_out.is_finite() {
            return Err(Error::WalkFailed(format!("no exit after {} cells", cells.len())));
        }
        let t_next = t_out.max(tau) + WALK_NUDGE;
        walked += t_next - tau;
        let mut q = frame.point(t_next);
        let mut moves = Vec::new();
        while let Some(k) = outside_side(&q, &normals) {
            if moves.len() >= 16 {
                return Err(Error::WalkFailed("point location did not converge".into()));
            }
            q = act_inverse_gen(k, &q);
            moves.push(k as u8);
        }
        if moves.is_empty() {
            tau = t_next;
            continue;
        }
        cells.push(WalkCell {
            frame: cur,
            offset: entered,
            chord: walked - entered,
            moves,
        });
        for k in &cells.last().expect("just pushed").moves {
            cur = cur.conj_gen(*k as usize);
        }
        frame = AxisFrame::of(&cur);
        tau = mink(&q, &frame.v).asinh();
        entered = walked;
        if !visit_all(&cur, &mut visit) {
            return Ok(None);
        }
        if walked >= advance {
            return Ok(Some(cells));
        }
    }
    Err(Error::WalkFailed(format!("walk exceeded {WALK_MAX_STEPS} steps")))
}

/// Primitive root of `gamma` (same translation direction) together with its
/// cutting sequence: side pairings `k_1 … k_m` whose product is a conjugate
/// of the root. The axis must meet the central octagon.
pub fn primitive_period(gamma: &Elem) -> Result<(Elem, Vec<u8>)> {
    let len = gamma.length().ok_or(Error::NotHyperbolic {
        abs_trace: gamma.abs_trace(),
    })?;
    let reach = COSH_CIRCUMRADIUS.acosh();
    let cells = axis_walk(gamma, 2.0 * len + 2.0 * reach + 1.0, |_| true)?.expect("walk without early exit");
    // longest chord in the first period: robustly revisited one root period later
    let j0 = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.offset < len)
        .max_by(|a, b| a.1.chord.total_cmp(&b.1.chord))
        .map(|(j, _)| j)
        .ok_or_else(|| Error::WalkFailed("empty walk".into()))?;
    let j1 = (j0 + 1..cells.len())
        .find(|&j| cells[j].frame.same_psl(&cells[j0].frame))
        .ok_or_else(|| Error::WalkFailed("axis period not found".into()))?;
    let lead: Vec<u8> = cells[..j0].iter().flat_map(|c| c.moves.iter().copied()).collect();
    let period: Vec<u8> = cells[j0..j1].iter().flat_map(|c| c.moves.iter().copied()).collect();
    let h = Elem::from_gens(&lead);
    let root = h.mul(&Elem::from_gens(&period)).mul(&h.inverse()).normalized();
    Ok((root, period))
}

/// Conjugate `gamma` so that the foot point of o on its axis lies in the
/// central octagon. Returns the conjugate and the conjugating generators.
pub fn recentre(gamma: &Elem) -> Result<(Elem, Vec<u8>)> {
    let normals = side_normals();
    let mut cur = gamma.normalized();
    if !cur.is_hyperbolic() {
        return Err(Error::NotHyperbolic {
            abs_trace: cur.abs_trace(),
        });
    }
    let mut path = Vec::new();
    for _ in 0..WALK_MAX_STEPS {
        let frame = AxisFrame::of(&cur);
        match outside_side(&frame.u, &normals) {
            None => return Ok((cur, path)),
            Some(k) => {
                // the foot point lies beyond side k: move into g_k F's frame
                cur = cur.conj_gen(k);
                path.push(k as u8);
            }
        }
    }
    Err(Error::WalkFailed("recentring did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_unimodular_with_inverse_pairs() {
        for k in 0..8 {
            let g = Elem::gen(k);
            assert!(g.is_unimodular());
            let prod = g.mul(&Elem::gen((k + 4) % 8));
            assert!(prod.same_psl(&Elem::IDENTITY));
            assert_eq!(g.inverse(), Elem::gen((k + 4) % 8));
        }
    }

    #[test]
    fn fast_products_agree_with_general_product() {
        let e = Elem::from_gens(&[0, 3, 6, 1]);
        for k in 0..8 {
            assert_eq!(e.left_gen(k), Elem::gen(k).mul(&e));
            assert_eq!(e.right_gen(k), e.mul(&Elem::gen(k)));
            assert_eq!(e.conj_gen(k), Elem::gen((k + 4) % 8).mul(&e).mul(&Elem::gen(k)));
        }
    }

    #[test]
    fn octagon_relation_holds_exactly() {
        // g0 g1⁻¹ g2 g3⁻¹ g0⁻¹ g1 g2⁻¹ g3
        let r = Elem::from_gens(&[0, 5, 2, 7, 4, 1, 6, 3]);
        assert!(r.same_psl(&Elem::IDENTITY));
    }

    #[test]
    fn generator_displacement_is_twice_inradius() {
        let d = Elem::gen(0).cosh_displacement().acosh();
        assert!((d - 2.0 * COSH_INRADIUS.acosh()).abs() < 1e-12);
    }

    #[test]
    fn walk_of_generator_returns_generator() {
        for k in 0..8 {
            let g = Elem::gen(k);
            let (root, w) = primitive_period(&g).unwrap();
            assert!(root.same_psl(&g), "k={k} w={w:?}");
            assert!(Elem::from_gens(&w).same_psl(&g), "k={k} w={w:?}");
        }
    }
}
