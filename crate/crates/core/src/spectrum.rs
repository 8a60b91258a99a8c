//! Enumeration of hyperbolic conjugacy classes with `l(γ) ≤ L`.
//!
//! Every class has a representative whose axis passes within the inradius
//! r_in of the origin o (the incircles of the tiling touch at side midpoints,
//! so a geodesic avoiding all open incircles is a side line). Such a
//! representative moves o by at most
//! `R(L) = arccosh(cosh² r_in (cosh L − 1) + 1)`, so all of them lie in the
//! orbit ball B(R). The ball is traversed as a tree: the parent of γ is the
//! neighbour `g_k γ` closest to o (ties to the lowest k), which is always
//! strictly closer since γ·o lies outside the Dirichlet octagon.
//!
//! The class key is the conjugate minimizing `(|x|², coefficients)`; for
//! fixed trace `|x|²` orders conjugates by the distance of their axis to o.
//! A candidate is accepted iff no conjugate met while walking its axis
//! through one primitive period (visited cells plus their side neighbours)
//! is smaller. The walk also yields the cutting sequence, which becomes the
//! canonical word.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::cyclotomic::{ZSqrt2, Z8};
use crate::error::{Error, Result};
use crate::hyperbolic::SurfacePresentation;
use crate::octagon::{axis_walk, key_cmp, primitive_period, recentre, Elem, COSH_INRADIUS};
use crate::words::{canonical_cyclic_form, cyclic_reduce, Word, MAX_WORD_LEN};

/// Safety factor applied to the calibrated word-length bound.
pub const SAFETY_FACTOR: f64 = 1.15;

/// Cutoff of the warm-up enumeration used for calibration.
pub const WARMUP_CUTOFF: f64 = 8.0;

/// Largest letter-length entering the calibration fit.
pub const WARMUP_MAX_LETTERS: usize = 12;

/// Default limit on the projected number of orbit-ball nodes.
pub const DEFAULT_NODE_BUDGET: f64 = 1.0e9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyClassRecord {
    pub canonical_word: Word,
    pub length: f64,
    pub n_gamma: u32,
    pub primitive_root: Word,
    pub abs_trace: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub word_length_bound: usize,
    pub calibration_slope: f64,
    pub calibration_offset: f64,
    pub safety_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    pub genus: u32,
    pub records: Vec<ConjugacyClassRecord>,
    pub cutoff: f64,
    pub completeness: Certificate,
}

/// Counters from one enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnumerationStats {
    pub ball_radius: f64,
    pub nodes: u64,
    pub candidates: u64,
    pub classes: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// Worker threads; `0` uses the global rayon pool.
    pub threads: usize,
    pub node_budget: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            threads: 0,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// `cosh R(L)` for the orbit ball containing a representative of every class
/// of length ≤ L.
pub fn ball_cosh_radius(cutoff: f64) -> f64 {
    COSH_INRADIUS * COSH_INRADIUS * (cutoff.cosh() - 1.0) + 1.0
}

/// Expected number of orbit points in the ball: area ratio `(cosh R − 1)/2`.
pub fn projected_nodes(cutoff: f64) -> f64 {
    (ball_cosh_radius(cutoff) - 1.0) / 2.0
}

/// A class found by the ball traversal, identified by its key representative.
#[derive(Debug, Clone)]
struct Found {
    key: Elem,
    trace: ZSqrt2,
}

/// Axis distance covering one full period of `gamma`.
fn period_advance(gamma: &Elem) -> Result<f64> {
    let len = gamma.length().ok_or(Error::NotHyperbolic {
        abs_trace: gamma.abs_trace(),
    })?;
    Ok(len + 1e-6)
}

/// Whether `gamma` (normalized) is the key representative of its class.
fn is_key(gamma: &Elem) -> Result<bool> {
    let fg = gamma.x.to_complex().norm_sqr();
    let walk = axis_walk(gamma, period_advance(gamma)?, |c| {
        let fc = c.x.to_complex().norm_sqr();
        if fc < fg * (1.0 - 1e-12) {
            return false;
        }
        if fc > fg * (1.0 + 1e-12) {
            return true;
        }
        key_cmp(&c.normalized(), gamma) != Ordering::Less
    })?;
    Ok(walk.is_some())
}

/// Smallest conjugate met along one period of the axis: the key
/// representative of the class of `gamma`, whose axis must cross the
/// central octagon.
pub fn class_key(gamma: &Elem) -> Result<Elem> {
    let mut best = gamma.normalized();
    axis_walk(gamma, period_advance(gamma)?, |c| {
        let c = c.normalized();
        if key_cmp(&c, &best) == Ordering::Less {
            best = c;
        }
        true
    })?;
    Ok(best)
}

/// Canonical word of a primitive class whose key representative is `key`.
pub fn canonical_word_of_key(key: &Elem) -> Result<Word> {
    let (_, letters) = primitive_period(key)?;
    Ok(canonical_cyclic_form(&cyclic_reduce(&Word::from_gen_indices(&letters))))
}

/// Parent direction of a ball node: index j minimizing `|x(g_j γ)|`, ties to
/// the smallest j.
#[inline]
fn parent_direction(x: &Z8, y: &Z8) -> usize {
    let xc = x.to_complex();
    let yc = y.to_complex();
    let p = (xc * yc).conj();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (re, im) = (p.re, p.im);
    let vals = [
        re,
        (re - im) * s,
        -im,
        (-re - im) * s,
        -re,
        (im - re) * s,
        im,
        (re + im) * s,
    ];
    let mut best = 0;
    for j in 1..8 {
        if vals[j] < vals[best] {
            best = j;
        }
    }
    let tol = 1e-12 * (p.norm() + 1.0);
    let ties = (0..8).filter(|&j| vals[j] <= vals[best] + tol).count();
    if ties == 1 {
        return best;
    }
    let pe = (*x * *y).conj();
    let mut best_j = usize::MAX;
    let mut best_v = ZSqrt2::default();
    for j in 0..8 {
        if vals[j] > vals[best] + tol {
            continue;
        }
        let v = pe.mul_zeta_pow(j).re2();
        if best_j == usize::MAX || v < best_v {
            best_j = j;
            best_v = v;
        }
    }
    best_j
}

struct Traversal {
    xmax: f64,
    cutoff: f64,
    cosh2_delta_max: f64,
    nodes: u64,
    candidates: u64,
    found: Vec<Found>,
    error: Option<Error>,
}

impl Traversal {
    fn new(cutoff: f64) -> Self {
        Self {
            xmax: 0.5 * (ball_cosh_radius(cutoff) + 1.0) * (1.0 + 1e-9),
            cutoff,
            cosh2_delta_max: COSH_INRADIUS * COSH_INRADIUS * (1.0 + 1e-9),
            nodes: 0,
            candidates: 0,
            found: Vec::new(),
            error: None,
        }
    }

    fn children(&self, node: &Elem) -> impl Iterator<Item = Elem> + '_ {
        let node = *node;
        (0..8).filter_map(move |k| {
            let c = node.left_gen(k);
            // y = 0 only for the identity, the root
            if c.y.is_zero() || c.x.to_complex().norm_sqr() > self.xmax {
                return None;
            }
            (parent_direction(&c.x, &c.y) == (k + 4) % 8).then_some(c)
        })
    }

    fn consider(&mut self, node: &Elem) {
        self.nodes += 1;
        let x2 = node.x.to_complex().norm_sqr();
        let h = 0.5 * node.x.re2().to_f64().abs();
        if h <= 1.0 {
            return;
        }
        let len = 2.0 * h.acosh();
        if len > self.cutoff {
            return;
        }
        if (x2 - 1.0) > self.cosh2_delta_max * (h * h - 1.0) {
            return;
        }
        self.candidates += 1;
        let g = node.normalized();
        match is_key(&g) {
            Ok(true) => self.found.push(Found {
                key: g,
                trace: g.abs_trace_exact(),
            }),
            Ok(false) => {}
            Err(e) => {
                if self.error.is_none() {
                    self.error = Some(e);
                }
            }
        }
    }

    fn dfs(&mut self, root: Elem) {
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            self.consider(&node);
            let kids: Vec<Elem> = self.children(&node).collect();
            // reversed so that children are processed in increasing k
            stack.extend(kids.into_iter().rev());
        }
    }
}

/// Key representatives (with walk letters) of all classes of length ≤ L.
fn traverse(cutoff: f64, threads: usize) -> Result<(Vec<Found>, EnumerationStats)> {
    let mut top = Traversal::new(cutoff);
    top.nodes += 1; // identity
    let level1: Vec<Elem> = top.children(&Elem::IDENTITY).collect();
    let mut level2 = Vec::new();
    for n in &level1 {
        top.consider(n);
        level2.extend(top.children(n));
    }
    let run = |roots: &[Elem]| -> Vec<Traversal> {
        roots
            .par_iter()
            .map(|r| {
                let mut t = Traversal::new(cutoff);
                t.dfs(*r);
                t
            })
            .collect()
    };
    let parts = if threads == 0 {
        run(&level2)
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| run(&level2))
    };
    let mut stats = EnumerationStats {
        ball_radius: ball_cosh_radius(cutoff).acosh(),
        nodes: top.nodes,
        candidates: top.candidates,
        classes: 0,
    };
    if let Some(e) = top.error {
        return Err(e);
    }
    let mut found = top.found;
    for p in parts {
        if let Some(e) = p.error {
            return Err(e);
        }
        stats.nodes += p.nodes;
        stats.candidates += p.candidates;
        found.extend(p.found);
    }
    stats.classes = found.len() as u64;
    Ok((found, stats))
}

fn build_record(f: &Found) -> Result<(ZSqrt2, ConjugacyClassRecord)> {
    let length = f.key.length().ok_or(Error::NotHyperbolic {
        abs_trace: f.key.abs_trace(),
    })?;
    let (root, letters) = primitive_period(&f.key)?;
    let root_len = root.length().ok_or(Error::NotHyperbolic {
        abs_trace: root.abs_trace(),
    })?;
    let n = (length / root_len).round().max(1.0) as u32;
    if !root.pow(n).same_psl(&f.key) {
        return Err(Error::WalkFailed(format!("root power check failed (n = {n})")));
    }
    let (canonical_word, primitive_root) = if n == 1 {
        let w = canonical_cyclic_form(&cyclic_reduce(&Word::from_gen_indices(&letters)));
        (w.clone(), w)
    } else {
        let rw = canonical_word_of_key(&class_key(&root)?)?;
        (rw.pow(n as usize), rw)
    };
    if canonical_word.len() > MAX_WORD_LEN {
        return Err(Error::WordTooLong(canonical_word.len()));
    }
    Ok((
        f.trace,
        ConjugacyClassRecord {
            canonical_word,
            length,
            n_gamma: n,
            primitive_root,
            abs_trace: f.trace.to_f64(),
        },
    ))
}

fn sorted_records(found: &[Found], threads: usize) -> Result<Vec<ConjugacyClassRecord>> {
    let build = || found.par_iter().map(build_record).collect::<Result<Vec<_>>>();
    let mut recs = if threads == 0 {
        build()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(build)?
    };
    recs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.canonical_word.cmp(&b.1.canonical_word)));
    Ok(recs.into_iter().map(|(_, r)| r).collect())
}

/// Linear lower bound `l ≥ σ n − τ` on the length of classes with canonical
/// words of `n` letters, fitted on the warm-up spectrum.
pub fn calibrate() -> Result<(f64, f64)> {
    let (found, _) = traverse(WARMUP_CUTOFF, 1)?;
    let recs = sorted_records(&found, 1)?;
    let mut min_len = vec![f64::INFINITY; WARMUP_MAX_LETTERS + 1];
    for r in &recs {
        let n = r.canonical_word.len();
        if n <= WARMUP_MAX_LETTERS {
            min_len[n] = min_len[n].min(r.length);
        }
    }
    let pts: Vec<(f64, f64)> = min_len
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(n, &v)| (n as f64, v))
        .collect();
    if pts.len() < 2 {
        return Err(Error::CutoffTooLarge(
            "calibration produced fewer than two points".into(),
        ));
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let offset = pts.iter().map(|(x, y)| slope * x - y).fold(f64::NEG_INFINITY, f64::max);
    Ok((slope, offset))
}

/// `W(L) = ceil((L + τ)/σ · safety)`.
pub fn word_length_bound(cutoff: f64, slope: f64, offset: f64) -> usize {
    ((cutoff + offset) / slope * SAFETY_FACTOR).ceil().max(0.0) as usize
}

pub fn enumerate_classes(pres: &SurfacePresentation, cutoff: f64) -> Result<LengthSpectrum> {
    enumerate_classes_with(pres, cutoff, EnumerationOptions::default()).map(|(s, _)| s)
}

pub fn enumerate_classes_with(
    pres: &SurfacePresentation,
    cutoff: f64,
    opts: EnumerationOptions,
) -> Result<(LengthSpectrum, EnumerationStats)> {
    if pres.genus != 2 {
        return Err(Error::UnsupportedGenus(pres.genus));
    }
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::CutoffTooLarge(format!(
            "cutoff must be positive and finite (got {cutoff})"
        )));
    }
    let (slope, offset) = calibrate()?;
    let w = word_length_bound(cutoff, slope, offset);
    if w > MAX_WORD_LEN {
        return Err(Error::CutoffTooLarge(format!(
            "word-length bound {w} exceeds {MAX_WORD_LEN}"
        )));
    }
    let projected = projected_nodes(cutoff);
    if projected > opts.node_budget {
        return Err(Error::CutoffTooLarge(format!(
            "projected {projected:.3e} orbit-ball nodes exceed the budget {:.3e}",
            opts.node_budget
        )));
    }
    let (found, stats) = traverse(cutoff, opts.threads)?;
    let records = sorted_records(&found, opts.threads)?;
    let spec = LengthSpectrum {
        genus: pres.genus,
        records,
        cutoff,
        completeness: Certificate {
            word_length_bound: w,
            calibration_slope: slope,
            calibration_offset: offset,
            safety_factor: SAFETY_FACTOR,
        },
    };
    Ok((spec, stats))
}

/// Number of records with length ≤ R.
pub fn counting_function(spec: &LengthSpectrum, r: f64) -> Result<usize> {
    if r > spec.cutoff {
        return Err(Error::BeyondCutoff { r, cutoff: spec.cutoff });
    }
    Ok(spec.records.partition_point(|rec| rec.length <= r))
}

/// Checks that records of equal length (|Δ trace| ≤ 1e−6) are distinct
/// classes: distinct canonical words and distinct conjugacy keys of the
/// canonical-word elements. Returns the number of such clusters.
pub fn audit_dedup(spec: &LengthSpectrum) -> Result<usize> {
    let recs = &spec.records;
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=recs.len() {
        if i == recs.len() || (recs[i].abs_trace - recs[start].abs_trace).abs() > 1e-6 {
            if i - start > 1 {
                clusters.push(start..i);
            }
            start = i;
        }
    }
    clusters.par_iter().try_for_each(|r| -> Result<()> {
        let mut words = std::collections::HashSet::new();
        let mut keys = std::collections::HashSet::new();
        for rec in &recs[r.clone()] {
            if !words.insert(&rec.canonical_word) {
                return Err(Error::DuplicateClass(format!("word {} repeated", rec.canonical_word)));
            }
            let (g, _) = recentre(&LengthSpectrum::element(rec))?;
            if !keys.insert(class_key(&g)?) {
                return Err(Error::DuplicateClass(format!(
                    "{} is conjugate to an earlier record",
                    rec.canonical_word
                )));
            }
        }
        Ok(())
    })?;
    Ok(clusters.len())
}

impl LengthSpectrum {
    pub fn systole(&self) -> Option<f64> {
        self.records.first().map(|r| r.length)
    }

    /// Exact group element of a record's canonical word.
    pub fn element(rec: &ConjugacyClassRecord) -> Elem {
        Elem::from_gens(&rec.canonical_word.gen_indices())
    }
}
