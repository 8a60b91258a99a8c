//! Brute-force length-spectrum oracle.
//!
//! Runs over every cyclically reduced word of at most `max_letters` letters
//! (one rotation per cyclic word), keeps those of length ≤ L, and
//! identifies each class by the lexicographically smallest normalized
//! conjugate whose axis passes within the circumradius of o. The
//! conjugators come from an exact orbit ball around o, so nothing here uses
//! the enumerator's tree, walk or keys.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use zeta_lab_core::cyclotomic::ZSqrt2;
use zeta_lab_core::octagon::Elem;

/// α⁴ = cosh² of the octagon circumradius.
const ALPHA4: ZSqrt2 = ZSqrt2::new(17, 12);
const COSH_CIRCUMRADIUS: f64 = 5.828_427_124_746_19;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleClass {
    pub key: Elem,
    pub length: f64,
    pub n_gamma: u32,
}

fn inv(k: u8) -> u8 {
    (k + 4) % 8
}

/// Axis of `g` within the circumradius of o, decided exactly:
/// `4(|x|² − 1) ≤ α⁴ (tr² − 4)`.
fn axis_near_origin(g: &Elem) -> bool {
    let t = g.x.re2();
    let lhs = (g.x.norm_sq() - ZSqrt2::new(1, 0)) * ZSqrt2::new(4, 0);
    let rhs = ALPHA4 * (t * t - ZSqrt2::new(4, 0));
    lhs <= rhs
}

fn coeffs(g: &Elem) -> ([i64; 4], [i64; 4]) {
    (g.x.c, g.y.c)
}

/// Orbit ball `{h : d(o, h·o) ≤ R}` sorted by displacement; grown on demand.
pub struct Ball {
    cosh_r: f64,
    items: Vec<(f64, Elem, Elem)>,
}

impl Ball {
    pub fn new() -> Self {
        let mut b = Ball {
            cosh_r: 0.0,
            items: Vec::new(),
        };
        b.grow(10.0);
        b
    }

    fn grow(&mut self, cosh_r: f64) {
        if cosh_r <= self.cosh_r {
            return;
        }
        let mut seen = HashSet::new();
        let id = Elem::IDENTITY;
        seen.insert(id);
        let mut queue = vec![id];
        let mut i = 0;
        while i < queue.len() {
            let h = queue[i];
            i += 1;
            for k in 0..8 {
                let c = Elem::gen(k).mul(&h).normalized();
                if c.cosh_displacement() <= cosh_r * (1.0 + 1e-12) && seen.insert(c) {
                    queue.push(c);
                }
            }
        }
        self.items = queue.iter().map(|h| (h.cosh_displacement(), *h, h.inverse())).collect();
        self.items.sort_by(|a, b| a.0.total_cmp(&b.0));
        self.cosh_r = cosh_r;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Smallest normalized conjugate with axis near o.
    pub fn key(&mut self, g: &Elem) -> Elem {
        let g = g.normalized();
        let l = g.length().expect("hyperbolic");
        let h2 = (0.5 * l).sinh().powi(2);
        let cosh_d0 = ((g.x.norm_sq().to_f64() - 1.0) / h2).max(1.0).sqrt();
        let r = cosh_d0.acosh() + COSH_CIRCUMRADIUS.acosh() + 0.5 * l + 0.1;
        self.grow(r.cosh());
        let mut best: Option<Elem> = None;
        for (c, h, hi) in &self.items {
            if *c > r.cosh() * (1.0 + 1e-12) {
                break;
            }
            let cand = h.mul(&g).mul(hi).normalized();
            if axis_near_origin(&cand) && best.map_or(true, |b| coeffs(&cand) < coeffs(&b)) {
                best = Some(cand);
            }
        }
        best.expect("some conjugate has its axis near o")
    }
}

fn is_min_rotation(w: &[u8]) -> bool {
    (1..w.len()).all(|r| {
        let rot = w[r..].iter().chain(&w[..r]);
        w.iter().cmp(rot.copied().collect::<Vec<_>>().iter()) != std::cmp::Ordering::Greater
    })
}

/// All classes of length ≤ `cutoff` with a cyclically reduced word of at
/// most `max_letters` letters, sorted by (length, key).
pub fn oracle_classes(cutoff: f64, max_letters: usize) -> Vec<OracleClass> {
    let max_trace = 2.0 * (0.5 * cutoff).cosh() * (1.0 + 1e-12);
    let mut ball = Ball::new();
    let mut classes: BTreeMap<([i64; 4], [i64; 4]), (Elem, f64)> = BTreeMap::new();
    let mut word = Vec::with_capacity(max_letters);
    let mut elems = vec![Elem::IDENTITY];
    fn dfs(
        word: &mut Vec<u8>,
        elems: &mut Vec<Elem>,
        max_letters: usize,
        max_trace: f64,
        ball: &mut Ball,
        classes: &mut BTreeMap<([i64; 4], [i64; 4]), (Elem, f64)>,
    ) {
        let g = *elems.last().unwrap();
        if !word.is_empty()
            && word[0] != inv(*word.last().unwrap())
            && g.is_hyperbolic()
            && g.abs_trace() <= max_trace
            && is_min_rotation(word)
        {
            let key = ball.key(&g);
            classes.entry(coeffs(&key)).or_insert((key, g.length().unwrap()));
        }
        if word.len() == max_letters {
            return;
        }
        for k in 0..8u8 {
            if word.last().is_some_and(|&p| p == inv(k)) {
                continue;
            }
            word.push(k);
            elems.push(g.mul(&Elem::gen(k as usize)));
            dfs(word, elems, max_letters, max_trace, ball, classes);
            word.pop();
            elems.pop();
        }
    }
    dfs(&mut word, &mut elems, max_letters, max_trace, &mut ball, &mut classes);

    let list: Vec<(Elem, f64)> = classes.into_values().collect();
    let mut out: Vec<OracleClass> = list
        .iter()
        .map(|(key, length)| {
            // largest k with a class D such that D^k lies in this class
            let mut n = 1;
            for (d, ld) in &list {
                let k = (length / ld).round();
                if k >= 2.0 && (k * ld - length).abs() <= 1e-9 && ball.key(&d.pow(k as u32)) == *key {
                    n = n.max(k as u32);
                }
            }
            OracleClass {
                key: *key,
                length: *length,
                n_gamma: n,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| coeffs(&a.key).cmp(&coeffs(&b.key)))
    });
    out
}
