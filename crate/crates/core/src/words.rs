//! Words in the surface generators and the combinatorial reductions on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::hyperbolic::SurfacePresentation;

/// Maximum supported word length.
pub const MAX_WORD_LEN: usize = 64;

/// Signed generator `x_i^{±1}`, encoded as `2i + inv`. The derived order
/// (`a1 < A1 < b1 < B1 < a2 < …`) is the total order used for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

/// Side pairing index of each presentation letter: a1 = g0, b1 = g1⁻¹ = g5,
/// a2 = g2, b2 = g3⁻¹ = g7, inverses shifted by four.
const GEN_INDEX: [u8; 8] = [0, 4, 5, 1, 2, 6, 7, 3];

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((2 * generator + inverse as usize) as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// Index k of the octagon side pairing g_k this letter stands for
    /// (genus 2 only).
    pub fn gen_index(self) -> usize {
        GEN_INDEX[self.0 as usize] as usize
    }

    pub fn from_gen_index(k: usize) -> Self {
        let pos = GEN_INDEX.iter().position(|&g| g as usize == k % 8).expect("k in 0..8");
        Letter(pos as u8)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.generator();
        let (name, idx) = (if i % 2 == 0 { 'a' } else { 'b' }, i / 2 + 1);
        let name = if self.is_inverse() {
            name.to_ascii_uppercase()
        } else {
            name
        };
        write!(f, "{name}{idx}")
    }
}

/// Sequence of signed letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced() && (self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse())
    }

    /// Side pairing indices (genus 2).
    pub fn gen_indices(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.gen_index() as u8).collect()
    }

    pub fn from_gen_indices(ks: &[u8]) -> Word {
        Word(ks.iter().map(|&k| Letter::from_gen_index(k as usize)).collect())
    }

    /// Parses `a1.B1.a2`; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in s.split('.') {
            let mut chars = tok.chars();
            let c = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("empty letter in {s:?}")))?;
            let idx: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter {tok:?}")))?;
            if idx == 0 {
                return Err(Error::Parse(format!("bad letter {tok:?}")));
            }
            let (off, inv) = match c {
                'a' => (0, false),
                'A' => (0, true),
                'b' => (1, false),
                'B' => (1, true),
                _ => return Err(Error::Parse(format!("bad letter {tok:?}"))),
            };
            out.push(Letter::new(2 * (idx - 1) + off, inv));
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Free reduction followed by stripping inverse pairs at the two ends.
pub fn cyclic_reduce(w: &Word) -> Word {
    let v = free_reduce(w).0;
    let (mut i, mut j) = (0, v.len());
    while j - i >= 2 && v[i] == v[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    Word(v[i..j].to_vec())
}

/// Dehn's algorithm: replace any subword longer than half of a cyclic
/// rotation of the relator (or its inverse) by the inverse of the
/// complementary part, free-reduce, repeat until stable.
pub fn dehn_reduce(w: &Word, pres: &SurfacePresentation) -> Word {
    let r = pres.relator.letters();
    let n = r.len();
    let rotations: Vec<Vec<Letter>> = (0..n)
        .flat_map(|k| {
            let fwd = Word(r.to_vec()).rotate(k).0;
            let bwd = Word(r.to_vec()).inverse().rotate(k).0;
            [fwd, bwd]
        })
        .collect();
    let mut cur = free_reduce(w).0;
    'outer: loop {
        for start in 0..cur.len() {
            for rot in &rotations {
                if rot[0] != cur[start] {
                    continue;
                }
                let mut m = 0;
                while m < n && start + m < cur.len() && cur[start + m] == rot[m] {
                    m += 1;
                }
                if 2 * m > n {
                    let complement: Vec<Letter> = rot[m..].iter().rev().map(|l| l.inverse()).collect();
                    let mut next = cur[..start].to_vec();
                    next.extend(complement);
                    next.extend_from_slice(&cur[start + m..]);
                    cur = free_reduce(&Word(next)).0;
                    continue 'outer;
                }
            }
        }
        return Word(cur);
    }
}

/// Least rotation under the letter order (two-pointer minimum rotation).
pub fn canonical_cyclic_form(w: &Word) -> Word {
    let s = &w.0;
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    w.rotate(i.min(j))
}

/// Shortest `root` with `w = root^n` at the letter level.
pub fn primitive_decompose(w: &Word) -> (Word, usize) {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w.0[i] == w.0[i - p]) {
            return (Word(w.0[..p].to_vec()), n / p);
        }
    }
    (w.clone(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::octagon_presentation;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        let s = "a1.B1.a2.b2.A2";
        assert_eq!(w(s).to_string(), s);
        assert!(Word::parse("c1").is_err());
        assert!(Word::parse("a0").is_err());
    }

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&w("a1.A1.b1")), w("b1"));
        assert_eq!(cyclic_reduce(&w("a1.b1.A1")), w("b1"));
        assert_eq!(free_reduce(&w("a1.b1")), w("a1.b1"));
    }

    #[test]
    fn dehn_examples() {
        let pres = octagon_presentation(2).unwrap();
        assert!(dehn_reduce(&pres.relator, &pres).is_empty());
        let five = w("a1.b1.a2.b2.A1");
        assert_eq!(dehn_reduce(&five, &pres), w("b2.a2.b1"));
    }

    #[test]
    fn canonical_rotation() {
        let x = w("b1.a1");
        assert_eq!(canonical_cyclic_form(&x), w("a1.b1"));
        assert_eq!(canonical_cyclic_form(&w("a1")), w("a1"));
        let y = w("b2.a1.A2.a1.b1");
        let c = canonical_cyclic_form(&y);
        for k in 0..y.len() {
            assert_eq!(canonical_cyclic_form(&y.rotate(k)), c);
        }
        let best = (0..y.len()).map(|k| y.rotate(k)).min().unwrap();
        assert_eq!(c, best);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_decompose(&w("a1.b1.a1.b1")), (w("a1.b1"), 2));
        assert_eq!(primitive_decompose(&w("a1.b1")), (w("a1.b1"), 1));
        let c = w("a1.b1.A1.B1");
        assert_eq!(primitive_decompose(&c.pow(3)), (c, 3));
    }

    #[test]
    fn gen_index_roundtrip() {
        for k in 0..8 {
            assert_eq!(Letter::from_gen_index(k).gen_index(), k);
        }
        assert_eq!(Letter::new(0, false).inverse().gen_index(), 4);
    }
}
