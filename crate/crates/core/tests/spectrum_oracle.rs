#[path = "support/oracle.rs"]
mod oracle;

use std::sync::OnceLock;

use oracle::{oracle_classes, Ball};
use zeta_lab_core::hyperbolic::octagon_presentation;
use zeta_lab_core::octagon::Elem;
use zeta_lab_core::spectrum::{audit_dedup, enumerate_classes, LengthSpectrum};
use zeta_lab_core::words::Word;

fn spectrum(cutoff: f64) -> LengthSpectrum {
    enumerate_classes(&octagon_presentation(2).unwrap(), cutoff).unwrap()
}

fn spec_62() -> &'static LengthSpectrum {
    static S: OnceLock<LengthSpectrum> = OnceLock::new();
    S.get_or_init(|| spectrum(6.2))
}

fn spec_12() -> &'static LengthSpectrum {
    static S: OnceLock<LengthSpectrum> = OnceLock::new();
    S.get_or_init(|| spectrum(12.0))
}

fn word_elem(w: &Word) -> Elem {
    Elem::from_gens(&w.gen_indices())
}

#[test]
fn enumeration_matches_brute_force_oracle() {
    let spec = spec_62();
    let w = spec.completeness.word_length_bound;
    assert!(w >= 8, "word bound {w}");
    let classes = oracle_classes(6.2, w);
    assert_eq!(spec.records.len(), classes.len());
    let mut ball = Ball::new();
    let mut keys: Vec<_> = spec
        .records
        .iter()
        .map(|r| {
            let k = ball.key(&word_elem(&r.canonical_word));
            (k, r)
        })
        .collect();
    for o in &classes {
        let pos = keys
            .iter()
            .position(|(k, _)| *k == o.key)
            .unwrap_or_else(|| panic!("oracle class of length {} missing", o.length));
        let (_, r) = keys.swap_remove(pos);
        assert!((r.length - o.length).abs() <= 1e-9, "{} vs {}", r.length, o.length);
        assert_eq!(r.n_gamma, o.n_gamma, "n_gamma of {}", r.canonical_word);
        let root = word_elem(&r.primitive_root).pow(r.n_gamma);
        assert_eq!(ball.key(&root), o.key, "primitive root of {}", r.canonical_word);
    }
    assert!(keys.is_empty());
}

#[test]
fn systole_and_its_multiplicity() {
    let spec = spec_62();
    let systole = 2.0 * (1.0 + 2f64.sqrt()).acosh();
    assert!((spec.systole().unwrap() - systole).abs() <= 1e-9);
    let count = spec
        .records
        .iter()
        .filter(|r| (r.length - systole).abs() <= 1e-9)
        .count();
    let oracle = oracle_classes(3.1, 4);
    assert_eq!(oracle.len(), count);
    assert!(oracle.iter().all(|o| (o.length - systole).abs() <= 1e-9));
}

#[test]
fn smaller_cutoff_gives_a_prefix() {
    let small = spectrum(5.0);
    let big = spec_62();
    let n = big.records.iter().filter(|r| r.length <= 5.0).count();
    assert_eq!(small.records.len(), n);
    assert_eq!(small.records[..], big.records[..n]);
}

#[test]
fn powers_have_multiple_lengths() {
    let spec = spec_12();
    let mut powers = 0;
    for r in &spec.records {
        let root = word_elem(&r.primitive_root);
        let l0 = root.length().unwrap();
        assert!((r.length - r.n_gamma as f64 * l0).abs() <= 1e-9, "{}", r.canonical_word);
        assert_eq!(r.canonical_word, r.primitive_root.pow(r.n_gamma as usize));
        if r.n_gamma > 1 {
            powers += 1;
            assert!(spec.records.iter().any(|q| q.canonical_word == r.primitive_root));
        }
    }
    assert!(powers > 0);
}

#[test]
fn equal_length_records_are_distinct_classes() {
    let clusters = audit_dedup(spec_12()).unwrap();
    assert!(clusters >= 50, "{clusters}");
}

#[test]
fn counting_function_grows_exponentially() {
    let spec = spec_12();
    for r in [6.0, 8.0, 10.0, 12.0] {
        let n = zeta_lab_core::spectrum::counting_function(spec, r).unwrap() as f64;
        let v = n * r * (-r as f64).exp();
        assert!((0.5..4.0).contains(&v), "N({r}) R e^-R = {v}");
    }
}
