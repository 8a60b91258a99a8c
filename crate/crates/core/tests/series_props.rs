#[path = "support/reps.rs"]
mod reps;

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use reps::{affine, c, perturbed_dim2, scalar_13};
use zeta_lab_core::hyperbolic::{octagon_presentation, SurfacePresentation};
use zeta_lab_core::representation::{CMatrix, FlatRepresentation};
use zeta_lab_core::spectrum::{enumerate_classes, LengthSpectrum};
use zeta_lab_core::zeta_series::TwistedSpectrum;
use zeta_lab_core::{cache, Error};

fn pres() -> &'static SurfacePresentation {
    static P: OnceLock<SurfacePresentation> = OnceLock::new();
    P.get_or_init(|| octagon_presentation(2).unwrap())
}

fn spec(cutoff: u32) -> &'static LengthSpectrum {
    static S6: OnceLock<LengthSpectrum> = OnceLock::new();
    static S8: OnceLock<LengthSpectrum> = OnceLock::new();
    static S10: OnceLock<LengthSpectrum> = OnceLock::new();
    static S12: OnceLock<LengthSpectrum> = OnceLock::new();
    let cell = match cutoff {
        6 => &S6,
        8 => &S8,
        10 => &S10,
        12 => &S12,
        _ => unreachable!(),
    };
    cell.get_or_init(|| enumerate_classes(pres(), cutoff as f64).unwrap())
}

fn fixed_reps() -> Vec<FlatRepresentation> {
    vec![
        FlatRepresentation::trivial(pres(), 1).unwrap(),
        scalar_13(pres()),
        perturbed_dim2(pres()),
    ]
}

fn scalar_rep() -> impl Strategy<Value = FlatRepresentation> {
    prop::collection::vec((0.6f64..1.6, -3.2f64..3.2), 4).prop_map(|v| {
        let vals: Vec<Complex64> = v.iter().map(|&(r, th)| Complex64::from_polar(r, th)).collect();
        FlatRepresentation::scalar(pres(), &vals).unwrap()
    })
}

fn affine_rep() -> impl Strategy<Value = FlatRepresentation> {
    (
        prop::collection::vec((0.8f64..1.25, -0.5f64..0.5), 4),
        prop::collection::vec((-0.2f64..0.2, -0.2f64..0.2), 3),
    )
        .prop_map(|(x, u)| {
            let xs = [0, 1, 2, 3].map(|i| Complex64::from_polar(x[i].0, x[i].1));
            let us = [0, 1, 2].map(|i| c(u[i].0, u[i].1));
            affine(pres(), &xs, &us)
        })
}

/// `−Σ_{γ₀ primitive} Σ_{n ≥ 1, n l₀ ≤ L} Σ_{k ≥ 0} tr χ(γ₀)ⁿ e^{−(s+k) n l₀} / n`,
/// with χ(γ₀)ⁿ taken as a matrix power.
fn triple_sum(spec: &LengthSpectrum, rep: &FlatRepresentation, s: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for r in spec.records.iter().filter(|r| r.n_gamma == 1) {
        let m = rep.evaluate(&r.canonical_word);
        let mut p = CMatrix::identity(rep.dim, rep.dim);
        let mut n = 1;
        while n as f64 * r.length <= spec.cutoff + 1e-9 {
            p = &p * &m;
            let tr = p.trace();
            let nl = n as f64 * r.length;
            let mut k = 0;
            loop {
                let term = tr * (-(s + k as f64) * nl).exp() / n as f64;
                total -= term;
                if term.norm() < 1e-20 {
                    break;
                }
                k += 1;
            }
            n += 1;
        }
    }
    total
}

#[test]
fn triple_sum_matches_single_sum() {
    let mut rng = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    for rep in fixed_reps() {
        let rep = rep.with_critical_exponent(spec(12)).unwrap();
        let tw = TwistedSpectrum::new(spec(12), &rep).unwrap();
        for _ in 0..6 {
            let s = c(tw.abscissa() + 0.2 + 2.0 * next(), 20.0 * next() - 10.0);
            let v = tw.log_selberg(s).unwrap();
            let o = triple_sum(spec(12), &rep, s);
            assert!((v.value - o).norm() <= 1e-10 + v.tail_bound, "{s}: {} vs {o}", v.value);
        }
    }
}

#[test]
fn log_derivative_is_the_derivative() {
    for rep in fixed_reps() {
        let rep = rep.with_critical_exponent(spec(12)).unwrap();
        let tw = TwistedSpectrum::new(spec(12), &rep).unwrap();
        let h = 1e-4;
        for k in 0..5 {
            let s = c(tw.abscissa() + 0.5 + 0.4 * k as f64, -3.0 + 1.5 * k as f64);
            let d = (tw.log_selberg(s + h).unwrap().value - tw.log_selberg(s - h).unwrap().value) / (2.0 * h);
            let l = tw.log_derivative(s).unwrap();
            assert!((d - l.value).norm() <= 1e-6 + l.tail_bound, "{s}");
        }
    }
}

#[test]
fn tails_shrink_with_the_cutoff() {
    for rep in [FlatRepresentation::trivial(pres(), 1).unwrap(), scalar_13(pres())] {
        let s = c(3.5, 1.0);
        let tails: Vec<f64> = [8, 10, 12]
            .iter()
            .map(|&l| {
                let r = rep.clone().with_critical_exponent(spec(l)).unwrap();
                let tw = TwistedSpectrum::new(spec(l), &r).unwrap();
                tw.log_selberg(s).unwrap().tail_bound + tw.log_ruelle(s).unwrap().tail_bound
            })
            .collect();
        assert!(tails[0] > tails[1] && tails[1] > tails[2], "{tails:?}");
    }
}

#[test]
fn thread_count_does_not_change_bits() {
    let rep = perturbed_dim2(pres()).with_critical_exponent(spec(12)).unwrap();
    let s = c(3.3, 0.7);
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| {
                let tw = TwistedSpectrum::new(spec(12), &rep).unwrap();
                (tw.log_selberg(s).unwrap().value, tw.log_derivative(s).unwrap().value)
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn below_the_abscissa_is_refused() {
    let rep = FlatRepresentation::trivial(pres(), 1)
        .unwrap()
        .with_critical_exponent(spec(8))
        .unwrap();
    let tw = TwistedSpectrum::new(spec(8), &rep).unwrap();
    assert!((tw.abscissa() - 1.1).abs() < 1e-15);
    let err = tw.log_selberg(c(0.2, 0.0)).unwrap_err();
    assert!(matches!(err, Error::OutsideHalfPlane { abscissa, .. } if (abscissa - 1.1).abs() < 1e-15));
}

#[test]
fn large_re_s_term_bound() {
    let sp = spec(8);
    let rep = FlatRepresentation::trivial(pres(), 1)
        .unwrap()
        .with_critical_exponent(sp)
        .unwrap();
    let tw = TwistedSpectrum::new(sp, &rep).unwrap();
    let s = c(30.0, 2.0);
    let l0 = sp.systole().unwrap();
    let bound = sp.records.len() as f64 * (-s.re * l0).exp() / (1.0 - (-l0).exp());
    assert!(tw.log_selberg(s).unwrap().value.norm() <= bound);
}

#[test]
fn spectrum_cache_roundtrip_is_bit_exact() {
    let sp = spec(10);
    let back = cache::from_csv(&cache::to_csv(sp)).unwrap();
    assert_eq!(back.records, sp.records);
    assert_eq!(back.completeness, sp.completeness);
}

#[test]
fn scalar_critical_exponent_closed_form() {
    // χ(a₁) = 2: ‖χ(γ)‖ = 2^{e(γ)} with e the exponent sum of a₁
    let one = c(1.0, 0.0);
    let rep = FlatRepresentation::scalar(pres(), &[c(2.0, 0.0), one, one, one]).unwrap();
    let sp = spec(8);
    let expected = sp
        .records
        .iter()
        .map(|r| {
            let e: i32 = r
                .canonical_word
                .letters()
                .iter()
                .filter(|l| l.generator() == 0)
                .map(|l| if l.is_inverse() { -1 } else { 1 })
                .sum();
            (e as f64 * 2f64.ln() / r.length).max(0.0)
        })
        .fold(0.0, f64::max);
    let got = rep.with_critical_exponent(sp).unwrap().c_hat;
    assert!((got - expected).abs() <= 1e-12, "{got} {expected}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_multiplicative(rep in affine_rep(), a in prop::collection::vec((0usize..4, any::<bool>()), 0..12),
                                    b in prop::collection::vec((0usize..4, any::<bool>()), 0..12)) {
        use zeta_lab_core::words::{Letter, Word};
        let w = |v: &Vec<(usize, bool)>| Word::new(v.iter().map(|&(g, i)| Letter::new(g, i)).collect());
        let (wa, wb) = (w(&a), w(&b));
        let lhs = rep.evaluate(&wa.concat(&wb));
        let rhs = rep.evaluate(&wa) * rep.evaluate(&wb);
        let d = lhs.iter().zip(rhs.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(d <= 1e-9, "{d}");
    }

    #[test]
    fn traces_obey_the_growth_bound(rep in prop_oneof![scalar_rep(), affine_rep()]) {
        let sp = spec(8);
        let rep = rep.with_critical_exponent(sp).unwrap();
        for r in &sp.records {
            let t = rep.trace_of(&r.canonical_word).norm();
            prop_assert!(t <= rep.dim as f64 * (rep.c_hat * r.length).exp() * (1.0 + 1e-6));
        }
    }

    #[test]
    fn critical_exponent_is_stable(rep in prop_oneof![scalar_rep(), affine_rep()]) {
        let full = rep.clone().with_critical_exponent(spec(12)).unwrap().c_hat;
        let half = rep.with_critical_exponent(spec(6)).unwrap().c_hat;
        prop_assert!(full >= half - 1e-12);
        prop_assert!(full - half <= 0.2, "{full} {half}");
    }

    #[test]
    fn ruelle_is_a_selberg_quotient(rep in prop_oneof![scalar_rep(), affine_rep()], im in -20.0f64..20.0, dre in 0.01f64..3.0) {
        let rep = rep.with_critical_exponent(spec(12)).unwrap();
        let tw = TwistedSpectrum::new(spec(12), &rep).unwrap();
        let s = c(tw.abscissa() + dre, im);
        let (res, tails) = tw.ruelle_selberg_residual(s).unwrap();
        prop_assert!(res <= tails + 1e-12, "{res} {tails}");
    }

    #[test]
    fn real_representations_are_conjugate_symmetric(x in prop::collection::vec(0.7f64..1.4, 4), u in prop::collection::vec(-0.2f64..0.2, 3),
                                                     dre in 0.1f64..3.0, im in -10.0f64..10.0) {
        let xs = [0, 1, 2, 3].map(|i| c(x[i], 0.0));
        let us = [0, 1, 2].map(|i| c(u[i], 0.0));
        let rep = affine(pres(), &xs, &us).with_critical_exponent(spec(10)).unwrap();
        let tw = TwistedSpectrum::new(spec(10), &rep).unwrap();
        let s = c(tw.abscissa() + dre, im);
        for f in [TwistedSpectrum::log_selberg, TwistedSpectrum::log_ruelle, TwistedSpectrum::log_derivative] {
            let a = f(&tw, s).unwrap().value;
            let b = f(&tw, s.conj()).unwrap().value;
            prop_assert!((a - b.conj()).norm() <= 1e-13 * (1.0 + a.norm()));
        }
    }
}
