use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use zeta_lab_core::functional_eq::{
    a_of, asy_ratio, eta, fe_integral, ruelle_fe_rhs, singularity_catalog, zero_order_prediction, SingularitySource,
};
use zeta_lab_core::trace_formula::SpectralTable;
use zeta_lab_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn zeta_even(k: u32) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => (1..2000).map(|n| (n as f64).powi(-2 * k as i32)).sum(),
    }
}

/// Clausen function Cl₂(θ), 0 < θ ≤ π, from its series about 0.
fn clausen2(th: f64) -> f64 {
    let mut s = th - th * th.ln();
    let q = (th / (2.0 * PI)).powi(2);
    let mut p = 1.0;
    for k in 1..60 {
        p *= q;
        s += th * zeta_even(k) * p / (k as f64 * (2.0 * k as f64 + 1.0));
    }
    s
}

/// `∫_0^x r tan πr dr` for |x| < 1/2 via `∫_0^φ ln cos = −φ ln 2 + Cl₂(π − 2φ)/2`.
fn closed_form(x: f64) -> f64 {
    let ax = x.abs();
    let phi = PI * ax;
    let logcos_int = -phi * 2f64.ln() + 0.5 * clausen2(PI - 2.0 * phi);
    let v = -(ax / PI) * phi.cos().ln() + logcos_int / (PI * PI);
    v * x.signum()
}

#[test]
fn a_matches_the_clausen_closed_form() {
    for s in [-0.95, -0.9, -0.7, -0.5, -0.3, -0.1, -0.02, -1e-3, -1e-5] {
        let want = -2.0 * PI * closed_form(s + 0.5);
        let got = a_of(s).unwrap();
        assert!(
            (got - want).abs() <= 1e-10 * want.abs().max(1.0),
            "A({s}) = {got}, closed form {want}"
        );
    }
}

#[test]
fn asy_ratio_approaches_one() {
    let r: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&e| asy_ratio(e).unwrap()).collect();
    assert!((r[0] - 1.0).abs() <= 0.15 && (r[1] - 1.0).abs() <= 0.03 && (r[2] - 1.0).abs() <= 0.01);
    assert!((r[0] - 1.0).abs() > (r[1] - 1.0).abs() && (r[1] - 1.0).abs() > (r[2] - 1.0).abs());
    for (e, v) in [1e-2, 1e-3, 1e-4].iter().zip(&r) {
        let want = (-2.0 * PI * closed_form(0.5 - e)).exp() / (2.0 * PI * e);
        assert!((v - want).abs() <= 1e-9, "{e}");
    }
    assert!(matches!(asy_ratio(-1e-3), Err(Error::BadEps(_))));
}

#[test]
fn eta_at_one_half_is_one() {
    assert_eq!(eta(c(0.5, 0.0), 1, 2, 1).unwrap(), c(1.0, 0.0));
}

#[test]
fn pole_endpoints_are_refused() {
    for s in [c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0005, 0.0)] {
        assert!(matches!(eta(s, 1, 2, 1), Err(Error::EndpointAtPole { .. })), "{s}");
    }
    assert!(matches!(
        ruelle_fe_rhs(c(0.0, 0.0), 1, 2),
        Err(Error::EndpointAtPole { .. })
    ));
}

#[test]
fn detour_radius_shrinks_near_endpoints() {
    let i = fe_integral(c(0.0, 0.0), c(0.505, 0.0), 1).unwrap();
    assert!((i.path.detour_radius - 0.005).abs() < 1e-12);
    assert_eq!(i.path.detours, 1);
}

#[test]
fn ruelle_predictor_is_real_on_the_imaginary_axis() {
    // the segment is symmetric under z ↦ −z̄ and the antiderivative is odd
    for y in [0.1, 0.3, 1.0, 2.5] {
        let v = ruelle_fe_rhs(c(0.0, y), 1, 2).unwrap();
        assert!(v.im.abs() <= 1e-12 * v.norm() && v.re > 0.0, "{y}: {v}");
    }
}

fn away_from_poles(z: Complex64) -> bool {
    // endpoint z − 1/2 must stay clear of the half-integers
    let x = z - 0.5;
    let p = (x.re - 0.5).round() + 0.5;
    (x - c(p, 0.0)).norm() > 0.01
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eta_is_independent_of_the_detour_side(x in 1.05f64..6.0, dim in 1usize..4) {
        let s = c(x, 0.0);
        prop_assume!(away_from_poles(s));
        let p = eta(s, dim, 2, 1).unwrap();
        let m = eta(s, dim, 2, -1).unwrap();
        prop_assert!((p - m).norm() <= 1e-8 * p.norm().max(1.0), "{s}: {p} {m}");
    }

    #[test]
    fn eta_reflection(re in -3.0f64..4.0, im in -3.0f64..3.0, side in prop_oneof![Just(1i8), Just(-1i8)]) {
        let s = c(re, im);
        prop_assume!(away_from_poles(s) && away_from_poles(c(1.0, 0.0) - s));
        let v = eta(s, 1, 2, side).unwrap() * eta(c(1.0, 0.0) - s, 1, 2, side).unwrap();
        prop_assert!((v - 1.0).norm() <= 1e-9, "{s}: {v}");
    }

    #[test]
    fn catalog_orders(dim in 1usize..5, genus in 2u32..6, kmax in 0u32..6,
                      mus in prop::collection::vec((-2.0f64..2.0, -1.0f64..1.0, 1u32..4), 0..5)) {
        let table = SpectralTable::new(mus.iter().map(|&(a, b, m)| (c(a, b), m)).collect()).unwrap();
        let cat = singularity_catalog(&table, dim, genus, kmax).unwrap();
        let (order0, _) = zero_order_prediction(dim, genus).unwrap();
        prop_assert!(cat.entries.iter().all(|e| e.order > 0));
        let at0 = cat.entries.iter().find(|e| e.location.norm() <= 1e-12).unwrap();
        if at0.source == SingularitySource::TrivialLadder {
            prop_assert_eq!(at0.order, order0);
        }
        for k in 0..=kmax {
            let e = cat.entries.iter().find(|e| (e.location - c(-(k as f64), 0.0)).norm() <= 1e-12).unwrap();
            prop_assert!(e.order >= dim as u32 * (2 * genus - 2) * (1 + 2 * k));
        }
        prop_assert!(cat.entries.windows(2).all(|w| (w[0].location.re, w[0].location.im) <= (w[1].location.re, w[1].location.im)));
    }
}
