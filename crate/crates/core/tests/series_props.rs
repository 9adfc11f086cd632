mod common;

use common::c;
use pade_universal::series::{
    poly_derivative, poly_eval, recenter_polynomial, rho_c, rho_d, taylor_partial_sum, Complex, Degree,
    FormalPowerSeries, Polynomial,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
}

/// Points of the closed unit disk.
fn in_disk() -> impl Strategy<Value = Complex> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(complex(), 1..=max_degree + 1)
        .prop_map(|coeffs| Polynomial::new(c(0.0, 0.0), coeffs).unwrap())
}

/// Coefficients drawn from a small alphabet so that prefixes often agree.
fn digits(len: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec(0u8..3, len).prop_map(|v| v.into_iter().map(|d| c(d as f64, 0.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn partial_sum_copies_the_prefix(coeffs in prop::collection::vec(complex(), 1..24), n in 0usize..24) {
        let f = FormalPowerSeries::new(c(0.3, -0.2), coeffs.clone()).unwrap();
        match taylor_partial_sum(&f, n) {
            Ok(s) => {
                prop_assert!(n < coeffs.len());
                prop_assert_eq!(s.center(), f.center());
                prop_assert!(matches!(s.degree(0.0), Degree::Finite(d) if d <= n) || s.degree(0.0) == Degree::NegInfinity);
                prop_assert_eq!(&s.coeffs()[..=n], &coeffs[..=n]);
            }
            Err(_) => prop_assert!(n >= coeffs.len()),
        }
    }

    #[test]
    // New centers stay in the disk of radius 1/2: rounding in the shifted
    // basis grows like sum |a_k| (2|target| + 1)^k.
    fn recentering_preserves_values(p in polynomial(20), target in in_disk(), zs in prop::collection::vec(in_disk(), 10)) {
        let target = target * 0.5;
        let moved = recenter_polynomial(&p, target);
        prop_assert_eq!(moved.center(), target);
        // Sup over the disk is attained on the circle.
        let sup = (0..512)
            .map(|k| p.eval(Complex::from_polar(1.0, k as f64 * std::f64::consts::TAU / 512.0)).norm())
            .fold(0.0, f64::max);
        for &z in &zs {
            let err = (p.eval(z) - moved.eval(z)).norm();
            prop_assert!(err <= 1e-10 * (1.0 + sup), "error {err:.3e}, sup {sup:.3e}, z {z}, target {target}");
        }
    }

    #[test]
    fn derivative_matches_central_differences(p in polynomial(8), zs in prop::collection::vec(complex(), 10)) {
        let dp = poly_derivative(&p, 1);
        let h = 1e-5;
        for &z in &zs {
            let fd = (poly_eval(&p, z + h) - poly_eval(&p, z - h)) / (2.0 * h);
            let exact = poly_eval(&dp, z);
            prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "{fd} vs {exact}");
        }
    }

    #[test]
    fn cartesian_metric_is_dominated(a in digits(12), b in digits(12)) {
        let rc = rho_c(&a, &b).unwrap();
        let rd = rho_d(&a, &b, 1e-24).unwrap();
        prop_assert!(rc <= 2.0 * rd);
    }

    #[test]
    fn discrete_metric_is_ultrametric(a in digits(10), b in digits(10), d in digits(10)) {
        let ab = rho_d(&a, &b, 1e-24).unwrap();
        let bd = rho_d(&b, &d, 1e-24).unwrap();
        let ad = rho_d(&a, &d, 1e-24).unwrap();
        prop_assert!(ad <= ab.max(bd));
    }
}

#[test]
fn partial_sum_examples() {
    let g = FormalPowerSeries::geometric(5).unwrap();
    assert_eq!(taylor_partial_sum(&g, 2).unwrap().coeffs(), &[c(1.0, 0.0); 3]);
    let e = FormalPowerSeries::exponential(6).unwrap();
    let s = taylor_partial_sum(&e, 3).unwrap();
    let factorials = [1.0, 1.0, 2.0, 6.0];
    for (k, f) in factorials.iter().enumerate() {
        assert!((s.coeff(k) - c(1.0 / f, 0.0)).norm() < 1e-15);
    }
    assert!(taylor_partial_sum(&g, 5).is_err());
}

#[test]
fn recenter_examples() {
    let z2 = Polynomial::monomial(c(0.0, 0.0), 2, c(1.0, 0.0));
    let moved = recenter_polynomial(&z2, c(1.0, 0.0));
    assert_eq!(moved.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    let same = recenter_polynomial(&moved, c(1.0, 0.0));
    assert_eq!(same, moved);
}

#[test]
fn evaluation_examples() {
    let p = Polynomial::new(c(0.0, 0.0), vec![c(1.0, 0.0); 3]).unwrap();
    assert_eq!(poly_eval(&p, c(1.0, 0.0)), c(3.0, 0.0));
    let z3 = Polynomial::monomial(c(0.0, 0.0), 3, c(1.0, 0.0));
    assert_eq!(poly_derivative(&z3, 2).coeffs(), &[c(0.0, 0.0), c(6.0, 0.0)]);
}

#[test]
fn metric_examples() {
    let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
    assert_eq!(rho_c(&a, &a).unwrap(), 0.0);
    assert_eq!(rho_d(&a, &a, 1e-24).unwrap(), 0.0);
    let mut b = a.clone();
    b[3] = c(5.0, 0.0);
    assert_eq!(rho_d(&a, &b, 1e-24).unwrap(), 0.125);
    assert!(rho_c(&a, &b[..3]).is_err());
}
