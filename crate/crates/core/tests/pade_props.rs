mod common;

use common::{c, complex_in, random_series, rng, RandomRational};
use pade_universal::exact;
use pade_universal::pade::{
    hankel_determinant, order_condition_residual, pade_approximant, pade_approximant_via, quotient_series,
    rational_derivative, rational_membership, Membership, PadeRoute,
};
use pade_universal::series::{taylor_partial_sum, Complex, FormalPowerSeries, Polynomial, ToleranceConfig};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn membership_matches_classification_exactly() {
    let mut r = rng(11);
    for _ in 0..15 {
        let p0 = r.random_range(0..=3);
        let q0 = r.random_range(0..=3);
        let f = RandomRational::generate(&mut r, p0, q0);
        let a = f.exact_coefficients(p0 + q0 + 6);
        let (fa, fb) = f.float_parts();
        for p in 0..=p0 + 2 {
            for q in 0..=q0 + 2 {
                let want = rational_membership(&fa, &fb, p0, q0, p, q, f.zeta.to_complex(), &tol()).unwrap();
                let exists = !exact::hankel_determinant(&a, p, q).unwrap().is_zero();
                match want {
                    Membership::Member => assert!(exists, "({p0},{q0}) cell ({p},{q})"),
                    Membership::NonMember => assert!(!exists, "({p0},{q0}) cell ({p},{q})"),
                    Membership::Undetermined => {}
                }
            }
        }
    }
}

#[test]
fn membership_matches_classification_in_floats() {
    let mut r = rng(12);
    let tol = tol().with_det(1e-9).unwrap();
    for _ in 0..15 {
        let p0 = r.random_range(0..=4);
        let q0 = r.random_range(0..=4);
        let f = RandomRational::generate(&mut r, p0, q0);
        let series = f.series(p0 + q0 + 6);
        let (fa, fb) = f.float_parts();
        for p in 0..=p0 + 2 {
            for q in 0..=q0 + 2 {
                let want = rational_membership(&fa, &fb, p0, q0, p, q, series.center(), &tol).unwrap();
                let h = hankel_determinant(&series, p, q, &tol).unwrap();
                match want {
                    Membership::Member => assert!(h.nonvanishing, "({p0},{q0}) cell ({p},{q}): {h:?}"),
                    Membership::NonMember => assert!(!h.nonvanishing, "({p0},{q0}) cell ({p},{q}): {h:?}"),
                    Membership::Undetermined => {}
                }
            }
        }
    }
}

#[test]
fn member_cells_reproduce_the_function() {
    let mut r = rng(13);
    for _ in 0..10 {
        let p0 = r.random_range(0..=3);
        let q0 = r.random_range(1..=3);
        let f = RandomRational::generate(&mut r, p0, q0);
        let series = f.series(p0 + q0 + 6);
        for (p, q) in [(p0, q0), (p0 + 2, q0), (p0, q0 + 2)] {
            let approx = pade_approximant(&series, p, q, &tol()).unwrap();
            for _ in 0..20 {
                let z = series.center() + complex_in(&mut r, 0.8);
                let err = (approx.eval(z, &tol()).unwrap() - f.eval(z)).norm();
                assert!(err <= 1e-9, "({p},{q}) at {z}: {err:.3e}");
            }
        }
    }
}

#[test]
fn exact_and_float_approximants_agree() {
    let mut r = rng(14);
    for _ in 0..10 {
        let f = RandomRational::generate(&mut r, 2, 2);
        let a = f.exact_coefficients(8);
        let (ea, eb) = exact::pade_approximant(&a, &f.zeta, 2, 2).unwrap().unwrap();
        let approx = pade_approximant(&f.series(8), 2, 2, &tol()).unwrap();
        let ea = ea.to_polynomial().unwrap();
        let eb = eb.to_polynomial().unwrap();
        for k in 0..=2 {
            assert!((ea.coeff(k) - approx.numerator().coeff(k)).norm() < 1e-10);
            assert!((eb.coeff(k) - approx.denominator().coeff(k)).norm() < 1e-10);
        }
    }
}

#[test]
fn classify_rejects_wrong_degrees() {
    let a = Polynomial::new(c(0.0, 0.0), vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let b = Polynomial::new(c(0.0, 0.0), vec![c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
    assert!(rational_membership(&a, &b, 2, 1, 3, 1, c(0.0, 0.0), &tol()).is_err());
    // Pole at the center.
    assert!(rational_membership(&a, &b, 1, 1, 1, 1, c(2.0, 0.0), &tol()).is_err());
}

#[test]
fn order_condition_on_classical_series() {
    let series = [
        FormalPowerSeries::exponential(13).unwrap(),
        FormalPowerSeries::log1p(13).unwrap(),
        FormalPowerSeries::geometric(13).unwrap(),
    ];
    for f in &series {
        let mut built = 0;
        for p in 0..=12 {
            for q in 0..=12 - p {
                if let Ok(r) = pade_approximant(f, p, q, &tol()) {
                    built += 1;
                    let res = order_condition_residual(f, &r, &tol()).unwrap();
                    assert!(res <= 1e-8 * f.max_abs(), "({p},{q}): {res:.3e}");
                }
            }
        }
        assert!(built > 12);
    }
}

/// Largest Taylor coefficient of `1/B` through order `n`. A denominator root
/// close to the center makes it large and amplifies rounding in `A/B`.
fn inverse_growth(b: &Polynomial, n: usize) -> f64 {
    let one = Polynomial::constant(b.center(), c(1.0, 0.0));
    quotient_series(&one, b, b.center(), n + 1).unwrap().max_abs()
}

#[test]
fn order_condition_on_random_series() {
    let mut r = rng(15);
    let mut checked = 0;
    for _ in 0..20 {
        let f = random_series(&mut r, 13, 2.0);
        for p in 0..=12 {
            for q in 0..=12 - p {
                if let Ok(a) = pade_approximant(&f, p, q, &tol()) {
                    if inverse_growth(a.denominator(), p + q) > 1e3 {
                        continue;
                    }
                    checked += 1;
                    let res = order_condition_residual(&f, &a, &tol()).unwrap();
                    assert!(res <= 1e-8 * f.max_abs(), "({p},{q}): {res:.3e}");
                }
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn exponential_one_one() {
    let f = FormalPowerSeries::exponential(3).unwrap();
    let r = pade_approximant(&f, 1, 1, &tol()).unwrap();
    // a2 + a1 b1 = 0 gives b1 = -1/2, and A = (aB) truncated = 1 + z/2.
    let b1 = -f.coeff(2).unwrap() / f.coeff(1).unwrap();
    let a1 = f.coeff(1).unwrap() + b1 * f.coeff(0).unwrap();
    assert!((r.denominator().coeff(1) - b1).norm() < 1e-12);
    assert!((r.numerator().coeff(1) - a1).norm() < 1e-12);
    assert!((r.numerator().coeff(1) - c(0.5, 0.0)).norm() < 1e-12);
    assert!((r.denominator().coeff(1) - c(-0.5, 0.0)).norm() < 1e-12);
}

#[test]
fn jacobi_and_toeplitz_routes_agree() {
    let f = random_series(&mut rng(16), 12, 2.0);
    for (p, q) in [(2, 3), (4, 4), (5, 6)] {
        let j = pade_approximant_via(&f, p, q, &tol(), PadeRoute::Jacobi).unwrap();
        let t = pade_approximant_via(&f, p, q, &tol(), PadeRoute::Toeplitz).unwrap();
        for k in 0..=q {
            assert!((j.denominator().coeff(k) - t.denominator().coeff(k)).norm() < 1e-9);
        }
    }
}

#[test]
fn missing_approximant_reports_the_cell() {
    let f = FormalPowerSeries::geometric(8).unwrap();
    assert!(pade_approximant(&f, 1, 2, &tol()).is_err());
    assert!(pade_approximant(&f, 0, 1, &tol()).is_ok());
}

fn complex() -> impl Strategy<Value = Complex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zero_denominator_degree_is_the_partial_sum(coeffs in prop::collection::vec(complex(), 11), p in 0usize..=10) {
        let f = FormalPowerSeries::new(c(0.0, 0.0), coeffs).unwrap();
        let r = pade_approximant(&f, p, 0, &tol()).unwrap();
        let s = taylor_partial_sum(&f, p).unwrap();
        prop_assert_eq!(r.denominator().coeffs(), &[c(1.0, 0.0)][..]);
        prop_assert_eq!(&r.numerator().coeffs()[..=p], &s.coeffs()[..=p]);
    }

    #[test]
    fn denominator_is_normalized(coeffs in prop::collection::vec(complex(), 9), p in 0usize..=4, q in 1usize..=4, re in -0.5f64..0.5) {
        let f = FormalPowerSeries::new(c(re, 0.0), coeffs).unwrap();
        if let Ok(r) = pade_approximant(&f, p, q, &tol()) {
            prop_assert!((r.denominator().eval(f.center()) - c(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(seed in 0u64..1000) {
        let mut r = rng(seed);
        let f = RandomRational::generate(&mut r, 2, 2);
        let approx = pade_approximant(&f.series(6), 2, 2, &tol()).unwrap();
        let d1 = rational_derivative(&approx, 1, &tol()).unwrap();
        let z = complex_in(&mut r, 0.5);
        let h = 1e-5;
        let fd = (approx.eval(z + h, &tol()).unwrap() - approx.eval(z - h, &tol()).unwrap()) / (2.0 * h);
        let exact = d1.eval(z).unwrap();
        prop_assert!((fd - exact).norm() <= 1e-5 * (1.0 + exact.norm()), "{} vs {}", fd, exact);
    }

    #[test]
    fn hankel_is_continuous(coeffs in prop::collection::vec(complex(), 11), p in 0usize..=5, q in 1usize..=5, seed in 0u64..1000) {
        let f = FormalPowerSeries::new(c(0.0, 0.0), coeffs.clone()).unwrap();
        let mut r = rng(seed);
        let moved: Vec<Complex> = coeffs.iter().map(|a| a + complex_in(&mut r, 1e-8)).collect();
        let g = FormalPowerSeries::new(c(0.0, 0.0), moved).unwrap();
        let d0 = hankel_determinant(&f, p, q, &tol()).unwrap().value.norm();
        let d1 = hankel_determinant(&g, p, q, &tol()).unwrap().value.norm();
        prop_assert!((d0 - d1).abs() <= 1e-3, "{} vs {}", d0, d1);
    }
}
