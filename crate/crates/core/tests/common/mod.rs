//! Generators shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use pade_universal::exact::{quotient_series, ExactPolynomial, GaussianRational};
use pade_universal::series::{Complex, FormalPowerSeries, Polynomial};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn complex_in<R: Rng>(rng: &mut R, bound: f64) -> Complex {
    loop {
        let z = c(rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
        if z.norm() <= bound {
            return z;
        }
    }
}

pub fn random_series<R: Rng>(rng: &mut R, len: usize, bound: f64) -> FormalPowerSeries {
    let coeffs = (0..len).map(|_| complex_in(rng, bound)).collect();
    FormalPowerSeries::new(c(0.0, 0.0), coeffs).unwrap()
}

pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize, center: Complex) -> Polynomial {
    let mut coeffs: Vec<Complex> = (0..=degree).map(|_| complex_in(rng, 1.0)).collect();
    if coeffs[degree].norm() < 0.1 {
        coeffs[degree] = c(1.0, 0.0);
    }
    Polynomial::new(center, coeffs).unwrap()
}

/// Gaussian rational with real and imaginary parts `n / den`, `|n| <= span`.
pub fn gaussian<R: Rng>(rng: &mut R, span: i64, den: i64) -> GaussianRational {
    GaussianRational::from_ints(rng.random_range(-span..=span), rng.random_range(-span..=span), den)
}

/// A coprime rational function `A/B` with exact degrees `(p0, q0)` and a
/// center `zeta` away from the poles.
pub struct RandomRational {
    pub a: ExactPolynomial,
    pub b: ExactPolynomial,
    pub p0: usize,
    pub q0: usize,
    pub zeta: GaussianRational,
}

impl RandomRational {
    /// Poles are on `1.5 <= |z| <= 3`, zeros anywhere else and at least 0.25
    /// from every pole, and `|zeta| <= 0.25`. Coprimality holds because the
    /// root sets are disjoint.
    pub fn generate<R: Rng>(rng: &mut R, p0: usize, q0: usize) -> Self {
        let zero = GaussianRational::zero();
        let mut poles: Vec<GaussianRational> = Vec::new();
        while poles.len() < q0 {
            let r = gaussian(rng, 12, 4);
            let m = r.to_complex().norm();
            if (1.5..=3.0).contains(&m) && poles.iter().all(|s| (s.to_complex() - r.to_complex()).norm() >= 0.25) {
                poles.push(r);
            }
        }
        let mut zeros: Vec<GaussianRational> = Vec::new();
        while zeros.len() < p0 {
            let r = gaussian(rng, 12, 4);
            if poles.iter().all(|s| (s.to_complex() - r.to_complex()).norm() >= 0.25) {
                zeros.push(r);
            }
        }
        let lead_a = loop {
            let g = gaussian(rng, 4, 2);
            if !g.is_zero() {
                break g;
            }
        };
        let a = ExactPolynomial::from_roots(zero.clone(), lead_a, &zeros);
        let b = ExactPolynomial::from_roots(zero, GaussianRational::one(), &poles);
        let zeta = gaussian(rng, 1, 4);
        RandomRational { a, b, p0, q0, zeta }
    }

    pub fn exact_coefficients(&self, len: usize) -> Vec<GaussianRational> {
        quotient_series(&self.a, &self.b, &self.zeta, len).unwrap()
    }

    pub fn series(&self, len: usize) -> FormalPowerSeries {
        let coeffs = self
            .exact_coefficients(len)
            .iter()
            .map(GaussianRational::to_complex)
            .collect();
        FormalPowerSeries::new(self.zeta.to_complex(), coeffs).unwrap()
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let a = self.a.to_polynomial().unwrap();
        let b = self.b.to_polynomial().unwrap();
        a.eval(z) / b.eval(z)
    }

    pub fn float_parts(&self) -> (Polynomial, Polynomial) {
        (self.a.to_polynomial().unwrap(), self.b.to_polynomial().unwrap())
    }
}
