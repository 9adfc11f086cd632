//! Padé approximants: existence through the Hankel determinant, construction
//! through the Jacobi determinant formulas (or a Toeplitz solve for large
//! denominators), order-condition checks and derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::series::{taylor_partial_sum, Complex, Degree, FormalPowerSeries, Polynomial, ToleranceConfig};

/// Largest denominator degree built from the Jacobi determinants by default.
pub const JACOBI_MAX_Q: usize = 6;

/// Largest derivative order supported by [`rational_derivative`].
pub const MAX_DERIVATIVE_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadeRoute {
    /// Jacobi determinants for `q <= JACOBI_MAX_Q`, Toeplitz solve above.
    Auto,
    Jacobi,
    Toeplitz,
}

/// Outcome of the existence test for `[f; p/q]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelReport {
    pub p: usize,
    pub q: usize,
    pub center: Complex,
    pub value: Complex,
    /// Absolute threshold the determinant was compared against.
    pub threshold: f64,
    pub nonvanishing: bool,
}

/// `A / B` with `B(center) = 1`, `deg A <= p`, `deg B <= q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct RationalFunction {
    p: usize,
    q: usize,
    numerator: Polynomial,
    denominator: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    p: usize,
    q: usize,
    center: Complex,
    #[serde(rename = "A")]
    a: Vec<Complex>,
    #[serde(rename = "B")]
    b: Vec<Complex>,
}

impl From<RationalFunction> for RationalRepr {
    fn from(r: RationalFunction) -> Self {
        RationalRepr {
            p: r.p,
            q: r.q,
            center: r.center(),
            a: r.numerator.coeffs().to_vec(),
            b: r.denominator.coeffs().to_vec(),
        }
    }
}

impl TryFrom<RationalRepr> for RationalFunction {
    type Error = Error;

    fn try_from(r: RationalRepr) -> Result<Self> {
        let numerator = Polynomial::new(r.center, r.a)?;
        let denominator = Polynomial::new(r.center, r.b)?;
        RationalFunction::new(numerator, denominator, r.p, r.q)
    }
}

impl RationalFunction {
    /// Normalizes `B` so that `B(center) = 1`. Both polynomials are
    /// expressed about the numerator's center.
    pub fn new(numerator: Polynomial, denominator: Polynomial, p: usize, q: usize) -> Result<Self> {
        let center = numerator.center();
        let denominator = denominator.recenter(center);
        if numerator.degree(0.0) > Degree::Finite(p) || denominator.degree(0.0) > Degree::Finite(q) {
            return Err(Error::DegreeMismatch {
                stated_p: p,
                stated_q: q,
                actual_p: numerator.degree(0.0).finite(),
                actual_q: denominator.degree(0.0).finite(),
            });
        }
        let b0 = denominator.coeff(0);
        if b0.norm() == 0.0 {
            return Err(Error::DegenerateDenominator(0.0));
        }
        let inv = b0.inv();
        Ok(Self {
            p,
            q,
            numerator: numerator.scale(inv),
            denominator: denominator.scale(inv),
        })
    }

    /// A polynomial viewed as `[P; p/0]`.
    pub fn from_polynomial(poly: Polynomial, p: usize) -> Result<Self> {
        let center = poly.center();
        Self::new(poly, Polynomial::constant(center, Complex::new(1.0, 0.0)), p, 0)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn center(&self) -> Complex {
        self.numerator.center()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn eval(&self, z: Complex, tol: &ToleranceConfig) -> Result<Complex> {
        let b = self.denominator.eval(z);
        if b.norm() <= tol.zero {
            return Err(Error::PoleProximity {
                z,
                denominator: b.norm(),
            });
        }
        Ok(self.numerator.eval(z) / b)
    }

    /// First `len` Taylor coefficients of `A/B` at the center.
    pub fn taylor_coefficients(&self, len: usize) -> Vec<Complex> {
        quotient_coefficients(&self.numerator, &self.denominator, len)
    }

    /// Smallest relative size of `A` at the numerically computed roots of
    /// `B`. Values near zero indicate a common zero.
    pub fn common_zero_gap(&self) -> f64 {
        let scale = self.denominator.coeffs().iter().map(|b| b.norm()).fold(0.0, f64::max);
        let b = self.denominator.trimmed(scale * 1e-14);
        let center = self.center();
        linalg::polynomial_roots(b.coeffs())
            .into_iter()
            .map(|w| {
                let root = center + w;
                let bound = self.numerator.majorant(w.norm());
                if bound == 0.0 {
                    0.0
                } else {
                    self.numerator.eval(root).norm() / bound
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Taylor coefficients of `a / b` about `a`'s center via the convolution
/// recurrence. `b(center)` must be nonzero.
pub(crate) fn quotient_coefficients(a: &Polynomial, b: &Polynomial, len: usize) -> Vec<Complex> {
    let b = b.recenter(a.center());
    let b0 = b.coeff(0);
    let mut out: Vec<Complex> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = a.coeff(k);
        for i in 1..=k.min(b.coeffs().len() - 1) {
            acc -= b.coeff(i) * out[k - i];
        }
        out.push(acc / b0);
    }
    out
}

/// Taylor series of `a / b` at `center` with `len` coefficients.
pub fn quotient_series(a: &Polynomial, b: &Polynomial, center: Complex, len: usize) -> Result<FormalPowerSeries> {
    let a = a.recenter(center);
    let b = b.recenter(center);
    if b.coeff(0).norm() == 0.0 {
        return Err(Error::DegenerateDenominator(0.0));
    }
    FormalPowerSeries::new(center, quotient_coefficients(&a, &b, len))
}

fn hankel_window_scale(f: &FormalPowerSeries, p: usize, q: usize) -> f64 {
    let lo = p as isize - q as isize + 1;
    let hi = (p + q) as isize - 1;
    (lo.max(0)..=hi)
        .map(|k| f.coeffs()[k as usize].norm())
        .fold(0.0, f64::max)
}

/// `D_{p,q}(f)`: determinant of the `q x q` matrix with entry `(i, j)` equal
/// to `a_{p-q+i+j-1}` (1-based), negative indices read as zero.
pub fn hankel_determinant(f: &FormalPowerSeries, p: usize, q: usize, tol: &ToleranceConfig) -> Result<HankelReport> {
    f.require(p + q + 1)?;
    if q == 0 {
        return Ok(HankelReport {
            p,
            q,
            center: f.center(),
            value: Complex::new(1.0, 0.0),
            threshold: 0.0,
            nonvanishing: true,
        });
    }
    let base = p as isize - q as isize + 1;
    let m = linalg::matrix(q, q, |i, j| f.coeff_signed(base + (i + j) as isize).unwrap_or_default());
    let value = linalg::determinant(m);
    let threshold = tol.det * hankel_window_scale(f, p, q).powi(q as i32);
    Ok(HankelReport {
        p,
        q,
        center: f.center(),
        value,
        threshold,
        nonvanishing: value.norm() > threshold,
    })
}

pub fn pade_approximant(f: &FormalPowerSeries, p: usize, q: usize, tol: &ToleranceConfig) -> Result<RationalFunction> {
    pade_approximant_via(f, p, q, tol, PadeRoute::Auto)
}

pub fn pade_approximant_via(
    f: &FormalPowerSeries,
    p: usize,
    q: usize,
    tol: &ToleranceConfig,
    route: PadeRoute,
) -> Result<RationalFunction> {
    let report = hankel_determinant(f, p, q, tol)?;
    if !report.nonvanishing {
        return Err(Error::PadeNotExist {
            p,
            q,
            center: f.center(),
            value: report.value,
            threshold: report.threshold,
        });
    }
    if q == 0 {
        let partial = taylor_partial_sum(f, p)?;
        let one = Polynomial::constant(f.center(), Complex::new(1.0, 0.0));
        return Ok(RationalFunction {
            p,
            q,
            numerator: partial,
            denominator: one,
        });
    }
    let (numerator, denominator) = match route {
        PadeRoute::Jacobi => jacobi(f, p, q)?,
        PadeRoute::Toeplitz => toeplitz(f, p, q)?,
        PadeRoute::Auto if q <= JACOBI_MAX_Q => jacobi(f, p, q)?,
        PadeRoute::Auto => toeplitz(f, p, q)?,
    };
    // The unnormalized denominator carries the scale of the coefficients,
    // so its constant term is judged relative to the others.
    let b0 = denominator.coeff(0);
    let size = denominator.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(b0.norm() > tol.zero * size) {
        return Err(Error::DegenerateDenominator(b0.norm()));
    }
    let inv = b0.inv();
    Ok(RationalFunction {
        p,
        q,
        numerator: numerator.scale(inv),
        denominator: denominator.scale(inv),
    })
}

/// Unnormalized Jacobi determinants, expanded along the first row. Row `i`
/// (1-based) of the coefficient block is `a_{p-q+i}, ..., a_{p+i}`.
fn jacobi(f: &FormalPowerSeries, p: usize, q: usize) -> Result<(Polynomial, Polynomial)> {
    let center = f.center();
    let base = p as isize - q as isize + 1;
    let block: Vec<Vec<Complex>> = (0..q)
        .map(|i| {
            (0..=q)
                .map(|j| f.coeff_signed(base + (i + j) as isize))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut numerator = Polynomial::zero(center);
    let mut denominator_coeffs = vec![Complex::default(); q + 1];
    for j in 0..=q {
        let minor = linalg::matrix(q, q, |r, c| block[r][if c < j { c } else { c + 1 }]);
        let signed = if j % 2 == 0 { 1.0 } else { -1.0 } * linalg::determinant(minor);
        denominator_coeffs[q - j] = signed;
        let k = p as isize - q as isize + j as isize;
        if k >= 0 && signed != Complex::default() {
            let partial = taylor_partial_sum(f, k as usize)?;
            numerator = numerator.add(&partial.shift_up(q - j).scale(signed));
        }
    }
    let mut numerator_coeffs = numerator.coeffs().to_vec();
    numerator_coeffs.resize(p + 1, Complex::default());
    numerator_coeffs.truncate(p + 1);
    Ok((
        Polynomial::from_parts(center, numerator_coeffs),
        Polynomial::from_parts(center, denominator_coeffs),
    ))
}

/// Denominator from `sum_{i=1..q} b_i a_{k-i} = -a_k`, `k = p+1..p+q`, then
/// numerator by truncated convolution.
fn toeplitz(f: &FormalPowerSeries, p: usize, q: usize) -> Result<(Polynomial, Polynomial)> {
    let center = f.center();
    let a = |k: isize| f.coeff_signed(k);
    let mut rhs = Vec::with_capacity(q);
    for r in 0..q {
        rhs.push(-a((p + 1 + r) as isize)?);
    }
    let m = linalg::matrix(q, q, |r, c| a(p as isize + r as isize - c as isize).unwrap_or_default());
    let tail = linalg::solve(m, rhs).ok_or(Error::DegenerateDenominator(0.0))?;
    let mut b = vec![Complex::new(1.0, 0.0)];
    b.extend(tail);
    let mut numerator = vec![Complex::default(); p + 1];
    for (k, slot) in numerator.iter_mut().enumerate() {
        for (i, bi) in b.iter().enumerate().take(k.min(q) + 1) {
            *slot += bi * f.coeff(k - i)?;
        }
    }
    Ok((
        Polynomial::from_parts(center, numerator),
        Polynomial::from_parts(center, b),
    ))
}

/// `max_{k <= p+q} |a_k - b_k|` where `b_k` are the Taylor coefficients of
/// `R` at the series' center.
pub fn order_condition_residual(f: &FormalPowerSeries, r: &RationalFunction, tol: &ToleranceConfig) -> Result<f64> {
    let n = r.p + r.q + 1;
    f.require(n)?;
    let numerator = r.numerator.recenter(f.center());
    let denominator = r.denominator.recenter(f.center());
    let b0 = denominator.coeff(0);
    if b0.norm() <= tol.zero {
        return Err(Error::DegenerateDenominator(b0.norm()));
    }
    let b = quotient_coefficients(&numerator, &denominator, n);
    Ok(f.coeffs()[..n]
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Evaluator for `(A/B)^{(l)} = N_l / B^{l+1}` with
/// `N_{k+1} = N_k' B - (k+1) N_k B'`.
#[derive(Debug, Clone)]
pub struct DerivativeEvaluator {
    numerator: Polynomial,
    denominator: Polynomial,
    order: usize,
    tol_zero: f64,
}

impl DerivativeEvaluator {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let b = self.denominator.eval(z);
        if b.norm() <= self.tol_zero {
            return Err(Error::PoleProximity {
                z,
                denominator: b.norm(),
            });
        }
        Ok(self.numerator.eval(z) / b.powu(self.order as u32 + 1))
    }
}

pub fn rational_derivative(r: &RationalFunction, l: usize, tol: &ToleranceConfig) -> Result<DerivativeEvaluator> {
    DerivativeEvaluator::for_quotient(&r.numerator, &r.denominator, l, tol.zero)
}

impl DerivativeEvaluator {
    /// `l`-th derivative of `numerator / denominator` for an arbitrary
    /// polynomial pair (no normalization required).
    pub fn for_quotient(numerator: &Polynomial, denominator: &Polynomial, l: usize, tol_zero: f64) -> Result<Self> {
        if l > MAX_DERIVATIVE_ORDER {
            return Err(Error::InvalidArgument(format!(
                "derivative order {l} exceeds {MAX_DERIVATIVE_ORDER}"
            )));
        }
        let b = denominator.recenter(numerator.center());
        let db = b.derivative(1);
        let mut n = numerator.clone();
        for k in 0..l {
            let scaled = n.mul(&db).scale(Complex::new(-((k + 1) as f64), 0.0));
            n = n.derivative(1).mul(&b).add(&scaled);
        }
        Ok(Self {
            numerator: n,
            denominator: b,
            order: l,
            tol_zero,
        })
    }
}

/// What the exact degrees of `f = A/B` predict about the cell `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    /// Cells with `p < p0` or `q < q0` off the two member rays.
    Undetermined,
}

/// Predicted membership of `a/b` (exact degrees `p0`, `q0`, coprime) in
/// `D_{p,q}(zeta)`.
#[allow(clippy::too_many_arguments)]
pub fn rational_membership(
    a: &Polynomial,
    b: &Polynomial,
    p0: usize,
    q0: usize,
    p: usize,
    q: usize,
    zeta: Complex,
    tol: &ToleranceConfig,
) -> Result<Membership> {
    let (da, db) = (a.degree(tol.zero), b.degree(tol.zero));
    if da != Degree::Finite(p0) || db != Degree::Finite(q0) {
        return Err(Error::DegreeMismatch {
            stated_p: p0,
            stated_q: q0,
            actual_p: da.finite(),
            actual_q: db.finite(),
        });
    }
    let b_at = b.eval(zeta).norm();
    if b_at <= tol.zero {
        return Err(Error::DegenerateDenominator(b_at));
    }
    Ok(if (q == q0 && p >= p0) || (p == p0 && q >= q0) {
        Membership::Member
    } else if p > p0 && q > q0 {
        Membership::NonMember
    } else {
        Membership::Undetermined
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::c;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn q_zero_is_always_nonvanishing() {
        let f = FormalPowerSeries::geometric(4).unwrap();
        let h = hankel_determinant(&f, 3, 0, &tol()).unwrap();
        assert_eq!(h.value, c(1.0, 0.0));
        assert!(h.nonvanishing);
    }

    #[test]
    fn geometric_one_two_vanishes() {
        let f = FormalPowerSeries::geometric(4).unwrap();
        let h = hankel_determinant(&f, 1, 2, &tol()).unwrap();
        assert_eq!(h.value.norm(), 0.0);
        assert!(!h.nonvanishing);
        assert!(matches!(
            pade_approximant(&f, 1, 2, &tol()),
            Err(Error::PadeNotExist { p: 1, q: 2, .. })
        ));
    }

    #[test]
    fn exponential_one_one_exists() {
        let f = FormalPowerSeries::exponential(3).unwrap();
        let h = hankel_determinant(&f, 1, 1, &tol()).unwrap();
        assert_eq!(h.value, c(1.0, 0.0));
        assert!(h.nonvanishing);
    }

    #[test]
    fn hankel_requires_truncation() {
        let f = FormalPowerSeries::exponential(4).unwrap();
        assert!(matches!(
            hankel_determinant(&f, 2, 2, &tol()),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn exp_one_one_classical() {
        // Oracle: a2 + a1 b1 = 0 gives b1 = -1/2; then A = a*B truncated.
        let f = FormalPowerSeries::exponential(3).unwrap();
        let r = pade_approximant(&f, 1, 1, &tol()).unwrap();
        let expect_a = [c(1.0, 0.0), c(0.5, 0.0)];
        let expect_b = [c(1.0, 0.0), c(-0.5, 0.0)];
        for k in 0..2 {
            assert!((r.numerator().coeff(k) - expect_a[k]).norm() < 1e-12);
            assert!((r.denominator().coeff(k) - expect_b[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn geometric_zero_one_is_exact() {
        let f = FormalPowerSeries::geometric(2).unwrap();
        let r = pade_approximant(&f, 0, 1, &tol()).unwrap();
        assert_eq!(r.numerator().coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(r.denominator().coeffs(), &[c(1.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn q_zero_echoes_partial_sum() {
        let f = FormalPowerSeries::log1p(6).unwrap();
        let r = pade_approximant(&f, 4, 0, &tol()).unwrap();
        assert_eq!(r.numerator(), &taylor_partial_sum(&f, 4).unwrap());
        assert_eq!(r.denominator().coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(order_condition_residual(&f, &r, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn exp_two_two_satisfies_order_condition() {
        let f = FormalPowerSeries::exponential(5).unwrap();
        let r = pade_approximant(&f, 2, 2, &tol()).unwrap();
        assert!(order_condition_residual(&f, &r, &tol()).unwrap() <= 1e-10);
        assert!((r.denominator().eval(f.center()) - c(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn perturbed_numerator_breaks_order_condition() {
        let f = FormalPowerSeries::exponential(5).unwrap();
        let r = pade_approximant(&f, 2, 2, &tol()).unwrap();
        let bumped = r.numerator().add(&Polynomial::constant(f.center(), c(0.1, 0.0)));
        let r2 = RationalFunction::new(bumped, r.denominator().clone(), 2, 2).unwrap();
        assert!(order_condition_residual(&f, &r2, &tol()).unwrap() >= 0.09);
    }

    #[test]
    fn routes_agree() {
        let f = FormalPowerSeries::log1p(12).unwrap();
        for (p, q) in [(3, 3), (4, 2), (2, 5), (5, 3)] {
            let j = pade_approximant_via(&f, p, q, &tol(), PadeRoute::Jacobi).unwrap();
            let t = pade_approximant_via(&f, p, q, &tol(), PadeRoute::Toeplitz).unwrap();
            for k in 0..=p {
                assert!((j.numerator().coeff(k) - t.numerator().coeff(k)).norm() < 1e-8);
            }
            for k in 0..=q {
                assert!((j.denominator().coeff(k) - t.denominator().coeff(k)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn derivative_of_geometric_at_origin() {
        let f = FormalPowerSeries::geometric(2).unwrap();
        let r = pade_approximant(&f, 0, 1, &tol()).unwrap();
        let d1 = rational_derivative(&r, 1, &tol()).unwrap();
        assert!((d1.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let d0 = rational_derivative(&r, 0, &tol()).unwrap();
        assert!(matches!(d0.eval(c(1.0, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(rational_derivative(&r, 11, &tol()).is_err());
    }

    #[test]
    fn exp_one_one_at_origin_is_one() {
        let f = FormalPowerSeries::exponential(3).unwrap();
        let r = pade_approximant(&f, 1, 1, &tol()).unwrap();
        let d0 = rational_derivative(&r, 0, &tol()).unwrap();
        assert_eq!(d0.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn classify_geometric() {
        let one = Polynomial::constant(c(0.0, 0.0), c(1.0, 0.0));
        let b = Polynomial::new(c(0.0, 0.0), vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let z0 = c(0.0, 0.0);
        let t = tol();
        assert_eq!(
            rational_membership(&one, &b, 0, 1, 3, 1, z0, &t).unwrap(),
            Membership::Member
        );
        assert_eq!(
            rational_membership(&one, &b, 0, 1, 1, 2, z0, &t).unwrap(),
            Membership::NonMember
        );
        assert_eq!(
            rational_membership(&one, &b, 0, 1, 0, 3, z0, &t).unwrap(),
            Membership::Member
        );
        assert_eq!(
            rational_membership(&one, &b, 0, 1, 2, 0, z0, &t).unwrap(),
            Membership::Undetermined
        );
        assert!(matches!(
            rational_membership(&one, &b, 1, 1, 0, 0, z0, &t),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            rational_membership(&one, &b, 0, 1, 0, 0, c(1.0, 0.0), &t),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn coprime_gap_detects_common_root() {
        let z0 = c(0.0, 0.0);
        // (1 - z) / ((1 - z)(1 + z/2)) shares the root 1.
        let a = Polynomial::new(z0, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let b = Polynomial::new(z0, vec![c(1.0, 0.0), c(-0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        let shared = RationalFunction::new(a.clone(), b, 1, 2).unwrap();
        assert!(shared.common_zero_gap() < 1e-12);
        let b2 = Polynomial::new(z0, vec![c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        let coprime = RationalFunction::new(a, b2, 1, 1).unwrap();
        assert!(coprime.common_zero_gap() > 0.1);
    }

    #[test]
    fn rational_json_shape() {
        let f = FormalPowerSeries::exponential(3).unwrap();
        let r = pade_approximant(&f, 1, 1, &tol()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["p"], 1);
        assert_eq!(v["A"][1], serde_json::json!([0.5, 0.0]));
        let back: RationalFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
