//! Truncated complex power series, dense polynomials, and the two
//! coefficient-sequence metrics.
//!
//! Every series carries its truncation length explicitly. Asking for a
//! coefficient past the truncation is an error, never an implicit zero.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The scalar field. Serializes as `[re, im]`.
pub type Complex = Complex64;

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn ensure_finite(values: &[Complex], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Numerical thresholds shared by the whole crate.
///
/// `zero` decides when a coefficient or denominator value is negligible,
/// `det` is the relative Hankel threshold (the absolute threshold is
/// `det * scale^q`, with `scale` the largest coefficient modulus in the
/// Hankel window) and `residual` is the accepted order-condition residual
/// relative to the largest coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ToleranceRepr")]
pub struct ToleranceConfig {
    pub zero: f64,
    pub det: f64,
    pub residual: f64,
}

#[derive(Deserialize)]
struct ToleranceRepr {
    zero: f64,
    det: f64,
    residual: f64,
}

impl TryFrom<ToleranceRepr> for ToleranceConfig {
    type Error = Error;

    fn try_from(r: ToleranceRepr) -> Result<Self> {
        ToleranceConfig::new(r.zero, r.det, r.residual)
    }
}

impl ToleranceConfig {
    pub fn new(zero: f64, det: f64, residual: f64) -> Result<Self> {
        let all_positive = [zero, det, residual].iter().all(|t| t.is_finite() && *t > 0.0);
        if !all_positive {
            return Err(Error::InvalidArgument(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if zero > det {
            return Err(Error::InvalidArgument(format!(
                "zero tolerance {zero:e} exceeds determinant tolerance {det:e}"
            )));
        }
        Ok(Self { zero, det, residual })
    }

    pub fn with_det(self, det: f64) -> Result<Self> {
        Self::new(self.zero, det, self.residual)
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        // `zero` is far below f64 epsilon: the perturbation monomial of the
        // builders routinely carries leading coefficients around 1e-14 and
        // must still count toward the degree.
        Self {
            zero: 1e-24,
            det: 1e-10,
            residual: 1e-8,
        }
    }
}

/// Polynomial degree, with an explicit sentinel for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A truncated formal power series `sum a_k (z - center)^k`, `k < len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr")]
pub struct FormalPowerSeries {
    center: Complex,
    coeffs: Vec<Complex>,
}

#[derive(Deserialize)]
struct SeriesRepr {
    center: Complex,
    coeffs: Vec<Complex>,
}

impl TryFrom<SeriesRepr> for FormalPowerSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        FormalPowerSeries::new(r.center, r.coeffs)
    }
}

impl FormalPowerSeries {
    pub fn new(center: Complex, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        ensure_finite(&[center], "series center")?;
        ensure_finite(&coeffs, "series coefficients")?;
        Ok(Self { center, coeffs })
    }

    pub fn from_real(center: Complex, coeffs: &[f64]) -> Result<Self> {
        Self::new(center, coeffs.iter().map(|&a| c(a, 0.0)).collect())
    }

    /// `sum z^k`, the expansion of `1/(1 - z)` at the origin.
    pub fn geometric(len: usize) -> Result<Self> {
        Self::from_real(Complex::default(), &vec![1.0; len])
    }

    /// `sum z^k / k!`.
    pub fn exponential(len: usize) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(len);
        let mut a = 1.0;
        for k in 0..len {
            if k > 0 {
                a /= k as f64;
            }
            coeffs.push(a);
        }
        Self::from_real(Complex::default(), &coeffs)
    }

    /// `log(1 + z) = sum_{k >= 1} (-1)^(k+1) z^k / k`.
    pub fn log1p(len: usize) -> Result<Self> {
        let coeffs: Vec<f64> = (0..len)
            .map(|k| match k {
                0 => 0.0,
                k if k % 2 == 1 => 1.0 / k as f64,
                k => -1.0 / k as f64,
            })
            .collect();
        Self::from_real(Complex::default(), &coeffs)
    }

    pub fn center(&self) -> Complex {
        self.center
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Number of stored coefficients (the truncation length).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Result<Complex> {
        self.coeffs.get(k).copied().ok_or(Error::TruncationExceeded {
            needed: k,
            available: self.coeffs.len(),
        })
    }

    /// Hankel convention: negative indices read as zero, indices past the
    /// truncation are an error.
    pub fn coeff_signed(&self, k: isize) -> Result<Complex> {
        if k < 0 {
            Ok(Complex::default())
        } else {
            self.coeff(k as usize)
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn require(&self, len: usize) -> Result<()> {
        if self.coeffs.len() < len {
            Err(Error::TruncationExceeded {
                needed: len - 1,
                available: self.coeffs.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Dense polynomial in powers of `(z - center)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr")]
pub struct Polynomial {
    center: Complex,
    coeffs: Vec<Complex>,
}

impl TryFrom<SeriesRepr> for Polynomial {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        Polynomial::new(r.center, r.coeffs)
    }
}

impl Polynomial {
    pub fn new(center: Complex, coeffs: Vec<Complex>) -> Result<Self> {
        ensure_finite(&[center], "polynomial center")?;
        ensure_finite(&coeffs, "polynomial coefficients")?;
        let coeffs = if coeffs.is_empty() {
            vec![Complex::default()]
        } else {
            coeffs
        };
        Ok(Self { center, coeffs })
    }

    pub(crate) fn from_parts(center: Complex, coeffs: Vec<Complex>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { center, coeffs }
    }

    pub fn zero(center: Complex) -> Self {
        Self::from_parts(center, vec![Complex::default()])
    }

    pub fn constant(center: Complex, value: Complex) -> Self {
        Self::from_parts(center, vec![value])
    }

    /// `coeff * (z - center)^k`.
    pub fn monomial(center: Complex, k: usize, coeff: Complex) -> Self {
        let mut coeffs = vec![Complex::default(); k + 1];
        coeffs[k] = coeff;
        Self::from_parts(center, coeffs)
    }

    pub fn center(&self) -> Complex {
        self.center
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self, tol_zero: f64) -> Degree {
        self.coeffs
            .iter()
            .rposition(|a| a.norm() > tol_zero)
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn leading_coeff(&self, tol_zero: f64) -> Complex {
        match self.degree(tol_zero) {
            Degree::NegInfinity => Complex::default(),
            Degree::Finite(d) => self.coeffs[d],
        }
    }

    /// Drops trailing coefficients with modulus `<= tol_zero`.
    pub fn trimmed(&self, tol_zero: f64) -> Polynomial {
        let keep = self.degree(tol_zero).finite().map_or(1, |d| d + 1);
        let mut coeffs = self.coeffs[..keep].to_vec();
        if self.degree(tol_zero) == Degree::NegInfinity {
            coeffs[0] = Complex::default();
        }
        Self::from_parts(self.center, coeffs)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let w = z - self.center;
        self.coeffs.iter().rev().fold(Complex::default(), |acc, &a| acc * w + a)
    }

    /// `l`-fold formal derivative.
    pub fn derivative(&self, l: usize) -> Polynomial {
        if l == 0 {
            return self.clone();
        }
        if l >= self.coeffs.len() {
            return Self::zero(self.center);
        }
        let coeffs = (l..self.coeffs.len())
            .map(|k| {
                let falling: f64 = ((k - l + 1)..=k).map(|i| i as f64).product();
                self.coeffs[k] * falling
            })
            .collect();
        Self::from_parts(self.center, coeffs)
    }

    /// Same polynomial expanded in powers of `(z - new_center)`, by repeated
    /// synthetic division (Taylor shift).
    pub fn recenter(&self, new_center: Complex) -> Polynomial {
        let shift = new_center - self.center;
        let mut a = self.coeffs.clone();
        if shift != Complex::default() {
            let n = a.len();
            for i in 0..n.saturating_sub(1) {
                for j in (i..n - 1).rev() {
                    let next = a[j + 1];
                    a[j] += shift * next;
                }
            }
        }
        Self::from_parts(new_center, a)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let other = if other.center == self.center {
            other.clone()
        } else {
            other.recenter(self.center)
        };
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_parts(self.center, coeffs)
    }

    pub fn scale(&self, s: Complex) -> Polynomial {
        Self::from_parts(self.center, self.coeffs.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let other = if other.center == self.center {
            other.clone()
        } else {
            other.recenter(self.center)
        };
        let mut coeffs = vec![Complex::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_parts(self.center, coeffs)
    }

    /// Multiplies by `(z - center)^k`.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        let mut coeffs = vec![Complex::default(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_parts(self.center, coeffs)
    }

    /// The Taylor series of the polynomial at its own center, with `len`
    /// coefficients. Entries past the stored coefficients are the true
    /// coefficients (zero) of the polynomial, not a truncation fill.
    pub fn taylor_series(&self, len: usize) -> FormalPowerSeries {
        let mut coeffs: Vec<Complex> = self.coeffs.iter().copied().take(len).collect();
        coeffs.resize(len.max(1), Complex::default());
        FormalPowerSeries {
            center: self.center,
            coeffs,
        }
    }

    /// Sum of `|c_k| r^k`, an upper bound of `|P|` on the disk of radius `r`
    /// about the center.
    pub fn majorant(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }
}

/// `S_N(f, center)`: the degree-`N` truncation of `f`.
pub fn taylor_partial_sum(f: &FormalPowerSeries, n: usize) -> Result<Polynomial> {
    f.require(n + 1)?;
    Ok(Polynomial::from_parts(f.center, f.coeffs[..=n].to_vec()))
}

pub fn recenter_polynomial(p: &Polynomial, new_center: Complex) -> Polynomial {
    p.recenter(new_center)
}

pub fn poly_eval(p: &Polynomial, z: Complex) -> Complex {
    p.eval(z)
}

pub fn poly_derivative(p: &Polynomial, l: usize) -> Polynomial {
    p.derivative(l)
}

fn check_lengths(a: &[Complex], b: &[Complex]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Cartesian metric on the finite prefix: `sum 2^-n |a_n - b_n| / (1 + |a_n - b_n|)`.
pub fn rho_c(a: &[Complex], b: &[Complex]) -> Result<f64> {
    check_lengths(a, b)?;
    let mut weight = 1.0;
    let mut total = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = (x - y).norm();
        total += weight * diff / (1.0 + diff);
        weight *= 0.5;
    }
    Ok(total)
}

/// `2^-n0` where `n0` is the first index at which the prefixes differ by
/// more than `tol_zero`, or 0 when they agree everywhere.
pub fn rho_d(a: &[Complex], b: &[Complex], tol_zero: f64) -> Result<f64> {
    check_lengths(a, b)?;
    Ok(a.iter()
        .zip(b)
        .position(|(x, y)| (x - y).norm() > tol_zero)
        .map_or(0.0, |n0| 0.5f64.powi(n0 as i32)))
}
