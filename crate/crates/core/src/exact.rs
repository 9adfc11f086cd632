//! Exact arithmetic over the Gaussian rationals `Q + iQ`.
//!
//! Used as the ground truth for Hankel membership and Padé construction at
//! small degrees (up to 8): determinants here are exact, so "vanishes" means
//! identically zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::Complex;

/// Maximum degree the exact routines are meant for.
pub const EXACT_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `(re_num + i im_num) / den`.
    pub fn from_ints(re_num: i64, im_num: i64, den: i64) -> Self {
        Self::new(rational(re_num, den), rational(im_num, den))
    }

    pub fn int(n: i64) -> Self {
        Self::from_ints(n, 0, 1)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: Self) -> GaussianRational {
        self * &o.inv().expect("division by exact zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

// Rationals serialize as decimal strings "num/den" inside a [re, im] pair.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.re.to_string(), self.im.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (re, im) = <(String, String)>::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigRational>().map_err(serde::de::Error::custom);
        Ok(Self::new(parse(&re)?, parse(&im)?))
    }
}

/// Exact polynomial in powers of `(z - center)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactPolynomial {
    pub center: GaussianRational,
    pub coeffs: Vec<GaussianRational>,
}

impl ExactPolynomial {
    pub fn new(center: GaussianRational, coeffs: Vec<GaussianRational>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![GaussianRational::zero()]
        } else {
            coeffs
        };
        Self { center, coeffs }
    }

    /// `lead * prod (z - r)` about `center`.
    pub fn from_roots(center: GaussianRational, lead: GaussianRational, roots: &[GaussianRational]) -> Self {
        let mut coeffs = vec![lead];
        for r in roots {
            // multiply by (z - center) - (r - center)
            let shift = r - &center;
            let mut next = vec![GaussianRational::zero(); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] - &(a * &shift);
            }
            coeffs = next;
        }
        Self::new(center, coeffs)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|a| !a.is_zero())
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let w = z - &self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, a| &(&acc * &w) + a)
    }

    pub fn recenter(&self, center: &GaussianRational) -> Self {
        let shift = center - &self.center;
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = &shift * &a[j + 1];
                a[j] = &a[j] + &t;
            }
        }
        Self::new(center.clone(), a)
    }

    pub fn to_polynomial(&self) -> Result<crate::series::Polynomial> {
        crate::series::Polynomial::new(
            self.center.to_complex(),
            self.coeffs.iter().map(GaussianRational::to_complex).collect(),
        )
    }
}

/// First `len` Taylor coefficients of `a/b` at `center`; `b(center)` must be
/// nonzero.
pub fn quotient_series(
    a: &ExactPolynomial,
    b: &ExactPolynomial,
    center: &GaussianRational,
    len: usize,
) -> Result<Vec<GaussianRational>> {
    let a = a.recenter(center);
    let b = b.recenter(center);
    let b0_inv = b.coeffs[0].inv().ok_or_else(|| Error::DegenerateDenominator(0.0))?;
    let mut out: Vec<GaussianRational> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = a.coeffs.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(b.coeffs.len() - 1) {
            acc = &acc - &(&b.coeffs[i] * &out[k - i]);
        }
        out.push(&acc * &b0_inv);
    }
    Ok(out)
}

/// Exact determinant by Gaussian elimination over the field.
pub fn determinant(mut m: Vec<Vec<GaussianRational>>) -> GaussianRational {
    let n = m.len();
    let mut det = GaussianRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return GaussianRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -&det;
        }
        let inv = m[col][col].inv().expect("nonzero pivot");
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    det
}

fn coeff_signed(a: &[GaussianRational], k: isize) -> Result<GaussianRational> {
    if k < 0 {
        return Ok(GaussianRational::zero());
    }
    a.get(k as usize).cloned().ok_or(Error::TruncationExceeded {
        needed: k as usize,
        available: a.len(),
    })
}

/// Exact `D_{p,q}` with the same indexing as the floating-point routine.
pub fn hankel_determinant(a: &[GaussianRational], p: usize, q: usize) -> Result<GaussianRational> {
    if a.len() < p + q + 1 {
        return Err(Error::TruncationExceeded {
            needed: p + q,
            available: a.len(),
        });
    }
    let base = p as isize - q as isize + 1;
    let m = (0..q)
        .map(|i| (0..q).map(|j| coeff_signed(a, base + (i + j) as isize)).collect())
        .collect::<Result<_>>()?;
    Ok(determinant(m))
}

/// Exact `[f; p/q]` as `(A, B)` with `b_0 = 1`, from the linear system for
/// the denominator. `None` when the Hankel determinant vanishes.
pub fn pade_approximant(
    a: &[GaussianRational],
    center: &GaussianRational,
    p: usize,
    q: usize,
) -> Result<Option<(ExactPolynomial, ExactPolynomial)>> {
    if hankel_determinant(a, p, q)?.is_zero() {
        return Ok(None);
    }
    // Solve sum_{i=1..q} b_i a_{k-i} = -a_k, k = p+1..p+q by elimination.
    let mut rows: Vec<Vec<GaussianRational>> = (0..q)
        .map(|r| {
            let mut row: Vec<GaussianRational> = (0..q)
                .map(|c| coeff_signed(a, p as isize + r as isize - c as isize))
                .collect::<Result<_>>()?;
            row.push(-&coeff_signed(a, (p + 1 + r) as isize)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for col in 0..q {
        let pivot = (col..q)
            .find(|&r| !rows[r][col].is_zero())
            .expect("nonsingular Toeplitz system");
        rows.swap(pivot, col);
        let inv = rows[col][col].inv().expect("nonzero pivot");
        for c in col..=q {
            rows[col][c] = &rows[col][c] * &inv;
        }
        for r in 0..q {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..=q {
                let t = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
    }
    let mut b = vec![GaussianRational::one()];
    b.extend(rows.iter().map(|row| row[q].clone()));
    let mut numerator = Vec::with_capacity(p + 1);
    for k in 0..=p {
        let mut acc = GaussianRational::zero();
        for (i, bi) in b.iter().enumerate().take(k.min(q) + 1) {
            acc = &acc + &(bi * &a[k - i]);
        }
        numerator.push(acc);
    }
    Ok(Some((
        ExactPolynomial::new(center.clone(), numerator),
        ExactPolynomial::new(center.clone(), b),
    )))
}
