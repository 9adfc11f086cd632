//! Discrete least-squares polynomial fitting through an Arnoldi-orthogonalized
//! basis (Vandermonde with Arnoldi). The monomial coefficients of each basis
//! vector are tracked alongside so the fit can be returned as an ordinary
//! polynomial about a chosen center.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Complex, Polynomial};

use super::target::TargetPair;

/// Cancellation factor beyond which the basis is treated as collapsed.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub poly: Polynomial,
    pub degree: usize,
    /// Sup residual on each target's grid, in input order.
    pub residuals: Vec<f64>,
    /// Worst residual of the `l`-th derivative over all targets. A plain
    /// value fit has a single entry.
    pub level_residuals: Vec<f64>,
    /// Largest cancellation factor met while orthogonalizing.
    pub condition: f64,
}

impl PolyFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub(crate) struct ArnoldiBasis {
    center: Complex,
    /// Points relative to `center`.
    shifted: Vec<Complex>,
    columns: Vec<Vec<Complex>>,
    /// `derivs[l - 1][k]`: values of `q_k^{(l)}` on the points.
    derivs: Vec<Vec<Vec<Complex>>>,
    monomials: Vec<Vec<Complex>>,
    condition: f64,
    /// First degree whose basis vector could not be formed.
    collapsed_at: Option<usize>,
}

fn dot(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Midpoint of the bounding box of `points`. Expanding about it keeps the
/// monomial coefficients of high-degree fits representable.
pub(crate) fn box_center(points: &[Complex]) -> Complex {
    if points.is_empty() {
        return Complex::default();
    }
    let (mut lo, mut hi) = (points[0], points[0]);
    for z in points {
        lo = Complex::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    (lo + hi) * 0.5
}

impl ArnoldiBasis {
    /// Columns are normalized so that `|q_k|^2 = N`.
    pub(crate) fn new(points: &[Complex], max_degree: usize, center: Complex) -> Self {
        Self::with_derivatives(points, max_degree, 0, center)
    }

    /// Also carries the derivatives of the basis up to order `levels`.
    pub(crate) fn with_derivatives(points: &[Complex], max_degree: usize, levels: usize, center: Complex) -> Self {
        let n = points.len();
        let scale = (n as f64).sqrt();
        let mut basis = ArnoldiBasis {
            center,
            shifted: points.iter().map(|z| z - center).collect(),
            columns: vec![vec![Complex::new(1.0, 0.0); n]],
            derivs: vec![vec![vec![Complex::default(); n]]; levels],
            monomials: vec![vec![Complex::new(1.0, 0.0)]],
            condition: 1.0,
            collapsed_at: None,
        };
        for k in 1..=max_degree {
            if k >= n {
                basis.collapsed_at = Some(k);
                break;
            }
            let prev = &basis.columns[k - 1];
            let mut v: Vec<Complex> = basis.shifted.iter().zip(prev).map(|(w, q)| w * q).collect();
            let mut mono = vec![Complex::default()];
            mono.extend_from_slice(&basis.monomials[k - 1]);
            // (w q)^{(l)} = w q^{(l)} + l q^{(l-1)}
            let mut dv: Vec<Vec<Complex>> = (1..=levels)
                .map(|l| {
                    let lower = if l == 1 { prev } else { &basis.derivs[l - 2][k - 1] };
                    basis.derivs[l - 1][k - 1]
                        .iter()
                        .zip(lower)
                        .zip(&basis.shifted)
                        .map(|((d, lo), w)| w * d + lo * l as f64)
                        .collect()
                })
                .collect();
            let before = norm(&v);
            // Two Gram-Schmidt passes keep the columns orthogonal to working precision.
            for _ in 0..2 {
                for j in 0..k {
                    let h = dot(&basis.columns[j], &v) / n as f64;
                    for (vi, qi) in v.iter_mut().zip(&basis.columns[j]) {
                        *vi -= h * qi;
                    }
                    for (mi, qi) in mono.iter_mut().zip(&basis.monomials[j]) {
                        *mi -= h * qi;
                    }
                    for (l, dl) in dv.iter_mut().enumerate() {
                        for (di, qi) in dl.iter_mut().zip(&basis.derivs[l][j]) {
                            *di -= h * qi;
                        }
                    }
                }
            }
            let after = norm(&v);
            let ratio = if after > 0.0 { before / after } else { f64::INFINITY };
            basis.condition = basis.condition.max(ratio);
            if !(ratio <= MAX_CONDITION) {
                basis.collapsed_at = Some(k);
                break;
            }
            let inv = scale / after;
            v.iter_mut().for_each(|x| *x *= inv);
            mono.iter_mut().for_each(|x| *x *= inv);
            for (l, mut dl) in dv.drain(..).enumerate() {
                dl.iter_mut().for_each(|x| *x *= inv);
                basis.derivs[l].push(dl);
            }
            basis.columns.push(v);
            basis.monomials.push(mono);
        }
        basis
    }

    pub(crate) fn condition(&self) -> f64 {
        self.condition
    }

    fn available(&self) -> usize {
        self.columns.len() - 1
    }

    /// Expansion coefficients of `values` in the orthogonal basis.
    pub(crate) fn project(&self, values: &[Complex]) -> Vec<Complex> {
        let n = self.shifted.len() as f64;
        self.columns.iter().map(|q| dot(q, values) / n).collect()
    }

    /// Best fit of degree `degree` given projected coefficients.
    pub(crate) fn polynomial(&self, coeffs: &[Complex], degree: usize) -> Result<Polynomial> {
        if degree > self.available() {
            return Err(Error::IllConditioned {
                degree: self.collapsed_at.unwrap_or(degree),
                condition: self.condition.max(MAX_CONDITION * 10.0),
            });
        }
        let mut out = vec![Complex::default(); degree + 1];
        for (c, mono) in coeffs.iter().zip(&self.monomials).take(degree + 1) {
            for (o, m) in out.iter_mut().zip(mono) {
                *o += c * m;
            }
        }
        Ok(Polynomial::from_parts(self.center, out))
    }
}

/// Sampled values and derivatives `values[l][i]` of a target on a grid.
pub(crate) struct JetTarget<'a> {
    pub points: &'a [Complex],
    pub values: &'a [Vec<Complex>],
}

fn jet_errors(poly: &Polynomial, targets: &[JetTarget<'_>], levels: usize) -> (Vec<f64>, Vec<f64>) {
    let mut per_target = vec![0.0f64; targets.len()];
    let mut per_level = vec![0.0f64; levels + 1];
    for l in 0..=levels {
        let dp = poly.derivative(l);
        for (t, slot) in targets.iter().zip(per_target.iter_mut()) {
            let e = t
                .points
                .iter()
                .zip(&t.values[l])
                .map(|(&z, &w)| (dp.eval(z) - w).norm())
                .fold(0.0, f64::max);
            *slot = slot.max(e);
            per_level[l] = per_level[l].max(e);
        }
    }
    (per_target, per_level)
}

/// Degree ramp for a joint least-squares fit of values and derivatives up
/// to the targets' order. Accepts the first degree at which levels
/// `0..=enforced` are below `bound`; the others are fitted but not judged.
pub(crate) fn jet_fit_ramp(
    targets: &[JetTarget<'_>],
    bound: f64,
    max_degree: usize,
    center: Complex,
    enforced: usize,
) -> Result<PolyFit> {
    let levels = targets
        .iter()
        .map(|t| t.values.len())
        .min()
        .unwrap_or(1)
        .saturating_sub(1);
    let enforced = enforced.min(levels);
    let points: Vec<Complex> = targets.iter().flat_map(|t| t.points.iter().copied()).collect();
    check_points(points.len(), 0)?;
    let basis = ArnoldiBasis::with_derivatives(&points, max_degree.min(points.len() - 1), levels, center);
    let cols = basis.available() + 1;
    let rhs: Vec<Complex> = (0..=levels)
        .flat_map(|l| targets.iter().flat_map(move |t| t.values[l].iter().copied()))
        .collect();
    let a = nalgebra::DMatrix::from_fn(rhs.len(), cols, |i, k| {
        let (l, i) = (i / points.len(), i % points.len());
        if l == 0 {
            basis.columns[k][i]
        } else {
            basis.derivs[l - 1][k][i]
        }
    });
    // One QR serves every degree: the leading block of R factors the
    // leading columns.
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    let qb = q.adjoint() * nalgebra::DVector::from_column_slice(&rhs);

    let mut best: Option<PolyFit> = None;
    for degree in 0..cols {
        let mut x = vec![Complex::default(); degree + 1];
        for i in (0..=degree).rev() {
            let mut acc = qb[i];
            for k in i + 1..=degree {
                acc -= r[(i, k)] * x[k];
            }
            x[i] = acc / r[(i, i)];
        }
        if x.iter().any(|v| !v.is_finite()) {
            break;
        }
        let poly = basis.polynomial(&x, degree)?;
        let (residuals, level_residuals) = jet_errors(&poly, targets, levels);
        let fit = PolyFit {
            poly,
            degree,
            residuals,
            level_residuals,
            condition: basis.condition(),
        };
        if fit.level_residuals[..=enforced].iter().all(|&e| e < bound) {
            return Ok(fit);
        }
        let worst = |f: &PolyFit| f.level_residuals[..=enforced].iter().copied().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| worst(&fit) < worst(b)) {
            best = Some(fit);
        }
    }
    let best = best.expect("degree 0 is always available");
    Err(Error::FitFailed {
        degree: best.degree,
        residual: best.level_residuals[..=enforced].iter().copied().fold(0.0, f64::max),
        bound,
    })
}

fn combined(targets: &[TargetPair]) -> (Vec<Complex>, Vec<Complex>) {
    let points = targets.iter().flat_map(|t| t.grid.points.iter().copied()).collect();
    let values = targets.iter().flat_map(|t| t.values.iter().copied()).collect();
    (points, values)
}

fn residuals(poly: &Polynomial, targets: &[TargetPair]) -> Vec<f64> {
    targets
        .iter()
        .map(|t| {
            t.grid
                .points
                .iter()
                .zip(&t.values)
                .map(|(&z, &v)| (poly.eval(z) - v).norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

fn check_points(total: usize, degree: usize) -> Result<()> {
    if total < degree + 1 {
        return Err(Error::InsufficientPoints {
            needed: degree + 1,
            got: total,
        });
    }
    Ok(())
}

/// Least-squares fit of one polynomial of degree at most `degree` to every
/// `(z, value)` pair across the targets. The result is expanded about the
/// midpoint of the points' bounding box.
pub fn poly_fit(targets: &[TargetPair], degree: usize) -> Result<PolyFit> {
    let (points, values) = combined(targets);
    check_points(points.len(), degree)?;
    let basis = ArnoldiBasis::new(&points, degree, box_center(&points));
    let coeffs = basis.project(&values);
    let poly = basis.polynomial(&coeffs, degree)?;
    let residuals = residuals(&poly, targets);
    Ok(PolyFit {
        level_residuals: vec![residuals.iter().copied().fold(0.0, f64::max)],
        residuals,
        poly,
        degree,
        condition: basis.condition(),
    })
}

/// Raises the degree from 0 until `error(poly) < bound`, where `error`
/// returns per-target residuals.
pub(crate) fn fit_ramp_with<E>(
    targets: &[TargetPair],
    bound: f64,
    max_degree: usize,
    center: Complex,
    error: E,
) -> Result<PolyFit>
where
    E: Fn(&Polynomial) -> Vec<f64>,
{
    let (points, values) = combined(targets);
    check_points(points.len(), 0)?;
    let basis = ArnoldiBasis::new(&points, max_degree.min(values.len() - 1), center);
    let coeffs = basis.project(&values);
    let mut best: Option<PolyFit> = None;
    for degree in 0..=basis.available() {
        let poly = basis.polynomial(&coeffs, degree)?;
        let residuals = error(&poly);
        let fit = PolyFit {
            level_residuals: vec![residuals.iter().copied().fold(0.0, f64::max)],
            residuals,
            poly,
            degree,
            condition: basis.condition(),
        };
        if fit.max_residual() < bound {
            return Ok(fit);
        }
        if best.as_ref().is_none_or(|b| fit.max_residual() < b.max_residual()) {
            best = Some(fit);
        }
    }
    let best = best.expect("degree 0 is always available");
    Err(Error::FitFailed {
        degree: best.degree,
        residual: best.max_residual(),
        bound,
    })
}

/// Degree ramp on the plain sup residual, expanded like [`poly_fit`].
pub fn fit_ramp(targets: &[TargetPair], bound: f64, max_degree: usize) -> Result<PolyFit> {
    let (points, _) = combined(targets);
    fit_ramp_with(targets, bound, max_degree, box_center(&points), |p| {
        residuals(p, targets)
    })
}
