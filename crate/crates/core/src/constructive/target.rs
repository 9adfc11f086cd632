use serde::{Deserialize, Serialize};

use crate::compact::Grid;
use crate::error::{Error, Result};
use crate::pade::DerivativeEvaluator;
use crate::series::{ensure_finite, Complex, Polynomial, ToleranceConfig};

/// Functions that can be sampled on grids: polynomials, rational functions
/// with poles away from the grid, and pointwise tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetDescriptor {
    Poly {
        #[serde(default)]
        center: Complex,
        coeffs: Vec<Complex>,
    },
    Rational {
        #[serde(default)]
        center: Complex,
        numerator: Vec<Complex>,
        denominator: Vec<Complex>,
    },
    Table {
        points: Vec<Complex>,
        values: Vec<Complex>,
    },
}

/// Largest distance at which a table entry still matches a query point.
const TABLE_MATCH: f64 = 1e-12;

impl TargetDescriptor {
    pub fn polynomial(p: &Polynomial) -> Self {
        TargetDescriptor::Poly {
            center: p.center(),
            coeffs: p.coeffs().to_vec(),
        }
    }

    /// `numerator / denominator`, both about `center`.
    pub fn rational(center: Complex, numerator: Vec<Complex>, denominator: Vec<Complex>) -> Self {
        TargetDescriptor::Rational {
            center,
            numerator,
            denominator,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TargetDescriptor::Poly { center, coeffs } => Polynomial::new(*center, coeffs.clone()).map(|_| ()),
            TargetDescriptor::Rational {
                center,
                numerator,
                denominator,
            } => {
                Polynomial::new(*center, numerator.clone())?;
                let den = Polynomial::new(*center, denominator.clone())?;
                if den.coeffs().iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::InvalidArgument("zero denominator".into()));
                }
                Ok(())
            }
            TargetDescriptor::Table { points, values } => {
                if points.len() != values.len() {
                    return Err(Error::LengthMismatch {
                        left: points.len(),
                        right: values.len(),
                    });
                }
                if points.is_empty() {
                    return Err(Error::InvalidArgument("empty table".into()));
                }
                ensure_finite(points, "table points")?;
                ensure_finite(values, "table values")
            }
        }
    }

    /// Evaluator for the `l`-th derivative.
    pub fn derivative(&self, l: usize, tol: &ToleranceConfig) -> Result<TargetFn> {
        self.validate()?;
        Ok(match self {
            TargetDescriptor::Poly { center, coeffs } => {
                TargetFn::Poly(Polynomial::from_parts(*center, coeffs.clone()).derivative(l))
            }
            TargetDescriptor::Rational {
                center,
                numerator,
                denominator,
            } => TargetFn::Rational(DerivativeEvaluator::for_quotient(
                &Polynomial::from_parts(*center, numerator.clone()),
                &Polynomial::from_parts(*center, denominator.clone()),
                l,
                tol.zero,
            )?),
            TargetDescriptor::Table { .. } if l > 0 => {
                return Err(Error::Unsupported("derivatives of tabulated targets".into()))
            }
            TargetDescriptor::Table { points, values } => TargetFn::Table(points.clone(), values.clone()),
        })
    }

    pub fn eval(&self, z: Complex, tol: &ToleranceConfig) -> Result<Complex> {
        self.derivative(0, tol)?.eval(z)
    }

    /// Values of the `l`-th derivative on every grid point.
    pub fn sample(&self, grid: &Grid, l: usize, tol: &ToleranceConfig) -> Result<Vec<Complex>> {
        let g = self.derivative(l, tol)?;
        grid.points
            .iter()
            .map(|&z| {
                let v = g.eval(z).map_err(|e| e.at(z))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite("target value").at(z))
                }
            })
            .collect()
    }
}

/// A compiled target (or one of its derivatives).
#[derive(Debug, Clone)]
pub enum TargetFn {
    Poly(Polynomial),
    Rational(DerivativeEvaluator),
    Table(Vec<Complex>, Vec<Complex>),
}

impl TargetFn {
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        match self {
            TargetFn::Poly(p) => Ok(p.eval(z)),
            TargetFn::Rational(r) => r.eval(z),
            TargetFn::Table(points, values) => points
                .iter()
                .position(|w| (w - z).norm() <= TABLE_MATCH)
                .map(|i| values[i])
                .ok_or_else(|| Error::InvalidArgument(format!("point {z} is not in the table"))),
        }
    }
}

/// Sampled target on one compact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetPair {
    pub grid: Grid,
    pub values: Vec<Complex>,
}

impl TargetPair {
    pub fn new(grid: Grid, values: Vec<Complex>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: grid.len(),
                right: values.len(),
            });
        }
        ensure_finite(&values, "target values")?;
        Ok(Self { grid, values })
    }

    pub fn sample(grid: Grid, target: &TargetDescriptor, tol: &ToleranceConfig) -> Result<Self> {
        let values = target.sample(&grid, 0, tol)?;
        Ok(Self { grid, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
