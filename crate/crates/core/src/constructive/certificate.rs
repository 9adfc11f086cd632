use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compact::CompactSpec;
use crate::error::{Error, Result};
use crate::series::Complex;

use super::target::TargetDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// Simultaneous approximation on `K` (by partial sums and Padé
    /// approximants centered on `L`) and of `f` on `J`.
    Universal,
    /// Coefficient extension of a formal power series, centered at 0.
    Seleznev,
}

/// Record of one constructive run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub selected: (usize, usize),
    /// Position of `selected` in the index sequence.
    pub index_position: usize,
    pub d: Complex,
    pub fit_degree: usize,
    pub fit_residual: f64,
    /// Sups keyed by conclusion label: `"(2)"` at level 0, `"(2)^(l)"` for
    /// the `l`-th derivative.
    pub achieved: BTreeMap<String, f64>,
    /// Self-reproduction sups: `"pade^(l)"` and `"partial_sum^(l)"` against
    /// the constructed polynomial, and `"scale^(l)"` for its own size.
    pub reproduction: BTreeMap<String, f64>,
    pub requested: f64,
    /// Smallest `|D_{p,q}|` over the centers.
    pub hankel_min: f64,
    /// Smallest ratio of `|D_{p,q}|` to its relative threshold; must exceed 1.
    pub hankel_margin: f64,
    pub hankel_ok: bool,
    pub zeta_points: usize,
    /// `[smallest, largest]` admissible `|d|` seen by the search.
    pub d_window: Option<[f64; 2]>,
    /// Prefix preservation, for coefficient-extension runs.
    pub prefix: Option<PrefixCheck>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl Certificate {
    /// Recomputes `passed` from the recorded measurements.
    pub fn evaluate(&mut self) {
        let sups_ok = !self.achieved.is_empty() && self.achieved.values().all(|&v| v < self.requested);
        let prefix_ok = self.prefix.as_ref().is_none_or(PrefixCheck::holds);
        self.passed = sups_ok && self.hankel_ok && self.d != Complex::default() && prefix_ok;
    }

    /// True when every measured quantity matches `other` to `tol`
    /// (absolute). Search metadata is not compared.
    pub fn measurements_match(&self, other: &Certificate, tol: f64) -> bool {
        let maps = |a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|((ka, va), (kb, vb))| ka == kb && close(*va, *vb, tol))
        };
        self.selected == other.selected
            && self.d == other.d
            && maps(&self.achieved, &other.achieved)
            && maps(&self.reproduction, &other.reproduction)
            && close(self.hankel_min, other.hankel_min, tol)
            && self.hankel_ok == other.hankel_ok
            && self.passed == other.passed
    }
}

/// `rho_d` between the zero-padded input prefix `b_0..b_{n0}` and the output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefixCheck {
    pub n0: usize,
    pub rho_d: f64,
}

impl PrefixCheck {
    /// Agreement through index `n0` is `rho_d < 2^-n0`.
    pub fn holds(&self) -> bool {
        self.rho_d < 0.5f64.powi(self.n0 as i32)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

/// Label of conclusion `n` at derivative level `l`.
pub(crate) fn label(n: usize, l: usize) -> String {
    if l == 0 {
        format!("({n})")
    } else {
        format!("({n})^({l})")
    }
}

/// The data quantified over in one simultaneous-approximation requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementSpec {
    #[serde(rename = "K")]
    pub k: CompactSpec,
    pub target: TargetDescriptor,
    #[serde(rename = "L")]
    pub l: CompactSpec,
    pub s: u32,
    #[serde(default)]
    pub derivative_levels: usize,
}

impl RequirementSpec {
    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        self.target.validate()
    }

    pub fn requested(&self) -> f64 {
        1.0 / self.s as f64
    }
}
