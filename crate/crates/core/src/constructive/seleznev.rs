//! Coefficient extension for formal power series: given `b_0..b_{n0}`, find
//! `h = p + t z^{n0+1} + d z^{p_k}` that approximates `psi` on a compact
//! avoiding the origin, then chain such steps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compact::{discretize, CompactSpec, Grid, MEMBERSHIP_SLACK};
use crate::error::{Error, Result};
use crate::series::{rho_d, Complex, Polynomial, ToleranceConfig};

use super::certificate::{Certificate, CertificateKind, PrefixCheck};
use super::fit::fit_ramp_with;
use super::index::IndexSequence;
use super::target::{TargetDescriptor, TargetPair};
use super::universal::{center_data, BuildOptions, HankelSummary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeleznevRequirement {
    #[serde(rename = "K")]
    pub k: CompactSpec,
    pub psi: TargetDescriptor,
    pub s: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeleznevStep {
    pub coeffs: Vec<Complex>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GreedyRun {
    pub coeffs: Vec<Complex>,
    pub certificates: Vec<Certificate>,
}

fn sup_error(h: &Polynomial, grid: &Grid, psi: &[Complex]) -> f64 {
    grid.points
        .iter()
        .zip(psi)
        .map(|(&z, &v)| (h.eval(z) - v).norm())
        .fold(0.0, f64::max)
}

/// Conclusions at the origin: `(2)` for the Padé approximant, `(3)` for the
/// partial sum, both against `psi` on `K`.
fn measure_at_origin(
    h: &Polynomial,
    (p, q): (usize, usize),
    grid: &Grid,
    psi: &[Complex],
    tol: &ToleranceConfig,
) -> Result<(BTreeMap<String, f64>, BTreeMap<String, f64>, HankelSummary)> {
    let data = center_data(h, Complex::default(), p, q, tol)?;
    let mut hankel = HankelSummary::new();
    hankel.add(&data);
    let mut achieved = BTreeMap::new();
    let mut reproduction = BTreeMap::new();
    achieved.insert("(3)".to_string(), sup_error(&data.partial, grid, psi));
    let mut pade_sup = 0.0f64;
    let mut pade_repro = 0.0f64;
    if let Some(r) = &data.pade {
        for (&z, &v) in grid.points.iter().zip(psi) {
            let w = r.eval(z, tol).map_err(|e| e.at(z))?;
            pade_sup = pade_sup.max((w - v).norm());
            pade_repro = pade_repro.max((w - h.eval(z)).norm());
        }
        achieved.insert("(2)".to_string(), pade_sup);
    }
    reproduction.insert("pade^(0)".to_string(), pade_repro);
    let partial_repro = grid
        .points
        .iter()
        .map(|&z| (data.partial.eval(z) - h.eval(z)).norm())
        .fold(0.0, f64::max);
    reproduction.insert("partial_sum^(0)".to_string(), partial_repro);
    Ok((achieved, reproduction, hankel))
}

/// Measures one extension output `h` (coefficients about 0) against the
/// requirement and its input prefix.
fn extension_certificate(
    h: &Polynomial,
    prefix: &[Complex],
    (p, q): (usize, usize),
    grid: &Grid,
    psi: &[Complex],
    requested: f64,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let (achieved, reproduction, hankel) = measure_at_origin(h, (p, q), grid, psi, tol)?;
    let mut coeffs = h.coeffs().to_vec();
    coeffs.resize(coeffs.len().max(p + 1).max(prefix.len()), Complex::default());
    let mut padded = prefix.to_vec();
    padded.resize(coeffs.len(), Complex::default());
    let prefix_check = PrefixCheck {
        n0: prefix.len() - 1,
        rho_d: rho_d(&padded, &coeffs, 0.0)?,
    };
    let mut certificate = Certificate {
        kind: CertificateKind::Seleznev,
        selected: (p, q),
        index_position: 0,
        d: h.coeff(p),
        fit_degree: 0,
        fit_residual: 0.0,
        achieved,
        reproduction,
        requested,
        hankel_min: HankelSummary::finite(hankel.min),
        hankel_margin: HankelSummary::finite(hankel.margin),
        hankel_ok: hankel.ok,
        zeta_points: 1,
        d_window: None,
        prefix: Some(prefix_check),
        notes: Vec::new(),
        passed: false,
    };
    certificate.evaluate();
    Ok(certificate)
}

/// One extension step. The output agrees with `prefix` through index `n0`.
pub fn seleznev_extend(
    prefix: &[Complex],
    req: &SeleznevRequirement,
    f: &IndexSequence,
    opts: &BuildOptions,
) -> Result<SeleznevStep> {
    let tol = &opts.tol;
    if prefix.is_empty() {
        return Err(Error::InvalidArgument("prefix must contain b_0".into()));
    }
    if req.s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let grid = discretize(&req.k)?;
    if req.k.contains(Complex::default()) || grid.min_modulus() <= MEMBERSHIP_SLACK {
        return Err(Error::OriginInK);
    }
    let n0 = prefix.len() - 1;
    let requested = 1.0 / req.s as f64;
    let base = Polynomial::new(Complex::default(), prefix.to_vec())?;
    let psi = req.psi.sample(&grid, 0, tol)?;

    // t fits (psi - p) / z^{n0+1}; its quality is judged on psi itself.
    let lifted: Vec<Complex> = grid
        .points
        .iter()
        .zip(&psi)
        .map(|(&z, &v)| (v - base.eval(z)) / z.powu(n0 as u32 + 1))
        .collect();
    let pair = TargetPair::new(grid.clone(), lifted)?;
    let glue = |t: &Polynomial| base.add(&t.shift_up(n0 + 1));
    let fit = fit_ramp_with(
        std::slice::from_ref(&pair),
        requested / 2.0,
        opts.max_fit_degree,
        Complex::default(),
        |t| vec![sup_error(&glue(t), &grid, &psi)],
    )?;
    let core = glue(&fit.poly);
    let min_degree = (fit.degree + n0 + 1).max(n0);

    let sup_k = grid.max_modulus();
    let mut reasons = Vec::new();
    let mut first = None;
    for (position, (p, q)) in f.admissible(min_degree) {
        first.get_or_insert((p, q));
        let d0 = 1.0 / (2.0 * req.s as f64 * sup_k.powi(p as i32));
        for halvings in 0..=opts.max_halvings {
            let d = Complex::new(d0 * 0.5f64.powi(halvings as i32), 0.0);
            let h = core.add(&Polynomial::monomial(Complex::default(), p, d));
            if sup_error(&h, &grid, &psi) >= requested {
                continue;
            }
            let mut certificate = extension_certificate(&h, prefix, (p, q), &grid, &psi, requested, tol)?;
            if !certificate.hankel_ok {
                reasons.push(format!("({p}, {q}): Hankel determinant vanishes at the admissible |d|"));
                break;
            }
            certificate.index_position = position;
            certificate.fit_degree = fit.degree;
            certificate.fit_residual = fit.max_residual();
            if !reasons.is_empty() {
                certificate
                    .notes
                    .push(format!("skipped earlier pairs: {}", reasons.join("; ")));
            }
            let mut coeffs = h.coeffs().to_vec();
            coeffs.resize(p + 1, Complex::default());
            return Ok(SeleznevStep { coeffs, certificate });
        }
        if reasons.last().is_none_or(|r| !r.starts_with(&format!("({p}, {q})"))) {
            reasons.push(format!(
                "({p}, {q}): sup bound not met after {} halvings",
                opts.max_halvings
            ));
        }
    }
    match first {
        None => Err(Error::IndexExhausted {
            min_degree,
            max_p: f.max_p(),
        }),
        Some((p, q)) => Err(Error::PerturbationFailed {
            p,
            q,
            reason: reasons.join("; "),
        }),
    }
}

/// Re-measures an extension output `coeffs` (about 0) produced from `prefix`.
pub fn verify_extension(
    prefix: &[Complex],
    coeffs: &[Complex],
    req: &SeleznevRequirement,
    pq: (usize, usize),
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    if prefix.is_empty() || req.s == 0 {
        return Err(Error::InvalidArgument("empty prefix or s = 0".into()));
    }
    let grid = discretize(&req.k)?;
    let psi = req.psi.sample(&grid, 0, tol)?;
    let h = Polynomial::new(Complex::default(), coeffs.to_vec())?;
    extension_certificate(&h, prefix, pq, &grid, &psi, 1.0 / req.s as f64, tol)
}

/// Folds [`seleznev_extend`] over the schedule, each step extending the
/// previous output.
pub fn greedy_universal_run(
    prefix: &[Complex],
    schedule: &[SeleznevRequirement],
    f: &IndexSequence,
    opts: &BuildOptions,
) -> Result<GreedyRun> {
    let mut run = GreedyRun {
        coeffs: prefix.to_vec(),
        certificates: Vec::with_capacity(schedule.len()),
    };
    for (index, req) in schedule.iter().enumerate() {
        let step = seleznev_extend(&run.coeffs, req, f, opts).map_err(|e| Error::Step {
            index,
            source: Box::new(e),
        })?;
        run.coeffs = step.coeffs;
        run.certificates.push(step.certificate);
    }
    Ok(run)
}
