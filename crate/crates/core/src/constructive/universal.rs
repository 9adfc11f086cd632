//! The density construction `u = P + d z^p`: glue the targets, fit `P`,
//! pick `(p, q)` from the index sequence, then search `|d|` so that every
//! conclusion holds on the grids.

use std::collections::BTreeMap;

use rand::Rng;

use crate::compact::{discretize, CompactSpec, Grid, MEMBERSHIP_SLACK};
use crate::error::{Error, Result};
use crate::pade::{hankel_determinant, pade_approximant, rational_derivative, HankelReport, RationalFunction};
use crate::series::{taylor_partial_sum, Complex, Polynomial, ToleranceConfig};

use super::certificate::{label, Certificate, CertificateKind, RequirementSpec};
use super::fit::{box_center, fit_ramp_with, jet_fit_ramp, JetTarget, PolyFit};
use super::index::{select_index, IndexSequence};
use super::target::{TargetDescriptor, TargetPair};

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub tol: ToleranceConfig,
    pub max_fit_degree: usize,
    pub max_halvings: usize,
    /// Skips the search and uses this `d` as given.
    pub d_override: Option<Complex>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            tol: ToleranceConfig::default(),
            max_fit_degree: 60,
            max_halvings: 60,
            d_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalBuild {
    pub u: Polynomial,
    pub fit: PolyFit,
    pub certificate: Certificate,
}

/// Hankel determinant, partial sum and Padé approximant of `u` at one center.
pub(crate) struct CenterData {
    pub report: HankelReport,
    pub partial: Polynomial,
    pub pade: Option<RationalFunction>,
}

impl CenterData {
    pub(crate) fn margin(&self) -> f64 {
        let v = self.report.value.norm();
        if self.report.threshold > 0.0 {
            v / self.report.threshold
        } else if v > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

pub(crate) fn center_data(
    u: &Polynomial,
    zeta: Complex,
    p: usize,
    q: usize,
    tol: &ToleranceConfig,
) -> Result<CenterData> {
    let series = u.recenter(zeta).taylor_series(p + q + 1);
    let report = hankel_determinant(&series, p, q, tol)?;
    let partial = taylor_partial_sum(&series, p)?;
    let pade = if report.nonvanishing {
        Some(pade_approximant(&series, p, q, tol)?)
    } else {
        None
    };
    Ok(CenterData { report, partial, pade })
}

/// Running minimum of the Hankel quantities over centers.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HankelSummary {
    pub min: f64,
    pub margin: f64,
    pub ok: bool,
    pub failures: usize,
}

impl HankelSummary {
    pub(crate) fn new() -> Self {
        Self {
            min: f64::INFINITY,
            margin: f64::INFINITY,
            ok: true,
            failures: 0,
        }
    }

    pub(crate) fn add(&mut self, data: &CenterData) {
        self.min = self.min.min(data.report.value.norm());
        self.margin = self.margin.min(data.margin());
        if !data.report.nonvanishing {
            self.ok = false;
            self.failures += 1;
        }
    }

    /// Non-finite minima (no centers, or `q = 0`) are stored as the largest
    /// finite value so the record stays valid JSON.
    pub(crate) fn finite(v: f64) -> f64 {
        if v.is_finite() {
            v
        } else {
            f64::MAX
        }
    }
}

/// Grids and sampled targets shared by every measurement of one scenario.
pub(crate) struct Workspace {
    pub k: Grid,
    pub l: Grid,
    pub j: Grid,
    /// `h^{(l)}` on `K`, one vector per level.
    pub h: Vec<Vec<Complex>>,
    /// `f^{(l)}` on `J`, one vector per level.
    pub f: Vec<Vec<Complex>>,
    pub s: u32,
}

fn check_disjoint(
    a: &CompactSpec,
    a_grid: &Grid,
    b: &CompactSpec,
    b_grid: &Grid,
    names: (&'static str, &'static str),
) -> Result<()> {
    let distance = a_grid
        .points
        .iter()
        .map(|&z| b.distance(z))
        .chain(b_grid.points.iter().map(|&z| a.distance(z)))
        .fold(a_grid.min_distance(b_grid), f64::min);
    if distance <= MEMBERSHIP_SLACK {
        return Err(Error::Overlap {
            left: names.0,
            right: names.1,
            distance,
        });
    }
    Ok(())
}

impl Workspace {
    pub(crate) fn new(
        req: &RequirementSpec,
        f_on_l: &TargetDescriptor,
        j: &CompactSpec,
        levels: usize,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        req.validate()?;
        f_on_l.validate()?;
        let k_grid = discretize(&req.k)?;
        let l_grid = discretize(&req.l)?;
        let j_grid = discretize(j)?;
        check_disjoint(&req.k, &k_grid, &req.l, &l_grid, ("K", "L"))?;
        check_disjoint(&req.k, &k_grid, j, &j_grid, ("K", "J"))?;
        let h = (0..=levels)
            .map(|l| req.target.sample(&k_grid, l, tol))
            .collect::<Result<_>>()?;
        let f = (0..=levels)
            .map(|l| f_on_l.sample(&j_grid, l, tol))
            .collect::<Result<_>>()?;
        Ok(Self {
            k: k_grid,
            l: l_grid,
            j: j_grid,
            h,
            f,
            s: req.s,
        })
    }

    fn levels(&self) -> usize {
        self.h.len() - 1
    }
}

/// Measured quantities of one candidate `u`.
pub(crate) struct Measured {
    pub achieved: BTreeMap<String, f64>,
    pub reproduction: BTreeMap<String, f64>,
    pub hankel: HankelSummary,
}

fn finite(v: Complex, z: Complex) -> Result<Complex> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("approximant value").at(z))
    }
}

fn bump(map: &mut BTreeMap<String, f64>, key: String, v: f64) {
    let slot = map.entry(key).or_insert(0.0);
    *slot = slot.max(v);
}

/// Every sup over `L x K` and `L x J` at levels `0..=levels`. In strict mode
/// a vanishing Hankel determinant is an error; otherwise the center is
/// skipped for the Padé conclusions and counted as a Hankel failure.
fn measure(
    u: &Polynomial,
    (p, q): (usize, usize),
    ws: &Workspace,
    levels: usize,
    tol: &ToleranceConfig,
    strict: bool,
) -> Result<Measured> {
    let levels = levels.min(ws.levels());
    let both: Vec<Complex> = ws.k.points.iter().chain(&ws.j.points).copied().collect();
    let u_values: Vec<Vec<Complex>> = (0..=levels)
        .map(|l| {
            let du = u.derivative(l);
            both.iter().map(|&z| du.eval(z)).collect()
        })
        .collect();

    let mut achieved = BTreeMap::new();
    let mut reproduction = BTreeMap::new();
    let mut hankel = HankelSummary::new();
    for (l, values) in u_values.iter().enumerate() {
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        reproduction.insert(format!("scale^({l})"), scale);
    }

    for &zeta in &ws.l.points {
        let data = center_data(u, zeta, p, q, tol).map_err(|e| e.at(zeta))?;
        hankel.add(&data);
        if data.pade.is_none() && strict {
            return Err(Error::PadeNotExist {
                p,
                q,
                center: zeta,
                value: data.report.value,
                threshold: data.report.threshold,
            }
            .at(zeta));
        }
        for l in 0..=levels {
            let partial = data.partial.derivative(l);
            let pade = match &data.pade {
                Some(r) => Some(rational_derivative(r, l, tol)?),
                None => None,
            };
            let mut sups = [0.0f64; 4];
            let mut repro = [0.0f64; 2];
            for (i, &z) in both.iter().enumerate() {
                let s_val = finite(partial.eval(z), z)?;
                let r_val = match &pade {
                    Some(r) => Some(finite(r.eval(z).map_err(|e| e.at(z))?, z)?),
                    None => None,
                };
                let u_val = u_values[l][i];
                repro[1] = repro[1].max((s_val - u_val).norm());
                if let Some(r) = r_val {
                    repro[0] = repro[0].max((r - u_val).norm());
                }
                let (reference, slot) = if i < ws.k.len() {
                    (ws.h[l][i], 0)
                } else {
                    (ws.f[l][i - ws.k.len()], 2)
                };
                sups[slot] = sups[slot].max((s_val - reference).norm());
                if let Some(r) = r_val {
                    sups[slot + 1] = sups[slot + 1].max((r - reference).norm());
                }
            }
            for (n, v) in (2..=5).zip(sups) {
                bump(&mut achieved, label(n, l), v);
            }
            bump(&mut reproduction, format!("pade^({l})"), repro[0]);
            bump(&mut reproduction, format!("partial_sum^({l})"), repro[1]);
        }
    }
    Ok(Measured {
        achieved,
        reproduction,
        hankel,
    })
}

fn sups_ok(m: &Measured, requested: f64) -> bool {
    m.achieved.values().all(|&v| v < requested)
}

fn certificate_from(m: Measured, u: &Polynomial, (p, q): (usize, usize), ws: &Workspace) -> Certificate {
    let d = u.recenter(Complex::default()).coeff(p);
    let mut notes = Vec::new();
    if m.hankel.failures > 0 {
        notes.push(format!(
            "Hankel determinant below threshold at {} of {} centers; Padé sups cover the remaining centers",
            m.hankel.failures,
            ws.l.len()
        ));
    }
    if d == Complex::default() {
        notes.push("perturbation d is zero".into());
    }
    let mut cert = Certificate {
        kind: CertificateKind::Universal,
        selected: (p, q),
        index_position: 0,
        d,
        fit_degree: 0,
        fit_residual: 0.0,
        achieved: m.achieved,
        reproduction: m.reproduction,
        requested: 1.0 / ws.s as f64,
        hankel_min: HankelSummary::finite(m.hankel.min),
        hankel_margin: HankelSummary::finite(m.hankel.margin),
        hankel_ok: m.hankel.ok,
        zeta_points: ws.l.len(),
        d_window: None,
        prefix: None,
        notes,
        passed: false,
    };
    cert.evaluate();
    cert
}

/// Measures conclusions (1)-(5) for `u` at `(p, q)`, with derivative levels
/// `1..=derivative_levels` recorded separately. Pure measurement.
pub fn verify_conclusions(
    u: &Polynomial,
    req: &RequirementSpec,
    pq: (usize, usize),
    j: &CompactSpec,
    f_on_l: &TargetDescriptor,
    derivative_levels: usize,
    tol: &ToleranceConfig,
) -> Result<Certificate> {
    let ws = Workspace::new(req, f_on_l, j, derivative_levels, tol)?;
    let m = measure(u, pq, &ws, derivative_levels, tol, true)?;
    Ok(certificate_from(m, u, pq, &ws))
}

fn perturbed(p_fit: &Polynomial, p: usize, d: Complex) -> Polynomial {
    p_fit.add(&Polynomial::monomial(Complex::default(), p, d))
}

fn hankel_ok_everywhere(u: &Polynomial, (p, q): (usize, usize), centers: &Grid, tol: &ToleranceConfig) -> Result<bool> {
    for &zeta in &centers.points {
        let series = u.recenter(zeta).taylor_series(p + q + 1);
        if !hankel_determinant(&series, p, q, tol)?.nonvanishing {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the `d` search for one fitted `P`.
struct Found {
    u: Polynomial,
    pq: (usize, usize),
    position: usize,
    window: Option<[f64; 2]>,
    notes: Vec<String>,
}

/// `1 / (2 s max_l sup |(z^p)^{(l)}|)` over the requested levels, with the
/// sup taken over every grid `u` is judged on.
fn initial_d(ws: &Workspace, p: usize) -> f64 {
    let radius = ws.k.max_modulus().max(ws.j.max_modulus());
    let size = (0..=ws.levels().min(p))
        .map(|l| {
            let falling: f64 = (p - l + 1..=p).map(|k| k as f64).product();
            falling * radius.powi((p - l) as i32)
        })
        .fold(0.0, f64::max);
    1.0 / (2.0 * ws.s as f64 * size)
}

/// Walks the admissible pairs of `f` and halves `d` from its starting value
/// until the sups at levels `0..=levels` and the Hankel condition hold.
fn search_perturbation(
    fit: &PolyFit,
    ws: &Workspace,
    f: &IndexSequence,
    levels: usize,
    opts: &BuildOptions,
) -> Result<Found> {
    let tol = &opts.tol;
    let requested = 1.0 / ws.s as f64;
    let fit_degree = fit.poly.coeffs().len() - 1;
    if let Some(d) = opts.d_override {
        let (p, q) = select_index(f, fit_degree)?;
        let position = f.admissible(fit_degree).next().map_or(0, |(i, _)| i);
        return Ok(Found {
            u: perturbed(&fit.poly, p, d),
            pq: (p, q),
            position,
            window: None,
            notes: vec!["d fixed by caller".into()],
        });
    }

    let mut reasons = Vec::new();
    let mut first = None;
    for (position, (p, q)) in f.admissible(fit_degree) {
        first.get_or_insert((p, q));
        let d0 = initial_d(ws, p);
        let mut accepted = None;
        let mut previous = f64::NAN;
        let mut halvings = 0;
        while halvings <= opts.max_halvings {
            let d = Complex::new(d0 * 0.5f64.powi(halvings as i32), 0.0);
            let u = perturbed(&fit.poly, p, d);
            let m = measure(&u, (p, q), ws, levels, tol, false)?;
            if sups_ok(&m, requested) {
                if m.hankel.ok {
                    accepted = Some((u, d));
                } else {
                    reasons.push(format!(
                        "({p}, {q}): Hankel determinant vanishes once |d| is small enough for the sup bounds"
                    ));
                }
                break;
            }
            // Once halving d no longer moves the sups, the error is not
            // coming from the perturbation.
            let worst = m.achieved.values().copied().fold(0.0, f64::max);
            if (worst - previous).abs() <= 1e-3 * worst {
                reasons.push(format!("({p}, {q}): sups stall at {worst:.3e} independently of |d|"));
                break;
            }
            previous = worst;
            halvings += 1;
        }
        let Some((u, d)) = accepted else {
            if halvings > opts.max_halvings {
                reasons.push(format!(
                    "({p}, {q}): sup bounds not met after {} halvings",
                    opts.max_halvings
                ));
            }
            continue;
        };
        // Lower edge of the admissible window: keep halving while the
        // determinant stays above threshold.
        let mut low = d.norm();
        for extra in halvings + 1..=opts.max_halvings {
            let trial = d0 * 0.5f64.powi(extra as i32);
            if !hankel_ok_everywhere(&perturbed(&fit.poly, p, Complex::new(trial, 0.0)), (p, q), &ws.l, tol)? {
                break;
            }
            low = trial;
        }
        let mut notes = Vec::new();
        if !reasons.is_empty() {
            notes.push(format!("skipped earlier pairs: {}", reasons.join("; ")));
        }
        return Ok(Found {
            u,
            pq: (p, q),
            position,
            window: Some([low, d.norm()]),
            notes,
        });
    }
    match first {
        None => Err(select_index(f, fit_degree).unwrap_err()),
        Some((p, q)) => Err(Error::PerturbationFailed {
            p,
            q,
            reason: reasons.join("; "),
        }),
    }
}

/// Builds `u = P + d z^p` for the requirement and certifies it. `J` is the
/// compact on which `f_on_l` must also be approximated.
///
/// With derivative levels, `P` is first fitted to values and derivatives
/// jointly. If that fit or its perturbation search fails, the build falls
/// back to a value-only fit; the certificate then reports the derivative
/// sups as measured and does not pass unless they happen to hold.
pub fn build_universal_polynomial(
    req: &RequirementSpec,
    f_on_l: &TargetDescriptor,
    j: &CompactSpec,
    f: &IndexSequence,
    opts: &BuildOptions,
) -> Result<UniversalBuild> {
    let tol = &opts.tol;
    let levels = req.derivative_levels;
    let ws = Workspace::new(req, f_on_l, j, levels, tol)?;
    let bound = req.requested() / 2.0;

    let inner = ws.l.concat(&ws.j);
    let inner_values = (0..=levels)
        .map(|l| f_on_l.sample(&inner, l, tol))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<Complex> = ws.k.points.iter().chain(&inner.points).copied().collect();
    let center = box_center(&all);

    let jets = [
        JetTarget {
            points: &ws.k.points,
            values: &ws.h,
        },
        JetTarget {
            points: &inner.points,
            values: &inner_values,
        },
    ];
    let value_fit = || {
        let on_k = TargetPair::new(ws.k.clone(), ws.h[0].clone())?;
        let on_inner = TargetPair::new(inner.clone(), inner_values[0].clone())?;
        let targets = [on_k, on_inner];
        fit_ramp_with(&targets, bound, opts.max_fit_degree, center, |poly| {
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
        })
    };
    // Candidates in order of preference, with the levels each must meet.
    let mut attempts: Vec<(&str, usize)> = Vec::new();
    if levels > 0 {
        attempts.push(("joint fit of every derivative level", levels));
        attempts.push(("joint fit judged on values only", 0));
    }
    attempts.push(("value-only fit", 0));

    let mut notes = Vec::new();
    let mut outcome = None;
    for (i, &(name, enforced)) in attempts.iter().enumerate() {
        let fit = if name == "value-only fit" {
            value_fit()
        } else {
            jet_fit_ramp(&jets, bound, opts.max_fit_degree, center, enforced)
        };
        let attempt = fit.and_then(|fit| search_perturbation(&fit, &ws, f, enforced, opts).map(|found| (fit, found)));
        match attempt {
            Ok(pair) => {
                outcome = Some(pair);
                break;
            }
            Err(e @ (Error::FitFailed { .. } | Error::PerturbationFailed { .. } | Error::IndexExhausted { .. }))
                if i + 1 < attempts.len() =>
            {
                notes.push(format!("{name} abandoned: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    let (fit, found) = outcome.expect("the last attempt either succeeds or returns");

    let m = measure(&found.u, found.pq, &ws, levels, tol, false)?;
    let mut cert = certificate_from(m, &found.u, found.pq, &ws);
    cert.index_position = found.position;
    cert.fit_degree = fit.degree;
    cert.fit_residual = fit.max_residual();
    cert.d_window = found.window;
    notes.extend(found.notes);
    notes.append(&mut cert.notes);
    cert.notes = notes;
    Ok(UniversalBuild {
        u: found.u,
        fit,
        certificate: cert,
    })
}

/// Largest `|[u; p/q]_zeta(z) - u(z)|` over `samples` random pairs, with
/// `zeta` on chords between points of the `L` grid (kept only when inside
/// `L`) and `z` drawn from the grids of `targets`.
pub fn reproduction_spot_check<R: Rng>(
    u: &Polynomial,
    l: &CompactSpec,
    targets: &[&CompactSpec],
    (p, q): (usize, usize),
    samples: usize,
    rng: &mut R,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let centers = discretize(l)?;
    let mut points = Vec::new();
    for spec in targets {
        points.extend(discretize(spec)?.points);
    }
    if points.is_empty() {
        return Err(Error::EmptySpec);
    }
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = centers.points[rng.random_range(0..centers.len())];
        let b = centers.points[rng.random_range(0..centers.len())];
        let chord = a + (b - a) * rng.random::<f64>();
        let zeta = if l.contains(chord) { chord } else { a };
        let z = points[rng.random_range(0..points.len())];
        let data = center_data(u, zeta, p, q, tol).map_err(|e| e.at(zeta))?;
        let r = data.pade.ok_or(Error::PadeNotExist {
            p,
            q,
            center: zeta,
            value: data.report.value,
            threshold: data.report.threshold,
        })?;
        worst = worst.max((r.eval(z, tol)? - u.eval(z)).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::c;

    fn desk(levels: usize) -> (RequirementSpec, TargetDescriptor, CompactSpec) {
        let req = RequirementSpec {
            k: CompactSpec::segment(c(2.0, 0.0), c(3.0, 0.0), 64).unwrap(),
            target: TargetDescriptor::polynomial(&Polynomial::monomial(c(0.0, 0.0), 2, c(1.0, 0.0))),
            l: CompactSpec::filled_disk(c(0.0, 0.0), 0.4, 16).unwrap(),
            s: 50,
            derivative_levels: levels,
        };
        let f = TargetDescriptor::rational(c(0.0, 0.0), vec![c(1.0, 0.0)], vec![c(2.0, 0.0), c(-1.0, 0.0)]);
        let j = CompactSpec::filled_disk(c(0.0, 0.0), 0.6, 32).unwrap();
        (req, f, j)
    }

    #[test]
    fn desk_scenario_passes() {
        let (req, f, j) = desk(0);
        let build =
            build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(40, 3), &BuildOptions::default()).unwrap();
        let cert = &build.certificate;
        assert!(cert.passed, "{cert:#?}");
        assert!(cert.achieved.values().all(|&v| v < 0.02));
        assert_ne!(cert.d, Complex::default());
    }

    #[test]
    fn zero_override_never_passes() {
        let (req, f, j) = desk(0);
        let opts = BuildOptions {
            d_override: Some(Complex::default()),
            ..BuildOptions::default()
        };
        let build = build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(40, 3), &opts).unwrap();
        assert!(!build.certificate.passed);
    }

    #[test]
    fn short_index_sequence_is_exhausted() {
        let (req, f, j) = desk(0);
        let err = build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(3, 3), &BuildOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::IndexExhausted { .. }), "{err}");
    }

    #[test]
    fn overlap_is_rejected() {
        let (mut req, f, j) = desk(0);
        req.l = CompactSpec::filled_disk(c(2.5, 0.0), 0.2, 16).unwrap();
        let err = build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(40, 3), &BuildOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::Overlap { .. }));
    }

    #[test]
    fn reverification_is_identical() {
        let (req, f, j) = desk(1);
        let build =
            build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(40, 3), &BuildOptions::default()).unwrap();
        let again = verify_conclusions(
            &build.u,
            &req,
            build.certificate.selected,
            &j,
            &f,
            1,
            &ToleranceConfig::default(),
        )
        .unwrap();
        assert!(again.measurements_match(&build.certificate, 0.0));
    }

    #[test]
    fn second_derivatives_stay_near_the_target() {
        let (req, f, j) = desk(2);
        let build =
            build_universal_polynomial(&req, &f, &j, &IndexSequence::modular(40, 3), &BuildOptions::default()).unwrap();
        let cert = &build.certificate;
        // |h'| <= 6 and |h''| = 2 on K.
        for (l, scale) in [(1, 6.0), (2, 2.0)] {
            for n in [2, 3] {
                let v = cert.achieved[&label(n, l)];
                assert!(v.is_finite() && v < 10.0 * scale / 50.0, "{} = {v}", label(n, l));
            }
        }
    }

    #[test]
    fn initial_d_covers_derivatives() {
        let (req, f, j) = desk(2);
        let ws = Workspace::new(&req, &f, &j, 2, &ToleranceConfig::default()).unwrap();
        // sup over K of |(z^4)''| = 12 * 9.
        assert!((initial_d(&ws, 4) - 1.0 / (100.0 * 108.0)).abs() < 1e-15);
        let ws = Workspace::new(&req, &f, &j, 0, &ToleranceConfig::default()).unwrap();
        assert!((initial_d(&ws, 4) - 1.0 / (100.0 * 81.0)).abs() < 1e-15);
    }
}
