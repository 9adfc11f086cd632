//! Compact sets and domains in the plane: declarative specs, deterministic
//! discretization, sup norms over grids, and the exhausting / outer compact
//! families the constructions run on.
//!
//! A sup over a compact set is always a max over the grid produced by
//! [`discretize`]; acceptance margins account for the difference.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{c, ensure_finite, Complex};

pub const DEFAULT_SAMPLES: usize = 64;
pub const MIN_SAMPLES: usize = 8;

/// Slack used for point-membership tests on region boundaries.
pub(crate) const MEMBERSHIP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    FilledDisk {
        center: Complex,
        radius: f64,
    },
    Circle {
        center: Complex,
        radius: f64,
    },
    Segment {
        a: Complex,
        b: Complex,
    },
    /// `{center + r e^{it} : r_in <= r <= r_out, theta_a <= t <= theta_b}`.
    AnnulusSector {
        center: Complex,
        r_in: f64,
        r_out: f64,
        theta_a: f64,
        theta_b: f64,
    },
    PointSet {
        points: Vec<Complex>,
    },
}

impl Primitive {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        match self {
            Primitive::FilledDisk { center, radius } | Primitive::Circle { center, radius } => {
                ensure_finite(&[*center], "primitive center")?;
                if !(radius.is_finite() && *radius >= 0.0) {
                    return bad("radius must be finite and non-negative");
                }
            }
            Primitive::Segment { a, b } => ensure_finite(&[*a, *b], "segment endpoints")?,
            Primitive::AnnulusSector {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            } => {
                ensure_finite(&[*center], "sector center")?;
                if !(r_in.is_finite() && r_out.is_finite() && *r_in >= 0.0 && r_in <= r_out) {
                    return bad("annulus sector needs 0 <= r_in <= r_out");
                }
                if !(theta_a.is_finite() && theta_b.is_finite() && theta_a <= theta_b) {
                    return bad("annulus sector needs theta_a <= theta_b");
                }
            }
            Primitive::PointSet { points } => {
                ensure_finite(points, "point set")?;
                if points.is_empty() {
                    return bad("point set is empty");
                }
            }
        }
        Ok(())
    }

    /// Euclidean distance from `z` to the primitive (0 inside).
    pub fn distance(&self, z: Complex) -> f64 {
        match self {
            Primitive::FilledDisk { center, radius } => ((z - center).norm() - radius).max(0.0),
            Primitive::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Primitive::Segment { a, b } => segment_distance(z, *a, *b),
            Primitive::AnnulusSector {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            } => sector_distance(z, *center, *r_in, *r_out, *theta_a, *theta_b),
            Primitive::PointSet { points } => points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min),
        }
    }

    fn sample(&self, n: usize) -> Vec<Complex> {
        match self {
            Primitive::Segment { a, b } => (0..n).map(|i| a + (b - a) * (i as f64 / (n - 1) as f64)).collect(),
            Primitive::Circle { center, radius } => (0..n)
                .map(|i| center + Complex::from_polar(*radius, TAU * i as f64 / n as f64))
                .collect(),
            Primitive::FilledDisk { center, radius } => filled_disk_points(*center, *radius, n),
            Primitive::AnnulusSector {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            } => sector_points(*center, *r_in, *r_out, *theta_a, *theta_b, n),
            Primitive::PointSet { points } => points.clone(),
        }
    }

    /// Largest `|z|` over the primitive.
    fn max_modulus(&self) -> f64 {
        match self {
            Primitive::FilledDisk { center, radius } | Primitive::Circle { center, radius } => center.norm() + radius,
            Primitive::Segment { a, b } => a.norm().max(b.norm()),
            Primitive::AnnulusSector { center, r_out, .. } => center.norm() + r_out,
            Primitive::PointSet { points } => points.iter().map(|p| p.norm()).fold(0.0, f64::max),
        }
    }
}

fn segment_distance(z: Complex, a: Complex, b: Complex) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

fn angle_in(theta: f64, lo: f64, hi: f64) -> bool {
    if hi - lo >= TAU {
        return true;
    }
    let t = lo + (theta - lo).rem_euclid(TAU);
    t <= hi + MEMBERSHIP_SLACK
}

fn sector_distance(z: Complex, center: Complex, r_in: f64, r_out: f64, lo: f64, hi: f64) -> f64 {
    let w = z - center;
    let r = w.norm();
    if r == 0.0 || angle_in(w.arg(), lo, hi) {
        if r < r_in {
            return r_in - r;
        }
        return (r - r_out).max(0.0);
    }
    let edge = |t: f64| {
        let dir = Complex::from_polar(1.0, t);
        segment_distance(z, center + dir * r_in, center + dir * r_out)
    };
    edge(lo).min(edge(hi))
}

fn filled_disk_points(center: Complex, radius: f64, n: usize) -> Vec<Complex> {
    let rings = ((n as f64).sqrt() / 3.0).round().max(1.0) as usize;
    let available = n - 1;
    // Sups of holomorphic functions sit on the boundary ring, so it gets
    // three quarters of the points; inner rings share the rest by radius.
    let outer = if rings == 1 { available } else { 3 * available / 4 };
    let inner_total = available - outer;
    let weight_total = (rings * (rings - 1) / 2).max(1);
    let mut points = vec![center];
    let mut used = 0;
    for j in 1..=rings {
        let count = if j == rings {
            available - used
        } else {
            inner_total * j / weight_total
        };
        used += count;
        let r = radius * j as f64 / rings as f64;
        // stagger successive rings by half a step
        let offset = if j % 2 == 0 { 0.5 } else { 0.0 };
        points.extend((0..count).map(|i| center + Complex::from_polar(r, TAU * (i as f64 + offset) / count as f64)));
    }
    points
}

fn sector_points(center: Complex, r_in: f64, r_out: f64, lo: f64, hi: f64, n: usize) -> Vec<Complex> {
    let full = hi - lo >= TAU;
    let span = if full { TAU } else { hi - lo };
    let at = |r: f64, t: f64| center + Complex::from_polar(r, t);
    let arc = |r: f64, count: usize, from: f64, to: f64| -> Vec<Complex> {
        (0..count)
            .map(|i| {
                let s = if full {
                    i as f64 / count as f64
                } else {
                    i as f64 / count.max(1) as f64
                };
                at(r, from + (to - from) * s)
            })
            .collect()
    };
    if r_out <= r_in {
        // A bare arc: closed circle, or both end points included.
        return if full {
            arc(r_out, n, lo, lo + TAU)
        } else {
            (0..n)
                .map(|i| at(r_out, lo + span * i as f64 / (n - 1) as f64))
                .collect()
        };
    }

    // Three quarters of the points go on the boundary, split by length.
    // Each piece starts at its own corner, so every corner is sampled.
    let boundary = 3 * n / 4;
    let width = r_out - r_in;
    let mut pieces: Vec<(f64, Box<dyn Fn(usize) -> Vec<Complex>>)> = Vec::new();
    if full {
        pieces.push((r_out * TAU, Box::new(move |k| arc(r_out, k, lo, lo + TAU))));
        if r_in > 0.0 {
            pieces.push((r_in * TAU, Box::new(move |k| arc(r_in, k, lo, lo + TAU))));
        }
    } else {
        let edge = move |t: f64, from: f64, to: f64| {
            move |k: usize| {
                (0..k)
                    .map(|i| at(from + (to - from) * i as f64 / k as f64, t))
                    .collect::<Vec<_>>()
            }
        };
        pieces.push((r_out * span, Box::new(move |k| arc(r_out, k, lo, hi))));
        pieces.push((width, Box::new(edge(hi, r_out, r_in))));
        if r_in > 0.0 {
            pieces.push((r_in * span, Box::new(move |k| arc(r_in, k, hi, lo))));
        }
        pieces.push((width, Box::new(edge(lo, r_in, r_out))));
    }
    let perimeter: f64 = pieces.iter().map(|(len, _)| len).sum();
    let mut points = Vec::with_capacity(n);
    let mut left = boundary;
    let last = pieces.len() - 1;
    for (i, (len, sample)) in pieces.iter().enumerate() {
        let count = if i == last {
            left
        } else {
            ((boundary as f64 * len / perimeter).round() as usize).clamp(1, left)
        };
        left -= count;
        points.extend(sample(count));
    }

    // The rest fill interior rings, staying off the edges.
    let interior = n - points.len();
    let rings = ((interior as f64).sqrt() / 2.0).round().max(1.0) as usize;
    let radii: Vec<f64> = (1..=rings)
        .map(|j| r_in + width * j as f64 / (rings + 1) as f64)
        .collect();
    let total: f64 = radii.iter().sum();
    let mut left = interior;
    for (j, &r) in radii.iter().enumerate() {
        let count = if j == rings - 1 {
            left
        } else {
            ((interior as f64 * r / total).round() as usize).min(left)
        };
        left -= count;
        points.extend((0..count).map(|i| at(r, lo + span * (i as f64 + 0.5) / count as f64)));
    }
    points
}

/// A finite union of primitives with a per-primitive sample count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CompactRepr")]
pub struct CompactSpec {
    pub primitives: Vec<Primitive>,
    pub samples_per_primitive: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CompactRepr {
    Full {
        primitives: Vec<Primitive>,
        #[serde(alias = "samples")]
        samples_per_primitive: Option<usize>,
    },
    Single(Primitive),
}

impl TryFrom<CompactRepr> for CompactSpec {
    type Error = Error;

    fn try_from(r: CompactRepr) -> Result<Self> {
        match r {
            CompactRepr::Full {
                primitives,
                samples_per_primitive,
            } => CompactSpec::new(primitives, samples_per_primitive.unwrap_or(DEFAULT_SAMPLES)),
            CompactRepr::Single(p) => CompactSpec::new(vec![p], DEFAULT_SAMPLES),
        }
    }
}

impl CompactSpec {
    pub fn new(primitives: Vec<Primitive>, samples_per_primitive: usize) -> Result<Self> {
        if samples_per_primitive < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "samples_per_primitive must be at least {MIN_SAMPLES}"
            )));
        }
        for p in &primitives {
            p.validate()?;
        }
        Ok(Self {
            primitives,
            samples_per_primitive,
        })
    }

    pub fn single(primitive: Primitive, samples: usize) -> Result<Self> {
        Self::new(vec![primitive], samples)
    }

    pub fn filled_disk(center: Complex, radius: f64, samples: usize) -> Result<Self> {
        Self::single(Primitive::FilledDisk { center, radius }, samples)
    }

    pub fn circle(center: Complex, radius: f64, samples: usize) -> Result<Self> {
        Self::single(Primitive::Circle { center, radius }, samples)
    }

    pub fn segment(a: Complex, b: Complex, samples: usize) -> Result<Self> {
        Self::single(Primitive::Segment { a, b }, samples)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        self.samples_per_primitive = samples;
        Self::new(self.primitives, samples)
    }

    pub fn union(mut self, other: CompactSpec) -> Self {
        self.primitives.extend(other.primitives);
        self
    }

    pub fn distance(&self, z: Complex) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.distance(z) <= MEMBERSHIP_SLACK
    }

    pub fn max_modulus(&self) -> f64 {
        self.primitives.iter().map(Primitive::max_modulus).fold(0.0, f64::max)
    }
}

/// Finite sample of a compact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub points: Vec<Complex>,
    pub source: CompactSpec,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest distance between a point of `self` and a point of `other`.
    pub fn min_distance(&self, other: &Grid) -> f64 {
        self.points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn concat(&self, other: &Grid) -> Grid {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        Grid {
            points,
            source: self.source.clone().union(other.source.clone()),
        }
    }
}

pub fn discretize(spec: &CompactSpec) -> Result<Grid> {
    if spec.primitives.is_empty() {
        return Err(Error::EmptySpec);
    }
    let points = spec
        .primitives
        .iter()
        .flat_map(|p| p.sample(spec.samples_per_primitive))
        .collect();
    Ok(Grid {
        points,
        source: spec.clone(),
    })
}

/// Max of `|g|` over the grid together with the maximizing point.
pub fn sup_norm_arg<G>(g: G, grid: &Grid) -> Result<(f64, Complex)>
where
    G: Fn(Complex) -> Result<Complex>,
{
    let mut best = (-1.0, grid.points[0]);
    for &z in &grid.points {
        let v = g(z).map_err(|e| e.at(z))?.norm();
        if !v.is_finite() {
            return Err(Error::NonFinite("evaluator output").at(z));
        }
        if v > best.0 {
            best = (v, z);
        }
    }
    Ok(best)
}

pub fn sup_norm<G>(g: G, grid: &Grid) -> Result<f64>
where
    G: Fn(Complex) -> Result<Complex>,
{
    sup_norm_arg(g, grid).map(|(v, _)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleSup {
    pub value: f64,
    pub zeta: Complex,
    pub z: Complex,
}

/// `max_{zeta in L} max_{z in K} |h(zeta, z)|`.
pub fn double_sup<H>(h: H, l_grid: &Grid, k_grid: &Grid) -> Result<DoubleSup>
where
    H: Fn(Complex, Complex) -> Result<Complex>,
{
    double_sup_staged(l_grid, k_grid, |zeta| {
        let h = &h;
        Ok(move |z| h(zeta, z))
    })
}

/// As [`double_sup`], with a per-`zeta` preparation step (for example one
/// Padé construction per center) reused across all `z`.
pub fn double_sup_staged<P, G>(l_grid: &Grid, k_grid: &Grid, prepare: P) -> Result<DoubleSup>
where
    P: Fn(Complex) -> Result<G>,
    G: Fn(Complex) -> Result<Complex>,
{
    let mut best = DoubleSup {
        value: -1.0,
        zeta: l_grid.points[0],
        z: k_grid.points[0],
    };
    for &zeta in &l_grid.points {
        let g = prepare(zeta).map_err(|e| e.at(zeta))?;
        let (v, z) = sup_norm_arg(g, k_grid)?;
        if v > best.value {
            best = DoubleSup { value: v, zeta, z };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub center: Complex,
    pub radius: f64,
}

/// An open set `Omega`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Disk {
        center: Complex,
        radius: f64,
    },
    /// `{z : Re(z conj(n)) < offset}` with `n` normalized.
    HalfPlane {
        normal: Complex,
        offset: f64,
    },
    /// The plane minus a closed annulus sector.
    AnnulusComplement {
        center: Complex,
        r_in: f64,
        r_out: f64,
        theta_a: f64,
        theta_b: f64,
    },
    /// Union of open disks.
    CustomUnion {
        disks: Vec<DiskSpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// Compacts inside `Omega` at distance `1/k` from the boundary.
    Interior,
    /// `closure(Omega) ∩ closed-ball(0, k)`.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuterMode {
    /// In the complement of `Omega`, touching the boundary allowed.
    OffOmega,
    /// At distance at least `1/m` from the closure.
    OffClosure,
}

impl DomainSpec {
    pub fn unit_disk() -> Self {
        DomainSpec::Disk {
            center: Complex::default(),
            radius: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            DomainSpec::Disk { center, radius } => center.is_finite() && radius.is_finite() && *radius > 0.0,
            DomainSpec::HalfPlane { normal, offset } => normal.is_finite() && normal.norm() > 0.0 && offset.is_finite(),
            DomainSpec::AnnulusComplement {
                r_in,
                r_out,
                theta_a,
                theta_b,
                ..
            } => *r_in >= 0.0 && r_in <= r_out && theta_a <= theta_b && r_out.is_finite(),
            DomainSpec::CustomUnion { disks } => {
                !disks.is_empty() && disks.iter().all(|d| d.radius > 0.0 && d.center.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "domain has empty interior or invalid parameters".into(),
            ))
        }
    }

    fn unit_normal(normal: Complex) -> Complex {
        normal / normal.norm()
    }

    fn removed_sector(&self) -> Option<Primitive> {
        match *self {
            DomainSpec::AnnulusComplement {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            } => Some(Primitive::AnnulusSector {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            }),
            _ => None,
        }
    }

    /// Signed distance to the boundary: negative inside `Omega`, positive
    /// outside its closure. Exact for disks and half-planes, and for a union
    /// of disks outside the union; inside a union it is the distance to the
    /// sampled exposed boundary.
    pub fn signed_distance(&self, z: Complex) -> f64 {
        match self {
            DomainSpec::Disk { center, radius } => (z - center).norm() - radius,
            DomainSpec::HalfPlane { normal, offset } => (z * Self::unit_normal(*normal).conj()).re - offset,
            DomainSpec::AnnulusComplement { .. } => {
                let sector = self.removed_sector().expect("annulus complement");
                let outside = sector.distance(z);
                if outside > 0.0 {
                    -outside
                } else {
                    sector_depth(&sector, z)
                }
            }
            DomainSpec::CustomUnion { disks } => {
                let outside = disks
                    .iter()
                    .map(|d| (z - d.center).norm() - d.radius)
                    .fold(f64::INFINITY, f64::min);
                if outside >= 0.0 {
                    outside
                } else {
                    -self
                        .exposed_boundary(720)
                        .iter()
                        .map(|b| (z - b).norm())
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.signed_distance(z) < 0.0
    }

    pub fn closure_contains(&self, z: Complex) -> bool {
        self.signed_distance(z) <= MEMBERSHIP_SLACK
    }

    /// Distance from `z` to `Omega` (zero on the closure).
    pub fn distance_to(&self, z: Complex) -> f64 {
        self.signed_distance(z).max(0.0)
    }

    fn exposed_boundary(&self, per_circle: usize) -> Vec<Complex> {
        match self {
            DomainSpec::CustomUnion { disks } => disks
                .iter()
                .flat_map(|d| {
                    (0..per_circle)
                        .map(move |i| d.center + Complex::from_polar(d.radius, TAU * i as f64 / per_circle as f64))
                })
                .filter(|b| {
                    disks
                        .iter()
                        .all(|d| (b - d.center).norm() >= d.radius - MEMBERSHIP_SLACK)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Points of the boundary inside `closed-ball(0, k)`.
    fn boundary_points(&self, k: f64, n: usize) -> Vec<Complex> {
        let candidates: Vec<Complex> = match self {
            DomainSpec::Disk { center, radius } => (0..n)
                .map(|i| center + Complex::from_polar(*radius, TAU * i as f64 / n as f64))
                .collect(),
            DomainSpec::HalfPlane { normal, offset } => {
                let nu = Self::unit_normal(*normal);
                let base = nu * *offset;
                let along = nu * c(0.0, 1.0);
                (0..n)
                    .map(|i| base + along * (k * (2.0 * i as f64 / (n - 1) as f64 - 1.0)))
                    .collect()
            }
            DomainSpec::AnnulusComplement {
                center,
                r_in,
                r_out,
                theta_a,
                theta_b,
            } => {
                let quarter = (n / 4).max(2);
                let mut pts = sector_points(*center, *r_out, *r_out, *theta_a, *theta_b, quarter);
                if *r_in > 0.0 {
                    pts.extend(sector_points(*center, *r_in, *r_in, *theta_a, *theta_b, quarter));
                }
                for t in [*theta_a, *theta_b] {
                    let dir = Complex::from_polar(1.0, t);
                    pts.extend(
                        (0..quarter).map(|i| center + dir * (r_in + (r_out - r_in) * i as f64 / (quarter - 1) as f64)),
                    );
                }
                pts
            }
            DomainSpec::CustomUnion { .. } => self.exposed_boundary(n),
        };
        candidates
            .into_iter()
            .filter(|z| z.norm() <= k + MEMBERSHIP_SLACK)
            .collect()
    }

    /// Whether `z` lies in the `k`-th exhausting set.
    pub fn in_exhaustion(&self, z: Complex, k: usize, mode: FamilyMode) -> bool {
        let kf = k as f64;
        if z.norm() > kf + MEMBERSHIP_SLACK {
            return false;
        }
        match mode {
            FamilyMode::Interior => self.signed_distance(z) <= -1.0 / kf + MEMBERSHIP_SLACK,
            FamilyMode::Boundary => self.closure_contains(z),
        }
    }
}

fn sector_depth(sector: &Primitive, z: Complex) -> f64 {
    let Primitive::AnnulusSector {
        center,
        r_in,
        r_out,
        theta_a,
        theta_b,
    } = *sector
    else {
        unreachable!()
    };
    let w = z - center;
    let r = w.norm();
    let mut depth = (r - r_in).min(r_out - r);
    if theta_b - theta_a < TAU {
        let t = theta_a + (w.arg() - theta_a).rem_euclid(TAU);
        for edge in [t - theta_a, theta_b - t] {
            let d = if edge >= PI / 2.0 { r } else { r * edge.sin() };
            depth = depth.min(d);
        }
    }
    depth.max(0.0)
}

/// Union of small filled disks, each contained in `{z : member(z, rho)}`.
fn lattice_cover<F>(extent: f64, member: F) -> Option<Vec<Primitive>>
where
    F: Fn(Complex, f64) -> bool,
{
    for cells in [12usize, 24, 48] {
        let h = 2.0 * extent / cells as f64;
        let rho = 0.75 * h;
        let disks: Vec<Primitive> = (0..=cells)
            .flat_map(|i| (0..=cells).map(move |j| (i, j)))
            .map(|(i, j)| c(-extent + i as f64 * h, -extent + j as f64 * h))
            .filter(|&z| member(z, rho))
            .map(|center| Primitive::FilledDisk { center, radius: rho })
            .collect();
        if !disks.is_empty() {
            return Some(disks);
        }
    }
    None
}

/// The `k`-th member of an increasing family of compacts filling `Omega`
/// (interior mode) or its closure (boundary mode).
pub fn exhausting_family(omega: &DomainSpec, k: usize, mode: FamilyMode, samples: usize) -> Result<CompactSpec> {
    omega.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("family index starts at 1".into()));
    }
    let kf = k as f64;
    if let DomainSpec::Disk { center, radius } = *omega {
        let r = match mode {
            FamilyMode::Interior => radius - 1.0 / kf,
            FamilyMode::Boundary => radius,
        };
        if r <= 0.0 {
            return Err(Error::EmptyResult(format!(
                "disk of radius {radius} shrunk by 1/{k} is empty"
            )));
        }
        if center.norm() + r <= kf {
            return CompactSpec::filled_disk(center, r, samples);
        }
    }
    let depth = match mode {
        FamilyMode::Interior => 1.0 / kf,
        FamilyMode::Boundary => 0.0,
    };
    let disks = lattice_cover(kf, |z, rho| {
        z.norm() <= kf - rho && omega.signed_distance(z) <= -(depth + rho)
    });
    let mut primitives = disks.unwrap_or_default();
    if mode == FamilyMode::Boundary {
        let boundary = omega.boundary_points(kf, 4 * samples);
        if !boundary.is_empty() {
            primitives.push(Primitive::PointSet { points: boundary });
        }
    }
    if primitives.is_empty() {
        return Err(Error::EmptyResult(format!("exhausting set {k} is empty")));
    }
    CompactSpec::new(primitives, samples)
}

/// The `m`-th compact (a segment, connected complement) in the complement
/// of `Omega` or of its closure. Placement per domain kind:
/// disk and union of disks to the right of the rightmost point, half-plane
/// along the outward normal, annulus complement radially inside the removed
/// sector at its mid angle.
pub fn outer_family(omega: &DomainSpec, m: usize, mode: OuterMode, samples: usize) -> Result<CompactSpec> {
    omega.validate()?;
    if m == 0 {
        return Err(Error::InvalidArgument("family index starts at 1".into()));
    }
    let mf = m as f64;
    let gap = match mode {
        OuterMode::OffOmega => 0.0,
        OuterMode::OffClosure => 1.0 / mf,
    };
    let (a, b) = match omega {
        DomainSpec::Disk { center, radius } => (center + (radius + gap), center + (radius + gap + mf)),
        DomainSpec::HalfPlane { normal, offset } => {
            let nu = DomainSpec::unit_normal(*normal);
            (nu * (offset + gap), nu * (offset + gap + mf))
        }
        DomainSpec::AnnulusComplement {
            center,
            r_in,
            r_out,
            theta_a,
            theta_b,
        } => {
            let mid = 0.5 * (theta_a + theta_b);
            let half = 0.5 * (theta_b - theta_a);
            let (lo, hi) = (r_in + gap, r_out - gap);
            let clearance = if half >= PI / 2.0 {
                f64::INFINITY
            } else {
                lo * half.sin()
            };
            if lo > hi || clearance < gap {
                return Err(Error::EmptyResult(format!(
                    "removed sector too thin for a compact at distance 1/{m}"
                )));
            }
            let dir = Complex::from_polar(1.0, mid);
            (center + dir * lo, center + dir * hi)
        }
        DomainSpec::CustomUnion { disks } => {
            let right = disks
                .iter()
                .max_by(|x, y| (x.center.re + x.radius).total_cmp(&(y.center.re + y.radius)))
                .expect("validated non-empty");
            let x = right.center.re + right.radius + gap;
            (c(x, right.center.im), c(x + mf, right.center.im))
        }
    };
    CompactSpec::segment(a, b, samples)
}

/// Split-boundary preset on the unit disk: `L_n` fills the upper half of the
/// closed disk (touching the upper arc) and grows with `n`; `K` is an
/// annulus sector outside the disk below the real axis.
pub fn split_boundary_preset(n: usize, samples: usize) -> Result<(CompactSpec, CompactSpec)> {
    if n == 0 {
        return Err(Error::InvalidArgument("family index starts at 1".into()));
    }
    let margin = PI / (4.0 * n as f64);
    let l = CompactSpec::single(
        Primitive::AnnulusSector {
            center: Complex::default(),
            r_in: 0.0,
            r_out: 1.0,
            theta_a: margin,
            theta_b: PI - margin,
        },
        samples,
    )?;
    let k = CompactSpec::single(
        Primitive::AnnulusSector {
            center: Complex::default(),
            r_in: 1.25,
            r_out: 1.5,
            theta_a: -0.75 * PI,
            theta_b: -0.25 * PI,
        },
        samples,
    )?;
    Ok((l, k))
}
