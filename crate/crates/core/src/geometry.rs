//! Planar domains with exact membership, recession cones of half-plane
//! intersections, and the support/distance queries used for closed-form
//! sup-norms.
//!
//! Convex domains are finite intersections of open half-planes
//! `<z, n_i> < c_i` with unit normals. For such a set the recession cone is
//! `{h : <h, n_i> <= 0 for all i}`, an intersection of closed half-circles
//! of directions, so it is empty, a single direction, an antipodal pair
//! (strips), or an arc of width at most 180 degrees.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for accepting pairwise line intersections as polygon vertices.
pub const VERTEX_TOL: f64 = 1e-9;
/// Number of sides of the regular polygon used to approximate discs.
pub const CLIP_SIDES: usize = 64;

const CONE_TOL: f64 = 1e-12;

#[inline]
pub fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

#[inline]
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Open half-plane `<z, normal> < offset` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Complex64,
    pub offset: f64,
}

impl HalfPlane {
    /// Normalises `normal` (and scales `offset` accordingly).
    pub fn new(normal: Complex64, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if !normal.is_finite() || !offset.is_finite() {
            return Err(Error::BadParameter("half-plane data must be finite".into()));
        }
        if len == 0.0 {
            return Err(Error::BadParameter("half-plane normal must be non-zero".into()));
        }
        Ok(Self {
            normal: normal / len,
            offset: offset / len,
        })
    }

    /// Signed distance to the boundary line, positive inside.
    #[inline]
    pub fn slack(&self, z: Complex64) -> f64 {
        self.offset - dot(z, self.normal)
    }

    fn intersect_lines(&self, other: &HalfPlane) -> Option<Complex64> {
        let (a, b) = (self.normal, other.normal);
        let det = cross(a, b);
        if det.abs() < 1e-12 {
            return None;
        }
        let x = (self.offset * b.im - other.offset * a.im) / det;
        let y = (a.re * other.offset - b.re * self.offset) / det;
        Some(Complex64::new(x, y))
    }
}

/// Clip a convex polygon (vertex list) by the closed half-plane.
fn clip_polygon(poly: &[Complex64], hp: &HalfPlane) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (hp.slack(cur), hp.slack(next));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc >= 0.0) != (sn >= 0.0) {
            let t = sc / (sc - sn);
            out.push(cur + (next - cur) * t);
        }
    }
    out
}

fn polygon_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| cross(poly[i], poly[(i + 1) % n]))
        .sum::<f64>()
}

/// Intersection of finitely many open half-planes with a certified interior point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoly {
    constraints: Vec<HalfPlane>,
    witness: Complex64,
    /// Set when this polygon is `Ω ∩ (inscribed 64-gon of D(0, m))`.
    clip_radius: Option<f64>,
}

impl HPoly {
    pub fn new(constraints: Vec<HalfPlane>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::BadParameter("need at least one constraint".into()));
        }
        let witness = find_interior_point(&constraints).ok_or(Error::EmptyInterior)?;
        Ok(Self {
            constraints,
            witness,
            clip_radius: None,
        })
    }

    /// Build from `(normal, offset)` pairs, normalising each.
    pub fn from_pairs(pairs: &[(Complex64, f64)]) -> Result<Self> {
        let constraints = pairs
            .iter()
            .map(|(n, c)| HalfPlane::new(*n, *c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(constraints)
    }

    pub fn constraints(&self) -> &[HalfPlane] {
        &self.constraints
    }

    /// A point strictly inside every constraint.
    pub fn witness(&self) -> Complex64 {
        self.witness
    }

    pub fn clip_radius(&self) -> Option<f64> {
        self.clip_radius
    }

    /// `min_i (c_i - <z, n_i>)`: the distance to the boundary for interior points.
    pub fn slack(&self, z: Complex64) -> f64 {
        self.constraints
            .iter()
            .map(|h| h.slack(z))
            .fold(f64::INFINITY, f64::min)
    }

    fn tightest(&self, z: Complex64) -> &HalfPlane {
        self.constraints
            .iter()
            .min_by(|a, b| a.slack(z).total_cmp(&b.slack(z)))
            .expect("non-empty constraint list")
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.constraints.iter().all(|h| dot(z, h.normal) < h.offset)
    }

    fn closure_contains(&self, z: Complex64, tol: f64) -> bool {
        self.constraints.iter().all(|h| h.slack(z) >= -tol)
    }

    /// Pairwise constraint-line intersections satisfying every other
    /// constraint within [`VERTEX_TOL`], deduplicated.
    pub fn vertices(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        let cs = &self.constraints;
        for i in 0..cs.len() {
            for j in (i + 1)..cs.len() {
                if let Some(v) = cs[i].intersect_lines(&cs[j]) {
                    if self.closure_contains(v, VERTEX_TOL)
                        && !out.iter().any(|w| (w - v).norm() <= VERTEX_TOL)
                    {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// Ordered boundary polygon for bounded sets, `None` when unbounded.
    pub fn polygon(&self) -> Option<Vec<Complex64>> {
        let mut half_width = 1.0_f64;
        while half_width <= 1e12 {
            let boxed = clipped_to_box(&self.constraints, self.witness, half_width);
            let touches = boxed.iter().any(|v| {
                ((v.re - self.witness.re).abs() - half_width).abs() < 1e-9 * half_width
                    || ((v.im - self.witness.im).abs() - half_width).abs() < 1e-9 * half_width
            });
            if !boxed.is_empty() && !touches {
                return Some(boxed);
            }
            half_width *= 10.0;
        }
        None
    }

    pub fn recession_cone(&self) -> RecessionCone {
        recession_cone_of(&self.constraints)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.recession_cone(), RecessionCone::Empty)
    }
}

fn clipped_to_box(constraints: &[HalfPlane], center: Complex64, half_width: f64) -> Vec<Complex64> {
    let b = half_width;
    let mut poly = vec![
        center + Complex64::new(-b, -b),
        center + Complex64::new(b, -b),
        center + Complex64::new(b, b),
        center + Complex64::new(-b, b),
    ];
    for h in constraints {
        poly = clip_polygon(&poly, h);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

/// Vertex average of the constraint set clipped to growing boxes around the
/// origin; the first non-degenerate clip gives an interior point near 0.
fn find_interior_point(constraints: &[HalfPlane]) -> Option<Complex64> {
    let origin = Complex64::new(0.0, 0.0);
    let mut half_width = 1.0_f64;
    while half_width <= 1e12 {
        let poly = clipped_to_box(constraints, origin, half_width);
        if poly.len() >= 3 && polygon_area(&poly) > 1e-12 * half_width * half_width {
            let centroid = poly.iter().sum::<Complex64>() / poly.len() as f64;
            if constraints.iter().all(|h| h.slack(centroid) > 0.0) {
                return Some(centroid);
            }
        }
        half_width *= 10.0;
    }
    None
}

/// Set of unit recession directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RecessionCone {
    Empty,
    /// Exactly one direction (half-strips).
    Single { direction: Complex64 },
    /// `±direction` (strips).
    AntipodalPair { direction: Complex64 },
    /// Counter-clockwise arc from `start` to `end` (radians, `end > start`).
    Arc { start: f64, end: f64 },
    FullCircle,
}

fn in_cone(normals: &[Complex64], h: Complex64) -> bool {
    normals.iter().all(|n| dot(h, *n) <= CONE_TOL)
}

fn recession_cone_of(constraints: &[HalfPlane]) -> RecessionCone {
    if constraints.is_empty() {
        return RecessionCone::FullCircle;
    }
    let normals: Vec<Complex64> = constraints.iter().map(|h| h.normal).collect();
    // Boundary directions of the cone are perpendicular to some normal.
    let mut candidates: Vec<Complex64> = Vec::new();
    for n in &normals {
        let perp = Complex64::new(-n.im, n.re);
        for d in [perp, -perp] {
            if in_cone(&normals, d) && !candidates.iter().any(|c| (c - d).norm() < 1e-12) {
                candidates.push(d);
            }
        }
    }
    let Some(&reference) = candidates.first() else {
        return RecessionCone::Empty;
    };
    let rel = |d: &Complex64| (d * reference.conj()).arg();
    let mut lo = 0.0_f64;
    let mut hi = 0.0_f64;
    for d in &candidates {
        let a = rel(d);
        lo = lo.min(a);
        hi = hi.max(a);
    }
    let base = reference.arg();
    if hi - lo < 1e-12 {
        return RecessionCone::Single {
            direction: reference,
        };
    }
    let antipodal = (hi - lo - PI).abs() < 1e-9;
    let arc = |from: f64, to: f64| RecessionCone::Arc {
        start: (base + from).rem_euclid(TAU),
        end: (base + from).rem_euclid(TAU) + (to - from),
    };
    let mid = Complex64::from_polar(1.0, base + 0.5 * (lo + hi));
    if in_cone(&normals, mid) {
        return arc(lo, hi);
    }
    if antipodal {
        // the half-circle may lie on the other side of the reference
        let other = Complex64::from_polar(1.0, base + 0.5 * (lo + hi) + PI);
        if in_cone(&normals, other) {
            return arc(hi, lo + TAU);
        }
        let h = Complex64::from_polar(1.0, base + lo);
        return RecessionCone::AntipodalPair {
            direction: snap_pair_direction(&candidates, h),
        };
    }
    RecessionCone::Single {
        direction: reference,
    }
}

/// Prefer an exactly perpendicular candidate over a re-synthesised one.
fn snap_pair_direction(candidates: &[Complex64], h: Complex64) -> Complex64 {
    candidates
        .iter()
        .copied()
        .min_by(|a, b| (a - h).norm().total_cmp(&(b - h).norm()))
        .unwrap_or(h)
}

impl RecessionCone {
    /// Angular width in degrees (0 for single directions and pairs).
    pub fn width_degrees(&self) -> f64 {
        match self {
            RecessionCone::Arc { start, end } => (end - start).to_degrees(),
            RecessionCone::FullCircle => 360.0,
            _ => 0.0,
        }
    }

    pub fn contains_direction(&self, h: Complex64) -> bool {
        let h = h / h.norm();
        match self {
            RecessionCone::Empty => false,
            RecessionCone::Single { direction } => (h - direction).norm() < 1e-12,
            RecessionCone::AntipodalPair { direction } => {
                (h - direction).norm() < 1e-12 || (h + direction).norm() < 1e-12
            }
            RecessionCone::Arc { start, end } => {
                let a = (h.arg() - start).rem_euclid(TAU);
                a <= end - start + 1e-12 || a >= TAU - 1e-12
            }
            RecessionCone::FullCircle => true,
        }
    }

    /// `count` directions spread through the cone (strictly inside arcs).
    pub fn sample_directions(&self, count: usize) -> Vec<Complex64> {
        match self {
            RecessionCone::Empty => vec![],
            RecessionCone::Single { direction } => vec![*direction],
            RecessionCone::AntipodalPair { direction } => vec![*direction, -direction],
            RecessionCone::Arc { start, end } => (0..count)
                .map(|k| {
                    let a = start + (end - start) * (k as f64 + 0.5) / count as f64;
                    Complex64::from_polar(1.0, a)
                })
                .collect(),
            RecessionCone::FullCircle => (0..count)
                .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / count as f64))
                .collect(),
        }
    }

    /// `sup_{h in cone} <v, h>` (`-INFINITY` for the empty cone).
    fn max_dot(&self, v: Complex64) -> f64 {
        match self {
            RecessionCone::Empty => f64::NEG_INFINITY,
            RecessionCone::Single { direction } => dot(v, *direction),
            RecessionCone::AntipodalPair { direction } => dot(v, *direction).abs(),
            RecessionCone::Arc { start, end } => {
                let at = |a: f64| dot(v, Complex64::from_polar(1.0, a));
                let mut best = at(*start).max(at(*end));
                if v.norm() > 0.0 && self.contains_direction(v) {
                    best = best.max(v.norm());
                }
                best
            }
            RecessionCone::FullCircle => v.norm(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeClass {
    Bounded,
    StripLike,
    ProperCone { angle_degrees: f64 },
    HalfPlane,
    WholePlane,
}

pub fn classify(cone: &RecessionCone) -> ConeClass {
    match cone {
        RecessionCone::Empty => ConeClass::Bounded,
        RecessionCone::AntipodalPair { .. } => ConeClass::StripLike,
        RecessionCone::Single { .. } => ConeClass::ProperCone { angle_degrees: 0.0 },
        RecessionCone::FullCircle => ConeClass::WholePlane,
        RecessionCone::Arc { .. } => {
            let width = cone.width_degrees();
            if (width - 180.0).abs() <= 1e-9 {
                ConeClass::HalfPlane
            } else if width < 180.0 {
                ConeClass::ProperCone {
                    angle_degrees: width,
                }
            } else {
                ConeClass::WholePlane
            }
        }
    }
}

/// Open half-line `{base + t * direction : t > -overshoot}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Halfline {
    pub base: Complex64,
    pub direction: Complex64,
    pub overshoot: f64,
}

impl Halfline {
    pub fn new(base: Complex64, direction: Complex64, overshoot: f64) -> Result<Self> {
        if !base.is_finite() || !direction.is_finite() || direction.norm() == 0.0 {
            return Err(Error::BadParameter("half-line needs a finite non-zero direction".into()));
        }
        if !overshoot.is_finite() || overshoot <= 0.0 {
            return Err(Error::BadParameter("half-line overshoot must be positive".into()));
        }
        Ok(Self {
            base,
            direction: direction / direction.norm(),
            overshoot,
        })
    }

    /// Parameter `t` of `z` along the line when `z` lies on it.
    pub fn parameter(&self, z: Complex64) -> Option<f64> {
        let rel = (z - self.base) * self.direction.conj();
        let scale = 1.0 + (z - self.base).norm();
        (rel.im.abs() <= 1e-12 * scale).then_some(rel.re)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.parameter(z).is_some_and(|t| t > -self.overshoot)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.base + self.direction * t
    }
}

/// A planar region. All variants are open sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DomainSpec {
    Plane,
    Disc { center: Complex64, radius: f64 },
    HPoly(HPoly),
    DiscExterior { center: Complex64, radius: f64 },
    HalflineFamily(Vec<Halfline>),
}

impl DomainSpec {
    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::BadParameter("disc needs a finite positive radius".into()));
        }
        Ok(DomainSpec::Disc { center, radius })
    }

    pub fn disc_exterior(center: Complex64, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius < 0.0 {
            return Err(Error::BadParameter("disc exterior needs a finite radius".into()));
        }
        Ok(DomainSpec::DiscExterior { center, radius })
    }

    pub fn hpoly(pairs: &[(Complex64, f64)]) -> Result<Self> {
        HPoly::from_pairs(pairs).map(DomainSpec::HPoly)
    }

    pub fn halflines(lines: Vec<Halfline>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::BadParameter("half-line family is empty".into()));
        }
        Ok(DomainSpec::HalflineFamily(lines))
    }

    pub fn unit_disc() -> Self {
        DomainSpec::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// `Im z > 0`
    pub fn upper_half_plane() -> Self {
        Self::hpoly(&[(Complex64::new(0.0, -1.0), 0.0)]).expect("valid fixture")
    }

    /// `lower < Im z < upper`
    pub fn strip(lower: f64, upper: f64) -> Result<Self> {
        Self::hpoly(&[
            (Complex64::new(0.0, -1.0), -lower),
            (Complex64::new(0.0, 1.0), upper),
        ])
    }

    /// `Re z > 0, Im z > 0`
    pub fn quadrant() -> Self {
        Self::hpoly(&[
            (Complex64::new(-1.0, 0.0), 0.0),
            (Complex64::new(0.0, -1.0), 0.0),
        ])
        .expect("valid fixture")
    }

    /// `0 < Re z < 1, 0 < Im z < 1`
    pub fn unit_square() -> Self {
        Self::hpoly(&[
            (Complex64::new(-1.0, 0.0), 0.0),
            (Complex64::new(1.0, 0.0), 1.0),
            (Complex64::new(0.0, -1.0), 0.0),
            (Complex64::new(0.0, 1.0), 1.0),
        ])
        .expect("valid fixture")
    }

    /// Real axis covered by two opposite half-lines from 0.
    pub fn real_line_family() -> Self {
        let zero = Complex64::new(0.0, 0.0);
        DomainSpec::HalflineFamily(vec![
            Halfline {
                base: zero,
                direction: Complex64::new(1.0, 0.0),
                overshoot: 1.0,
            },
            Halfline {
                base: zero,
                direction: Complex64::new(-1.0, 0.0),
                overshoot: 1.0,
            },
        ])
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !z.is_finite() {
            return false;
        }
        match self {
            DomainSpec::Plane => true,
            DomainSpec::Disc { center, radius } => (z - center).norm() < *radius,
            DomainSpec::HPoly(p) => p.contains(z),
            DomainSpec::DiscExterior { center, radius } => (z - center).norm() > *radius,
            DomainSpec::HalflineFamily(lines) => lines.iter().any(|l| l.contains(z)),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::Disc { .. } => true,
            DomainSpec::HPoly(p) => p.is_bounded(),
            _ => false,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self,
            DomainSpec::Plane | DomainSpec::Disc { .. } | DomainSpec::HPoly(_)
        )
    }

    /// A deterministic interior point.
    pub fn interior_point(&self) -> Complex64 {
        match self {
            DomainSpec::Plane => Complex64::new(0.0, 0.0),
            DomainSpec::Disc { center, .. } => *center,
            DomainSpec::HPoly(p) => p.witness(),
            DomainSpec::DiscExterior { center, radius } => {
                center + Complex64::new(radius + 1.0, 0.0)
            }
            DomainSpec::HalflineFamily(lines) => lines[0].base,
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match self {
            DomainSpec::Plane => f64::INFINITY,
            DomainSpec::Disc { center, radius } => radius - (z - center).norm(),
            DomainSpec::HPoly(p) => p.slack(z),
            DomainSpec::DiscExterior { center, radius } => (z - center).norm() - radius,
            DomainSpec::HalflineFamily(_) => 0.0,
        }
    }

    /// Unit inward normal of the boundary piece nearest to `z`.
    pub fn inward_normal(&self, z: Complex64) -> Option<Complex64> {
        match self {
            DomainSpec::Disc { center, .. } => {
                let d = center - z;
                (d.norm() > 0.0).then(|| d / d.norm())
            }
            DomainSpec::HPoly(p) => Some(-p.tightest(z).normal),
            DomainSpec::DiscExterior { center, .. } => {
                let d = z - center;
                (d.norm() > 0.0).then(|| d / d.norm())
            }
            _ => None,
        }
    }

    /// Points on the boundary of a bounded convex domain.
    pub fn boundary_points(&self, per_edge: usize) -> Vec<Complex64> {
        match self {
            DomainSpec::Disc { center, radius } => {
                let n = per_edge.max(8) * 8;
                (0..n)
                    .map(|k| center + Complex64::from_polar(*radius, TAU * k as f64 / n as f64))
                    .collect()
            }
            DomainSpec::HPoly(p) => match p.polygon() {
                Some(poly) => {
                    let mut out = Vec::new();
                    for i in 0..poly.len() {
                        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                        for k in 0..per_edge {
                            out.push(a + (b - a) * (k as f64 / per_edge as f64));
                        }
                    }
                    out
                }
                None => vec![],
            },
            _ => vec![],
        }
    }

    /// Axis-aligned bounding box `(lower-left, upper-right)` for bounded domains.
    pub fn bounding_box(&self) -> Option<(Complex64, Complex64)> {
        match self {
            DomainSpec::Disc { center, radius } => Some((
                center - Complex64::new(*radius, *radius),
                center + Complex64::new(*radius, *radius),
            )),
            DomainSpec::HPoly(p) => {
                let poly = p.polygon()?;
                let mut lo = poly[0];
                let mut hi = poly[0];
                for v in &poly {
                    lo = Complex64::new(lo.re.min(v.re), lo.im.min(v.im));
                    hi = Complex64::new(hi.re.max(v.re), hi.im.max(v.im));
                }
                Some((lo, hi))
            }
            _ => None,
        }
    }

    /// Recession cone of a convex domain.
    pub fn recession_cone(&self) -> Result<RecessionCone> {
        match self {
            DomainSpec::Plane => Ok(RecessionCone::FullCircle),
            DomainSpec::Disc { .. } => Ok(RecessionCone::Empty),
            DomainSpec::HPoly(p) => Ok(p.recession_cone()),
            _ => Err(Error::NotConvex),
        }
    }

    /// Distance from `p` to the closure of the domain.
    pub fn closure_distance(&self, p: Complex64) -> f64 {
        match self {
            DomainSpec::Plane => 0.0,
            DomainSpec::Disc { center, radius } => ((p - center).norm() - radius).max(0.0),
            DomainSpec::DiscExterior { center, radius } => (radius - (p - center).norm()).max(0.0),
            DomainSpec::HalflineFamily(lines) => lines
                .iter()
                .map(|l| {
                    let t = dot(p - l.base, l.direction).max(-l.overshoot);
                    (p - l.point(t)).norm()
                })
                .fold(f64::INFINITY, f64::min),
            DomainSpec::HPoly(poly) => {
                if poly.closure_contains(p, 0.0) {
                    return 0.0;
                }
                let scale = 1.0 + p.norm();
                let mut best = f64::INFINITY;
                for h in poly.constraints() {
                    let q = p + h.normal * h.slack(p);
                    if poly.closure_contains(q, VERTEX_TOL * scale) {
                        best = best.min((p - q).norm());
                    }
                }
                for v in poly.vertices() {
                    best = best.min((p - v).norm());
                }
                best
            }
        }
    }

    /// `sup_{z∈Ω} |z - p|`.
    pub fn max_distance_from(&self, p: Complex64) -> f64 {
        match self {
            DomainSpec::Disc { center, radius } => (p - center).norm() + radius,
            DomainSpec::HPoly(poly) if poly.is_bounded() => poly
                .vertices()
                .iter()
                .map(|v| (v - p).norm())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }

    /// Support function `sup_{z∈Ω} <v, z>`.
    pub fn support(&self, v: Complex64) -> f64 {
        match self {
            DomainSpec::Plane | DomainSpec::DiscExterior { .. } => {
                if v.norm() == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            DomainSpec::Disc { center, radius } => dot(v, *center) + radius * v.norm(),
            DomainSpec::HalflineFamily(lines) => lines
                .iter()
                .map(|l| {
                    let s = dot(v, l.direction);
                    if s > 0.0 {
                        f64::INFINITY
                    } else {
                        dot(v, l.point(-l.overshoot))
                    }
                })
                .fold(f64::NEG_INFINITY, f64::max),
            DomainSpec::HPoly(poly) => {
                let cone = poly.recession_cone();
                if cone.max_dot(v) > CONE_TOL * v.norm().max(1.0) {
                    return f64::INFINITY;
                }
                let vertices = poly.vertices();
                if !vertices.is_empty() {
                    return vertices.iter().map(|x| dot(v, *x)).fold(f64::NEG_INFINITY, f64::max);
                }
                // all boundary lines parallel: v must be a non-negative multiple of a normal
                let n = poly.constraints()[0].normal;
                let lambda = dot(v, n);
                let sign = lambda.signum();
                poly.constraints()
                    .iter()
                    .filter(|h| dot(h.normal, n) * sign > 0.0)
                    .map(|h| lambda.abs() * h.offset)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Unit direction `h` and overshoot `r > 0` with `{p + t h : t > -r} ⊆ d`.
pub fn halfline_through(d: &DomainSpec, p: Complex64) -> Result<(Complex64, f64)> {
    if !d.contains(p) {
        return Err(Error::BadParameter(format!("{p} is not in the domain")));
    }
    match d {
        DomainSpec::Plane => Ok((Complex64::new(1.0, 0.0), 1.0)),
        DomainSpec::Disc { .. } => Err(Error::NoHalfline(p)),
        DomainSpec::HPoly(poly) => {
            let h = match poly.recession_cone() {
                RecessionCone::Empty => return Err(Error::NoHalfline(p)),
                RecessionCone::Single { direction } => direction,
                RecessionCone::AntipodalPair { direction } => {
                    let flip = direction.re < 0.0 || (direction.re == 0.0 && direction.im < 0.0);
                    if flip {
                        -direction
                    } else {
                        direction
                    }
                }
                RecessionCone::Arc { start, end } => Complex64::from_polar(1.0, 0.5 * (start + end)),
                RecessionCone::FullCircle => Complex64::new(1.0, 0.0),
            };
            Ok((h, 0.5 * poly.slack(p)))
        }
        DomainSpec::DiscExterior { center, radius } => {
            let rel = p - center;
            Ok((rel / rel.norm(), 0.5 * (rel.norm() - radius)))
        }
        DomainSpec::HalflineFamily(lines) => lines
            .iter()
            .find_map(|l| {
                l.parameter(p)
                    .filter(|t| *t > -l.overshoot)
                    .map(|t| (l.direction, l.overshoot + t))
            })
            .ok_or(Error::NoHalfline(p)),
    }
}

/// Diameter of a bounded domain.
pub fn diameter(d: &DomainSpec) -> Result<f64> {
    match d {
        DomainSpec::Disc { radius, .. } => Ok(2.0 * radius),
        DomainSpec::HPoly(p) if p.is_bounded() => {
            let v = p.vertices();
            let mut best = 0.0_f64;
            for i in 0..v.len() {
                for j in (i + 1)..v.len() {
                    best = best.max((v[i] - v[j]).norm());
                }
            }
            Ok(best)
        }
        _ => Err(Error::UnboundedDomain),
    }
}

/// Constraints of the regular 64-gon inscribed in `D(center, radius)`.
fn inscribed_polygon(center: Complex64, radius: f64) -> Vec<HalfPlane> {
    let apothem = radius * (PI / CLIP_SIDES as f64).cos();
    (0..CLIP_SIDES)
        .map(|k| {
            let n = Complex64::from_polar(1.0, (2 * k + 1) as f64 * PI / CLIP_SIDES as f64);
            HalfPlane {
                normal: n,
                offset: apothem + dot(center, n),
            }
        })
        .collect()
}

/// `d ∩ D(0, m)`, exact for discs centred at 0 (or already inside `D(0, m)`),
/// otherwise polygonal using inscribed 64-gons.
pub fn clip_to_disc(d: &DomainSpec, m: u32) -> Result<DomainSpec> {
    if m < 1 {
        return Err(Error::BadParameter("clip radius must be at least 1".into()));
    }
    let radius = m as f64;
    let origin = Complex64::new(0.0, 0.0);
    let mut constraints = match d {
        DomainSpec::Disc { center, radius: r } => {
            if *center == origin {
                return Ok(DomainSpec::Disc {
                    center: origin,
                    radius: r.min(radius),
                });
            }
            if center.norm() + r <= radius {
                return Ok(d.clone());
            }
            inscribed_polygon(*center, *r)
        }
        DomainSpec::HPoly(p) => p.constraints().to_vec(),
        DomainSpec::Plane => Vec::new(),
        _ => return Err(Error::NotConvex),
    };
    constraints.extend(inscribed_polygon(origin, radius));
    let witness = match d {
        DomainSpec::HPoly(p) if constraints.iter().all(|h| h.slack(p.witness()) > 0.0) => {
            Some(p.witness())
        }
        _ => None,
    };
    let mut poly = match witness {
        Some(w) => HPoly {
            constraints,
            witness: w,
            clip_radius: None,
        },
        None => HPoly::new(constraints)?,
    };
    poly.clip_radius = Some(radius);
    Ok(DomainSpec::HPoly(poly))
}
