//! Evaluation, higher derivatives and line/circle quadrature.
//!
//! Derivatives come from closed forms whenever the function provides one. The
//! fallback is the Cauchy integral
//!
//! ```text
//! f^(l)(z) = l! / (2π r^l) ∫ f(z + r e^{iφ}) e^{-ilφ} dφ
//! ```
//!
//! discretised with the trapezoid rule on a circle of radius
//! `r = min(1, dist(z, ∂region) / 2)`. The trapezoid rule converges
//! geometrically for periodic analytic integrands, so node doubling from 32
//! up to 4096 nodes either settles quickly or the point is hopeless.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::FunctionHandle;
use crate::error::{Error, Result};

/// Largest circle radius used by the Cauchy fallback.
pub const CAUCHY_RADIUS_CAP: f64 = 1.0;
pub const CAUCHY_MIN_NODES: usize = 32;
pub const CAUCHY_MAX_NODES: usize = 4096;
/// Panel cap for the composite Gauss-Legendre segment rule.
pub const SEGMENT_MAX_PANELS: usize = 1 << 16;

/// Absolute / relative tolerance pair. The effective bound for a quantity of
/// magnitude `m` is `max(abs, rel * m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    #[inline]
    pub fn bound(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }
}

/// The open set on which a function is holomorphic: the plane minus finitely
/// many points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    excluded: Vec<Complex64>,
}

impl Region {
    pub fn entire() -> Self {
        Self::default()
    }

    pub fn punctured(point: Complex64) -> Self {
        Self {
            excluded: vec![point],
        }
    }

    pub fn excluded(&self) -> &[Complex64] {
        &self.excluded
    }

    pub fn is_entire(&self) -> bool {
        self.excluded.is_empty()
    }

    /// Union of excluded points, i.e. the intersection of the two regions.
    pub fn intersect(&self, other: &Region) -> Region {
        let mut excluded = self.excluded.clone();
        for p in &other.excluded {
            if !excluded.contains(p) {
                excluded.push(*p);
            }
        }
        Region { excluded }
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        z.is_finite() && self.excluded.iter().all(|p| *p != z)
    }

    /// Distance from `z` to the nearest excluded point (`INFINITY` if none).
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.excluded
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// True when the closed segment `[a, b]` avoids every excluded point.
    pub fn segment_clear(&self, a: Complex64, b: Complex64) -> bool {
        let scale = 1.0 + a.norm() + b.norm();
        self.excluded
            .iter()
            .all(|p| point_segment_distance(*p, a, b) > 1e-14 * scale)
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// A function holomorphic on a [`Region`].
pub trait Analytic: Sync {
    fn region(&self) -> &Region;

    /// Raw evaluation; callers are responsible for region membership.
    fn value(&self, z: Complex64) -> Complex64;

    /// Closed-form derivative of the given order, if one is known.
    fn closed_form(&self, _order: u32) -> Option<FunctionHandle> {
        None
    }
}

/// A function known only through point evaluation. Derivatives always go
/// through the Cauchy fallback.
pub struct OpaqueFn<F> {
    f: F,
    region: Region,
}

impl<F> OpaqueFn<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn new(region: Region, f: F) -> Self {
        Self { f, region }
    }
}

impl<F> Analytic for OpaqueFn<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DerivativeMethod {
    ClosedForm,
    CauchyIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeResult {
    pub value: Complex64,
    pub order: u32,
    /// Zero exactly for closed forms; last inter-refinement difference otherwise.
    pub error_estimate: f64,
    pub method: DerivativeMethod,
}

pub fn evaluate<A: Analytic + ?Sized>(f: &A, z: Complex64) -> Result<Complex64> {
    if !f.region().contains(z) {
        return Err(Error::OutsideDomain(z));
    }
    Ok(f.value(z))
}

/// `order`-th derivative at `z`, closed form first, Cauchy integral otherwise.
pub fn derivative<A: Analytic + ?Sized>(
    f: &A,
    order: u32,
    z: Complex64,
    tol: Tolerance,
) -> Result<DerivativeResult> {
    if !f.region().contains(z) {
        return Err(Error::OutsideDomain(z));
    }
    match f.closed_form(order) {
        Some(g) => Ok(DerivativeResult {
            value: g.value(z),
            order,
            error_estimate: 0.0,
            method: DerivativeMethod::ClosedForm,
        }),
        None => cauchy_derivative(f, order, z, tol),
    }
}

/// Cauchy-integral derivative regardless of any closed form.
pub fn cauchy_derivative<A: Analytic + ?Sized>(
    f: &A,
    order: u32,
    z: Complex64,
    tol: Tolerance,
) -> Result<DerivativeResult> {
    let dist = f.region().boundary_distance(z);
    if !f.region().contains(z) || dist.is_nan() || dist <= 0.0 {
        return Err(Error::OutsideDomain(z));
    }
    let radius = CAUCHY_RADIUS_CAP.min(0.5 * dist);
    let scale = factorial(order) / radius.powi(order as i32);

    let trapezoid = |nodes: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let phi = 2.0 * PI * (k as f64) / (nodes as f64);
            let zeta = z + Complex64::from_polar(radius, phi);
            acc += f.value(zeta) * Complex64::from_polar(1.0, -(order as f64) * phi);
        }
        acc * (scale / nodes as f64)
    };

    let mut nodes = CAUCHY_MIN_NODES;
    let mut previous = trapezoid(nodes);
    let mut last_difference = f64::INFINITY;
    while nodes < CAUCHY_MAX_NODES {
        nodes *= 2;
        let current = trapezoid(nodes);
        last_difference = (current - previous).norm();
        if last_difference < tol.bound(current.norm()) {
            return Ok(DerivativeResult {
                value: current,
                order,
                error_estimate: last_difference,
                method: DerivativeMethod::CauchyIntegral,
            });
        }
        previous = current;
    }
    Err(Error::NoConvergence {
        nodes,
        last_difference,
    })
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Falling factorial `m (m-1) ... (m-l+1)`.
pub fn falling_factorial(m: i32, l: u32) -> f64 {
    (0..l as i32).fold(1.0, |acc, j| acc * (m - j) as f64)
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentQuadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

fn gauss_legendre_composite<A: Analytic + ?Sized>(
    f: &A,
    a: Complex64,
    b: Complex64,
    panels: usize,
) -> Complex64 {
    let step = (b - a) / panels as f64;
    let half = step * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + step * (p as f64 + 0.5);
        for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            acc += (f.value(mid + half * *x) + f.value(mid - half * *x)) * *w;
        }
    }
    acc * half
}

/// Adaptive `∫_[a,b] f(ζ) dζ`, doubling panels until successive estimates
/// differ by less than `tol`.
pub fn integrate_segment<A: Analytic + ?Sized>(
    f: &A,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<SegmentQuadrature> {
    let region = f.region();
    if !region.contains(a) || !region.contains(b) || !region.segment_clear(a, b) {
        return Err(Error::SegmentExitsDomain { from: a, to: b });
    }
    if a == b {
        return Ok(SegmentQuadrature {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels: 0,
        });
    }
    let mut panels = 1;
    let mut previous = gauss_legendre_composite(f, a, b, panels);
    let mut last_difference = f64::INFINITY;
    while panels < SEGMENT_MAX_PANELS {
        panels *= 2;
        let current = gauss_legendre_composite(f, a, b, panels);
        last_difference = (current - previous).norm();
        if last_difference < tol {
            return Ok(SegmentQuadrature {
                value: current,
                error_estimate: last_difference,
                panels,
            });
        }
        previous = current;
    }
    Err(Error::NoConvergence {
        nodes: panels * 8,
        last_difference,
    })
}

pub fn segment_integral<A: Analytic + ?Sized>(
    f: &A,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Complex64> {
    integrate_segment(f, a, b, tol).map(|q| q.value)
}
