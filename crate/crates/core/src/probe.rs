//! Numerical sup-norm estimation for catalog derivatives and escalation
//! witnesses for unbounded ones.
//!
//! All grids are evaluated in parallel and reduced sequentially, so reports
//! do not depend on thread scheduling.

use std::cmp::Ordering;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::FunctionHandle;
use crate::error::{Error, Result};
use crate::geometry::{clip_to_disc, DomainSpec, RecessionCone};
use crate::numerics::{point_segment_distance, Analytic};

/// Minimum length of an escalating chain.
pub const WITNESS_LEN: usize = 8;

/// Relative per-round gain below which an estimate counts as settled.
pub const SETTLE_GAIN: f64 = 0.01;

const TOP_POINTS: usize = 10;
const RAY_DIRECTIONS: usize = 16;
const LOCAL_GRID: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    /// Grid points per axis for the first pass.
    pub coarse_grid: usize,
    pub refinement_rounds: usize,
    /// Closest approach to the boundary.
    pub boundary_band: f64,
    pub ray_t_max: f64,
    /// Maximum number of function evaluations per probe.
    pub budget: u64,
    pub divergence_threshold: f64,
    /// Radius `m` of the disc used to clip unbounded domains.
    pub clip_radius: u32,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            coarse_grid: 64,
            refinement_rounds: 6,
            boundary_band: 1e-3,
            ray_t_max: 1e6,
            budget: 1_000_000,
            divergence_threshold: 1e3,
            clip_radius: 8,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::BadParameter(format!("probe config: {what}")));
        if self.coarse_grid < 2 {
            return bad("coarse_grid must be at least 2");
        }
        if self.refinement_rounds == 0 {
            return bad("refinement_rounds must be positive");
        }
        if !(self.boundary_band > 0.0 && self.boundary_band < 1.0) {
            return bad("boundary_band must lie in (0, 1)");
        }
        if !self.ray_t_max.is_finite() || self.ray_t_max <= 1.0 {
            return bad("ray_t_max must be finite and > 1");
        }
        if self.budget == 0 {
            return bad("budget must be positive");
        }
        if !self.divergence_threshold.is_finite() || self.divergence_threshold <= 0.0 {
            return bad("divergence_threshold must be finite and positive");
        }
        if self.clip_radius == 0 {
            return bad("clip_radius must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    BoundedEstimate,
    DivergenceWitness,
}

/// In-domain points with strictly increasing derivative moduli, the last at
/// or above `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    pub order: u32,
    pub threshold: f64,
    pub points: Vec<Complex64>,
    pub moduli: Vec<f64>,
}

impl DivergenceWitness {
    /// Checks length, membership, strict growth and the threshold crossing.
    pub fn is_valid_for(&self, d: &DomainSpec) -> bool {
        self.points.len() >= WITNESS_LEN
            && self.points.len() == self.moduli.len()
            && self.points.iter().all(|z| d.contains(*z))
            && self.moduli.windows(2).all(|w| w[0] < w[1])
            && self.moduli.last().is_some_and(|m| *m >= self.threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub order: u32,
    pub sup_estimate: f64,
    pub argmax: Complex64,
    /// Running estimate after the coarse pass and after each refinement round.
    pub history: Vec<f64>,
    pub verdict: Verdict,
    pub witness: Option<DivergenceWitness>,
    /// Last refinement gain was below [`SETTLE_GAIN`].
    pub converged: bool,
    pub budget_exhausted: bool,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    z: Complex64,
    modulus: f64,
}

/// Larger modulus wins; ties go to the lexicographically smaller point.
fn better(a: &Sample, b: &Sample) -> Ordering {
    a.modulus
        .total_cmp(&b.modulus)
        .then_with(|| b.z.re.total_cmp(&a.z.re))
        .then_with(|| b.z.im.total_cmp(&a.z.im))
}

/// Evaluates `|g|` for a fixed derivative `g`, counting against the budget.
struct Evaluator<'a> {
    g: FunctionHandle,
    domain: &'a DomainSpec,
    used: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Evaluator<'a> {
    fn new(f: &FunctionHandle, order: u32, domain: &'a DomainSpec, budget: u64) -> Self {
        Self {
            g: f.closed_form_derivative(order),
            domain,
            used: 0,
            budget,
            exhausted: false,
        }
    }

    /// Moduli at the in-domain points, in input order. `None` marks points
    /// outside the domain, at singularities, or past the budget.
    fn moduli(&mut self, points: &[Complex64]) -> Vec<Option<f64>> {
        let remaining = (self.budget - self.used) as usize;
        let take = points.len().min(remaining);
        if take < points.len() {
            self.exhausted = true;
        }
        self.used += take as u64;
        let g = &self.g;
        let domain = self.domain;
        let mut out: Vec<Option<f64>> = points[..take]
            .par_iter()
            .map(|z| {
                if !domain.contains(*z) || !g.region().contains(*z) {
                    return None;
                }
                let m = g.value(*z).norm();
                m.is_finite().then_some(m)
            })
            .collect();
        out.resize(points.len(), None);
        out
    }

    fn samples(&mut self, points: &[Complex64]) -> Vec<Sample> {
        let moduli = self.moduli(points);
        points
            .iter()
            .zip(moduli)
            .filter_map(|(z, m)| m.map(|modulus| Sample { z: *z, modulus }))
            .collect()
    }
}

fn grid(lo: Complex64, hi: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64;
            let y = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64;
            out.push(Complex64::new(x, y));
        }
    }
    out
}

/// `1, 2, ..., 64`, then doubling up to `t_max`.
fn ray_parameters(t_max: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = (1..=64).map(f64::from).filter(|t| *t <= t_max).collect();
    let mut t = 128.0;
    while t <= t_max {
        ts.push(t);
        t *= 2.0;
    }
    ts
}

/// Unit directions along which to walk out of an unbounded domain.
fn escape_directions(f: &FunctionHandle, d: &DomainSpec) -> Vec<(Complex64, Complex64)> {
    let base = d.interior_point();
    let full: Vec<Complex64> = RecessionCone::FullCircle.sample_directions(RAY_DIRECTIONS);
    let mut out: Vec<(Complex64, Complex64)> = Vec::new();
    let mut push = |p: Complex64, h: Complex64| {
        if !out.iter().any(|(q, k)| *q == p && (k - h).norm() < 1e-12) {
            out.push((p, h));
        }
    };
    match d {
        DomainSpec::HalflineFamily(lines) => {
            for l in lines {
                push(l.base, l.direction);
            }
        }
        DomainSpec::Disc { .. } => {}
        DomainSpec::HPoly(poly) => {
            let cone = poly.recession_cone();
            for h in f.growth_directions() {
                if cone.contains_direction(h) {
                    push(base, h);
                }
            }
            for h in cone.sample_directions(RAY_DIRECTIONS) {
                push(base, h);
            }
        }
        DomainSpec::Plane => {
            for h in f.growth_directions().into_iter().chain(full) {
                push(base, h);
            }
        }
        DomainSpec::DiscExterior { center, radius } => {
            for h in f.growth_directions().into_iter().chain(full) {
                push(center + h * (radius + 1.0), h);
            }
        }
    }
    out
}

/// Paths that approach singular points sitting on the boundary.
fn boundary_paths(f: &FunctionHandle, d: &DomainSpec) -> Vec<Vec<Complex64>> {
    let mut paths = Vec::new();
    for &s in f.singular_points() {
        if d.contains(s) || d.closure_distance(s) > 1e-12 {
            continue;
        }
        let Some(nu) = d.inward_normal(s) else { continue };
        let tangent = nu * Complex64::new(0.0, 1.0);
        let curvatures: Vec<f64> = match d {
            DomainSpec::Disc { radius, .. } => [0.75, 1.0, 2.0, 4.0].iter().map(|k| k / radius).collect(),
            _ => vec![0.5, 1.0, 2.0, 4.0],
        };
        let taus: Vec<f64> = (0..48).map(|k| 0.5 * 0.5f64.powi(k)).collect();
        let straight = |dir: Complex64| taus.iter().map(|t| s + dir * *t).collect::<Vec<_>>();
        paths.push(straight(nu));
        paths.push(straight((nu + tangent) * FRAC_1_SQRT_2));
        paths.push(straight((nu - tangent) * FRAC_1_SQRT_2));
        for kappa in curvatures {
            for sign in [1.0, -1.0] {
                paths.push(
                    taus.iter()
                        .map(|t| s + tangent * (sign * t) + nu * (kappa * t * t))
                        .collect(),
                );
            }
        }
    }
    paths
}

/// First run of at least [`WITNESS_LEN`] strictly increasing moduli ending at
/// a value `>= threshold`.
fn escalating_run(points: &[Complex64], moduli: &[Option<f64>], threshold: f64) -> Option<(Vec<Complex64>, Vec<f64>)> {
    let mut start = 0;
    for i in 0..moduli.len() {
        let Some(m) = moduli[i] else {
            start = i + 1;
            continue;
        };
        if i > start && moduli[i - 1].is_some_and(|prev| m <= prev) {
            start = i;
        }
        if m >= threshold && i + 1 - start >= WITNESS_LEN {
            let pts = points[start..=i].to_vec();
            let ms = moduli[start..=i].iter().map(|m| m.expect("checked")).collect();
            return Some((pts, ms));
        }
    }
    None
}

fn search_witness(ev: &mut Evaluator<'_>, f: &FunctionHandle, order: u32, d: &DomainSpec, threshold: f64, cfg: &ProbeConfig) -> Option<DivergenceWitness> {
    let mut paths = boundary_paths(f, d);
    if !d.is_bounded() {
        let ts = ray_parameters(cfg.ray_t_max);
        for (p, h) in escape_directions(f, d) {
            paths.push(ts.iter().map(|t| p + h * *t).collect());
        }
    }
    for path in paths {
        if ev.exhausted {
            break;
        }
        let moduli = ev.moduli(&path);
        if let Some((points, moduli)) = escalating_run(&path, &moduli, threshold) {
            return Some(DivergenceWitness {
                order,
                threshold,
                points,
                moduli,
            });
        }
    }
    None
}

/// Search for an escalating chain of `|f^(order)|` inside `d`.
pub fn find_divergence_witness(
    f: &FunctionHandle,
    order: u32,
    d: &DomainSpec,
    threshold: f64,
    cfg: &ProbeConfig,
) -> Result<Option<DivergenceWitness>> {
    cfg.validate()?;
    let mut ev = Evaluator::new(f, order, d, cfg.budget);
    Ok(search_witness(&mut ev, f, order, d, threshold, cfg))
}

/// Coarse sample set: a grid over the (clipped) domain, boundary-adjacent
/// points, and recession rays.
fn initial_points(f: &FunctionHandle, d: &DomainSpec, cfg: &ProbeConfig) -> Result<(Vec<Complex64>, f64)> {
    let n = cfg.coarse_grid;
    let m = cfg.clip_radius as f64;
    let window = match d {
        DomainSpec::HalflineFamily(_) => None,
        DomainSpec::DiscExterior { center, radius } => {
            let half = radius + m;
            Some((center - Complex64::new(half, half), center + Complex64::new(half, half)))
        }
        _ if d.is_bounded() => d.bounding_box(),
        _ => clip_to_disc(d, cfg.clip_radius)?.bounding_box(),
    };
    let mut points = vec![d.interior_point()];
    let mut spacing = 1.0 / n as f64;
    if let Some((lo, hi)) = window {
        spacing = (hi.re - lo.re).max(hi.im - lo.im) / n as f64;
        points.extend(grid(lo, hi, n));
    }
    // boundary-adjacent samples
    let edge = match d {
        DomainSpec::Disc { .. } => d.boundary_points(n),
        DomainSpec::HPoly(_) if d.is_bounded() => d.boundary_points(n),
        DomainSpec::HPoly(_) | DomainSpec::Plane => clip_to_disc(d, cfg.clip_radius)?.boundary_points(n),
        DomainSpec::DiscExterior { center, radius } => DomainSpec::Disc {
            center: *center,
            radius: *radius,
        }
        .boundary_points(n),
        DomainSpec::HalflineFamily(_) => vec![],
    };
    for s in edge {
        if let Some(nu) = d.inward_normal(s) {
            points.push(s + nu * cfg.boundary_band);
        }
    }
    match d {
        DomainSpec::HalflineFamily(lines) => {
            for l in lines {
                let count = 4 * n;
                for i in 1..=count {
                    let t = -l.overshoot + (1.0 + l.overshoot) * i as f64 / count as f64;
                    points.push(l.point(t));
                }
                let mut t = 1.0;
                while t < cfg.ray_t_max {
                    t *= 1.05;
                    points.push(l.point(t.min(cfg.ray_t_max)));
                }
            }
        }
        _ if !d.is_bounded() => {
            let ts = ray_parameters(cfg.ray_t_max);
            for (p, h) in escape_directions(f, d) {
                points.extend(ts.iter().map(|t| p + h * *t));
            }
        }
        _ => {}
    }
    Ok((points, spacing))
}

fn top_distinct(pool: &[Sample], count: usize) -> Vec<Sample> {
    let mut sorted = pool.to_vec();
    sorted.sort_by(|a, b| better(b, a));
    let mut out: Vec<Sample> = Vec::with_capacity(count);
    for s in sorted {
        if out.len() == count {
            break;
        }
        if !out.iter().any(|t| t.z == s.z) {
            out.push(s);
        }
    }
    out
}

/// Points stepping geometrically from `z` toward its nearest boundary point.
fn boundary_approach(d: &DomainSpec, z: Complex64, band: f64) -> Vec<Complex64> {
    let dist = d.boundary_distance(z);
    if !dist.is_finite() || dist <= band {
        return vec![];
    }
    let Some(nu) = d.inward_normal(z) else {
        return vec![];
    };
    let foot = z - nu * dist;
    let mut out = Vec::new();
    let mut delta = dist;
    while delta > band {
        delta = (delta * 0.5).max(band);
        out.push(foot + nu * delta);
    }
    out
}

/// Estimate `sup_{z∈d} |f^(order)(z)|` by sampling. The estimate is a
/// maximum of exact values at in-domain points, so it never exceeds the true
/// supremum.
pub fn estimate_sup(f: &FunctionHandle, order: u32, d: &DomainSpec, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.validate()?;
    let mut ev = Evaluator::new(f, order, d, cfg.budget);
    let (points, spacing) = initial_points(f, d, cfg)?;
    let mut pool = ev.samples(&points);
    let mut best = pool.iter().copied().max_by(better);
    let mut history = vec![best.map_or(0.0, |s| s.modulus)];

    let mut gain = f64::INFINITY;
    for round in 1..=cfg.refinement_rounds {
        if ev.exhausted || pool.is_empty() {
            break;
        }
        let h = spacing * 0.25f64.powi(round as i32);
        let mut fresh = Vec::new();
        for s in top_distinct(&pool, TOP_POINTS) {
            for i in -LOCAL_GRID..=LOCAL_GRID {
                for j in -LOCAL_GRID..=LOCAL_GRID {
                    if i != 0 || j != 0 {
                        fresh.push(s.z + Complex64::new(i as f64 * h, j as f64 * h));
                    }
                }
            }
            fresh.extend(boundary_approach(d, s.z, cfg.boundary_band));
        }
        let new = ev.samples(&fresh);
        let previous = history.last().copied().unwrap_or(0.0);
        if let Some(top) = new.iter().copied().max_by(better) {
            if best.is_none_or(|b| better(&top, &b) == Ordering::Greater) {
                best = Some(top);
            }
        }
        pool.extend(new);
        let current = best.map_or(0.0, |s| s.modulus);
        gain = if previous > 0.0 {
            (current - previous) / previous
        } else if current > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        history.push(current);
    }

    let witness = search_witness(&mut ev, f, order, d, cfg.divergence_threshold, cfg);
    if let Some(w) = &witness {
        let last = Sample {
            z: *w.points.last().expect("non-empty"),
            modulus: *w.moduli.last().expect("non-empty"),
        };
        if best.is_none_or(|b| better(&last, &b) == Ordering::Greater) {
            best = Some(last);
            history.push(last.modulus);
        }
    }
    let best = best.unwrap_or(Sample {
        z: d.interior_point(),
        modulus: 0.0,
    });
    Ok(ProbeReport {
        order,
        sup_estimate: best.modulus,
        argmax: best.z,
        history,
        verdict: if witness.is_some() {
            Verdict::DivergenceWitness
        } else {
            Verdict::BoundedEstimate
        },
        witness,
        converged: gain < SETTLE_GAIN,
        budget_exhausted: ev.exhausted,
        evaluations: ev.used,
    })
}

/// `g^(k)(t)` for `g(t) = f(p + t h)`, i.e. `f^(k)(p + t h) h^k`.
pub fn halfline_derivative(f: &FunctionHandle, k: u32, p: Complex64, h: Complex64, t: f64) -> Result<Complex64> {
    let z = p + h * t;
    let value = f.closed_form_derivative(k).eval(z)?;
    Ok(value * h.powu(k))
}

/// Sup of `|f^(k)(p + t h)|` over `t > -overshoot`, sampled uniformly on
/// `(-overshoot, 1]`, geometrically out to `ray_t_max`, then refined locally.
pub fn probe_halfline(
    f: &FunctionHandle,
    k: u32,
    p: Complex64,
    h: Complex64,
    overshoot: f64,
    cfg: &ProbeConfig,
) -> Result<f64> {
    cfg.validate()?;
    if overshoot.is_nan() || overshoot <= 0.0 || h.norm() == 0.0 {
        return Err(Error::BadParameter("half-line needs a direction and positive overshoot".into()));
    }
    let h = h / h.norm();
    let from = p - h * overshoot;
    let to = p + h * cfg.ray_t_max;
    if f
        .singular_points()
        .iter()
        .any(|s| point_segment_distance(*s, from, to) <= 1e-12 * (1.0 + s.norm()))
    {
        return Err(Error::SegmentExitsDomain { from, to });
    }
    let g = f.closed_form_derivative(k);
    let modulus = |t: f64| {
        let m = g.value(p + h * t).norm();
        if m.is_finite() {
            m
        } else {
            0.0
        }
    };
    let count = 4 * cfg.coarse_grid;
    let mut ts: Vec<f64> = (1..=count)
        .map(|i| -overshoot + (1.0 + overshoot) * i as f64 / count as f64)
        .collect();
    let mut t = 1.0;
    while t < cfg.ray_t_max {
        t = (t * 1.02).min(cfg.ray_t_max);
        ts.push(t);
    }
    let eval = |ts: &[f64]| -> Vec<(f64, f64)> { ts.par_iter().map(|t| (*t, modulus(*t))).collect() };
    let pick = |vals: &[(f64, f64)]| {
        vals.iter()
            .copied()
            .fold((0.0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc })
    };
    let mut best = pick(&eval(&ts));
    let mut step = (1.0 + overshoot) / count as f64;
    for _ in 0..(2 * cfg.refinement_rounds) {
        let local: Vec<f64> = (-10..=10)
            .map(|i| best.0 + i as f64 * step)
            .filter(|t| *t > -overshoot && *t <= cfg.ray_t_max)
            .collect();
        let cand = pick(&eval(&local));
        if cand.1 > best.1 {
            best = cand;
        }
        step *= 0.2;
    }
    Ok(best.1.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Kind;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pole_on_upper_half_plane() {
        let f = FunctionHandle::pole(c(0.0, -2.0));
        let r = estimate_sup(&f, 0, &DomainSpec::upper_half_plane(), &ProbeConfig::default()).unwrap();
        assert!((r.sup_estimate - 0.5).abs() <= 0.005, "{}", r.sup_estimate);
        assert!(r.sup_estimate <= 0.5);
        assert!(r.history.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.verdict, Verdict::BoundedEstimate);
        assert!(r.argmax.norm() < 0.1);
    }

    #[test]
    fn monomial_second_derivative_is_constant() {
        let f = FunctionHandle::monomial(2);
        let r = estimate_sup(&f, 2, &DomainSpec::unit_square(), &ProbeConfig::default()).unwrap();
        assert_eq!(r.sup_estimate, 2.0);
    }

    #[test]
    fn boundary_essential_sup_on_disc() {
        let f = FunctionHandle::boundary_essential();
        let r = estimate_sup(&f, 0, &DomainSpec::unit_disc(), &ProbeConfig::default()).unwrap();
        assert!(r.sup_estimate <= 2.0 && r.sup_estimate >= 2.0 - 1e-2, "{}", r.sup_estimate);
        assert!((r.argmax + 1.0).norm() < 0.1);
    }

    #[test]
    fn derivative_of_boundary_essential_escalates() {
        let f = FunctionHandle::boundary_essential();
        let d = DomainSpec::unit_disc();
        let w = find_divergence_witness(&f, 1, &d, 1e3, &ProbeConfig::default())
            .unwrap()
            .expect("witness");
        assert!(w.is_valid_for(&d));
        assert!((w.points.last().unwrap() - 1.0).norm() < 0.1);
    }

    #[test]
    fn no_witness_for_bounded_pole() {
        let f = FunctionHandle::pole(c(0.0, -2.0));
        let w = find_divergence_witness(&f, 0, &DomainSpec::upper_half_plane(), 1.0, &ProbeConfig::default()).unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn directional_exp_escalates_along_its_ray() {
        let theta = 0.7;
        let f = FunctionHandle::directional_exp(theta);
        let w = find_divergence_witness(&f, 2, &DomainSpec::Plane, 1e6, &ProbeConfig::default())
            .unwrap()
            .expect("witness");
        for (n, (z, m)) in w.points.iter().zip(&w.moduli).enumerate() {
            let n = (n + 1) as f64;
            assert!((z - Complex64::from_polar(n, theta)).norm() < 1e-12);
            assert!((m / n.exp() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn halfline_examples() {
        let cfg = ProbeConfig::default();
        let pole = FunctionHandle::pole(c(0.0, -2.0));
        let v = probe_halfline(&pole, 0, c(0.0, 1.0), c(1.0, 0.0), 0.5, &cfg).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-3 / 3.0);

        let constant = FunctionHandle::constant(c(3.0, 1.0));
        assert_eq!(probe_halfline(&constant, 2, c(0.0, 0.0), c(1.0, 0.0), 1.0, &cfg).unwrap(), 0.0);

        let sine = FunctionHandle::sine();
        let v = probe_halfline(&sine, 3, c(0.0, 0.0), c(1.0, 0.0), 1.0, &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-3);

        let on_path = FunctionHandle::pole(c(5.0, 0.0));
        assert!(matches!(
            probe_halfline(&on_path, 0, c(0.0, 0.0), c(1.0, 0.0), 1.0, &cfg),
            Err(Error::SegmentExitsDomain { .. })
        ));
    }

    #[test]
    fn exp_iz_is_bounded_on_upper_half_plane() {
        let f = FunctionHandle::make(Kind::DirectionalExp { theta: -FRAC_PI_2 }).unwrap();
        let r = estimate_sup(&f, 1, &DomainSpec::upper_half_plane(), &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedEstimate);
        assert!(r.sup_estimate <= 1.0 && r.sup_estimate > 0.99);
    }

    #[test]
    fn escalating_run_needs_eight_increasing() {
        let pts: Vec<Complex64> = (0..10).map(|k| c(k as f64, 0.0)).collect();
        let mut ms: Vec<Option<f64>> = (0..10).map(|k| Some(k as f64)).collect();
        assert!(escalating_run(&pts, &ms, 9.0).is_some());
        ms[4] = Some(0.0);
        assert!(escalating_run(&pts, &ms, 9.0).is_none());
    }

    #[test]
    fn budget_is_respected() {
        let cfg = ProbeConfig {
            budget: 500,
            ..ProbeConfig::default()
        };
        let r = estimate_sup(&FunctionHandle::sine(), 0, &DomainSpec::unit_square(), &cfg).unwrap();
        assert!(r.budget_exhausted);
        assert!(r.evaluations <= 500);
    }
}
