//! Order sets and their fillings, membership evidence for the spaces of
//! functions with bounded (or continuously extendable) derivatives, segment
//! primitives, and the gap-filling checks for unbounded and bounded convex
//! domains.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::FunctionHandle;
use crate::error::{Error, Result};
use crate::favard::{sup_norm, verify_max_form, SupValue, VerificationRecord, DEFAULT_SLACK};
use crate::geometry::{clip_to_disc, diameter, DomainSpec};
use crate::numerics::{segment_integral, Analytic};
use crate::probe::{estimate_sup, ProbeConfig, ProbeReport, Verdict};

/// Relative slack for [`chain_bound`].
pub const CHAIN_SLACK: f64 = 0.02;
/// Quadrature tolerance for primitives.
pub const PRIMITIVE_TOL: f64 = 1e-12;
/// Scales `0.1 · 2^-k`, `k = 0..=10`, for the boundary oscillation probe.
pub const CONTINUITY_SCALES: usize = 11;
/// An oscillation passes when its last value is at most this fraction of the first.
pub const OSCILLATION_DECAY: f64 = 0.25;
const OSCILLATION_FLOOR: f64 = 1e-12;

/// Non-empty set of derivative orders. With `sup_infinite`, `elements` holds
/// the known finite part; `tail_from = Some(m)` additionally means every
/// order `>= m` belongs to the set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSet {
    elements: BTreeSet<u32>,
    sup_infinite: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail_from: Option<u32>,
}

impl OrderSet {
    pub fn new<I: IntoIterator<Item = u32>>(orders: I) -> Result<Self> {
        let elements: BTreeSet<u32> = orders.into_iter().collect();
        if elements.is_empty() {
            return Err(Error::BadParameter("order set must be non-empty".into()));
        }
        Ok(Self {
            elements,
            sup_infinite: false,
            tail_from: None,
        })
    }

    /// An infinite set known through a finite part.
    pub fn unbounded<I: IntoIterator<Item = u32>>(known: I) -> Result<Self> {
        let mut set = Self::new(known)?;
        set.sup_infinite = true;
        Ok(set)
    }

    /// `{m, m+1, ...}`
    pub fn from_onwards(m: u32) -> Self {
        Self {
            elements: BTreeSet::from([m]),
            sup_infinite: true,
            tail_from: Some(m),
        }
    }

    pub fn elements(&self) -> &BTreeSet<u32> {
        &self.elements
    }

    pub fn sup_infinite(&self) -> bool {
        self.sup_infinite
    }

    pub fn tail_from(&self) -> Option<u32> {
        self.tail_from
    }

    pub fn min(&self) -> u32 {
        *self.elements.first().expect("non-empty")
    }

    /// `None` when the supremum is infinite.
    pub fn max(&self) -> Option<u32> {
        (!self.sup_infinite).then(|| *self.elements.last().expect("non-empty"))
    }

    pub fn contains(&self, l: u32) -> bool {
        self.elements.contains(&l) || self.tail_from.is_some_and(|m| l >= m)
    }

    /// Explicit (finite) orders, for probing.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    fn finite_orders(&self) -> Result<&BTreeSet<u32>> {
        if self.sup_infinite {
            Err(Error::SupInfinite)
        } else {
            Ok(&self.elements)
        }
    }
}

/// `{l : min F <= l <= sup F}`.
pub fn tilde(f: &OrderSet) -> OrderSet {
    match f.max() {
        Some(top) => OrderSet {
            elements: (f.min()..=top).collect(),
            sup_infinite: false,
            tail_from: None,
        },
        None => OrderSet::from_onwards(f.min()),
    }
}

/// `{l : 0 <= l <= sup F}`.
pub fn tilde0(f: &OrderSet) -> Result<OrderSet> {
    let top = f.max().ok_or(Error::SupInfinite)?;
    OrderSet::new(0..=top)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Space {
    HInf,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MembershipStatus {
    EvidenceMember,
    WitnessNonMember,
}

/// Maximum oscillation of `f^(order)` over boundary-adjacent point pairs at
/// each scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbe {
    pub scales: Vec<f64>,
    pub oscillations: Vec<f64>,
    /// Location of the largest oscillation at the finest scale.
    pub worst_point: Complex64,
    /// Clip radius when the domain had to be localised.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_radius: Option<u32>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipEntry {
    pub order: u32,
    pub space: Space,
    pub status: MembershipStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuity: Option<ContinuityProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub entries: Vec<MembershipEntry>,
}

impl MembershipVerdict {
    pub fn status(&self, order: u32, space: Space) -> Option<MembershipStatus> {
        self.entries
            .iter()
            .find(|e| e.order == order && e.space == space)
            .map(|e| e.status)
    }

    pub fn all_members(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status == MembershipStatus::EvidenceMember)
    }
}

/// Boundary anchors with an inward normal and the curvature used for
/// tangential approach paths.
fn anchors(f: &FunctionHandle, d: &DomainSpec) -> Vec<(Complex64, Complex64, f64)> {
    let mut points: Vec<Complex64> = match d {
        DomainSpec::DiscExterior { center, radius } => DomainSpec::Disc {
            center: *center,
            radius: *radius,
        }
        .boundary_points(8),
        _ => d.boundary_points(8),
    };
    for s in f.singular_points() {
        if !d.contains(*s) && d.closure_distance(*s) <= 1e-12 {
            points.push(*s);
        }
    }
    let kappa = match d {
        DomainSpec::Disc { radius, .. } => 1.0 / radius,
        _ => 1.0,
    };
    points
        .into_iter()
        .filter_map(|s| d.inward_normal(s).map(|nu| (s, nu, kappa)))
        .collect()
}

fn oscillation_probe(f: &FunctionHandle, order: u32, d: &DomainSpec) -> (Vec<f64>, Vec<f64>, Complex64) {
    let g = f.closed_form_derivative(order);
    let value = |z: Complex64| -> Option<Complex64> {
        (d.contains(z) && g.region().contains(z))
            .then(|| g.value(z))
            .filter(|v| v.is_finite())
    };
    let anchors = anchors(f, d);
    let mut scales = Vec::with_capacity(CONTINUITY_SCALES);
    let mut oscillations = Vec::with_capacity(CONTINUITY_SCALES);
    let mut worst = d.interior_point();
    for k in 0..CONTINUITY_SCALES {
        let delta = 0.1 * 0.5f64.powi(k as i32);
        let tau = delta.sqrt();
        let mut osc = 0.0_f64;
        for (s, nu, kappa) in &anchors {
            let tangent = nu * Complex64::new(0.0, 1.0);
            let Some(radial) = value(s + nu * delta) else { continue };
            let partners = [
                s + nu * (2.0 * delta),
                s + (nu + tangent) * delta,
                s + (nu - tangent) * delta,
                s + tangent * tau + nu * (kappa * tau * tau),
                s - tangent * tau + nu * (kappa * tau * tau),
            ];
            for z in partners {
                if let Some(v) = value(z) {
                    let diff = (v - radial).norm();
                    if diff > osc {
                        osc = diff;
                        if k + 1 == CONTINUITY_SCALES {
                            worst = *s;
                        }
                    }
                }
            }
        }
        scales.push(delta);
        oscillations.push(osc);
    }
    (scales, oscillations, worst)
}

fn oscillation_passes(oscillations: &[f64]) -> bool {
    let first = oscillations[0];
    let last = *oscillations.last().expect("non-empty");
    last <= OSCILLATION_FLOOR.max(OSCILLATION_DECAY * first)
}

/// Boundary-continuity evidence for `f^(order)`. Unbounded convex domains
/// are localised to `d ∩ D(0, m)` for `m = 1..=cfg.clip_radius`; the first
/// failing localisation is reported.
pub fn continuity_probe(f: &FunctionHandle, order: u32, d: &DomainSpec, cfg: &ProbeConfig) -> Result<ContinuityProbe> {
    let localise = !d.is_bounded() && d.is_convex();
    if !localise {
        let (scales, oscillations, worst_point) = oscillation_probe(f, order, d);
        return Ok(ContinuityProbe {
            pass: oscillation_passes(&oscillations),
            scales,
            oscillations,
            worst_point,
            clip_radius: None,
        });
    }
    let mut last = None;
    for m in 1..=cfg.clip_radius {
        let piece = clip_to_disc(d, m)?;
        let (scales, oscillations, worst_point) = oscillation_probe(f, order, &piece);
        let record = ContinuityProbe {
            pass: oscillation_passes(&oscillations),
            scales,
            oscillations,
            worst_point,
            clip_radius: Some(m),
        };
        if !record.pass {
            return Ok(record);
        }
        last = Some(record);
    }
    Ok(last.expect("clip_radius >= 1"))
}

/// Per-order evidence for membership in both spaces.
pub fn membership_verdict(f: &FunctionHandle, orders: &OrderSet, d: &DomainSpec, cfg: &ProbeConfig) -> Result<MembershipVerdict> {
    let orders = orders.finite_orders()?;
    let mut entries = Vec::with_capacity(2 * orders.len());
    for &l in orders {
        let report = estimate_sup(f, l, d, cfg)?;
        let diverges = report.verdict == Verdict::DivergenceWitness;
        let continuity = continuity_probe(f, l, d, cfg)?;
        let a_member = continuity.pass && !(diverges && d.is_bounded());
        entries.push(MembershipEntry {
            order: l,
            space: Space::HInf,
            status: if diverges {
                MembershipStatus::WitnessNonMember
            } else {
                MembershipStatus::EvidenceMember
            },
            probe: Some(report),
            continuity: None,
        });
        entries.push(MembershipEntry {
            order: l,
            space: Space::A,
            status: if a_member {
                MembershipStatus::EvidenceMember
            } else {
                MembershipStatus::WitnessNonMember
            },
            probe: None,
            continuity: Some(continuity),
        });
    }
    Ok(MembershipVerdict { entries })
}

/// `∫_[base, z] f(ζ) dζ` on a convex domain.
pub fn primitive(f: &FunctionHandle, base: Complex64, z: Complex64, d: &DomainSpec) -> Result<Complex64> {
    if !d.is_convex() {
        return Err(Error::NotConvex);
    }
    for p in [base, z] {
        if !d.contains(p) {
            return Err(Error::BadParameter(format!("{p} is not in the domain")));
        }
    }
    segment_integral(f, base, z, PRIMITIVE_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub order: u32,
    pub alpha: u32,
    pub z_o: Complex64,
    pub diameter: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub m_alpha: SupValue,
    /// `|f^(k)(z_o)|` for `k = order..alpha`.
    pub anchor_values: Vec<f64>,
    /// Evaluations spent probing the left-hand side.
    pub evaluations: u64,
    pub pass: bool,
}

/// `sup|f^(l)| <= sup|f^(α)| diam^(α-l) + Σ_{k=l}^{α-1} |f^(k)(z_o)| diam^(k-l)`
/// on a bounded convex domain.
pub fn chain_bound(f: &FunctionHandle, l: u32, alpha: u32, d: &DomainSpec, z_o: Complex64, cfg: &ProbeConfig) -> Result<ChainBound> {
    if l >= alpha {
        return Err(Error::BadParameter(format!("need l < alpha, got {l} >= {alpha}")));
    }
    if !d.is_convex() {
        return Err(Error::NotConvex);
    }
    let diam = diameter(d)?;
    if !d.contains(z_o) {
        return Err(Error::BadParameter(format!("{z_o} is not in the domain")));
    }
    let probe = estimate_sup(f, l, d, cfg)?;
    let lhs = probe.sup_estimate;
    let m_alpha = sup_norm(f, alpha, d, cfg)?;
    if m_alpha.value.is_infinite() {
        return Err(Error::UnboundedInput { order: alpha });
    }
    let anchor_values = (l..alpha)
        .map(|k| f.closed_form_derivative(k).eval(z_o).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?;
    let mut rhs = m_alpha.value * diam.powi((alpha - l) as i32);
    for (i, v) in anchor_values.iter().enumerate() {
        rhs += v * diam.powi(i as i32);
    }
    Ok(ChainBound {
        order: l,
        alpha,
        z_o,
        diameter: diam,
        lhs,
        rhs,
        m_alpha,
        anchor_values,
        evaluations: probe.evaluations,
        pass: lhs <= rhs * (1.0 + CHAIN_SLACK),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub orders: OrderSet,
    pub filled: OrderSet,
    /// Sups of the given orders, checked finite before any gap is examined.
    pub inputs: Vec<SupValue>,
    pub records: Vec<VerificationRecord>,
    pub vacuous: bool,
    pub pass: bool,
}

/// Fills every gap of `F` on a union of half-lines using the tightest
/// bracketing pair from `F`.
pub fn halfline_gap_check(f: &FunctionHandle, orders: &OrderSet, d: &DomainSpec, cfg: &ProbeConfig) -> Result<GapReport> {
    let given = orders.finite_orders()?;
    let inputs = given
        .iter()
        .map(|&a| sup_norm(f, a, d, cfg))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = inputs.iter().find(|s| s.value.is_infinite()) {
        return Err(Error::UnboundedInput { order: bad.order });
    }
    let filled = tilde(orders);
    let mut records = Vec::new();
    for l in filled.iter().filter(|l| !given.contains(l)) {
        let below = *given.range(..l).next_back().expect("l > min F");
        let above = *given.range(l + 1..).next().expect("l < max F");
        records.push(verify_max_form(f, d, below, l, above, cfg, DEFAULT_SLACK)?);
    }
    Ok(GapReport {
        orders: orders.clone(),
        filled,
        inputs,
        vacuous: records.is_empty(),
        pass: records.iter().all(|r| r.pass),
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedGapReport {
    pub orders: OrderSet,
    pub filled: OrderSet,
    pub alpha: u32,
    pub z_o: Complex64,
    pub records: Vec<ChainBound>,
    pub vacuous: bool,
    pub pass: bool,
}

/// Fills `{0..max F} \ F` on a bounded convex domain by integrating the top
/// derivative from the domain's reference point.
pub fn bounded_gap_check(f: &FunctionHandle, orders: &OrderSet, d: &DomainSpec, cfg: &ProbeConfig) -> Result<BoundedGapReport> {
    let given = orders.finite_orders()?;
    if !d.is_bounded() {
        return Err(Error::UnboundedDomain);
    }
    let alpha = *given.last().expect("non-empty");
    let top = sup_norm(f, alpha, d, cfg)?;
    if top.value.is_infinite() {
        return Err(Error::UnboundedInput { order: alpha });
    }
    let z_o = d.interior_point();
    let filled = tilde0(orders)?;
    let records = filled
        .iter()
        .filter(|l| !given.contains(l))
        .map(|l| chain_bound(f, l, alpha, d, z_o, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundedGapReport {
        orders: orders.clone(),
        filled,
        alpha,
        z_o,
        vacuous: records.is_empty(),
        pass: records.iter().all(|r| r.pass),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Kind;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn set(v: &[u32]) -> OrderSet {
        OrderSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(tilde(&set(&[0, 3])), set(&[0, 1, 2, 3]));
        assert_eq!(tilde(&set(&[2, 5, 7])), set(&[2, 3, 4, 5, 6, 7]));
        assert_eq!(tilde(&set(&[1])), set(&[1]));
        assert_eq!(tilde0(&set(&[1])).unwrap(), set(&[0, 1]));
        assert_eq!(tilde0(&set(&[0])).unwrap(), set(&[0]));
        assert_eq!(tilde0(&set(&[2, 5])).unwrap(), set(&[0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn infinite_sets() {
        let f = OrderSet::unbounded([3, 9]).unwrap();
        let t = tilde(&f);
        assert!(t.contains(3) && t.contains(1000) && !t.contains(2));
        assert_eq!(tilde(&t), t);
        assert_eq!(tilde0(&f), Err(Error::SupInfinite));
        assert!(OrderSet::new([]).is_err());
    }

    #[test]
    fn pole_on_square_is_a_member() {
        let f = FunctionHandle::pole(c(3.0, 3.0));
        let v = membership_verdict(&f, &set(&[0, 1, 2]), &DomainSpec::unit_square(), &ProbeConfig::default()).unwrap();
        assert_eq!(v.entries.len(), 6);
        assert!(v.all_members());
    }

    #[test]
    fn boundary_essential_membership() {
        let f = FunctionHandle::boundary_essential();
        let v = membership_verdict(&f, &set(&[0, 1]), &DomainSpec::unit_disc(), &ProbeConfig::default()).unwrap();
        assert_eq!(v.status(0, Space::HInf), Some(MembershipStatus::EvidenceMember));
        assert_eq!(v.status(0, Space::A), Some(MembershipStatus::EvidenceMember));
        assert_eq!(v.status(1, Space::HInf), Some(MembershipStatus::WitnessNonMember));
        assert_eq!(v.status(1, Space::A), Some(MembershipStatus::WitnessNonMember));
    }

    #[test]
    fn monomial_on_upper_half_plane() {
        let l = 2;
        let f = FunctionHandle::monomial(l + 1);
        let v = membership_verdict(&f, &set(&[l]), &DomainSpec::upper_half_plane(), &ProbeConfig::default()).unwrap();
        assert_eq!(v.status(l, Space::HInf), Some(MembershipStatus::WitnessNonMember));
        assert_eq!(v.status(l, Space::A), Some(MembershipStatus::EvidenceMember));
        let hinf = v.entries.iter().find(|e| e.space == Space::HInf).unwrap();
        assert!(hinf.probe.as_ref().unwrap().witness.is_some());
    }

    #[test]
    fn primitive_examples() {
        let one = FunctionHandle::constant(c(1.0, 0.0));
        let z = c(0.3, -0.4);
        let v = primitive(&one, c(0.0, 0.0), z, &DomainSpec::unit_disc()).unwrap();
        assert!((v - z).norm() < 1e-14);

        let two_z = FunctionHandle::scalar_multiple(c(2.0, 0.0), Kind::Monomial { degree: 1 });
        let sq = DomainSpec::hpoly(&[
            (c(-1.0, 0.0), 0.5),
            (c(1.0, 0.0), 1.5),
            (c(0.0, -1.0), 0.5),
            (c(0.0, 1.0), 1.5),
        ])
        .unwrap();
        let v = primitive(&two_z, c(0.0, 0.0), c(1.0, 1.0), &sq).unwrap();
        assert!((v - c(0.0, 2.0)).norm() < 1e-12);

        let ext = DomainSpec::disc_exterior(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(primitive(&one, c(2.0, 0.0), c(-2.0, 0.0), &ext), Err(Error::NotConvex));
    }

    #[test]
    fn chain_bound_examples() {
        let cfg = ProbeConfig::default();
        let r = chain_bound(&FunctionHandle::monomial(2), 0, 2, &DomainSpec::unit_square(), c(0.5, 0.5), &cfg).unwrap();
        assert!((r.lhs - 2.0).abs() < 0.02);
        assert!((r.rhs - 6.5).abs() < 1e-12);
        assert!(r.pass);

        let k = c(2.0, -1.0);
        let r = chain_bound(&FunctionHandle::constant(k), 0, 1, &DomainSpec::unit_disc(), c(0.0, 0.0), &cfg).unwrap();
        assert_eq!(r.lhs, k.norm());
        assert_eq!(r.rhs, k.norm());
        assert!(r.pass);

        let r = chain_bound(&FunctionHandle::pole(c(3.0, 0.0)), 0, 1, &DomainSpec::unit_disc(), c(0.0, 0.0), &cfg).unwrap();
        assert!((r.rhs - 5.0 / 6.0).abs() < 1e-12);
        assert!(r.lhs <= 0.5 && r.lhs > 0.495);
        assert!(r.pass);

        assert_eq!(
            chain_bound(&FunctionHandle::sine(), 0, 1, &DomainSpec::upper_half_plane(), c(0.0, 1.0), &cfg),
            Err(Error::UnboundedDomain)
        );
    }

    #[test]
    fn gap_checks() {
        let cfg = ProbeConfig::default();
        let r = halfline_gap_check(&FunctionHandle::pole(c(0.0, -2.0)), &set(&[0, 2]), &DomainSpec::upper_half_plane(), &cfg).unwrap();
        assert!(r.pass && !r.vacuous);
        assert_eq!(r.records.len(), 1);
        assert_eq!((r.records[0].alpha1, r.records[0].order, r.records[0].alpha2), (0, 1, 2));

        let r = halfline_gap_check(&FunctionHandle::sine(), &set(&[0, 4]), &DomainSpec::real_line_family(), &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.records.len(), 3);
        assert!(r.records.iter().all(|x| x.lhs == 1.0));

        let r = bounded_gap_check(&FunctionHandle::pole(c(3.0, 0.0)), &set(&[1]), &DomainSpec::unit_disc(), &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.records.len(), 1);

        let r = bounded_gap_check(&FunctionHandle::boundary_essential(), &set(&[0]), &DomainSpec::unit_disc(), &cfg).unwrap();
        assert!(r.pass && r.vacuous);

        let r = bounded_gap_check(&FunctionHandle::monomial(4), &set(&[2]), &DomainSpec::unit_square(), &cfg).unwrap();
        assert!(r.pass);
        assert_eq!(r.records.len(), 2);
    }

    #[test]
    fn gap_check_rejects_unbounded_inputs() {
        let cfg = ProbeConfig::default();
        assert_eq!(
            halfline_gap_check(&FunctionHandle::monomial(1), &set(&[0, 2]), &DomainSpec::upper_half_plane(), &cfg).map(|r| r.pass),
            Err(Error::UnboundedInput { order: 0 })
        );
        assert_eq!(
            bounded_gap_check(&FunctionHandle::sine(), &set(&[1]), &DomainSpec::upper_half_plane(), &cfg).map(|r| r.pass),
            Err(Error::UnboundedDomain)
        );
    }
}
