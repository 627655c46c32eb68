//! Favard constants, whole-line Landau–Kolmogorov constants, and the
//! max-form inequality check `M_l <= C(α1, l, α2) · max(M_α1, M_α2)`.
//!
//! `K_n = (4/π) Σ_{j≥0} ((-1)^j / (2j+1))^{n+1}`. With `p = n + 1` the summand
//! is `(-1)^j (2j+1)^{-p}` for even `n` and `(2j+1)^{-p}` for odd `n`.
//!
//! The tail is summed with a certified trapezoid correction. Let `b` be
//! completely monotone with `b(i)` the `i`-th summand (for even `n`, pair terms: `b(i) = (4i+1)^{-p} - (4i+3)^{-p}`).
//! Then for the tail from index `I`,
//!
//! ```text
//! Σ_{i≥I} b(i) = ∫_I^∞ b + b(I)/2 + E,   0 <= E <= -b'(I)/8,
//! ```
//!
//! because the trapezoid rule overestimates convex integrands by at most
//! `h²(b'(right) - b'(left))/8` per panel and the bound telescopes. Taking
//! `E ≈ -b'(I)/16` leaves an error of at most `-b'(I)/16`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::catalog::FunctionHandle;
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::probe::{estimate_sup, ProbeConfig, ProbeReport, Verdict};

/// Maximum number of series terms.
pub const TERM_CAP: u64 = 10_000_000;

/// Default relative slack in the max-form check.
pub const DEFAULT_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub value: f64,
    /// Certified bound on `|value - exact|`.
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl ConstantResult {
    fn exact(value: f64) -> Self {
        Self {
            value,
            tail_bound: 0.0,
            terms_used: 0,
        }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.tail_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Neumaier compensated sum; its error is at most `2u|S| + O(n u²) Σ|x_i|`.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
    abs: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Partial sum, truncation bound and raw term count for a given cut.
struct Cut {
    head: f64,
    abs_head: f64,
    tail: f64,
    truncation: f64,
    terms: u64,
}

fn alternating_cut(p: i32, pairs: u64) -> Cut {
    let pf = p as f64;
    let b = |x: f64| (4.0 * x + 1.0).powi(-p) - (4.0 * x + 3.0).powi(-p);
    let mut head = Compensated::default();
    for i in (0..pairs).rev() {
        head.add(b(i as f64));
    }
    let x = pairs as f64;
    let integral = if p == 1 {
        0.25 * (2.0 / (4.0 * x + 1.0)).ln_1p()
    } else {
        ((4.0 * x + 1.0).powf(1.0 - pf) - (4.0 * x + 3.0).powf(1.0 - pf)) / (4.0 * (pf - 1.0))
    };
    let slope = 4.0 * pf * ((4.0 * x + 1.0).powi(-p - 1) - (4.0 * x + 3.0).powi(-p - 1));
    Cut {
        head: head.value(),
        abs_head: head.abs,
        tail: integral + 0.5 * b(x) + slope / 16.0,
        truncation: slope / 16.0,
        terms: 2 * pairs,
    }
}

fn positive_cut(p: i32, terms: u64) -> Cut {
    let pf = p as f64;
    let a = |x: f64| (2.0 * x + 1.0).powi(-p);
    let mut head = Compensated::default();
    for j in (0..terms).rev() {
        head.add(a(j as f64));
    }
    let x = terms as f64;
    let integral = (2.0 * x + 1.0).powf(1.0 - pf) / (2.0 * (pf - 1.0));
    let slope = 2.0 * pf * (2.0 * x + 1.0).powi(-p - 1);
    Cut {
        head: head.value(),
        abs_head: head.abs,
        tail: integral + 0.5 * a(x) + slope / 16.0,
        truncation: slope / 16.0,
        terms,
    }
}

/// `K_n` with a certified error bound below `tol`.
pub fn favard_constant(n: u32, tol: f64) -> Result<ConstantResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::BadParameter("tolerance must be positive".into()));
    }
    if n > 1000 {
        return Err(Error::BadParameter("order too large".into()));
    }
    let p = n as i32 + 1;
    let scale = 4.0 / PI;
    let mut count: u64 = 8;
    loop {
        let cut = if n.is_multiple_of(2) {
            alternating_cut(p, count)
        } else {
            positive_cut(p, count)
        };
        if cut.terms > TERM_CAP {
            return Err(Error::TolTooTight { cap: TERM_CAP, tol });
        }
        let sum = cut.head + cut.tail;
        // compensated head, a few ulps per term of the head (pow), the tail
        // formulas, the final addition and the scaling
        let u = f64::EPSILON;
        let rounding = 4.0 * u * cut.abs_head
            + 4.0 * (cut.terms as f64) * u * u * cut.abs_head
            + 16.0 * u * cut.tail.abs()
            + 4.0 * u * sum.abs();
        let bound = scale * (cut.truncation + rounding);
        if bound < tol {
            return Ok(ConstantResult {
                value: scale * sum,
                tail_bound: bound,
                terms_used: cut.terms,
            });
        }
        count *= 2;
    }
}

/// Whole-line Kolmogorov constant `C(n, k) = K_{n-k} / K_n^{1-k/n}`.
pub fn lk_constant(n: u32, k: u32, tol: f64) -> Result<ConstantResult> {
    if n < 1 || k > n {
        return Err(Error::BadParameter(format!("need 0 <= k <= n and n >= 1, got n={n}, k={k}")));
    }
    if k == 0 || k == n {
        return Ok(ConstantResult::exact(1.0));
    }
    let inner = tol / 8.0;
    let top = favard_constant(n - k, inner)?;
    let bottom = favard_constant(n, inner)?;
    let e = 1.0 - k as f64 / n as f64;
    let value = top.value / bottom.value.powf(e);
    // K_m >= 1 for all m, so the interval endpoints are well defined
    let hi = top.upper() / bottom.lower().powf(e);
    let lo = top.lower() / bottom.upper().powf(e);
    let bound = (hi - value).max(value - lo) + 4.0 * f64::EPSILON * value;
    if bound >= tol {
        return Err(Error::TolTooTight { cap: TERM_CAP, tol });
    }
    Ok(ConstantResult {
        value,
        tail_bound: bound,
        terms_used: top.terms_used + bottom.terms_used,
    })
}

/// `C(α1, l, α2) = C(α2 - α1, l - α1)`.
pub fn shifted_lk_constant(alpha1: u32, l: u32, alpha2: u32, tol: f64) -> Result<ConstantResult> {
    if !(alpha1 < l && l < alpha2) {
        return Err(Error::OrderViolation {
            lower: alpha1,
            order: l,
            upper: alpha2,
        });
    }
    lk_constant(alpha2 - alpha1, l - alpha1, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SupSource {
    ClosedForm,
    Probe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupValue {
    pub order: u32,
    pub value: f64,
    pub source: SupSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub alpha1: u32,
    pub order: u32,
    pub alpha2: u32,
    pub constant: ConstantResult,
    pub m_alpha1: SupValue,
    pub m_l: SupValue,
    pub m_alpha2: SupValue,
    pub slack: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Sup of `|f^(order)|` on `d`: closed form when known, otherwise probed.
pub fn sup_norm(f: &FunctionHandle, order: u32, d: &DomainSpec, cfg: &ProbeConfig) -> Result<SupValue> {
    let g = f.closed_form_derivative(order);
    if let Some(value) = g.closed_form_sup(d) {
        return Ok(SupValue {
            order,
            value,
            source: SupSource::ClosedForm,
            probe: None,
        });
    }
    let report = estimate_sup(f, order, d, cfg)?;
    let value = if report.verdict == Verdict::DivergenceWitness {
        f64::INFINITY
    } else {
        report.sup_estimate
    };
    Ok(SupValue {
        order,
        value,
        source: SupSource::Probe,
        probe: Some(report),
    })
}

/// Check `M_l <= C(α1, l, α2) · max(M_α1, M_α2) · (1 + slack)` on a domain
/// that is a union of half-lines.
pub fn verify_max_form(
    f: &FunctionHandle,
    d: &DomainSpec,
    alpha1: u32,
    l: u32,
    alpha2: u32,
    cfg: &ProbeConfig,
    slack: f64,
) -> Result<VerificationRecord> {
    let constant = shifted_lk_constant(alpha1, l, alpha2, 1e-9)?;
    let halflines = match d {
        DomainSpec::HalflineFamily(_) | DomainSpec::Plane | DomainSpec::DiscExterior { .. } => true,
        DomainSpec::HPoly(p) => !p.is_bounded(),
        DomainSpec::Disc { .. } => false,
    };
    if !halflines {
        return Err(Error::NotHalflineUnion);
    }
    let m_alpha1 = sup_norm(f, alpha1, d, cfg)?;
    if m_alpha1.value.is_infinite() {
        return Err(Error::UnboundedInput { order: alpha1 });
    }
    let m_alpha2 = sup_norm(f, alpha2, d, cfg)?;
    if m_alpha2.value.is_infinite() {
        return Err(Error::UnboundedInput { order: alpha2 });
    }
    let m_l = sup_norm(f, l, d, cfg)?;
    let lhs = m_l.value;
    let rhs = constant.value * m_alpha1.value.max(m_alpha2.value);
    Ok(VerificationRecord {
        alpha1,
        order: l,
        alpha2,
        constant,
        pass: lhs <= rhs * (1.0 + slack),
        m_alpha1,
        m_l,
        m_alpha2,
        slack,
        lhs,
        rhs,
    })
}
