//! The fixed catalog of holomorphic test functions.
//!
//! Every entry is stored as an [`Expr`] tree that is closed under
//! differentiation, so derivatives of any order are exact formulas rather
//! than numerical approximations. The boundary-essential function
//! `w(z) = (z-1) exp((z+1)/(z-1))` is kept as a Laurent polynomial in
//! `u = 1/(z-1)` times `exp(1 + 2u)`, which avoids cancellation close to the
//! essential singularity at `z = 1`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::numerics::{Analytic, Region};

/// Catalog entry descriptor. This is also the on-disk form used by configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Kind {
    /// `1 / (z - w)`
    Pole { w: Complex64 },
    /// `(z - 1) exp((z + 1) / (z - 1))`
    BoundaryEssential,
    /// `exp(e^{-iθ} z)`
    DirectionalExp { theta: f64 },
    /// `z^degree`
    Monomial { degree: u32 },
    /// `sin z`
    Sine,
    Constant { c: Complex64 },
    Sum { terms: Vec<Kind> },
    ScalarMultiple { factor: Complex64, inner: Box<Kind> },
}

/// Closed-form expression tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Constant(Complex64),
    /// `coeff * (z - center)^exponent`
    Power {
        coeff: Complex64,
        center: Complex64,
        exponent: i32,
    },
    /// `coeff * exp(rate * z)`
    Exp { coeff: Complex64, rate: Complex64 },
    /// `coeff * sin(z + quarter_turns * π/2)`
    Sine { coeff: Complex64, quarter_turns: u8 },
    /// `Σ c_k u^k exp(1 + 2u)` with `u = 1/(z-1)`; keyed by `k`.
    Essential { terms: BTreeMap<i32, f64> },
    Sum(Vec<Expr>),
    Scaled(Complex64, Box<Expr>),
}

impl Expr {
    fn zero() -> Self {
        Expr::Constant(Complex64::new(0.0, 0.0))
    }

    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Constant(_) => Expr::zero(),
            Expr::Power {
                coeff,
                center,
                exponent,
            } => {
                if *exponent == 0 {
                    Expr::zero()
                } else {
                    Expr::Power {
                        coeff: coeff * *exponent as f64,
                        center: *center,
                        exponent: exponent - 1,
                    }
                }
            }
            Expr::Exp { coeff, rate } => Expr::Exp {
                coeff: coeff * rate,
                rate: *rate,
            },
            Expr::Sine {
                coeff,
                quarter_turns,
            } => Expr::Sine {
                coeff: *coeff,
                quarter_turns: (quarter_turns + 1) % 4,
            },
            // d/dz [u^k E] = -k u^{k+1} E - 2 u^{k+2} E, since du/dz = -u^2
            // and dE/dz = -2 u^2 E.
            Expr::Essential { terms } => {
                let mut next: BTreeMap<i32, f64> = BTreeMap::new();
                for (&k, &c) in terms {
                    if k != 0 {
                        *next.entry(k + 1).or_insert(0.0) -= k as f64 * c;
                    }
                    *next.entry(k + 2).or_insert(0.0) -= 2.0 * c;
                }
                next.retain(|_, c| *c != 0.0);
                if next.is_empty() {
                    Expr::zero()
                } else {
                    Expr::Essential { terms: next }
                }
            }
            Expr::Sum(terms) => Expr::Sum(terms.iter().map(Expr::differentiate).collect()),
            Expr::Scaled(c, inner) => Expr::Scaled(*c, Box::new(inner.differentiate())),
        }
    }

    pub fn nth_derivative(&self, order: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..order {
            e = e.differentiate();
        }
        e
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Constant(c) => *c,
            Expr::Power {
                coeff,
                center,
                exponent,
            } => {
                if *exponent == 0 {
                    *coeff
                } else {
                    coeff * (z - center).powi(*exponent)
                }
            }
            Expr::Exp { coeff, rate } => coeff * (rate * z).exp(),
            Expr::Sine {
                coeff,
                quarter_turns,
            } => {
                let s = match quarter_turns {
                    0 => z.sin(),
                    1 => z.cos(),
                    2 => -z.sin(),
                    _ => -z.cos(),
                };
                coeff * s
            }
            Expr::Essential { terms } => {
                let u = 1.0 / (z - 1.0);
                let exponent = 1.0 + 2.0 * u;
                let log_u = u.ln();
                terms
                    .iter()
                    .map(|(&k, &c)| {
                        let log_mag = k as f64 * log_u.re + exponent.re;
                        if log_mag.abs() < 600.0 {
                            c * u.powi(k) * exponent.exp()
                        } else {
                            // keep huge u^k and tiny exp(...) from over/underflowing separately
                            c * (log_u * k as f64 + exponent).exp()
                        }
                    })
                    .sum()
            }
            Expr::Sum(terms) => terms.iter().map(|t| t.eval(z)).sum(),
            Expr::Scaled(c, inner) => c * inner.eval(z),
        }
    }

    /// Exact `sup_{z∈d} |expr(z)|` when a formula is known; `INFINITY` when the
    /// expression is known to be unbounded on `d`.
    pub fn closed_form_sup(&self, d: &DomainSpec) -> Option<f64> {
        match self {
            Expr::Constant(c) => Some(c.norm()),
            Expr::Power {
                coeff,
                center,
                exponent,
            } => {
                let a = coeff.norm();
                if a == 0.0 || *exponent == 0 {
                    return Some(a);
                }
                if *exponent > 0 {
                    let reach = d.max_distance_from(*center);
                    Some(a * reach.powi(*exponent))
                } else {
                    let gap = d.closure_distance(*center);
                    if gap == 0.0 {
                        Some(f64::INFINITY)
                    } else {
                        Some(a / gap.powi(-*exponent))
                    }
                }
            }
            Expr::Exp { coeff, rate } => {
                let a = coeff.norm();
                if a == 0.0 || *rate == Complex64::new(0.0, 0.0) {
                    return Some(a);
                }
                // Re(rate z) = <conj(rate), z> as plane vectors
                Some(a * d.support(rate.conj()).exp())
            }
            Expr::Sine { coeff, .. } => match d {
                DomainSpec::HalflineFamily(lines)
                    if lines
                        .iter()
                        .all(|l| l.base.im == 0.0 && l.direction.im == 0.0) =>
                {
                    Some(coeff.norm())
                }
                _ => None,
            },
            Expr::Essential { terms } => {
                let is_w = terms.len() == 1 && terms.contains_key(&-1);
                match d {
                    DomainSpec::Disc { center, radius }
                        if is_w && *center == Complex64::new(0.0, 0.0) && *radius == 1.0 =>
                    {
                        Some(2.0 * terms[&-1].abs())
                    }
                    _ => None,
                }
            }
            Expr::Scaled(c, inner) => {
                if c.norm() == 0.0 {
                    Some(0.0)
                } else {
                    inner.closed_form_sup(d).map(|s| c.norm() * s)
                }
            }
            Expr::Sum(terms) => {
                let sups: Option<Vec<f64>> = terms.iter().map(|t| t.closed_form_sup(d)).collect();
                let sups = sups?;
                let nonzero: Vec<f64> = sups.into_iter().filter(|s| *s != 0.0).collect();
                let infinite = nonzero.iter().filter(|s| s.is_infinite()).count();
                match (nonzero.len(), infinite) {
                    (0, _) => Some(0.0),
                    (1, _) => Some(nonzero[0]),
                    (_, 1) => Some(f64::INFINITY),
                    _ => None,
                }
            }
        }
    }

    fn growth_directions(&self, out: &mut Vec<Complex64>) {
        match self {
            Expr::Exp { coeff, rate } if coeff.norm() > 0.0 && rate.norm() > 0.0 => {
                out.push(rate.conj() / rate.norm());
            }
            Expr::Sine { .. } => {
                out.push(Complex64::new(0.0, 1.0));
                out.push(Complex64::new(0.0, -1.0));
            }
            Expr::Sum(terms) => terms.iter().for_each(|t| t.growth_directions(out)),
            Expr::Scaled(_, inner) => inner.growth_directions(out),
            _ => {}
        }
    }
}

/// A catalog function (or one of its derivatives) with exact evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionHandle {
    kind: Kind,
    order: u32,
    expr: Expr,
    region: Region,
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::BadParameter(format!("{what} must be finite")))
    }
}

fn build(kind: &Kind) -> Result<(Expr, Region)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(match kind {
        Kind::Pole { w } => {
            let w = finite(*w, "pole location")?;
            (
                Expr::Power {
                    coeff: one,
                    center: w,
                    exponent: -1,
                },
                Region::punctured(w),
            )
        }
        Kind::BoundaryEssential => (
            Expr::Essential {
                terms: BTreeMap::from([(-1, 1.0)]),
            },
            Region::punctured(one),
        ),
        Kind::DirectionalExp { theta } => {
            if !theta.is_finite() {
                return Err(Error::BadParameter("theta must be finite".into()));
            }
            (
                Expr::Exp {
                    coeff: one,
                    rate: Complex64::from_polar(1.0, -theta.rem_euclid(TAU)),
                },
                Region::entire(),
            )
        }
        Kind::Monomial { degree } => {
            let exponent = i32::try_from(*degree)
                .map_err(|_| Error::BadParameter("monomial degree too large".into()))?;
            (
                Expr::Power {
                    coeff: one,
                    center: zero,
                    exponent,
                },
                Region::entire(),
            )
        }
        Kind::Sine => (
            Expr::Sine {
                coeff: one,
                quarter_turns: 0,
            },
            Region::entire(),
        ),
        Kind::Constant { c } => (Expr::Constant(finite(*c, "constant")?), Region::entire()),
        Kind::Sum { terms } => {
            if terms.is_empty() {
                return Err(Error::BadParameter("sum needs at least one term".into()));
            }
            let mut exprs = Vec::with_capacity(terms.len());
            let mut region = Region::entire();
            for t in terms {
                let (e, r) = build(t)?;
                exprs.push(e);
                region = region.intersect(&r);
            }
            (Expr::Sum(exprs), region)
        }
        Kind::ScalarMultiple { factor, inner } => {
            let factor = finite(*factor, "scalar factor")?;
            let (e, r) = build(inner)?;
            (Expr::Scaled(factor, Box::new(e)), r)
        }
    })
}

impl FunctionHandle {
    pub fn make(kind: Kind) -> Result<Self> {
        let (expr, region) = build(&kind)?;
        Ok(Self {
            kind,
            order: 0,
            expr,
            region,
        })
    }

    fn checked(kind: Kind) -> Self {
        match Self::make(kind) {
            Ok(f) => f,
            Err(e) => panic!("{e}"),
        }
    }

    /// Panics if `w` is not finite; use [`FunctionHandle::make`] for untrusted input.
    pub fn pole(w: Complex64) -> Self {
        Self::checked(Kind::Pole { w })
    }

    pub fn boundary_essential() -> Self {
        Self::checked(Kind::BoundaryEssential)
    }

    pub fn directional_exp(theta: f64) -> Self {
        Self::checked(Kind::DirectionalExp { theta })
    }

    pub fn monomial(degree: u32) -> Self {
        Self::checked(Kind::Monomial { degree })
    }

    pub fn sine() -> Self {
        Self::checked(Kind::Sine)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::checked(Kind::Constant { c })
    }

    pub fn sum(terms: Vec<Kind>) -> Self {
        Self::checked(Kind::Sum { terms })
    }

    pub fn scalar_multiple(factor: Complex64, inner: Kind) -> Self {
        Self::checked(Kind::ScalarMultiple {
            factor,
            inner: Box::new(inner),
        })
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Derivative order relative to the catalog entry.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        crate::numerics::evaluate(self, z)
    }

    /// Handle whose evaluation is `f^(l)`.
    pub fn closed_form_derivative(&self, l: u32) -> FunctionHandle {
        FunctionHandle {
            kind: self.kind.clone(),
            order: self.order + l,
            expr: self.expr.nth_derivative(l),
            region: self.region.clone(),
        }
    }

    /// Exact sup-norm of this handle on `d` when the catalog knows it.
    pub fn closed_form_sup(&self, d: &DomainSpec) -> Option<f64> {
        self.expr.closed_form_sup(d)
    }

    /// Points of non-analyticity (poles and essential singularities).
    pub fn singular_points(&self) -> &[Complex64] {
        self.region.excluded()
    }

    /// Unit directions along which the function grows fastest at infinity.
    pub fn growth_directions(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.expr.growth_directions(&mut out);
        out.dedup();
        out
    }
}

impl Analytic for FunctionHandle {
    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.expr.eval(z)
    }

    fn closed_form(&self, order: u32) -> Option<FunctionHandle> {
        Some(self.closed_form_derivative(order))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Pole { w } => write!(f, "pole(w={w})"),
            Kind::BoundaryEssential => write!(f, "boundary-essential"),
            Kind::DirectionalExp { theta } => write!(f, "directional-exp(theta={theta})"),
            Kind::Monomial { degree } => write!(f, "monomial({degree})"),
            Kind::Sine => write!(f, "sine"),
            Kind::Constant { c } => write!(f, "constant({c})"),
            Kind::Sum { terms } => {
                write!(f, "sum(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Kind::ScalarMultiple { factor, inner } => write!(f, "({factor})*{inner}"),
        }
    }
}

impl fmt::Display for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}^({})", self.kind, self.order)
        }
    }
}
