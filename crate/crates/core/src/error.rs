use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} lies outside the analyticity region")]
    OutsideDomain(Complex64),

    #[error("no convergence after {nodes} nodes (last difference {last_difference:e})")]
    NoConvergence { nodes: usize, last_difference: f64 },

    #[error("segment [{from}, {to}] leaves the region")]
    SegmentExitsDomain { from: Complex64, to: Complex64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("no half-line through {0} is contained in the domain")]
    NoHalfline(Complex64),

    #[error("domain is unbounded")]
    UnboundedDomain,

    #[error("domain has empty interior")]
    EmptyInterior,

    #[error("domain is not convex")]
    NotConvex,

    #[error("domain is not a union of half-lines")]
    NotHalflineUnion,

    #[error("term cap {cap} reached before the tail bound dropped below {tol:e}")]
    TolTooTight { cap: u64, tol: f64 },

    #[error("order violation: need {lower} < {order} < {upper}")]
    OrderViolation { lower: u32, order: u32, upper: u32 },

    #[error("derivative of order {order} is unbounded on the domain")]
    UnboundedInput { order: u32 },

    #[error("order set has infinite supremum")]
    SupInfinite,
}
