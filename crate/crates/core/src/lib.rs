//! Sup-norm tools for holomorphic functions on planar domains: derivatives and
//! segment integrals, a function catalogue with closed-form derivatives,
//! convex domain geometry, Favard and Landau–Kolmogorov constants,
//! numerical sup-norm probing, and order-set bookkeeping for spaces of
//! functions with bounded derivatives.

pub mod catalog;
pub mod error;
pub mod favard;
pub mod geometry;
pub mod numerics;
pub mod probe;
pub mod sampling;
pub mod spaces;

pub use catalog::{FunctionHandle, Kind};
pub use error::{Error, Result};
pub use favard::{favard_constant, lk_constant, shifted_lk_constant, verify_max_form, ConstantResult};
pub use geometry::{classify, clip_to_disc, diameter, halfline_through, DomainSpec, HPoly};
pub use numerics::{derivative, evaluate, segment_integral, Analytic, Region, Tolerance};
pub use probe::{estimate_sup, find_divergence_witness, probe_halfline, ProbeConfig, ProbeReport};
pub use spaces::{
    bounded_gap_check, chain_bound, halfline_gap_check, membership_verdict, primitive, tilde, tilde0, OrderSet,
};
