//! Precision management and generic limit machinery: Richardson tableaux,
//! Laurent coefficient fitting, convergence-order diagnostics, quadrature.
//!
//! Nothing in here knows about the gamma function.

mod context;
mod digits;
mod laurent;
mod order;
mod quadrature;
mod richardson;

pub use context::{make_context, PrecisionContext, DEFAULT_GUARD_DIGITS};
pub use digits::{matched_digits, AGREEMENT_CAP};
pub use laurent::{fit_laurent, LaurentFit};
pub use order::empirical_order;
pub use quadrature::{gauss_legendre_rule, integrate, Quadrature};
pub use richardson::{geometric_schedule, richardson_extrapolate, ExtrapolationTable};

/// Default first node of every limit schedule: 2^-10.
pub const DEFAULT_X0_EXPONENT: i32 = -10;
/// Default number of schedule nodes.
pub const DEFAULT_NODES: usize = 16;
