//! Pole-neighborhood limit formulas: evaluation, closed forms, Laurent data
//! of Γ at its poles, and verification runs on geometric schedules.

mod expr;
mod formula;
mod laurent;
mod verify;

pub use expr::{alternative_form, closed_form, evaluate_expr, step_of, target_value, ClosedForm, FormAgreement};
pub use formula::{selector, FormulaId, SelectorSymbols};
pub use laurent::{laurent_of_gamma, laurent_of_gamma_from, residue, LaurentExpansion};
pub use verify::{sample_formula, verify_formula, FormulaSample, Status, VerificationReport};
