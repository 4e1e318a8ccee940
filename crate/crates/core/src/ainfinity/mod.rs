//! Finite filtered A∞ categories over the Novikov field, and checkers for
//! the A∞, L∞ and open-closed relations.
//!
//! Everything is over Z2, so relations are checked by summing all terms
//! and testing for zero.

mod category;
mod chain;
mod defect;
mod discrepancy;
mod functor;
mod linf;
mod ocha;
pub mod text;

pub use category::{CategoryError, FilteredAInfCategory, Generator};
pub use chain::{expand_multilinear, Chain};
pub use defect::{ainf_defect, ainf_defect_chains, check_ainf, AinfReport, Failure};
pub use discrepancy::{check_strict_unit, measure_discrepancies, DiscrepancyReport, UnitViolation};
pub use functor::{check_functor, functor_defect, functor_shift, AInfFunctor, FunctorShift};
pub use linf::{check_linf, linf_defect, LInfinityAlgebra, LinfError};
pub use ocha::{check_ocha, ocha_defect, OCHAStructure, OchaError, OchaFailure, OchaReport};
