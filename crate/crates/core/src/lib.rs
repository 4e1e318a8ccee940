//! Verification workbench for filtered Fukaya-category combinatorics.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact`]: rational parsing/printing and small exact linear algebra.
//! - [`novikov`]: finite Novikov series over Z2 and the action functional.
//! - [`trees`]: labelled planar trees, tuple reduction, gluing, metrics.
//! - [`strata`]: associahedron and multiplihedron face enumeration,
//!   colored trees and the intrinsic width of stacked surfaces.
//! - [`ainfinity`]: finite filtered A∞ categories, L∞ and OCHA relation
//!   checkers, discrepancy and unit measurements, functor shifts.
//! - [`budget`]: curvature budgets, continuation shifts and index formulas.
//! - [`cli`]: the batch front-end behind the `workbench` binary.

pub mod exact;
pub mod novikov;
pub mod trees;
pub mod strata;
pub mod ainfinity;
pub mod budget;
pub mod cli;
