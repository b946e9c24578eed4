// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blade;
pub mod calculus;
pub mod catalog;
pub mod chart;
pub mod curvature;
pub mod error;
pub mod identities;
pub mod laplace;
pub mod multivector;
pub mod report;
pub mod selftest;

pub use error::{GeoError, Result};
pub use multivector::Multivector;
