//! Compiles naive Bayes classifiers into ordered decision diagrams.
//!
//! A model thresholded at `rho` is compiled by [`compile`] into an [`Odd`]
//! whose nodes carry equivalence intervals. The diagrams support
//! equivalence tests, model counting, boolean combination and feature
//! queries ([`ops`]); the intervals give the sensitivity of the classifier to
//! its prior and weights of evidence ([`sensitivity`]). [`oracle`] checks all
//! of it by enumeration on small models.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar type.

pub mod bench;
pub mod compile;
pub mod interval;
pub mod model;
pub mod odd;
pub mod ops;
pub mod oracle;
pub mod ordering;
pub mod scalar;
pub mod sensitivity;

pub use compile::{compile, compile_default, size_bound, CompilationResult, CompileError, CompileStats};
pub use interval::Interval;
pub use model::{AttributeSpec, Instance, ModelDocument, ModelError, NaiveBayesModel, Threshold, ZeroMode};
pub use odd::{NodeId, Odd, OddBuilder, OddError, OddNode};
pub use ordering::{evidential_impact, make_order, OrderingHeuristic};
pub use scalar::Scalar;

pub type Interval64 = Interval<f64>;
pub type Interval32 = Interval<f32>;
pub type Model64 = NaiveBayesModel<f64>;
pub type Model32 = NaiveBayesModel<f32>;
pub type Threshold64 = Threshold<f64>;
pub type Threshold32 = Threshold<f32>;
pub type Compilation64 = CompilationResult<f64>;
pub type Compilation32 = CompilationResult<f32>;
