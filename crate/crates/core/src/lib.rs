//! Multiclass online learning with an element-wise Online Newton Step.
//!
//! The Newton learner keeps its first and second order information in `m x d`
//! matrices (classes by features) and divides them element-wise, so a round
//! costs `O(m d)` time and memory. Perceptron, PA-I and diagonal CW, AROW,
//! SCW-I and SCW-II learners share the same prediction kernel for comparison,
//! and [`harness`] runs the seeded single-pass evaluation protocol.

pub mod baselines;
pub mod dataio;
mod error;
pub mod harness;
pub mod learner;
pub mod linalg;
pub mod mons;
pub mod multiclass;

pub use error::{Error, Result};
pub use learner::{Algorithm, LearnerConfig, OnlineLearner, Step};
pub use linalg::{SparseVector, WeightMatrix};
pub use multiclass::ClassLabel;
