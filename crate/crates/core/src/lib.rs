//! Gradient-type methods on simple nonsmooth convex functions.
//!
//! The library covers the test objectives, the Armijo-Wolfe bracketing line
//! search, four descent methods, closed-form predictions for the gradient
//! method on `a|x1| + x2 + ... + xn`, seeded Monte-Carlo experiments, and
//! CSV/SVG output.

pub mod error;
pub mod experiments;
pub mod linesearch;
pub mod methods;
pub mod objective;
pub mod report;
pub mod theory;
pub mod vector;

pub use error::{Error, Result};
pub use linesearch::{armijo_wolfe_search, LineSearchConfig, LineSearchStatus};
pub use methods::{Classification, RunTrace, StopRule};
pub use objective::{Objective, ObjectiveSpec};
