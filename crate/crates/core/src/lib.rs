//! Coupled Riemann problem for two scalar conservation laws
//!
//! ```text
//! ∂ₜu + ∂ₓf₋(u) = 0,  x < 0
//! ∂ₜu + ∂ₓf₊(u) = 0,  x > 0
//! ```
//!
//! joined at `x = 0` by continuity of `u` in the vanishing self-similar
//! viscosity limit. The crate builds candidate solutions from half-line
//! wave fans, tests them with the `h`-function criterion, solves the viscous
//! self-similar problem and the interfacial layer ODE, and classifies the
//! data plane for quadratic flux pairs.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod double_wave;
pub mod error;
pub mod flux;
pub mod h_criterion;
pub mod half_riemann;
pub mod inner_layer;
pub mod par;
pub mod viscous;

pub use error::{Error, Result};
pub use flux::FluxFunction;
pub use h_criterion::CrdSolution;
pub use par::Execution;
