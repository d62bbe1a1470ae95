//! Numerical search for violations of the Jensen (quasi-convexity)
//! inequality for the energy `f_γ(ξ) = ‖ξ‖⁴ − γ‖ξ‖² det ξ` on 2×2 matrices.
//!
//! Test fields live on a nodal grid over the unit square. Steepest descent
//! with a secant line search drives `J_γ(ξ, φ) = ∫ [f_γ(ξ + ∇φ) − f_γ(ξ)]`
//! down, and every negative value is re-checked with the exact integral of
//! the piecewise-linear interpolant.
//!
//! ```
//! use qclab::energy::{EnergyParams, Matrix2};
//! use qclab::functional::{eval_j, Scheme};
//! use qclab::grid::{make_field, GridSpec, Initializer};
//!
//! let p = EnergyParams::new(2.2).unwrap();
//! let f = make_field(GridSpec::new(10).unwrap(), Initializer::P1);
//! let j = eval_j(&p, &Matrix2::diag(1.0, 3f64.sqrt()), &f, Scheme::P1Exact);
//! assert!(j > 0.0);
//! ```

pub mod cli;
pub mod energy;
pub mod error;
pub mod functional;
pub mod grid;
pub mod optimizer;
