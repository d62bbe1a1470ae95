//! Uniform nodal discretization of the unit square.
//!
//! Node `(i, j)` sits at `(i·h, j·h)` with `h = 1/n` and `0 ≤ i, j ≤ n`. The
//! first index runs along `x₁`, the second along `x₂`.

mod diff;
mod field;
mod quadrature;
mod refine;
mod snapshot;

pub use diff::{composed_second_derivative, gradient_at_nodes, partial, second_derivative};
pub use field::{
    field_axpy, field_dot, field_scale, make_field, project_boundary_zero, GridSpec, Initializer,
    NodalMatrixField, ScalarField, VectorField,
};
pub use quadrature::{integrate_trapezoid, p1_exact_integral, p1_exact_integral_with, Diagonal};
pub use refine::refine;
pub use snapshot::{format_snapshot, parse_snapshot, read_snapshot, write_snapshot};
