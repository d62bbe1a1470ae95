use serde::{Deserialize, Serialize};

use super::field::{GridSpec, ScalarField, VectorField};
use crate::energy::{eval_f, EnergyParams, Matrix2};

/// Which diagonal splits every grid cell into two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Diagonal {
    /// From `(i, j)` to `(i+1, j+1)`.
    #[default]
    LowerLeftUpperRight,
    /// From `(i, j+1)` to `(i+1, j)`.
    UpperLeftLowerRight,
}

/// Tensor trapezoid rule over the unit square.
pub fn integrate_trapezoid(g: &ScalarField, spec: GridSpec) -> f64 {
    assert_eq!(g.spec(), spec, "integrand lives on a different grid");
    let n = spec.n();
    let h = spec.h();
    let weight = |k: usize| if k == 0 || k == n { 0.5 } else { 1.0 };
    let mut sum = 0.0;
    for i in 0..=n {
        let wi = weight(i);
        for j in 0..=n {
            sum += wi * weight(j) * g.get(i, j);
        }
    }
    sum * h * h
}

/// `∫ [f_γ(ξ + ∇φ) − f_γ(ξ)]` for the continuous piecewise-linear interpolant
/// of `f` on the default triangulation.
///
/// The interpolant has a constant gradient on each triangle, so the result
/// is exact up to rounding. A zero-boundary field with a negative value is
/// a genuine Jensen violation.
pub fn p1_exact_integral(p: &EnergyParams, xi: &Matrix2, f: &VectorField) -> f64 {
    p1_exact_integral_with(p, xi, f, Diagonal::default())
}

pub fn p1_exact_integral_with(
    p: &EnergyParams,
    xi: &Matrix2,
    f: &VectorField,
    diagonal: Diagonal,
) -> f64 {
    let spec = f.spec();
    let n = spec.n();
    let h = spec.h();
    let base = eval_f(p, xi);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            for grad in cell_gradients(f, i, j, h, diagonal) {
                sum += eval_f(p, &(*xi + grad)) - base;
            }
        }
    }
    sum * 0.5 * h * h
}

/// Constant gradients of the linear interpolant on the two triangles of cell `(i, j)`.
fn cell_gradients(f: &VectorField, i: usize, j: usize, h: f64, diagonal: Diagonal) -> [Matrix2; 2] {
    let grad =
        |dx: [f64; 2], dy: [f64; 2]| Matrix2::new(dx[0] / h, dy[0] / h, dx[1] / h, dy[1] / h);
    let v = |a: usize, b: usize| [f.comp1.get(a, b), f.comp2.get(a, b)];
    let diff = |p: [f64; 2], q: [f64; 2]| [p[0] - q[0], p[1] - q[1]];
    let (v00, v10, v01, v11) = (v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1));
    match diagonal {
        Diagonal::LowerLeftUpperRight => [
            // (i,j) (i+1,j) (i+1,j+1)
            grad(diff(v10, v00), diff(v11, v10)),
            // (i,j) (i+1,j+1) (i,j+1)
            grad(diff(v11, v01), diff(v01, v00)),
        ],
        Diagonal::UpperLeftLowerRight => [
            // (i,j) (i+1,j) (i,j+1)
            grad(diff(v10, v00), diff(v01, v00)),
            // (i+1,j) (i+1,j+1) (i,j+1)
            grad(diff(v11, v01), diff(v11, v10)),
        ],
    }
}
