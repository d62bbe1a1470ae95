//! Finite-difference operators on nodal fields.
//!
//! First derivatives are central at interior nodes and first-order one-sided
//! on the boundary. With these stencils the trapezoid rule applied to the
//! nodal derivative of a zero-boundary field is exactly zero, and the
//! transpose of the operator (trapezoid-weighted) is the negated central
//! difference at every interior node.

use super::field::{NodalMatrixField, ScalarField, VectorField};
use crate::energy::Matrix2;

/// `∂v/∂x_axis` at every node, `axis ∈ {1, 2}`.
pub fn partial(v: &ScalarField, axis: usize) -> ScalarField {
    let spec = v.spec();
    let n = spec.n();
    let h = spec.h();
    let at = |i: usize, j: usize, k: usize| match axis {
        1 => v.get(k, j),
        2 => v.get(i, k),
        _ => panic!("derivative axis must be 1 or 2, got {axis}"),
    };
    ScalarField::from_fn(spec, |i, j| {
        let k = if axis == 1 { i } else { j };
        if k == 0 {
            (at(i, j, 1) - at(i, j, 0)) / h
        } else if k == n {
            (at(i, j, n) - at(i, j, n - 1)) / h
        } else {
            (at(i, j, k + 1) - at(i, j, k - 1)) / (2.0 * h)
        }
    })
}

/// Nodal `∇φ`: entry `(i, j)` of each node matrix is `∂φᵢ/∂xⱼ`.
pub fn gradient_at_nodes(f: &VectorField) -> NodalMatrixField {
    let d11 = partial(&f.comp1, 1);
    let d12 = partial(&f.comp1, 2);
    let d21 = partial(&f.comp2, 1);
    let d22 = partial(&f.comp2, 2);
    NodalMatrixField::from_fn(f.spec(), |i, j| {
        Matrix2::new(d11.get(i, j), d12.get(i, j), d21.get(i, j), d22.get(i, j))
    })
}

/// `∂²φ_comp/∂x_j∂x_k`.
///
/// Pure second differences `(v[i+1] − 2v[i] + v[i−1])/h²` when `j == k`
/// (shifted one node inward on the boundary), composed central differences
/// otherwise.
pub fn second_derivative(f: &VectorField, comp: usize, j: usize, k: usize) -> ScalarField {
    let v = f.component(comp);
    if j != k {
        return partial(&partial(v, j), k);
    }
    let spec = v.spec();
    let n = spec.n();
    let h2 = spec.h() * spec.h();
    let at = |a: usize, b: usize, m: usize| if j == 1 { v.get(m, b) } else { v.get(a, m) };
    ScalarField::from_fn(spec, |a, b| {
        let m = if j == 1 { a } else { b };
        let c = m.clamp(1, n - 1);
        (at(a, b, c + 1) - 2.0 * at(a, b, c) + at(a, b, c - 1)) / h2
    })
}

/// `∂/∂x_k` applied to the nodal `∂φ_comp/∂x_j` produced by [`partial`].
///
/// Unlike [`second_derivative`] this reuses the first-derivative stencil
/// twice, so it is the exact derivative of the discrete gradient field.
pub fn composed_second_derivative(f: &VectorField, comp: usize, j: usize, k: usize) -> ScalarField {
    partial(&partial(f.component(comp), j), k)
}
