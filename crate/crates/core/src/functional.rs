//! The Jensen functional
//!
//! ```text
//! J_γ(ξ, φ) = ∫_Ω [f_γ(ξ + ∇φ(x)) − f_γ(ξ)] dx
//! ```
//!
//! its Gâteaux gradient `δJ_γ = −div P(ξ + ∇φ)` with `P = ∂f_γ/∂ξ`, and the
//! scalar line-search functions `ψ(α) = J_γ(φ − αg)` and `h(α) = ψ'(α)`.
//!
//! The gradient comes in two independent discretizations. The divergence
//! form differentiates the nodal field `P` with the same central stencil used
//! for `∇φ`; with the trapezoid rule it is the exact gradient of the discrete
//! functional under the pairing [`field_dot`]. The expanded form evaluates
//! the chain rule term by term from first and second derivatives of `φ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::energy::{df_dxi, eval_f, EnergyParams, Matrix2};
use crate::error::Error;
use crate::grid::{
    composed_second_derivative, field_axpy, field_dot, gradient_at_nodes, integrate_trapezoid,
    p1_exact_integral, partial, project_boundary_zero, ScalarField, VectorField,
};

/// Quadrature used for `J_γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Trapezoid rule on nodal values of `f_γ(ξ + ∇φ) − f_γ(ξ)`, with `∇φ` by finite differences.
    #[default]
    #[serde(rename = "trapezoid")]
    TrapezoidNodal,
    /// Exact integral of the piecewise-linear interpolant.
    #[serde(rename = "p1exact")]
    P1Exact,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::TrapezoidNodal => "trapezoid",
            Scheme::P1Exact => "p1exact",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        [Scheme::TrapezoidNodal, Scheme::P1Exact]
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| {
                Error::Config(format!("unknown scheme {s:?} (expected trapezoid|p1exact)"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradMethod {
    #[default]
    DivergenceForm,
    ExpandedForm,
}

pub fn eval_j(p: &EnergyParams, xi: &Matrix2, f: &VectorField, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::TrapezoidNodal => {
            let base = eval_f(p, xi);
            let integrand = gradient_at_nodes(f).map_scalar(|g| eval_f(p, &(*xi + *g)) - base);
            integrate_trapezoid(&integrand, f.spec())
        }
        Scheme::P1Exact => p1_exact_integral(p, xi, f),
    }
}

pub fn grad_j(p: &EnergyParams, xi: &Matrix2, f: &VectorField, method: GradMethod) -> VectorField {
    match method {
        GradMethod::DivergenceForm => grad_j_divergence(p, xi, f),
        GradMethod::ExpandedForm => grad_j_expanded(p, xi, f),
    }
}

/// `δJ_γ` as minus the discrete divergence of the nodal field `P(ξ + ∇φ)`.
///
/// Component `i` is `−(∂₁Pᵢ₁ + ∂₂Pᵢ₂)`. Boundary nodes are zero.
pub fn grad_j_divergence(p: &EnergyParams, xi: &Matrix2, f: &VectorField) -> VectorField {
    let stress = gradient_at_nodes(f).map(|g| df_dxi(p, &(*xi + *g)));
    let div_row = |row: usize| {
        let d1 = partial(&stress.entry(row, 1), 1);
        let d2 = partial(&stress.entry(row, 2), 2);
        ScalarField::from_fn(f.spec(), |i, j| -(d1.get(i, j) + d2.get(i, j)))
    };
    project_boundary_zero(&VectorField {
        comp1: div_row(1),
        comp2: div_row(2),
    })
}

/// `δJ_γ` by the fully expanded chain rule.
///
/// With `m = ξ + ∇φ`, `N = ‖m‖²`, `D = det m` and `∂ₖ` denoting `∂/∂xₖ`:
///
/// ```text
/// ∂ⱼ Pᵢⱼ = 4 ∂ⱼmᵢⱼ N + 4 mᵢⱼ ∂ⱼN − 2γ ∂ⱼmᵢⱼ D − 2γ mᵢⱼ ∂ⱼD − γ ∂ⱼcofᵢⱼ N − γ cofᵢⱼ ∂ⱼN
/// ∂ₖN = 2 Σ mₐᵦ ∂ₖmₐᵦ
/// ∂ₖD = ∂ₖm₁₁ m₂₂ + m₁₁ ∂ₖm₂₂ − ∂ₖm₁₂ m₂₁ − m₁₂ ∂ₖm₂₁
/// ```
///
/// where `∂ₖmᵢⱼ = ∂ₖ∂ⱼφᵢ`. Second derivatives come from
/// [`composed_second_derivative`], i.e. the derivative of the same nodal
/// gradient field used everywhere else, which keeps the two gradient forms
/// consistent up to the boundary.
pub fn grad_j_expanded(p: &EnergyParams, xi: &Matrix2, f: &VectorField) -> VectorField {
    let spec = f.spec();
    let grad = gradient_at_nodes(f);
    // dm[k-1] holds ∂ₖm as a nodal matrix field, entry (i, j) = ∂ₖ∂ⱼφᵢ
    let dm: [Vec<ScalarField>; 2] = [1, 2].map(|k| {
        [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(comp, j)| composed_second_derivative(f, comp, j, k))
            .collect()
    });
    let gamma = p.gamma;

    let mut comp1 = ScalarField::zeros(spec);
    let mut comp2 = ScalarField::zeros(spec);
    for i in 1..spec.n() {
        for j in 1..spec.n() {
            let m = *xi + grad.get(i, j);
            let norm = m.frob_norm_sq();
            let det = m.det();
            let cof = m.cofactor();
            let d = |k: usize| {
                let e = &dm[k - 1];
                Matrix2::new(
                    e[0].get(i, j),
                    e[1].get(i, j),
                    e[2].get(i, j),
                    e[3].get(i, j),
                )
            };
            let (d1, d2) = (d(1), d(2));

            let d_norm = |dk: &Matrix2| 2.0 * m.dot(dk);
            let d_det =
                |dk: &Matrix2| dk.a11 * m.a22 + m.a11 * dk.a22 - dk.a12 * m.a21 - m.a12 * dk.a21;
            let (dn1, dn2) = (d_norm(&d1), d_norm(&d2));
            let (dd1, dd2) = (d_det(&d1), d_det(&d2));
            let (dc1, dc2) = (d1.cofactor(), d2.cofactor());

            // ∂ₖ Pᵢⱼ for one entry, given the entry's values of m, ∂ₖm, cof, ∂ₖcof
            let term = |m_ij: f64, dm_ij: f64, cof_ij: f64, dcof_ij: f64, dn: f64, dd: f64| {
                4.0 * dm_ij * norm + 4.0 * m_ij * dn
                    - 2.0 * gamma * dm_ij * det
                    - 2.0 * gamma * m_ij * dd
                    - gamma * dcof_ij * norm
                    - gamma * cof_ij * dn
            };
            let d1_p11 = term(m.a11, d1.a11, cof.a11, dc1.a11, dn1, dd1);
            let d2_p12 = term(m.a12, d2.a12, cof.a12, dc2.a12, dn2, dd2);
            let d1_p21 = term(m.a21, d1.a21, cof.a21, dc1.a21, dn1, dd1);
            let d2_p22 = term(m.a22, d2.a22, cof.a22, dc2.a22, dn2, dd2);
            comp1.set(i, j, -(d1_p11 + d2_p12));
            comp2.set(i, j, -(d1_p21 + d2_p22));
        }
    }
    VectorField { comp1, comp2 }
}

/// `ψ(α) = J_γ(ξ, φ − αg)`.
pub fn psi(
    p: &EnergyParams,
    xi: &Matrix2,
    f: &VectorField,
    g: &VectorField,
    alpha: f64,
    scheme: Scheme,
) -> f64 {
    eval_j(p, xi, &trial_point(f, g, alpha), scheme)
}

/// `h(α) = dψ/dα = −⟨δJ_γ(φ − αg), g⟩`.
///
/// The sign makes `h(0) = −‖g‖² ≤ 0` when `g` is the gradient at `φ`, so a
/// positive root is a minimizer along the descent ray. The pairing is the
/// discrete one that makes the divergence form the exact gradient of the
/// trapezoid functional.
pub fn h_alpha(
    p: &EnergyParams,
    xi: &Matrix2,
    f: &VectorField,
    g: &VectorField,
    alpha: f64,
) -> f64 {
    let moved = trial_point(f, g, alpha);
    -field_dot(&grad_j_divergence(p, xi, &moved), g).expect("fields share a grid")
}

pub(crate) fn trial_point(f: &VectorField, g: &VectorField, alpha: f64) -> VectorField {
    project_boundary_zero(&field_axpy(-alpha, g, f).expect("fields share a grid"))
}
