use crate::energy::{EnergyParams, Matrix2};
use crate::functional::{grad_j_divergence, h_alpha, psi, trial_point, Scheme};
use crate::grid::VectorField;

use super::config::SecantConfig;

/// Result of running the secant iteration on a scalar function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantRoot {
    pub alpha: f64,
    /// Number of secant updates performed.
    pub iterations: usize,
    /// `|h(alpha)| < root_tol` was reached.
    pub converged: bool,
}

/// Secant iteration `αⁿ⁺¹ = αⁿ − h(αⁿ)(αⁿ − αⁿ⁻¹)/(h(αⁿ) − h(αⁿ⁻¹))`.
///
/// Stops on `|h| < root_tol`, on a degenerate denominator, on a non-finite
/// value, or after `max_iters` updates; `alpha` is the last finite iterate.
pub fn secant_root(mut h: impl FnMut(f64) -> f64, cfg: &SecantConfig) -> SecantRoot {
    let (mut a_prev, mut a_cur) = (cfg.alpha0, cfg.alpha1);
    let mut h_prev = h(a_prev);
    let mut h_cur = h(a_cur);
    if !h_prev.is_finite() || !h_cur.is_finite() {
        return SecantRoot {
            alpha: a_cur,
            iterations: 0,
            converged: false,
        };
    }
    if h_cur.abs() < cfg.root_tol {
        return SecantRoot {
            alpha: a_cur,
            iterations: 0,
            converged: true,
        };
    }
    for it in 1..=cfg.max_iters {
        let denom = h_cur - h_prev;
        if denom.abs() < cfg.denom_floor {
            return SecantRoot {
                alpha: a_cur,
                iterations: it - 1,
                converged: false,
            };
        }
        let a_next = a_cur - h_cur * (a_cur - a_prev) / denom;
        if !a_next.is_finite() {
            return SecantRoot {
                alpha: a_cur,
                iterations: it - 1,
                converged: false,
            };
        }
        let h_next = h(a_next);
        (a_prev, h_prev) = (a_cur, h_cur);
        (a_cur, h_cur) = (a_next, h_next);
        if !h_cur.is_finite() {
            return SecantRoot {
                alpha: a_cur,
                iterations: it,
                converged: false,
            };
        }
        if h_cur.abs() < cfg.root_tol {
            return SecantRoot {
                alpha: a_cur,
                iterations: it,
                converged: true,
            };
        }
    }
    SecantRoot {
        alpha: a_cur,
        iterations: cfg.max_iters,
        converged: false,
    }
}

/// How the step size was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub tau: f64,
    /// `ψ(tau)`.
    pub psi_tau: f64,
    pub secant_iterations: usize,
    /// The secant root was rejected and backtracking from `fallback_tau` was used.
    pub used_fallback: bool,
}

/// Step size for `φ − τg` from the secant method on `h(α)`.
///
/// The secant root is accepted when it is positive, finite and decreases
/// `ψ`. Otherwise `fallback_tau` is halved until `ψ(τ) ≤ ψ(0)`; if that never
/// happens the step is `0`. A zero direction returns `fallback_tau`.
pub fn secant_line_search(
    p: &EnergyParams,
    xi: &Matrix2,
    f: &VectorField,
    g: &VectorField,
    cfg: &SecantConfig,
    scheme: Scheme,
) -> LineSearch {
    let psi0 = psi(p, xi, f, g, 0.0, scheme);
    if g.is_zero() {
        return LineSearch {
            tau: cfg.fallback_tau,
            psi_tau: psi0,
            secant_iterations: 0,
            used_fallback: true,
        };
    }
    let root = secant_root(|alpha| h_alpha(p, xi, f, g, alpha), cfg);
    if root.alpha > 0.0 && root.alpha.is_finite() {
        let value = psi(p, xi, f, g, root.alpha, scheme);
        if value < psi0 {
            return LineSearch {
                tau: root.alpha,
                psi_tau: value,
                secant_iterations: root.iterations,
                used_fallback: false,
            };
        }
    }
    let mut tau = cfg.fallback_tau;
    for _ in 0..=cfg.max_halvings {
        let value = psi(p, xi, f, g, tau, scheme);
        if value <= psi0 {
            return LineSearch {
                tau,
                psi_tau: value,
                secant_iterations: root.iterations,
                used_fallback: true,
            };
        }
        tau *= 0.5;
    }
    LineSearch {
        tau: 0.0,
        psi_tau: psi0,
        secant_iterations: root.iterations,
        used_fallback: true,
    }
}

/// Outcome of one steepest-descent update.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentStep {
    pub field: VectorField,
    pub tau: f64,
    pub j_before: f64,
    pub j_after: f64,
    pub line_search: LineSearch,
}

/// The new `J` was not finite, even after retrying with `fallback_tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diverged {
    pub tau: f64,
}

/// `φ ← P₀(φ − τg)` with `g = δJ_γ(φ)` and `τ` from [`secant_line_search`].
pub fn descent_step(
    p: &EnergyParams,
    xi: &Matrix2,
    f: &VectorField,
    cfg: &SecantConfig,
    scheme: Scheme,
) -> Result<DescentStep, Diverged> {
    let g = grad_j_divergence(p, xi, f);
    let j_before = psi(p, xi, f, &g, 0.0, scheme);
    let ls = secant_line_search(p, xi, f, &g, cfg, scheme);
    let mut tau = ls.tau;
    let mut field = trial_point(f, &g, tau);
    let mut j_after = ls.psi_tau;
    if !j_after.is_finite() || !field.is_finite() {
        tau = cfg.fallback_tau;
        field = trial_point(f, &g, tau);
        j_after = psi(p, xi, f, &g, tau, scheme);
        if !j_after.is_finite() || !field.is_finite() {
            return Err(Diverged { tau });
        }
    }
    Ok(DescentStep {
        field,
        tau,
        j_before,
        j_after,
        line_search: ls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::eval_j;
    use crate::grid::{make_field, project_boundary_zero, GridSpec, Initializer, ScalarField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn secant_is_exact_on_affine_functions() {
        let cfg = SecantConfig::default();
        for (slope, root) in [(2.0, 0.37), (-0.5, 12.0), (1e3, -4.0)] {
            let r = secant_root(|a| slope * (a - root), &cfg);
            assert!(r.converged);
            assert!(r.iterations <= 2);
            assert!(
                (r.alpha - root).abs() < 1e-9 * root.abs(),
                "{} vs {root}",
                r.alpha
            );
        }
        let far = SecantConfig {
            alpha0: -3.0,
            alpha1: 5.0,
            ..Default::default()
        };
        let r = secant_root(|a| 4.0 * a - 1.0, &far);
        assert!(r.converged && r.iterations <= 2);
    }

    #[test]
    fn secant_stops_on_flat_functions() {
        let r = secant_root(|_| 1.0, &SecantConfig::default());
        assert!(!r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn secant_finds_quadratic_root() {
        let r = secant_root(
            |a| a * a - 2.0,
            &SecantConfig {
                alpha0: 1.0,
                alpha1: 2.0,
                ..Default::default()
            },
        );
        assert!(r.converged);
        assert!((r.alpha - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn zero_direction_returns_fallback() {
        let s = GridSpec::new(6).unwrap();
        let p = EnergyParams::new(2.2).unwrap();
        let f = make_field(s, Initializer::P1);
        let cfg = SecantConfig::default();
        let ls = secant_line_search(
            &p,
            &Matrix2::IDENTITY,
            &f,
            &VectorField::zeros(s),
            &cfg,
            Scheme::TrapezoidNodal,
        );
        assert_eq!(ls.tau, cfg.fallback_tau);
    }

    #[test]
    fn accepted_steps_never_increase_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = GridSpec::new(8).unwrap();
        let p = EnergyParams::new(2.2).unwrap();
        for _ in 0..5 {
            let xi = Matrix2::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let f = project_boundary_zero(&crate::grid::VectorField {
                comp1: ScalarField::from_fn(s, |_, _| rng.gen_range(-0.1..0.1)),
                comp2: ScalarField::from_fn(s, |_, _| rng.gen_range(-0.1..0.1)),
            });
            let g = grad_j_divergence(&p, &xi, &f);
            let ls = secant_line_search(
                &p,
                &xi,
                &f,
                &g,
                &SecantConfig::default(),
                Scheme::TrapezoidNodal,
            );
            assert!(ls.tau >= 0.0);
            let j0 = eval_j(&p, &xi, &f, Scheme::TrapezoidNodal);
            assert!(psi(&p, &xi, &f, &g, ls.tau, Scheme::TrapezoidNodal) <= j0);

            let step = descent_step(
                &p,
                &xi,
                &f,
                &SecantConfig::default(),
                Scheme::TrapezoidNodal,
            )
            .unwrap();
            assert!(step.field.has_zero_boundary());
            assert!(step.j_after <= step.j_before + 1e-12);
            assert_eq!(
                step.j_after,
                eval_j(&p, &xi, &step.field, Scheme::TrapezoidNodal)
            );
        }
    }

    #[test]
    fn stationary_point_stays_put() {
        let s = GridSpec::new(5).unwrap();
        let p = EnergyParams::new(2.3).unwrap();
        let z = VectorField::zeros(s);
        let step = descent_step(
            &p,
            &Matrix2::ZERO,
            &z,
            &SecantConfig::default(),
            Scheme::TrapezoidNodal,
        )
        .unwrap();
        assert!(step.field.is_zero());
        assert_eq!(step.j_after, 0.0);
    }
}
