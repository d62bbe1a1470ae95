use serde::{Deserialize, Serialize};

use crate::energy::{rank_one_threshold, Matrix2};
use crate::error::{Error, Result};
use crate::functional::Scheme;
use crate::grid::{GridSpec, Initializer};

/// Knobs of the secant line search on `h(α) = ψ'(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecantConfig {
    pub alpha0: f64,
    pub alpha1: f64,
    pub max_iters: usize,
    /// Stop once `|h(α)| < root_tol`.
    pub root_tol: f64,
    /// Stop once `|h(αⁿ) − h(αⁿ⁻¹)|` falls below this.
    pub denom_floor: f64,
    /// First step tried when the secant root is rejected; halved until `ψ` decreases.
    pub fallback_tau: f64,
    pub max_halvings: usize,
}

impl Default for SecantConfig {
    fn default() -> Self {
        SecantConfig {
            alpha0: 0.0,
            alpha1: 1e-3,
            max_iters: 20,
            root_tol: 1e-10,
            denom_floor: 1e-14,
            fallback_tau: 1e-4,
            max_halvings: 30,
        }
    }
}

impl SecantConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.alpha0,
            self.alpha1,
            self.root_tol,
            self.denom_floor,
            self.fallback_tau,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("secant settings must be finite".into()));
        }
        if self.alpha0 == self.alpha1 {
            return Err(Error::Config("secant initial guesses must differ".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("secant needs at least one iteration".into()));
        }
        if self.root_tol <= 0.0 || self.denom_floor <= 0.0 || self.fallback_tau <= 0.0 {
            return Err(Error::Config(
                "root_tol, denom_floor and fallback_tau must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// How `ξ` is chosen during a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiMode {
    Fixed(Matrix2),
    /// Fresh `ξ` every iteration, entries uniform in `[0, scale)`.
    RandomPerIteration {
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentConfig {
    pub grid: GridSpec,
    pub gamma_start: f64,
    pub gamma_end: f64,
    pub gamma_step: f64,
    pub xi_mode: XiMode,
    pub max_iters_per_gamma: usize,
    pub secant: SecantConfig,
    pub seed: u64,
    pub scheme: Scheme,
    /// Iterations with `J < −violation_tol` produce a record.
    pub violation_tol: f64,
    pub initializer: Initializer,
    /// Refinement factor used when verifying records.
    pub verify_refine: usize,
    /// Restart from the initializer whenever `γ` steps down.
    pub reset_on_gamma_step: bool,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            grid: GridSpec::new(10).expect("valid grid"),
            gamma_start: rank_one_threshold(),
            gamma_end: 2.0,
            gamma_step: 0.005,
            xi_mode: XiMode::RandomPerIteration { scale: 1.0 },
            max_iters_per_gamma: 200,
            secant: SecantConfig::default(),
            seed: 0,
            scheme: Scheme::TrapezoidNodal,
            violation_tol: 1e-6,
            initializer: Initializer::P1,
            verify_refine: 2,
            reset_on_gamma_step: false,
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_start.is_finite()
            && self.gamma_end.is_finite()
            && self.gamma_step.is_finite())
        {
            return Err(Error::Config("gamma schedule must be finite".into()));
        }
        if self.gamma_end >= self.gamma_start {
            return Err(Error::Config(format!(
                "gamma_end ({}) must be below gamma_start ({})",
                self.gamma_end, self.gamma_start
            )));
        }
        if self.gamma_step <= 0.0 {
            return Err(Error::Config("gamma_step must be positive".into()));
        }
        if !(self.violation_tol > 0.0 && self.violation_tol.is_finite()) {
            return Err(Error::Config("violation_tol must be positive".into()));
        }
        if self.max_iters_per_gamma == 0 {
            return Err(Error::Config(
                "max_iters_per_gamma must be at least 1".into(),
            ));
        }
        if self.verify_refine < 2 {
            return Err(Error::Config("verify_refine must be at least 2".into()));
        }
        match self.xi_mode {
            XiMode::Fixed(m) if !m.is_finite() => {
                return Err(Error::Config("fixed xi must be finite".into()))
            }
            XiMode::RandomPerIteration { scale } if !(scale > 0.0 && scale.is_finite()) => {
                return Err(Error::Config("xi scale must be positive".into()))
            }
            _ => {}
        }
        self.secant.validate()
    }

    /// The `γ` values visited, from `gamma_start` down to just above `gamma_end`.
    pub fn gamma_schedule(&self) -> Vec<f64> {
        (0..)
            .map(|k| self.gamma_start - k as f64 * self.gamma_step)
            .take_while(|&g| g > self.gamma_end)
            .collect()
    }
}
