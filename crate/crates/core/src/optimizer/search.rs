use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{rank_one_threshold, EnergyParams, Matrix2};
use crate::error::Result;
use crate::grid::{make_field, p1_exact_integral, refine, VectorField};

use super::config::{DescentConfig, XiMode};
use super::line_search::descent_step;

/// Four independent draws, uniform in `[0, scale)`, in the order `a11, a12, a21, a22`.
pub fn sample_xi<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Matrix2 {
    let mut draw = || scale * rng.gen::<f64>();
    let (a11, a12, a21, a22) = (draw(), draw(), draw(), draw());
    Matrix2::new(a11, a12, a21, a22)
}

/// A candidate violation of the Jensen inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub iteration: usize,
    pub gamma: f64,
    pub xi: Matrix2,
    /// `J` under the search scheme when the record was taken.
    pub j_value: f64,
    pub field_snapshot: VectorField,
    /// Exact integral of the piecewise-linear interpolant of the snapshot.
    pub j_exact_p1: f64,
    /// Exact piecewise-linear integral after bilinear refinement.
    pub j_refined: f64,
    /// `j_exact_p1 < −violation_tol`.
    pub verified: bool,
}

impl TrialRecord {
    /// Verified and strictly inside the rank-one convex range of `γ`.
    pub fn counts_as_violation(&self) -> bool {
        self.verified && self.gamma < rank_one_threshold()
    }
}

/// Recomputes `J` exactly on the snapshot and on its refinement.
pub fn verify_record(r: &TrialRecord, refine_factor: usize, violation_tol: f64) -> TrialRecord {
    let p = EnergyParams { gamma: r.gamma };
    let j_exact_p1 = p1_exact_integral(&p, &r.xi, &r.field_snapshot);
    let j_refined = p1_exact_integral(&p, &r.xi, &refine(&r.field_snapshot, refine_factor));
    TrialRecord {
        j_exact_p1,
        j_refined,
        verified: j_exact_p1 < -violation_tol,
        ..r.clone()
    }
}

/// One row per descent iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub gamma: f64,
    /// `J` after the step; NaN marks a diverged step.
    pub j_value: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn j_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.j_value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub records: Vec<TrialRecord>,
    pub trace: IterationTrace,
    /// Number of `γ` stages aborted because `J` stopped being finite.
    pub divergences: usize,
}

/// Steepest descent over the `γ` schedule.
///
/// Each `γ` stage runs `max_iters_per_gamma` descent steps, carrying the
/// field into the next stage unless `reset_on_gamma_step` is set. In random
/// mode `ξ` is redrawn before every step. Any step ending with
/// `J < −violation_tol` is recorded and verified; the search then carries on
/// at the same `γ`. A diverged step aborts its stage and restarts the next
/// one from the initializer.
pub fn run_search(cfg: &DescentConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial = make_field(cfg.grid, cfg.initializer);
    let mut field = initial.clone();
    let mut records = Vec::new();
    let mut trace = IterationTrace::default();
    let mut divergences = 0;
    let mut iteration = 0;

    for (stage, gamma) in cfg.gamma_schedule().into_iter().enumerate() {
        let p = EnergyParams::new(gamma)?;
        if stage > 0 && cfg.reset_on_gamma_step {
            field = initial.clone();
        }
        for _ in 0..cfg.max_iters_per_gamma {
            iteration += 1;
            let xi = match cfg.xi_mode {
                XiMode::Fixed(m) => m,
                XiMode::RandomPerIteration { scale } => sample_xi(&mut rng, scale),
            };
            match descent_step(&p, &xi, &field, &cfg.secant, cfg.scheme) {
                Ok(step) => {
                    field = step.field;
                    trace.rows.push(TraceRow {
                        iteration,
                        gamma,
                        j_value: step.j_after,
                        tau: step.tau,
                    });
                    if step.j_after < -cfg.violation_tol {
                        let record = TrialRecord {
                            seed: cfg.seed,
                            iteration,
                            gamma,
                            xi,
                            j_value: step.j_after,
                            field_snapshot: field.clone(),
                            j_exact_p1: f64::NAN,
                            j_refined: f64::NAN,
                            verified: false,
                        };
                        records.push(verify_record(&record, cfg.verify_refine, cfg.violation_tol));
                    }
                }
                Err(d) => {
                    trace.rows.push(TraceRow {
                        iteration,
                        gamma,
                        j_value: f64::NAN,
                        tau: d.tau,
                    });
                    divergences += 1;
                    field = initial.clone();
                    break;
                }
            }
        }
    }
    Ok(SearchOutcome {
        records,
        trace,
        divergences,
    })
}
