// Random-ξ descent: a fresh ξ with entries uniform in [0, 1) at every
// iteration, over the γ schedule from 4/√3 down to 2. Every iterate with
// J < −violation_tol becomes a record checked by the exact P1 integral.

use qclab::grid::GridSpec;
use qclab::optimizer::{run_search, DescentConfig, XiMode};

fn main() -> qclab::error::Result<()> {
    for seed in 0..2 {
        let cfg = DescentConfig {
            grid: GridSpec::new(10)?,
            xi_mode: XiMode::RandomPerIteration { scale: 1.0 },
            gamma_end: 2.2,
            max_iters_per_gamma: 40,
            seed,
            ..Default::default()
        };
        let out = run_search(&cfg)?;
        let min_j = out
            .trace
            .j_values()
            .filter(|j| j.is_finite())
            .fold(f64::INFINITY, f64::min);
        println!(
            "seed {seed}: {} iterations, smallest J {min_j:+.3e}, {} record(s), {} verified, {} divergence(s)",
            out.trace.len(),
            out.records.len(),
            out.records.iter().filter(|r| r.verified).count(),
            out.divergences,
        );
        for r in out.records.iter().take(5) {
            println!(
                "  iteration {:>5} gamma {:.4} J {:+.4e} exact {:+.4e} refined {:+.4e}",
                r.iteration, r.gamma, r.j_value, r.j_exact_p1, r.j_refined
            );
        }
    }
    Ok(())
}
