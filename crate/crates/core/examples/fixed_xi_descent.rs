// Steepest descent with ξ = diag(1, √3) held fixed while γ steps down from
// 4/√3 towards 2. J falls quickly and then levels off without going negative.

use qclab::energy::Matrix2;
use qclab::grid::{GridSpec, Initializer};
use qclab::optimizer::{run_search, DescentConfig, XiMode};

fn main() -> qclab::error::Result<()> {
    for init in [Initializer::P3, Initializer::P1] {
        let cfg = DescentConfig {
            grid: GridSpec::new(10)?,
            xi_mode: XiMode::Fixed(Matrix2::diag(1.0, 3f64.sqrt())),
            initializer: init,
            gamma_end: 2.25,
            max_iters_per_gamma: 50,
            ..Default::default()
        };
        let out = run_search(&cfg)?;
        println!("initial field {init}:");
        for row in out.trace.rows.iter().filter(|r| {
            [1, 2, 5, 10, 20, 50, 100, 200].contains(&r.iteration) || r.iteration == out.trace.len()
        }) {
            println!(
                "  iteration {:>4}  gamma {:.4}  J {:+.6e}  tau {:.3e}",
                row.iteration, row.gamma, row.j_value, row.tau
            );
        }
        let min = out.trace.j_values().fold(f64::INFINITY, f64::min);
        println!("  smallest J {min:+.3e}, {} record(s)", out.records.len());
    }
    Ok(())
}
