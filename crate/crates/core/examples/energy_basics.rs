// Pointwise energy, its derivative, and the rank-one convexity threshold.

use qclab::energy::{rank_one_threshold, search_rank_one_violation, EnergyParams, Matrix2};

fn main() -> qclab::error::Result<()> {
    let xi = Matrix2::diag(1.0, 3f64.sqrt());
    let p = EnergyParams::new(2.2)?;
    println!("f(xi)      = {:.6}", p.eval(&xi));
    println!("df/dxi(xi) = {:?}", p.grad(&xi));
    println!(
        "rank-one threshold 4/sqrt(3) = {:.10}",
        rank_one_threshold()
    );

    for gamma in [2.0, 2.2, 2.35, 2.4] {
        let p = EnergyParams::new(gamma)?;
        match search_rank_one_violation(&p, 11, 20_000) {
            Some(w) => println!(
                "gamma {gamma}: not rank-one convex, second difference {:.3e} at base {:?}",
                w.second_diff, w.base
            ),
            None => println!("gamma {gamma}: no rank-one violation in 20000 samples"),
        }
    }
    Ok(())
}
