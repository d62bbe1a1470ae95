// Checks the discrete gradient of J against finite differences, and the
// expanded chain-rule gradient against the divergence form under refinement.

use qclab::energy::{EnergyParams, Matrix2};
use qclab::functional::{eval_j, grad_j_divergence, grad_j_expanded, Scheme};
use qclab::grid::{make_field, GridSpec, Initializer, VectorField};

fn max_interior_gap(a: &VectorField, b: &VectorField) -> f64 {
    let n = a.spec().n();
    let mut gap = 0.0f64;
    for c in 1..=2 {
        for i in 1..n {
            for j in 1..n {
                gap = gap.max((a.component(c).get(i, j) - b.component(c).get(i, j)).abs());
            }
        }
    }
    gap
}

fn main() -> qclab::error::Result<()> {
    let p = EnergyParams::new(2.25)?;
    let xi = Matrix2::new(0.3, 0.7, 0.1, 0.5);
    let spec = GridSpec::new(8)?;
    let f = make_field(spec, Initializer::P1);
    let g = grad_j_divergence(&p, &xi, &f);
    let h2 = spec.h() * spec.h();
    let eps = 1e-6;

    let mut worst = 0.0f64;
    for (i, j) in [(1, 1), (3, 5), (4, 4), (7, 2)] {
        for c in 1..=2 {
            let mut plus = f.clone();
            let mut minus = f.clone();
            let v = f.component(c).get(i, j);
            plus.component_mut(c).set(i, j, v + eps);
            minus.component_mut(c).set(i, j, v - eps);
            let fd = (eval_j(&p, &xi, &plus, Scheme::TrapezoidNodal)
                - eval_j(&p, &xi, &minus, Scheme::TrapezoidNodal))
                / (2.0 * eps);
            let analytic = g.component(c).get(i, j) * h2;
            let rel = (fd - analytic).abs() / analytic.abs().max(1e-12);
            worst = worst.max(rel);
            println!(
                "node ({i},{j}) comp {c}: finite difference {fd:+.6e}, gradient {analytic:+.6e}"
            );
        }
    }
    println!("worst relative error {worst:.2e}");

    let p = EnergyParams::new(2.2)?;
    let mut previous: Option<f64> = None;
    for n in [16, 32, 64] {
        let f = make_field(GridSpec::new(n)?, Initializer::P1);
        let gap = max_interior_gap(
            &grad_j_expanded(&p, &Matrix2::IDENTITY, &f),
            &grad_j_divergence(&p, &Matrix2::IDENTITY, &f),
        );
        match previous {
            Some(prev) => println!("n = {n:>2}: max gap {gap:.3e}, ratio {:.2}", prev / gap),
            None => println!("n = {n:>2}: max gap {gap:.3e}"),
        }
        previous = Some(gap);
    }
    Ok(())
}
