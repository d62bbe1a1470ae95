// Writes a field snapshot, reads it back, and evaluates J on it with the
// trapezoid rule, the exact P1 integral, and the exact integral after
// bilinear refinement.

use qclab::energy::{EnergyParams, Matrix2};
use qclab::functional::{eval_j, Scheme};
use qclab::grid::{
    make_field, p1_exact_integral, read_snapshot, refine, write_snapshot, GridSpec, Initializer,
};

fn main() -> qclab::error::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| qclab::error::Error::Io {
        path: std::env::temp_dir(),
        source: e,
    })?;
    let path = dir.path().join("field.txt");
    let field = make_field(GridSpec::new(10)?, Initializer::P1);
    write_snapshot(&field, &path)?;
    let back = read_snapshot(&path)?;
    assert_eq!(back, field);

    let p = EnergyParams::new(2.2723)?;
    let xi = Matrix2::new(0.2, 0.9, 0.4, 0.6);
    println!(
        "trapezoid     J = {:+.12e}",
        eval_j(&p, &xi, &back, Scheme::TrapezoidNodal)
    );
    println!(
        "exact P1      J = {:+.12e}",
        p1_exact_integral(&p, &xi, &back)
    );
    for k in [2, 4] {
        println!(
            "refined x{k}    J = {:+.12e}",
            p1_exact_integral(&p, &xi, &refine(&back, k))
        );
    }
    Ok(())
}
