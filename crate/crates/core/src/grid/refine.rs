use super::field::{project_boundary_zero, GridSpec, ScalarField, VectorField};

/// Bilinear interpolation of `f` onto a grid `factor` times finer, with the
/// boundary re-projected.
pub fn refine(f: &VectorField, factor: usize) -> VectorField {
    assert!(
        factor >= 2,
        "refinement factor must be at least 2, got {factor}"
    );
    let coarse = f.spec();
    let fine = GridSpec::new(coarse.n() * factor).expect("finer grid is valid");
    let interp = |v: &ScalarField| {
        ScalarField::from_fn(fine, |a, b| {
            let (ci, ri) = (a / factor, a % factor);
            let (cj, rj) = (b / factor, b % factor);
            let s = ri as f64 / factor as f64;
            let t = rj as f64 / factor as f64;
            let at = |di: usize, dj: usize| {
                // weights vanish for the out-of-range neighbours on the last row/column
                let i = (ci + di).min(coarse.n());
                let j = (cj + dj).min(coarse.n());
                v.get(i, j)
            };
            (1.0 - s) * (1.0 - t) * at(0, 0)
                + s * (1.0 - t) * at(1, 0)
                + (1.0 - s) * t * at(0, 1)
                + s * t * at(1, 1)
        })
    };
    project_boundary_zero(&VectorField {
        comp1: interp(&f.comp1),
        comp2: interp(&f.comp2),
    })
}
