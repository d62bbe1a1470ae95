use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::energy::Matrix2;
use crate::error::{Error, Result};

/// Number of subdivisions per axis of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("grid needs n >= 2, got {n}")));
        }
        Ok(GridSpec { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Nodes per axis, `n + 1`.
    pub fn nodes_per_axis(&self) -> usize {
        self.n + 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis() * self.nodes_per_axis()
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.n || j == self.n
    }

    pub(crate) fn index(&self, i: usize, j: usize) -> usize {
        i * self.nodes_per_axis() + j
    }

    fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::Dimension {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl TryFrom<usize> for GridSpec {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        GridSpec::new(n)
    }
}

impl From<GridSpec> for usize {
    fn from(g: GridSpec) -> usize {
        g.n
    }
}

/// One real value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    spec: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(spec: GridSpec) -> Self {
        ScalarField {
            spec,
            values: vec![0.0; spec.node_count()],
        }
    }

    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let m = spec.nodes_per_axis();
        let mut values = Vec::with_capacity(spec.node_count());
        for i in 0..m {
            for j in 0..m {
                values.push(f(i, j));
            }
        }
        ScalarField { spec, values }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.spec.index(i, j);
        self.values[k] = v;
    }

    /// Values in row-major node order (`i` outer, `j` inner).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            spec: self.spec,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    fn zero_boundary(&mut self) {
        let n = self.spec.n;
        for k in 0..=n {
            self.set(0, k, 0.0);
            self.set(n, k, 0.0);
            self.set(k, 0, 0.0);
            self.set(k, n, 0.0);
        }
    }
}

/// Nodal values of a test field `φ = (φ₁, φ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comp1: ScalarField,
    pub comp2: ScalarField,
}

impl VectorField {
    pub fn zeros(spec: GridSpec) -> Self {
        VectorField {
            comp1: ScalarField::zeros(spec),
            comp2: ScalarField::zeros(spec),
        }
    }

    /// Builds a field from its two components. Both must share a grid.
    pub fn from_components(comp1: ScalarField, comp2: ScalarField) -> Result<Self> {
        comp1.spec.check_same(&comp2.spec)?;
        Ok(VectorField { comp1, comp2 })
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let comp1 = ScalarField::from_fn(spec, |i, j| f(spec.coord(i), spec.coord(j)).0);
        let comp2 = ScalarField::from_fn(spec, |i, j| f(spec.coord(i), spec.coord(j)).1);
        VectorField { comp1, comp2 }
    }

    pub fn spec(&self) -> GridSpec {
        self.comp1.spec
    }

    pub fn component(&self, comp: usize) -> &ScalarField {
        match comp {
            1 => &self.comp1,
            2 => &self.comp2,
            _ => panic!("field component must be 1 or 2, got {comp}"),
        }
    }

    pub fn component_mut(&mut self, comp: usize) -> &mut ScalarField {
        match comp {
            1 => &mut self.comp1,
            2 => &mut self.comp2,
            _ => panic!("field component must be 1 or 2, got {comp}"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comp1.is_finite() && self.comp2.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.comp1
            .values
            .iter()
            .chain(&self.comp2.values)
            .all(|&v| v == 0.0)
    }

    /// True when every boundary node holds exactly zero in both components.
    pub fn has_zero_boundary(&self) -> bool {
        let spec = self.spec();
        let m = spec.nodes_per_axis();
        (0..m).all(|i| {
            (0..m).all(|j| {
                !spec.is_boundary(i, j)
                    || (self.comp1.get(i, j) == 0.0 && self.comp2.get(i, j) == 0.0)
            })
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.comp1.max_abs().max(self.comp2.max_abs())
    }
}

/// A 2×2 matrix per node, e.g. `∇φ` or `∂f_γ/∂ξ` evaluated along a field.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalMatrixField {
    spec: GridSpec,
    values: Vec<Matrix2>,
}

impl NodalMatrixField {
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(usize, usize) -> Matrix2) -> Self {
        let m = spec.nodes_per_axis();
        let mut values = Vec::with_capacity(spec.node_count());
        for i in 0..m {
            for j in 0..m {
                values.push(f(i, j));
            }
        }
        NodalMatrixField { spec, values }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> Matrix2 {
        self.values[self.spec.index(i, j)]
    }

    pub fn map(&self, f: impl Fn(&Matrix2) -> Matrix2) -> NodalMatrixField {
        NodalMatrixField {
            spec: self.spec,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn map_scalar(&self, f: impl Fn(&Matrix2) -> f64) -> ScalarField {
        ScalarField {
            spec: self.spec,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// The scalar field of entry `(row, col)`, both 1-based.
    pub fn entry(&self, row: usize, col: usize) -> ScalarField {
        self.map_scalar(|m| match (row, col) {
            (1, 1) => m.a11,
            (1, 2) => m.a12,
            (2, 1) => m.a21,
            (2, 2) => m.a22,
            _ => panic!("matrix entry ({row}, {col}) out of range"),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(Matrix2::is_finite)
    }
}

/// Built-in analytic initial fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initializer {
    Zero,
    /// `(sin(x(x−1)y(y−1)), sin(x(x−1)y(y−1))²)`
    P1,
    /// `(x(x−1)y(y−1), 0)`
    P2,
    /// `(sin(2πx)/2π, sin(2πy)/2π)`
    P3,
    /// `(sin(πx)/100, sin(3πy/2)/100)`
    P4,
}

impl Initializer {
    pub const ALL: [Initializer; 5] = [
        Initializer::Zero,
        Initializer::P1,
        Initializer::P2,
        Initializer::P3,
        Initializer::P4,
    ];

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let bump = x * (x - 1.0) * y * (y - 1.0);
        match self {
            Initializer::Zero => (0.0, 0.0),
            Initializer::P1 => {
                let s = bump.sin();
                (s, s * s)
            }
            Initializer::P2 => (bump, 0.0),
            Initializer::P3 => (
                (2.0 * PI * x).sin() / (2.0 * PI),
                (2.0 * PI * y).sin() / (2.0 * PI),
            ),
            Initializer::P4 => ((PI * x).sin() / 100.0, (1.5 * PI * y).sin() / 100.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Initializer::Zero => "zero",
            Initializer::P1 => "p1",
            Initializer::P2 => "p2",
            Initializer::P3 => "p3",
            Initializer::P4 => "p4",
        }
    }
}

impl fmt::Display for Initializer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Initializer {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Initializer::ALL
            .into_iter()
            .find(|init| init.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown initializer {s:?} (expected p1|p2|p3|p4|zero)"
                ))
            })
    }
}

/// Samples `init` at every node, then zeroes the boundary.
pub fn make_field(spec: GridSpec, init: Initializer) -> VectorField {
    project_boundary_zero(&VectorField::from_fn(spec, |x, y| init.eval(x, y)))
}

pub fn project_boundary_zero(f: &VectorField) -> VectorField {
    let mut out = f.clone();
    out.comp1.zero_boundary();
    out.comp2.zero_boundary();
    out
}

/// `y + alpha·x`.
pub fn field_axpy(alpha: f64, x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.spec().check_same(&y.spec())?;
    let combine = |xs: &ScalarField, ys: &ScalarField| ScalarField {
        spec: ys.spec,
        values: xs
            .values
            .iter()
            .zip(&ys.values)
            .map(|(a, b)| b + alpha * a)
            .collect(),
    };
    Ok(VectorField {
        comp1: combine(&x.comp1, &y.comp1),
        comp2: combine(&x.comp2, &y.comp2),
    })
}

/// Discrete L² pairing `Σ_nodes (x₁y₁ + x₂y₂)·h²`.
pub fn field_dot(x: &VectorField, y: &VectorField) -> Result<f64> {
    x.spec().check_same(&y.spec())?;
    let h = x.spec().h();
    let sum: f64 = x
        .comp1
        .values
        .iter()
        .zip(&y.comp1.values)
        .chain(x.comp2.values.iter().zip(&y.comp2.values))
        .map(|(a, b)| a * b)
        .sum();
    Ok(sum * h * h)
}

pub fn field_scale(alpha: f64, x: &VectorField) -> VectorField {
    VectorField {
        comp1: x.comp1.map(|v| alpha * v),
        comp2: x.comp2.map(|v| alpha * v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    #[test]
    fn grid_spec_rejects_tiny_grids() {
        assert!(GridSpec::new(1).is_err());
        assert!(GridSpec::new(0).is_err());
        let s = spec(10);
        assert_eq!(s.h() * 10.0, 1.0);
        assert_eq!(s.node_count(), 121);
    }

    #[test]
    fn initializers() {
        assert!(make_field(spec(8), Initializer::Zero).is_zero());

        let f = make_field(spec(2), Initializer::P2);
        assert_eq!(f.comp1.get(1, 1), 0.0625);
        assert_eq!(f.comp2.get(1, 1), 0.0);

        let f = make_field(spec(16), Initializer::P3);
        assert!(f.has_zero_boundary());
        assert_relative_eq!(f.comp1.get(4, 7), 1.0 / (2.0 * PI), max_relative = 1e-15);

        // sin(3πy/2) does not vanish at y = 1; projection takes care of it
        let raw = VectorField::from_fn(spec(4), |x, y| Initializer::P4.eval(x, y));
        assert!(raw.comp2.get(2, 4).abs() > 1e-3);
        assert!(make_field(spec(4), Initializer::P4).has_zero_boundary());
    }

    #[test]
    fn unknown_initializer_is_config_error() {
        assert!(matches!("p7".parse::<Initializer>(), Err(Error::Config(_))));
        for init in Initializer::ALL {
            assert_eq!(init.name().parse::<Initializer>().unwrap(), init);
        }
    }

    #[test]
    fn projection_of_ones_keeps_only_center() {
        let s = spec(2);
        let ones = VectorField::from_fn(s, |_, _| (1.0, 1.0));
        let p = project_boundary_zero(&ones);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if (i, j) == (1, 1) { 1.0 } else { 0.0 };
                assert_eq!(p.comp1.get(i, j), expect);
                assert_eq!(p.comp2.get(i, j), expect);
            }
        }
        assert_eq!(project_boundary_zero(&p), p);
        let z = VectorField::zeros(s);
        assert_eq!(project_boundary_zero(&z), z);
    }

    #[test]
    fn pairing_basics() {
        let s = spec(6);
        let f = make_field(s, Initializer::P1);
        let z = VectorField::zeros(s);
        assert_eq!(field_dot(&z, &f).unwrap(), 0.0);
        assert!(field_dot(&f, &f).unwrap() > 0.0);
        assert_eq!(field_dot(&z, &z).unwrap(), 0.0);
        assert_eq!(field_axpy(1.0, &f, &z).unwrap(), f);
        assert!(matches!(
            field_dot(&f, &VectorField::zeros(spec(5))),
            Err(Error::Dimension { left: 6, right: 5 })
        ));
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_commutes_with_scaling(
            vals in prop::collection::vec(-2.0..2.0f64, 50),
            alpha in -3.0..3.0f64,
        ) {
            let s = spec(4);
            let f = VectorField {
                comp1: ScalarField::from_fn(s, |i, j| vals[i * 5 + j]),
                comp2: ScalarField::from_fn(s, |i, j| vals[25 + i * 5 + j]),
            };
            let p = project_boundary_zero(&f);
            prop_assert!(p.has_zero_boundary());
            prop_assert_eq!(&project_boundary_zero(&p), &p);
            prop_assert_eq!(
                project_boundary_zero(&field_scale(alpha, &f)),
                field_scale(alpha, &p)
            );
            prop_assert!(field_dot(&p, &p).unwrap() >= 0.0);
        }
    }
}
