//! Pointwise evaluation of the energy family
//!
//! ```text
//! f_γ(ξ) = ‖ξ‖⁴ − γ ‖ξ‖² det ξ,      ξ ∈ ℝ^{2×2}
//! ```
//!
//! its first derivative with respect to the matrix entries, and a sampling
//! tester for convexity along rank-one lines `ξ + t a⊗b`.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real 2×2 matrix, stored row-major.
///
/// Entry `aij` sits in row `i`, column `j`. When the matrix is `ξ + ∇φ`,
/// row `i` belongs to the field component `φᵢ` and column `j` to the
/// derivative direction `xⱼ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Matrix2::new(d1, 0.0, 0.0, d2)
    }

    /// The rank-one matrix `a ⊗ b`, i.e. `aᵢ bⱼ`.
    pub fn outer(a: [f64; 2], b: [f64; 2]) -> Self {
        Matrix2::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [f64; 4]) -> Self {
        Matrix2::new(e[0], e[1], e[2], e[3])
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    pub fn frob_norm_sq(&self) -> f64 {
        self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Cofactor matrix, the derivative of `det` with respect to each entry.
    pub fn cofactor(&self) -> Matrix2 {
        Matrix2::new(self.a22, -self.a21, -self.a12, self.a11)
    }

    /// Frobenius inner product `Σ aᵢⱼ bᵢⱼ`.
    pub fn dot(&self, other: &Matrix2) -> f64 {
        self.a11 * other.a11 + self.a12 * other.a12 + self.a21 * other.a21 + self.a22 * other.a22
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl AddAssign for Matrix2 {
    fn add_assign(&mut self, rhs: Matrix2) {
        *self = *self + rhs;
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self * -1.0
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, s: f64) -> Matrix2 {
        Matrix2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

/// Squared Frobenius norm.
pub fn frob_norm_sq(m: &Matrix2) -> f64 {
    m.frob_norm_sq()
}

pub fn det2(m: &Matrix2) -> f64 {
    m.det()
}

/// The parameter `γ` of the energy family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub gamma: f64,
}

impl EnergyParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Config(format!("gamma must be finite, got {gamma}")));
        }
        Ok(EnergyParams { gamma })
    }

    /// True when `γ` lies in the open search window `(2, 4/√3)`.
    pub fn in_search_window(&self) -> bool {
        self.gamma > 2.0 && self.gamma < rank_one_threshold()
    }

    pub fn eval(&self, m: &Matrix2) -> f64 {
        eval_f(self, m)
    }

    pub fn grad(&self, m: &Matrix2) -> Matrix2 {
        df_dxi(self, m)
    }
}

/// `f_γ(m) = ‖m‖⁴ − γ ‖m‖² det m`.
pub fn eval_f(p: &EnergyParams, m: &Matrix2) -> f64 {
    let n2 = m.frob_norm_sq();
    n2 * n2 - p.gamma * n2 * m.det()
}

/// Matrix of partial derivatives `∂f_γ/∂mᵢⱼ`:
///
/// ```text
/// Pᵢⱼ = 4 mᵢⱼ ‖m‖² − 2γ mᵢⱼ det m − γ cof(m)ᵢⱼ ‖m‖²
/// ```
pub fn df_dxi(p: &EnergyParams, m: &Matrix2) -> Matrix2 {
    let n2 = m.frob_norm_sq();
    let det = m.det();
    let direct = 4.0 * n2 - 2.0 * p.gamma * det;
    *m * direct - m.cofactor() * (p.gamma * n2)
}

/// `4/√3`, above which `f_γ` stops being rank-one convex.
pub fn rank_one_threshold() -> f64 {
    4.0 / 3.0_f64.sqrt()
}

/// Centered second difference of `t ↦ f_γ(base + t a⊗b)` at `t` with the
/// given step. Negative values mean the function is not convex along that
/// rank-one line.
pub fn second_diff_along_rank_one(
    p: &EnergyParams,
    base: &Matrix2,
    a: [f64; 2],
    b: [f64; 2],
    t: f64,
    step: f64,
) -> f64 {
    let dir = Matrix2::outer(a, b);
    let at = |s: f64| eval_f(p, &(*base + dir * s));
    at(t + step) - 2.0 * at(t) + at(t - step)
}

/// A sampled rank-one line along which `f_γ` is not convex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneWitness {
    pub base: Matrix2,
    pub dir_a: [f64; 2],
    pub dir_b: [f64; 2],
    pub t: f64,
    pub second_diff: f64,
}

/// Sampling distributions for [`search_rank_one_violation_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneSampling {
    /// Base entries are uniform in `[-base_half_width, base_half_width]`.
    pub base_half_width: f64,
    /// Offsets `t` are uniform in `[-t_half_width, t_half_width]`.
    pub t_half_width: f64,
    pub step: f64,
    /// A sample counts as a witness when its second difference is below `-threshold`.
    pub threshold: f64,
}

impl Default for RankOneSampling {
    fn default() -> Self {
        RankOneSampling {
            base_half_width: 1.0,
            t_half_width: 1.0,
            step: 1e-3,
            threshold: 1e-12,
        }
    }
}

/// Random search for a negative second difference along a rank-one line,
/// with the default sampling distributions.
pub fn search_rank_one_violation(
    p: &EnergyParams,
    seed: u64,
    budget: usize,
) -> Option<RankOneWitness> {
    search_rank_one_violation_with(p, seed, budget, &RankOneSampling::default())
}

pub fn search_rank_one_violation_with(
    p: &EnergyParams,
    seed: u64,
    budget: usize,
    sampling: &RankOneSampling,
) -> Option<RankOneWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = sampling.base_half_width;
    for _ in 0..budget {
        let base = Matrix2::new(
            rng.gen_range(-w..=w),
            rng.gen_range(-w..=w),
            rng.gen_range(-w..=w),
            rng.gen_range(-w..=w),
        );
        let dir_a = unit_vector(rng.gen_range(0.0..TAU));
        let dir_b = unit_vector(rng.gen_range(0.0..TAU));
        let t = rng.gen_range(-sampling.t_half_width..=sampling.t_half_width);
        let second_diff = second_diff_along_rank_one(p, &base, dir_a, dir_b, t, sampling.step);
        if second_diff < -sampling.threshold {
            return Some(RankOneWitness {
                base,
                dir_a,
                dir_b,
                t,
                second_diff,
            });
        }
    }
    None
}

fn unit_vector(angle: f64) -> [f64; 2] {
    [angle.cos(), angle.sin()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::{prop, prop_assert, proptest, Strategy};

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    fn fd_gradient(p: &EnergyParams, m: &Matrix2, step: f64) -> Matrix2 {
        let mut out = [0.0; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut plus = m.entries();
            let mut minus = m.entries();
            plus[k] += step;
            minus[k] -= step;
            *slot = (eval_f(p, &Matrix2::from_entries(plus))
                - eval_f(p, &Matrix2::from_entries(minus)))
                / (2.0 * step);
        }
        Matrix2::from_entries(out)
    }

    #[test]
    fn norm_and_det_basics() {
        assert_eq!(frob_norm_sq(&Matrix2::ZERO), 0.0);
        assert_eq!(frob_norm_sq(&Matrix2::IDENTITY), 2.0);
        assert_relative_eq!(
            frob_norm_sq(&Matrix2::diag(1.0, SQRT3)),
            4.0,
            epsilon = 1e-15
        );
        assert_eq!(det2(&Matrix2::IDENTITY), 1.0);
        assert_eq!(det2(&Matrix2::diag(1.0, SQRT3)), SQRT3);
        assert_eq!(det2(&Matrix2::new(1.0, 2.0, 3.0, 4.0)), -2.0);
    }

    #[test]
    fn energy_values() {
        let p = EnergyParams::new(1.7).unwrap();
        assert_eq!(eval_f(&p, &Matrix2::ZERO), 0.0);
        let p = EnergyParams::new(2.0).unwrap();
        assert_eq!(eval_f(&p, &Matrix2::IDENTITY), 0.0);
        let p = EnergyParams::new(rank_one_threshold()).unwrap();
        assert_relative_eq!(eval_f(&p, &Matrix2::diag(1.0, SQRT3)), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn gamma_must_be_finite() {
        assert!(EnergyParams::new(f64::NAN).is_err());
        assert!(EnergyParams::new(f64::INFINITY).is_err());
    }

    #[test]
    fn gradient_special_cases() {
        let p = EnergyParams::new(2.3).unwrap();
        assert_eq!(df_dxi(&p, &Matrix2::ZERO), Matrix2::ZERO);

        let p = EnergyParams::new(2.0).unwrap();
        let g = df_dxi(&p, &Matrix2::IDENTITY);
        assert_eq!(g, Matrix2::ZERO);
        let fd = fd_gradient(&p, &Matrix2::IDENTITY, 1e-6);
        for v in fd.entries() {
            assert!(v.abs() < 1e-8, "{fd:?}");
        }

        let p = EnergyParams::new(0.0).unwrap();
        let m = Matrix2::new(0.3, -1.2, 0.7, 2.0);
        let expected = m * (4.0 * m.frob_norm_sq());
        let got = df_dxi(&p, &m);
        let fd = fd_gradient(&p, &m, 1e-6);
        for ((g, e), f) in got
            .entries()
            .iter()
            .zip(expected.entries())
            .zip(fd.entries())
        {
            assert_relative_eq!(*g, e, max_relative = 1e-14);
            assert_relative_eq!(*g, f, max_relative = 1e-7);
        }
    }

    #[test]
    fn threshold_value() {
        let t = rank_one_threshold();
        assert_relative_eq!(t, 2.309_401_076_758_503, max_relative = 1e-15);
        assert_relative_eq!(t * t, 16.0 / 3.0, max_relative = 1e-15);
        assert!(t > 2.3 && t < 2.31);
    }

    #[test]
    fn convex_case_has_nonnegative_second_differences() {
        let p = EnergyParams::new(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let base = Matrix2::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let a = unit_vector(rng.gen_range(0.0..TAU));
            let b = unit_vector(rng.gen_range(0.0..TAU));
            let t = rng.gen_range(-1.0..1.0);
            assert!(second_diff_along_rank_one(&p, &base, a, b, t, 1e-3) >= 0.0);
        }
    }

    #[test]
    fn rank_one_search_brackets_threshold() {
        let below = EnergyParams::new(2.0).unwrap();
        let above = EnergyParams::new(2.4).unwrap();
        assert!(search_rank_one_violation(&below, 11, 100_000).is_none());
        let w = search_rank_one_violation(&above, 11, 100_000).expect("witness above threshold");
        assert!(w.second_diff < 0.0);
        for d in [w.dir_a, w.dir_b] {
            assert_relative_eq!(d[0].hypot(d[1]), 1.0, max_relative = 1e-14);
        }
        // the witness replays
        let again = second_diff_along_rank_one(&above, &w.base, w.dir_a, w.dir_b, w.t, 1e-3);
        assert_eq!(again, w.second_diff);
    }

    #[test]
    fn empty_budget_finds_nothing() {
        let p = EnergyParams::new(3.0).unwrap();
        assert!(search_rank_one_violation(&p, 0, 0).is_none());
    }

    #[test]
    fn cofactor_is_first_variation_of_det() {
        let m = Matrix2::new(0.4, -1.1, 2.2, 0.9);
        let dm = Matrix2::new(-0.3, 0.8, 0.5, 1.3);
        for eps in [1e-3, 1e-5, 1e-7] {
            let lhs = det2(&(m + dm * eps)) - det2(&m);
            let rhs = eps * m.cofactor().dot(&dm);
            // remainder is exactly eps² det(dm)
            assert_relative_eq!(lhs - rhs, eps * eps * dm.det(), epsilon = 1e-15);
        }
    }

    fn matrix_strategy(r: f64) -> impl Strategy<Value = Matrix2> {
        prop::array::uniform4(-r..r).prop_map(Matrix2::from_entries)
    }

    proptest! {
        #[test]
        fn homogeneous_of_degree_four(m in matrix_strategy(3.0), lambda in -4.0..4.0f64, gamma in 0.0..3.0f64) {
            let p = EnergyParams::new(gamma).unwrap();
            let lhs = eval_f(&p, &(m * lambda));
            let rhs = lambda.powi(4) * eval_f(&p, &m);
            // scale of the individual terms, since f can cancel to ~0
            let scale = lambda.powi(4) * m.frob_norm_sq().powi(2) * (1.0 + gamma);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn gradient_matches_finite_differences(m in matrix_strategy(2.0), gamma in 0.0..3.0f64) {
            let p = EnergyParams::new(gamma).unwrap();
            let g = df_dxi(&p, &m);
            let fd = fd_gradient(&p, &m, 1e-6);
            let scale = 4.0 * m.frob_norm_sq().powf(1.5) * (1.0 + gamma);
            for (a, b) in g.entries().iter().zip(fd.entries()) {
                prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-3 * scale).max(1e-8), "{a} vs {b}");
            }
        }
    }
}
