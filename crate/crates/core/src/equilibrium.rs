//! Equilibrium analysis of the companion dynamics.
//!
//! The fixed point solves `(I - F) Y = V`. When `1 - c1 - c2 != 0` the
//! system matrix is regular and the equilibrium is unique with every
//! component equal to `P / (1 - c1 - c2)`. On the boundary `c1 + c2 = 1`
//! the matrix is rank deficient and the optimal equilibrium is defined as
//! the Tikhonov-regularized solution
//! `(G^T G + theta^2 I)^{-1} G^T V`, the minimizer of
//! `|V - G y|^2 + theta^2 |y|^2`.

use num_traits::cast;

use crate::compensated::{two_prod, Double};
use crate::error::{Error, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::model::{build_companion, ModelParams};
use crate::scalar::{lit, Scalar};

/// Rank classification of the equilibrium system matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    RankDeficient,
}

/// Which solver produced an [`EquilibriumResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumKind {
    Unique,
    Regularized,
}

/// The linear system `matrix * y = rhs` whose solution is the equilibrium,
/// with `matrix = I - F` and `rhs = (0, 0, P)`.
#[derive(Clone, Copy, Debug)]
pub struct EquilibriumProblem<T = f64> {
    matrix: Matrix3<T>,
    rhs: Vector3<T>,
    params: ModelParams<T>,
}

/// Strength of the Tikhonov term; the perturbation matrix is `theta * I`,
/// whose spectral norm is `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularizationConfig<T = f64> {
    theta: T,
}

impl<T: Scalar> RegularizationConfig<T> {
    pub fn new(theta: T) -> Result<Self> {
        if !theta.is_finite() || theta <= T::zero() || theta >= T::one() {
            return Err(Error::InvalidTheta {
                theta: cast::<T, f64>(theta).unwrap_or(f64::NAN),
            });
        }
        Ok(RegularizationConfig { theta })
    }

    pub fn theta(&self) -> T {
        self.theta
    }
}

impl<T: Scalar> Default for RegularizationConfig<T> {
    fn default() -> Self {
        RegularizationConfig { theta: lit(1e-6) }
    }
}

/// Outcome of an equilibrium solve.
///
/// `income` is the first solution component (the equilibrium national
/// income), `state` the full fixed-point vector `(s_e, s2, s3)`, and
/// `objective` the value of `|V - G y|^2 + |theta y|^2` at the solution
/// (with no penalty term for the unique branch). For the regularized
/// branch, `consistent` records whether the right-hand side lies in the
/// column span of the system matrix.
#[derive(Clone, Copy, Debug)]
pub struct EquilibriumResult<T = f64> {
    pub kind: EquilibriumKind,
    pub income: T,
    pub state: Vector3<T>,
    pub objective: T,
    pub theta: Option<T>,
    pub consistent: Option<bool>,
}

/// Assemble the equilibrium system for the given parameters; entrywise this
/// is exactly the identity minus the companion matrix.
pub fn build_problem<T: Scalar>(params: &ModelParams<T>) -> EquilibriumProblem<T> {
    let companion = build_companion(params);
    let matrix = Matrix3::identity() - *companion.transition();
    EquilibriumProblem { matrix, rhs: *companion.forcing(), params: *params }
}

impl<T: Scalar> EquilibriumProblem<T> {
    pub fn matrix(&self) -> &Matrix3<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &Vector3<T> {
        &self.rhs
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    /// Classify the system under the scale-aware determinant threshold.
    /// Equivalent to testing `1 - c1 - c2` against zero, up to rounding.
    pub fn regularity(&self) -> Regularity {
        if self.matrix.det().abs() <= self.matrix.singularity_threshold() {
            Regularity::RankDeficient
        } else {
            Regularity::Regular
        }
    }

    /// Closed-form unique equilibrium for the regular case.
    pub fn unique_equilibrium(&self) -> Result<EquilibriumResult<T>> {
        if self.regularity() == Regularity::RankDeficient {
            return Err(Error::RankDeficient);
        }
        let state = self.matrix.solve(&self.rhs)?;
        let residual = self.rhs - self.matrix.mul_vec(&state);
        Ok(EquilibriumResult {
            kind: EquilibriumKind::Unique,
            income: state[0],
            state,
            objective: residual.norm_sq(),
            theta: None,
            consistent: None,
        })
    }

    /// Regularized optimal equilibrium `(G^T G + theta^2 I)^{-1} G^T V`.
    ///
    /// Defined for any parameters; on a regular system it approximates the
    /// unique equilibrium to `O(theta^2)`.
    pub fn optimal_equilibrium(
        &self,
        config: &RegularizationConfig<T>,
    ) -> Result<EquilibriumResult<T>> {
        let state = solve_regularized(&self.matrix, &self.rhs, config.theta())?;
        let objective = self.objective_value(config, &state);
        let projected = self.matrix.mul_vec(&self.matrix.pseudo_solve(&self.rhs));
        let out_of_span = (self.rhs - projected).norm();
        let consistent = out_of_span <= lit::<T>(1e-9) * (T::one() + self.rhs.norm());
        Ok(EquilibriumResult {
            kind: EquilibriumKind::Regularized,
            income: state[0],
            state,
            objective,
            theta: Some(config.theta()),
            consistent: Some(consistent),
        })
    }

    /// Value of the regularized objective `|V - G y|^2 + theta^2 |y|^2`.
    pub fn objective_value(&self, config: &RegularizationConfig<T>, y: &Vector3<T>) -> T {
        let residual = self.rhs - self.matrix.mul_vec(y);
        let theta = config.theta();
        residual.norm_sq() + theta * theta * y.norm_sq()
    }

    /// Analytic gradient of the regularized objective at `y`:
    /// `-2 G^T V + 2 G^T G y + 2 theta^2 y`.
    pub fn objective_gradient(&self, config: &RegularizationConfig<T>, y: &Vector3<T>) -> Vector3<T> {
        let two = T::one() + T::one();
        let residual = self.matrix.mul_vec(y) - self.rhs;
        let theta = config.theta();
        let grad = self.matrix.transpose().mul_vec(&residual) + y.scale(theta * theta);
        grad.scale(two)
    }
}

/// Solve the normal equations `(G^T G + theta^2 I) x = G^T v` by Cramer's
/// rule in compensated double-word arithmetic.
///
/// The normal matrix has condition of order `1/theta^2`; working-precision
/// elimination would lose the null-space component of the solution near the
/// rank-deficient boundary, so assembly and elimination both run with
/// doubled mantissa.
pub(crate) fn solve_regularized<T: Scalar>(
    g: &Matrix3<T>,
    v: &Vector3<T>,
    theta: T,
) -> Result<Vector3<T>> {
    let theta_sq = two_prod(theta, theta);
    let mut normal = [[Double::zero(); 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut acc = Double::zero();
            for k in 0..3 {
                acc = acc.add(two_prod(g[(k, i)], g[(k, j)]));
            }
            if i == j {
                acc = acc.add(theta_sq);
            }
            normal[i][j] = acc;
            normal[j][i] = acc;
        }
    }
    let mut rhs = [Double::zero(); 3];
    for (i, slot) in rhs.iter_mut().enumerate() {
        let mut acc = Double::zero();
        for k in 0..3 {
            acc = acc.add(two_prod(g[(k, i)], v[k]));
        }
        *slot = acc;
    }

    let det = det3_double(&normal);
    let scale = normal
        .iter()
        .flatten()
        .fold(T::zero(), |m, d| if d.hi.abs() > m { d.hi.abs() } else { m });
    let eps = T::epsilon();
    let threshold = eps * eps * lit::<T>(2048.0) * (T::one() + scale * scale * scale);
    if !det.hi.is_finite() || det.hi.abs() <= threshold {
        return Err(Error::RegularizationUnderflow {
            theta: cast::<T, f64>(theta).unwrap_or(f64::NAN),
        });
    }

    let mut x = Vector3::zero();
    for col in 0..3 {
        let mut replaced = normal;
        for row in 0..3 {
            replaced[row][col] = rhs[row];
        }
        x[col] = det3_double(&replaced).div(det).value();
    }
    Ok(x)
}

fn det3_double<T: Scalar>(m: &[[Double<T>; 3]; 3]) -> Double<T> {
    let minor = |r1: usize, c1: usize, r2: usize, c2: usize| {
        m[r1][c1].mul(m[r2][c2]).sub(m[r1][c2].mul(m[r2][c1]))
    };
    m[0][0]
        .mul(minor(1, 1, 2, 2))
        .sub(m[0][1].mul(minor(1, 0, 2, 2)))
        .add(m[0][2].mul(minor(1, 0, 2, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate_companion, StateVector, ValidationMode};

    fn problem(c1: f64, c2: f64, b: f64, p: f64, mode: ValidationMode) -> EquilibriumProblem<f64> {
        build_problem(&ModelParams::new(c1, c2, b, p, mode).unwrap())
    }

    #[test]
    fn system_matrix_is_identity_minus_companion() {
        let params = ModelParams::<f64>::new(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict).unwrap();
        let prob = build_problem(&params);
        let f = *build_companion(&params).transition();
        let expected = Matrix3::identity() - f;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prob.matrix()[(i, j)], expected[(i, j)]);
            }
        }
        let row3 = prob.matrix().row(2);
        assert!((row3[0] - 0.06).abs() < 1e-15);
        assert!((row3[1] + 0.26).abs() < 1e-15);
        assert!((row3[2] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn zero_autonomous_level_gives_zero_rhs() {
        let prob = problem(0.5, 0.3, 0.2, 0.0, ValidationMode::Strict);
        assert_eq!(prob.rhs().as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn boundary_system_rows() {
        let prob = problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended);
        let row3 = prob.matrix().row(2);
        assert!((row3[0] - 0.4).abs() < 1e-15);
        assert!((row3[1] + 0.2).abs() < 1e-15);
        assert!((row3[2] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn regularity_classification() {
        assert_eq!(
            problem(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict).regularity(),
            Regularity::Regular
        );
        assert_eq!(
            problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended).regularity(),
            Regularity::RankDeficient
        );
    }

    #[test]
    fn near_singular_classification_follows_the_threshold() {
        let prob = problem(0.3, 0.699999999999, 0.5, 1.0, ValidationMode::Strict);
        let det = prob.matrix().det();
        let expected = if det.abs() <= prob.matrix().singularity_threshold() {
            Regularity::RankDeficient
        } else {
            Regularity::Regular
        };
        assert_eq!(prob.regularity(), expected);
    }

    #[test]
    fn unique_equilibrium_closed_form() {
        let prob = problem(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict);
        let eq = prob.unique_equilibrium().unwrap();
        assert_eq!(eq.kind, EquilibriumKind::Unique);
        assert!((eq.income - 500.0).abs() <= 500.0 * 1e-10);
        for i in 0..3 {
            assert!((eq.state[i] - 500.0).abs() <= 500.0 * 1e-10);
        }
        assert!(eq.theta.is_none());
        assert!(eq.consistent.is_none());
        assert!(eq.objective <= 1e-10 * (1.0 + prob.rhs().norm()));
    }

    #[test]
    fn unique_equilibrium_zero_forcing() {
        let eq = problem(0.5, 0.3, 0.2, 0.0, ValidationMode::Strict)
            .unique_equilibrium()
            .unwrap();
        assert_eq!(eq.state.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn unique_equilibrium_simple_half_sum() {
        let eq = problem(0.25, 0.25, 3.0, 1.0, ValidationMode::Strict)
            .unique_equilibrium()
            .unwrap();
        assert!((eq.income - 2.0).abs() <= 2.0 * 1e-10);
    }

    #[test]
    fn unique_equilibrium_rejects_rank_deficient_systems() {
        let err = problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended)
            .unique_equilibrium()
            .unwrap_err();
        assert_eq!(err, Error::RankDeficient);
    }

    #[test]
    fn unique_equilibrium_is_the_limit_of_the_dynamics() {
        let params = ModelParams::new(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict).unwrap();
        let eq = build_problem(&params).unique_equilibrium().unwrap();
        let states = simulate_companion(&params, StateVector::new(0.0, 0.0, 0.0), 10_000).unwrap();
        let last = states.last().unwrap().to_vector();
        assert!((last - eq.state).norm() <= 1e-6 * eq.state.norm());
    }

    #[test]
    fn regularized_solution_with_zero_rhs_is_zero() {
        let prob = problem(0.6, 0.4, 1.0, 0.0, ValidationMode::Extended);
        let eq = prob
            .optimal_equilibrium(&RegularizationConfig::new(1e-4).unwrap())
            .unwrap();
        assert_eq!(eq.state.as_array(), [0.0, 0.0, 0.0]);
        assert_eq!(eq.objective, 0.0);
        assert_eq!(eq.consistent, Some(true));
    }

    #[test]
    fn regularized_solution_approximates_the_unique_one() {
        let prob = problem(0.5, 0.3, 0.2, 100.0, ValidationMode::Strict);
        let unique = prob.unique_equilibrium().unwrap();
        let reg = prob
            .optimal_equilibrium(&RegularizationConfig::new(1e-6).unwrap())
            .unwrap();
        assert_eq!(reg.kind, EquilibriumKind::Regularized);
        assert_eq!(reg.theta, Some(1e-6));
        assert!((reg.state - unique.state).norm() <= 1e-8 * (1.0 + unique.state.norm()));
    }

    #[test]
    fn regularized_solution_approaches_the_pseudoinverse_one() {
        let prob = problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended);
        let pseudo = prob.matrix().pseudo_solve(prob.rhs());
        let reg = prob
            .optimal_equilibrium(&RegularizationConfig::new(1e-6).unwrap())
            .unwrap();
        assert!(
            (reg.state - pseudo).norm() <= 1e-6 * (1.0 + pseudo.norm()),
            "distance {:e}",
            (reg.state - pseudo).norm()
        );
        // forcing with nonzero P never lies in the column span on the boundary
        assert_eq!(reg.consistent, Some(false));
    }

    #[test]
    fn gradient_vanishes_at_the_regularized_solution() {
        let prob = problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended);
        let config = RegularizationConfig::new(1e-3).unwrap();
        let eq = prob.optimal_equilibrium(&config).unwrap();
        let grad = prob.objective_gradient(&config, &eq.state);
        let scale = prob.matrix().transpose().mul_vec(prob.rhs()).norm();
        assert!(grad.norm() <= 1e-8 * (1.0 + scale), "gradient norm {:e}", grad.norm());
    }

    #[test]
    fn gradient_is_zero_at_origin_with_zero_rhs() {
        let prob = problem(0.6, 0.4, 1.0, 0.0, ValidationMode::Extended);
        let config = RegularizationConfig::new(0.1).unwrap();
        let grad = prob.objective_gradient(&config, &Vector3::zero());
        assert_eq!(grad.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let prob = problem(0.45, 0.35, 0.8, 5.0, ValidationMode::Strict);
        let config = RegularizationConfig::new(1e-2).unwrap();
        let y = Vector3::new(1.3, -0.7, 2.1);
        let analytic = prob.objective_gradient(&config, &y);
        let mut numeric = Vector3::zero();
        for i in 0..3 {
            let h = 1e-6 * (1.0 + y[i].abs());
            let mut plus = y;
            let mut minus = y;
            plus[i] += h;
            minus[i] -= h;
            numeric[i] =
                (prob.objective_value(&config, &plus) - prob.objective_value(&config, &minus))
                    / (2.0 * h);
        }
        assert!((analytic - numeric).norm() <= 1e-5 * (1.0 + analytic.norm()));
    }

    #[test]
    fn theta_outside_unit_interval_is_rejected() {
        assert!(RegularizationConfig::new(0.0).is_err());
        assert!(RegularizationConfig::new(1.0).is_err());
        assert!(RegularizationConfig::new(-0.5).is_err());
        assert!(RegularizationConfig::new(1e-9).is_ok());
    }

    #[test]
    fn underflowing_theta_reports_a_configuration_error() {
        let prob = problem(0.6, 0.4, 1.0, 10.0, ValidationMode::Extended);
        let err = prob
            .optimal_equilibrium(&RegularizationConfig::new(1e-200).unwrap())
            .unwrap_err();
        assert_eq!(err.code(), "regularization-underflow");
    }

    #[test]
    fn tikhonov_picks_the_minimum_norm_solution() {
        // consistent rank-deficient system: rhs constructed inside the column span
        let prob = problem(0.5, 0.5, 1.0, 1.0, ValidationMode::Extended);
        let g = *prob.matrix();
        let rhs = g.mul_vec(&Vector3::new(0.3, -1.2, 0.9));
        let y = solve_regularized(&g, &rhs, 1e-4).unwrap();
        let null_dir = Vector3::new(1.0, 1.0, 1.0).scale(1.0 / 3.0f64.sqrt());
        assert!(y.dot(&null_dir).abs() <= 1e-8 * y.norm(), "null component {:e}", y.dot(&null_dir));
    }
}
