//! Model parameters, the scalar income recurrences and the companion-form
//! state space.
//!
//! The delayed model drives national income `T_k` through a third-order
//! linear recurrence: consumption is a linear function of the two previous
//! incomes plus the autonomous level `P`, and investment is an accelerator
//! on consumption changes. The classic second-order model is kept as a
//! reference simulator.

use crate::error::{Error, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::scalar::Scalar;

/// Which constraint set parameters are validated against.
///
/// `Strict` enforces the model assumptions (`c1 + c2 < 1`); `Extended`
/// additionally admits the boundary `c1 + c2 = 1`, where the equilibrium
/// system becomes rank deficient and only the regularized solver applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    Strict,
    Extended,
}

/// Validated parameters of the delayed model.
///
/// `c1`, `c2` weight the two lagged incomes in consumption, `b` is the
/// accelerator factor, `p` the autonomous consumption level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T = f64> {
    c1: T,
    c2: T,
    b: T,
    p: T,
    mode: ValidationMode,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(c1: T, c2: T, b: T, p: T, mode: ValidationMode) -> Result<Self> {
        for (name, value) in [("c1", c1), ("c2", c2), ("b", b), ("P", p)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameters {
                    constraint: format!("{name} must be finite, got {value}"),
                });
            }
        }
        if c1 <= T::zero() {
            return Err(Error::InvalidParameters {
                constraint: format!("c1 > 0 is required, got c1 = {c1}"),
            });
        }
        if c2 <= T::zero() {
            return Err(Error::InvalidParameters {
                constraint: format!("c2 > 0 is required, got c2 = {c2}"),
            });
        }
        if b <= T::zero() {
            return Err(Error::InvalidParameters {
                constraint: format!("b > 0 is required, got b = {b}"),
            });
        }
        let sum = c1 + c2;
        match mode {
            ValidationMode::Strict => {
                if sum >= T::one() {
                    return Err(Error::InvalidParameters {
                        constraint: format!(
                            "strict mode requires 0 < c1 + c2 < 1, got c1 + c2 = {sum}"
                        ),
                    });
                }
            }
            ValidationMode::Extended => {
                if sum > T::one() {
                    return Err(Error::InvalidParameters {
                        constraint: format!(
                            "extended mode requires 0 < c1 + c2 <= 1, got c1 + c2 = {sum}"
                        ),
                    });
                }
            }
        }
        Ok(ModelParams { c1, c2, b, p, mode })
    }

    pub fn c1(&self) -> T {
        self.c1
    }

    pub fn c2(&self) -> T {
        self.c2
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    /// Coefficients multiplying `(T_{k-3}, T_{k-2}, T_{k-1})` in the income
    /// recurrence; also the third row of the companion matrix. Both the
    /// scalar and the companion simulator draw on these exact values.
    pub(crate) fn recurrence_coefficients(&self) -> [T; 3] {
        [
            -(self.b * self.c2),
            self.c2 + self.b * (self.c2 - self.c1),
            self.c1 * (T::one() + self.b),
        ]
    }
}

/// Validated parameters of the classic second-order model: multiplier `a`,
/// accelerator `b`, constant governmental expenditure `g_bar`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicParams<T = f64> {
    a: T,
    b: T,
    g_bar: T,
}

impl<T: Scalar> ClassicParams<T> {
    pub fn new(a: T, b: T, g_bar: T) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("G_bar", g_bar)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameters {
                    constraint: format!("{name} must be finite, got {value}"),
                });
            }
        }
        if a <= T::zero() || a >= T::one() {
            return Err(Error::InvalidParameters {
                constraint: format!("0 < a < 1 is required, got a = {a}"),
            });
        }
        if b <= T::zero() {
            return Err(Error::InvalidParameters {
                constraint: format!("b > 0 is required, got b = {b}"),
            });
        }
        Ok(ClassicParams { a, b, g_bar })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn g_bar(&self) -> T {
        self.g_bar
    }
}

/// State of the companion dynamics: three consecutive incomes
/// `(T_k, T_{k+1}, T_{k+2})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector<T = f64> {
    pub y1: T,
    pub y2: T,
    pub y3: T,
}

impl<T: Scalar> StateVector<T> {
    pub fn new(y1: T, y2: T, y3: T) -> Self {
        StateVector { y1, y2, y3 }
    }

    pub fn to_vector(self) -> Vector3<T> {
        Vector3::new(self.y1, self.y2, self.y3)
    }

    pub fn from_vector(v: Vector3<T>) -> Self {
        StateVector { y1: v[0], y2: v[1], y3: v[2] }
    }

    pub fn is_finite(&self) -> bool {
        self.y1.is_finite() && self.y2.is_finite() && self.y3.is_finite()
    }
}

/// First-order companion form of the income recurrence:
/// `y_{k+1} = transition * y_k + forcing`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompanionSystem<T = f64> {
    transition: Matrix3<T>,
    forcing: Vector3<T>,
}

impl<T: Scalar> CompanionSystem<T> {
    /// State-transition matrix; rows one and two shift the state, row three
    /// carries the recurrence coefficients.
    pub fn transition(&self) -> &Matrix3<T> {
        &self.transition
    }

    /// Constant forcing `(0, 0, P)`.
    pub fn forcing(&self) -> &Vector3<T> {
        &self.forcing
    }

    /// One step of the dynamics. The first two output components equal
    /// `y2`, `y3` exactly.
    pub fn step(&self, y: &StateVector<T>) -> StateVector<T> {
        let next = self.transition.mul_vec(&y.to_vector()) + self.forcing;
        StateVector::from_vector(next)
    }
}

/// Build the companion system of the delayed model.
pub fn build_companion<T: Scalar>(params: &ModelParams<T>) -> CompanionSystem<T> {
    let z = T::zero();
    let o = T::one();
    let row3 = params.recurrence_coefficients();
    CompanionSystem {
        transition: Matrix3::from_rows([[z, o, z], [z, z, o], row3]),
        forcing: Vector3::new(z, z, params.p()),
    }
}

/// One row of a simulated trajectory. `consumption` and `investment` are
/// populated once enough lags exist (index 2 onward in the delayed model);
/// the classic simulator leaves them absent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRecord<T = f64> {
    pub index: usize,
    pub income: T,
    pub consumption: Option<T>,
    pub investment: Option<T>,
}

/// Simulated income trajectory with consecutive indices starting at
/// `start_index`. Investment is income minus consumption by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T = f64> {
    pub start_index: usize,
    pub records: Vec<TrajectoryRecord<T>>,
}

impl<T: Scalar> Trajectory<T> {
    /// Income values in index order.
    pub fn incomes(&self) -> Vec<T> {
        self.records.iter().map(|r| r.income).collect()
    }
}

/// Simulate the delayed model from seed incomes `(T_0, T_1, T_2)`.
///
/// `steps` counts recurrence applications beyond the seeds, so the result
/// holds `steps + 3` records. Consumption and investment are emitted from
/// index 2 on. Stops with [`Error::NonFinite`] at the first index whose
/// value leaves the representable range.
pub fn simulate<T: Scalar>(
    params: &ModelParams<T>,
    seeds: [T; 3],
    steps: usize,
) -> Result<Trajectory<T>> {
    let coeffs = params.recurrence_coefficients();
    let c1 = params.c1();
    let c2 = params.c2();
    let p = params.p();
    let mut records = Vec::with_capacity(steps + 3);
    for (k, &t) in seeds.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        let (consumption, investment) = if k == 2 {
            let c = c1 * seeds[1] + c2 * seeds[0] + p;
            (Some(c), Some(t - c))
        } else {
            (None, None)
        };
        records.push(TrajectoryRecord { index: k, income: t, consumption, investment });
    }
    for k in 3..steps + 3 {
        let t3 = records[k - 3].income;
        let t2 = records[k - 2].income;
        let t1 = records[k - 1].income;
        // same coefficient values and summation order as the companion step
        let income = coeffs[0] * t3 + coeffs[1] * t2 + coeffs[2] * t1 + p;
        let consumption = c1 * t1 + c2 * t2 + p;
        let investment = income - consumption;
        if !income.is_finite() || !consumption.is_finite() || !investment.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        records.push(TrajectoryRecord {
            index: k,
            income,
            consumption: Some(consumption),
            investment: Some(investment),
        });
    }
    Ok(Trajectory { start_index: 0, records })
}

/// Iterate the companion dynamics from `start`, returning `steps + 1`
/// states beginning with `start` itself. The `y1` component of the k-th
/// state equals `T_k` from [`simulate`] when seeded identically.
pub fn simulate_companion<T: Scalar>(
    params: &ModelParams<T>,
    start: StateVector<T>,
    steps: usize,
) -> Result<Vec<StateVector<T>>> {
    if !start.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    let system = build_companion(params);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(start);
    let mut current = start;
    for k in 1..=steps {
        current = system.step(&current);
        if !current.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        states.push(current);
    }
    Ok(states)
}

/// Simulate the classic second-order model from seeds `(T_0, T_1)`.
///
/// `steps` counts recurrence applications, so the result holds `steps + 2`
/// records; consumption and investment stay absent.
pub fn simulate_classic<T: Scalar>(
    params: &ClassicParams<T>,
    seeds: [T; 2],
    steps: usize,
) -> Result<Trajectory<T>> {
    let a = params.a();
    let ab = params.a() * params.b();
    let a1b = a * (T::one() + params.b());
    let g = params.g_bar();
    let mut records = Vec::with_capacity(steps + 2);
    for (k, &t) in seeds.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        records.push(TrajectoryRecord { index: k, income: t, consumption: None, investment: None });
    }
    for k in 2..steps + 2 {
        let income = a1b * records[k - 1].income - ab * records[k - 2].income + g;
        if !income.is_finite() {
            return Err(Error::NonFinite { index: k });
        }
        records.push(TrajectoryRecord { index: k, income, consumption: None, investment: None });
    }
    Ok(Trajectory { start_index: 0, records })
}
