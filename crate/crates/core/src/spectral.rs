//! Characteristic-polynomial stability analysis of the companion dynamics.
//!
//! The homogeneous part of the income recurrence yields a monic cubic whose
//! roots are the eigenvalues of the companion matrix; the spectral radius
//! classifies the equilibrium. Roots come from the closed-form solution of
//! the depressed cubic (trigonometric branch for three real roots, Cardano
//! otherwise) with a short Newton polish.

use num_complex::Complex;

use crate::model::ModelParams;
use crate::scalar::{lit, Scalar};

/// Tolerance on `|lambda| - 1` separating stable, marginal and unstable.
const UNIT_CIRCLE_TOL: f64 = 1e-9;

/// Monic characteristic cubic
/// `lambda^3 + quadratic * lambda^2 + linear * lambda + constant`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicCubic<T = f64> {
    pub quadratic: T,
    pub linear: T,
    pub constant: T,
}

/// Discrete-time stability classification by spectral radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    AsymptoticallyStable,
    Marginal,
    Unstable,
}

/// Eigenvalue report for the companion dynamics.
#[derive(Clone, Copy, Debug)]
pub struct SpectralReport<T = f64> {
    pub roots: [Complex<T>; 3],
    pub spectral_radius: T,
    pub classification: Stability,
    pub oscillatory: bool,
}

/// Characteristic cubic of the delayed model; its coefficients are the
/// negated recurrence coefficients, so the constant term is `b * c2`.
pub fn characteristic<T: Scalar>(params: &ModelParams<T>) -> CharacteristicCubic<T> {
    let [f31, f32, f33] = params.recurrence_coefficients();
    CharacteristicCubic { quadratic: -f33, linear: -f32, constant: -f31 }
}

impl<T: Scalar> CharacteristicCubic<T> {
    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        ((x + self.quadratic) * x + self.linear) * x + self.constant
    }

    pub fn eval_real(&self, x: T) -> T {
        ((x + self.quadratic) * x + self.linear) * x + self.constant
    }

    fn derivative_real(&self, x: T) -> T {
        let three = lit::<T>(3.0);
        let two = lit::<T>(2.0);
        three * x * x + two * self.quadratic * x + self.linear
    }

    /// All three roots, sorted by decreasing modulus (ties by decreasing
    /// real part, then decreasing imaginary part). Complex roots form exact
    /// conjugate pairs.
    pub fn roots(&self) -> [Complex<T>; 3] {
        let third = T::one() / lit::<T>(3.0);
        let shift = self.quadratic * third;
        let p = self.linear - self.quadratic * self.quadratic * third;
        let q = (lit::<T>(2.0) * self.quadratic * self.quadratic * self.quadratic
            - lit::<T>(9.0) * self.quadratic * self.linear)
            / lit::<T>(27.0)
            + self.constant;
        let half_q = q / lit::<T>(2.0);
        let p_third = p * third;
        let disc = half_q * half_q + p_third * p_third * p_third;

        let mut roots = if disc > T::zero() {
            // one real root, Cardano without cancellation
            let sign_q = if q >= T::zero() { T::one() } else { -T::one() };
            let big = -half_q - sign_q * disc.sqrt();
            let u = big.cbrt();
            let t1 = u + (-p_third) / u;
            let real = self.polish_real(t1 - shift);
            // deflated quadratic lambda^2 + bq lambda + cq holds the pair
            let bq = self.quadratic + real;
            let cq = self.linear + real * bq;
            let re = -bq / lit::<T>(2.0);
            let im_sq = cq - re * re;
            let im = if im_sq > T::zero() { im_sq.sqrt() } else { T::zero() };
            [
                Complex::new(real, T::zero()),
                Complex::new(re, im),
                Complex::new(re, -im),
            ]
        } else if p >= T::zero() {
            // depressed cubic degenerates to t^3 = 0
            let r = Complex::new(-shift, T::zero());
            [r, r, r]
        } else {
            // three real roots, trigonometric form
            let m = lit::<T>(2.0) * (-p_third).sqrt();
            let cos_arg = lit::<T>(3.0) * q / (p * m);
            let clamped = cos_arg.max(-T::one()).min(T::one());
            let angle = clamped.acos() * third;
            let two_pi_third = lit::<T>(2.0) * T::PI() * third;
            let mut out = [Complex::new(T::zero(), T::zero()); 3];
            for (k, slot) in out.iter_mut().enumerate() {
                let t = m * (angle - two_pi_third * T::from_usize(k).unwrap()).cos();
                *slot = Complex::new(self.polish_real(t - shift), T::zero());
            }
            out
        };

        roots.sort_by(|a, b| {
            b.norm()
                .partial_cmp(&a.norm())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal))
                .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        roots
    }

    fn polish_real(&self, start: T) -> T {
        let mut x = start;
        for _ in 0..2 {
            let f = self.eval_real(x);
            if f == T::zero() {
                break;
            }
            let df = self.derivative_real(x);
            if df == T::zero() {
                break;
            }
            let step = f / df;
            // near-multiple roots make Newton jump; keep the closed form then
            if step.abs() > lit::<T>(0.1) * (T::one() + x.abs()) {
                break;
            }
            x -= step;
        }
        x
    }
}

/// Full spectral report for the given parameters.
pub fn analyze<T: Scalar>(params: &ModelParams<T>) -> SpectralReport<T> {
    let cubic = characteristic(params);
    let roots = cubic.roots();
    let spectral_radius = roots
        .iter()
        .map(|r| r.norm())
        .fold(T::zero(), |m, x| if x > m { x } else { m });
    let tol = lit::<T>(UNIT_CIRCLE_TOL);
    let classification = if spectral_radius < T::one() - tol {
        Stability::AsymptoticallyStable
    } else if spectral_radius <= T::one() + tol {
        Stability::Marginal
    } else {
        Stability::Unstable
    };
    let oscillatory = roots
        .iter()
        .any(|r| r.im.abs() > tol * (T::one() + r.norm()));
    SpectralReport { roots, spectral_radius, classification, oscillatory }
}
