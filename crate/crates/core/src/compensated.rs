//! Compensated double-word arithmetic for the regularized normal equations.
//!
//! A value is held as an unevaluated sum `hi + lo` of two working-precision
//! floats, built from the usual error-free transformations (Knuth two-sum,
//! FMA two-product). The regularized equilibrium solve conditions like
//! `1/theta^2`, which plain working precision cannot carry through a 3x3
//! elimination at small `theta`; the doubled mantissa here can.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Double<T> {
    pub hi: T,
    pub lo: T,
}

fn two_sum<T: Scalar>(a: T, b: T) -> Double<T> {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Double { hi: s, lo: err }
}

fn quick_two_sum<T: Scalar>(a: T, b: T) -> Double<T> {
    // requires |a| >= |b| or a == 0
    let s = a + b;
    let err = b - (s - a);
    Double { hi: s, lo: err }
}

/// Exact product of two working-precision values.
pub(crate) fn two_prod<T: Scalar>(a: T, b: T) -> Double<T> {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Double { hi: p, lo: err }
}

impl<T: Scalar> Double<T> {
    pub fn zero() -> Self {
        Double { hi: T::zero(), lo: T::zero() }
    }

    pub fn value(&self) -> T {
        self.hi + self.lo
    }

    pub fn add(self, other: Self) -> Self {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn neg(self) -> Self {
        Double { hi: -self.hi, lo: -self.lo }
    }

    pub fn mul(self, other: Self) -> Self {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    pub fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Double { hi: q1, lo: T::zero() }));
        let q2 = r.hi / other.hi;
        quick_two_sum(q1, q2)
    }
}
