//! Double-double arithmetic for phase arguments that outgrow `f64`.
//!
//! Only the handful of operations needed to reduce large quadratic phases
//! modulo one turn are provided. Values are unevaluated sums `hi + lo` with
//! `|lo| <= ulp(hi)/2`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// 2π to ~106 bits.
pub const TWO_PI: Dd = Dd {
    hi: 6.283_185_307_179_586,
    lo: 2.449_293_598_294_706_4e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, b: Dd) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(self) -> Self {
        let f = self.hi.floor();
        // hi - floor(hi) is exact
        let (hi, lo) = two_sum(self.hi - f, self.lo);
        let mut r = Dd { hi, lo };
        if r.hi < 0.0 {
            r = r + Dd::from_f64(1.0);
        }
        if r.hi >= 1.0 {
            r = r - Dd::from_f64(1.0);
        }
        r
    }

    /// `self` turns as an angle in radians, reduced to `[0, 2π)`.
    #[inline]
    pub fn turns_to_radians(self) -> f64 {
        let f = self.fract();
        std::f64::consts::TAU * f.hi + std::f64::consts::TAU * f.lo
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let p = Dd::prod(a, a);
        // (1+e)^2 = 1 + 2e + e^2
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn fract_of_large_integer_plus_small() {
        let x = Dd::from_f64(1.0e15) + Dd::from_f64(0.25);
        assert_eq!(x.fract().to_f64(), 0.25);
        let y = Dd::from_f64(-3.0) + Dd::from_f64(0.125);
        assert_eq!(y.fract().to_f64(), 0.125);
    }

    #[test]
    fn division_recovers_quotient() {
        let third = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let back = third.mul_f64(3.0) - Dd::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn turns_to_radians_wraps() {
        let a = Dd::from_f64(7.5).turns_to_radians();
        assert!((a - std::f64::consts::PI).abs() < 1e-15);
    }
}
