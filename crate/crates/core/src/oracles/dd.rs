//! Minimal double-double arithmetic (roughly 32 significant digits) used by
//! the extended-precision Faddeyeva oracle. Products use FMA, sums the
//! classic two-sum, which keeps every operation error-free-transformed.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // One dd Newton step from the f64 square root doubles the precision.
        let x0 = Dd::from_f64(self.hi.sqrt());
        let half = Dd::from_f64(0.5);
        (x0 + self / x0) * half
    }

    /// exp for moderate |x| via scaling-and-squaring plus a short Taylor sum.
    pub fn exp(self) -> Self {
        let mut k = 0u32;
        let mut w = self;
        while w.hi.abs() > 0.5 {
            w = w * Dd::from_f64(0.5);
            k += 1;
        }
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for n in 1..40 {
            term = term * w / Dd::from_f64(n as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        for _ in 0..k {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        Dd::new(s, e + self.lo + rhs.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        Dd::new(p, e + self.hi * rhs.lo + self.lo * rhs.hi)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r2 = r - rhs * Dd::from_f64(q2);
        let q3 = r2.hi / rhs.hi;
        Dd::new(q1, q2) + Dd::from_f64(q3)
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn from_c64(z: num_complex::Complex64) -> Self {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, s: Dd) -> Self {
        Cdd { re: self.re * s, im: self.im * s }
    }

    pub fn norm_sqr_f64(self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        r * r + i * i
    }

    /// exp of a complex dd argument by scaling-and-squaring; avoids needing
    /// dd trigonometric reduction.
    pub fn exp(self) -> Self {
        let mut k = 0u32;
        let mut w = self;
        let mag = self.re.hi.abs().max(self.im.hi.abs());
        let mut m = mag;
        while m > 0.5 {
            m *= 0.5;
            k += 1;
        }
        let half = Dd::from_f64(0.5f64.powi(k as i32));
        w = w.scale(half);
        let mut sum = Cdd::new(Dd::ONE, Dd::ZERO);
        let mut term = Cdd::new(Dd::ONE, Dd::ZERO);
        for n in 1..48 {
            term = term * w;
            term = term.scale(Dd::ONE / Dd::from_f64(n as f64));
            sum = sum + term;
            if term.norm_sqr_f64() < 1e-70 * sum.norm_sqr_f64().max(1e-300) {
                break;
            }
        }
        for _ in 0..k {
            sum = sum * sum;
        }
        sum
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, rhs: Cdd) -> Cdd {
        let den = rhs.re * rhs.re + rhs.im * rhs.im;
        let num = self * Cdd { re: rhs.re, im: -rhs.im };
        Cdd { re: num.re / den, im: num.im / den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_mul_precision() {
        // (1 + 2^-40)^2 = 1 + 2^-39 + 2^-80, exactly representable in dd
        let x = Dd::new(1.0, 2f64.powi(-40));
        let y = x * x;
        let expect_hi = 1.0 + 2f64.powi(-39);
        assert_eq!(y.hi, expect_hi);
        assert_eq!(y.lo, 2f64.powi(-80));
    }

    #[test]
    fn dd_exp_matches_f64() {
        for x in [-3.0, -0.1, 0.0, 1.0, 10.0] {
            let e = Dd::from_f64(x).exp().to_f64();
            assert!((e - x.exp()).abs() <= 4.0 * f64::EPSILON * x.exp());
        }
    }

    #[test]
    fn dd_sqrt_of_pi() {
        let pi = Dd::new(std::f64::consts::PI, 1.224_646_799_147_353_2e-16);
        let s = pi.sqrt();
        let err = s * s - pi;
        assert!(err.to_f64().abs() < 1e-31);
    }

    #[test]
    fn cdd_exp_unit_circle() {
        // |exp(i)| = 1
        let z = Cdd::new(Dd::ZERO, Dd::ONE).exp();
        let n = z.norm_sqr_f64();
        assert!((n - 1.0).abs() < 1e-28);
    }
}
