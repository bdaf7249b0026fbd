//! Log-scaled complex arithmetic.
//!
//! Modal amplitudes in the sub-wavelength regime combine factors like
//! `k^(2n)` at `k ~ 3e-4, n = 60` with double factorials `(2n+1)!!`, far
//! outside native floating-point range. [`LogComplex`] stores a complex
//! number as `(log10 of magnitude, phase)` so products and quotients of
//! such factors stay exact; conversion back to `Complex64` happens only
//! for final, normalized quantities.
//!
//! The magnitude exponent is held split into an integer part and a
//! fractional part in [0, 1). A single f64 exponent would quantize at
//! ulp(300) ~ 6e-14 and break the 1e-14 round-trip contract; the split
//! keeps the fractional part at full precision while the integer part is
//! exact up to |log10| = 1e6 and beyond.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Complex amplitude in polar-log form: `10^(e10 + frac) * exp(i phase)`.
///
/// Zero is a dedicated flag, never a finite log value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    e10: i64,
    frac: f64, // in [0, 1)
    phase: f64,
    zero: bool,
}

fn wrap_phase(p: f64) -> f64 {
    if p.is_nan() {
        return 0.0;
    }
    let mut w = p % (2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    } else if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

/// Split x into (i, f) with x = i + f, f in [0, 1).
fn split_log10(x: f64) -> (i64, f64) {
    let i = x.floor();
    (i as i64, x - i)
}

#[allow(clippy::should_implement_trait)] // inherent names back the operator impls
impl LogComplex {
    pub const fn zero() -> Self {
        LogComplex {
            e10: 0,
            frac: 0.0,
            phase: 0.0,
            zero: true,
        }
    }

    pub fn one() -> Self {
        LogComplex {
            e10: 0,
            frac: 0.0,
            phase: 0.0,
            zero: false,
        }
    }

    fn normalized(e10: i64, frac: f64, phase: f64) -> Self {
        debug_assert!(frac.is_finite(), "non-finite exponent fraction");
        let d = frac.floor();
        let mut cf = frac - d;
        let mut ce = e10 + d as i64;
        // frac - floor(frac) can round up to exactly 1.0 for tiny negatives
        if cf >= 1.0 {
            cf -= 1.0;
            ce += 1;
        }
        if cf < 0.0 {
            cf = 0.0;
        }
        LogComplex {
            e10: ce,
            frac: cf,
            phase: wrap_phase(phase),
            zero: false,
        }
    }

    pub fn from_polar_log10(log10_mag: f64, phase: f64) -> Self {
        let (i, f) = split_log10(log10_mag);
        Self::normalized(i, f, phase)
    }

    pub fn from_c64(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::zero();
        }
        let v = z.norm();
        // coarse exponent estimate, then a full-precision fractional part of
        // the rescaled mantissa in [1, 10)
        let mut e = v.log10().floor();
        let mut m = v * 10f64.powi(-e as i32);
        if !m.is_finite() {
            // v was subnormal or near-overflow: rescale in two steps
            let half = (-e / 2.0).floor();
            m = (v * 10f64.powi(half as i32)) * 10f64.powi((-e - half) as i32);
        }
        if m >= 10.0 {
            m /= 10.0;
            e += 1.0;
        } else if m < 1.0 {
            m *= 10.0;
            e -= 1.0;
        }
        Self::normalized(e as i64, m.log10().clamp(0.0, 1.0), z.arg())
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            return Self::zero();
        }
        Self::from_c64(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// log10 of the magnitude. Returns `-inf` for the zero element.
    pub fn log10_mag(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.e10 as f64 + self.frac
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Best-effort conversion; saturates to 0 or +-inf outside f64 range.
    pub fn to_c64(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let m = 10f64.powf(self.frac);
        if self.e10 > 330 {
            return Complex64::from_polar(f64::INFINITY, self.phase);
        }
        if self.e10 < -340 {
            return Complex64::new(0.0, 0.0);
        }
        // two-step scaling covers the subnormal fringe exactly enough
        let (a, b) = (self.e10 / 2, self.e10 - self.e10 / 2);
        let scaled = m * 10f64.powi(a as i32) * 10f64.powi(b as i32);
        Complex64::from_polar(scaled, self.phase)
    }

    pub fn conj(self) -> Self {
        if self.zero {
            return self;
        }
        LogComplex {
            phase: wrap_phase(-self.phase),
            ..self
        }
    }

    pub fn neg(self) -> Self {
        if self.zero {
            return self;
        }
        LogComplex {
            phase: wrap_phase(self.phase + PI),
            ..self
        }
    }

    pub fn recip(self) -> Self {
        assert!(!self.zero, "reciprocal of zero LogComplex");
        Self::normalized(-self.e10, -self.frac, -self.phase)
    }

    pub fn mul(self, rhs: Self) -> Self {
        if self.zero || rhs.zero {
            return Self::zero();
        }
        Self::normalized(
            self.e10 + rhs.e10,
            self.frac + rhs.frac,
            self.phase + rhs.phase,
        )
    }

    pub fn div(self, rhs: Self) -> Self {
        assert!(!rhs.zero, "division by zero LogComplex");
        if self.zero {
            return Self::zero();
        }
        Self::normalized(
            self.e10 - rhs.e10,
            self.frac - rhs.frac,
            self.phase - rhs.phase,
        )
    }

    /// Multiply by `10^d` (exact shift of the magnitude exponent).
    pub fn scale_log10(self, d: f64) -> Self {
        if self.zero {
            return self;
        }
        let (i, f) = split_log10(d);
        Self::normalized(self.e10 + i, self.frac + f, self.phase)
    }

    pub fn powi(self, e: i32) -> Self {
        if self.zero {
            assert!(e > 0, "zero LogComplex to non-positive power");
            return Self::zero();
        }
        let t = self.frac * e as f64;
        let (i, f) = split_log10(t);
        Self::normalized(self.e10 * e as i64 + i, f, self.phase * e as f64)
    }

    /// Sum computed by factoring out the larger magnitude, so arbitrary
    /// magnitudes combine without overflow. The relative accuracy is that
    /// of `Complex64` on the ratio.
    pub fn add(self, rhs: Self) -> Self {
        if self.zero {
            return rhs;
        }
        if rhs.zero {
            return self;
        }
        let (big, small) = if (self.e10, self.frac) >= (rhs.e10, rhs.frac) {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = small.div(big).to_c64();
        let sum = Complex64::new(1.0, 0.0) + ratio;
        if sum.re == 0.0 && sum.im == 0.0 {
            return Self::zero();
        }
        big.mul(Self::from_c64(sum))
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.add(rhs.neg())
    }

    /// |self| / |rhs| as a plain f64 (may overflow to inf for huge gaps).
    pub fn mag_ratio(self, rhs: Self) -> f64 {
        if self.zero {
            return 0.0;
        }
        if rhs.zero {
            return f64::INFINITY;
        }
        10f64.powf((self.e10 - rhs.e10) as f64 + (self.frac - rhs.frac))
    }
}

impl std::ops::Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: Self) -> Self {
        LogComplex::mul(self, rhs)
    }
}

impl std::ops::Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: Self) -> Self {
        LogComplex::div(self, rhs)
    }
}

impl std::ops::Add for LogComplex {
    type Output = LogComplex;
    fn add(self, rhs: Self) -> Self {
        LogComplex::add(self, rhs)
    }
}

impl std::ops::Sub for LogComplex {
    type Output = LogComplex;
    fn sub(self, rhs: Self) -> Self {
        LogComplex::sub(self, rhs)
    }
}

impl std::ops::Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> Self {
        LogComplex::neg(self)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        Self::from_c64(z)
    }
}

impl From<f64> for LogComplex {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_is_flagged() {
        let z = LogComplex::from_c64(Complex64::new(0.0, 0.0));
        assert!(z.is_zero());
        assert!(z.log10_mag().is_infinite());
        assert_eq!(z.to_c64(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn product_adds_exponents_exactly() {
        let a = LogComplex::from_polar_log10(2.0e5, 0.3);
        let b = LogComplex::from_polar_log10(-4.0e5, -0.1);
        let p = a * b;
        assert_eq!(p.log10_mag(), -2.0e5);
        assert!((p.phase() - 0.2).abs() < 1e-15);
        let q = a / b;
        assert_eq!(q.log10_mag(), 6.0e5);
    }

    #[test]
    fn add_across_huge_gap() {
        let a = LogComplex::from_polar_log10(100.0, 0.0);
        let b = LogComplex::from_polar_log10(-400.0, 1.0);
        let s = a + b;
        assert_eq!(s.log10_mag(), 100.0);
        let d = a - a;
        assert!(d.is_zero() || d.log10_mag() < 100.0 - 15.0);
    }

    #[test]
    fn roundtrip_at_the_range_edge() {
        for &e in &[-300.0f64, -250.0, 250.0, 300.0] {
            let z = Complex64::from_polar(10f64.powf(e + 0.37), 1.1);
            let back = LogComplex::from_c64(z).to_c64();
            let err = (back - z).norm() / z.norm();
            assert!(err <= 1e-14, "e={e} err={err}");
        }
    }

    proptest! {
        #[test]
        fn roundtrip_relative_1e14(re in 0.1f64..1.0, im in -1.0f64..1.0, e in -299i32..299) {
            let z = Complex64::new(re, im) * 10f64.powi(e);
            let back = LogComplex::from_c64(z).to_c64();
            let err = (back - z).norm() / z.norm();
            prop_assert!(err <= 1e-14, "err = {}", err);
        }

        #[test]
        fn product_matches_c64(ar in 0.1f64..10.0, ap in -3.1f64..3.1,
                               br in 0.1f64..10.0, bp in -3.1f64..3.1) {
            let a = Complex64::from_polar(ar, ap);
            let b = Complex64::from_polar(br, bp);
            let p = (LogComplex::from_c64(a) * LogComplex::from_c64(b)).to_c64();
            let err = (p - a * b).norm() / (a * b).norm();
            prop_assert!(err <= 1e-13);
        }

        #[test]
        fn sum_matches_c64(ar in 0.1f64..10.0, ap in -3.1f64..3.1,
                           br in 0.1f64..10.0, bp in -3.1f64..3.1) {
            let a = Complex64::from_polar(ar, ap);
            let b = Complex64::from_polar(br, bp);
            let s = (LogComplex::from_c64(a) + LogComplex::from_c64(b)).to_c64();
            let exact = a + b;
            prop_assume!(exact.norm() > 1e-6);
            let err = (s - exact).norm() / exact.norm();
            prop_assert!(err <= 1e-12);
        }

        #[test]
        fn powi_matches_repeated_mul(ar in 0.5f64..2.0, ap in -3.1f64..3.1, e in 1i32..40) {
            let a = LogComplex::from_c64(Complex64::from_polar(ar, ap));
            let mut acc = LogComplex::one();
            for _ in 0..e {
                acc = acc * a;
            }
            let p = a.powi(e);
            prop_assert!((p.log10_mag() - acc.log10_mag()).abs() < 1e-10);
        }
    }
}
