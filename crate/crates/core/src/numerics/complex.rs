//! Complex arithmetic over any [`Real`] backend, plus overflow-aware
//! hyperbolic functions of complex argument.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::precision::PrecisionContext;
use super::real::Real;

/// Complex number `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: R) -> Self {
        let im = re.zero();
        Complex { re, im }
    }

    /// Complex zero at the precision of `like`.
    pub fn zero_like(like: &R) -> Self {
        Complex::new(like.zero(), like.zero())
    }

    pub fn lit(&self, re: f64, im: f64) -> Self {
        Complex::new(self.re.lit(re), self.re.lit(im))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> R {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let r = small / big.clone();
        big * (r.one() + r.square()).sqrt()
    }

    /// `|re| + |im|`, a cheap norm equivalent to `abs` within a factor √2.
    pub fn l1(&self) -> R {
        self.re.abs() + self.im.abs()
    }

    pub fn arg(&self) -> R {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, k: &R) -> Self {
        Complex::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Complex::from_real(self.re.one());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.square();
            k >>= 1;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(self.re.clone() / d.clone(), -self.im.clone() / d)
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(m.clone() * c, m * s)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    /// `e^z - 1` without cancellation near zero.
    pub fn expm1(&self) -> Self {
        if self.abs().to_f64() > 0.25 {
            return self.exp() - Complex::from_real(self.re.one());
        }
        // Taylor series; |z| <= 1/4 so 60 terms exceed 200 digits.
        let mut term = self.clone();
        let mut sum = self.clone();
        let eps = self.re.epsilon();
        for k in 2..200 {
            term = term * self.clone();
            term = term.scale(&self.re.ratio(1, k));
            sum = sum + term.clone();
            if term.l1() <= eps.clone() * sum.l1() {
                break;
            }
        }
        sum
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.re.sin_cos();
        let (sh, ch) = self.im.sinh_cosh();
        Complex::new(s * ch, c * sh)
    }

    pub fn sinh(&self) -> Self {
        let (sh, ch) = self.re.sinh_cosh();
        let (s, c) = self.im.sin_cos();
        Complex::new(sh * c, ch * s)
    }

    pub fn cosh(&self) -> Self {
        let (sh, ch) = self.re.sinh_cosh();
        let (s, c) = self.im.sin_cos();
        Complex::new(ch * c, sh * s)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Complex::new(
            self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Smith's algorithm avoids overflow in the denominator.
        if rhs.re.abs() >= rhs.im.abs() {
            let r = rhs.im.clone() / rhs.re.clone();
            let d = rhs.re.clone() + rhs.im.clone() * r.clone();
            Complex::new(
                (self.re.clone() + self.im.clone() * r.clone()) / d.clone(),
                (self.im - self.re * r) / d,
            )
        } else {
            let r = rhs.re.clone() / rhs.im.clone();
            let d = rhs.re.clone() * r.clone() + rhs.im.clone();
            Complex::new(
                (self.re.clone() * r.clone() + self.im.clone()) / d.clone(),
                (self.im * r - self.re) / d,
            )
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

/// Which hyperbolic function [`complex_hyp_trig`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypKind {
    Sinh,
    Cosh,
}

/// A complex value stored as `mantissa · e^{exponent}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledComplex<R> {
    pub mantissa: Complex<R>,
    pub exponent: R,
}

impl<R: Real> ScaledComplex<R> {
    /// Collapses the scale factor; may overflow in binary64.
    pub fn value(&self) -> Complex<R> {
        if self.exponent.is_zero() {
            self.mantissa.clone()
        } else {
            self.mantissa.scale(&self.exponent.exp())
        }
    }

    pub fn is_scaled(&self) -> bool {
        !self.exponent.is_zero()
    }
}

/// sinh or cosh of `x + iy` through the real/imaginary split
/// `sh(x+iy) = sh x cos y + i ch x sin y`, `ch(x+iy) = ch x cos y + i sh x sin y`.
///
/// When `e^{|x|}` would exceed `ctx.overflow_threshold` the common factor
/// `e^{|x|}` is pulled out and returned as the exponent.
pub fn complex_hyp_trig<R: Real>(
    kind: HypKind,
    z: &Complex<R>,
    ctx: &PrecisionContext,
) -> ScaledComplex<R> {
    let x = &z.re;
    let (s, c) = z.im.sin_cos();
    let limit = ctx.overflow_threshold.ln();
    if x.abs().to_f64() <= limit {
        let (sh, ch) = x.sinh_cosh();
        let mantissa = match kind {
            HypKind::Sinh => Complex::new(sh * c, ch * s),
            HypKind::Cosh => Complex::new(ch * c, sh * s),
        };
        return ScaledComplex {
            mantissa,
            exponent: x.zero(),
        };
    }
    let ax = x.abs();
    let decay = (-(ax.clone() + ax.clone())).exp();
    let half = x.ratio(1, 2);
    let sgn = x.lit(f64::from(x.sign()));
    // e^{-|x|} sh x and e^{-|x|} ch x.
    let sh_s = sgn * half.clone() * (x.one() - decay.clone());
    let ch_s = half * (x.one() + decay);
    let mantissa = match kind {
        HypKind::Sinh => Complex::new(sh_s * c, ch_s * s),
        HypKind::Cosh => Complex::new(ch_s * c, sh_s * s),
    };
    ScaledComplex {
        mantissa,
        exponent: ax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real::BigReal;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = c(1.5, -2.0);
        let b = c(-0.3, 4.0);
        let q = (a.clone() * b.clone()) / b;
        assert!((q - a).abs() < 1e-15);
    }

    #[test]
    fn expm1_small_argument() {
        let z = c(1e-12, -2e-12);
        let e = z.expm1();
        // Second-order Taylor terms: (x² - y²)/2 and x·y.
        assert!((e.re - (1e-12 - 1.5e-24)).abs() < 1e-30);
        assert!((e.im - (-2e-12 - 2e-24)).abs() < 1e-30);
    }

    #[test]
    fn scaled_path_matches_big_reference() {
        let ctx = PrecisionContext::binary64();
        let z = c(800.0, 0.7);
        let scaled = complex_hyp_trig(HypKind::Sinh, &z, &ctx);
        assert!(scaled.is_scaled());
        assert_eq!(scaled.exponent, 800.0);
        let bz = Complex::new(BigReal::with_bits(800.0, 200), BigReal::with_bits(0.7, 200));
        let exact = bz.sinh();
        let ratio = exact.re.clone() / bz.re.exp();
        assert!((ratio.to_f64() - scaled.mantissa.re).abs() < 1e-15);
    }

    #[test]
    fn negative_real_part_scaled() {
        let ctx = PrecisionContext::binary64();
        let z = c(-750.0, 1.1);
        let s = complex_hyp_trig(HypKind::Sinh, &z, &ctx);
        assert!(s.mantissa.re < 0.0);
        let ch = complex_hyp_trig(HypKind::Cosh, &z, &ctx);
        assert!((ch.mantissa.re - 0.5 * 1.1f64.cos()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn unscaled_branch_matches_closed_form(x in -50.0f64..50.0, y in -10.0f64..10.0) {
            let ctx = PrecisionContext::binary64();
            let z = c(x, y);
            let s = complex_hyp_trig(HypKind::Sinh, &z, &ctx).value();
            let ch = complex_hyp_trig(HypKind::Cosh, &z, &ctx).value();
            let e = z.exp();
            let em = (-z.clone()).exp();
            let s_ref = (e.clone() - em.clone()).scale(&0.5);
            let c_ref = (e + em).scale(&0.5);
            let tol = 1e-14 * (x.abs().exp() + 1.0);
            prop_assert!((s - s_ref).abs() <= tol);
            prop_assert!((ch - c_ref).abs() <= tol);
        }

        #[test]
        fn cosh_squared_minus_sinh_squared(x in -20.0f64..20.0, y in -5.0f64..5.0) {
            let z = c(x, y);
            let one = z.cosh().square() - z.sinh().square();
            prop_assert!((one - c(1.0, 0.0)).abs() <= 1e-13 * (2.0 * x.abs()).exp());
        }
    }
}
