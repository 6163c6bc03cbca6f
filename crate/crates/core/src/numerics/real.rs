//! Scalar abstraction over binary64 and multi-precision floats.
//!
//! Every numerical routine in the crate is generic over [`Real`], so the same
//! code runs in `f64` or in [`BigReal`] (MPFR-backed) when exponent arguments
//! would overflow binary64. A `BigReal` carries its own precision; constants
//! are created from an existing value with [`Real::lit`] so they inherit it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_bigint::Sign;
use num_traits::ToPrimitive;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::precision::PrecisionContext;

/// Ordered field with the elementary functions used by the audit.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Creates a value at the precision requested by `ctx`.
    fn from_ctx(x: f64, ctx: &PrecisionContext) -> Self;
    /// Rounds `self` to the precision requested by `ctx`.
    fn to_ctx(&self, ctx: &PrecisionContext) -> Self;
    /// Creates a constant at the precision of `self`.
    fn lit(&self, x: f64) -> Self;
    /// Exact `num / den` rounded once at the precision of `self`.
    fn ratio(&self, num: i64, den: i64) -> Self;
    fn from_bigint(&self, n: &BigInt) -> Self;
    fn pi(&self) -> Self;
    fn ln2(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn sinh_cosh(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    /// Decimal digits carried by this value's precision.
    fn digits(&self) -> u32;
    /// Unit roundoff at this value's precision.
    fn epsilon(&self) -> Self;
    /// Scientific notation with `sig` significant digits, valid far outside binary64 range.
    fn to_sci(&self, sig: usize) -> String;

    fn zero(&self) -> Self {
        self.lit(0.0)
    }
    fn one(&self) -> Self {
        self.lit(1.0)
    }
    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }
    fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }
    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Self {
        self.from_bigint(q.numer()) / self.from_bigint(q.denom())
    }
    fn is_zero(&self) -> bool {
        *self == self.zero()
    }
    fn is_sign_negative(&self) -> bool {
        *self < self.zero()
    }
    /// -1, 0 or 1.
    fn sign(&self) -> i32 {
        let z = self.zero();
        if *self > z {
            1
        } else if *self < z {
            -1
        } else {
            0
        }
    }
    fn max_of(&self, other: &Self) -> Self {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }
    fn min_of(&self, other: &Self) -> Self {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }
    /// Natural log of |self| without overflow; `-inf` for zero.
    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.abs().ln().to_f64()
        }
    }
}

impl Real for f64 {
    fn from_ctx(x: f64, _ctx: &PrecisionContext) -> Self {
        x
    }
    fn to_ctx(&self, _ctx: &PrecisionContext) -> Self {
        *self
    }
    fn lit(&self, x: f64) -> Self {
        x
    }
    fn ratio(&self, num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_bigint(&self, n: &BigInt) -> Self {
        n.to_f64().unwrap_or(if n.sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    }
    fn from_rational(&self, q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn pi(&self) -> Self {
        std::f64::consts::PI
    }
    fn ln2(&self) -> Self {
        std::f64::consts::LN_2
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        if self.abs() < 0.5 {
            return (f64::sinh(*self), f64::cosh(*self));
        }
        let e = f64::exp(*self);
        let r = 1.0 / e;
        (0.5 * (e - r), 0.5 * (e + r))
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn digits(&self) -> u32 {
        16
    }
    fn epsilon(&self) -> Self {
        f64::EPSILON
    }
    fn to_sci(&self, sig: usize) -> String {
        format!("{:.*e}", sig.saturating_sub(1), self)
    }
}

/// Multi-precision real backed by MPFR.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn with_bits(x: f64, bits: u32) -> Self {
        BigReal(Float::with_val(bits, x))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    /// Parses a decimal literal at the given precision.
    pub fn parse(text: &str, bits: u32) -> Option<Self> {
        Float::parse(text).ok().map(|p| BigReal(Float::with_val(bits, p)))
    }

    fn wrap(&self, f: Float) -> Self {
        BigReal(f)
    }

    fn p2(&self, other: &Self) -> u32 {
        self.0.prec().max(other.0.prec())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(17))
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                let p = self.p2(&rhs);
                BigReal(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
    };
}
big_binop!(Add, add, +);
big_binop!(Sub, sub, -);
big_binop!(Mul, mul, *);
big_binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Real for BigReal {
    fn from_ctx(x: f64, ctx: &PrecisionContext) -> Self {
        BigReal::with_bits(x, ctx.bits().max(64))
    }
    fn to_ctx(&self, ctx: &PrecisionContext) -> Self {
        BigReal(Float::with_val(ctx.bits().max(64), &self.0))
    }
    fn lit(&self, x: f64) -> Self {
        self.wrap(Float::with_val(self.prec(), x))
    }
    fn ratio(&self, num: i64, den: i64) -> Self {
        let p = self.prec();
        BigReal(Float::with_val(p, num) / Float::with_val(p, den))
    }
    fn from_bigint(&self, n: &BigInt) -> Self {
        let p = self.prec();
        let parsed = Float::parse(n.to_str_radix(10)).expect("integer literal parses");
        BigReal(Float::with_val(p, parsed))
    }
    fn pi(&self) -> Self {
        BigReal(Float::with_val(self.prec(), Constant::Pi))
    }
    fn ln2(&self) -> Self {
        BigReal(Float::with_val(self.prec(), Constant::Log2))
    }
    fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let mut s = self.0.clone();
        let mut c = Float::new(self.prec());
        s.sin_cos_mut(&mut c);
        (BigReal(s), BigReal(c))
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        let mut s = self.0.clone();
        let mut c = Float::new(self.prec());
        s.sinh_cosh_mut(&mut c);
        (BigReal(s), BigReal(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        let p = self.p2(x);
        BigReal(Float::with_val(p, self.0.atan2_ref(&x.0)))
    }
    fn powi(&self, n: i32) -> Self {
        BigReal(self.0.clone().pow(n))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn digits(&self) -> u32 {
        ((f64::from(self.prec()) - 32.0).max(53.0) / std::f64::consts::LOG2_10).floor() as u32
    }
    fn epsilon(&self) -> Self {
        let p = self.prec();
        BigReal(Float::with_val(p, 1) >> (p - 1))
    }
    fn to_sci(&self, sig: usize) -> String {
        if !self.0.is_finite() {
            return self.0.to_f64().to_string();
        }
        if self.0.is_zero() {
            return 0.0f64.to_sci(sig);
        }
        normalize_sci(&self.0.to_string_radix(10, Some(sig.max(1))), sig.max(1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Rewrites MPFR's decimal output (`123.4`, `1.5e-3`, `-2.5e30`) as `d.ddd…e<exp>`.
fn normalize_sci(text: &str, sig: usize) -> String {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (mant, exp) = match body.split_once(['e', '@']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: String = int_part.chars().chain(frac.chars()).collect();
    let lead = digits.chars().take_while(|&c| c == '0').count();
    let significant: String = digits[lead..].chars().chain(std::iter::repeat('0')).take(sig).collect();
    let exp10 = int_part.len() as i64 + exp - lead as i64 - 1;
    let sign = if neg { "-" } else { "" };
    if sig == 1 {
        format!("{sign}{significant}e{exp10}")
    } else {
        format!("{sign}{}.{}e{exp10}", &significant[..1], &significant[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: f64) -> BigReal {
        BigReal::with_bits(x, 200)
    }

    #[test]
    fn big_real_constants_match_f64() {
        let x = big(1.0);
        assert!((x.pi().to_f64() - std::f64::consts::PI).abs() < 1e-16);
        assert!((x.ln2().to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
        assert_eq!(x.ratio(1, 3).to_sci(5), "3.3333e-1");
    }

    #[test]
    fn big_real_extends_past_binary64_range() {
        let y = big(2000.0).exp();
        assert!(y.is_finite());
        assert!(!y.to_f64().is_finite());
        let s = y.to_sci(10);
        assert!(s.ends_with("e868"), "{s}");
        assert_eq!(s, "3.881180194e868");
        let tiny = (-big(2000.0)).exp();
        assert!(tiny.to_sci(6).ends_with("e-869"));
    }

    #[test]
    fn sinh_cosh_identity() {
        for x in [-40.0, -1.3, -0.2, 0.0, 0.3, 2.0, 35.0] {
            let (s, c) = Real::sinh_cosh(&x);
            assert!(((c * c - s * s) - 1.0).abs() < 1e-9 * c * c);
            let (bs, bc) = big(x).sinh_cosh();
            let one = bc.clone() * bc - bs.clone() * bs;
            assert!((one.to_f64() - 1.0).abs() < 1e-40_f64.max(1e-45 * (x.abs() * 2.0).exp()));
        }
    }

    #[test]
    fn bigint_conversion_is_exact() {
        let n: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let v = big(0.0).from_bigint(&n);
        assert_eq!(v.to_sci(33), "1.23456789012345678901234567890123e32");
        let q = BigRational::new(BigInt::from(-7), BigInt::from(8));
        assert_eq!(big(0.0).from_rational(&q).to_f64(), -0.875);
    }

    #[test]
    fn decimal_normalisation() {
        assert_eq!(normalize_sci("123.000", 4), "1.230e2");
        assert_eq!(normalize_sci("-2.50e30", 3), "-2.50e30");
        assert_eq!(normalize_sci("0.00125", 2), "1.2e-3");
        assert_eq!(big(-0.375).to_sci(3), "-3.75e-1");
        assert_eq!(big(1.0).ratio(1, 3).to_sci(30), format!("3.{}e-1", "3".repeat(29)));
    }

    #[test]
    fn epsilon_scales_with_precision() {
        assert!(big(1.0).epsilon().to_f64() < 1e-59);
        assert_eq!(Real::epsilon(&1.0f64), f64::EPSILON);
        assert!(big(1.0).digits() >= 50);
    }
}
