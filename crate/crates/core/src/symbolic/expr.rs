//! Linear combinations of trig–hyperbolic basis products with polynomial
//! coefficients.
//!
//! The hyperbolic argument is always `x = t1 b/2` (equal to `ασ` once
//! `t1 = αt2` and `σ = t2 b/2`) and the trigonometric one `y = t2 b/2 = σ`.
//! Each factor carries a multiplier of 1 (half argument) or 2 (full argument).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;

use super::poly::{RationalPoly, Var, VarValues};
use crate::error::{AuditError, Result};
use crate::numerics::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hyp {
    One,
    Sh,
    Ch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    One,
    Sin,
    Cos,
}

/// `hyp(hyp_mult · x) · trig(trig_mult · y)`; a `One` factor has multiplier 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub hyp: Hyp,
    pub hyp_mult: u8,
    pub trig: Trig,
    pub trig_mult: u8,
}

impl Basis {
    pub const ONE: Basis = Basis {
        hyp: Hyp::One,
        hyp_mult: 0,
        trig: Trig::One,
        trig_mult: 0,
    };

    pub fn new(hyp: Hyp, hyp_mult: u8, trig: Trig, trig_mult: u8) -> Self {
        Basis {
            hyp,
            hyp_mult: if hyp == Hyp::One { 0 } else { hyp_mult },
            trig,
            trig_mult: if trig == Trig::One { 0 } else { trig_mult },
        }
    }

    /// Half-argument product `hyp(x)·trig(y)`.
    pub fn half(hyp: Hyp, trig: Trig) -> Self {
        Basis::new(hyp, 1, trig, 1)
    }

    pub fn eval<R: Real>(&self, x: &R, y: &R) -> R {
        let h = match self.hyp {
            Hyp::One => x.one(),
            Hyp::Sh => (x.clone() * x.lit(f64::from(self.hyp_mult))).sinh(),
            Hyp::Ch => (x.clone() * x.lit(f64::from(self.hyp_mult))).cosh(),
        };
        let t = match self.trig {
            Trig::One => y.one(),
            Trig::Sin => (y.clone() * y.lit(f64::from(self.trig_mult))).sin(),
            Trig::Cos => (y.clone() * y.lit(f64::from(self.trig_mult))).cos(),
        };
        h * t
    }

    /// The factor pair with `y = 0`: sines vanish, cosines become one.
    fn at_zero_trig(&self) -> Option<Basis> {
        match self.trig {
            Trig::Sin => None,
            Trig::Cos | Trig::One => Some(Basis::new(self.hyp, self.hyp_mult, Trig::One, 0)),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = |m: u8, s: &str| if m == 1 { s.to_string() } else { format!("{m}{s}") };
        let h = match self.hyp {
            Hyp::One => None,
            Hyp::Sh => Some(format!("sh({})", arg(self.hyp_mult, "x"))),
            Hyp::Ch => Some(format!("ch({})", arg(self.hyp_mult, "x"))),
        };
        let t = match self.trig {
            Trig::One => None,
            Trig::Sin => Some(format!("sin({})", arg(self.trig_mult, "y"))),
            Trig::Cos => Some(format!("cos({})", arg(self.trig_mult, "y"))),
        };
        match (h, t) {
            (None, None) => f.write_str("1"),
            (Some(h), None) => f.write_str(&h),
            (None, Some(t)) => f.write_str(&t),
            (Some(h), Some(t)) => write!(f, "{h}{t}"),
        }
    }
}

/// Products of two half-argument factors, as `(c, kind, multiplier)` terms.
fn hyp_product(a: (Hyp, u8), b: (Hyp, u8)) -> Option<Vec<(BigRational, Hyp, u8)>> {
    let half = BigRational::new(1.into(), 2.into());
    let one = BigRational::from_integer(1.into());
    match (a, b) {
        ((Hyp::One, _), (k, m)) | ((k, m), (Hyp::One, _)) => Some(vec![(one, k, m)]),
        ((Hyp::Sh, 1), (Hyp::Sh, 1)) => Some(vec![(half.clone(), Hyp::Ch, 2), (-half, Hyp::One, 0)]),
        ((Hyp::Ch, 1), (Hyp::Ch, 1)) => Some(vec![(half.clone(), Hyp::Ch, 2), (half, Hyp::One, 0)]),
        ((Hyp::Sh, 1), (Hyp::Ch, 1)) | ((Hyp::Ch, 1), (Hyp::Sh, 1)) => Some(vec![(half, Hyp::Sh, 2)]),
        _ => None,
    }
}

fn trig_product(a: (Trig, u8), b: (Trig, u8)) -> Option<Vec<(BigRational, Trig, u8)>> {
    let half = BigRational::new(1.into(), 2.into());
    let one = BigRational::from_integer(1.into());
    match (a, b) {
        ((Trig::One, _), (k, m)) | ((k, m), (Trig::One, _)) => Some(vec![(one, k, m)]),
        ((Trig::Sin, 1), (Trig::Sin, 1)) => Some(vec![(half.clone(), Trig::One, 0), (-half, Trig::Cos, 2)]),
        ((Trig::Cos, 1), (Trig::Cos, 1)) => Some(vec![(half.clone(), Trig::One, 0), (half, Trig::Cos, 2)]),
        ((Trig::Sin, 1), (Trig::Cos, 1)) | ((Trig::Cos, 1), (Trig::Sin, 1)) => Some(vec![(half, Trig::Sin, 2)]),
        _ => None,
    }
}

/// `Σ coefficient · basis`, with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrigHypExpr {
    terms: BTreeMap<Basis, RationalPoly>,
}

impl TrigHypExpr {
    pub fn zero() -> Self {
        TrigHypExpr::default()
    }

    pub fn term(basis: Basis, coeff: RationalPoly) -> Self {
        let mut e = TrigHypExpr::zero();
        e.add_term(basis, coeff);
        e
    }

    /// Builds an expression from `(basis, coefficient text)` pairs.
    pub fn parse_terms(pairs: &[(Basis, &str)]) -> Result<Self> {
        let mut e = TrigHypExpr::zero();
        for (basis, text) in pairs {
            e.add_term(*basis, RationalPoly::parse(text)?);
        }
        Ok(e)
    }

    pub fn add_term(&mut self, basis: Basis, coeff: RationalPoly) {
        let slot = self.terms.entry(basis).or_default();
        *slot = std::mem::take(slot) + coeff;
        if slot.is_zero() {
            self.terms.remove(&basis);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &RationalPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, basis: &Basis) -> RationalPoly {
        self.terms.get(basis).cloned().unwrap_or_default()
    }

    pub fn bases(&self) -> Vec<Basis> {
        self.terms.keys().copied().collect()
    }

    pub fn scale(&self, c: &RationalPoly) -> Self {
        let mut out = TrigHypExpr::zero();
        for (b, k) in &self.terms {
            out.add_term(*b, k * c);
        }
        out
    }

    /// Product, expanding half-argument squares and cross products into
    /// full-argument terms.
    pub fn mul(&self, other: &TrigHypExpr) -> Result<Self> {
        let mut out = TrigHypExpr::zero();
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let hs = hyp_product((ba.hyp, ba.hyp_mult), (bb.hyp, bb.hyp_mult));
                let ts = trig_product((ba.trig, ba.trig_mult), (bb.trig, bb.trig_mult));
                let (Some(hs), Some(ts)) = (hs, ts) else {
                    return Err(AuditError::Symbolic(format!(
                        "product {ba} * {bb} leaves the half/full-argument basis"
                    )));
                };
                let c = ca * cb;
                for (kh, h, mh) in &hs {
                    for (kt, t, mt) in &ts {
                        out.add_term(Basis::new(*h, *mh, *t, *mt), c.scale(&(kh * kt)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&RationalPoly) -> Result<RationalPoly>,
    {
        let mut out = TrigHypExpr::zero();
        for (b, k) in &self.terms {
            out.add_term(*b, f(k)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, v: Var, repl: &RationalPoly) -> Result<Self> {
        self.map_coeffs(|k| k.substitute(v, repl))
    }

    /// The expression with `t2 = 0`: the trigonometric argument vanishes
    /// along with every coefficient carrying a `t2` factor.
    pub fn at_t2_zero(&self) -> Result<Self> {
        let mut out = TrigHypExpr::zero();
        for (b, k) in &self.terms {
            if let Some(basis) = b.at_zero_trig() {
                let k = k.at_zero(Var::T2)?.substitute(Var::InvNorm, &RationalPoly::int(1).shift(Var::T1, -2))?;
                out.add_term(basis, k);
            }
        }
        Ok(out)
    }

    /// Equality as functions: every coefficient agrees after clearing the
    /// inverse symbols.
    pub fn equivalent(&self, other: &TrigHypExpr) -> bool {
        (self.clone() - other.clone()).terms.values().all(|k| k.cleared().is_zero())
    }

    /// Coefficients cleared of the inverse symbols; zero entries dropped.
    pub fn cleared(&self) -> Self {
        let mut out = TrigHypExpr::zero();
        for (b, k) in &self.terms {
            out.add_term(*b, k.cleared());
        }
        out
    }

    /// Value at hyperbolic argument `x` and trigonometric argument `y`.
    pub fn eval<R: Real>(&self, vals: &VarValues<R>, x: &R, y: &R) -> Result<R> {
        let mut acc = x.zero();
        for (b, k) in &self.terms {
            acc = acc + k.eval(vals, x)? * b.eval(x, y);
        }
        Ok(acc)
    }

    /// `Σ |coefficient · basis|` with each coefficient taken at its own
    /// absolute term sum.
    pub fn eval_abs<R: Real>(&self, vals: &VarValues<R>, x: &R, y: &R) -> Result<R> {
        let mut acc = x.zero();
        for (b, k) in &self.terms {
            acc = acc + k.eval_abs(vals, x)? * b.eval(x, y).abs();
        }
        Ok(acc)
    }
}

impl Add for TrigHypExpr {
    type Output = TrigHypExpr;
    fn add(mut self, rhs: TrigHypExpr) -> TrigHypExpr {
        for (b, k) in rhs.terms {
            self.add_term(b, k);
        }
        self
    }
}

impl Sub for TrigHypExpr {
    type Output = TrigHypExpr;
    fn sub(self, rhs: TrigHypExpr) -> TrigHypExpr {
        self + (-rhs)
    }
}

impl Neg for TrigHypExpr {
    type Output = TrigHypExpr;
    fn neg(self) -> TrigHypExpr {
        let mut out = TrigHypExpr::zero();
        for (b, k) in self.terms {
            out.add_term(b, -k);
        }
        out
    }
}

impl fmt::Display for TrigHypExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]·{b}")?;
        }
        Ok(())
    }
}

/// `re + i·im` with both parts trig–hyperbolic expressions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexExpr {
    pub re: TrigHypExpr,
    pub im: TrigHypExpr,
}

impl ComplexExpr {
    pub fn new(re: TrigHypExpr, im: TrigHypExpr) -> Self {
        ComplexExpr { re, im }
    }

    /// A polynomial scalar `re + i·im`.
    pub fn scalar(re: RationalPoly, im: RationalPoly) -> Self {
        ComplexExpr {
            re: TrigHypExpr::term(Basis::ONE, re),
            im: TrigHypExpr::term(Basis::ONE, im),
        }
    }

    pub fn mul(&self, other: &ComplexExpr) -> Result<Self> {
        let re = self.re.mul(&other.re)? - self.im.mul(&other.im)?;
        let im = self.re.mul(&other.im)? + self.im.mul(&other.re)?;
        Ok(ComplexExpr { re, im })
    }

    pub fn scale(&self, c: &RationalPoly) -> Self {
        ComplexExpr {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }
}

impl Add for ComplexExpr {
    type Output = ComplexExpr;
    fn add(self, rhs: ComplexExpr) -> ComplexExpr {
        ComplexExpr {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RationalPoly {
        RationalPoly::parse(s).unwrap()
    }

    #[test]
    fn pythagorean_products_collapse() {
        let sin = TrigHypExpr::term(Basis::half(Hyp::One, Trig::Sin), p("1"));
        let cos = TrigHypExpr::term(Basis::half(Hyp::One, Trig::Cos), p("1"));
        let one = sin.mul(&sin).unwrap() + cos.mul(&cos).unwrap();
        assert_eq!(one, TrigHypExpr::term(Basis::ONE, p("1")));
        let ch = TrigHypExpr::term(Basis::half(Hyp::Ch, Trig::One), p("1"));
        let sh = TrigHypExpr::term(Basis::half(Hyp::Sh, Trig::One), p("1"));
        let one = ch.mul(&ch).unwrap() - sh.mul(&sh).unwrap();
        assert_eq!(one, TrigHypExpr::term(Basis::ONE, p("1")));
        let double = sh.mul(&ch).unwrap();
        assert_eq!(double, TrigHypExpr::term(Basis::new(Hyp::Sh, 2, Trig::One, 0), p("1/2")));
    }

    #[test]
    fn full_argument_products_are_rejected() {
        let full = TrigHypExpr::term(Basis::new(Hyp::Sh, 2, Trig::One, 0), p("1"));
        assert!(full.mul(&full).is_err());
    }

    #[test]
    fn basis_values() {
        let (x, y) = (0.7f64, 0.3f64);
        let b = Basis::half(Hyp::Ch, Trig::Sin);
        assert!((b.eval(&x, &y) - x.cosh() * y.sin()).abs() < 1e-15);
        let full = Basis::new(Hyp::One, 0, Trig::Sin, 2);
        assert!((full.eval(&x, &y) - (2.0 * y).sin()).abs() < 1e-15);
        assert_eq!(full.to_string(), "sin(2y)");
        assert_eq!(b.to_string(), "ch(x)sin(y)");
    }

    #[test]
    fn numeric_value_of_product_matches() {
        let a = TrigHypExpr::term(Basis::half(Hyp::Ch, Trig::Cos), p("t1"))
            + TrigHypExpr::term(Basis::half(Hyp::Sh, Trig::Sin), p("-t2"));
        let b = TrigHypExpr::term(Basis::half(Hyp::Sh, Trig::Cos), p("2"))
            + TrigHypExpr::term(Basis::half(Hyp::Ch, Trig::Sin), p("t1 t2"));
        let prod = a.mul(&b).unwrap();
        let vals = VarValues::new().set(Var::T1, 1.3).set(Var::T2, 0.4);
        let (x, y) = (0.9, 0.2);
        let lhs = prod.eval(&vals, &x, &y).unwrap();
        let rhs = a.eval(&vals, &x, &y).unwrap() * b.eval(&vals, &x, &y).unwrap();
        assert!((lhs - rhs).abs() < 1e-14);
    }
}
