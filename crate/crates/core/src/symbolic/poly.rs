//! Sparse Laurent polynomials with exact rational coefficients.
//!
//! The two rational denominators that occur, `1/(t1² + t2²)` and `1/(α² + 1)`,
//! are carried as their own symbols. Equality modulo those relations is decided
//! by [`RationalPoly::equivalent`], which clears both denominators first.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AuditError, Result};
use crate::numerics::Real;

/// Symbols a coefficient may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T1,
    T2,
    Alpha,
    Sigma,
    B,
    InvEps,
    /// `1/(t1² + t2²)`.
    InvNorm,
    /// `1/(α² + 1)`.
    InvAlphaNorm,
}

pub const VAR_COUNT: usize = 8;

impl Var {
    pub const ALL: [Var; VAR_COUNT] = [
        Var::T1,
        Var::T2,
        Var::Alpha,
        Var::Sigma,
        Var::B,
        Var::InvEps,
        Var::InvNorm,
        Var::InvAlphaNorm,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T1 => "t1",
            Var::T2 => "t2",
            Var::Alpha => "alpha",
            Var::Sigma => "sigma",
            Var::B => "b",
            Var::InvEps => "inv_eps",
            Var::InvNorm => "inv_norm",
            Var::InvAlphaNorm => "inv_alpha_norm",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Exponent vector indexed by [`Var::index`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [i32; VAR_COUNT]);

impl Monomial {
    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Monomial::default();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(other.0) {
            *a += b;
        }
        m
    }

    fn without(&self, v: Var) -> Monomial {
        let mut m = *self;
        m.0[v.index()] = 0;
        m
    }
}

/// Canonical sparse polynomial: no zero coefficients are stored, so derived
/// `PartialEq` is exact structural equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

/// Numeric values for evaluation; unset symbols evaluate as an error.
#[derive(Clone, Debug)]
pub struct VarValues<R> {
    values: [Option<R>; VAR_COUNT],
}

impl<R: Real> VarValues<R> {
    pub fn new() -> Self {
        VarValues {
            values: Default::default(),
        }
    }

    pub fn set(mut self, v: Var, x: R) -> Self {
        self.values[v.index()] = Some(x);
        self
    }

    pub fn get(&self, v: Var) -> Option<&R> {
        self.values[v.index()].as_ref()
    }

    /// Sets `t1`, `t2`, `b`, `1/ε` and the derived `1/(t1² + t2²)`; when
    /// `t2 != 0` also `α = t1/t2`, `σ = t2 b/2` and `1/(α² + 1)`.
    pub fn physical(t1: &R, t2: &R, b: &R, eps: &R) -> Self {
        let one = t1.one();
        let mut out = VarValues::new()
            .set(Var::T1, t1.clone())
            .set(Var::T2, t2.clone())
            .set(Var::B, b.clone())
            .set(Var::InvEps, one.clone() / eps.clone())
            .set(Var::InvNorm, one.clone() / (t1.square() + t2.square()));
        if !t2.is_zero() {
            let alpha = t1.clone() / t2.clone();
            out = out
                .set(Var::Sigma, t2.clone() * b.clone() * b.ratio(1, 2))
                .set(Var::InvAlphaNorm, one.clone() / (alpha.square() + one))
                .set(Var::Alpha, alpha);
        }
        out
    }

    /// Sets `α`, `σ` and `1/(α² + 1)`.
    pub fn sigma_form(alpha: &R, sigma: &R) -> Self {
        let one = alpha.one();
        VarValues::new()
            .set(Var::Alpha, alpha.clone())
            .set(Var::Sigma, sigma.clone())
            .set(Var::InvAlphaNorm, one.clone() / (alpha.square() + one))
    }
}

impl<R: Real> Default for VarValues<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPoly::monomial(c, Monomial::default())
    }

    pub fn int(n: i64) -> Self {
        RationalPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        RationalPoly::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn var(v: Var) -> Self {
        RationalPoly::monomial(BigRational::one(), Monomial::var(v, 1))
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        let mut p = RationalPoly::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables that occur with a nonzero exponent, in [`Var`] order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.terms.keys().any(|m| m.exp(v) != 0))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = RationalPoly::zero();
        for (m, k) in &self.terms {
            out.add_term(*m, k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = RationalPoly::int(1);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn max_exp(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_exp(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    /// Groups terms by the exponent of `v`, removing `v` from each group.
    pub fn by_power(&self, v: Var) -> BTreeMap<i32, RationalPoly> {
        let mut out: BTreeMap<i32, RationalPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(v)).or_default().add_term(m.without(v), c.clone());
        }
        out
    }

    /// Multiplies by `v^e`.
    pub fn shift(&self, v: Var, e: i32) -> Self {
        let step = Monomial::var(v, e);
        let mut out = RationalPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.times(&step), c.clone());
        }
        out
    }

    /// The single term as `(c, m)` when the polynomial is one monomial.
    fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Replaces `v` by `repl`. Negative powers of `v` need `repl` to be a
    /// single monomial.
    pub fn substitute(&self, v: Var, repl: &RationalPoly) -> Result<Self> {
        let inverse = match repl.as_monomial() {
            Some((m, c)) => {
                let mut inv = Monomial::default();
                for (a, b) in inv.0.iter_mut().zip(m.0) {
                    *a = -b;
                }
                Some(RationalPoly::monomial(c.recip(), inv))
            }
            None => None,
        };
        let mut out = RationalPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let factor = if e >= 0 {
                repl.pow(e as u32)
            } else {
                match &inverse {
                    Some(inv) => inv.pow((-e) as u32),
                    None => {
                        return Err(AuditError::InvalidInput(format!(
                            "cannot substitute a polynomial into a negative power of {}",
                            v.name()
                        )))
                    }
                }
            };
            out = out + RationalPoly::monomial(c.clone(), m.without(v)) * factor;
        }
        Ok(out)
    }

    /// Sets `v = 0`. Fails when `v` occurs with a negative exponent.
    pub fn at_zero(&self, v: Var) -> Result<Self> {
        if self.min_exp(v) < 0 {
            return Err(AuditError::InvalidInput(format!(
                "{} occurs in a denominator",
                v.name()
            )));
        }
        let mut out = RationalPoly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == 0 {
                out.add_term(*m, c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies through by `denom^N`, where `inv` stands for `1/denom` and
    /// `N` is its highest power, so that `inv` disappears. Returns the result
    /// and `N`.
    pub fn clear_inverse(&self, inv: Var, denom: &RationalPoly) -> (Self, i32) {
        let n = self.max_exp(inv).max(0);
        let mut out = RationalPoly::zero();
        for (k, part) in self.by_power(inv) {
            // Negative powers of an inverse are plain powers of the denominator.
            out = out + part * denom.pow((n - k) as u32);
        }
        (out, n)
    }

    /// `1/(t1² + t2²)` and `1/(α² + 1)` cleared, leaving a Laurent polynomial
    /// in the remaining symbols.
    pub fn cleared(&self) -> Self {
        let (p, _) = self.clear_inverse(Var::InvNorm, &norm_poly());
        let (p, _) = p.clear_inverse(Var::InvAlphaNorm, &alpha_norm_poly());
        p
    }

    /// Equality as rational functions, given the meaning of the inverse symbols.
    pub fn equivalent(&self, other: &RationalPoly) -> bool {
        (self.clone() - other.clone()).cleared().is_zero()
    }

    pub fn eval<R: Real>(&self, vals: &VarValues<R>, like: &R) -> Result<R> {
        let mut acc = like.zero();
        for (m, c) in &self.terms {
            acc = acc + like.from_rational(c) * monomial_value(m, vals, like)?;
        }
        Ok(acc)
    }

    /// `Σ |c·m|`, the size against which cancellation in [`Self::eval`] is judged.
    pub fn eval_abs<R: Real>(&self, vals: &VarValues<R>, like: &R) -> Result<R> {
        let mut acc = like.zero();
        for (m, c) in &self.terms {
            acc = acc + (like.from_rational(c) * monomial_value(m, vals, like)?).abs();
        }
        Ok(acc)
    }

    /// Exact value when every symbol present is given a rational value.
    pub fn eval_rational(&self, vals: &[(Var, BigRational)]) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = vals.iter().find(|(w, _)| *w == v).map(|(_, x)| x).ok_or_else(|| {
                    AuditError::InvalidInput(format!("no value for {}", v.name()))
                })?;
                term *= num_traits::pow::Pow::pow(x, e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Dense coefficients `[c0, c1, …]` of a polynomial in `v` alone.
    pub fn univariate(&self, v: Var) -> Result<Vec<BigRational>> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e < 0 || m.without(v) != Monomial::default() {
                return Err(AuditError::InvalidInput(format!(
                    "{self} is not a polynomial in {} alone",
                    v.name()
                )));
            }
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, BigRational::zero());
            }
            out[e] = c.clone();
        }
        Ok(out)
    }

    pub fn from_univariate(v: Var, coeffs: &[BigRational]) -> Self {
        let mut out = RationalPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            out.add_term(Monomial::var(v, e as i32), c.clone());
        }
        out
    }

    /// Exact quotient by `divisor` as polynomials in `v` alone; fails when the
    /// division leaves a remainder.
    pub fn div_exact(&self, divisor: &RationalPoly, v: Var) -> Result<Self> {
        let mut num = self.univariate(v)?;
        let den = divisor.univariate(v)?;
        let lead = den
            .last()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| AuditError::InvalidInput("division by the zero polynomial".into()))?
            .clone();
        if num.len() < den.len() {
            return if num.iter().all(Zero::is_zero) {
                Ok(RationalPoly::zero())
            } else {
                Err(AuditError::InvalidInput(format!("{divisor} does not divide {self}")))
            };
        }
        let mut quot = vec![BigRational::zero(); num.len() - den.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = &num[k + den.len() - 1] / &lead;
            for (j, d) in den.iter().enumerate() {
                num[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return Err(AuditError::InvalidInput(format!("{divisor} does not divide {self}")));
        }
        Ok(RationalPoly::from_univariate(v, &quot))
    }

    /// Parses `+ - * / ^`, parentheses, integers and symbol names. Division
    /// is only by nonzero integer constants.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            text,
        };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }
}

/// `t1² + t2²`.
pub fn norm_poly() -> RationalPoly {
    RationalPoly::var(Var::T1).pow(2) + RationalPoly::var(Var::T2).pow(2)
}

/// `α² + 1`.
pub fn alpha_norm_poly() -> RationalPoly {
    RationalPoly::var(Var::Alpha).pow(2) + RationalPoly::int(1)
}

fn monomial_value<R: Real>(m: &Monomial, vals: &VarValues<R>, like: &R) -> Result<R> {
    let mut acc = like.one();
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        let x = vals
            .get(v)
            .ok_or_else(|| AuditError::InvalidInput(format!("no value for {}", v.name())))?;
        acc = if e > 0 {
            acc * x.powi(e)
        } else {
            acc / x.powi(-e)
        };
    }
    Ok(acc)
}

impl Add for RationalPoly {
    type Output = RationalPoly;
    fn add(mut self, rhs: RationalPoly) -> RationalPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: RationalPoly) -> RationalPoly {
        self + (-rhs)
    }
}

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(mut self) -> RationalPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        let mut out = RationalPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: RationalPoly) -> RationalPoly {
        &self * &rhs
    }
}

impl fmt::Display for RationalPoly {
    /// Highest total degree first; `0` for the empty polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut order: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        order.sort_by(|a, b| {
            let da: i32 = a.0 .0.iter().sum();
            let db: i32 = b.0 .0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (m, c)) in order.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_constant() {
                factors.push(mag.to_string());
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> AuditError {
        AuditError::InvalidInput(format!("{what} at offset {} in '{}'", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<RationalPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<RationalPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.as_monomial() {
                        Some((m, c)) if m.is_constant() => c.clone(),
                        _ => return Err(self.error("division by a non-constant")),
                    };
                    acc = acc.scale(&c.recip());
                }
                Some(b'(') => acc = acc * self.power()?,
                Some(c) if c.is_ascii_alphabetic() => acc = acc * self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent must be a small non-negative integer"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse::<BigInt>()
            .map_err(|_| self.error("expected an integer"))
    }

    fn atom(&mut self) -> Result<RationalPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(RationalPoly::constant(BigRational::from_integer(self.integer()?))),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                Var::from_name(name)
                    .map(RationalPoly::var)
                    .ok_or_else(|| self.error(&format!("unknown symbol '{name}'")))
            }
            _ => Err(self.error("expected a term")),
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
    fn parse_and_expand() {
        let q = p("(t1^2 - t2^2)^2 - (2*t1*t2)^2");
        assert_eq!(q, p("t1^4 - 6 t1^2 t2^2 + t2^4"));
        assert_eq!(p("(b/2)^2"), p("b^2/4"));
        assert_eq!(p("3 - 3"), RationalPoly::zero());
        assert!(RationalPoly::parse("t1 / t2").is_err());
        assert!(RationalPoly::parse("x + 1").is_err());
    }

    #[test]
    fn substitution_handles_negative_powers() {
        let q = p("t1^2 * inv_norm").shift(Var::T2, -1);
        let a = q.substitute(Var::T1, &p("alpha*t2")).unwrap();
        assert_eq!(a, p("alpha^2*t2*inv_norm"));
        let poly_into_negative = q.substitute(Var::T2, &p("t1 + 1"));
        assert!(poly_into_negative.is_err());
    }

    #[test]
    fn equivalence_clears_denominators() {
        let a = p("(alpha^2 + 1) * inv_alpha_norm");
        assert!(a.equivalent(&RationalPoly::int(1)));
        let b = p("(t1^2 + t2^2)^2 * inv_norm^3");
        assert!(b.equivalent(&p("inv_norm")));
        assert!(!p("inv_norm").equivalent(&p("inv_alpha_norm")));
    }

    #[test]
    fn exact_division() {
        let num = p("16 alpha^2 (alpha^2+1)^2 (-7 alpha^4 + 10 alpha^2 + 1)");
        let q = num.div_exact(&p("16 alpha^2 (alpha^2 + 1)^2"), Var::Alpha).unwrap();
        assert_eq!(q, p("-7 alpha^4 + 10 alpha^2 + 1"));
        assert!(p("alpha^2 + 2").div_exact(&p("alpha + 1"), Var::Alpha).is_err());
    }

    #[test]
    fn rational_and_numeric_evaluation_agree() {
        let q = p("-7 alpha^4 + 10 alpha^2 + 1");
        let a = BigRational::from_integer(13.into());
        assert_eq!(q.eval_rational(&[(Var::Alpha, a)]).unwrap(), BigRational::from_integer((-198236).into()));
        let vals = VarValues::new().set(Var::Alpha, 13.0);
        assert_eq!(q.eval(&vals, &1.0).unwrap(), -198236.0);
        assert!(q.eval(&VarValues::<f64>::new(), &1.0).is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p("-4 alpha^2 sigma^2 + 12 alpha^3 - 1/2").to_string(), "-4*alpha^2*sigma^2 + 12*alpha^3 - 1/2");
        assert_eq!(RationalPoly::zero().to_string(), "0");
    }
}
