//! The derivation chain: `P` → `f = Im P` → `t1 = αt2` → merged `(2/ε)Q − R`
//! → `Q` in `σ = t2 b/2` → the quadratics `g1..g4` and their signs.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::expr::{Basis, ComplexExpr, Hyp, Trig, TrigHypExpr};
use super::poly::{alpha_norm_poly, RationalPoly, Var, VarValues};
use crate::error::{AuditError, Result};
use crate::numerics::Real;

pub const CH_SIN: Basis = Basis {
    hyp: Hyp::Ch,
    hyp_mult: 1,
    trig: Trig::Sin,
    trig_mult: 1,
};
pub const SH_COS: Basis = Basis {
    hyp: Hyp::Sh,
    hyp_mult: 1,
    trig: Trig::Cos,
    trig_mult: 1,
};
pub const SH_SIN: Basis = Basis {
    hyp: Hyp::Sh,
    hyp_mult: 1,
    trig: Trig::Sin,
    trig_mult: 1,
};
pub const CH_COS: Basis = Basis {
    hyp: Hyp::Ch,
    hyp_mult: 1,
    trig: Trig::Cos,
    trig_mult: 1,
};
/// `sh(t1 b)`.
pub const SH_FULL: Basis = Basis {
    hyp: Hyp::Sh,
    hyp_mult: 2,
    trig: Trig::One,
    trig_mult: 0,
};
/// `sin(t2 b)`.
pub const SIN_FULL: Basis = Basis {
    hyp: Hyp::One,
    hyp_mult: 0,
    trig: Trig::Sin,
    trig_mult: 2,
};

fn v(x: Var) -> RationalPoly {
    RationalPoly::var(x)
}

fn int(n: i64) -> RationalPoly {
    RationalPoly::int(n)
}

fn half_b() -> RationalPoly {
    v(Var::B).scale(&BigRational::new(1.into(), 2.into()))
}

/// Real and imaginary parts of `(t1 + i t2)^n`.
pub fn expand_complex_powers(n: u32) -> (RationalPoly, RationalPoly) {
    let (t1, t2) = (v(Var::T1), v(Var::T2));
    let mut re = int(1);
    let mut im = RationalPoly::zero();
    for _ in 0..n {
        let next_re = &re * &t1 - &im * &t2;
        let next_im = &re * &t2 + &im * &t1;
        re = next_re;
        im = next_im;
    }
    (re, im)
}

fn t_power(n: u32) -> ComplexExpr {
    let (re, im) = expand_complex_powers(n);
    ComplexExpr::scalar(re, im)
}

/// `sh(τ b/2)` with `τ = t` or `t̄`, split into real and imaginary parts.
fn sh_half(conjugate: bool) -> ComplexExpr {
    let s = if conjugate { -1 } else { 1 };
    ComplexExpr::new(
        TrigHypExpr::term(SH_COS, int(1)),
        TrigHypExpr::term(CH_SIN, int(s)),
    )
}

/// `ch(τ b/2)` with `τ = t` or `t̄`.
fn ch_half(conjugate: bool) -> ComplexExpr {
    let s = if conjugate { -1 } else { 1 };
    ComplexExpr::new(
        TrigHypExpr::term(CH_COS, int(1)),
        TrigHypExpr::term(SH_SIN, int(s)),
    )
}

/// The boundary-and-integral combination `P(b; ε)` from the energy identity,
/// with every complex power and complex-argument function expanded.
pub fn derive_p() -> Result<ComplexExpr> {
    let ie = v(Var::InvEps);
    let inv_n = v(Var::InvNorm);
    let hb = half_b();
    let norm = super::poly::norm_poly();
    let sh_bar = sh_half(true);
    let ch_bar = ch_half(true);
    let terms = [
        t_power(4).mul(&sh_bar)?.scale(&(-(&(&ie * &hb.pow(2)) * &inv_n))),
        t_power(5).mul(&ch_bar)?.scale(&(&(&int(2) * &ie) * &(&hb * &inv_n.pow(2)))),
        t_power(6).mul(&sh_bar)?.scale(&-(&(&int(2) * &ie) * &inv_n.pow(3))),
        t_power(2).mul(&sh_bar)?.scale(&(&(&int(2) * &ie) * &inv_n)),
        t_power(1).mul(&ch_bar.mul(&sh_half(false))?)?.scale(&int(-2)),
        t_power(1).mul(&ch_bar)?.scale(&-(&(&int(2) * &ie) * &hb)),
        sh_half(false).scale(&-(&(&ie * &hb.pow(2)) * &norm)),
    ];
    Ok(terms
        .into_iter()
        .fold(ComplexExpr::default(), |acc, t| acc + t))
}

/// `f(b; ε) = Im P(b; ε)`.
pub fn derive_im_p() -> Result<TrigHypExpr> {
    Ok(derive_p()?.im)
}

/// `t1 → αt2`, so `1/(t1² + t2²) → 1/((α² + 1) t2²)`.
pub fn substitute_alpha(expr: &TrigHypExpr) -> Result<TrigHypExpr> {
    let t1 = &v(Var::Alpha) * &v(Var::T2);
    let inv_norm = v(Var::InvAlphaNorm).shift(Var::T2, -2);
    expr.substitute(Var::T1, &t1)?.substitute(Var::InvNorm, &inv_norm)
}

/// `α t2 sin(t2 b) + t2 sh(α t2 b)`, the ε-free part subtracted in the merged form.
pub fn remainder_bracket() -> TrigHypExpr {
    TrigHypExpr::term(SIN_FULL, &v(Var::Alpha) * &v(Var::T2)) + TrigHypExpr::term(SH_FULL, v(Var::T2))
}

/// Result of regrouping the α-form as `(2/ε)Q(b) − remainder_bracket`.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeResult {
    /// `(2/ε)Q − R` rebuilt from its parts.
    pub merged: TrigHypExpr,
    pub q: TrigHypExpr,
    /// The full-argument terms of the input, `−R`.
    pub remainder: TrigHypExpr,
    /// Parts of `Q` by power of `t2`: 2, 1 and 0.
    pub groups: BTreeMap<i32, TrigHypExpr>,
    /// Whether `remainder` is exactly `−[α t2 sin(t2 b) + t2 sh(α t2 b)]`.
    pub remainder_matches: bool,
}

/// Splits the α-form into full-argument remainder and `(2/ε)Q`, grouping `Q`
/// by powers of `t2`.
pub fn merge_terms(expr: &TrigHypExpr) -> Result<MergeResult> {
    let mut remainder = TrigHypExpr::zero();
    let mut rest = TrigHypExpr::zero();
    for (b, k) in expr.terms() {
        if b.hyp_mult == 2 || b.trig_mult == 2 {
            remainder.add_term(*b, k.clone());
        } else {
            rest.add_term(*b, k.clone());
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let q = rest.map_coeffs(|k| {
        if k.min_exp(Var::InvEps) != 1 || k.max_exp(Var::InvEps) != 1 {
            return Err(AuditError::MergeMismatch(format!(
                "coefficient {k} is not linear in 1/eps"
            )));
        }
        Ok(k.shift(Var::InvEps, -1).scale(&half))
    })?;
    let mut groups: BTreeMap<i32, TrigHypExpr> = BTreeMap::new();
    for (b, k) in q.terms() {
        for (e, part) in k.by_power(Var::T2) {
            groups.entry(e).or_default().add_term(*b, part.shift(Var::T2, e));
        }
    }
    let merged = q.scale(&(&int(2) * &v(Var::InvEps))) + remainder.clone();
    if !merged.equivalent(expr) {
        return Err(AuditError::MergeMismatch("regrouped form differs from its input".into()));
    }
    let remainder_matches = remainder.equivalent(&-remainder_bracket());
    Ok(MergeResult {
        merged,
        q,
        remainder,
        groups,
        remainder_matches,
    })
}

/// The quadratics in `σ` multiplying `e^{±ασ}/2 · sin σ, cos σ` in
/// `(α² + 1)³ Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct GPolySet {
    pub g1: RationalPoly,
    pub g2: RationalPoly,
    pub g3: RationalPoly,
    pub g4: RationalPoly,
}

impl GPolySet {
    pub fn all(&self) -> [(&'static str, &RationalPoly); 4] {
        [("g1", &self.g1), ("g2", &self.g2), ("g3", &self.g3), ("g4", &self.g4)]
    }

    /// `Q(σ) = (α² + 1)^-3 {e^{ασ}/2 [g1 sin σ + g2 cos σ] + e^{−ασ}/2 [g3 sin σ + g4 cos σ]}`.
    pub fn assemble<R: Real>(&self, alpha: &R, sigma: &R) -> Result<R> {
        let vals = VarValues::sigma_form(alpha, sigma);
        let g = |p: &RationalPoly| p.eval(&vals, alpha);
        let (s, c) = sigma.sin_cos();
        let up = (alpha.clone() * sigma.clone()).exp();
        let down = alpha.one() / up.clone();
        let half = alpha.ratio(1, 2);
        let inner = half.clone() * up * (g(&self.g1)? * s.clone() + g(&self.g2)? * c.clone())
            + half * down * (g(&self.g3)? * s + g(&self.g4)? * c);
        Ok(inner / (alpha.square() + alpha.one()).powi(3))
    }
}

/// Coefficients `[c0, c1, c2]` of `g` as a quadratic in `σ`.
pub fn sigma_coefficients(g: &RationalPoly) -> Result<[RationalPoly; 3]> {
    let parts = g.by_power(Var::Sigma);
    if parts.keys().any(|&e| !(0..=2).contains(&e)) {
        return Err(AuditError::Symbolic(format!("{g} is not quadratic in sigma")));
    }
    let get = |e: i32| parts.get(&e).cloned().unwrap_or_default();
    Ok([get(0), get(1), get(2)])
}

/// `Q` written in `σ`: `b = 2σ/t2`, after which `t2` must cancel.
pub fn q_sigma_expr(q: &TrigHypExpr) -> Result<TrigHypExpr> {
    let b = (&int(2) * &v(Var::Sigma)).shift(Var::T2, -1);
    let out = q.substitute(Var::B, &b)?;
    for (basis, k) in out.terms() {
        if k.min_exp(Var::T2) != 0 || k.max_exp(Var::T2) != 0 {
            return Err(AuditError::Symbolic(format!(
                "t2 survives in the {basis} coefficient of Q(sigma): {k}"
            )));
        }
    }
    Ok(out)
}

/// Multiplies by `(α² + 1)³`, leaving a polynomial in `α` and `σ`.
fn times_alpha_norm_cubed(p: &RationalPoly) -> Result<RationalPoly> {
    let (num, n) = p.clear_inverse(Var::InvAlphaNorm, &alpha_norm_poly());
    if n > 3 {
        return Err(AuditError::Symbolic(format!(
            "(alpha^2 + 1)^{n} in a denominator of Q(sigma)"
        )));
    }
    Ok(num * alpha_norm_poly().pow((3 - n) as u32))
}

/// Splits `ch(ασ) = (e^{ασ} + e^{−ασ})/2` and `sh(ασ) = (e^{ασ} − e^{−ασ})/2`.
pub fn q_in_sigma(q: &TrigHypExpr) -> Result<GPolySet> {
    let qs = q_sigma_expr(q)?;
    for b in qs.bases() {
        if ![CH_SIN, SH_SIN, CH_COS, SH_COS].contains(&b) {
            return Err(AuditError::Symbolic(format!("unexpected basis {b} in Q(sigma)")));
        }
    }
    let c = |b: &Basis| times_alpha_norm_cubed(&qs.coeff(b));
    let (cs, ss, cc, sc) = (c(&CH_SIN)?, c(&SH_SIN)?, c(&CH_COS)?, c(&SH_COS)?);
    let set = GPolySet {
        g1: cs.clone() + ss.clone(),
        g2: cc.clone() + sc.clone(),
        g3: cs - ss,
        g4: cc - sc,
    };
    for (_, g) in set.all() {
        sigma_coefficients(g)?;
    }
    Ok(set)
}

/// `B² − 4AC` for `g = Aσ² + Bσ + C`, as a polynomial in `α`.
pub fn discriminant(g: &RationalPoly) -> Result<RationalPoly> {
    let [c, b, a] = sigma_coefficients(g)?;
    Ok(b.pow(2) - &(&int(4) * &a) * &c)
}

/// `16α²(α² + 1)²`, the factor shared by every discriminant.
pub fn discriminant_common_factor() -> RationalPoly {
    (&int(16) * &v(Var::Alpha).pow(2)) * alpha_norm_poly().pow(2)
}

/// Sign of `aσ² + bσ + c` on `σ > 0` when it is constant there.
pub fn sign_on_positive_axis(a: &BigRational, b: &BigRational, c: &BigRational) -> Option<i8> {
    let sgn = |x: &BigRational| -> i8 {
        if x.is_zero() {
            0
        } else if x.is_positive() {
            1
        } else {
            -1
        }
    };
    if a.is_zero() {
        return match (sgn(b), sgn(c)) {
            (0, 0) => None,
            (0, s) | (s, 0) => Some(s),
            (s, t) if s == t => Some(s),
            _ => None,
        };
    }
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    if disc.is_negative() {
        return Some(sgn(a));
    }
    // Real roots: the sign is constant on σ > 0 iff no root is positive.
    let sum = -(b / a);
    let product = c / a;
    if !sum.is_positive() && !product.is_negative() {
        Some(sgn(a))
    } else {
        None
    }
}

/// Sign analysis of one `g` at a fixed rational `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct GSignReport {
    pub name: &'static str,
    /// Sign asserted for every `σ > 0`.
    pub claimed_sign: i8,
    /// `σ²` coefficient as a polynomial in `α`.
    pub leading: RationalPoly,
    pub leading_at_alpha: BigRational,
    pub discriminant: RationalPoly,
    /// `discriminant / 16α²(α² + 1)²` when the division is exact.
    pub discriminant_cofactor: Option<RationalPoly>,
    pub discriminant_at_alpha: BigRational,
    /// Exact sign on `σ > 0`, if constant.
    pub exact_sign: Option<i8>,
    pub claim_holds: bool,
    pub sweep: SigmaSweep,
}

/// Binary64 sampling of `g` on `σ = kπ/50`, `k = 1..=500`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSweep {
    pub points: usize,
    pub min: f64,
    pub max: f64,
    /// Points whose sign matches the claim.
    pub agreeing: usize,
}

impl SigmaSweep {
    pub fn consistent(&self) -> bool {
        self.agreeing == self.points
    }
}

pub const SWEEP_POINTS: usize = 500;

fn sweep(g: &RationalPoly, alpha: f64, claimed: i8) -> Result<SigmaSweep> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut agreeing = 0;
    for k in 1..=SWEEP_POINTS {
        let sigma = k as f64 * PI / 50.0;
        let val = g.eval(&VarValues::sigma_form(&alpha, &sigma), &alpha)?;
        min = min.min(val);
        max = max.max(val);
        if (claimed < 0 && val < 0.0) || (claimed > 0 && val > 0.0) {
            agreeing += 1;
        }
    }
    Ok(SigmaSweep {
        points: SWEEP_POINTS,
        min,
        max,
        agreeing,
    })
}

/// Claimed signs: `g1, g2, g3 < 0` and `g4 > 0` for every `σ > 0`.
pub const CLAIMED_SIGNS: [i8; 4] = [-1, -1, -1, 1];

pub fn g_sign_analysis(set: &GPolySet, alpha: &BigRational) -> Result<Vec<GSignReport>> {
    let at = |p: &RationalPoly| p.eval_rational(&[(Var::Alpha, alpha.clone())]);
    let alpha_f = num_traits::ToPrimitive::to_f64(alpha).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    for ((name, g), claimed) in set.all().into_iter().zip(CLAIMED_SIGNS) {
        let [c, b, a] = sigma_coefficients(g)?;
        let (a0, b0, c0) = (at(&a)?, at(&b)?, at(&c)?);
        let disc = discriminant(g)?;
        let exact_sign = sign_on_positive_axis(&a0, &b0, &c0);
        out.push(GSignReport {
            name,
            claimed_sign: claimed,
            leading: a,
            leading_at_alpha: a0,
            discriminant_cofactor: disc.div_exact(&discriminant_common_factor(), Var::Alpha).ok(),
            discriminant_at_alpha: at(&disc)?,
            discriminant: disc,
            exact_sign,
            claim_holds: exact_sign == Some(claimed),
            sweep: sweep(g, alpha_f, claimed)?,
        });
    }
    Ok(out)
}

/// `α` values at which the sign claims are checked: 12.001, 13, 20, 52, 100.
pub fn alpha_grid() -> Vec<BigRational> {
    vec![
        BigRational::new(BigInt::from(12001), BigInt::from(1000)),
        BigRational::from_integer(13.into()),
        BigRational::from_integer(20.into()),
        BigRational::from_integer(52.into()),
        BigRational::from_integer(100.into()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{BigReal, PrecisionContext};
    use crate::signs::{f_eval, q_merged};

    fn p(s: &str) -> RationalPoly {
        RationalPoly::parse(s).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn complex_powers() {
        let (re, im) = expand_complex_powers(2);
        assert_eq!(re, p("t1^2 - t2^2"));
        assert_eq!(im, p("2 t1 t2"));
        let (re, im) = expand_complex_powers(4);
        assert_eq!(re, p("(t1^2-t2^2)^2 - (2 t1 t2)^2"));
        assert_eq!(im, p("2(t1^2-t2^2)(2 t1 t2)"));
        let (re, im) = expand_complex_powers(6);
        assert_eq!(re.at_zero(Var::T2).unwrap(), p("t1^6"));
        assert!(im.at_zero(Var::T2).unwrap().is_zero());
    }

    #[test]
    fn im_p_vanishes_exactly_on_the_real_axis() {
        let f = derive_im_p().unwrap();
        assert!(!f.is_zero());
        assert!(f.at_t2_zero().unwrap().cleared().is_zero());
    }

    #[test]
    fn im_p_has_expected_full_argument_terms() {
        let f = derive_im_p().unwrap();
        assert!(f.coeff(&SH_FULL).equivalent(&p("-t2")));
        assert!(f.coeff(&SIN_FULL).equivalent(&p("-t1")));
    }

    fn big(x: f64) -> BigReal {
        BigReal::from_ctx(x, &PrecisionContext::extended(50).unwrap())
    }

    fn physical(t1: f64, t2: f64, b: f64, eps: f64) -> (VarValues<BigReal>, BigReal, BigReal) {
        let (t1, t2, b, eps) = (big(t1), big(t2), big(b), big(eps));
        let x = t1.clone() * b.clone() * b.ratio(1, 2);
        let y = t2.clone() * b.clone() * b.ratio(1, 2);
        (VarValues::physical(&t1, &t2, &b, &eps), x, y)
    }

    fn rel(a: &BigReal, b: &BigReal) -> f64 {
        let d = (a.clone() - b.clone()).abs();
        (d / a.abs().max_of(&b.abs())).to_f64()
    }

    #[test]
    fn alpha_form_at_reference_point_matches_direct_f() {
        let (t2, alpha, b, eps) = (0.25, 52.0, 3.0, 0.1);
        let (vals, x, y) = physical(alpha * t2, t2, b, eps);
        let fa = substitute_alpha(&derive_im_p().unwrap()).unwrap();
        let lhs = fa.eval(&vals, &x, &y).unwrap();
        let ctx = PrecisionContext::extended(50).unwrap();
        let rhs = f_eval(&big(b), &big(eps), &big(alpha * t2), &big(t2), &ctx).unwrap().value;
        assert!(rel(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn alpha_one_specialisation() {
        let f = derive_im_p().unwrap();
        let fa = substitute_alpha(&f).unwrap();
        let (vals, x, y) = physical(0.7, 0.7, 2.0, 0.5);
        let vals = vals.set(Var::Alpha, big(1.0)).set(Var::InvAlphaNorm, big(0.5));
        let a = fa.eval(&vals, &x, &y).unwrap();
        let b = f.eval(&vals, &x, &y).unwrap();
        assert!(rel(&a, &b) < 1e-40);
    }

    #[test]
    fn merge_extracts_q_and_remainder() {
        let fa = substitute_alpha(&derive_im_p().unwrap()).unwrap();
        let m = merge_terms(&fa).unwrap();
        assert!(m.merged.equivalent(&fa));
        assert!(m.remainder_matches);
        // First group of Q: (b/2)² t2²/(α² + 1) · (−4α²) ch sin.
        let first = m.groups[&2].coeff(&CH_SIN);
        assert!(first.equivalent(&p("-4 alpha^2 (b/2)^2 t2^2 inv_alpha_norm")));
        assert_eq!(m.groups.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);

        // Remainder at σ = 3π/2 against α t2 sin(t2 b) + t2 sh(α t2 b).
        let (t2, alpha) = (0.25, 13.0);
        let b = 3.0 * PI / t2;
        let (vals, x, y) = physical(alpha * t2, t2, b, 1.0);
        let got = m.remainder.eval(&vals, &x, &y).unwrap();
        let want = -(alpha * t2 * (t2 * b).sin() + t2 * (alpha * t2 * b).sinh());
        assert!(rel(&got, &big(want)) < 1e-12);

        // Q against the independent merged-form evaluation.
        let (vals, x, y) = physical(alpha * t2, t2, 7.3, 1.0);
        let q = m.q.eval(&vals, &x, &y).unwrap();
        let want = q_merged(&big(7.3), &big(alpha * t2), &big(t2)).value;
        assert!(rel(&q, &want) < 1e-12);
    }

    #[test]
    fn merge_rejects_forms_without_eps() {
        let e = TrigHypExpr::term(CH_SIN, p("alpha"));
        assert!(matches!(merge_terms(&e), Err(AuditError::MergeMismatch(_))));
    }

    fn g_set() -> GPolySet {
        let fa = substitute_alpha(&derive_im_p().unwrap()).unwrap();
        q_in_sigma(&merge_terms(&fa).unwrap().q).unwrap()
    }

    #[test]
    fn g_polynomials() {
        let g = g_set();
        assert_eq!(
            g.g1,
            p("-4 alpha^2 (alpha^2+1)^2 sigma^2 + (12 alpha^3 - 4 alpha)(alpha^2+1) sigma + (-16 alpha^4 + 16 alpha^2)")
        );
        let [_, _, lead4] = sigma_coefficients(&g.g4).unwrap();
        assert_eq!(lead4, p("(2 alpha^3 - 2 alpha)(alpha^2+1)^2"));
    }

    #[test]
    fn assembled_q_matches_q_at_reference_point() {
        let fa = substitute_alpha(&derive_im_p().unwrap()).unwrap();
        let q = merge_terms(&fa).unwrap().q;
        let set = q_in_sigma(&q).unwrap();
        let (alpha, sigma) = (big(13.0), big(4.7));
        let assembled = set.assemble(&alpha, &sigma).unwrap();
        let qs = q_sigma_expr(&q).unwrap();
        let direct = qs
            .eval(&VarValues::sigma_form(&alpha, &sigma), &(alpha.clone() * sigma.clone()), &sigma)
            .unwrap();
        assert!(rel(&assembled, &direct) < 1e-12);
    }

    #[test]
    fn discriminants_factor() {
        let g = g_set();
        let d1 = discriminant(&g.g1).unwrap();
        assert_eq!(d1, &discriminant_common_factor() * &p("-7 alpha^4 + 10 alpha^2 + 1"));
        let d2 = discriminant(&g.g2).unwrap();
        assert_eq!(d2, &discriminant_common_factor() * &p("-alpha^6 + 8 alpha^4 - 5 alpha^2 + 2"));
        assert_eq!(discriminant(&g.g3).unwrap(), d1);
        assert_eq!(discriminant(&g.g4).unwrap(), d2);
    }

    #[test]
    fn printed_discriminant_inequality_holds_at_sample_alphas() {
        let printed = p("(12 alpha^3 - 4 alpha)^2 (alpha^2+1)^2 - 4(-4 alpha^2 (alpha^2+1)^2)(-16 alpha^4 + 16 alpha^2)");
        let d1 = discriminant(&g_set().g1).unwrap();
        assert_eq!(printed, d1);
        for a in [13, 20, 50] {
            let val = printed.eval_rational(&[(Var::Alpha, r(a))]).unwrap();
            assert!(val.is_negative());
        }
        let cof = p("-7 alpha^4 + 10 alpha^2 + 1").eval_rational(&[(Var::Alpha, r(13))]).unwrap();
        assert_eq!(cof, r(-198236));
    }

    #[test]
    fn sign_claims_hold_on_alpha_grid() {
        let g = g_set();
        for alpha in alpha_grid() {
            for rep in g_sign_analysis(&g, &alpha).unwrap() {
                assert!(rep.claim_holds, "{} at {alpha}", rep.name);
                assert!(rep.sweep.consistent(), "{} sweep at {alpha}", rep.name);
                assert!(rep.discriminant_at_alpha.is_negative());
                assert!(rep.discriminant_cofactor.is_some());
            }
        }
        let g4 = g.g4.eval_rational(&[(Var::Alpha, r(13)), (Var::Sigma, r(1))]).unwrap();
        assert!(g4.is_positive());
    }

    #[test]
    fn constant_sign_classification() {
        // (σ − 1)² touches zero at σ = 1, so no strict sign.
        assert_eq!(sign_on_positive_axis(&r(1), &r(-2), &r(1)), None);
        assert_eq!(sign_on_positive_axis(&r(1), &r(3), &r(2)), Some(1));
        assert_eq!(sign_on_positive_axis(&r(-1), &r(0), &r(-1)), Some(-1));
        assert_eq!(sign_on_positive_axis(&r(0), &r(2), &r(-1)), None);
        assert_eq!(sign_on_positive_axis(&r(0), &r(-2), &r(0)), Some(-1));
    }
}
