//! Closed forms of `f`, `Q`, `F` and `G` used by the sign search.
//!
//! `f(b; ε)` is the imaginary part of `P(b; ε)`. It is evaluated two ways: the
//! expanded seven-term form in `t1, t2`, and the merged form
//! `(2/ε)Q(b) − [t1 sin(t2 b) + t2 sh(t1 b)]` with `t1 = α t2`.

use crate::error::{AuditError, Result};
use crate::numerics::{integrate_real, BigReal, PrecisionContext, QuadratureSpec, Real};

/// A value together with the sum of the absolute values of its summands.
#[derive(Clone, Debug, PartialEq)]
pub struct Summed<R> {
    pub value: R,
    pub scale: R,
}

impl<R: Real> Summed<R> {
    fn of(terms: &[R]) -> Self {
        let z = terms[0].zero();
        let value = terms.iter().fold(z.clone(), |acc, t| acc + t.clone());
        let scale = terms.iter().fold(z, |acc, t| acc + t.abs());
        Summed { value, scale }
    }
}

/// Real and imaginary parts of `t^2, t^4, t^5, t^6` and `t t̄`.
pub(crate) struct Powers<R> {
    pub re2: R,
    pub im2: R,
    pub norm: R,
    pub re4: R,
    pub im4: R,
    pub re5: R,
    pub im5: R,
    pub re6: R,
    pub im6: R,
}

pub(crate) fn powers<R: Real>(t1: &R, t2: &R) -> Powers<R> {
    let two = t1.lit(2.0);
    let re2 = t1.square() - t2.square();
    let im2 = two.clone() * t1.clone() * t2.clone();
    let norm = t1.square() + t2.square();
    let re4 = re2.square() - im2.square();
    let im4 = two.clone() * re2.clone() * im2.clone();
    let re5 = t1.clone() * re4.clone() - t2.clone() * im4.clone();
    let im5 = t1.clone() * im4.clone() + t2.clone() * re4.clone();
    let re6 = re2.clone() * re4.clone() - two * re2.clone() * im2.square();
    let im6 = im2.clone() * (t1.lit(3.0) * re2.square() - im2.square());
    Powers {
        re2,
        im2,
        norm,
        re4,
        im4,
        re5,
        im5,
        re6,
        im6,
    }
}

/// `sh, ch` of `t1 b/2` and `sin, cos` of `t2 b/2`.
pub(crate) struct HalfArgs<R> {
    pub sh: R,
    pub ch: R,
    pub sin: R,
    pub cos: R,
}

pub(crate) fn half_args<R: Real>(b: &R, t1: &R, t2: &R) -> HalfArgs<R> {
    let h = b.clone() * b.ratio(1, 2);
    let (sh, ch) = (t1.clone() * h.clone()).sinh_cosh();
    let (sin, cos) = (t2.clone() * h).sin_cos();
    HalfArgs { sh, ch, sin, cos }
}

/// `t1 sin(t2 b) + t2 sh(t1 b)`, the ε-free part of `f`.
pub fn remainder<R: Real>(b: &R, t1: &R, t2: &R) -> Summed<R> {
    Summed::of(&[
        t1.clone() * (t2.clone() * b.clone()).sin(),
        t2.clone() * (t1.clone() * b.clone()).sinh(),
    ])
}

/// `f(b; ε)` from the seven-term expansion in `t1, t2`.
pub fn f_direct<R: Real>(b: &R, eps: &R, t1: &R, t2: &R) -> Summed<R> {
    let p = powers(t1, t2);
    let a = half_args(b, t1, t2);
    let h = b.clone() * b.ratio(1, 2);
    let ie = eps.one() / eps.clone();
    let two = b.lit(2.0);
    let cs = a.ch.clone() * a.sin.clone();
    let sc = a.sh.clone() * a.cos.clone();
    let ss = a.sh.clone() * a.sin.clone();
    let cc = a.ch.clone() * a.cos.clone();
    let n = p.norm.clone();
    let r = remainder(b, t1, t2);
    let terms = [
        -(ie.clone() * h.square() / n.clone())
            * (-(p.re4.clone() * cs.clone()) + p.im4.clone() * sc.clone()),
        two.clone() * ie.clone() * h.clone() / n.square()
            * (-(p.re5.clone() * ss.clone()) + p.im5.clone() * cc.clone()),
        -(two.clone() * ie.clone() / n.powi(3))
            * (-(p.re6.clone() * cs.clone()) + p.im6.clone() * sc.clone()),
        two.clone() * ie.clone() / n.clone()
            * (-(p.re2.clone() * cs.clone()) + p.im2.clone() * sc),
        -r.value,
        -(two * ie.clone() * h.clone()) * (-(t1.clone() * ss) + t2.clone() * cc),
        -(ie * h.square() * n * cs),
    ];
    Summed::of(&terms)
}

/// The ε-leading part `Q(b)` in the merged form, with `α = t1/t2`.
///
/// Requires `t2 != 0`.
pub fn q_merged<R: Real>(b: &R, t1: &R, t2: &R) -> Summed<R> {
    let al = t1.clone() / t2.clone();
    let a2 = al.square();
    let pn = a2.clone() + al.one();
    let a = half_args(b, t1, t2);
    let h = b.clone() * b.ratio(1, 2);
    let l = |x: f64| al.lit(x);
    let cs = a.ch.clone() * a.sin.clone();
    let sc = a.sh.clone() * a.cos.clone();
    let ss = a.sh * a.sin;
    let cc = a.ch * a.cos;
    let a3 = a2.clone() * al.clone();
    let a4 = a2.square();
    let a5 = a4.clone() * al.clone();
    let k1 = h.square() * t2.square() / pn.clone();
    let k2 = h * t2.clone() / pn.square();
    let k3 = al.one() / pn.powi(3);
    Summed::of(&[
        k1.clone() * (l(-4.0) * a2.clone()) * cs.clone(),
        k1 * (l(-2.0) * a3.clone() + l(2.0) * al.clone()) * sc.clone(),
        k2.clone() * (l(12.0) * a3.clone() - l(4.0) * al.clone()) * ss,
        k2 * (l(4.0) * a4.clone() - l(12.0) * a2.clone()) * cc,
        k3.clone() * (l(-16.0) * a4.clone() + l(16.0) * a2) * cs,
        k3 * (l(-4.0) * a5 + l(24.0) * a3 - l(4.0) * al) * sc,
    ])
}

/// `f(b; ε)` assembled as `(2/ε)Q(b) − [t1 sin(t2 b) + t2 sh(t1 b)]`.
pub fn f_split<R: Real>(b: &R, eps: &R, t1: &R, t2: &R) -> Summed<R> {
    let q = q_merged(b, t1, t2);
    let r = remainder(b, t1, t2);
    let k = b.lit(2.0) / eps.clone();
    Summed {
        value: k.clone() * q.value - r.value,
        scale: k * q.scale + r.scale,
    }
}

/// Evaluates `f(b; ε)` in both forms and returns the expanded value.
///
/// Fails with [`AuditError::FormMismatch`] when the forms differ by more than
/// `ctx.rel_tol` times the combined term scale.
pub fn f_eval<R: Real>(b: &R, eps: &R, t1: &R, t2: &R, ctx: &PrecisionContext) -> Result<Summed<R>> {
    if b.is_sign_negative() || !eps.is_finite() || eps.is_sign_negative() || eps.is_zero() {
        return Err(AuditError::InvalidInput(format!(
            "f needs b >= 0 and eps > 0, got b = {}, eps = {}",
            b.to_sci(6),
            eps.to_sci(6)
        )));
    }
    let direct = f_direct(b, eps, t1, t2);
    if t2.is_zero() {
        return Ok(direct);
    }
    let split = f_split(b, eps, t1, t2);
    let tol = b.lit(ctx.rel_tol) * (direct.scale.clone() + split.scale.clone()) + b.lit(ctx.abs_tol) * b.epsilon();
    if (direct.value.clone() - split.value.clone()).abs() > tol {
        return Err(AuditError::FormMismatch {
            direct: direct.value.to_sci(17),
            split: split.value.to_sci(17),
        });
    }
    Ok(direct)
}

/// `x · e^{exponent}`, kept apart so huge values stay representable.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpScaled<R> {
    pub mantissa: R,
    pub exponent: R,
}

impl<R: Real> ExpScaled<R> {
    pub fn sign(&self) -> i32 {
        self.mantissa.sign()
    }

    pub fn ln_abs(&self) -> f64 {
        self.mantissa.ln_abs() + self.exponent.to_f64()
    }

    /// Collapsed value; may overflow in binary64.
    pub fn value(&self) -> R {
        self.mantissa.clone() * self.exponent.exp()
    }
}

/// The coefficient polynomials `g1..g4` of the exponential split of `Q`, at `(σ, α)`.
pub fn g_values<R: Real>(sigma: &R, alpha: &R) -> [R; 4] {
    let l = |x: f64| alpha.lit(x);
    let a = alpha.clone();
    let a2 = a.square();
    let a3 = a2.clone() * a.clone();
    let a4 = a2.square();
    let a5 = a4.clone() * a.clone();
    let p = a2.clone() + a.one();
    let p2 = p.square();
    let s = sigma.clone();
    let s2 = s.square();
    let quad = |c2: R, c1: R, c0: R| c2 * s2.clone() + c1 * s.clone() + c0;
    let lead_even = l(-4.0) * a2.clone() * p2.clone();
    let lead_odd = (l(-2.0) * a3.clone() + l(2.0) * a.clone()) * p2;
    let mid_s = (l(12.0) * a3.clone() - l(4.0) * a.clone()) * p.clone();
    let mid_c = (l(4.0) * a4.clone() - l(12.0) * a2.clone()) * p;
    let c_s = l(-16.0) * a4 + l(16.0) * a2;
    let c_c = l(-4.0) * a5 + l(24.0) * a3 - l(4.0) * a;
    [
        quad(lead_even.clone(), mid_s.clone(), c_s.clone()),
        quad(lead_odd.clone(), mid_c.clone(), c_c.clone()),
        quad(lead_even, -mid_s, c_s),
        quad(-lead_odd, mid_c, -c_c),
    ]
}

/// `Q` at `b = 2σ/t2`, as `e^{ασ}/2 [g1 sin σ + g2 cos σ] + e^{−ασ}/2 [g3 sin σ + g4 cos σ]`
/// over `(α² + 1)³`.
///
/// The factor `e^{ασ}` is returned separately; only `e^{−2ασ}` is formed.
pub fn q_eval<R: Real>(sigma: &R, alpha: &R) -> ExpScaled<R> {
    let [g1, g2, g3, g4] = g_values(sigma, alpha);
    let (s, c) = sigma.sin_cos();
    let grow = g1 * s.clone() + g2 * c.clone();
    let decay = g3 * s + g4 * c;
    let exponent = alpha.clone() * sigma.clone();
    let shrink = (-(exponent.clone() + exponent.clone())).exp();
    let p = alpha.square() + alpha.one();
    let mantissa = (grow + shrink * decay) / (alpha.lit(2.0) * p.powi(3));
    ExpScaled { mantissa, exponent }
}

/// [`q_eval`] from binary64 inputs, switching to multi-precision when `ασ` is large.
pub fn q_eval_auto(sigma: f64, alpha: f64, ctx: &PrecisionContext) -> ExpScaled<f64> {
    let work = ctx.promoted_for(alpha * sigma);
    if work.is_extended() {
        let q = q_eval(&BigReal::from_ctx(sigma, &work), &BigReal::from_ctx(alpha, &work));
        ExpScaled {
            mantissa: q.mantissa.to_f64(),
            exponent: q.exponent.to_f64(),
        }
    } else {
        q_eval(&sigma, &alpha)
    }
}

/// Endpoints `b1 = 3π/t2` and `b2 = 5π/t2`.
pub fn b1_b2<R: Real>(t2: &R, ctx: &PrecisionContext) -> Result<(R, R)> {
    if t2.to_f64() <= ctx.abs_tol {
        return Err(AuditError::DegenerateT2);
    }
    let pi = t2.pi();
    Ok((t2.lit(3.0) * pi.clone() / t2.clone(), t2.lit(5.0) * pi / t2.clone()))
}

/// `F(b) = ∫₀^b cos²[t2(y − b/2)] ch²[t1(y − b/2)] + sin²[…] sh²[…] dy`
/// in closed form, `½[sh(t1 b)/t1 + sin(t2 b)/t2]`.
pub fn norm_part<R: Real>(b: &R, t1: &R, t2: &R) -> R {
    let hyp = if t1.is_zero() {
        b.clone()
    } else {
        (t1.clone() * b.clone()).sinh() / t1.clone()
    };
    let trig = if t2.is_zero() {
        b.clone()
    } else {
        (t2.clone() * b.clone()).sin() / t2.clone()
    };
    b.ratio(1, 2) * (hyp + trig)
}

/// The printed variant `¼[(e^{αt2 b} − e^{−αt2 b})/(α t2) + sin(t2 b)/t2]`,
/// kept to report how far it is from [`norm_part`].
pub fn norm_part_printed<R: Real>(b: &R, t1: &R, t2: &R) -> R {
    let x = t1.clone() * b.clone();
    let hyp = (x.exp() - (-x).exp()) / t1.clone();
    let trig = (t2.clone() * b.clone()).sin() / t2.clone();
    b.ratio(1, 4) * (hyp + trig)
}

/// `G(b) = t1∫cos[t2 u] ch[t1 u] u² dy + t2∫sin[t2 u] sh[t1 u] u² dy`, `u = y − b/2`,
/// by quadrature. The integrand is even in `u`, so twice the half range is used.
pub fn cross_part<R: Real>(b: &R, t1: &R, t2: &R, quad: &QuadratureSpec) -> Result<R> {
    let h = b.clone() * b.ratio(1, 2);
    let (val, _) = integrate_real(
        |u: &R| {
            let (sh, ch) = (t1.clone() * u.clone()).sinh_cosh();
            let (s, c) = (t2.clone() * u.clone()).sin_cos();
            (t1.clone() * c * ch + t2.clone() * s * sh) * u.square()
        },
        &b.zero(),
        &h,
        quad,
    )?;
    Ok(val * b.lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Complex;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ctx() -> PrecisionContext {
        PrecisionContext::binary64()
    }

    #[test]
    fn f_vanishes_at_zero_width() {
        let f = f_eval(&0.0, &0.3, &13.0, &0.25, &ctx()).unwrap();
        assert!(f.value.abs() < ctx().abs_tol);
    }

    #[test]
    fn f_vanishes_on_the_real_axis() {
        for k in 1..=100 {
            let b = 0.1 * k as f64;
            let f = f_eval(&b, &0.7, &14.134725, &0.0, &ctx()).unwrap();
            assert!(f.value.abs() <= ctx().abs_tol * f.scale.max(1.0), "b = {b}: {}", f.value);
        }
    }

    #[test]
    fn expanded_and_merged_forms_agree() {
        let d = f_direct(&2.0, &0.1, &13.0, &0.25);
        let s = f_split(&2.0, &0.1, &13.0, &0.25);
        assert!((d.value - s.value).abs() <= 1e-12 * d.value.abs());
    }

    #[test]
    fn q_signs_at_the_two_endpoints() {
        for alpha in [12.001, 13.0, 20.0, 52.0, 100.0] {
            assert_eq!(q_eval_auto(1.5 * PI, alpha, &ctx()).sign(), 1, "alpha {alpha}");
            assert_eq!(q_eval_auto(2.5 * PI, alpha, &ctx()).sign(), -1, "alpha {alpha}");
        }
    }

    #[test]
    fn q_parametrisations_agree() {
        let (alpha, sigma) = (13.0, 1.5 * PI);
        for t2 in [0.1, 0.3, 0.45] {
            let b = 2.0 * sigma / t2;
            let direct = q_merged(&b, &(alpha * t2), &t2).value;
            let split = q_eval(&sigma, &alpha).value();
            assert!((direct - split).abs() <= 1e-12 * direct.abs(), "{direct} vs {split}");
        }
    }

    #[test]
    fn q_eval_extended_matches_binary64() {
        let a = q_eval(&(2.5 * PI), &20.0);
        let b = q_eval_auto(2.5 * PI, 100.0, &ctx());
        assert!(b.exponent > 300.0);
        assert!(a.sign() == b.sign());
        let direct = q_eval(&(2.5 * PI), &100.0);
        assert!((direct.mantissa - b.mantissa).abs() <= 1e-12 * b.mantissa.abs());
    }

    #[test]
    fn g_polynomials_split_q() {
        // Rebuild Q from the sh/ch grouping and compare with the exponential split.
        let (alpha, sigma) = (13.0f64, 4.7f64);
        let [g1, g2, g3, g4] = g_values(&sigma, &alpha);
        let e = (alpha * sigma).exp();
        let p3 = (alpha * alpha + 1.0).powi(3);
        let split = (e / 2.0 * (g1 * sigma.sin() + g2 * sigma.cos())
            + 1.0 / e / 2.0 * (g3 * sigma.sin() + g4 * sigma.cos()))
            / p3;
        let t2 = 0.2;
        let direct = q_merged(&(2.0 * sigma / t2), &(alpha * t2), &t2).value;
        assert!((split - direct).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn endpoints() {
        let (b1, b2) = b1_b2(&0.25, &ctx()).unwrap();
        assert!((b1 - 12.0 * PI).abs() < 1e-12 && (b2 - 20.0 * PI).abs() < 1e-12);
        let (b1, b2) = b1_b2(&0.5, &ctx()).unwrap();
        assert!((b1 - 6.0 * PI).abs() < 1e-12 && (b2 - 10.0 * PI).abs() < 1e-12);
        assert_eq!(b1_b2(&0.0, &ctx()), Err(AuditError::DegenerateT2));
    }

    #[test]
    fn norm_part_matches_quadrature() {
        let quad = QuadratureSpec::default();
        for (b, t1, t2) in [(2.0, 13.0, 0.25), (5.0, 3.0, 0.4), (0.7, 6.5, -0.3)] {
            let (q, _) = integrate_real(
                |y: &f64| {
                    let u = y - b / 2.0;
                    (t2 * u).cos().powi(2) * (t1 * u).cosh().powi(2)
                        + (t2 * u).sin().powi(2) * (t1 * u).sinh().powi(2)
                },
                &0.0,
                &b,
                &quad,
            )
            .unwrap();
            let f = norm_part(&b, &t1, &t2);
            assert!((f - q).abs() <= 1e-10 * q.abs(), "{f} vs {q}");
            // The printed variant misses half of the trigonometric term.
            let printed = norm_part_printed(&b, &t1, &t2);
            let gap = f - printed - 0.25 * (t2 * b).sin() / t2;
            assert!(gap.abs() <= 1e-12 * f.abs());
        }
    }

    #[test]
    fn norm_part_lower_bound_and_limit() {
        let t2 = 0.25;
        let b = 12.0 * PI;
        let f = norm_part(&b, &(52.0 * t2), &t2);
        assert!(f > 0.25 * (b - 1.0 / t2) && 0.25 * (b - 1.0 / t2) > 0.0);
        let small = norm_part(&1e-9, &13.0, &t2);
        assert!(small.abs() < 2e-9);
    }

    fn cross_part_closed(b: f64, t1: f64, t2: f64) -> f64 {
        // Re(t̄ ∫ ch(t u) u² du) over [-b/2, b/2].
        let t = Complex::new(t1, t2);
        let h = b / 2.0;
        let th = t.scale(&h);
        let inner = th.sinh().scale(&(h * h)) / t.clone()
            - th.cosh().scale(&(2.0 * h)) / t.square()
            + th.sinh().scale(&2.0) / t.powi(3);
        (t.conj() * inner.scale(&2.0)).re
    }

    #[test]
    fn cross_part_matches_antiderivative() {
        let quad = QuadratureSpec::default();
        for (b, t1, t2) in [(2.0, 13.0, 0.25), (10.0, 7.0, 0.1), (0.5, 20.0, -0.4)] {
            let g = cross_part(&b, &t1, &t2, &quad).unwrap();
            let c = cross_part_closed(b, t1, t2);
            assert!((g - c).abs() <= 1e-10 * c.abs(), "{g} vs {c}");
        }
    }

    #[test]
    fn cross_part_on_the_real_axis_is_positive() {
        let quad = QuadratureSpec::default();
        let g = cross_part(&3.0, &7.0, &0.0, &quad).unwrap();
        assert!(g > 0.0);
    }

    #[test]
    fn cross_part_is_odd_in_t1() {
        let quad = QuadratureSpec::default();
        for k in 0..10 {
            let b = 0.5 + 0.7 * k as f64;
            let t1 = 6.5 + k as f64;
            let t2 = 0.05 + 0.04 * k as f64;
            let g = cross_part(&b, &t1, &t2, &quad).unwrap();
            let m = cross_part(&b, &-t1, &t2, &quad).unwrap();
            assert!((g + m).abs() <= 1e-12 * g.abs());
        }
    }

    proptest! {
        #[test]
        fn cross_form_agreement(
            t1 in 6.5f64..30.0, t2 in 0.01f64..0.5,
            bt in 0.01f64..1.0, eps in 0.01f64..10.0,
        ) {
            // Keep t1·b inside binary64 range.
            let b = bt * (600.0 / t1).min(100.0);
            let d = f_direct(&b, &eps, &t1, &t2);
            let s = f_split(&b, &eps, &t1, &t2);
            prop_assert!((d.value - s.value).abs() <= 1e-11 * (1.0 + d.value.abs()),
                "{} vs {} (scale {})", d.value, s.value, d.scale);
        }
    }
}
