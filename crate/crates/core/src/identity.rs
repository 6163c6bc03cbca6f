//! Integration-by-parts identity for the reduced construction, and the split
//! `h = F + G/ε` of the norm integral.
//!
//! Multiplying `v'' = t²v − t³(y − b/2)²/(2ε) + t/ε` by `v̄`, integrating over
//! `[0, b]` and using the boundary symmetry gives
//!
//! `t²∫v v̄ + P − t² t t̄ (b/2)⁵/(10ε²) − (2/(3ε²)) t t̄ (b/2)³ + ∫v' v̄' = 0`,
//!
//! where `P` collects the hyperbolic parts of the weighted, mean and boundary
//! terms. Each closed form below is paired with the quadrature or direct
//! product it was derived from.

use crate::construction::{v, v_prime, ConstructionParams};
use crate::error::{AuditError, Result};
use crate::numerics::{integrate, Complex, QuadratureSpec, Real};
use crate::signs::forms::{cross_part, norm_part, norm_part_printed};

/// Shared pieces of the closed forms.
struct Pieces<R> {
    t: Complex<R>,
    norm: R,
    h: R,
    inv_eps: R,
    sh_bar: Complex<R>,
    ch_bar: Complex<R>,
    sh_t: Complex<R>,
}

fn pieces<R: Real>(p: &ConstructionParams<R>) -> Pieces<R> {
    let h = p.half_b();
    let tb = p.t.conj();
    let th = tb.scale(&h);
    Pieces {
        t: p.t.clone(),
        norm: p.t.norm_sqr(),
        inv_eps: p.inv_eps(),
        sh_bar: th.sinh(),
        ch_bar: th.cosh(),
        sh_t: p.t.scale(&h).sinh(),
        h,
    }
}

fn require_reduced<R: Real>(p: &ConstructionParams<R>) -> Result<()> {
    if !p.xi_value.re.is_zero() || !p.xi_value.im.is_zero() {
        return Err(AuditError::InvalidInput(
            "the identity audit needs the reduced construction (xi_value = 0)".into(),
        ));
    }
    Ok(())
}

/// Closed form of `−(1/2ε) t³ ∫₀^b (y − b/2)² v̄ dy`, split as
/// `(hyperbolic part, quintic part)`.
pub fn weighted_term_parts<R: Real>(p: &ConstructionParams<R>) -> (Complex<R>, Complex<R>) {
    let k = pieces(p);
    let n = k.norm.clone();
    let t2 = k.t.square();
    let t4 = t2.square();
    let t5 = t4.clone() * k.t.clone();
    let t6 = t4.clone() * t2.clone();
    let ie = k.inv_eps.clone();
    let two = n.lit(2.0);
    let hyp = -(t4.scale(&(ie.clone() * k.h.square() / n.clone())) * k.sh_bar.clone())
        + t5.scale(&(two.clone() * ie.clone() * k.h.clone() / n.square())) * k.ch_bar.clone()
        - t6.scale(&(two * ie.clone() / n.powi(3))) * k.sh_bar.clone();
    let quintic = -t2.scale(&(n * ie.square() * k.h.powi(5) * k.h.ratio(1, 10)));
    (hyp, quintic)
}

/// Closed form of `−(1/2ε) t³ ∫₀^b (y − b/2)² v̄ dy`.
pub fn weighted_term<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    let (hyp, quintic) = weighted_term_parts(p);
    hyp + quintic
}

/// `−(1/2ε) t³ ∫₀^b (y − b/2)² v̄ dy` by quadrature.
pub fn weighted_term_quadrature<R: Real>(
    p: &ConstructionParams<R>,
    quad: &QuadratureSpec,
) -> Result<Complex<R>> {
    let int = integrate(|y: &R| v(y, p).conj().scale(&p.shift(y).square()), &p.b.zero(), &p.b, quad)?;
    let t3 = p.t.powi(3);
    Ok(-(t3 * int.value).scale(&(p.inv_eps() * p.b.ratio(1, 2))))
}

/// Closed form of `(1/ε) t ∫₀^b v̄ dy = (2/ε)(t²/t t̄) sh(t̄ b/2) + t t̄ (b/2)³/(3ε²)`.
pub fn mean_term<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    let k = pieces(p);
    let hyp = k.t.square().scale(&(k.h.lit(2.0) * k.inv_eps.clone() / k.norm.clone())) * k.sh_bar;
    let cubic = k.norm.clone() * k.inv_eps.square() * k.h.powi(3) * k.h.ratio(1, 3);
    hyp + Complex::from_real(cubic)
}

/// `(1/ε) t ∫₀^b v̄ dy` by quadrature.
pub fn mean_term_quadrature<R: Real>(
    p: &ConstructionParams<R>,
    quad: &QuadratureSpec,
) -> Result<Complex<R>> {
    let int = integrate(|y: &R| v(y, p).conj(), &p.b.zero(), &p.b, quad)?;
    Ok((p.t.clone() * int.value).scale(&p.inv_eps()))
}

/// Expanded boundary term
/// `2[t ch(t̄b/2)sh(tb/2) + (t/ε)(b/2)ch(t̄b/2) + (t t̄/2ε)(b/2)² sh(tb/2) + t t̄ (b/2)³/(2ε²)]`.
pub fn boundary_term<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    let k = pieces(p);
    let half = k.h.ratio(1, 2);
    let sum = k.t.clone() * k.ch_bar.clone() * k.sh_t.clone()
        + (k.t.clone() * k.ch_bar).scale(&(k.inv_eps.clone() * k.h.clone()))
        + k.sh_t.scale(&(half.clone() * k.norm.clone() * k.inv_eps.clone() * k.h.square()))
        + Complex::from_real(half * k.norm * k.inv_eps.square() * k.h.powi(3));
    sum.scale(&k.h.lit(2.0))
}

/// `2 v̄(b) v'(b)` from the construction directly.
pub fn boundary_term_direct<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    (v(&p.b, p).conj() * v_prime(&p.b, p)).scale(&p.b.lit(2.0))
}

/// `P(b; ε)`: the hyperbolic parts of the weighted and mean terms minus the
/// non-cubic part of the boundary term.
pub fn p_value<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    let k = pieces(p);
    let n = k.norm.clone();
    let ie = k.inv_eps.clone();
    let two = n.lit(2.0);
    let (w_hyp, _) = weighted_term_parts(p);
    let m_hyp = k.t.square().scale(&(two.clone() * ie.clone() / n.clone())) * k.sh_bar.clone();
    let b_rest = (k.t.clone() * k.ch_bar.clone() * k.sh_t.clone()).scale(&two)
        + (k.t.clone() * k.ch_bar).scale(&(two * ie.clone() * k.h.clone()))
        + k.sh_t.scale(&(ie * n * k.h.square()));
    w_hyp + m_hyp - b_rest
}

/// `−t² t t̄ (b/2)⁵/(10ε²)`.
pub fn quintic_term<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    weighted_term_parts(p).1
}

/// `−(2/(3ε²)) t t̄ (b/2)³`.
pub fn cubic_term<R: Real>(p: &ConstructionParams<R>) -> Complex<R> {
    let h = p.half_b();
    Complex::from_real(-(p.t.norm_sqr() * p.inv_eps().square() * h.powi(3) * h.ratio(2, 3)))
}

/// Every term of the identity, with the quadrature or direct counterpart of
/// each closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct TermBreakdown<R> {
    /// `∫₀^b v v̄ dy`.
    pub norm_integral: R,
    /// `t² ∫ v v̄`.
    pub lhs_norm_term: Complex<R>,
    pub weighted_term: Complex<R>,
    pub weighted_term_quadrature: Complex<R>,
    pub mean_term: Complex<R>,
    pub mean_term_quadrature: Complex<R>,
    pub boundary_term: Complex<R>,
    pub boundary_term_direct: Complex<R>,
    /// `∫₀^b v' v̄' dy`.
    pub derivative_integral: R,
    pub p_value: Complex<R>,
    pub quintic_term: Complex<R>,
    pub cubic_term: Complex<R>,
    /// Left side of the identity; zero up to rounding and quadrature error.
    pub residual: Complex<R>,
    /// Sum of the moduli of the five summands of the identity.
    pub term_scale: R,
}

/// `∫₀^b |v|² dy` by quadrature.
pub fn norm_integral<R: Real>(p: &ConstructionParams<R>, quad: &QuadratureSpec) -> Result<R> {
    let int = integrate(|y: &R| Complex::from_real(v(y, p).norm_sqr()), &p.b.zero(), &p.b, quad)?;
    Ok(int.value.re)
}

/// Assembles the identity from quadratures and closed forms.
pub fn energy_identity<R: Real>(
    p: &ConstructionParams<R>,
    quad: &QuadratureSpec,
) -> Result<TermBreakdown<R>> {
    require_reduced(p)?;
    let nv = norm_integral(p, quad)?;
    let nd = integrate(
        |y: &R| Complex::from_real(v_prime(y, p).norm_sqr()),
        &p.b.zero(),
        &p.b,
        quad,
    )?
    .value
    .re;
    let lhs = p.t.square().scale(&nv);
    let pv = p_value(p);
    let quintic = quintic_term(p);
    let cubic = cubic_term(p);
    let residual = lhs.clone() + pv.clone() + quintic.clone() + cubic.clone() + Complex::from_real(nd.clone());
    let term_scale = lhs.abs() + pv.abs() + quintic.abs() + cubic.abs() + nd.abs();
    Ok(TermBreakdown {
        norm_integral: nv,
        lhs_norm_term: lhs,
        weighted_term: weighted_term(p),
        weighted_term_quadrature: weighted_term_quadrature(p, quad)?,
        mean_term: mean_term(p),
        mean_term_quadrature: mean_term_quadrature(p, quad)?,
        boundary_term: boundary_term(p),
        boundary_term_direct: boundary_term_direct(p),
        derivative_integral: nd,
        p_value: pv,
        quintic_term: quintic,
        cubic_term: cubic,
        residual,
        term_scale,
    })
}

/// The split `h(b, ε) = ∫₀^b v v̄ dy − t t̄ (b/2)⁵/(10ε²) = F(b) + G(b)/ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct HDecomposition<R> {
    pub h_quadrature: R,
    /// `F` from its closed form.
    pub norm_part: R,
    /// The printed variant of `F`, for comparison only.
    pub norm_part_printed: R,
    /// `G` by quadrature.
    pub cross_part: R,
    /// `F + G/ε`.
    pub h_closed: R,
    /// `t t̄ (b/2)⁵/(10ε²)` in closed form.
    pub quintic_closed: R,
    /// `∫₀^b t t̄ (y − b/2)⁴/(4ε²) dy` by quadrature.
    pub quintic_quadrature: R,
    /// `h` with the exponent 5 replaced by 2, the other printed variant.
    pub h_printed_exponent: R,
}

pub fn h_decompose<R: Real>(
    p: &ConstructionParams<R>,
    quad: &QuadratureSpec,
) -> Result<HDecomposition<R>> {
    require_reduced(p)?;
    let nv = norm_integral(p, quad)?;
    let n = p.t.norm_sqr();
    let h = p.half_b();
    let ie2 = p.inv_eps().square();
    let quintic_closed = n.clone() * ie2.clone() * h.powi(5) * h.ratio(1, 10);
    let (quintic_quadrature, _) = crate::numerics::integrate_real(
        |y: &R| n.clone() * ie2.clone() * p.shift(y).powi(4) * h.ratio(1, 4),
        &p.b.zero(),
        &p.b,
        quad,
    )?;
    let t1 = p.t.re.clone();
    let t2 = p.t.im.clone();
    let f = norm_part(&p.b, &t1, &t2);
    let fp = if t1.is_zero() || t2.is_zero() {
        f.clone()
    } else {
        norm_part_printed(&p.b, &t1, &t2)
    };
    let g = cross_part(&p.b, &t1, &t2, quad)?;
    let h_closed = f.clone() + g.clone() * p.inv_eps();
    let h_printed_exponent = nv.clone() - n * ie2 * h.square() * h.ratio(1, 10);
    Ok(HDecomposition {
        h_quadrature: nv - quintic_closed.clone(),
        norm_part: f,
        norm_part_printed: fp,
        cross_part: g,
        h_closed,
        quintic_closed,
        quintic_quadrature,
        h_printed_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{BigReal, PrecisionContext};
    use crate::signs::forms::f_direct;
    use proptest::prelude::*;

    fn params(t1: f64, t2: f64, b: f64, eps: f64) -> ConstructionParams<f64> {
        ConstructionParams::reduced(Complex::new(t1, t2), b, eps).unwrap()
    }

    fn rel(a: &Complex<f64>, b: &Complex<f64>) -> f64 {
        (a.clone() - b.clone()).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn weighted_term_real_t() {
        let p = params(2.0, 0.0, 2.0, 1.0);
        let q = weighted_term_quadrature(&p, &QuadratureSpec::default()).unwrap();
        assert!(rel(&weighted_term(&p), &q) < 1e-11);
    }

    #[test]
    fn closed_forms_at_reference_point() {
        let p = params(13.0, 0.25, 1.0, 0.1);
        let quad = QuadratureSpec::default();
        assert!(rel(&weighted_term(&p), &weighted_term_quadrature(&p, &quad).unwrap()) < 1e-10);
        assert!(rel(&mean_term(&p), &mean_term_quadrature(&p, &quad).unwrap()) < 1e-10);
        assert!(rel(&boundary_term(&p), &boundary_term_direct(&p)) < 1e-12);
    }

    #[test]
    fn weighted_term_homogeneity_in_eps() {
        let p = params(13.0, 0.25, 1.0, 0.1);
        let q = params(13.0, 0.25, 1.0, 0.2);
        let (h1, c1) = weighted_term_parts(&p);
        let (h2, c2) = weighted_term_parts(&q);
        assert!(rel(&h2.scale(&2.0), &h1) < 1e-14);
        assert!(rel(&c2.scale(&4.0), &c1) < 1e-14);
    }

    #[test]
    fn mean_term_limits() {
        let p = params(3.0, 0.0, 1.5, 0.4);
        assert_eq!(mean_term(&p).im, 0.0);
        let tiny = params(13.0, 0.25, 1e-9, 0.1);
        assert!(mean_term(&tiny).abs() < 1e-6);
    }

    #[test]
    fn boundary_term_scalar_and_limit() {
        // t = 2, b = 2, ε = 1: v(b) = ch 2 + 1 and v'(b) = 2 sh 2 + 2.
        let p = params(2.0, 0.0, 2.0, 1.0);
        let want = 2.0 * (2f64.cosh() + 1.0) * (2.0 * 2f64.sinh() + 2.0);
        let got = boundary_term(&p);
        assert!((got.re - want).abs() < 1e-12 * want && got.im == 0.0);
        // ε → ∞ leaves 2 ch(tb/2)·t sh(tb/2) = t sh(tb).
        let q = params(1.7, 0.0, 1.3, 1e15);
        let want = 1.7 * (1.7f64 * 1.3).sinh();
        assert!((boundary_term(&q).re - want).abs() < 1e-12 * want);
    }

    fn check_identity(p: &ConstructionParams<f64>, tol: f64) {
        let tb = energy_identity(p, &QuadratureSpec::default()).unwrap();
        assert!(tb.residual.abs() <= tol * tb.term_scale, "{:?}", tb.residual);
        assert!(tb.norm_integral > 0.0 && tb.derivative_integral > 0.0);
    }

    #[test]
    fn identity_holds_at_reference_points() {
        check_identity(&params(13.0, 0.25, 1.0, 0.1), 1e-10);
        check_identity(&params(14.134725, 0.0, 3.0, 0.5), 1e-10);
        check_identity(&params(0.001, 0.0, 1.0, 1.0), 1e-10);
    }

    #[test]
    fn identity_in_extended_precision() {
        let ctx = PrecisionContext::extended(50).unwrap();
        let r = |x: f64| BigReal::from_ctx(x, &ctx);
        let p = ConstructionParams::reduced(Complex::new(r(13.0), r(0.25)), r(1.0), r(0.1)).unwrap();
        let tb = energy_identity(&p, &QuadratureSpec::for_context(&ctx)).unwrap();
        assert!((tb.residual.abs() / tb.term_scale).to_f64() < 1e-30);
    }

    #[test]
    fn imaginary_part_of_p_is_f() {
        let p = params(13.0, 0.25, 2.0, 0.1);
        let f = f_direct(&2.0, &0.1, &13.0, &0.25);
        assert!((p_value(&p).im - f.value).abs() <= 1e-12 * f.scale);
    }

    #[test]
    fn decomposition_at_reference_point() {
        let p = params(13.0, 0.25, 2.0, 1.0);
        let d = h_decompose(&p, &QuadratureSpec::default()).unwrap();
        assert!((d.h_quadrature - d.h_closed).abs() <= 1e-10 * d.h_quadrature.abs().max(1.0));
        assert!((d.quintic_closed - d.quintic_quadrature).abs() <= 1e-12 * d.quintic_closed);
        assert!((d.norm_part - d.norm_part_printed).abs() > 1e-3);
    }

    #[test]
    fn decomposition_on_the_real_axis() {
        let p = params(7.0, 0.0, 1.5, 0.3);
        let d = h_decompose(&p, &QuadratureSpec::default()).unwrap();
        assert!((d.h_quadrature - d.h_closed).abs() <= 1e-10 * d.h_quadrature.abs().max(1.0));
    }

    #[test]
    fn rejects_full_construction() {
        let p = ConstructionParams::new(Complex::new(13.0, 0.25), 1.0, 0.1, Complex::new(0.1, 0.0)).unwrap();
        assert!(energy_identity(&p, &QuadratureSpec::default()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn identity_on_random_parameters(
            t1 in 6.5f64..30.0, t2 in -0.49f64..0.49,
            b in 0.1f64..10.0, eps in 0.01f64..10.0,
        ) {
            let p = params(t1, t2, b, eps);
            let quad = QuadratureSpec::default();
            let tb = energy_identity(&p, &quad).unwrap();
            prop_assert!(tb.residual.abs() <= 1e-9 * tb.term_scale);
            prop_assert!(rel(&tb.weighted_term, &tb.weighted_term_quadrature) <= 1e-10);
            prop_assert!(rel(&tb.mean_term, &tb.mean_term_quadrature) <= 1e-10);
            prop_assert!(rel(&tb.boundary_term, &tb.boundary_term_direct) <= 1e-10);
            // Imaginary part of the identity: f = −2 t1 t2 h.
            let d = h_decompose(&p, &quad).unwrap();
            let f = f_direct(&b, &eps, &t1, &t2);
            prop_assert!((f.value + 2.0 * t1 * t2 * d.h_quadrature).abs() <= 1e-9 * tb.term_scale);
            prop_assert!((d.h_quadrature - d.h_closed).abs() <= 1e-10 * d.h_quadrature.abs().max(1.0));
        }
    }
}
