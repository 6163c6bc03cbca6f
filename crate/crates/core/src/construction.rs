//! The auxiliary function `v(y; t, ε) = ch[t(y − b/2)] + t(y − b/2)²/(2ε) + Ξ·y`
//! on `[0, b]`, its derivatives and its second-order ODE residual.
//!
//! Passing `xi_value = 0` selects the reduced form used by the identity audit,
//! which is valid at any complex `t`.

use crate::error::{AuditError, Result};
use crate::numerics::{Complex, Real};

/// Parameters of the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionParams<R> {
    pub t: Complex<R>,
    pub b: R,
    pub eps: R,
    pub xi_value: Complex<R>,
}

impl<R: Real> ConstructionParams<R> {
    pub fn new(t: Complex<R>, b: R, eps: R, xi_value: Complex<R>) -> Result<Self> {
        if !(b.is_finite() && b > b.zero()) {
            return Err(AuditError::InvalidInput(format!(
                "b must be positive, got {}",
                b.to_sci(6)
            )));
        }
        if !(eps.is_finite() && eps > eps.zero()) {
            return Err(AuditError::InvalidInput(format!(
                "eps must be positive, got {}",
                eps.to_sci(6)
            )));
        }
        Ok(ConstructionParams { t, b, eps, xi_value })
    }

    /// Reduced form with `Ξ` replaced by zero.
    pub fn reduced(t: Complex<R>, b: R, eps: R) -> Result<Self> {
        let zero = Complex::zero_like(&b);
        Self::new(t, b, eps, zero)
    }

    pub fn half_b(&self) -> R {
        self.b.clone() * self.b.ratio(1, 2)
    }

    /// `y − b/2`.
    pub fn shift(&self, y: &R) -> R {
        y.clone() - self.half_b()
    }

    pub fn inv_eps(&self) -> R {
        self.eps.one() / self.eps.clone()
    }

    /// Same construction at `conj(t)` with `conj(Ξ)`.
    pub fn conjugate(&self) -> Self {
        ConstructionParams {
            t: self.t.conj(),
            b: self.b.clone(),
            eps: self.eps.clone(),
            xi_value: self.xi_value.conj(),
        }
    }
}

/// `v(y)`.
pub fn v<R: Real>(y: &R, p: &ConstructionParams<R>) -> Complex<R> {
    let s = p.shift(y);
    let ch = p.t.scale(&s).cosh();
    let quad = p.t.scale(&(s.square() * p.inv_eps() * y.ratio(1, 2)));
    ch + quad + p.xi_value.scale(y)
}

/// `v'(y) = t sh[t(y − b/2)] + t(y − b/2)/ε + Ξ`.
pub fn v_prime<R: Real>(y: &R, p: &ConstructionParams<R>) -> Complex<R> {
    let s = p.shift(y);
    let sh = p.t.clone() * p.t.scale(&s).sinh();
    sh + p.t.scale(&(s * p.inv_eps())) + p.xi_value.clone()
}

/// `v''(y) = t² ch[t(y − b/2)] + t/ε`, differentiated directly from `v'`.
pub fn v_second<R: Real>(y: &R, p: &ConstructionParams<R>) -> Complex<R> {
    let s = p.shift(y);
    p.t.square() * p.t.scale(&s).cosh() + p.t.scale(&p.inv_eps())
}

/// `v'' − [t²v − t³(y − b/2)²/(2ε) − t²Ξy + t/ε]`, identically zero.
pub fn ode_residual<R: Real>(y: &R, p: &ConstructionParams<R>) -> Complex<R> {
    let s = p.shift(y);
    let t2 = p.t.square();
    let t3 = t2.clone() * p.t.clone();
    let rhs = t2.clone() * v(y, p) - t3.scale(&(s.square() * p.inv_eps() * y.ratio(1, 2)))
        - (t2 * p.xi_value.clone()).scale(y)
        + p.t.scale(&p.inv_eps());
    v_second(y, p) - rhs
}

/// Magnitude scale for judging [`ode_residual`]: `max(1, |t² v|)`.
pub fn ode_residual_scale<R: Real>(y: &R, p: &ConstructionParams<R>) -> R {
    let tv = (p.t.square() * v(y, p)).abs();
    tv.max_of(&y.one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{BigReal, PrecisionContext};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn params(t: Complex<f64>, b: f64, eps: f64) -> ConstructionParams<f64> {
        ConstructionParams::reduced(t, b, eps).unwrap()
    }

    #[test]
    fn midpoint_and_scalar_values() {
        let p = params(c(13.0, 0.25), 1.0, 0.1);
        assert_eq!(v(&0.5, &p), c(1.0, 0.0));
        assert_eq!(v_prime(&0.5, &p), c(0.0, 0.0));
        // t = 2, b = 2, eps = 1, y = 0: ch(-2) + (1/2)·2·1 = ch 2 + 1.
        let q = params(c(2.0, 0.0), 2.0, 1.0);
        let val = v(&0.0, &q);
        assert!((val.re - (2f64.cosh() + 1.0)).abs() < 1e-14);
        assert!((val.re - 4.762_195_691_083_631).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(ConstructionParams::reduced(c(1.0, 0.0), 0.0, 1.0).is_err());
        assert!(ConstructionParams::reduced(c(1.0, 0.0), 1.0, -1.0).is_err());
    }

    #[test]
    fn derivative_matches_extended_finite_difference() {
        let ctx = PrecisionContext::extended(50).unwrap();
        let r = |x: f64| BigReal::from_ctx(x, &ctx);
        let p = ConstructionParams::reduced(Complex::new(r(13.0), r(0.25)), r(1.0), r(0.1)).unwrap();
        let y = r(0.3);
        let h = r(1e-6);
        let fd = (v(&(y.clone() + h.clone()), &p) - v(&(y.clone() - h.clone()), &p))
            .scale(&(r(0.5) / h.clone()));
        let exact = v_prime(&y, &p);
        assert!(((fd - exact.clone()).abs() / exact.abs()).to_f64() < 1e-8);
        let fd2 = (v(&(y.clone() + h.clone()), &p) + v(&(y.clone() - h.clone()), &p)
            - v(&y, &p).scale(&r(2.0)))
        .scale(&(r(1.0) / h.square()));
        let exact2 = v_second(&y, &p);
        assert!(((fd2 - exact2.clone()).abs() / exact2.abs()).to_f64() < 1e-6);
    }

    #[test]
    fn second_difference_in_binary64() {
        let p = params(c(3.0, 0.2), 2.0, 0.7);
        let y = 0.7;
        let h = 1e-4;
        let fd2 = (v(&(y + h), &p) + v(&(y - h), &p) - v(&y, &p).scale(&2.0)).scale(&(1.0 / (h * h)));
        let exact = v_second(&y, &p);
        assert!((fd2 - exact.clone()).abs() / exact.abs() < 1e-6);
    }

    #[test]
    fn residual_with_synthetic_xi() {
        let p = ConstructionParams::new(c(5.0, -0.3), 2.5, 0.4, c(0.3, 0.1)).unwrap();
        for k in 0..=20 {
            let y = 2.5 * k as f64 / 20.0;
            assert!(ode_residual(&y, &p).abs() <= 1e-12 * ode_residual_scale(&y, &p));
        }
    }

    proptest! {
        #[test]
        fn boundary_symmetry(
            t1 in -30.0f64..30.0, t2 in -0.5f64..0.5,
            b in 0.1f64..6.0, eps in 0.01f64..10.0,
        ) {
            let p = params(c(t1, t2), b, eps);
            let scale = v(&0.0, &p).abs().max(1.0);
            prop_assert!((v(&0.0, &p) - v(&b, &p)).abs() <= 1e-13 * scale);
            let dscale = v_prime(&0.0, &p).abs().max(1.0);
            prop_assert!((v_prime(&0.0, &p) + v_prime(&b, &p)).abs() <= 1e-13 * dscale);
        }

        #[test]
        fn conjugation(
            t1 in -20.0f64..20.0, t2 in -0.5f64..0.5,
            b in 0.1f64..5.0, eps in 0.01f64..10.0, y in 0.0f64..1.0,
            x1 in -1.0f64..1.0, x2 in -1.0f64..1.0,
        ) {
            let p = ConstructionParams::new(c(t1, t2), b, eps, c(x1, x2)).unwrap();
            let y = y * b;
            let lhs = v(&y, &p.conjugate());
            let rhs = v(&y, &p).conj();
            prop_assert!((lhs - rhs).abs() <= 1e-15 * v(&y, &p).abs().max(1.0));
        }

        #[test]
        fn residual_vanishes_on_grid(
            t1 in -30.0f64..30.0, t2 in -0.5f64..0.5,
            b in 0.1f64..4.0, eps in 0.01f64..10.0,
            x1 in -1.0f64..1.0, x2 in -1.0f64..1.0,
        ) {
            let p = ConstructionParams::new(c(t1, t2), b, eps, c(x1, x2)).unwrap();
            for k in 0..100 {
                let y = b * k as f64 / 99.0;
                let scale = ode_residual_scale(&y, &p) + (c(t1, t2).square().abs() * (x1.abs() + x2.abs()) * b);
                prop_assert!(ode_residual(&y, &p).abs() <= 1e-12 * scale);
            }
        }
    }
}
