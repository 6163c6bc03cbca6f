//! Adaptive composite Gauss–Legendre quadrature for complex-valued integrands.
//!
//! Each panel is integrated once whole and once as two halves; the difference
//! (plus a roundoff floor) is its error estimate. The worst panel is split
//! until the total estimate meets `max(target_abs, target_rel·|I|)`.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::complex::Complex;
use super::precision::PrecisionContext;
use super::real::Real;
use crate::error::{AuditError, Result};

/// Quadrature controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub max_panels: usize,
    pub target_abs: f64,
    pub target_rel: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 20,
            max_panels: 4000,
            target_abs: 1e-300,
            target_rel: 1e-13,
        }
    }
}

impl QuadratureSpec {
    /// Targets matched to the digits carried by `ctx`.
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        if ctx.is_extended() {
            let digits = ctx.digits() as i32;
            // More nodes per panel keep the panel count flat as digits grow.
            QuadratureSpec {
                nodes_per_panel: (digits as usize / 2).max(30),
                max_panels: 8000,
                target_abs: 1e-300,
                target_rel: 10f64.powi(-(digits - 8).clamp(13, 300)),
            }
        } else {
            QuadratureSpec::default()
        }
    }

    pub fn with_rel(mut self, rel: f64) -> Self {
        self.target_rel = rel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 8 {
            return Err(AuditError::InvalidInput(format!(
                "quadrature needs at least 8 nodes per panel, got {}",
                self.nodes_per_panel
            )));
        }
        if self.max_panels == 0 {
            return Err(AuditError::InvalidInput("max_panels must be positive".into()));
        }
        if !(self.target_abs >= 0.0 && self.target_rel >= 0.0)
            || (self.target_abs == 0.0 && self.target_rel == 0.0)
        {
            return Err(AuditError::InvalidInput(
                "quadrature targets must be non-negative and not both zero".into(),
            ));
        }
        Ok(())
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Integral<R> {
    pub value: Complex<R>,
    pub error_estimate: R,
    pub panels: usize,
}

type NodeCache = Mutex<HashMap<(TypeId, usize, u32), Arc<dyn Any + Send + Sync>>>;

fn node_cache() -> &'static NodeCache {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [-1, 1] at the precision of `like`.
///
/// Only the non-negative half is returned as `(x, w)`; nodes come in ± pairs
/// and an odd count includes `x = 0` first.
pub fn gauss_legendre<R: Real>(n: usize, like: &R) -> Arc<Vec<(R, R)>> {
    let key = (TypeId::of::<R>(), n, like.digits());
    if let Some(hit) = node_cache().lock().expect("node cache").get(&key) {
        if let Ok(v) = Arc::clone(hit).downcast::<Vec<(R, R)>>() {
            return v;
        }
    }
    let nodes = Arc::new(compute_nodes(n, like));
    node_cache()
        .lock()
        .expect("node cache")
        .insert(key, nodes.clone() as Arc<dyn Any + Send + Sync>);
    nodes
}

fn compute_nodes<R: Real>(n: usize, like: &R) -> Vec<(R, R)> {
    let one = like.one();
    let pi = like.pi();
    let tol = like.epsilon() * like.lit(8.0);
    let mut out = Vec::with_capacity(n / 2 + 1);
    // Roots ordered from the largest; keep the non-negative ones.
    for i in 1..=n.div_ceil(2) {
        let guess = (pi.clone() * like.ratio(4 * i as i64 - 1, 4 * n as i64 + 2)).cos();
        let mut x = guess;
        let mut dp = one.clone();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, &x);
            dp = d.clone();
            let dx = p / d;
            x = x - dx.clone();
            if dx.abs() <= tol.clone() * x.abs().max_of(&one) {
                let (_, d) = legendre_with_derivative(n, &x);
                dp = d;
                break;
            }
        }
        let x = if x.abs() < tol { like.zero() } else { x };
        let w = like.lit(2.0) / ((one.clone() - x.square()) * dp.square());
        out.push((x, w));
    }
    out.reverse();
    out
}

fn legendre_with_derivative<R: Real>(n: usize, x: &R) -> (R, R) {
    let one = x.one();
    let mut p0 = one.clone();
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as i64;
        let p2 = (x.ratio(2 * k - 1, k) * x.clone() * p1.clone()) - x.ratio(k - 1, k) * p0;
        p0 = p1;
        p1 = p2;
    }
    let n_r = x.lit(n as f64);
    let d = n_r * (x.clone() * p1.clone() - p0) / (x.square() - one);
    (p1, d)
}

const INITIAL_PANELS: usize = 4;
/// Multiple of `eps · Σ|w f|` treated as pure rounding noise in a panel estimate.
const ROUNDOFF_FACTOR: f64 = 64.0;

struct Panel<R> {
    a: R,
    b: R,
    left: Complex<R>,
    right: Complex<R>,
    fine: Complex<R>,
    /// Discretisation error estimate.
    disc: R,
    /// Rounding error floor below which refinement cannot help.
    floor: R,
}

/// Fixed-order rule on [a, b]; also returns the sum of |w f| for roundoff bounds.
fn gl_panel<R, F>(f: &F, a: &R, b: &R, nodes: &[(R, R)]) -> (Complex<R>, R)
where
    R: Real,
    F: Fn(&R) -> Complex<R>,
{
    let half = (b.clone() - a.clone()) * a.ratio(1, 2);
    let mid = (a.clone() + b.clone()) * a.ratio(1, 2);
    let mut acc = Complex::zero_like(a);
    let mut mag = a.zero();
    for (x, w) in nodes {
        if x.is_zero() {
            let v = f(&mid).scale(w);
            mag = mag + v.l1();
            acc = acc + v;
        } else {
            let dx = half.clone() * x.clone();
            let v1 = f(&(mid.clone() - dx.clone())).scale(w);
            let v2 = f(&(mid.clone() + dx)).scale(w);
            mag = mag + v1.l1() + v2.l1();
            acc = acc + v1 + v2;
        }
    }
    (acc.scale(&half), mag * half.abs())
}

fn make_panel<R, F>(f: &F, a: R, b: R, whole: Complex<R>, nodes: &[(R, R)]) -> Panel<R>
where
    R: Real,
    F: Fn(&R) -> Complex<R>,
{
    let m = (a.clone() + b.clone()) * a.ratio(1, 2);
    let (left, mag_l) = gl_panel(f, &a, &m, nodes);
    let (right, mag_r) = gl_panel(f, &m, &b, nodes);
    let fine = left.clone() + right.clone();
    let floor = (mag_l + mag_r) * a.epsilon() * a.lit(ROUNDOFF_FACTOR);
    let disc = (fine.clone() - whole).l1();
    Panel {
        a,
        b,
        left,
        right,
        fine,
        disc,
        floor,
    }
}

/// Integrates `f` over `[a, b]` to the accuracy requested by `spec`.
pub fn integrate<R, F>(f: F, a: &R, b: &R, spec: &QuadratureSpec) -> Result<Integral<R>>
where
    R: Real,
    F: Fn(&R) -> Complex<R>,
{
    spec.validate()?;
    if a == b {
        return Ok(Integral {
            value: Complex::zero_like(a),
            error_estimate: a.zero(),
            panels: 0,
        });
    }
    let nodes = gauss_legendre(spec.nodes_per_panel, a);
    // A few initial panels guard against accidental agreement on one coarse panel.
    let initial = INITIAL_PANELS.min(spec.max_panels);
    let width = (b.clone() - a.clone()) / a.lit(initial as f64);
    let mut panels = Vec::with_capacity(initial);
    for k in 0..initial {
        let lo = a.clone() + width.clone() * a.lit(k as f64);
        let hi = if k + 1 == initial {
            b.clone()
        } else {
            a.clone() + width.clone() * a.lit((k + 1) as f64)
        };
        let (whole, _) = gl_panel(&f, &lo, &hi, &nodes);
        panels.push(make_panel(&f, lo, hi, whole, &nodes));
    }
    let abs_target = a.lit(spec.target_abs);
    let rel_target = a.lit(spec.target_rel);
    let sum = |f: &dyn Fn(&Panel<R>) -> R| panels.iter().fold(a.zero(), |acc, p| acc + f(p));
    let mut total = panels
        .iter()
        .fold(Complex::zero_like(a), |acc, p| acc + p.fine.clone());
    let mut disc_total = sum(&|p| p.disc.clone());
    let mut floor_total = sum(&|p| p.floor.clone());
    loop {
        let tol = abs_target
            .max_of(&(rel_target.clone() * total.abs()))
            .max_of(&floor_total);
        if disc_total <= tol {
            break;
        }
        if panels.len() >= spec.max_panels || !disc_total.is_finite() {
            // Recompute exactly before reporting.
            let disc: R = panels.iter().fold(a.zero(), |acc, p| acc + p.disc.clone());
            if disc <= tol {
                break;
            }
            return Err(AuditError::NonConvergence {
                error: disc.to_sci(6),
                panels: panels.len(),
            });
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate().skip(1) {
            if p.disc > panels[worst].disc {
                worst = i;
            }
        }
        let old = panels.swap_remove(worst);
        let m = (old.a.clone() + old.b.clone()) * a.ratio(1, 2);
        let lp = make_panel(&f, old.a.clone(), m.clone(), old.left.clone(), &nodes);
        let rp = make_panel(&f, m, old.b.clone(), old.right.clone(), &nodes);
        total = total - old.fine + lp.fine.clone() + rp.fine.clone();
        disc_total = disc_total - old.disc + lp.disc.clone() + rp.disc.clone();
        floor_total = floor_total - old.floor + lp.floor.clone() + rp.floor.clone();
        panels.push(lp);
        panels.push(rp);
    }
    // Sum in left-to-right order so the result does not depend on split history.
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).expect("finite panel ends"));
    let value = panels
        .iter()
        .fold(Complex::zero_like(a), |acc, p| acc + p.fine.clone());
    let error_estimate = panels
        .iter()
        .fold(a.zero(), |acc, p| acc + p.disc.clone() + p.floor.clone());
    Ok(Integral {
        value,
        error_estimate,
        panels: panels.len(),
    })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<R, F>(f: F, a: &R, b: &R, spec: &QuadratureSpec) -> Result<(R, R)>
where
    R: Real,
    F: Fn(&R) -> R,
{
    let out = integrate(|x| Complex::from_real(f(x)), a, b, spec)?;
    Ok((out.value.re, out.error_estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::real::BigReal;
    use proptest::prelude::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let spec = QuadratureSpec {
            nodes_per_panel: 9,
            ..QuadratureSpec::default()
        };
        // x^16 over [0, 1] is exact for a 9-point rule.
        let (v, _) = integrate_real(|x: &f64| x.powi(16), &0.0, &1.0, &spec).unwrap();
        assert!((v - 1.0 / 17.0).abs() < 1e-15);
        let w: f64 = gauss_legendre(9, &0.0f64)
            .iter()
            .map(|(x, w)| if *x == 0.0 { *w } else { 2.0 * w })
            .sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let spec = QuadratureSpec::default();
        let r = integrate(
            |x: &f64| Complex::new((30.0 * x).cos(), (30.0 * x).sin()),
            &0.0,
            &2.0,
            &spec,
        )
        .unwrap();
        assert!((r.value.re - (60.0f64).sin() / 30.0).abs() < 1e-13);
        assert!((r.value.im - (1.0 - (60.0f64).cos()) / 30.0).abs() < 1e-13);
    }

    #[test]
    fn extended_precision_integral() {
        let ctx = PrecisionContext::extended(50).unwrap();
        let spec = QuadratureSpec::for_context(&ctx);
        let a = BigReal::from_ctx(0.0, &ctx);
        let b = BigReal::from_ctx(1.0, &ctx);
        let (v, err) = integrate_real(|x: &BigReal| x.exp(), &a, &b, &spec).unwrap();
        let exact = b.exp() - b.one();
        assert!((v - exact).abs().to_f64() < 1e-40);
        assert!(err.to_f64() < 1e-40);
    }

    #[test]
    fn panel_limit_reports_nonconvergence() {
        let spec = QuadratureSpec {
            nodes_per_panel: 8,
            max_panels: 3,
            target_abs: 0.0,
            target_rel: 1e-15,
        };
        let r = integrate_real(|x: &f64| (1.0 / x).sin(), &1e-6, &1.0, &spec);
        assert!(matches!(r, Err(AuditError::NonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = QuadratureSpec {
            nodes_per_panel: 4,
            ..QuadratureSpec::default()
        };
        assert!(integrate_real(|x: &f64| *x, &0.0, &1.0, &spec).is_err());
    }

    proptest! {
        #[test]
        fn linearity_within_error_estimates(
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
            k in 0.5f64..8.0,
            b in 0.5f64..4.0,
        ) {
            let spec = QuadratureSpec::default();
            let f = |x: &f64| Complex::new((k * x).cos() * x.exp(), x * x);
            let g = |x: &f64| Complex::new(1.0 / (1.0 + x * x), (k * x).sin());
            let i_f = integrate(f, &0.0, &b, &spec).unwrap();
            let i_g = integrate(g, &0.0, &b, &spec).unwrap();
            let i_h = integrate(
                |x: &f64| f(x).scale(&alpha) + g(x).scale(&beta),
                &0.0, &b, &spec,
            ).unwrap();
            let combo = i_f.value.scale(&alpha) + i_g.value.scale(&beta);
            let bound = i_h.error_estimate
                + alpha.abs() * i_f.error_estimate
                + beta.abs() * i_g.error_estimate;
            prop_assert!((i_h.value - combo).l1() <= bound);
        }
    }
}
