//! End of the sign argument for one candidate zero, and independent replay of
//! the recorded search.

use std::fmt;

use crate::construction::ConstructionParams;
use crate::error::{AuditError, Result};
use crate::identity::h_decompose;
use crate::numerics::{Complex, PrecisionContext, QuadratureSpec, Real};
use crate::zeros::ZeroCandidate;

use super::forms::{b1_b2, cross_part, f_direct, f_eval, f_split};
use super::search::{eps_for_interval, find_b0, select_eps, SearchTrace};

/// Points on which the on-line case checks `f ≡ 0`.
pub const DEGENERATE_GRID: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// Both conditions were realised, so the argument would force `t1 t2 = 0`.
    T2MustBeZero,
    Inconclusive,
}

impl Conclusion {
    pub fn name(&self) -> &'static str {
        match self {
            Conclusion::T2MustBeZero => "t2-must-be-zero",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<R> {
    pub candidate: ZeroCandidate,
    /// `None` on the real axis or when the premise of the search failed.
    pub trace: Option<SearchTrace<R>>,
    /// `f(b₀; ε₀) = 0` and `F(b₀) + G(b₀)/ε₀ ≠ 0` both hold numerically.
    pub conditions_met: bool,
    /// `Im t² = 2 t1 t2` from the inputs.
    pub implied_im_t_squared: f64,
    pub conclusion: Conclusion,
    /// `f(b₀; ε₀) + 2 t1 t2 h(b₀)`, and the scale it is judged against.
    pub im_balance: Option<(R, R)>,
    /// On the real axis: `max |f| / max(1, scale)` over the b grid.
    pub degenerate_residual: Option<R>,
    pub notes: Vec<String>,
    pub precision: String,
}

/// Working precision for a candidate: binary64 unless `t1 b₂` is large.
pub fn working_context(z: &ZeroCandidate, ctx: &PrecisionContext) -> PrecisionContext {
    if z.t2 == 0.0 {
        return *ctx;
    }
    let b2 = 5.0 * std::f64::consts::PI / z.t2.abs();
    ctx.promoted_for(z.t1.abs() * b2)
}

/// Runs the search for `z` at the precision of `R`; `ctx` should come from
/// [`working_context`].
pub fn verdict<R: Real>(z: &ZeroCandidate, ctx: &PrecisionContext) -> Result<Verdict<R>> {
    z.check_claimed_zero()?;
    let mut notes = Vec::new();
    let implied = 2.0 * z.t1 * z.t2;
    let one = R::from_ctx(1.0, ctx);
    let quad = QuadratureSpec::for_context(ctx);
    if z.t2 == 0.0 {
        let t1 = one.lit(z.t1);
        let t2 = one.zero();
        let eps = one.clone();
        let mut worst = one.zero();
        for k in 1..=DEGENERATE_GRID {
            let b = one.ratio(k as i64, 10);
            let f = f_direct(&b, &eps, &t1, &t2);
            worst = worst.max_of(&(f.value.abs() / f.scale.max_of(&one)));
        }
        notes.push("t2 = 0: f vanishes identically, nothing to search".into());
        return Ok(Verdict {
            candidate: *z,
            trace: None,
            conditions_met: false,
            implied_im_t_squared: implied,
            conclusion: Conclusion::T2MustBeZero,
            im_balance: None,
            degenerate_residual: Some(worst),
            notes,
            precision: ctx.label(),
        });
    }
    if z.t1 < 0.0 {
        notes.push("t1 < 0: Xi is even, so -t is analysed instead".into());
    }
    if z.t2 < 0.0 {
        notes.push("t2 < 0: zeros come in conjugate pairs, so conj(t) is analysed instead".into());
    }
    let t1 = one.lit(z.t1.abs());
    let t2 = one.lit(z.t2.abs());
    let found = select_eps(&t1, &t2, &quad, ctx).and_then(|sel| find_b0(&t1, &t2, &sel, &quad, ctx));
    let trace = match found {
        Ok(t) => t,
        Err(e @ (AuditError::PremiseFailed { .. } | AuditError::CaseExhausted(_))) => {
            notes.push(format!("search stopped: {e}"));
            return Ok(Verdict {
                candidate: *z,
                trace: None,
                conditions_met: false,
                implied_im_t_squared: implied,
                conclusion: Conclusion::Inconclusive,
                im_balance: None,
                degenerate_residual: None,
                notes,
                precision: ctx.label(),
            });
        }
        Err(e) => return Err(e),
    };
    let f_ok = trace.f_at_b0.abs() < trace.f_tolerance;
    let h_ok = trace.h_nonzero();
    if !f_ok {
        notes.push("f(b0; eps0) did not reach the solve tolerance".into());
    }
    if !h_ok {
        notes.push(format!(
            "|F(b0) + G(b0)/eps0| = {} is below the threshold {}: the second condition is not realised",
            trace.h_at_b0.abs().to_sci(6),
            trace.h_threshold.to_sci(6)
        ));
    }
    // The imaginary part of the identity reads f = −2 t1 t2 h for every b and ε.
    let k = one.lit(2.0) * t1.clone() * t2.clone();
    let balance = trace.f_at_b0.clone() + k.clone() * trace.h_at_b0.clone();
    let balance_scale = k * trace.norm_part_at_b0.abs().max_of(&one);
    notes.push(format!(
        "f(b0) + 2 t1 t2 h(b0) = {} against scale {}: f and h vanish together",
        balance.to_sci(6),
        balance_scale.to_sci(6)
    ));
    let conditions_met = f_ok && h_ok;
    Ok(Verdict {
        candidate: *z,
        trace: Some(trace),
        conditions_met,
        implied_im_t_squared: implied,
        conclusion: if conditions_met {
            Conclusion::T2MustBeZero
        } else {
            Conclusion::Inconclusive
        },
        im_balance: Some((balance, balance_scale)),
        degenerate_residual: None,
        notes,
        precision: ctx.label(),
    })
}

/// One re-evaluated fact about a trace. Passes iff `residual <= tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayCheck<R> {
    pub name: String,
    pub lhs: R,
    pub rhs: R,
    pub residual: R,
    pub tolerance: R,
}

impl<R: Real> ReplayCheck<R> {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    fn close(name: &str, lhs: R, rhs: R, tolerance: R) -> Self {
        let residual = (lhs.clone() - rhs.clone()).abs();
        ReplayCheck {
            name: name.into(),
            lhs,
            rhs,
            residual,
            tolerance,
        }
    }

    /// `value` must have sign `want`; the residual is zero when it does.
    fn sign(name: &str, value: R, want: i32) -> Self {
        let z = value.zero();
        let residual = if value.sign() == want {
            z.clone()
        } else {
            value.abs().max_of(&value.one())
        };
        ReplayCheck {
            name: name.into(),
            lhs: value,
            rhs: z.clone(),
            residual,
            tolerance: z,
        }
    }
}

/// Precision at which `∫|v|² − (tt̄/10ε²)(b/2)⁵` resolves `h` to well below
/// its threshold.
fn norm_integral_context<R: Real>(
    t1: &R,
    t2: &R,
    trace: &SearchTrace<R>,
    ctx: &PrecisionContext,
) -> Result<PrecisionContext> {
    if !ctx.is_extended() {
        return Ok(*ctx);
    }
    let half = trace.b0.clone() * trace.b0.ratio(1, 2);
    let quintic = (t1.square() + t2.square()) * half.powi(5) * half.ratio(1, 10)
        / trace.eps0.square();
    let scale = quintic.ln_abs().max(trace.norm_part_at_b0.ln_abs());
    let lost = (scale - trace.h_threshold.ln_abs()) / std::f64::consts::LN_10;
    // Eight digits go to the quadrature target, the rest is margin.
    ctx.with_digits(lost.ceil().max(0.0) as u32 + 14)
}

/// Re-evaluates every recorded quantity of `trace` by a route independent of
/// the search where one exists.
pub fn replay<R: Real>(
    z: &ZeroCandidate,
    trace: &SearchTrace<R>,
    ctx: &PrecisionContext,
) -> Result<Vec<ReplayCheck<R>>> {
    let ctx = &if ctx.is_extended() {
        ctx.with_digits(trace.working_digits)?
    } else {
        *ctx
    };
    let one = R::from_ctx(1.0, ctx);
    let t1 = one.lit(z.t1.abs());
    let t2 = one.lit(z.t2.abs());
    let zero = one.zero();
    let mut out = Vec::new();

    let (b1, b2) = b1_b2(&t2, ctx)?;
    let end_tol = b2.clone() * one.epsilon() * one.lit(8.0);
    out.push(ReplayCheck::close("b1", trace.b1.clone(), b1.clone(), end_tol.clone()));
    out.push(ReplayCheck::close("b2", trace.b2.clone(), b2.clone(), end_tol));
    out.push(ReplayCheck::sign("b0 - b1", trace.b0.clone() - b1.clone(), 1));
    out.push(ReplayCheck::sign("b2 - b0", b2.clone() - trace.b0.clone(), 1));
    out.push(ReplayCheck::sign("eps0", trace.eps0.clone(), 1));
    out.push(ReplayCheck::sign("eps1 - eps0", trace.eps1.clone() - trace.eps0.clone() + trace.eps1.clone() * one.epsilon(), 1));

    let eps1 = eps_for_interval(&b1, &b2, &t1, &t2)?.eps;
    out.push(ReplayCheck::close(
        "eps1 recomputed",
        trace.eps1.clone(),
        eps1.clone(),
        eps1.clone() * one.lit(ctx.rel_tol),
    ));
    let f = |b: &R, e: &R| f_eval(b, e, &t1, &t2, ctx).map(|v| v.value);
    out.push(ReplayCheck::sign("f(b1; eps1)", f(&b1, &eps1)?, 1));
    out.push(ReplayCheck::sign("f(b2; eps1)", f(&b2, &eps1)?, -1));
    let tenth = eps1.clone() * one.ratio(1, 10);
    out.push(ReplayCheck::sign("f(b1; eps1/10)", f(&b1, &tenth)?, 1));
    out.push(ReplayCheck::sign("f(b2; eps1/10)", f(&b2, &tenth)?, -1));
    out.push(ReplayCheck::sign("f(lo; eps0)", f(&trace.interval.0, &trace.eps0)?, 1));
    out.push(ReplayCheck::sign("f(hi; eps0)", f(&trace.interval.1, &trace.eps0)?, -1));

    // The merged form was not used by the bisection's sign tests at b0.
    let split = f_split(&trace.b0, &trace.eps0, &t1, &t2).value;
    out.push(ReplayCheck::close("f(b0; eps0) merged form", split, zero.clone(), trace.f_tolerance.clone()));
    let direct = f_direct(&trace.b0, &trace.eps0, &t1, &t2).value;
    out.push(ReplayCheck::close(
        "f(b0; eps0) recorded",
        trace.f_at_b0.clone(),
        direct,
        trace.f_tolerance.clone(),
    ));

    // h from the norm integral of v rather than from F and G. The integral is
    // dominated by the quintic term, which cancels down to h.
    let norm_ctx = norm_integral_context(&t1, &t2, trace, ctx)?;
    let lift = |x: &R| x.to_ctx(&norm_ctx);
    let p = ConstructionParams::reduced(
        Complex::new(lift(&t1), lift(&t2)),
        lift(&trace.b0),
        lift(&trace.eps0),
    )?;
    let d = h_decompose(&p, &QuadratureSpec::for_context(&norm_ctx))?;
    let quad = QuadratureSpec::for_context(ctx);
    out.push(ReplayCheck::close(
        "h(b0) by norm integral",
        trace.h_at_b0.clone(),
        d.h_quadrature.to_ctx(ctx),
        trace.h_threshold.clone(),
    ));
    let outcome = |nonzero: bool| if nonzero { one.clone() } else { zero.clone() };
    out.push(ReplayCheck::close(
        "h(b0) nonzero outcome",
        outcome(trace.h_nonzero()),
        outcome(trace.resolved() && d.h_quadrature.abs() > trace.h_threshold),
        zero.clone(),
    ));

    let delta = (b2.clone() - b1.clone()) * one.lit(1e-8);
    for (k, bp) in trace.g_zeros.iter().enumerate() {
        let left = cross_part(&(bp.clone() - delta.clone()), &t1, &t2, &quad)?;
        let right = cross_part(&(bp.clone() + delta.clone()), &t1, &t2, &quad)?;
        let product_sign = left.sign() * right.sign();
        out.push(ReplayCheck::sign(
            &format!("G sign change at zero {k}"),
            one.lit(-f64::from(product_sign)),
            1,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigReal;

    fn run(t1: f64, t2: f64) -> (Verdict<BigReal>, Vec<ReplayCheck<BigReal>>) {
        let z = ZeroCandidate::new(t1, t2).unwrap();
        let ctx = working_context(&z, &PrecisionContext::binary64());
        assert!(ctx.is_extended());
        let v = verdict::<BigReal>(&z, &ctx).unwrap();
        let r = replay(&z, v.trace.as_ref().unwrap(), &ctx).unwrap();
        (v, r)
    }

    fn assert_replays(t1: f64, t2: f64) {
        let (v, checks) = run(t1, t2);
        let t = v.trace.as_ref().unwrap();
        for c in checks.iter().filter(|c| !c.passed()) {
            eprintln!("{}: residual {} > {}", c.name, c.residual.to_sci(6), c.tolerance.to_sci(6));
        }
        assert!(checks.iter().all(|c| c.passed()));
        assert!(t.resolved());
        assert!(t.b0 > t.b1 && t.b0 < t.b2);
        assert!(t.f_at_b0.abs() < t.f_tolerance);
        assert_eq!(v.implied_im_t_squared, 2.0 * t1 * t2);
        // f = −2 t1 t2 h forces h to vanish with f, so the second condition fails.
        let (balance, scale) = v.im_balance.clone().unwrap();
        assert!(balance.abs() < scale * t.h_threshold.lit(1e-10));
        assert_eq!(v.conclusion, Conclusion::Inconclusive);
    }

    #[test]
    fn reference_candidate_trace_replays() {
        assert_replays(13.0, 0.25);
    }

    #[test]
    fn near_first_zero_trace_replays() {
        let start = std::time::Instant::now();
        assert_replays(14.134725, 0.1);
        eprintln!("elapsed {:?}", start.elapsed());
    }

    #[test]
    fn on_line_candidate_is_degenerate() {
        let z = ZeroCandidate::new(14.134725, 0.0).unwrap();
        let ctx = PrecisionContext::binary64();
        let v = verdict::<f64>(&z, &ctx).unwrap();
        assert!(v.trace.is_none());
        assert_eq!(v.conclusion, Conclusion::T2MustBeZero);
        assert!(v.degenerate_residual.unwrap() <= ctx.abs_tol);
    }

    #[test]
    fn rejects_small_ordinate() {
        let z = ZeroCandidate::new(6.0, 0.25).unwrap();
        let err = verdict::<f64>(&z, &PrecisionContext::binary64()).unwrap_err();
        assert!(err.is_usage_error());
    }
}
