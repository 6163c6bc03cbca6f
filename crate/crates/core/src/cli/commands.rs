//! Report builders behind each subcommand. Each returns an [`AuditReport`];
//! argument parsing and file output live in the parent module.

use std::f64::consts::PI;
use std::path::Path;

use num_traits::ToPrimitive;

use crate::construction::ConstructionParams;
use crate::error::{AuditError, Result};
use crate::identity::{energy_identity, h_decompose};
use crate::numerics::{BigReal, Complex, PrecisionContext, QuadratureSpec, Real};
use crate::numerics::precision::DEFAULT_EXTENDED_DIGITS;
use crate::report::svg::{line_plot, signed_log};
use crate::report::{trace_json, AuditReport, Check, Status, Value};
use crate::signs::forms::{f_direct, f_split, g_values, norm_part, q_eval_auto, ExpScaled};
use crate::signs::verdict::{replay, verdict, working_context, Conclusion};
use crate::signs::f_eval;
use crate::special::{big_xi, XiMethod};
use crate::symbolic::{self, MatchStatus};
use crate::zeros::{load_zero_table, scan_real_zeros, xi_real, ZeroCandidate};

/// Statements in the source argument that checks are anchored to.
pub mod anchor {
    pub const XI_METHODS: &str = "Xi: product formula and Fourier integral agree";
    pub const REAL_ZEROS: &str = "Xi: real zeros bracketed by sign change";
    pub const ENERGY_IDENTITY: &str = "energy identity: integrated boundary problem sums to zero";
    pub const WEIGHTED_TERM: &str = "energy identity: weighted integral of conj(v) in closed form";
    pub const MEAN_TERM: &str = "energy identity: integral of conj(v) in closed form";
    pub const BOUNDARY_TERM: &str = "energy identity: boundary product 2 conj(v(b)) v'(b)";
    pub const QUINTIC: &str = "norm integral: quintic correction t conj(t) (b/2)^5 / (10 eps^2)";
    pub const H_SPLIT: &str = "norm integral: h = F + G/eps";
    pub const F_AT_ZERO: &str = "imaginary part: f(0; eps) = 0";
    pub const F_FORMS: &str = "imaginary part: expanded form equals (2/eps) Q(b) minus the full-argument terms";
    pub const F_REAL_AXIS: &str = "imaginary part: f vanishes identically for real t";
    pub const Q_B1: &str = "sign lemma: Q(b1) > 0 at sigma = 3 pi / 2";
    pub const Q_B2: &str = "sign lemma: Q(b2) < 0 at sigma = 5 pi / 2";
    pub const G_SIGNS: &str = "quadratics g1, g2, g3 < 0 and g4 > 0 for every sigma > 0";
    pub const G_DISCRIMINANT: &str = "quadratics: discriminant of g1 is negative for alpha > 12";
    pub const F_POSITIVE: &str = "norm part: F(b) > (b - 1/t2)/4 > 0 on [b1, b2]";
    pub const PRINTED_FORM: &str = "printed derivation step";
    pub const ROUND_TRIP: &str = "derivation step re-evaluated against its source";
    pub const B0_ROOT: &str = "conditions: f(b0; eps0) = 0";
    pub const H_NONZERO: &str = "conditions: F(b0) + G(b0)/eps0 != 0";
    pub const IM_BALANCE: &str = "imaginary part of the energy identity: f = -2 t1 t2 h";
    pub const RESOLUTION: &str = "conditions: working precision resolves f and h";
    pub const REPLAY: &str = "search trace re-evaluated independently";
    pub const SEARCH: &str = "case analysis for b0 and eps0";
}

/// Evaluates `body` with `R = BigReal` for extended contexts and `R = f64`
/// otherwise.
macro_rules! with_real {
    ($ctx:expr, $f:ident ( $($arg:expr),* )) => {
        if $ctx.is_extended() {
            $f::<BigReal>($($arg),*)
        } else {
            $f::<f64>($($arg),*)
        }
    };
}

fn complex_value<R: Real>(z: &Complex<R>) -> Value {
    let im = z.im.to_sci(17);
    let sign = if im.starts_with('-') { "" } else { "+" };
    Value::text(format!("{}{sign}{im}i", z.re.to_sci(17)))
}

/// `sign · e^{ln_abs}` as a number when it fits binary64, else a decimal string.
pub fn scaled_value(sign: i32, ln_abs: f64) -> Value {
    if sign == 0 {
        return Value::num(0.0);
    }
    if ln_abs.abs() < 700.0 {
        return Value::num(f64::from(sign) * ln_abs.exp());
    }
    let l = ln_abs / std::f64::consts::LN_10;
    let k = l.floor();
    let m = 10f64.powf(l - k);
    let s = if sign < 0 { "-" } else { "" };
    Value::text(format!("{s}{m:.15}e{k}"))
}

fn exp_scaled_value(q: &ExpScaled<f64>) -> Value {
    scaled_value(q.sign(), q.ln_abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    One(XiMethod),
    Both,
}

impl std::str::FromStr for MethodChoice {
    type Err = AuditError;
    fn from_str(s: &str) -> Result<Self> {
        if s == "both" {
            Ok(MethodChoice::Both)
        } else {
            s.parse().map(MethodChoice::One)
        }
    }
}

/// Tolerance for the two Ξ representations: `1e-8 (1 + |Ξ|)`.
pub const XI_CROSS_REL: f64 = 1e-8;

fn xi_pair<R: Real>(t1: f64, t2: f64, ctx: &PrecisionContext) -> Result<(Complex<R>, Complex<R>)> {
    let t = Complex::new(R::from_ctx(t1, ctx), R::from_ctx(t2, ctx));
    Ok((big_xi(&t, XiMethod::Product, ctx)?, big_xi(&t, XiMethod::Fourier, ctx)?))
}

fn eval_xi_typed<R: Real>(t1: f64, t2: f64, method: MethodChoice, ctx: &PrecisionContext) -> Result<AuditReport> {
    let mut r = AuditReport::new("eval-xi", ctx.label());
    r.param("t1", t1).param("t2", t2);
    match method {
        MethodChoice::One(m) => {
            let t = Complex::new(R::from_ctx(t1, ctx), R::from_ctx(t2, ctx));
            let xi = big_xi(&t, m, ctx)?;
            r.param("method", m.name());
            r.param(&format!("xi_{}", m.name()), complex_value(&xi));
        }
        MethodChoice::Both => {
            let (p, f) = xi_pair::<R>(t1, t2, ctx)?;
            r.param("method", "both");
            r.param("xi_product", complex_value(&p));
            r.param("xi_fourier", complex_value(&f));
            let diff = (f.clone() - p.clone()).abs();
            let one = diff.one();
            let tol = diff.lit(XI_CROSS_REL) * (one + p.abs());
            r.push(Check::within("xi_cross_method", anchor::XI_METHODS, &f.re, &p.re, &diff, &tol));
        }
    }
    Ok(r)
}

pub fn eval_xi(t1: f64, t2: f64, method: MethodChoice, ctx: &PrecisionContext) -> Result<AuditReport> {
    with_real!(ctx, eval_xi_typed(t1, t2, method, ctx))
}

/// Half-width of the bracket in which the other Ξ method must change sign.
pub const ZERO_BRACKET: f64 = 1e-6;

fn bracket_check(name: String, t: f64, method: XiMethod, ctx: &PrecisionContext) -> Result<Check> {
    let lo = xi_real(&(t - ZERO_BRACKET), method, ctx)?;
    let hi = xi_real(&(t + ZERO_BRACKET), method, ctx)?;
    let changes = lo.signum() != hi.signum() || lo == 0.0 || hi == 0.0;
    Ok(Check::decided(
        name,
        anchor::REAL_ZEROS,
        Value::num(lo),
        Value::num(hi),
        Value::num(if changes { 0.0 } else { 1.0 }),
        Value::num(0.0),
        changes,
        Status::Fail,
    ))
}

/// Scans for real zeros with `method` and confirms each with the other one.
pub fn find_zeros(
    t_min: f64,
    t_max: f64,
    step: f64,
    method: XiMethod,
    ctx: &PrecisionContext,
) -> Result<(AuditReport, Vec<f64>)> {
    let zeros: Vec<f64> = scan_real_zeros(t_min, t_max, step, method, ctx)?
        .into_iter()
        .map(|z| z.t1)
        .collect();
    let other = match method {
        XiMethod::Product => XiMethod::Fourier,
        XiMethod::Fourier => XiMethod::Product,
    };
    let mut r = AuditReport::new("find-zeros", ctx.label());
    r.param("t_min", t_min)
        .param("t_max", t_max)
        .param("step", step)
        .param("method", method.name())
        .param("count", zeros.len() as f64);
    for (k, &t) in zeros.iter().enumerate() {
        r.param(&format!("zero_{k}"), t);
        r.push(bracket_check(format!("zero_{k}_sign_change_{}", other.name()), t, other, ctx)?);
    }
    Ok((r, zeros))
}

/// Text of a zero table in the format read by [`load_zero_table`].
pub fn zero_table_text(zeros: &[f64], method: XiMethod) -> String {
    let mut s = format!("# real zeros of Xi, {} method\n", method.name());
    for z in zeros {
        s.push_str(&format!("{z:.15}\n"));
    }
    s
}

/// Loads a zero table and checks that Ξ changes sign around every entry.
pub fn load_zeros(path: &Path, ctx: &PrecisionContext) -> Result<AuditReport> {
    let table = load_zero_table(path)?;
    let mut r = AuditReport::new("load-zeros", ctx.label());
    r.param("file", table.source.as_str()).param("count", table.ordinates.len() as f64);
    for (k, &t) in table.ordinates.iter().enumerate() {
        r.push(bracket_check(format!("entry_{k}_sign_change"), t, XiMethod::Product, ctx)?);
    }
    Ok(r)
}

/// Relative tolerances of the identity audit.
pub const IDENTITY_RESIDUAL_REL: f64 = 1e-9;
pub const CLOSED_FORM_REL: f64 = 1e-10;
pub const DIRECT_PRODUCT_REL: f64 = 1e-12;
pub const H_SPLIT_REL: f64 = 1e-10;

fn rel_check<R: Real>(name: &str, anchor: &str, closed: &Complex<R>, reference: &Complex<R>, rel: f64) -> Check {
    let residual = (closed.clone() - reference.clone()).abs();
    let tol = residual.lit(rel) * reference.abs();
    let status = if residual <= tol { Status::Pass } else { Status::Fail };
    Check {
        name: name.into(),
        lhs: complex_value(closed),
        rhs: complex_value(reference),
        residual: Value::real(&residual),
        tolerance: Value::real(&tol),
        status,
        paper_anchor: anchor.into(),
    }
}

fn audit_identity_typed<R: Real>(t1: f64, t2: f64, b: f64, eps: f64, ctx: &PrecisionContext) -> Result<AuditReport> {
    let l = |x: f64| R::from_ctx(x, ctx);
    let p = ConstructionParams::reduced(Complex::new(l(t1), l(t2)), l(b), l(eps))?;
    let quad = QuadratureSpec::for_context(ctx);
    let tb = energy_identity(&p, &quad)?;
    let hd = h_decompose(&p, &quad)?;
    let mut r = AuditReport::new("audit-identity", ctx.label());
    r.param("t1", t1).param("t2", t2).param("b", b).param("eps", eps);
    r.param("norm_integral", Value::real(&tb.norm_integral))
        .param("p_value", complex_value(&tb.p_value))
        .param("h_quadrature", Value::real(&hd.h_quadrature))
        .param("norm_part", Value::real(&hd.norm_part))
        .param("cross_part", Value::real(&hd.cross_part))
        .param("norm_part_printed_variant", Value::real(&hd.norm_part_printed))
        .param("h_printed_exponent_variant", Value::real(&hd.h_printed_exponent));
    let res = tb.residual.abs();
    let zero = res.zero();
    r.push(Check::within(
        "energy_identity_residual",
        anchor::ENERGY_IDENTITY,
        &res,
        &zero,
        &res,
        &(res.lit(IDENTITY_RESIDUAL_REL) * tb.term_scale.clone()),
    ));
    r.push(rel_check("weighted_term", anchor::WEIGHTED_TERM, &tb.weighted_term, &tb.weighted_term_quadrature, CLOSED_FORM_REL));
    r.push(rel_check("mean_term", anchor::MEAN_TERM, &tb.mean_term, &tb.mean_term_quadrature, CLOSED_FORM_REL));
    r.push(rel_check("boundary_term", anchor::BOUNDARY_TERM, &tb.boundary_term, &tb.boundary_term_direct, DIRECT_PRODUCT_REL));
    r.push(rel_check(
        "quintic_correction",
        anchor::QUINTIC,
        &Complex::from_real(hd.quintic_closed.clone()),
        &Complex::from_real(hd.quintic_quadrature.clone()),
        CLOSED_FORM_REL,
    ));
    let one = hd.h_quadrature.one();
    r.push(Check::close(
        "h_split",
        anchor::H_SPLIT,
        &hd.h_quadrature,
        &hd.h_closed,
        &(one.lit(H_SPLIT_REL) * hd.h_quadrature.abs().max_of(&one)),
    ));
    Ok(r)
}

/// Energy identity and the split of `h` at one parameter point.
pub fn audit_identity(t1: f64, t2: f64, b: f64, eps: f64, ctx: &PrecisionContext) -> Result<AuditReport> {
    let ctx = ctx.promoted_for(t1.abs() * b);
    with_real!(ctx, audit_identity_typed(t1, t2, b, eps, &ctx))
}

/// Exact comparisons, numeric round trips and `g` sign verdicts.
pub fn audit_symbolic() -> Result<AuditReport> {
    let audit = symbolic::run()?;
    let mut r = AuditReport::new("audit-symbolic", format!("exact; round trips at dec:{}", symbolic::audit::ROUND_TRIP_DIGITS));
    for c in &audit.comparisons {
        let anchor = format!("{}: {}", anchor::PRINTED_FORM, c.reference);
        if c.status == MatchStatus::Match {
            r.push(Check::decided(
                format!("printed.{}", c.step),
                &anchor,
                Value::text("derived"),
                Value::text("printed"),
                Value::num(0.0),
                Value::num(0.0),
                true,
                Status::Fail,
            ));
        }
        for d in &c.diffs {
            r.push(Check::decided(
                format!("printed.{}.{}", c.step, d.basis),
                &anchor,
                Value::text(d.derived.clone()),
                Value::text(d.printed.clone()),
                Value::num(1.0),
                Value::num(0.0),
                false,
                Status::Fail,
            ));
        }
    }
    for rt in &audit.round_trips {
        r.push(Check::within(
            format!("round_trip.{}", rt.step),
            anchor::ROUND_TRIP,
            &rt.max_rel,
            &0.0,
            &rt.max_rel,
            &rt.tolerance,
        ));
    }
    r.push(Check::decided(
        "real_axis_exact_zero",
        anchor::F_REAL_AXIS,
        Value::text(if audit.real_axis_zero { "0" } else { "nonzero" }),
        Value::text("0"),
        Value::num(if audit.real_axis_zero { 0.0 } else { 1.0 }),
        Value::num(0.0),
        audit.real_axis_zero,
        Status::Fail,
    ));
    r.push(Check::decided(
        "merge_remainder",
        anchor::F_FORMS,
        Value::text("derived remainder"),
        Value::text("-[alpha t2 sin(t2 b) + t2 sh(alpha t2 b)]"),
        Value::num(if audit.remainder_matches { 0.0 } else { 1.0 }),
        Value::num(0.0),
        audit.remainder_matches,
        Status::Fail,
    ));
    for (name, g) in audit.g.all() {
        r.param(name, g.to_string().as_str());
    }
    let common = symbolic::derive::discriminant_common_factor();
    for ((name, _), d) in audit.g.all().into_iter().zip(&audit.discriminants) {
        r.param(&format!("discriminant_{name}"), d.to_string().as_str());
        if let Ok(cof) = d.div_exact(&common, symbolic::Var::Alpha) {
            r.param(&format!("discriminant_{name}_over_16a2(a2+1)2"), cof.to_string().as_str());
        }
    }
    for s in &audit.signs {
        let alpha = s.alpha.to_f64().unwrap_or(f64::NAN);
        for g in &s.reports {
            let exact = g.exact_sign.map(f64::from).unwrap_or(0.0);
            r.push(Check::decided(
                format!("g_sign_exact.{}.alpha={alpha}", g.name),
                anchor::G_SIGNS,
                Value::num(exact),
                Value::num(f64::from(g.claimed_sign)),
                Value::num(if g.claim_holds { 0.0 } else { 1.0 }),
                Value::num(0.0),
                g.claim_holds,
                Status::Fail,
            ));
            r.push(Check::decided(
                format!("g_sign_sweep.{}.alpha={alpha}", g.name),
                anchor::G_SIGNS,
                Value::num(g.sweep.agreeing as f64),
                Value::num(g.sweep.points as f64),
                Value::num((g.sweep.points - g.sweep.agreeing) as f64),
                Value::num(0.0),
                g.sweep.consistent(),
                Status::Fail,
            ));
            let disc = g.discriminant_at_alpha.to_f64().unwrap_or(f64::NAN);
            r.push(Check::decided(
                format!("discriminant_negative.{}.alpha={alpha}", g.name),
                anchor::G_DISCRIMINANT,
                Value::text(g.discriminant_at_alpha.to_string()),
                Value::num(0.0),
                Value::num(disc.max(0.0)),
                Value::num(0.0),
                disc < 0.0,
                Status::Fail,
            ));
        }
    }
    Ok(r)
}

/// Grid of `α` used by the sign checks.
pub const ALPHA_GRID: [f64; 5] = [12.001, 13.0, 20.0, 52.0, 100.0];
/// `σ = kπ/50` for `k = 1..=500`.
pub const SIGMA_STEPS: usize = 500;
/// Grid points on `[b1, b2]` for the positivity of `F`.
pub const F_GRID: usize = 101;

fn f_positivity<R: Real>(alpha: f64, t2: f64, ctx: &PrecisionContext) -> (R, usize) {
    let l = |x: f64| R::from_ctx(x, ctx);
    let (t1, t2r) = (l(alpha * t2), l(t2));
    let pi = t2r.pi();
    let lo = l(3.0) * pi.clone() / t2r.clone();
    let hi = l(5.0) * pi / t2r.clone();
    let mut worst: Option<R> = None;
    let mut failures = 0;
    for k in 0..F_GRID {
        let b = lo.clone() + (hi.clone() - lo.clone()) * l(k as f64) / l((F_GRID - 1) as f64);
        let f = norm_part(&b, &t1, &t2r);
        let bound = (b.clone() - t2r.one() / t2r.clone()) * l(0.25);
        if !(f > bound && bound > bound.zero()) {
            failures += 1;
        }
        let ratio = f / bound;
        worst = Some(match worst {
            Some(w) => w.min_of(&ratio),
            None => ratio,
        });
    }
    (worst.expect("grid is non-empty"), failures)
}

/// Sign checks for one `α`: `Q` at `b1` and `b2`, the sampled `g` signs and
/// the positivity of `F` with `t1 = α t2`.
pub fn sign_checks(alpha: f64, t2: f64, ctx: &PrecisionContext) -> Result<Vec<Check>> {
    if !(alpha > 12.0) {
        return Err(AuditError::InvalidInput(format!("sign checks need alpha > 12, got {alpha}")));
    }
    if !(t2 > 0.0 && t2 < 0.5) {
        return Err(AuditError::InvalidInput(format!("sign checks need 0 < t2 < 1/2, got {t2}")));
    }
    let mut out = Vec::new();
    for (name, sigma, want, anchor) in [
        ("q_positive_at_b1", 1.5 * PI, 1, anchor::Q_B1),
        ("q_negative_at_b2", 2.5 * PI, -1, anchor::Q_B2),
    ] {
        let q = q_eval_auto(sigma, alpha, ctx);
        let ok = q.sign() == want;
        out.push(Check::decided(
            format!("{name}.alpha={alpha}"),
            anchor,
            exp_scaled_value(&q),
            Value::num(0.0),
            Value::num(if ok { 0.0 } else { 1.0 }),
            Value::num(0.0),
            ok,
            Status::Fail,
        ));
    }
    let mut agreeing = [0usize; 4];
    for k in 1..=SIGMA_STEPS {
        let sigma = k as f64 * PI / 50.0;
        let g = g_values(&sigma, &alpha);
        for (i, (v, want)) in g.iter().zip(symbolic::derive::CLAIMED_SIGNS).enumerate() {
            if v.sign() == i32::from(want) {
                agreeing[i] += 1;
            }
        }
    }
    for (i, a) in agreeing.iter().enumerate() {
        out.push(Check::decided(
            format!("g{}_sign_on_sigma_grid.alpha={alpha}", i + 1),
            anchor::G_SIGNS,
            Value::num(*a as f64),
            Value::num(SIGMA_STEPS as f64),
            Value::num((SIGMA_STEPS - a) as f64),
            Value::num(0.0),
            *a == SIGMA_STEPS,
            Status::Fail,
        ));
    }
    let fctx = ctx.promoted_for(alpha * t2 * 5.0 * PI / t2);
    let (ratio, failures) = if fctx.is_extended() {
        let (r, n) = f_positivity::<BigReal>(alpha, t2, &fctx);
        (Value::real(&r), n)
    } else {
        let (r, n) = f_positivity::<f64>(alpha, t2, &fctx);
        (Value::real(&r), n)
    };
    out.push(Check::decided(
        format!("f_above_linear_bound.alpha={alpha}"),
        anchor::F_POSITIVE,
        ratio,
        Value::num(1.0),
        Value::num(failures as f64),
        Value::num(0.0),
        failures == 0,
        Status::Fail,
    ));
    Ok(out)
}

/// Point at which the two forms of `f` are compared in `audit-signs`.
pub const F_FORM_POINT: (f64, f64, f64, f64) = (13.0, 0.25, 2.0, 0.1);

fn f_form_checks(ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let (t1, t2, b, eps) = F_FORM_POINT;
    let direct = f_direct(&b, &eps, &t1, &t2).value;
    let split = f_split(&b, &eps, &t1, &t2).value;
    let tol = 1e-11 * (1.0 + direct.abs());
    let at_zero = f_eval(&0.0, &eps, &t1, &t2, ctx)?.value;
    Ok(vec![
        Check::close("f_expanded_vs_merged", anchor::F_FORMS, &direct, &split, &tol),
        Check::close("f_at_b_zero", anchor::F_AT_ZERO, &at_zero, &0.0, &ctx.abs_tol),
    ])
}

/// `Q(σ)` over `(0, 4π]` on a signed log scale.
pub fn q_plot(alpha: f64, ctx: &PrecisionContext) -> String {
    let pts: Vec<(f64, f64)> = (1..=400)
        .map(|k| {
            let sigma = k as f64 * 4.0 * PI / 400.0;
            let q = q_eval_auto(sigma, alpha, ctx);
            (sigma, signed_log(q.sign(), q.ln_abs()))
        })
        .collect();
    line_plot(
        &format!("Q(sigma), alpha = {alpha}"),
        "sigma",
        "sign(Q) log10(1 + |Q|)",
        &pts,
    )
}

pub fn audit_signs(alphas: &[f64], t2: f64, sigma: Option<f64>, ctx: &PrecisionContext) -> Result<AuditReport> {
    let mut r = AuditReport::new("audit-signs", ctx.label());
    r.param("t2", t2);
    r.param(
        "alpha",
        alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
    );
    for &a in alphas {
        for c in sign_checks(a, t2, ctx)? {
            r.push(c);
        }
        if let Some(s) = sigma {
            let q = q_eval_auto(s, a, ctx);
            r.param(&format!("q.alpha={a}.sigma={s}"), exp_scaled_value(&q));
        }
    }
    for c in f_form_checks(ctx)? {
        r.push(c);
    }
    Ok(r)
}

/// Result of the verdict command: the report and, when asked for, the
/// points of `f(b; ε₀)` over `[b1, b2]`.
pub struct VerdictRun {
    pub report: AuditReport,
    pub plot: Option<Vec<(f64, f64)>>,
}

/// Tolerance for `f + 2 t1 t2 h` relative to its scale.
pub const BALANCE_REL: f64 = 1e-10;

fn verdict_typed<R: Real>(z: &ZeroCandidate, ctx: &PrecisionContext, plot: bool) -> Result<(VerdictRun, bool)> {
    let v = verdict::<R>(z, ctx)?;
    let mut r = AuditReport::new("verdict", v.precision.clone());
    r.param("t1", z.t1)
        .param("t2", z.t2)
        .param("conclusion", v.conclusion.name())
        .param("conditions_met", if v.conditions_met { "true" } else { "false" })
        .param("implied_im_t_squared", v.implied_im_t_squared)
        .param("notes", v.notes.join("; "));
    if let Some(res) = &v.degenerate_residual {
        r.push(Check::within(
            "f_vanishes_on_real_axis",
            anchor::F_REAL_AXIS,
            res,
            &res.zero(),
            res,
            &res.lit(ctx.abs_tol),
        ));
    }
    let Some(trace) = &v.trace else {
        if z.t2 != 0.0 {
            r.push(Check::decided(
                "search_completed",
                anchor::SEARCH,
                Value::text("no trace"),
                Value::text("trace"),
                Value::num(1.0),
                Value::num(0.0),
                false,
                Status::Inconclusive,
            ));
        }
        return Ok((VerdictRun { report: r, plot: None }, true));
    };
    let resolved = trace.resolved();
    r.param("working_digits", f64::from(trace.working_digits));
    r.trace = Some(trace_json(trace));
    let f_abs = trace.f_at_b0.abs();
    r.push(Check::within(
        "f_at_b0_vanishes",
        anchor::B0_ROOT,
        &trace.f_at_b0,
        &f_abs.zero(),
        &f_abs,
        &trace.f_tolerance,
    ));
    let h_abs = trace.h_at_b0.abs();
    let gap = (trace.h_threshold.clone() - h_abs.clone()).max_of(&h_abs.zero());
    r.push(Check::decided(
        "h_at_b0_nonzero",
        anchor::H_NONZERO,
        Value::real(&trace.h_at_b0),
        Value::real(&trace.h_threshold),
        Value::real(&gap),
        Value::num(0.0),
        trace.h_nonzero(),
        Status::Inconclusive,
    ));
    r.push(Check::decided(
        "precision_resolves_cancellation",
        anchor::RESOLUTION,
        Value::num(f64::from(trace.working_digits)),
        Value::num(f64::from(trace.required_digits)),
        Value::num(f64::from(trace.required_digits.saturating_sub(trace.working_digits))),
        Value::num(0.0),
        resolved,
        Status::Inconclusive,
    ));
    if let Some((bal, scale)) = &v.im_balance {
        let tol = scale.lit(BALANCE_REL) * scale.clone();
        r.push(Check::within("imaginary_balance", anchor::IM_BALANCE, bal, &bal.zero(), &bal.abs(), &tol));
    }
    for c in replay(z, trace, ctx)? {
        let status = if c.passed() { Status::Pass } else { Status::Fail };
        r.push(Check {
            name: format!("replay.{}", c.name),
            lhs: Value::real(&c.lhs),
            rhs: Value::real(&c.rhs),
            residual: Value::real(&c.residual),
            tolerance: Value::real(&c.tolerance),
            status,
            paper_anchor: anchor::REPLAY.into(),
        });
    }
    if v.conclusion == Conclusion::T2MustBeZero && !v.conditions_met {
        return Err(AuditError::CaseExhausted("conclusion without its conditions".into()));
    }
    let plot = plot.then(|| {
        let t1 = trace.b0.lit(z.t1.abs());
        let t2 = trace.b0.lit(z.t2.abs());
        let work = if ctx.is_extended() {
            ctx.with_digits(trace.working_digits).unwrap_or(*ctx)
        } else {
            *ctx
        };
        (0..=200)
            .map(|k| {
                let b = trace.b1.clone() + (trace.b2.clone() - trace.b1.clone()) * trace.b1.ratio(k, 200);
                let f = f_split(&b.to_ctx(&work), &trace.eps0.to_ctx(&work), &t1.to_ctx(&work), &t2.to_ctx(&work)).value;
                (b.to_f64(), signed_log(f.sign(), f.ln_abs()))
            })
            .collect()
    });
    Ok((VerdictRun { report: r, plot }, resolved))
}

/// Runs the sign search for `t1 + i t2`, replays its trace and reports.
///
/// Binary64 is used only when it resolves the cancellation in `f` and `h`;
/// otherwise the search is repeated in multi-precision arithmetic.
pub fn verdict_report(t1: f64, t2: f64, ctx: &PrecisionContext, plot: bool) -> Result<VerdictRun> {
    let z = ZeroCandidate::new(t1, t2)?;
    z.check_claimed_zero()?;
    let work = working_context(&z, ctx);
    if work.is_extended() {
        return Ok(verdict_typed::<BigReal>(&z, &work, plot)?.0);
    }
    let (run, resolved) = verdict_typed::<f64>(&z, &work, plot)?;
    if resolved {
        return Ok(run);
    }
    let big = work.with_digits(DEFAULT_EXTENDED_DIGITS)?;
    Ok(verdict_typed::<BigReal>(&z, &big, plot)?.0)
}

pub fn verdict_plot(t1: f64, t2: f64, points: &[(f64, f64)]) -> String {
    line_plot(
        &format!("f(b; eps0) on [b1, b2], t = {t1} + {t2}i"),
        "b",
        "sign(f) log10(1 + |f|)",
        points,
    )
}

/// `count` values spread evenly over `[lo, hi]`.
pub fn alpha_range(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 || !(lo > 12.0 && hi >= lo && hi.is_finite()) {
        return Err(AuditError::InvalidInput(format!(
            "sweep needs 12 < alpha_min <= alpha_max and count >= 1, got [{lo}, {hi}] x {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect())
}

pub const SWEEP_HEADER: [&str; 7] = [
    "alpha",
    "q_b1",
    "q_b2",
    "g_grid_agreeing",
    "f_bound_failures",
    "status",
    "report",
];

/// One report per `α` and the roll-up rows, in grid order.
pub fn sweep(alphas: &[f64], t2: f64, ctx: &PrecisionContext) -> Result<(Vec<AuditReport>, Vec<Vec<String>>)> {
    use rayon::prelude::*;
    let reports: Vec<AuditReport> = alphas
        .par_iter()
        .map(|&a| {
            let mut r = AuditReport::new("sweep", ctx.label());
            r.param("alpha", a).param("t2", t2);
            for c in sign_checks(a, t2, ctx)? {
                r.push(c);
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let rows = reports
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let cell = |i: usize| crate::report::cell(&r.checks[i].lhs);
            let g_agree: f64 = r.checks[2..6]
                .iter()
                .map(|c| match c.lhs {
                    Value::Num(x) => x,
                    _ => 0.0,
                })
                .sum();
            vec![
                crate::report::cell(&Value::num(alphas[k])),
                cell(0),
                cell(1),
                format!("{}", g_agree as u64),
                crate::report::cell(&r.checks[6].residual),
                r.status().as_str().to_string(),
                format!("point_{k:03}.json"),
            ]
        })
        .collect();
    Ok((reports, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_values() {
        assert_eq!(scaled_value(0, 5.0), Value::num(0.0));
        assert_eq!(scaled_value(-1, 0.0), Value::num(-1.0));
        match scaled_value(1, 1000.0) {
            Value::Text(s) => assert!(s.ends_with("e434"), "{s}"),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn method_choice_parses() {
        assert_eq!("both".parse::<MethodChoice>().unwrap(), MethodChoice::Both);
        assert_eq!("fourier".parse::<MethodChoice>().unwrap(), MethodChoice::One(XiMethod::Fourier));
        assert!("fast".parse::<MethodChoice>().is_err());
    }

    #[test]
    fn sign_checks_pass_on_grid() {
        let ctx = PrecisionContext::binary64();
        for a in ALPHA_GRID {
            for c in sign_checks(a, 0.25, &ctx).unwrap() {
                assert_eq!(c.status, Status::Pass, "{}", c.name);
            }
        }
    }

    #[test]
    fn sign_checks_reject_small_alpha() {
        assert!(sign_checks(11.0, 0.25, &PrecisionContext::binary64()).is_err());
    }

    #[test]
    fn alpha_range_is_inclusive() {
        let a = alpha_range(13.0, 22.0, 10).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a[0], 13.0);
        assert_eq!(a[9], 22.0);
        assert!(alpha_range(10.0, 20.0, 3).is_err());
    }

    #[test]
    fn zero_table_round_trips() {
        let text = zero_table_text(&[14.134725141734695, 21.02203963877155], XiMethod::Product);
        let t = crate::zeros::ZeroTable::parse(&text, "mem").unwrap();
        assert_eq!(t.ordinates, vec![14.134725141734695, 21.02203963877155]);
    }
}
