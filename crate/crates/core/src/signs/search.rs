//! Choice of ε and of the point b₀ where `f(b₀; ε₀) = 0`.
//!
//! The case analysis follows the sign pattern of `G` on `[b₁, b₂]`: no zero
//! (G of one sign), or a zero `b'` at an endpoint or inside. With more than one
//! zero the same rules are applied again on the chosen sub-interval; those
//! steps are marked as an extension in the trace.

use std::fmt;

use rayon::prelude::*;

use crate::error::{AuditError, Result};
use crate::numerics::roots::bisect;
use crate::numerics::{PrecisionContext, QuadratureSpec, Real};

use super::forms::{b1_b2, cross_part, f_eval, norm_part, q_merged, remainder};

/// Points in the grid used to scan `G` and `F`.
pub const SCAN_POINTS: usize = 1000;
/// Relative bracket width and relative `|f|` at which the b₀ bisection stops.
pub const SOLVE_TOL: f64 = 1e-10;
/// Relative threshold below which `|F + G/ε₀|` counts as zero.
pub const H_THRESHOLD: f64 = 1e-8;
/// Digits carried beyond the cancellation in `f` so that both `f` and `h`
/// are resolved well below their tolerances.
pub const RESOLUTION_GUARD: u32 = 22;

/// Which branch of the case analysis produced the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    GPositiveEverywhere,
    GNegativeEverywhere,
    InteriorZeroQPositive,
    InteriorZeroQNonpositive,
    ZeroAtB1,
    ZeroAtB2,
}

impl CaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::GPositiveEverywhere => "G-positive-everywhere",
            CaseLabel::GNegativeEverywhere => "G-negative-everywhere",
            CaseLabel::InteriorZeroQPositive => "interior-zero-Q-positive",
            CaseLabel::InteriorZeroQNonpositive => "interior-zero-Q-nonpositive",
            CaseLabel::ZeroAtB1 => "zero-at-b1",
            CaseLabel::ZeroAtB2 => "zero-at-b2",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// ε guaranteeing `f(lo; ε) > 0 > f(hi; ε)` through the merged form of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsBound<R> {
    pub lo: R,
    pub hi: R,
    pub eps: R,
    pub q_lo: R,
    pub q_hi: R,
}

/// `min(1, Q(lo)/(R_lo + 1), |Q(hi)|/(R_hi + 1))` with
/// `R = |t1 sin(t2 b)| + |t2 sh(t1 b)|`.
pub fn eps_for_interval<R: Real>(lo: &R, hi: &R, t1: &R, t2: &R) -> Result<EpsBound<R>> {
    let q_lo = q_merged(lo, t1, t2).value;
    let q_hi = q_merged(hi, t1, t2).value;
    if q_lo.sign() <= 0 || q_hi.sign() >= 0 {
        return Err(AuditError::PremiseFailed {
            q1: q_lo.to_sci(17),
            q2: q_hi.to_sci(17),
        });
    }
    let r_lo = remainder(lo, t1, t2).scale;
    let r_hi = remainder(hi, t1, t2).scale;
    let one = lo.one();
    let eps = one
        .min_of(&(q_lo.clone() / (r_lo + one.clone())))
        .min_of(&(q_hi.abs() / (r_hi + one.clone())));
    Ok(EpsBound {
        lo: lo.clone(),
        hi: hi.clone(),
        eps,
        q_lo,
        q_hi,
    })
}

/// `G` and `F` sampled on a uniform grid over `[b₁, b₂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scan<R> {
    pub b: Vec<R>,
    pub g: Vec<R>,
    pub f: Vec<R>,
}

impl<R: Real> Scan<R> {
    pub fn step(&self) -> R {
        self.b[1].clone() - self.b[0].clone()
    }

    /// Indices of grid points inside `[lo, hi]`.
    fn within(&self, lo: &R, hi: &R) -> Vec<usize> {
        (0..self.b.len()).filter(|&k| self.b[k] >= *lo && self.b[k] <= *hi).collect()
    }
}

pub fn scan<R: Real>(b1: &R, b2: &R, t1: &R, t2: &R, points: usize, quad: &QuadratureSpec) -> Result<Scan<R>> {
    let n = points.max(2);
    let width = b2.clone() - b1.clone();
    let b: Vec<R> = (0..n)
        .map(|k| {
            if k + 1 == n {
                b2.clone()
            } else {
                b1.clone() + width.clone() * b1.ratio(k as i64, (n - 1) as i64)
            }
        })
        .collect();
    let g = b
        .par_iter()
        .map(|x| cross_part(x, t1, t2, quad))
        .collect::<Result<Vec<R>>>()?;
    let f = b.iter().map(|x| norm_part(x, t1, t2)).collect();
    Ok(Scan { b, g, f })
}

/// Output of the ε selection on `[b₁, b₂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSelection<R> {
    pub b1: R,
    pub b2: R,
    pub eps1: EpsBound<R>,
    /// `c₀/max F` when `G ≤ −c₀` on the whole interval.
    pub eps2: Option<R>,
    /// `min |G|` on the grid when `G` keeps one sign.
    pub c0: Option<R>,
    pub scan: Scan<R>,
}

pub fn select_eps<R: Real>(
    t1: &R,
    t2: &R,
    quad: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<EpsSelection<R>> {
    let (b1, b2) = b1_b2(t2, ctx)?;
    let eps1 = eps_for_interval(&b1, &b2, t1, t2)?;
    let scan = scan(&b1, &b2, t1, t2, SCAN_POINTS, quad)?;
    let all: Vec<usize> = (0..scan.b.len()).collect();
    let (eps2, c0) = match constant_sign(&scan, &all) {
        Some(s) => {
            let c0 = min_abs(&scan, &all);
            if s < 0 {
                (Some(c0.clone() / max_f(&scan, &all)), Some(c0))
            } else {
                (None, Some(c0))
            }
        }
        None => (None, None),
    };
    Ok(EpsSelection {
        b1,
        b2,
        eps1,
        eps2,
        c0,
        scan,
    })
}

fn constant_sign<R: Real>(s: &Scan<R>, idx: &[usize]) -> Option<i32> {
    let first = s.g[idx[0]].sign();
    if first != 0 && idx.iter().all(|&k| s.g[k].sign() == first) {
        Some(first)
    } else {
        None
    }
}

fn min_abs<R: Real>(s: &Scan<R>, idx: &[usize]) -> R {
    idx.iter()
        .map(|&k| s.g[k].abs())
        .reduce(|a, b| a.min_of(&b))
        .expect("non-empty grid")
}

fn max_f<R: Real>(s: &Scan<R>, idx: &[usize]) -> R {
    idx.iter()
        .map(|&k| s.f[k].clone())
        .reduce(|a, b| a.max_of(&b))
        .expect("non-empty grid")
}

/// Every step taken by the search, with the values needed to replay it.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace<R> {
    pub case_label: CaseLabel,
    /// Labels of every level of the case analysis, outermost first.
    pub case_path: Vec<CaseLabel>,
    pub b1: R,
    pub b2: R,
    /// Refined zeros of `G` on `[b₁, b₂]`.
    pub g_zeros: Vec<R>,
    /// The zero that drove the first case split.
    pub b_prime: Option<R>,
    /// `min |G|` on the final sub-interval grid.
    pub c0: R,
    pub eps1: R,
    pub eps2: Option<R>,
    pub eps0: R,
    /// Every ε chosen for a sub-interval, in order.
    pub reselections: Vec<EpsBound<R>>,
    /// Interval handed to the b₀ bisection.
    pub interval: (R, R),
    /// True when the case interval failed its sign premise and `[b₁, b₂]` was used.
    pub fallback: bool,
    pub b0: R,
    pub f_at_b0: R,
    pub f_tolerance: R,
    pub norm_part_at_b0: R,
    pub cross_part_at_b0: R,
    /// `F(b₀) + G(b₀)/ε₀`.
    pub h_at_b0: R,
    pub h_threshold: R,
    pub bisection_steps: usize,
    /// Decimal digits the b₀ solve and the `h` evaluation were carried out in.
    pub working_digits: u32,
    /// Digits needed to resolve `f` and `h` against their tolerances.
    pub required_digits: u32,
    pub notes: Vec<String>,
}

impl<R: Real> SearchTrace<R> {
    pub fn resolved(&self) -> bool {
        self.working_digits >= self.required_digits
    }

    /// True when `|F(b₀) + G(b₀)/ε₀|` clears the zero threshold at a precision
    /// that resolves it.
    pub fn h_nonzero(&self) -> bool {
        self.resolved() && self.h_at_b0.abs() > self.h_threshold
    }
}

struct Plan<R> {
    path: Vec<CaseLabel>,
    lo: R,
    hi: R,
    eps0: R,
    eps2: Option<R>,
    c0: R,
    b_prime: Option<R>,
    reselections: Vec<EpsBound<R>>,
    notes: Vec<String>,
    premise_ok: bool,
}

/// Refines each sign change of `G` on the scan grid.
fn g_zeros<R: Real>(s: &Scan<R>, t1: &R, t2: &R, quad: &QuadratureSpec) -> Result<Vec<R>> {
    let mut out = Vec::new();
    let tol = (s.b[s.b.len() - 1].clone() - s.b[0].clone()) * s.b[0].lit(SOLVE_TOL);
    for k in 0..s.b.len() {
        if s.g[k].is_zero() {
            out.push(s.b[k].clone());
            continue;
        }
        if k + 1 < s.b.len() && !s.g[k + 1].is_zero() && s.g[k].sign() != s.g[k + 1].sign() {
            let r = bisect(
                |x: &R| cross_part(x, t1, t2, quad),
                s.b[k].clone(),
                s.b[k + 1].clone(),
                s.g[k].clone(),
                |w, _, _| *w < tol,
                200,
            )?;
            out.push(r.root);
        }
    }
    Ok(out)
}

/// Runs the case analysis on `[lo, hi]` with ε capped at `eps_cap`.
#[allow(clippy::too_many_arguments)]
fn plan<R: Real>(
    s: &Scan<R>,
    zeros: &[R],
    lo: R,
    hi: R,
    eps_cap: R,
    t1: &R,
    t2: &R,
    ctx: &PrecisionContext,
    mut acc: Plan<R>,
) -> Result<Plan<R>> {
    let idx = s.within(&lo, &hi);
    let inside: Vec<&R> = zeros.iter().filter(|z| **z >= lo && **z <= hi).collect();
    if idx.len() < 2 {
        return Err(AuditError::CaseExhausted(format!(
            "sub-interval [{}, {}] holds fewer than two grid points",
            lo.to_sci(10),
            hi.to_sci(10)
        )));
    }
    if inside.is_empty() {
        let sign = constant_sign(s, &idx).ok_or_else(|| {
            AuditError::CaseExhausted("G changes sign without a refined zero".into())
        })?;
        let c0 = min_abs(s, &idx);
        if sign > 0 {
            acc.path.push(CaseLabel::GPositiveEverywhere);
            acc.eps0 = eps_cap;
        } else {
            acc.path.push(CaseLabel::GNegativeEverywhere);
            let eps2 = c0.clone() / max_f(s, &idx);
            acc.eps0 = eps_cap.min_of(&eps2) * eps2.ratio(1, 2);
            acc.eps2 = Some(eps2);
        }
        acc.c0 = c0;
        acc.lo = lo;
        acc.hi = hi;
        return Ok(acc);
    }
    let bp = inside[0].clone();
    if !acc.path.is_empty() {
        acc.notes
            .push("extension: G has another zero; the case rules were applied again on the sub-interval".into());
    }
    if acc.b_prime.is_none() {
        acc.b_prime = Some(bp.clone());
    }
    let step = s.step();
    let at_lo = (bp.clone() - lo.clone()).abs() <= step;
    let at_hi = (hi.clone() - bp.clone()).abs() <= step;
    // Grid points strictly right / left of b' that clear every zero in between.
    let right: Vec<usize> = idx.iter().copied().filter(|&k| s.b[k] > bp.clone() + step.ratio(1, 2)).collect();
    let left: Vec<usize> = idx.iter().copied().rev().filter(|&k| s.b[k] < bp.clone() - step.ratio(1, 2)).collect();
    let f_at = |b: &R, e: &R| f_eval(b, e, t1, t2, ctx).map(|v| v.value);

    let move_right = |label: CaseLabel, acc: &mut Plan<R>, need_q: bool| -> Result<Option<R>> {
        acc.path.push(label);
        for &k in &right {
            let b = &s.b[k];
            let ok = if need_q {
                q_merged(b, t1, t2).value.sign() > 0
            } else {
                f_at(b, &eps_cap)?.sign() > 0
            };
            if ok {
                return Ok(Some(b.clone()));
            }
        }
        Ok(None)
    };
    let move_left = |label: CaseLabel, acc: &mut Plan<R>| -> Result<Option<R>> {
        acc.path.push(label);
        for &k in &left {
            if f_at(&s.b[k], &eps_cap)?.sign() < 0 {
                return Ok(Some(s.b[k].clone()));
            }
        }
        Ok(None)
    };

    let (new_lo, new_hi, label_note) = if at_lo && !at_hi {
        match move_right(CaseLabel::ZeroAtB1, &mut acc, false)? {
            Some(b) => (b, hi.clone(), "b1' chosen right of the zero with f(b1'; eps) > 0"),
            None => return Ok(premise_failure(acc, "no grid point right of the zero has f > 0")),
        }
    } else if at_hi && !at_lo {
        match move_left(CaseLabel::ZeroAtB2, &mut acc)? {
            Some(b) => (lo.clone(), b, "b2' chosen left of the zero with f(b2'; eps) < 0"),
            None => return Ok(premise_failure(acc, "no grid point left of the zero has f < 0")),
        }
    } else if q_merged(&bp, t1, t2).value.sign() > 0 {
        match move_right(CaseLabel::InteriorZeroQPositive, &mut acc, true)? {
            Some(b) => (b, hi.clone(), "b1' chosen right of the zero with Q(b1') > 0"),
            None => {
                return Ok(premise_failure(
                    acc,
                    "Q(b') > 0 but no grid point right of b' has Q > 0",
                ))
            }
        }
    } else {
        match move_left(CaseLabel::InteriorZeroQNonpositive, &mut acc)? {
            Some(b) => (lo.clone(), b, "b2' chosen left of the zero with f(b2'; eps1) < 0"),
            None => {
                return Ok(premise_failure(
                    acc,
                    "Q(b') <= 0 but no grid point left of b' has f(.; eps1) < 0",
                ))
            }
        }
    };
    acc.notes.push(label_note.to_string());
    // ε is re-derived for the new interval when Q keeps the premise signs there.
    let cap = match eps_for_interval(&new_lo, &new_hi, t1, t2) {
        Ok(bound) => {
            let e = eps_cap.min_of(&bound.eps);
            acc.reselections.push(bound);
            e
        }
        Err(_) => {
            acc.notes.push(format!(
                "Q does not change sign as required on [{}, {}]; eps kept at {}",
                new_lo.to_sci(10),
                new_hi.to_sci(10),
                eps_cap.to_sci(6)
            ));
            eps_cap
        }
    };
    plan(s, zeros, new_lo, new_hi, cap, t1, t2, ctx, acc)
}

fn premise_failure<R: Real>(mut acc: Plan<R>, why: &str) -> Plan<R> {
    acc.notes.push(format!("case premise failed: {why}"));
    acc.premise_ok = false;
    acc
}

/// Case analysis plus bisection for `b₀`, starting from a finished ε selection.
/// Digits needed so that rounding in `f(·; ε)` at the points `bs` stays far
/// below the b₀ tolerance and the `h` threshold.
///
/// `f = (2/ε)Q − R` cancels down to the size of `R` near b₀ while its terms
/// are of size `(2/ε)·Σ|Q terms|`; the ratio is the number of digits lost.
pub fn required_digits<R: Real>(t1: &R, t2: &R, eps: &R, bs: &[R]) -> u32 {
    let ln_k = (t1.lit(2.0) / eps.clone()).ln_abs();
    let lost = bs
        .iter()
        .map(|b| {
            let q = q_merged(b, t1, t2).scale.ln_abs();
            let r = remainder(b, t1, t2).value.ln_abs().max(0.0);
            (ln_k + q - r) / std::f64::consts::LN_10
        })
        .fold(0.0f64, f64::max);
    lost.ceil().max(0.0) as u32 + RESOLUTION_GUARD
}

pub fn find_b0<R: Real>(
    t1: &R,
    t2: &R,
    sel: &EpsSelection<R>,
    quad: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<SearchTrace<R>> {
    let s = &sel.scan;
    let zeros = g_zeros(s, t1, t2, quad)?;
    let eps1 = sel.eps1.eps.clone();
    let start = Plan {
        path: Vec::new(),
        lo: sel.b1.clone(),
        hi: sel.b2.clone(),
        eps0: eps1.clone(),
        eps2: None,
        c0: t1.zero(),
        b_prime: None,
        reselections: vec![sel.eps1.clone()],
        notes: Vec::new(),
        premise_ok: true,
    };
    let mut p = plan(s, &zeros, sel.b1.clone(), sel.b2.clone(), eps1.clone(), t1, t2, ctx, start)?;
    if p.path.is_empty() {
        return Err(AuditError::CaseExhausted("no case applied".into()));
    }
    if p.c0.is_zero() {
        let all: Vec<usize> = (0..s.b.len()).collect();
        p.c0 = min_abs(s, &all);
    }
    let mut fallback = false;
    if p.premise_ok {
        let flo = f_eval(&p.lo, &p.eps0, t1, t2, ctx)?.value;
        let fhi = f_eval(&p.hi, &p.eps0, t1, t2, ctx)?.value;
        if !(flo.sign() > 0 && fhi.sign() < 0) {
            p.notes.push(format!(
                "case premise failed: f(lo; eps0) = {}, f(hi; eps0) = {} on [{}, {}]",
                flo.to_sci(6),
                fhi.to_sci(6),
                p.lo.to_sci(10),
                p.hi.to_sci(10)
            ));
            p.premise_ok = false;
        }
    }
    if !p.premise_ok {
        fallback = true;
        p.lo = sel.b1.clone();
        p.hi = sel.b2.clone();
        p.notes.push("falling back to [b1, b2] with the same eps0".into());
    }

    // The solve runs at whatever precision resolves f on the chosen interval.
    let mut probe: Vec<R> = s.within(&p.lo, &p.hi).into_iter().map(|k| s.b[k].clone()).collect();
    probe.push(p.lo.clone());
    probe.push(p.hi.clone());
    let required = required_digits(t1, t2, &p.eps0, &probe);
    let work = if ctx.is_extended() && required > ctx.digits() {
        p.notes.push(format!(
            "b0 solve raised from {} to {} digits to resolve f and h",
            ctx.digits(),
            required
        ));
        ctx.with_digits(required)?
    } else {
        *ctx
    };
    if required > work.digits() {
        p.notes.push(format!(
            "{} digits are needed to resolve f and h near b0 but only {} are carried",
            required,
            work.digits()
        ));
    }
    let t1 = &t1.to_ctx(&work);
    let t2 = &t2.to_ctx(&work);
    let (b1, b2) = b1_b2(t2, &work)?;
    let lo = if fallback { b1.clone() } else { p.lo.to_ctx(&work) };
    let hi = if fallback { b2.clone() } else { p.hi.to_ctx(&work) };
    let eps0 = p.eps0.to_ctx(&work);
    let quad = &QuadratureSpec::for_context(&work);
    let f_at = |b: &R| f_eval(b, &eps0, t1, t2, &work).map(|v| v.value);

    let f_lo = f_at(&lo)?;
    let f_hi = f_at(&hi)?;
    if !(f_lo.sign() > 0 && f_hi.sign() < 0) {
        return Err(AuditError::CaseExhausted(format!(
            "f(.; eps0) has no sign change on [{}, {}]: {} and {}",
            lo.to_sci(10),
            hi.to_sci(10),
            f_lo.to_sci(6),
            f_hi.to_sci(6)
        )));
    }
    let width_tol = (b2.clone() - b1.clone()) * t1.lit(SOLVE_TOL);
    let f_tol = |b: &R| {
        let q = q_merged(b, t1, t2).value.abs() * b.lit(2.0) / eps0.clone();
        q.max_of(&b.one()) * b.lit(SOLVE_TOL)
    };
    let bis = bisect(
        |b: &R| f_at(b),
        lo.clone(),
        hi.clone(),
        f_lo,
        |w, b, v| *w < width_tol && v.abs() < f_tol(b),
        2000,
    )?;
    let b0 = bis.root.clone();
    let f_tolerance = f_tol(&b0);
    let fv = bis.value.clone();
    let norm = norm_part(&b0, t1, t2);
    let cross = cross_part(&b0, t1, t2, quad)?;
    let h = norm.clone() + cross.clone() / eps0.clone();
    let h_threshold = norm.max_of(&norm.one()) * norm.lit(H_THRESHOLD);
    if fv.abs() >= f_tolerance {
        p.notes.push(format!(
            "bisection stopped at floating resolution with |f| = {} above tolerance {}",
            fv.abs().to_sci(6),
            f_tolerance.to_sci(6)
        ));
    }
    Ok(SearchTrace {
        case_label: p.path[0],
        case_path: p.path,
        b1,
        b2,
        g_zeros: zeros,
        b_prime: p.b_prime,
        c0: p.c0,
        eps1,
        eps2: p.eps2.or_else(|| sel.eps2.clone()),
        eps0,
        reselections: p.reselections,
        interval: (lo, hi),
        fallback,
        b0,
        f_at_b0: fv,
        f_tolerance,
        norm_part_at_b0: norm,
        cross_part_at_b0: cross,
        h_at_b0: h,
        h_threshold,
        bisection_steps: bis.steps,
        working_digits: work.digits(),
        required_digits: required,
        notes: p.notes,
    })
}
