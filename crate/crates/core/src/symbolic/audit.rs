//! Derived chain against the printed forms: exact coefficient diffs, numeric
//! round trips at random points, and the `g` sign verdicts.

use std::f64::consts::PI;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::derive::{
    alpha_grid, derive_im_p, discriminant, g_sign_analysis, merge_terms, q_in_sigma, q_sigma_expr,
    substitute_alpha, GPolySet, GSignReport, MergeResult,
};
use super::expr::TrigHypExpr;
use super::poly::{RationalPoly, VarValues};
use super::reference;
use crate::error::Result;
use crate::numerics::{BigReal, PrecisionContext, Real};
use crate::signs::{f_eval, q_merged};

/// Digits used for the numeric round trips.
pub const ROUND_TRIP_DIGITS: u32 = 50;
pub const ROUND_TRIP_POINTS: usize = 20;
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
const SEED: u64 = 0x5eed_2216;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchStatus {
    Match,
    Diff,
}

impl MatchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchStatus::Match => "match",
            MatchStatus::Diff => "diff",
        }
    }
}

/// One basis product (or named polynomial) whose derived and printed
/// coefficients differ.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientDiff {
    pub basis: String,
    pub derived: String,
    pub printed: String,
}

/// A derived step compared exactly against its printed transcription.
#[derive(Clone, Debug, PartialEq)]
pub struct FormComparison {
    pub step: &'static str,
    pub reference: &'static str,
    pub status: MatchStatus,
    pub diffs: Vec<CoefficientDiff>,
}

impl FormComparison {
    fn of_exprs(step: &'static str, reference: &'static str, derived: &TrigHypExpr, printed: &TrigHypExpr) -> Self {
        let mut bases = derived.bases();
        bases.extend(printed.bases());
        bases.sort();
        bases.dedup();
        let diffs: Vec<_> = bases
            .into_iter()
            .filter_map(|b| {
                let (d, p) = (derived.coeff(&b), printed.coeff(&b));
                (!d.equivalent(&p)).then(|| CoefficientDiff {
                    basis: b.to_string(),
                    derived: d.to_string(),
                    printed: p.to_string(),
                })
            })
            .collect();
        Self::finish(step, reference, diffs)
    }

    fn of_polys(step: &'static str, reference: &'static str, pairs: &[(&str, &RationalPoly, &RationalPoly)]) -> Self {
        let diffs = pairs
            .iter()
            .filter(|(_, d, p)| !d.equivalent(p))
            .map(|(name, d, p)| CoefficientDiff {
                basis: name.to_string(),
                derived: d.to_string(),
                printed: p.to_string(),
            })
            .collect();
        Self::finish(step, reference, diffs)
    }

    fn finish(step: &'static str, reference: &'static str, diffs: Vec<CoefficientDiff>) -> Self {
        let status = if diffs.is_empty() { MatchStatus::Match } else { MatchStatus::Diff };
        FormComparison {
            step,
            reference,
            status,
            diffs,
        }
    }
}

/// Worst relative disagreement of one step against its source over the
/// random points.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrip {
    pub step: &'static str,
    pub points: usize,
    pub max_rel: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSignReport {
    pub alpha: BigRational,
    pub reports: Vec<GSignReport>,
}

/// Everything the symbolic audit establishes.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicAudit {
    pub comparisons: Vec<FormComparison>,
    pub round_trips: Vec<RoundTrip>,
    /// Derived `Im P` is the exact zero once `t2 = 0`.
    pub real_axis_zero: bool,
    /// The merge split off exactly `−[α t2 sin(t2 b) + t2 sh(α t2 b)]`.
    pub remainder_matches: bool,
    pub g: GPolySet,
    pub discriminants: [RationalPoly; 4],
    pub signs: Vec<AlphaSignReport>,
}

impl SymbolicAudit {
    pub fn printed_chain_matches(&self) -> bool {
        self.comparisons.iter().all(|c| c.status == MatchStatus::Match)
    }

    pub fn round_trips_pass(&self) -> bool {
        self.round_trips.iter().all(|r| r.passed)
    }

    pub fn sign_claims_hold(&self) -> bool {
        self.signs
            .iter()
            .flat_map(|s| &s.reports)
            .all(|r| r.claim_holds && r.sweep.consistent())
    }

    /// Derivation is internally sound; printed-form agreement is reported
    /// separately.
    pub fn derivation_sound(&self) -> bool {
        self.round_trips_pass() && self.real_axis_zero && self.remainder_matches
    }
}

/// The derived chain, each step kept for comparison.
pub struct DerivedChain {
    pub im_p: TrigHypExpr,
    pub alpha_form: TrigHypExpr,
    pub merge: MergeResult,
    pub q_sigma: TrigHypExpr,
    pub g: GPolySet,
}

impl DerivedChain {
    pub fn build() -> Result<Self> {
        let im_p = derive_im_p()?;
        let alpha_form = substitute_alpha(&im_p)?;
        let merge = merge_terms(&alpha_form)?;
        let q_sigma = q_sigma_expr(&merge.q)?;
        let g = q_in_sigma(&merge.q)?;
        Ok(DerivedChain {
            im_p,
            alpha_form,
            merge,
            q_sigma,
            g,
        })
    }
}

pub fn compare_printed(chain: &DerivedChain) -> Result<Vec<FormComparison>> {
    let printed_g = reference::printed_g()?;
    let g1_disc = discriminant(&chain.g.g1)?;
    Ok(vec![
        FormComparison::of_exprs(
            "imaginary_part",
            "expanded imaginary part in t1, t2",
            &chain.im_p,
            &reference::printed_im_part()?,
        ),
        FormComparison::of_exprs(
            "alpha_substitution",
            "imaginary part right after t1 = alpha t2",
            &chain.alpha_form,
            &reference::printed_alpha_substituted()?,
        ),
        FormComparison::of_exprs(
            "alpha_form",
            "alpha form multiplied out",
            &chain.alpha_form,
            &reference::printed_alpha_form()?,
        ),
        FormComparison::of_exprs(
            "merge_pairs",
            "merged form with paired brackets",
            &chain.merge.merged,
            &reference::printed_merged_pairs()?,
        ),
        FormComparison::of_exprs(
            "merged",
            "(2/eps) Q(b) - [alpha t2 sin(t2 b) + t2 sh(alpha t2 b)]",
            &chain.merge.merged,
            &reference::printed_merged()?,
        ),
        FormComparison::of_exprs("q", "Q(b) brackets", &chain.merge.q, &reference::printed_q()?),
        FormComparison::of_exprs(
            "q_sigma",
            "Q(2 sigma / t2) brackets",
            &chain.q_sigma,
            &reference::printed_q_sigma()?,
        ),
        FormComparison::of_exprs(
            "q_sigma_common",
            "Q(2 sigma / t2) over (alpha^2 + 1)^3",
            &chain.q_sigma,
            &reference::printed_q_sigma_common()?,
        ),
        FormComparison::of_polys(
            "g_polynomials",
            "g1..g4 as quadratics in sigma",
            &[
                ("g1", &chain.g.g1, &printed_g[0]),
                ("g2", &chain.g.g2, &printed_g[1]),
                ("g3", &chain.g.g3, &printed_g[2]),
                ("g4", &chain.g.g4, &printed_g[3]),
            ],
        ),
        FormComparison::of_polys(
            "g1_discriminant",
            "discriminant inequality for g1",
            &[("B^2 - 4AC", &g1_disc, &reference::printed_g1_discriminant()?)],
        ),
    ])
}

/// A random physical point with `t2` of either sign.
///
/// `b` is drawn through the hyperbolic argument `t1 b/2 ∈ [0.05, 3]`: for
/// larger arguments `t2 sh(t1 b)` outweighs every `1/ε` term by `e^{t1 b/2}`
/// and a relative comparison stops seeing them.
#[derive(Clone, Copy, Debug)]
struct Point {
    t1: f64,
    t2: f64,
    b: f64,
    eps: f64,
}

fn random_points(n: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n)
        .map(|_| {
            let mag = rng.gen_range(0.01..0.5);
            let t2 = if rng.gen_bool(0.5) { mag } else { -mag };
            let t1 = rng.gen_range(6.5..30.0);
            let x: f64 = rng.gen_range(0.05..=3.0);
            Point {
                t1,
                t2,
                b: 2.0 * x / t1,
                eps: rng.gen_range(0.01..=10.0),
            }
        })
        .collect()
}

struct Evaluated {
    vals: VarValues<BigReal>,
    x: BigReal,
    y: BigReal,
    b: BigReal,
    eps: BigReal,
    t1: BigReal,
    t2: BigReal,
}

fn lift(p: Point, ctx: &PrecisionContext) -> Evaluated {
    let big = |x: f64| BigReal::from_ctx(x, ctx);
    let (t1, t2, b, eps) = (big(p.t1), big(p.t2), big(p.b), big(p.eps));
    let half = b.ratio(1, 2);
    Evaluated {
        vals: VarValues::physical(&t1, &t2, &b, &eps),
        x: t1.clone() * b.clone() * half.clone(),
        y: t2.clone() * b.clone() * half,
        b,
        eps,
        t1,
        t2,
    }
}

fn rel(a: &BigReal, b: &BigReal) -> f64 {
    let scale = a.abs().max_of(&b.abs());
    if scale.is_zero() {
        return 0.0;
    }
    ((a.clone() - b.clone()).abs() / scale).to_f64()
}

fn round_trip<F>(step: &'static str, points: &[Point], ctx: &PrecisionContext, mut pair: F) -> Result<RoundTrip>
where
    F: FnMut(&Evaluated) -> Result<(BigReal, BigReal)>,
{
    let mut max_rel: f64 = 0.0;
    for &p in points {
        let (a, b) = pair(&lift(p, ctx))?;
        max_rel = max_rel.max(rel(&a, &b));
    }
    Ok(RoundTrip {
        step,
        points: points.len(),
        max_rel,
        tolerance: ROUND_TRIP_TOLERANCE,
        passed: max_rel <= ROUND_TRIP_TOLERANCE,
    })
}

pub fn round_trips(chain: &DerivedChain) -> Result<Vec<RoundTrip>> {
    let ctx = PrecisionContext::extended(ROUND_TRIP_DIGITS)?;
    let pts = random_points(ROUND_TRIP_POINTS);
    let sigma_pair = |e: &Evaluated| {
        let alpha = e.t1.clone() / e.t2.clone();
        let sigma = e.y.clone();
        (alpha, sigma)
    };
    Ok(vec![
        round_trip("imaginary_part", &pts, &ctx, |e| {
            let derived = chain.im_p.eval(&e.vals, &e.x, &e.y)?;
            let direct = f_eval(&e.b, &e.eps, &e.t1, &e.t2, &ctx)?.value;
            Ok((derived, direct))
        })?,
        round_trip("imaginary_part_eps_slope", &pts, &ctx, |e| {
            // f(ε) − f(2ε) drops the ε-free terms and leaves (1/ε) Q.
            let eps2 = e.eps.clone() * e.eps.ratio(2, 1);
            let other = VarValues::physical(&e.t1, &e.t2, &e.b, &eps2);
            let derived = chain.im_p.eval(&e.vals, &e.x, &e.y)? - chain.im_p.eval(&other, &e.x, &e.y)?;
            let direct = f_eval(&e.b, &e.eps, &e.t1, &e.t2, &ctx)?.value
                - f_eval(&e.b, &eps2, &e.t1, &e.t2, &ctx)?.value;
            Ok((derived, direct))
        })?,
        round_trip("alpha_substitution", &pts, &ctx, |e| {
            Ok((
                chain.alpha_form.eval(&e.vals, &e.x, &e.y)?,
                chain.im_p.eval(&e.vals, &e.x, &e.y)?,
            ))
        })?,
        round_trip("merge", &pts, &ctx, |e| {
            Ok((
                chain.merge.merged.eval(&e.vals, &e.x, &e.y)?,
                chain.alpha_form.eval(&e.vals, &e.x, &e.y)?,
            ))
        })?,
        round_trip("q", &pts, &ctx, |e| {
            Ok((
                chain.merge.q.eval(&e.vals, &e.x, &e.y)?,
                q_merged(&e.b, &e.t1, &e.t2).value,
            ))
        })?,
        round_trip("sigma_substitution", &pts, &ctx, |e| {
            let (alpha, sigma) = sigma_pair(e);
            let hx = alpha.clone() * sigma.clone();
            Ok((
                chain.q_sigma.eval(&VarValues::sigma_form(&alpha, &sigma), &hx, &sigma)?,
                chain.merge.q.eval(&e.vals, &e.x, &e.y)?,
            ))
        })?,
        round_trip("g_assembly", &pts, &ctx, |e| {
            let (alpha, sigma) = sigma_pair(e);
            Ok((chain.g.assemble(&alpha, &sigma)?, chain.merge.q.eval(&e.vals, &e.x, &e.y)?))
        })?,
        round_trip("q_at_three_half_pi", &pts, &ctx, |e| {
            // cos σ = 0 and sin σ = −1 leave −(e^{ασ} g1 + e^{−ασ} g3)/2 over (α² + 1)³.
            let alpha = e.t1.clone() / e.t2.clone();
            let sigma = alpha.pi() * alpha.ratio(3, 2);
            let vals = VarValues::sigma_form(&alpha, &sigma);
            let up = (alpha.clone() * sigma.clone()).exp();
            let down = alpha.one() / up.clone();
            let g1 = chain.g.g1.eval(&vals, &alpha)?;
            let g3 = chain.g.g3.eval(&vals, &alpha)?;
            let reduced = -(up * g1 + down * g3) * alpha.ratio(1, 2)
                / (alpha.square() + alpha.one()).powi(3);
            let hx = alpha.clone() * sigma.clone();
            Ok((reduced, chain.q_sigma.eval(&vals, &hx, &sigma)?))
        })?,
    ])
}

pub fn run() -> Result<SymbolicAudit> {
    let chain = DerivedChain::build()?;
    let comparisons = compare_printed(&chain)?;
    let round_trips = round_trips(&chain)?;
    let real_axis_zero = chain.im_p.at_t2_zero()?.cleared().is_zero();
    let g = &chain.g;
    let discriminants = [
        discriminant(&g.g1)?,
        discriminant(&g.g2)?,
        discriminant(&g.g3)?,
        discriminant(&g.g4)?,
    ];
    let signs = alpha_grid()
        .into_iter()
        .map(|alpha| {
            Ok(AlphaSignReport {
                reports: g_sign_analysis(g, &alpha)?,
                alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolicAudit {
        comparisons,
        round_trips,
        real_axis_zero,
        remainder_matches: chain.merge.remainder_matches,
        g: chain.g.clone(),
        discriminants,
        signs,
    })
}

/// `σ` grid used by the binary64 sweep, for reporting.
pub fn sweep_description() -> String {
    format!("sigma = k*pi/50, k = 1..={}, up to {:.4}", super::derive::SWEEP_POINTS, 10.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_audit_is_clean() {
        let audit = run().unwrap();
        for c in &audit.comparisons {
            assert_eq!(c.status, MatchStatus::Match, "{}: {:?}", c.step, c.diffs);
        }
        for r in &audit.round_trips {
            assert!(r.passed, "{} max_rel {}", r.step, r.max_rel);
            assert_eq!(r.points, ROUND_TRIP_POINTS);
        }
        assert!(audit.real_axis_zero);
        assert!(audit.remainder_matches);
        assert!(audit.sign_claims_hold());
        assert_eq!(audit.signs.len(), alpha_grid().len());
    }

    #[test]
    fn a_changed_printed_coefficient_is_named_in_the_diff() {
        let chain = DerivedChain::build().unwrap();
        let printed = reference::printed_q().unwrap();
        let basis = super::super::derive::CH_SIN;
        let altered = printed + TrigHypExpr::term(basis, RationalPoly::parse("alpha").unwrap());
        let cmp = FormComparison::of_exprs("q", "altered", &chain.merge.q, &altered);
        assert_eq!(cmp.status, MatchStatus::Diff);
        assert_eq!(cmp.diffs.len(), 1);
        assert_eq!(cmp.diffs[0].basis, basis.to_string());
    }

    #[test]
    fn random_points_are_reproducible_and_in_range() {
        let a = random_points(20);
        let b = random_points(20);
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.t1, q.t1);
            assert!((6.5..30.0).contains(&p.t1));
            assert!((0.01..0.5).contains(&p.t2.abs()));
            let x = p.t1 * p.b / 2.0;
            assert!((0.05 - 1e-12..=3.0 + 1e-12).contains(&x));
            assert!(p.eps >= 0.01 && p.eps <= 10.0);
        }
    }
}
