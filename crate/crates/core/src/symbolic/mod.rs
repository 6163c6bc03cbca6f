//! Exact algebra over products of half-argument hyperbolic and trigonometric
//! functions, used to re-derive the imaginary part of `P(b; ε)` and follow it
//! down to the quadratics `g1..g4`.
//!
//! Coefficients are exact rationals in `t1, t2, α, σ, b, 1/ε` and the inverse
//! norms, so a derived step either equals its printed form or the mismatch is
//! named basis by basis.

pub mod audit;
pub mod derive;
pub mod expr;
pub mod poly;
pub mod reference;

pub use audit::{run, CoefficientDiff, FormComparison, MatchStatus, RoundTrip, SymbolicAudit};
pub use derive::{
    alpha_grid, derive_im_p, expand_complex_powers, g_sign_analysis, merge_terms, q_in_sigma, substitute_alpha,
    GPolySet, GSignReport,
};
pub use expr::{Basis, TrigHypExpr};
pub use poly::{RationalPoly, Var, VarValues};
