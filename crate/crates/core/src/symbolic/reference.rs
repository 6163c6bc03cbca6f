//! Transcriptions of the printed forms, kept as data so the derivation can be
//! diffed against them.
//!
//! Each bracket is copied term by term in its printed grouping; nothing here is
//! simplified. The symbol `inv_norm` stands for `1/(tt̄)` and `inv_alpha_norm`
//! for `1/(α² + 1)`.

use super::derive::{CH_COS, CH_SIN, SH_COS, SH_FULL, SH_SIN, SIN_FULL};
use super::expr::TrigHypExpr;
use super::poly::RationalPoly;
use crate::error::Result;

/// Prefixes `pre` to every coefficient in `pairs`.
fn bracket(pre: &str, pairs: &[(super::expr::Basis, &str)]) -> Result<TrigHypExpr> {
    let pre = RationalPoly::parse(pre)?;
    Ok(TrigHypExpr::parse_terms(pairs)?.scale(&pre))
}

fn sum(parts: Vec<TrigHypExpr>) -> TrigHypExpr {
    parts.into_iter().fold(TrigHypExpr::zero(), |a, b| a + b)
}

/// The expanded imaginary part `f(b; ε)` in `t1, t2`.
pub fn printed_im_part() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "-inv_eps (b/2)^2 inv_norm",
            &[
                (CH_SIN, "((t1^2 - t2^2)^2 - (2 t1 t2)^2) * (-1)"),
                (SH_COS, "2 (t1^2 - t2^2) (2 t1 t2)"),
            ],
        )?,
        bracket(
            "2 inv_eps (b/2) inv_norm^2",
            &[
                (SH_SIN, "(t1 ((t1^2 - t2^2)^2 - (2 t1 t2)^2) - t2 * 2 (t1^2 - t2^2) (2 t1 t2)) * (-1)"),
                (CH_COS, "t1 * 2 (t1^2 - t2^2) (2 t1 t2) + t2 ((t1^2 - t2^2)^2 - (2 t1 t2)^2)"),
            ],
        )?,
        bracket(
            "-2 inv_eps inv_norm^3",
            &[
                (
                    CH_SIN,
                    "((t1^2 - t2^2)((t1^2 - t2^2)^2 - (2 t1 t2)^2) - 2 (t1^2 - t2^2)(2 t1 t2)^2) * (-1)",
                ),
                (SH_COS, "2 t1 t2 (3 (t1^2 - t2^2)^2 - (2 t1 t2)^2)"),
            ],
        )?,
        bracket(
            "2 inv_eps inv_norm",
            &[(CH_SIN, "(t1^2 - t2^2) * (-1)"), (SH_COS, "2 t1 t2")],
        )?,
        TrigHypExpr::parse_terms(&[(SIN_FULL, "-t1"), (SH_FULL, "-t2")])?,
        bracket(
            "-2 inv_eps (b/2)",
            &[(SH_SIN, "t1 * (-1)"), (CH_COS, "t2")],
        )?,
        bracket("-inv_eps (b/2)^2 (t1^2 + t2^2)", &[(CH_SIN, "1")])?,
    ]))
}

/// The same seven brackets right after `t1 = αt2`, before simplification.
///
/// The first bracket prints its denominator as `a² + 1`; it is read as `α² + 1`.
pub fn printed_alpha_substituted() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "-inv_eps (b/2)^2 inv_alpha_norm",
            &[
                (CH_SIN, "((alpha^2 - 1)^2 t2^2 - 4 alpha^2 t2^2) * (-1)"),
                (SH_COS, "2 (alpha^2 - 1) * 2 alpha t2^2"),
            ],
        )?,
        bracket(
            "2 inv_eps (b/2) inv_alpha_norm^2",
            &[
                (SH_SIN, "(alpha t2 ((alpha^2 - 1)^2 - 4 alpha^2) - t2 * 2 (alpha^2 - 1) * 2 alpha) * (-1)"),
                (CH_COS, "alpha t2 * 2 (alpha^2 - 1) * 2 alpha + t2 ((alpha^2 - 1)^2 - 4 alpha^2)"),
            ],
        )?,
        bracket(
            "-2 inv_eps inv_alpha_norm^3",
            &[
                (
                    CH_SIN,
                    "((alpha^2 - 1)((alpha^2 - 1)^2 - 4 alpha^2) - 2 (alpha^2 - 1) * 4 alpha^2) * (-1)",
                ),
                (SH_COS, "2 alpha (3 (alpha^2 - 1)^2 - 4 alpha^2)"),
            ],
        )?,
        bracket(
            "2 inv_eps inv_alpha_norm",
            &[(CH_SIN, "(alpha^2 - 1) * (-1)"), (SH_COS, "2 alpha")],
        )?,
        TrigHypExpr::parse_terms(&[(SIN_FULL, "-alpha t2"), (SH_FULL, "-t2")])?,
        bracket(
            "-2 inv_eps (b/2)",
            &[(SH_SIN, "alpha t2 * (-1)"), (CH_COS, "t2")],
        )?,
        bracket("-inv_eps (b/2)^2 (alpha^2 + 1) t2^2", &[(CH_SIN, "1")])?,
    ]))
}

/// The α-form after the brackets are multiplied out.
pub fn printed_alpha_form() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "inv_eps (b/2)^2 t2^2 inv_alpha_norm",
            &[
                (CH_SIN, "alpha^4 - 6 alpha^2 + 1"),
                (SH_COS, "-4 alpha (alpha^2 - 1)"),
            ],
        )?,
        bracket(
            "2 inv_eps (b/2) t2 inv_alpha_norm^2",
            &[
                (SH_SIN, "(alpha^5 - 10 alpha^3 + 5 alpha) * (-1)"),
                (CH_COS, "5 alpha^4 - 10 alpha^2 + 1"),
            ],
        )?,
        bracket(
            "2 inv_eps inv_alpha_norm^3",
            &[
                (CH_SIN, "(alpha^2 - 1)(alpha^4 - 6 alpha^2 + 1) - 8 alpha^2 (alpha^2 - 1)"),
                (SH_COS, "-2 alpha (3 (alpha^2 - 1)^2 - 4 alpha^2)"),
            ],
        )?,
        bracket(
            "2 inv_eps inv_alpha_norm",
            &[(CH_SIN, "(alpha^2 - 1) * (-1)"), (SH_COS, "2 alpha")],
        )?,
        TrigHypExpr::parse_terms(&[(SIN_FULL, "-alpha t2"), (SH_FULL, "-t2")])?,
        bracket(
            "2 inv_eps (b/2) t2",
            &[(SH_SIN, "alpha"), (CH_COS, "-1")],
        )?,
        bracket("-inv_eps (b/2)^2 (alpha^2 + 1) t2^2", &[(CH_SIN, "1")])?,
    ]))
}

/// The merged form with the paired brackets written side by side.
pub fn printed_merged_pairs() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "inv_eps (b/2)^2 t2^2 inv_alpha_norm",
            &[
                (CH_SIN, "(alpha^4 - 6 alpha^2 + 1) - (alpha^2 + 1)^2"),
                (SH_COS, "-4 alpha (alpha^2 - 1)"),
            ],
        )?,
        bracket(
            "2 inv_eps (b/2) t2 inv_alpha_norm^2",
            &[
                (SH_SIN, "(-alpha^5 + 10 alpha^3 - 5 alpha) + alpha (alpha^2 + 1)^2"),
                (CH_COS, "(5 alpha^4 - 10 alpha^2 + 1) - (alpha^2 + 1)^2"),
            ],
        )?,
        bracket(
            "2 inv_eps inv_alpha_norm^3",
            &[
                (
                    CH_SIN,
                    "(alpha^2 - 1)(alpha^4 - 14 alpha^2 + 1) - (alpha^2 - 1)(alpha^2 + 1)^2",
                ),
                (
                    SH_COS,
                    "-2 alpha (3 (alpha^2 - 1)^2 - 4 alpha^2) + 2 alpha (alpha^2 + 1)^2",
                ),
            ],
        )?,
        TrigHypExpr::parse_terms(&[(SIN_FULL, "-alpha t2"), (SH_FULL, "-t2")])?,
    ]))
}

/// `Q(b)` as printed after the merge: `f = (2/ε)Q − [α t2 sin(t2 b) + t2 sh(α t2 b)]`.
pub fn printed_q() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "(b/2)^2 t2^2 inv_alpha_norm",
            &[(CH_SIN, "-4 alpha^2"), (SH_COS, "-2 alpha^3 + 2 alpha")],
        )?,
        bracket(
            "(b/2) t2 inv_alpha_norm^2",
            &[(SH_SIN, "12 alpha^3 - 4 alpha"), (CH_COS, "4 alpha^4 - 12 alpha^2")],
        )?,
        bracket(
            "inv_alpha_norm^3",
            &[
                (CH_SIN, "-16 alpha^4 + 16 alpha^2"),
                (SH_COS, "-4 alpha^5 + 24 alpha^3 - 4 alpha"),
            ],
        )?,
    ]))
}

/// `(2/ε)Q − [α t2 sin(t2 b) + t2 sh(α t2 b)]` from the printed `Q`.
pub fn printed_merged() -> Result<TrigHypExpr> {
    let two_over_eps = RationalPoly::parse("2 inv_eps")?;
    Ok(printed_q()?.scale(&two_over_eps) + TrigHypExpr::parse_terms(&[(SIN_FULL, "-alpha t2"), (SH_FULL, "-t2")])?)
}

/// `Q(2σ/t2)` in its three printed brackets.
pub fn printed_q_sigma() -> Result<TrigHypExpr> {
    Ok(sum(vec![
        bracket(
            "inv_alpha_norm",
            &[(CH_SIN, "-4 alpha^2 sigma^2"), (SH_COS, "(-2 alpha^3 + 2 alpha) sigma^2")],
        )?,
        bracket(
            "inv_alpha_norm^2",
            &[
                (SH_SIN, "(12 alpha^3 - 4 alpha) sigma"),
                (CH_COS, "(4 alpha^4 - 12 alpha^2) sigma"),
            ],
        )?,
        bracket(
            "inv_alpha_norm^3",
            &[
                (CH_SIN, "-16 alpha^4 + 16 alpha^2"),
                (SH_COS, "-4 alpha^5 + 24 alpha^3 - 4 alpha"),
            ],
        )?,
    ]))
}

/// `Q(2σ/t2)` over the common denominator `(α² + 1)³`.
pub fn printed_q_sigma_common() -> Result<TrigHypExpr> {
    bracket(
        "inv_alpha_norm^3",
        &[
            (CH_SIN, "-4 alpha^2 (alpha^2 + 1)^2 sigma^2 + (-16 alpha^4 + 16 alpha^2)"),
            (SH_COS, "(-2 alpha^3 + 2 alpha)(alpha^2 + 1)^2 sigma^2 + (-4 alpha^5 + 24 alpha^3 - 4 alpha)"),
            (SH_SIN, "(12 alpha^3 - 4 alpha)(alpha^2 + 1) sigma"),
            (CH_COS, "(4 alpha^4 - 12 alpha^2)(alpha^2 + 1) sigma"),
        ],
    )
}

/// Printed `g1..g4`, in order.
pub fn printed_g() -> Result<[RationalPoly; 4]> {
    Ok([
        RationalPoly::parse(
            "-4 alpha^2 (alpha^2 + 1)^2 sigma^2 + (12 alpha^3 - 4 alpha)(alpha^2 + 1) sigma + (-16 alpha^4 + 16 alpha^2)",
        )?,
        RationalPoly::parse(
            "(-2 alpha^3 + 2 alpha)(alpha^2 + 1)^2 sigma^2 + (4 alpha^4 - 12 alpha^2)(alpha^2 + 1) sigma + (-4 alpha^5 + 24 alpha^3 - 4 alpha)",
        )?,
        RationalPoly::parse(
            "-4 alpha^2 (alpha^2 + 1)^2 sigma^2 + (-12 alpha^3 + 4 alpha)(alpha^2 + 1) sigma + (-16 alpha^4 + 16 alpha^2)",
        )?,
        RationalPoly::parse(
            "(2 alpha^3 - 2 alpha)(alpha^2 + 1)^2 sigma^2 + (4 alpha^4 - 12 alpha^2)(alpha^2 + 1) sigma + (4 alpha^5 - 24 alpha^3 + 4 alpha)",
        )?,
    ])
}

/// Left side of the printed discriminant inequality for `g1`.
pub fn printed_g1_discriminant() -> Result<RationalPoly> {
    RationalPoly::parse(
        "(12 alpha^3 - 4 alpha)^2 (alpha^2 + 1)^2 - 4 (-4 alpha^2 (alpha^2 + 1)^2)(-16 alpha^4 + 16 alpha^2)",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcriptions_parse() {
        for e in [
            printed_im_part(),
            printed_alpha_substituted(),
            printed_alpha_form(),
            printed_merged_pairs(),
            printed_q(),
            printed_merged(),
            printed_q_sigma(),
            printed_q_sigma_common(),
        ] {
            assert!(!e.unwrap().is_zero());
        }
        assert!(printed_g().is_ok());
        assert!(printed_g1_discriminant().is_ok());
    }

    #[test]
    fn printed_steps_agree_with_each_other() {
        let a = printed_alpha_substituted().unwrap();
        assert!(a.equivalent(&printed_alpha_form().unwrap()));
        assert!(a.equivalent(&printed_merged_pairs().unwrap()));
        assert!(a.equivalent(&printed_merged().unwrap()));
        assert!(printed_q_sigma().unwrap().equivalent(&printed_q_sigma_common().unwrap()));
    }
}
