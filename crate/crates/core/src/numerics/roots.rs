//! Bracketing root refinement shared by the zero finder and the sign search.

use super::real::Real;
use crate::error::Result;

/// Outcome of a bisection run.
#[derive(Clone, Debug, PartialEq)]
pub struct Bisection<R> {
    /// Midpoint of the final bracket, or an exact zero if one was hit.
    pub root: R,
    pub value: R,
    pub lo: R,
    pub hi: R,
    pub steps: usize,
}

/// Bisects `f` on `[lo, hi]`, whose endpoint values must have opposite signs.
///
/// `done(width, midpoint, value)` decides when the bracket is tight enough; at most
/// `max_steps` halvings are performed.
pub fn bisect<R, F, D>(
    mut f: F,
    lo: R,
    hi: R,
    f_lo: R,
    done: D,
    max_steps: usize,
) -> Result<Bisection<R>>
where
    R: Real,
    F: FnMut(&R) -> Result<R>,
    D: Fn(&R, &R, &R) -> bool,
{
    let mut lo = lo;
    let mut hi = hi;
    let lo_sign = f_lo.sign();
    let half = lo.ratio(1, 2);
    let mut steps = 0;
    loop {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        let v = f(&mid)?;
        steps += 1;
        let width = (hi.clone() - lo.clone()).abs();
        if v.is_zero() || done(&width, &mid, &v) || steps >= max_steps || mid == lo || mid == hi {
            return Ok(Bisection {
                root: mid,
                value: v,
                lo,
                hi,
                steps,
            });
        }
        if v.sign() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(
            |x: &f64| Ok(x * x - 2.0),
            0.0,
            2.0,
            -2.0,
            |w, _, _| *w < 1e-14,
            200,
        )
        .unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-13);
        assert!(r.lo <= r.root && r.root <= r.hi);
    }

    #[test]
    fn stops_at_floating_resolution() {
        let r = bisect(|x: &f64| Ok(x - 0.1), 0.0, 1.0, -0.1, |_, _, _| false, 10_000).unwrap();
        assert!(r.steps < 100);
        assert!((r.root - 0.1).abs() < 1e-16);
    }
}
