//! Zeta, Gamma, xi, the theta kernel Φ, and two independent routes to Ξ.
//!
//! * Product route: `ξ(s) = ½ s (s-1) π^{-s/2} Γ(s/2) ζ(s)` with ζ from the
//!   accelerated alternating eta series and the pole at `s = 1` cancelled
//!   analytically.
//! * Fourier route: `Ξ(t) = 2 ∫_0^∞ cos(tx) Φ(x) dx` truncated at `x_cutoff`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AuditError, Result};
use crate::numerics::{integrate, Complex, PrecisionContext, QuadratureSpec, Real};

/// Which representation of Ξ to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiMethod {
    Product,
    Fourier,
}

impl XiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            XiMethod::Product => "product",
            XiMethod::Fourier => "fourier",
        }
    }
}

impl std::str::FromStr for XiMethod {
    type Err = AuditError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(XiMethod::Product),
            "fourier" => Ok(XiMethod::Fourier),
            other => Err(AuditError::InvalidInput(format!(
                "unknown Xi method '{other}' (expected product or fourier)"
            ))),
        }
    }
}

/// Truncation controls for the theta-series kernel Φ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiSeriesSpec {
    pub n_max: usize,
    pub x_cutoff: f64,
}

impl Default for PhiSeriesSpec {
    fn default() -> Self {
        PhiSeriesSpec {
            n_max: 50,
            x_cutoff: 12.0,
        }
    }
}

impl PhiSeriesSpec {
    /// Natural log of an upper bound on the series tail `Σ_{n > n_max}`, maximised at `x = 0`.
    ///
    /// Terms beyond `n ≥ 1` decrease faster than geometrically with ratio
    /// below `e^{-3π}`, so twice the first omitted term bounds the tail.
    pub fn ln_tail_bound(&self) -> f64 {
        let n = (self.n_max + 1) as f64;
        ln_phi_term(0.0, n) + 2f64.ln()
    }
}

fn ln_phi_term(x: f64, n: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let a = pi * (2.0 * x).exp();
    (2.0 * pi).ln() + 2.5 * x + (2.0 * a * n * n - 3.0).ln() + 2.0 * n.ln() - n * n * a
}

fn check_pole_free<R: Real>(s: &Complex<R>, ctx: &PrecisionContext) -> Result<()> {
    let d = (s.clone() - Complex::from_real(s.re.one())).abs().to_f64();
    if d < ctx.abs_tol {
        Err(AuditError::PoleAtOne)
    } else {
        Ok(())
    }
}

/// Dirichlet eta function by Borwein's accelerated alternating series.
pub fn eta<R: Real>(s: &Complex<R>) -> Complex<R> {
    let like = &s.re;
    let digits = f64::from(like.digits()) + 3.0;
    let growth = std::f64::consts::PI * s.im.to_f64().abs() / 2.0;
    let base = (3.0 + 8f64.sqrt()).ln();
    let n = ((digits * std::f64::consts::LN_10 + growth) / base).ceil() as usize + 3;
    let nn = n as i64;
    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!), accumulated by term ratios.
    let mut d = Vec::with_capacity(n + 1);
    let mut term = like.one();
    let mut acc = term.clone();
    d.push(acc.clone());
    for i in 0..nn {
        term = term * like.lit((4 * (nn + i) * (nn - i)) as f64)
            / like.lit(((2 * i + 1) * (2 * i + 2)) as f64);
        acc = acc + term.clone();
        d.push(acc.clone());
    }
    let dn = d[n].clone();
    let mut sum = Complex::zero_like(like);
    for k in 0..n {
        let weight = d[k].clone() - dn.clone();
        let weight = if k % 2 == 0 { weight } else { -weight };
        let ln_k = like.lit((k + 1) as f64).ln();
        let power = (-s.clone()).scale(&ln_k).exp();
        sum = sum + power.scale(&weight);
    }
    sum.scale(&(-(like.one() / dn)))
}

/// `(s - 1) ζ(s)`, finite at `s = 1` where it equals 1.
fn zeta_times_s_minus_one<R: Real>(s: &Complex<R>) -> Complex<R> {
    let like = &s.re;
    let one = Complex::from_real(like.one());
    // 1 - 2^{1-s} = -expm1(w) with w = (1-s) ln 2, and s - 1 = -w / ln 2.
    let w = (one.clone() - s.clone()).scale(&like.ln2());
    let ratio = if w.abs().to_f64() == 0.0 {
        one.scale(&(like.one() / like.ln2()))
    } else {
        (w.clone() / w.expm1()).scale(&(like.one() / like.ln2()))
    };
    eta(s) * ratio
}

/// Riemann zeta function, continued to the whole plane except `s = 1`.
pub fn zeta<R: Real>(s: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    check_pole_free(s, ctx)?;
    let like = &s.re;
    if s.re.to_f64() < 0.0 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s).
        let one = Complex::from_real(like.one());
        let reflected = one.clone() - s.clone();
        let pi = like.pi();
        let two_s = s.scale(&like.ln2()).exp();
        let pi_pow = (s.clone() - one).scale(&pi.ln()).exp();
        let sin = s.scale(&(pi * like.ratio(1, 2))).sin();
        return Ok(two_s * pi_pow * sin * gamma(&reflected, ctx)? * zeta(&reflected, ctx)?);
    }
    let one = Complex::from_real(like.one());
    let factor = s.clone() - one;
    Ok(zeta_times_s_minus_one(s) / factor)
}

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function of complex argument.
///
/// Binary64 values use the Lanczos approximation; wider values use the
/// Stirling series after an upward shift. Reflection handles `re(s) < ½`.
pub fn gamma<R: Real>(s: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let like = &s.re;
    let re = s.re.to_f64();
    if s.im.to_f64().abs() < ctx.abs_tol && re <= 0.5 && (re - re.round()).abs() < ctx.abs_tol {
        return Err(AuditError::PoleAtNonPositiveInteger(re.round()));
    }
    if re < 0.5 {
        let one = Complex::from_real(like.one());
        let pi = like.pi();
        let sin = s.scale(&pi).sin();
        let g = gamma(&(one - s.clone()), ctx)?;
        return Ok(Complex::from_real(pi) / (sin * g));
    }
    if like.digits() <= 16 {
        Ok(lanczos(s))
    } else {
        Ok(stirling(s))
    }
}

fn lanczos<R: Real>(s: &Complex<R>) -> Complex<R> {
    let like = &s.re;
    let z = s.clone() - Complex::from_real(like.one());
    let mut x = Complex::from_real(like.lit(LANCZOS[0]));
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        let denom = z.clone() + Complex::from_real(like.lit(i as f64));
        x = x + Complex::from_real(like.lit(*c)) / denom;
    }
    let t = z.clone() + Complex::from_real(like.lit(LANCZOS_G + 0.5));
    let sqrt_2pi = (like.pi() * like.lit(2.0)).sqrt();
    let power = ((z + Complex::from_real(like.ratio(1, 2))) * t.ln()).exp();
    (power * (-t).exp() * x).scale(&sqrt_2pi)
}

/// Exact Bernoulli numbers `B_0 ..= B_{2k}` for the Stirling series.
fn bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m_max = 240usize;
        let mut b: Vec<BigRational> = Vec::with_capacity(m_max + 1);
        b.push(BigRational::one());
        for m in 1..=m_max {
            // B_m = -1/(m+1) Σ_{k<m} C(m+1, k) B_k.
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

fn stirling<R: Real>(s: &Complex<R>) -> Complex<R> {
    let like = &s.re;
    let digits = f64::from(like.digits());
    let target = 0.5 * digits + 12.0;
    let shift = (target - s.re.to_f64()).ceil().max(0.0) as usize;
    let mut w = s.clone();
    let mut prod = Complex::from_real(like.one());
    for _ in 0..shift {
        prod = prod * w.clone();
        w = w + Complex::from_real(like.one());
    }
    let half = like.ratio(1, 2);
    let ln_w = w.ln();
    let mut lg = (w.clone() - Complex::from_real(half.clone())) * ln_w - w.clone()
        + Complex::from_real(half * (like.pi() * like.lit(2.0)).ln());
    let inv = w.recip();
    let inv2 = inv.square();
    let mut power = inv;
    let eps = like.epsilon();
    let bern = bernoulli();
    for k in 1..bern.len() / 2 {
        let b2k = like.from_rational(&bern[2 * k]);
        let denom = like.lit((2 * k * (2 * k - 1)) as f64);
        let term = power.scale(&(b2k / denom));
        lg = lg + term.clone();
        if term.l1() <= eps.clone() * lg.l1() {
            break;
        }
        power = power * inv2.clone();
    }
    lg.exp() / prod
}

/// Riemann's ξ(s); entire, evaluated through the product representation.
pub fn xi_product<R: Real>(s: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let like = &s.re;
    let one = Complex::from_real(like.one());
    let half = like.ratio(1, 2);
    if s.re < half {
        return xi_product(&(one - s.clone()), ctx);
    }
    let s_half = s.scale(&half);
    let pi_pow = (-s_half.clone()).scale(&like.pi().ln()).exp();
    let g = gamma(&s_half, ctx)?;
    Ok((s.clone() * zeta_times_s_minus_one(s) * pi_pow * g).scale(&half))
}

/// Ξ(t) = ξ(½ + it) through the product route.
pub fn big_xi_product<R: Real>(t: &Complex<R>, ctx: &PrecisionContext) -> Result<Complex<R>> {
    let like = &t.re;
    let s = Complex::from_real(like.ratio(1, 2)) + t.mul_i();
    xi_product(&s, ctx)
}

/// Natural log of Φ(x), accurate where Φ itself underflows.
pub fn ln_phi(x: f64, spec: &PhiSeriesSpec) -> f64 {
    let lead = ln_phi_term(x, 1.0);
    let mut rel = 0.0;
    for n in 2..=spec.n_max {
        let r = (ln_phi_term(x, n as f64) - lead).exp();
        rel += r;
        if r < 1e-300 {
            break;
        }
    }
    lead + rel.ln_1p()
}

/// Theta-series kernel Φ(x), truncated at `spec.n_max`.
pub fn phi<R: Real>(x: &R, spec: &PhiSeriesSpec) -> Result<R> {
    if x.to_f64() < 0.0 || !x.is_finite() {
        return Err(AuditError::InvalidInput(format!(
            "phi needs x >= 0, got {}",
            x.to_sci(6)
        )));
    }
    if spec.n_max == 0 {
        return Err(AuditError::InvalidInput("n_max must be at least 1".into()));
    }
    let pi = x.pi();
    let a = pi.clone() * (x.clone() * x.lit(2.0)).exp();
    let pre = pi * x.lit(2.0) * (x.clone() * x.ratio(5, 2)).exp();
    let mut sum = x.zero();
    let mut first = x.zero();
    for n in 1..=spec.n_max {
        let n2 = x.lit((n * n) as f64);
        let term = (a.clone() * n2.clone() * x.lit(2.0) - x.lit(3.0))
            * n2.clone()
            * (-(n2 * a.clone())).exp();
        if n == 1 {
            first = term.clone();
        } else if term <= first.clone() * x.epsilon() * x.epsilon() {
            break;
        }
        sum = sum + term;
    }
    Ok(pre * sum)
}

/// Ξ(t) = 2 ∫_0^{x_cutoff} cos(tx) Φ(x) dx.
pub fn xi_fourier<R: Real>(
    t: &Complex<R>,
    spec: &PhiSeriesSpec,
    quad: &QuadratureSpec,
    ctx: &PrecisionContext,
) -> Result<Complex<R>> {
    let like = &t.re;
    let t2 = t.im.to_f64().abs();
    if t2 >= 0.5 {
        return Err(AuditError::InvalidInput(format!(
            "Fourier integral needs |im t| < 1/2, got {t2}"
        )));
    }
    let tolerance = ctx.abs_tol;
    let series_tail = spec.ln_tail_bound();
    // Beyond the cutoff |cos(tx)| ≤ e^{|t2| x} and Φ decays super-exponentially;
    // bound ∫_X^∞ by the integrand at X over the decay rate there.
    let x = spec.x_cutoff;
    let decay = std::f64::consts::PI * 2.0 * (2.0 * x).exp() - 4.5 - t2;
    let cutoff_tail = ln_phi(x, spec) + t2 * x + 2f64.ln() - decay.max(1.0).ln();
    let bound = series_tail.exp() * 2.0 * (x + 1.0) * (t2 * x).exp() + cutoff_tail.exp();
    if bound > tolerance {
        return Err(AuditError::TailBoundViolated { bound, tolerance });
    }
    let quad = QuadratureSpec {
        target_abs: quad.target_abs.max(tolerance * 1e-4),
        ..*quad
    };
    let zero = like.zero();
    let upper = like.lit(x);
    let integral = integrate(
        |y: &R| {
            let arg = t.scale(y);
            let cos = (arg.mul_i().exp() + (-arg.mul_i()).exp()).scale(&like.ratio(1, 2));
            let phi_y = phi(y, spec).unwrap_or_else(|_| y.zero());
            cos.scale(&phi_y)
        },
        &zero,
        &upper,
        &quad,
    )?;
    Ok(integral.value.scale(&like.lit(2.0)))
}

/// Ξ(t) by the requested method.
pub fn big_xi<R: Real>(
    t: &Complex<R>,
    method: XiMethod,
    ctx: &PrecisionContext,
) -> Result<Complex<R>> {
    match method {
        XiMethod::Product => big_xi_product(t, ctx),
        XiMethod::Fourier => xi_fourier(
            t,
            &PhiSeriesSpec::default(),
            &QuadratureSpec::default(),
            ctx,
        ),
    }
}
