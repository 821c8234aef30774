//! The intertwining kernel `ker(u; n, k₀, σ, σ̂)`.
//!
//! Three evaluation routes are provided:
//!
//! * [`kernel_integral`]: the Legendre-product Laplace integral over `t > 1`,
//!   treated as the reference value;
//! * [`kernel_series`]: the Whittaker series with terminating `₄F₃`
//!   coefficients, in two coefficient variants;
//! * [`kernel_closed`]: Macdonald-function closed forms for the special
//!   parameter patterns where one exists.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_k, bessel_k_rotated, hankel, HankelKind};
use crate::confluent::ln_whittaker_w;
use crate::error::{Error, Result};
use crate::hypergeom::{hyp_pfq, SeriesResult};
use crate::legendre::{legendre_p, LegendreArgs};
use crate::numerics::{
    as_integer, gamma, ln_gamma, pochhammer_derivative_at_root, pochhammer_int, real, reciprocal_gamma, ComplexValue,
    Tolerance, I,
};
use crate::quadrature::{try_integrate_offset, QuadratureResult};

/// Series cap for non-terminating parameter sets.
pub const SERIES_MAX_TERMS: usize = 200;
/// The Legendre product is not evaluated where `e^{-u(t-1)}` times its
/// polynomial growth is below `e^{-CUTOFF_LOG}`.
const CUTOFF_LOG: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub u: f64,
    pub n: u32,
    pub k0: u32,
    pub sigma: ComplexValue,
    pub sigma_hat: ComplexValue,
}

impl KernelParams {
    pub fn new(u: f64, n: u32, k0: u32, sigma: ComplexValue, sigma_hat: ComplexValue) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::Domain(format!("u must be positive, got {u}")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        Ok(Self {
            u,
            n,
            k0,
            sigma,
            sigma_hat,
        })
    }

    /// Parity of `n`.
    pub fn eta(&self) -> u32 {
        self.n % 2
    }

    pub fn with_u(self, u: f64) -> Self {
        Self { u, ..self }
    }

    fn half_n(&self) -> f64 {
        self.n as f64 / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Integral,
    Series,
    Closed,
}

/// Coefficient convention for the Whittaker series.
///
/// `Standard` uses `Γ(n/2+k₀)⁻¹` in front and plain `(a)ᵢ(b)ᵢ/i!`
/// coefficients. `ExtraPochhammer` divides each coefficient by
/// `(n/2+k₀)ᵢ` and uses `Γ(n/2+k₀)⁻²` in front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Standard,
    ExtraPochhammer,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Standard, Variant::ExtraPochhammer];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::ExtraPochhammer => "extra-pochhammer",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "extra-pochhammer" => Ok(Variant::ExtraPochhammer),
            other => Err(Error::Domain(format!("unknown series variant '{other}'"))),
        }
    }
}

/// Parameter patterns with a Macdonald closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedForm {
    /// even `n`, `k₀ = 0`, `σ̂ = 0`
    EvenSigmaHatZero,
    /// even `n`, `k₀ = 0`, `σ = 0`
    EvenSigmaZero,
    /// odd `n`, `k₀ = 0`, `σ = 0`
    OddSigmaZero,
    /// odd `n`, `k₀ = 0`, `σ̂ = 0`; carries the factor `(0)_{n-1}`
    OddSigmaHatZero,
}

impl ClosedForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosedForm::EvenSigmaHatZero => "even-sigma-hat-zero",
            ClosedForm::EvenSigmaZero => "even-sigma-zero",
            ClosedForm::OddSigmaZero => "odd-sigma-zero",
            ClosedForm::OddSigmaHatZero => "odd-sigma-hat-zero",
        }
    }

    pub fn detect(p: &KernelParams) -> Option<Self> {
        if p.k0 != 0 {
            return None;
        }
        let zero = real(0.0);
        match (p.eta(), p.sigma == zero, p.sigma_hat == zero) {
            (0, _, true) => Some(ClosedForm::EvenSigmaHatZero),
            (0, true, false) => Some(ClosedForm::EvenSigmaZero),
            (1, true, _) => Some(ClosedForm::OddSigmaZero),
            (1, false, true) => Some(ClosedForm::OddSigmaHatZero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Diagnostics {
    Quadrature(QuadratureResult),
    Series(SeriesResult),
    Closed {
        form: ClosedForm,
    },
    /// The value vanishes identically; `reason` names the zero factor.
    Exact {
        reason: String,
    },
}

impl Diagnostics {
    pub fn converged(&self) -> bool {
        match self {
            Diagnostics::Quadrature(q) => q.converged,
            Diagnostics::Series(s) => s.converged,
            Diagnostics::Closed { .. } | Diagnostics::Exact { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: ComplexValue,
    pub method: Method,
    pub diagnostics: Diagnostics,
    pub variant: Option<Variant>,
}

fn sign(power: i64) -> f64 {
    if power.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `cot(πσ̂)(σ̂)_{n-1}`, replaced by its finite limit
/// `π⁻¹ d/dσ̂ (σ̂)_{n-1}` where the Pochhammer factor has a root.
pub fn cot_pochhammer(sigma_hat: ComplexValue, n: u32) -> Result<ComplexValue> {
    let m = n as i64 - 1;
    if let Some(j) = as_integer(sigma_hat) {
        if j <= 0 && -j < m {
            return Ok(real(pochhammer_derivative_at_root(-j, m) / PI));
        }
        return Err(Error::PrefactorPole(format!(
            "cot(pi sigma_hat) is singular at sigma_hat = {j} and (sigma_hat)_{m} does not vanish"
        )));
    }
    let x = sigma_hat * PI;
    Ok(x.cos() / x.sin() * pochhammer_int(sigma_hat, m)?)
}

/// Parity factor `(-1)^{n/2} cot(πσ̂)(σ̂)_{n-1}` (even `n`) or
/// `(-1)^{(n+1)/2}(σ̂)_{n-1}` (odd `n`).
fn parity_factor(p: &KernelParams) -> Result<ComplexValue> {
    let n = p.n as i64;
    if p.eta() == 0 {
        Ok(cot_pochhammer(p.sigma_hat, p.n)? * sign(n / 2))
    } else {
        Ok(pochhammer_int(p.sigma_hat, n - 1)? * sign((n + 1) / 2))
    }
}

/// Factor `(-σ)_{k₀}(σ̂+n-1)_{k₀}` shared by every representation.
fn shared_factor(p: &KernelParams) -> Result<ComplexValue> {
    let k0 = p.k0 as i64;
    Ok(pochhammer_int(-p.sigma, k0)? * pochhammer_int(p.sigma_hat + (p.n as f64 - 1.0), k0)?)
}

fn zero_reason(p: &KernelParams) -> Result<Option<String>> {
    let k0 = p.k0 as i64;
    if pochhammer_int(-p.sigma, k0)? == real(0.0) {
        return Ok(Some(format!("(-sigma)_{k0} = 0")));
    }
    if pochhammer_int(p.sigma_hat + (p.n as f64 - 1.0), k0)? == real(0.0) {
        return Ok(Some(format!("(sigma_hat+n-1)_{k0} = 0")));
    }
    if p.eta() == 1 && pochhammer_int(p.sigma_hat, p.n as i64 - 1)? == real(0.0) {
        return Ok(Some(format!("(sigma_hat)_{} = 0", p.n - 1)));
    }
    Ok(None)
}

fn exact_zero(method: Method, reason: String, variant: Option<Variant>) -> KernelValue {
    KernelValue {
        value: real(0.0),
        method,
        diagnostics: Diagnostics::Exact { reason },
        variant,
    }
}

/// Exponent `g` with `|P^μ_ν(t)| = O(t^g)` as `t → ∞`.
fn legendre_growth(nu: ComplexValue) -> f64 {
    nu.re.max(-nu.re - 1.0).max(0.0)
}

/// Kernel from the Laplace integral of a product of two Legendre functions:
///
/// `[parity factor]·(i/2)·(-σ)_{k₀}(σ̂+n-1)_{k₀} ∫₁^∞ P^μ_{n/2+σ-1}(t) P^μ_{-n/2-σ̂}(t) e^{-ut} dt`
/// with `μ = 1 - k₀ - n/2`.
pub fn kernel_integral(p: &KernelParams, tol: &Tolerance) -> Result<KernelValue> {
    if let Some(reason) = zero_reason(p)? {
        return Ok(exact_zero(Method::Integral, reason, None));
    }
    let pref = parity_factor(p)? * shared_factor(p)? * I * 0.5;
    let h = p.half_n();
    let mu = real(1.0 - p.k0 as f64 - h);
    let nu1 = p.sigma + (h - 1.0);
    let nu2 = -p.sigma_hat - h;
    let growth = legendre_growth(nu1) + legendre_growth(nu2) + 1.0;
    let u = p.u;
    let q = try_integrate_offset(
        |d| {
            if u * d - growth * (2.0 + d).ln() > CUTOFF_LOG {
                return Ok(real(0.0));
            }
            let a = legendre_p(LegendreArgs::from_offset(nu1, mu, d))?;
            let b = legendre_p(LegendreArgs::from_offset(nu2, mu, d))?;
            Ok(a * b * (-u * d).exp())
        },
        u,
        tol,
    )?;
    Ok(KernelValue {
        value: pref * (-u).exp() * q.value,
        method: Method::Integral,
        diagnostics: Diagnostics::Quadrature(q),
        variant: None,
    })
}

/// Coefficient data for the `i`-th series term.
struct SeriesShape {
    /// `(a)ᵢ(b)ᵢ/i!`
    coeff: [ComplexValue; 2],
    num: [ComplexValue; 3],
    den: [ComplexValue; 3],
    /// Whittaker `κ` at `i = 0` and `μ`
    kappa0: ComplexValue,
    mu: ComplexValue,
}

fn series_shape(p: &KernelParams) -> SeriesShape {
    let h = p.half_n();
    let k0 = p.k0 as f64;
    let s = p.sigma;
    let sh = p.sigma_hat;
    let coeff = [real(1.0 - h) - s, real(k0) - s];
    if p.eta() == 0 {
        SeriesShape {
            coeff,
            num: [real(1.0 - h - k0), sh + (1.0 - h), real(k0) - sh],
            den: [real(h + k0), s + h, s + (1.0 - k0)],
            kappa0: (s + sh) * 0.5 - k0,
            mu: (s + sh + (p.n as f64 - 1.0)) * 0.5,
        }
    } else {
        SeriesShape {
            coeff,
            num: [real(1.0 - h - k0), sh + h, sh + (p.n as f64 + k0 - 1.0)],
            den: [real(h + k0), real(h) - s, s + (1.0 - k0)],
            kappa0: (s - sh + (1.0 - p.n as f64)) * 0.5 - k0,
            mu: (s - sh) * 0.5,
        }
    }
}

/// Kernel from its Whittaker series
///
/// `Σᵢ (a)ᵢ(b)ᵢ/i! · ₄F₃(..., -i; ...; 1) · W_{κ₀-i, μ}(2u)`
///
/// with `a = 1-σ-n/2`, `b = k₀-σ` and parity-dependent `₄F₃` parameters,
/// `κ₀` and `μ`. The sum stops after three consecutive negligible terms, when
/// a coefficient factor terminates it, or after [`SERIES_MAX_TERMS`] terms
/// (reported with `converged = false`).
pub fn kernel_series(p: &KernelParams, variant: Variant, tol: &Tolerance) -> Result<KernelValue> {
    if let Some(reason) = zero_reason(p)? {
        return Ok(exact_zero(Method::Series, reason, Some(variant)));
    }
    let h = p.half_n();
    let k0 = p.k0 as f64;
    let two_u = real(2.0 * p.u);
    let lead_gamma = real(h + k0);
    let mut pref = shared_factor(p)? * I * reciprocal_gamma(lead_gamma);
    if variant == Variant::ExtraPochhammer {
        pref *= reciprocal_gamma(lead_gamma);
    }
    pref *= if p.eta() == 0 {
        cot_pochhammer(p.sigma_hat, p.n)?
            * sign(p.n as i64 / 2)
            * two_u.powc(-(p.sigma + p.sigma_hat + p.n as f64) * 0.5)
    } else {
        pochhammer_int(p.sigma_hat, p.n as i64 - 1)?
            * sign((p.n as i64 + 1) / 2)
            * two_u.powc((p.sigma_hat - p.sigma - 1.0) * 0.5)
    };

    let shape = series_shape(p);
    let [a, b] = shape.coeff;
    let series_tol = Tolerance::tight();
    let mut ln_coeff = real(0.0);
    let mut sum = real(0.0);
    let mut last = 0.0;
    let mut quiet = 0;
    let mut used = 0;
    for i in 0..SERIES_MAX_TERMS {
        let fi = i as f64;
        if i > 0 {
            let fa = a + (fi - 1.0);
            let fb = b + (fi - 1.0);
            if fa == real(0.0) || fb == real(0.0) {
                // every later coefficient vanishes
                return Ok(series_value(pref * sum, used, 0.0, true, variant));
            }
            ln_coeff += fa.ln() + fb.ln() - fi.ln();
            if variant == Variant::ExtraPochhammer {
                ln_coeff -= (lead_gamma + (fi - 1.0)).ln();
            }
        }
        used = i + 1;
        let num = [shape.num[0] - fi, shape.num[1], shape.num[2], real(-fi)];
        let den = [shape.den[0], shape.den[1] - fi, shape.den[2] - fi];
        let f = hyp_pfq(&num, &den, real(1.0), &series_tol)?;
        let term = if f.value == real(0.0) {
            real(0.0)
        } else {
            let ln_w = ln_whittaker_w(shape.kappa0 - fi, shape.mu, two_u)?;
            (ln_coeff + ln_w).exp() * f.value
        };
        if !term.re.is_finite() || !term.im.is_finite() {
            return Ok(series_value(pref * sum, used, f64::INFINITY, false, variant));
        }
        sum += term;
        last = term.norm();
        if last <= tol.threshold(sum.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(series_value(pref * sum, used, last * 2.0 * pref.norm(), true, variant));
            }
        } else {
            quiet = 0;
        }
    }
    Ok(series_value(pref * sum, used, last * 2.0 * pref.norm(), false, variant))
}

fn series_value(value: ComplexValue, terms: usize, tail: f64, converged: bool, variant: Variant) -> KernelValue {
    KernelValue {
        value,
        method: Method::Series,
        diagnostics: Diagnostics::Series(SeriesResult {
            value,
            terms_used: terms,
            tail_estimate: tail,
            converged,
        }),
        variant: Some(variant),
    }
}

/// `(2u)^{(1-n)/2} / (√π Γ(n/2))`
fn closed_scale(n: u32, u: f64) -> Result<f64> {
    let h = n as f64 / 2.0;
    Ok((2.0 * u).powf((1.0 - n as f64) / 2.0) / (PI.sqrt() * gamma(real(h))?.re))
}

/// Macdonald closed form for the patterns listed in [`ClosedForm`].
pub fn kernel_closed(p: &KernelParams) -> Result<KernelValue> {
    let form = ClosedForm::detect(p).ok_or_else(|| {
        Error::NoClosedForm(format!(
            "n = {}, k0 = {}, sigma = {}, sigma_hat = {}",
            p.n, p.k0, p.sigma, p.sigma_hat
        ))
    })?;
    let n = p.n as i64;
    let h = p.half_n();
    let scale = closed_scale(p.n, p.u)?;
    let value = match form {
        ClosedForm::EvenSigmaHatZero => {
            let fact = gamma(real(p.n as f64 - 1.0))?;
            I * sign(n / 2) * fact / PI * scale * bessel_k(p.sigma + (h - 0.5), p.u)?
        }
        ClosedForm::EvenSigmaZero => {
            I * sign(n / 2) * cot_pochhammer(p.sigma_hat, p.n)? * scale * bessel_k(p.sigma_hat + (h - 0.5), p.u)?
        }
        ClosedForm::OddSigmaZero => {
            I * sign((n + 1) / 2)
                * pochhammer_int(p.sigma_hat, n - 1)?
                * scale
                * bessel_k(p.sigma_hat + (h - 0.5), p.u)?
        }
        ClosedForm::OddSigmaHatZero => {
            I * sign((n + 1) / 2) * pochhammer_int(real(0.0), n - 1)? * scale * bessel_k(p.sigma + (h - 0.5), p.u)?
        }
    };
    Ok(KernelValue {
        value,
        method: Method::Closed,
        diagnostics: Diagnostics::Closed { form },
        variant: None,
    })
}

/// The odd-`n`, `σ̂ = 0` closed form with `(0)_{n-1}` replaced by `(n-2)!`
/// (`n ≥ 3`).
pub fn kernel_closed_factorial_substitute(p: &KernelParams) -> Result<ComplexValue> {
    if ClosedForm::detect(p) != Some(ClosedForm::OddSigmaHatZero) || p.n < 3 {
        return Err(Error::NoClosedForm(
            "substitute form needs odd n >= 3, k0 = 0, sigma_hat = 0".into(),
        ));
    }
    let n = p.n as i64;
    let h = p.half_n();
    Ok(I * sign((n + 1) / 2)
        * gamma(real(p.n as f64 - 1.0))?
        * closed_scale(p.n, p.u)?
        * bessel_k(p.sigma + (h - 0.5), p.u)?)
}

/// The even-`n`, `k₀ = σ = σ̂ = 0` closed form continued to `u = εiω`, with
/// the Macdonald function evaluated on the imaginary axis.
pub fn kernel_closed_continued(n: u32, omega: f64, epsilon: f64) -> Result<ComplexValue> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::Domain(format!("continued closed form needs even n, got {n}")));
    }
    let u = I * epsilon * omega;
    let h = n as f64 / 2.0;
    let k = bessel_k_rotated(real(h - 0.5), omega, -epsilon)?;
    let fact = gamma(real(n as f64 - 1.0))?;
    Ok(
        I * sign(n as i64 / 2) * (u * 2.0).powc(real((1.0 - n as f64) / 2.0)) * fact / (PI.powf(1.5) * gamma(real(h))?)
            * k,
    )
}

/// Hankel-function form of the kernel at imaginary argument:
/// `(-1)^{n/2} 2^{-(n+1)/2} ω^{(1-n)/2} π^{-1/2} i^{(n+1)/2} (n-1)! Γ(n/2)⁻¹ H^{(1+η)}_{(1-n)/2}(ω)`.
pub fn kernel_closed_imaginary(n: u32, omega: f64) -> Result<ComplexValue> {
    if n == 0 || !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "needs n >= 1 and omega > 0, got n = {n}, omega = {omega}"
        )));
    }
    let nf = n as f64;
    let kind = if n % 2 == 0 {
        HankelKind::First
    } else {
        HankelKind::Second
    };
    let hk = hankel(kind, real((1.0 - nf) / 2.0), real(omega))?;
    let i_pow = (I * (PI / 2.0 * (nf + 1.0) / 2.0)).exp();
    let ln_mag = -(nf + 1.0) / 2.0 * std::f64::consts::LN_2 + (1.0 - nf) / 2.0 * omega.ln() - 0.5 * PI.ln()
        + ln_gamma(real(nf))?.re
        - ln_gamma(real(nf / 2.0))?.re;
    Ok(real(sign(n as i64 / 2) * ln_mag.exp()) * i_pow * hk)
}
