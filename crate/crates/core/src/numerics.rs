//! Complex scalar helpers, log-gamma, reciprocal gamma and the Pochhammer
//! symbol, plus the tolerance record threaded through every evaluator.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The numeric currency of the crate.
pub type ComplexValue = Complex64;

pub const I: ComplexValue = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> ComplexValue {
    Complex64::new(re, 0.0)
}

/// Stopping thresholds and work budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel_target: f64,
    pub abs_floor: f64,
    pub max_terms: usize,
    pub max_evals: usize,
    /// Set when `rel_target` was requested below machine epsilon and clamped.
    #[serde(default)]
    pub clamped: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_target: 1e-10,
            abs_floor: 1e-300,
            max_terms: 10_000,
            max_evals: 2_000_000,
            clamped: false,
        }
    }
}

impl Tolerance {
    pub fn new(rel_target: f64, abs_floor: f64, max_terms: usize, max_evals: usize) -> Self {
        let clamped = rel_target < f64::EPSILON;
        Self {
            rel_target: rel_target.max(f64::EPSILON),
            abs_floor: abs_floor.max(f64::MIN_POSITIVE),
            max_terms: max_terms.max(1),
            max_evals: max_evals.max(1),
            clamped,
        }
    }

    pub fn with_rel(self, rel_target: f64) -> Self {
        Self::new(rel_target, self.abs_floor, self.max_terms, self.max_evals)
    }

    pub fn with_abs_floor(self, abs_floor: f64) -> Self {
        Self::new(self.rel_target, abs_floor, self.max_terms, self.max_evals)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms.max(1);
        self
    }

    /// Near machine precision; used for series feeding other evaluators.
    pub fn tight() -> Self {
        Self::new(f64::EPSILON, 1e-300, 100_000, 2_000_000)
    }

    /// `max(rel_target * |value|, abs_floor)`
    pub fn threshold(&self, magnitude: f64) -> f64 {
        (self.rel_target * magnitude).max(self.abs_floor)
    }
}

/// Returns `Some(m)` when `z` is exactly the integer `m`.
pub fn as_integer(z: ComplexValue) -> Option<i64> {
    if z.im == 0.0 && z.re.is_finite() && z.re == z.re.round() && z.re.abs() < 9.0e15 {
        Some(z.re as i64)
    } else {
        None
    }
}

/// Nonpositive integer test with an absolute slack.
pub fn is_nonpositive_integer(z: ComplexValue, slack: f64) -> bool {
    let r = z.re.round();
    r <= 0.0 && (z - real(r)).norm() <= slack
}

/// `|a - b| / max(|b|, floor)`
pub fn rel_diff(a: ComplexValue, b: ComplexValue) -> f64 {
    let scale = b.norm().max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn ln_gamma_right(z: ComplexValue) -> ComplexValue {
    let zm = z - 1.0;
    let mut sum = real(LANCZOS_COEF[0]);
    for (k, &p) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += p / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    real(LN_SQRT_2PI) + (zm + 0.5) * t.ln() - t + sum.ln()
}

/// `ln(sin(pi z))`, stable for large `|Im z|`. Defined modulo `2 pi i`.
pub fn ln_sin_pi(z: ComplexValue) -> ComplexValue {
    let w = z * PI;
    if w.im > 20.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        -I * w + c(-std::f64::consts::LN_2, PI / 2.0) + (real(1.0) - (I * w * 2.0).exp()).ln()
    } else if w.im < -20.0 {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        I * w + c(-std::f64::consts::LN_2, -PI / 2.0) + (real(1.0) - (-I * w * 2.0).exp()).ln()
    } else {
        w.sin().ln()
    }
}

/// Principal-branch log-gamma (Lanczos for `Re z >= 1/2`, reflection below).
///
/// Errors on the pole set `{0, -1, -2, ...}`.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if is_nonpositive_integer(z, 0.0) {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(real(PI.ln()) - ln_sin_pi(z) - ln_gamma_right(real(1.0) - z))
    }
}

pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    if let Some(m) = as_integer(z) {
        if (1..=20).contains(&m) {
            return Ok(real((1..m).map(|k| k as f64).product()));
        }
    }
    Ok(ln_gamma(z)?.exp())
}

/// `1/Gamma(z)`; exactly zero on the pole set.
pub fn reciprocal_gamma(z: ComplexValue) -> ComplexValue {
    if is_nonpositive_integer(z, 0.0) {
        return real(0.0);
    }
    if let Some(m) = as_integer(z) {
        if (1..=20).contains(&m) {
            return real(1.0 / (1..m).map(|k| k as f64).product::<f64>());
        }
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        let one_minus = real(1.0) - z;
        if z.im.abs() < 20.0 {
            (z * PI).sin() / PI * ln_gamma_right(one_minus).exp()
        } else {
            (ln_sin_pi(z) - PI.ln() + ln_gamma_right(one_minus)).exp()
        }
    }
}

/// Pochhammer symbol for an integer index by direct product.
///
/// `(lam)_0 = 1` for every `lam`, including `lam = 0`. Negative indices use
/// `(lam)_{-m} = 1 / ((lam-1)(lam-2)...(lam-m))`.
pub fn pochhammer_int(lam: ComplexValue, n: i64) -> Result<ComplexValue> {
    if n >= 0 {
        let mut acc = real(1.0);
        for k in 0..n {
            acc *= lam + k as f64;
        }
        Ok(acc)
    } else {
        let mut acc = real(1.0);
        for k in 1..=(-n) {
            let f = lam - k as f64;
            if f == real(0.0) {
                return Err(Error::GammaPole(f));
            }
            acc *= f;
        }
        Ok(acc.inv())
    }
}

/// Pochhammer symbol `Gamma(lam + nu) / Gamma(lam)`.
///
/// Integral `nu` always goes through the direct product.
pub fn pochhammer(lam: ComplexValue, nu: ComplexValue) -> Result<ComplexValue> {
    if let Some(n) = as_integer(nu) {
        return pochhammer_int(lam, n);
    }
    let top = lam + nu;
    let lam_pole = is_nonpositive_integer(lam, 0.0);
    let top_pole = is_nonpositive_integer(top, 0.0);
    match (top_pole, lam_pole) {
        (true, _) => Err(Error::GammaPole(top)),
        (false, true) => Ok(real(0.0)),
        (false, false) => Ok((ln_gamma(top)? - ln_gamma(lam)?).exp()),
    }
}

/// Derivative of `(x)_m` with respect to `x` at an integer root `x = -j`
/// (`0 <= j < m`): the product of the remaining factors.
pub fn pochhammer_derivative_at_root(j: i64, m: i64) -> f64 {
    (0..m).filter(|&k| k != j).map(|k| (k - j) as f64).product()
}
