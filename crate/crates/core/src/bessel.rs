//! Bessel functions of complex order.
//!
//! `J` and `I` are summed from their power series, `Y` comes from the
//! Neumann combination of `J_{±ν}`, and `K` is the cosh integral
//! `∫₀^∞ e^{-x cosh u} cosh(νu) du`, which also covers imaginary order.
//! For small arguments and orders away from the integers `K` is taken from
//! `π (I_{-ν} - I_ν) / (2 sin νπ)` instead.

use crate::error::{Error, Result};
use crate::numerics::{as_integer, c, real, reciprocal_gamma, ComplexValue, Tolerance, I};
use crate::quadrature::{integrate_finite, try_integrate_offset};

use std::f64::consts::{FRAC_PI_2, PI};

/// Offset used for Neumann's formula at integer order.
const INTEGER_ORDER_OFFSET: f64 = 1e-6;
/// Largest argument for the `I`-difference route to `K`.
const K_SERIES_MAX_X: f64 = 2.0;
/// Smallest distance from an integer order for the `I`-difference route.
const K_SERIES_MIN_OFFSET: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    pub nu: ComplexValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    First,
    Second,
}

impl HankelKind {
    pub fn from_index(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(HankelKind::First),
            2 => Ok(HankelKind::Second),
            k => Err(Error::Domain(format!("Hankel kind must be 1 or 2, got {k}"))),
        }
    }
}

fn special_tol() -> Tolerance {
    Tolerance::default().with_rel(1e-13)
}

/// `Σ_k s^k (z/2)^{ν+2k} / (k! Γ(ν+k+1))` with `s = +1` for `I`, `-1` for `J`.
fn power_series(nu: ComplexValue, z: ComplexValue, sign: f64, tol: &Tolerance) -> Result<ComplexValue> {
    if z == real(0.0) {
        return Ok(if nu == real(0.0) {
            real(1.0)
        } else if nu.re > 0.0 {
            real(0.0)
        } else {
            return Err(Error::Domain(format!("order {nu} is singular at z = 0")));
        });
    }
    let half = z * 0.5;
    let q = half * half * sign;
    // for ν = -m the first m terms vanish
    let start = match as_integer(nu) {
        Some(m) if m < 0 => (-m) as usize,
        _ => 0,
    };
    let mut k = start as f64;
    let log_lead = (nu + 2.0 * k) * half.ln();
    let mut fact = 1.0;
    for j in 1..=start {
        fact *= j as f64;
    }
    let mut term = log_lead.exp() * reciprocal_gamma(nu + k + 1.0) / fact * sign.powi(start as i32);
    let mut sum = term;
    let mut quiet = 0;
    for _ in 0..tol.max_terms {
        term *= q / ((k + 1.0) * (nu + k + 1.0));
        k += 1.0;
        sum += term;
        if term.norm() <= tol.threshold(sum.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::SeriesNotConverged {
        terms: tol.max_terms,
        last_term: term.norm(),
    })
}

/// Modified Bessel function of the first kind, principal branch.
pub fn bessel_i(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    power_series(nu, z, 1.0, &Tolerance::tight())
}

/// Bessel function of the first kind, principal branch.
pub fn bessel_j(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    power_series(nu, z, -1.0, &Tolerance::tight())
}

fn neumann(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let s = (nu * PI).sin();
    Ok((bessel_j(nu, z)? * (nu * PI).cos() - bessel_j(-nu, z)?) / s)
}

/// Bessel function of the second kind from
/// `Y_ν = (J_ν cos νπ - J_{-ν}) / sin νπ`.
///
/// Within `1e-6` of an integer the value is interpolated from the two
/// points `n ± 1e-6`.
pub fn bessel_y(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let n = nu.re.round();
    let off = nu - real(n);
    if off.norm() < INTEGER_ORDER_OFFSET {
        let d = INTEGER_ORDER_OFFSET;
        let lo = neumann(real(n - d), z)?;
        let hi = neumann(real(n + d), z)?;
        let mid = (lo + hi) * 0.5;
        return Ok(mid + (hi - lo) * (off / (2.0 * d)));
    }
    neumann(nu, z)
}

/// `H^{(1)} = J + iY`, `H^{(2)} = J - iY`.
pub fn hankel(kind: HankelKind, nu: ComplexValue, x: ComplexValue) -> Result<ComplexValue> {
    let j = bessel_j(nu, x)?;
    let y = bessel_y(nu, x)?;
    Ok(match kind {
        HankelKind::First => j + I * y,
        HankelKind::Second => j - I * y,
    })
}

/// Macdonald function `K_ν(x)` for real `x > 0`.
pub fn bessel_k(nu: ComplexValue, x: f64) -> Result<ComplexValue> {
    bessel_k_with(nu, x, &special_tol())
}

pub fn bessel_k_with(nu: ComplexValue, x: f64, tol: &Tolerance) -> Result<ComplexValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K needs x > 0, got {x}")));
    }
    let off = (nu - real(nu.re.round())).norm();
    if x <= K_SERIES_MAX_X && off >= K_SERIES_MIN_OFFSET {
        return bessel_k_series(nu, x);
    }
    bessel_k_integral(nu, x, tol)
}

/// `K_ν(x) = π (I_{-ν}(x) - I_ν(x)) / (2 sin νπ)`.
fn bessel_k_series(nu: ComplexValue, x: f64) -> Result<ComplexValue> {
    let z = real(x);
    let tol = Tolerance::tight();
    let v = (power_series(-nu, z, 1.0, &tol)? - power_series(nu, z, 1.0, &tol)?) * FRAC_PI_2 / (nu * PI).sin();
    if nu.re == 0.0 {
        return Ok(real(v.re));
    }
    Ok(v)
}

/// `K_ν(x)` from the cosh integral.
pub fn bessel_k_integral(nu: ComplexValue, x: f64, tol: &Tolerance) -> Result<ComplexValue> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K needs x > 0, got {x}")));
    }
    let a = nu.re.abs();
    // log-magnitude peak of e^{-x cosh u + |Re ν| u}
    let u_peak = (a / x).asinh();
    let peak = -x * u_peak.cosh() + a * u_peak;
    let scale = 1.0 / u_peak.max((2.0 / x).ln()).max(1.0);
    let r = try_integrate_offset(
        |u| {
            let base = -x * u.cosh() - peak;
            let t = (real(base) + nu * u).exp() + (real(base) - nu * u).exp();
            Ok(t * 0.5)
        },
        scale,
        tol,
    )?
    .require_converged()?;
    let value = r.value * peak.exp();
    if nu.re == 0.0 {
        // cosh(iτu) is real
        return Ok(real(value.re));
    }
    Ok(value)
}

/// `K_ν(-i s u)` for `s = ±1` and `u > 0`, on the boundary of the region where
/// the cosh integral converges.
///
/// The contour is moved to `[0, isπ/2] ∪ [isπ/2, isπ/2 + ∞)`:
/// `i ∫₀^{sπ/2} e^{isu cos φ} cos(νφ) dφ + ∫₀^∞ e^{-u sinh τ} cosh(ν(τ + isπ/2)) dτ`.
pub fn bessel_k_rotated(nu: ComplexValue, u: f64, s: f64) -> Result<ComplexValue> {
    if !(u > 0.0) || (s != 1.0 && s != -1.0) {
        return Err(Error::Domain(format!(
            "rotated K needs u > 0 and s = ±1, got u = {u}, s = {s}"
        )));
    }
    let tol = special_tol();
    let arc = integrate_finite(
        |phi| (I * (s * u * phi.cos())).exp() * (nu * phi).cos(),
        0.0,
        s * FRAC_PI_2,
        &tol,
    )?
    .require_converged()?;
    let shift = c(0.0, s * FRAC_PI_2);
    let ray = try_integrate_offset(
        |tau| Ok((nu * (real(tau) + shift)).cosh() * (-u * tau.sinh()).exp()),
        1.0 / (1.0 / u).max(1.0),
        &tol,
    )?
    .require_converged()?;
    Ok(I * arc.value + ray.value)
}

/// Right side of `H^{(1+η)}_ν(u) = (-1)^η 2/(πi) e^{(-1)^{η+1}νπi/2} K_ν(e^{(-1)^{η+1}πi/2} u)`.
pub fn hankel_via_k(kind: HankelKind, nu: ComplexValue, u: f64) -> Result<ComplexValue> {
    let (sign, s) = match kind {
        HankelKind::First => (1.0, -1.0),
        HankelKind::Second => (-1.0, 1.0),
    };
    // K_ν(e^{sπi/2} u) = K_ν(i s u) = K_ν(-i(-s)u)
    let k = bessel_k_rotated(nu, u, -s)?;
    Ok(real(sign) * 2.0 / (PI * I) * (nu * s * FRAC_PI_2 * I).exp() * k)
}
