//! Tricomi `U`, Whittaker `W` and parabolic cylinder `D`.
//!
//! All three go through the Laplace integral
//! `U(a,b,z) = Γ(a)⁻¹ ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`, which needs
//! `Re a > 0`. Smaller `a` is reached by the downward recurrence
//! `U(a-1) = (z+2a-b) U(a) - a(a-b+1) U(a+1)`, which is stable because `U` is
//! the minimal solution as `a` grows.

use crate::error::{Error, Result};
use crate::hypergeom::hyp_pfq;
use crate::numerics::{as_integer, ln_gamma, real, ComplexValue, Tolerance};
use crate::quadrature::try_integrate_offset;

/// The integral is only used for `Re a` at least this large, so the `t^{a-1}`
/// endpoint singularity stays mild.
const LIFT_TARGET: f64 = 1.0;
const MAX_LIFT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfluentParams {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub z: ComplexValue,
}

fn default_tol() -> Tolerance {
    Tolerance::default().with_rel(1e-13)
}

/// `U = value * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    value: ComplexValue,
    log_scale: ComplexValue,
}

impl Scaled {
    fn to(self, log_scale: ComplexValue) -> ComplexValue {
        self.value * (self.log_scale - log_scale).exp()
    }

    fn eval(self, extra_log: ComplexValue) -> ComplexValue {
        let v = self.value * (self.log_scale + extra_log).exp();
        if self.value == real(0.0) {
            real(0.0)
        } else {
            v
        }
    }
}

/// Terminating case `a = -m`: `U(-m,b,z) = z^m ₂F₀(-m, 1-m-b; ; -1/z)`.
fn u_polynomial(m: i64, b: ComplexValue, z: ComplexValue, tol: &Tolerance) -> Result<Scaled> {
    let a = real(-(m as f64));
    let s = hyp_pfq(&[a, a - b + 1.0], &[], -z.inv(), &tol.with_max_terms(m as usize + 2))?;
    Ok(Scaled {
        value: s.value,
        log_scale: z.ln() * m as f64,
    })
}

fn u_integral(a: ComplexValue, b: ComplexValue, z: ComplexValue, tol: &Tolerance) -> Result<Scaled> {
    let am1 = a - 1.0;
    let bam1 = b - a - 1.0;
    let log_integrand = |t: f64| am1 * t.ln() + bam1 * t.ln_1p() - z * t;

    // locate the peak of |integrand| on a geometric grid
    let mut peak = f64::NEG_INFINITY;
    let mut t_peak = 0.0;
    for j in -160..=160 {
        let t = (j as f64 * 0.125).exp();
        let v = log_integrand(t).re;
        if v > peak {
            peak = v;
            t_peak = t;
        }
    }
    let decay_scale = 1.0 / t_peak.max(1.0 / z.re);

    let r = try_integrate_offset(|t| Ok((log_integrand(t) - peak).exp()), decay_scale, tol)?.require_converged()?;
    Ok(Scaled {
        value: r.value,
        log_scale: real(peak) - ln_gamma(a)?,
    })
}

fn u_scaled(a: ComplexValue, b: ComplexValue, z: ComplexValue, tol: &Tolerance) -> Result<Scaled> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("Re(z) must be positive, got z = {z}")));
    }
    if let Some(m) = as_integer(a) {
        if m <= 0 {
            return u_polynomial(-m, b, z, tol);
        }
    }
    if a.re >= LIFT_TARGET {
        return u_integral(a, b, z, tol);
    }
    let steps = (LIFT_TARGET - a.re).ceil();
    if !steps.is_finite() || steps as usize > MAX_LIFT {
        return Err(Error::LiftFailure(a));
    }
    let steps = steps as usize;
    let top = a + steps as f64;
    let upper = u_integral(top + 1.0, b, z, tol)?;
    let lower = u_integral(top, b, z, tol)?;
    let scale = lower.log_scale;
    let mut next = upper.to(scale);
    let mut cur = lower.value;
    let mut ak = top;
    for _ in 0..steps {
        let prev = (z + ak * 2.0 - b) * cur - ak * (ak - b + 1.0) * next;
        next = cur;
        cur = prev;
        ak -= 1.0;
    }
    if !cur.re.is_finite() || !cur.im.is_finite() {
        return Err(Error::LiftFailure(a));
    }
    Ok(Scaled {
        value: cur,
        log_scale: scale,
    })
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` for `Re z > 0`.
pub fn tricomi_u(a: ComplexValue, b: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    tricomi_u_with(a, b, z, &default_tol())
}

pub fn tricomi_u_with(a: ComplexValue, b: ComplexValue, z: ComplexValue, tol: &Tolerance) -> Result<ComplexValue> {
    Ok(u_scaled(a, b, z, tol)?.eval(real(0.0)))
}

/// `W_{κ,μ}(z) = z^{μ+1/2} e^{-z/2} U(1/2-κ+μ, 1+2μ, z)`, principal power.
pub fn whittaker_w(kappa: ComplexValue, mu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    whittaker_w_with(kappa, mu, z, &default_tol())
}

pub fn whittaker_w_with(
    kappa: ComplexValue,
    mu: ComplexValue,
    z: ComplexValue,
    tol: &Tolerance,
) -> Result<ComplexValue> {
    let u = u_scaled(0.5 - kappa + mu, mu * 2.0 + 1.0, z, tol)?;
    Ok(u.eval((mu + 0.5) * z.ln() - z * 0.5))
}

/// `ln W_{κ,μ}(z)` (any branch); useful when `W` itself over- or underflows.
pub fn ln_whittaker_w(kappa: ComplexValue, mu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let u = u_scaled(0.5 - kappa + mu, mu * 2.0 + 1.0, z, &default_tol())?;
    if u.value == real(0.0) {
        return Err(Error::Domain("W vanishes; logarithm undefined".into()));
    }
    Ok(u.value.ln() + u.log_scale + (mu + 0.5) * z.ln() - z * 0.5)
}

/// `D_ν(z) = 2^{ν/2} e^{-z²/4} U(-ν/2, 1/2, z²/2)` for `Re z² > 0`.
pub fn parabolic_d(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let z2 = z * z;
    if !(z2.re > 0.0) {
        return Err(Error::Domain(format!("Re(z^2) must be positive, got z = {z}")));
    }
    let u = u_scaled(-nu * 0.5, real(0.5), z2 * 0.5, &default_tol())?;
    Ok(u.eval(nu * 0.5 * std::f64::consts::LN_2 - z2 * 0.25))
}

/// `ln D_ν(z)` (any branch), for orders where `D_ν` under- or overflows.
pub fn ln_parabolic_d(nu: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    let z2 = z * z;
    if !(z2.re > 0.0) {
        return Err(Error::Domain(format!("Re(z^2) must be positive, got z = {z}")));
    }
    let u = u_scaled(-nu * 0.5, real(0.5), z2 * 0.5, &default_tol())?;
    if u.value == real(0.0) {
        return Err(Error::Domain("D vanishes; logarithm undefined".into()));
    }
    Ok(u.value.ln() + u.log_scale + nu * 0.5 * std::f64::consts::LN_2 - z2 * 0.25)
}
