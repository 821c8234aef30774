//! Associated Legendre functions on `t > 1` and Gegenbauer polynomials.

use crate::error::{Error, Result};
use crate::hypergeom::{hyp_2f1_cont, hyp_pfq};
use crate::numerics::{as_integer, ln_gamma, pochhammer_int, real, reciprocal_gamma, ComplexValue, Tolerance};
use crate::quadrature::integrate_finite;
use crate::report::{params, IdentityReport, Status};

/// Below this distance from `t = 1` only the leading power is kept.
const NEAR_ONE: f64 = 1e-8;

/// Degree `nu`, order `mu` and the argument stored as `t - 1`, so that points
/// next to the branch point keep full relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreArgs {
    pub nu: ComplexValue,
    pub mu: ComplexValue,
    t_minus_one: f64,
}

impl LegendreArgs {
    pub fn new(nu: ComplexValue, mu: ComplexValue, t: f64) -> Self {
        Self::from_offset(nu, mu, t - 1.0)
    }

    pub fn from_offset(nu: ComplexValue, mu: ComplexValue, t_minus_one: f64) -> Self {
        Self { nu, mu, t_minus_one }
    }

    pub fn t(&self) -> f64 {
        1.0 + self.t_minus_one
    }

    pub fn t_minus_one(&self) -> f64 {
        self.t_minus_one
    }
}

fn legendre_tol() -> Tolerance {
    Tolerance::tight().with_rel(1e-15)
}

/// `P^μ_ν(t) = Γ(1-μ)⁻¹ ((t+1)/(t-1))^{μ/2} ₂F₁(-ν, ν+1; 1-μ; (1-t)/2)`.
pub fn legendre_p(args: LegendreArgs) -> Result<ComplexValue> {
    legendre_p_with(args, &legendre_tol())
}

pub fn legendre_p_with(args: LegendreArgs, tol: &Tolerance) -> Result<ComplexValue> {
    let LegendreArgs { nu, mu, t_minus_one: d } = args;
    if let Some(m) = as_integer(mu) {
        if m >= 1 {
            return Err(Error::Domain(format!("order mu = {m} is a positive integer")));
        }
    }
    if !(d >= 0.0) || (d == 0.0 && mu.re > 0.0) {
        return Err(Error::Domain(format!("argument t = {} outside t > 1", 1.0 + d)));
    }
    if d == 0.0 {
        // Re mu <= 0: the power vanishes unless mu = 0
        return Ok(if mu == real(0.0) { real(1.0) } else { real(0.0) });
    }
    let power = ((2.0 + d) / d).ln() * mu * 0.5;
    let series = if d < NEAR_ONE {
        real(1.0)
    } else {
        let s = hyp_2f1_cont(-nu, nu + 1.0, real(1.0) - mu, -0.5 * d, tol)?;
        if !s.converged {
            return Err(Error::SeriesNotConverged {
                terms: s.terms_used,
                last_term: s.tail_estimate,
            });
        }
        s.value
    };
    Ok(reciprocal_gamma(real(1.0) - mu) * power.exp() * series)
}

/// Gegenbauer polynomial `C^ρ_k(x) = (2ρ)_k / k! · ₂F₁(-k, k+2ρ; ρ+1/2; (1-x)/2)`.
pub fn gegenbauer_c(k: u32, rho: f64, x: f64) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let kk = k as i64;
    let lead = pochhammer_int(real(2.0 * rho), kk)? / pochhammer_int(real(1.0), kk)?;
    if lead == real(0.0) {
        return Ok(0.0);
    }
    let s = hyp_pfq(
        &[real(-(k as f64)), real(k as f64 + 2.0 * rho)],
        &[real(rho + 0.5)],
        real(0.5 * (1.0 - x)),
        &Tolerance::tight(),
    )?;
    Ok((lead * s.value).re)
}

/// Orthogonality norm `∫₋₁¹ (1-x²)^{ρ-1/2} [C^ρ_k]² dx`.
pub fn gegenbauer_norm(k: u32, rho: f64) -> Result<f64> {
    let k = k as f64;
    let ln = real((1.0 - 2.0 * rho) * std::f64::consts::LN_2 + std::f64::consts::PI.ln())
        + ln_gamma(real(k + 2.0 * rho))?
        - ln_gamma(real(k + 1.0))?
        - ln_gamma(real(rho))? * 2.0;
    Ok(ln.exp().re / (k + rho))
}

/// Integrates `(1-x²)^{ρ-1/2} C^ρ_k C^ρ_m` over `[-1, 1]` and compares it
/// with `δ_{km}` times the norm `2^{1-2ρ} π Γ(k+2ρ) / (k! (k+ρ) Γ(ρ)²)`.
///
/// Diagonal entries are judged by relative error, off-diagonal ones by
/// absolute error, both at `1e-10`.
pub fn gegenbauer_orthogonality_check(k: u32, m: u32, rho: f64) -> IdentityReport {
    let p = params([("k", (k as i64).into()), ("m", (m as i64).into()), ("rho", rho.into())]);
    const ID: &str = "gegenbauer-orthogonality";
    if !(rho > -0.5) || rho == 0.0 {
        return IdentityReport::error(
            ID,
            p,
            &Error::Domain(format!("rho = {rho} outside (-1/2, 0) U (0, inf)")),
        );
    }
    let tol = Tolerance::default().with_rel(1e-14);
    let integrand = |x: f64| {
        let w = ((1.0 - x) * (1.0 + x)).powf(rho - 0.5);
        let ck = gegenbauer_c(k, rho, x).unwrap_or(f64::NAN);
        let cm = gegenbauer_c(m, rho, x).unwrap_or(f64::NAN);
        real(w * ck * cm)
    };
    let lhs = match integrate_finite(integrand, -1.0, 1.0, &tol).and_then(|r| r.require_converged()) {
        Ok(r) => r.value,
        Err(e) => return IdentityReport::error(ID, p, &e),
    };
    let rhs = if k == m {
        match gegenbauer_norm(k, rho) {
            Ok(v) => real(v),
            Err(e) => return IdentityReport::error(ID, p, &e),
        }
    } else {
        real(0.0)
    };
    let r = IdentityReport::new(ID, p, lhs, rhs, Status::Match, "");
    let (ok, how) = if k == m {
        (r.rel_diff <= 1e-10, "diagonal, relative tolerance 1e-10")
    } else {
        (r.abs_diff <= 1e-10, "off-diagonal, absolute tolerance 1e-10")
    };
    let status = if ok { Status::Match } else { Status::Mismatch };
    r.with_status(status).with_notes(how)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, gamma, rel_diff};
    use std::f64::consts::PI;

    fn p(nu: ComplexValue, mu: ComplexValue, t: f64) -> ComplexValue {
        legendre_p(LegendreArgs::new(nu, mu, t)).unwrap()
    }

    #[test]
    fn trivial_degree() {
        for t in [1.0 + 1e-10, 1.5, 3.0, 40.0] {
            let v = p(real(-1.0), real(0.0), t);
            assert!((v - 1.0).norm() < 1e-15, "{t}: {v}");
        }
    }

    #[test]
    fn power_law_anchor() {
        let v = p(real(1.0), real(-1.0), 2.0);
        assert!((v.re - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((v.re - 0.866_025_403_8).abs() < 1e-9);
    }

    #[test]
    fn half_order_product_is_a_power() {
        let t = 3.0;
        let v = p(real(-1.0), real(0.5), t) * p(real(-0.5), real(0.5), t);
        let expect = 2f64.sqrt() / PI / (t - 1.0).sqrt();
        assert!((v.re - expect).abs() < 1e-14, "{v}");
        assert!((v.re - 0.318_309_9).abs() < 1e-7);
    }

    #[test]
    fn power_law_reduction() {
        for nu in [0.5, 1.0, 1.5, 2.0] {
            for t in [1.5f64, 2.0, 5.0] {
                let v = p(real(nu), real(-nu), t);
                let expect = (t * t - 1.0).powf(nu / 2.0) / (2f64.powf(nu) * gamma(real(nu + 1.0)).unwrap().re);
                assert!(rel_diff(v, real(expect)) < 1e-10, "nu {nu} t {t}");
            }
        }
    }

    #[test]
    fn degree_reflection() {
        for (nu, mu) in [
            (c(0.3, 0.7), real(-0.5)),
            (c(-1.2, 2.0), c(0.2, -0.4)),
            (real(2.6), real(-1.5)),
        ] {
            for t in [1.01, 1.7, 12.0] {
                let a = p(nu, mu, t);
                let b = p(-nu - 1.0, mu, t);
                assert!(rel_diff(a, b) < 1e-10, "{nu} {mu} {t}: {a} {b}");
            }
        }
    }

    #[test]
    fn legendre_polynomials_at_zero_order() {
        // P_2(t) = (3t^2 - 1)/2
        let t = 2.5;
        assert!((p(real(2.0), real(0.0), t).re - (3.0 * t * t - 1.0) / 2.0).abs() < 1e-13);
        // conical function P_{-1/2+i tau}(t) is real
        let v = p(c(-0.5, 1.3), real(0.0), 4.0);
        assert!(v.im.abs() < 1e-14 * v.re.abs().max(1e-300));
    }

    #[test]
    fn domain_errors() {
        assert!(legendre_p(LegendreArgs::new(real(0.5), real(1.0), 2.0)).is_err());
        assert!(legendre_p(LegendreArgs::new(real(0.5), real(0.5), 1.0)).is_err());
        assert!(legendre_p(LegendreArgs::new(real(0.5), real(-0.5), 0.5)).is_err());
        assert_eq!(
            legendre_p(LegendreArgs::new(real(0.5), real(-0.5), 1.0)).unwrap(),
            real(0.0)
        );
    }

    #[test]
    fn near_branch_point_is_leading_power() {
        let d = 1e-10;
        let v = legendre_p(LegendreArgs::from_offset(real(0.7), real(-1.5), d)).unwrap();
        let lead = ((2.0 + d) / d).powf(-0.75) / gamma(real(2.5)).unwrap().re;
        assert!(rel_diff(v, real(lead)) < 1e-9);
    }

    #[test]
    fn gegenbauer_values() {
        assert_eq!(gegenbauer_c(0, 0.7, 0.2).unwrap(), 1.0);
        assert!((gegenbauer_c(1, 1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        // 2 lambda (lambda+1) x^2 - lambda
        let lam = 1.5;
        let x = 0.3;
        let oracle = 2.0 * lam * (lam + 1.0) * x * x - lam;
        let v = gegenbauer_c(2, lam, x).unwrap();
        assert!((v - oracle).abs() < 1e-14);
        assert!((v + 0.825).abs() < 1e-14);
        // Chebyshev U_n = C^1_n: U_3(x) = 8x^3 - 4x
        let x = -0.45;
        assert!((gegenbauer_c(3, 1.0, x).unwrap() - (8.0 * x * x * x - 4.0 * x)).abs() < 1e-14);
    }

    #[test]
    fn orthogonality_examples() {
        let off = gegenbauer_orthogonality_check(1, 2, 1.0);
        assert_eq!(off.status, Status::Match);
        assert!(off.abs_diff < 1e-12);
        let zero = gegenbauer_orthogonality_check(0, 0, 1.0);
        assert!((zero.rhs.re - PI / 2.0).abs() < 1e-14);
        assert_eq!(zero.status, Status::Match);
        let diag = gegenbauer_orthogonality_check(2, 2, 1.5);
        assert_eq!(diag.status, Status::Match, "{diag:?}");
    }

    #[test]
    fn orthogonality_grid() {
        for rho in [0.5, 1.0, 1.5, 2.5] {
            for k in 0..=6 {
                for m in 0..=6 {
                    let r = gegenbauer_orthogonality_check(k, m, rho);
                    assert_eq!(r.status, Status::Match, "{r:?}");
                }
            }
        }
    }
}
