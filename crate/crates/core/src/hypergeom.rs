//! Generalized hypergeometric series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{real, ComplexValue, Tolerance};

/// Outcome of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: ComplexValue,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
}

impl SeriesResult {
    pub fn exact(value: ComplexValue, terms_used: usize) -> Self {
        Self {
            value,
            terms_used,
            tail_estimate: 0.0,
            converged: true,
        }
    }

    fn scaled(self, factor: ComplexValue) -> Self {
        Self {
            value: self.value * factor,
            tail_estimate: self.tail_estimate * factor.norm(),
            ..self
        }
    }
}

/// Index `m` of the first nonpositive-integer numerator parameter `-m`, if any.
fn terminating_index(num: &[ComplexValue], slack: f64) -> Option<usize> {
    num.iter()
        .filter_map(|a| {
            let r = a.re.round();
            (r <= 0.0 && (a - real(r)).norm() <= slack).then_some((-r) as usize)
        })
        .min()
}

/// `pFq(num; den; z)` summed term by term.
///
/// A numerator parameter equal to a nonpositive integer `-m` makes the sum
/// finite; it is then evaluated exactly through index `m`. Otherwise the
/// sum stops after three consecutive terms fall below the tolerance
/// threshold relative to the partial sum.
pub fn hyp_pfq(num: &[ComplexValue], den: &[ComplexValue], z: ComplexValue, tol: &Tolerance) -> Result<SeriesResult> {
    if num.iter().any(|a| *a == real(0.0)) {
        return Ok(SeriesResult::exact(real(1.0), 1));
    }
    let stop = terminating_index(num, tol.abs_floor);
    let p = num.len();
    let q = den.len();
    if stop.is_none() && z != real(0.0) {
        if p > q + 1 {
            return Err(Error::Divergent { p, q_plus_one: q + 1 });
        }
        if p == q + 1 && z.norm() > 1.0 {
            return Err(Error::Domain(format!(
                "|z| = {} outside the unit disc for a {p}F{q} series",
                z.norm()
            )));
        }
    }

    let mut sum = real(1.0);
    let mut term = real(1.0);
    let mut small_run = 0usize;
    let mut recent = [0.0f64; 3];
    let limit = match stop {
        Some(m) => m,
        None => tol.max_terms,
    };
    let mut k = 0usize;
    while k < limit {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for a in num {
            ratio *= a + kf;
        }
        for b in den {
            let d = b + kf;
            if d == real(0.0) {
                return Err(Error::DenominatorPole { param: *b, term: k });
            }
            ratio /= d;
        }
        term *= ratio;
        sum += term;
        k += 1;
        if stop.is_none() {
            let mag = term.norm();
            recent[k % 3] = mag;
            if mag <= tol.threshold(sum.norm()) {
                small_run += 1;
                if small_run >= 3 {
                    let tail = recent.iter().cloned().fold(0.0, f64::max);
                    return Ok(SeriesResult {
                        value: sum,
                        terms_used: k + 1,
                        tail_estimate: tail,
                        converged: true,
                    });
                }
            } else {
                small_run = 0;
            }
        }
    }
    match stop {
        Some(m) => Ok(SeriesResult::exact(sum, m + 1)),
        None => Ok(SeriesResult {
            value: sum,
            terms_used: k + 1,
            tail_estimate: term.norm() * 2.0,
            converged: false,
        }),
    }
}

/// Series with a zero numerator parameter: identically 1 for every `z`.
///
/// Returns `None` when no numerator parameter is zero.
pub fn hyp_pfq_zero_param(num: &[ComplexValue], _den: &[ComplexValue], _z: ComplexValue) -> Option<ComplexValue> {
    num.iter().any(|a| *a == real(0.0)).then_some(real(1.0))
}

/// `2F1(a, b; c; z)` on the real ray `z < 1`.
///
/// `-1/2 <= z < 1` is summed directly; below that the Pfaff transformation
/// maps the argument into `[1/3, 1)`.
pub fn hyp_2f1_cont(
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    z: f64,
    tol: &Tolerance,
) -> Result<SeriesResult> {
    if !(z < 1.0) {
        return Err(Error::Domain(format!("2F1 continuation needs z < 1, got {z}")));
    }
    if a == real(0.0) || b == real(0.0) {
        return Ok(SeriesResult::exact(real(1.0), 1));
    }
    if z >= -0.5 {
        return hyp_pfq(&[a, b], &[c], real(z), tol);
    }
    let w = z / (z - 1.0);
    let log_base = (1.0 - z).ln();
    let terminates = |x: ComplexValue| terminating_index(&[x], tol.abs_floor).is_some();
    // pick a terminating form when one exists
    let use_b_form = !(terminates(a) || terminates(c - b)) && (terminates(b) || terminates(c - a));
    if use_b_form {
        let s = hyp_pfq(&[c - a, b], &[c], real(w), tol)?;
        Ok(s.scaled((-b * log_base).exp()))
    } else {
        let s = hyp_pfq(&[a, c - b], &[c], real(w), tol)?;
        Ok(s.scaled((-a * log_base).exp()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn tol() -> Tolerance {
        Tolerance::tight()
    }

    #[test]
    fn argument_zero_gives_one() {
        let s = hyp_pfq(&[c(0.3, 1.0), real(2.5)], &[real(-0.5)], real(0.0), &tol()).unwrap();
        assert_eq!(s.value, real(1.0));
        assert!(s.converged);
    }

    #[test]
    fn geometric_series() {
        let s = hyp_pfq(&[real(1.0)], &[], real(0.5), &tol()).unwrap();
        assert!((s.value - real(2.0)).norm() < 1e-15);
        assert!(s.converged);
        assert!(s.tail_estimate <= tol().threshold(s.value.norm()));
    }

    #[test]
    fn terminating_4f3() {
        // 1 - 1/4 + 16/432 by hand
        let s = hyp_pfq(
            &[real(-2.0), real(1.0), real(1.0), real(1.0)],
            &[real(2.0), real(2.0), real(2.0)],
            real(1.0),
            &tol(),
        )
        .unwrap();
        let by_hand = 1.0 - 0.25 + 16.0 / 432.0;
        assert!((s.value.re - by_hand).abs() < 1e-15);
        assert!((s.value.re - 0.787_037_037_0).abs() < 1e-10);
        assert_eq!(s.terms_used, 3);
        assert_eq!(s.tail_estimate, 0.0);
    }

    #[test]
    fn zero_parameter_is_exactly_one() {
        let nums = [real(0.0), real(5.0), real(2.0), real(7.0)];
        let dens = [real(1.0), real(1.0), real(1.0)];
        assert_eq!(hyp_pfq_zero_param(&nums, &dens, real(1.0)), Some(real(1.0)));
        let s = hyp_pfq(&nums, &dens, real(1.0), &tol()).unwrap();
        assert_eq!(s.value, real(1.0));
        let s = hyp_pfq(
            &[real(0.0), real(-3.0), real(1.0), real(1.0)],
            &[real(2.0), real(2.0), real(2.0)],
            real(1.0),
            &tol(),
        )
        .unwrap();
        assert_eq!(s.value.to_string(), real(1.0).to_string());
        assert_eq!(hyp_pfq_zero_param(&[real(1.0)], &[], real(0.2)), None);
    }

    #[test]
    fn divergent_and_pole_errors() {
        let e = hyp_pfq(&[real(1.0), real(1.0)], &[], real(0.1), &tol());
        assert!(matches!(e, Err(Error::Divergent { .. })));
        // terminating 2F0 is fine
        let ok = hyp_pfq(&[real(-2.0), real(1.0)], &[], real(0.1), &tol()).unwrap();
        assert!((ok.value.re - (1.0 - 0.2 + 2.0 * 2.0 * 0.01 / 2.0)).abs() < 1e-15);
        let e = hyp_pfq(&[real(1.0)], &[real(-1.0)], real(0.1), &tol());
        assert!(matches!(e, Err(Error::DenominatorPole { .. })));
        // denominator pole beyond the termination index is harmless
        let ok = hyp_pfq(&[real(-1.0)], &[real(-3.0)], real(0.5), &tol()).unwrap();
        assert!((ok.value.re - (1.0 + 0.5 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn non_convergence_is_reported() {
        let t = Tolerance::tight().with_max_terms(5);
        let s = hyp_pfq(&[real(1.0)], &[], real(0.9), &t).unwrap();
        assert!(!s.converged);
        assert!(s.terms_used <= 6);
    }

    #[test]
    fn continuation_log_closed_form() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        for z in [-1.0, -3.0, -0.7, -0.2, 0.4] {
            let s = hyp_2f1_cont(real(1.0), real(1.0), real(2.0), z, &tol()).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!((s.value.re - exact).abs() < 1e-14 * exact.abs(), "z = {z}");
        }
        let s = hyp_2f1_cont(real(1.0), real(1.0), real(2.0), -1.0, &tol()).unwrap();
        assert!((s.value.re - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn legendre_style_parameters_at_zero() {
        let nu = c(0.4, 1.3);
        let s = hyp_2f1_cont(-nu, nu + 1.0, real(1.0), 0.0, &tol()).unwrap();
        assert_eq!(s.value, real(1.0));
    }

    #[test]
    fn continuation_against_euler_integral() {
        // 2F1(1/2, 1/2; 3/2; -3) = asinh(sqrt 3) / sqrt 3 from the Euler integral
        // int_0^1 t^{-1/2} (1 + 3t)^{-1/2} dt / B(1/2, 1).
        let oracle = {
            // substitute t = s^2: 2 int_0^1 (1 + 3 s^2)^{-1/2} ds / 2, composite Simpson
            let n = 20_000;
            let h = 1.0 / n as f64;
            let f = |s: f64| (1.0 + 3.0 * s * s).powf(-0.5);
            let mut acc = f(0.0) + f(1.0);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * f(k as f64 * h);
            }
            acc * h / 3.0
        };
        let s = hyp_2f1_cont(real(0.5), real(0.5), real(1.5), -3.0, &tol()).unwrap();
        assert!((s.value.re - oracle).abs() < 1e-12, "{} vs {oracle}", s.value.re);
        assert!(s.value.im.abs() < 1e-15);
    }

    #[test]
    fn continuation_rejects_z_at_least_one() {
        assert!(hyp_2f1_cont(real(1.0), real(1.0), real(2.0), 1.0, &tol()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn termination_bound(m in 0usize..12, b in 0.1f64..3.0, cc in 0.2f64..4.0, z in -2.0f64..2.0) {
                let s = hyp_pfq(&[real(-(m as f64)), real(b)], &[real(cc)], real(z), &Tolerance::default()).unwrap();
                prop_assert!(s.terms_used <= m + 1);
                prop_assert!(s.converged);
                prop_assert_eq!(s.tail_estimate, 0.0);
            }

            #[test]
            fn pfaff_matches_direct(a in -2.0f64..2.0, b in -2.0f64..2.0, cc in 0.3f64..3.0, z in -0.95f64..-0.05) {
                let direct = hyp_pfq(&[real(a), real(b)], &[real(cc)], real(z), &Tolerance::tight()).unwrap();
                let w = z / (z - 1.0);
                let pf = hyp_pfq(&[real(a), real(cc - b)], &[real(cc)], real(w), &Tolerance::tight()).unwrap();
                let via = pf.value * (-(real(a)) * (1.0 - z).ln()).exp();
                let scale = direct.value.norm().max(1e-3);
                prop_assert!((direct.value - via).norm() <= 1e-9 * scale);
            }
        }
    }
}
