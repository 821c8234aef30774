//! Double-exponential quadrature.
//!
//! Finite intervals use the tanh-sinh map, half-lines the exp-sinh map.
//! Each level halves the step and only evaluates the new (odd) nodes, so the
//! abscissae are fixed and the summation order is deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{real, ComplexValue, Tolerance};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;
const FIRST_STEP: f64 = 0.5;
const MAX_LEVELS: usize = 12;
const UNDERFLOW: f64 = 1e-300;
/// A node is dropped from the tail once its contribution is this small
/// relative to the running estimate.
const TAIL_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: ComplexValue,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// `|I_L - I_{L-1}|` for every refinement level after the first.
    pub level_errors: Vec<f64>,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        Self {
            value: real(0.0),
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
            level_errors: Vec::new(),
        }
    }

    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNotConverged {
                evaluations: self.evaluations,
                error_estimate: self.abs_error_estimate,
            })
        }
    }
}

/// Integration range for [`integrate_over`] and [`integrate_double`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite {
        a: f64,
        b: f64,
    },
    /// `[start, inf)`; `decay_scale` is the expected decay rate of the integrand.
    SemiInfinite {
        start: f64,
        decay_scale: f64,
    },
}

/// Node placement in the transformed variable `s`.
trait Map {
    /// `(x, dx/ds)` at `s`, or `None` once the node is indistinguishable from
    /// an endpoint or has left the representable range.
    fn node(&self, s: f64) -> Option<(f64, f64)>;
}

struct TanhSinh {
    a: f64,
    b: f64,
}

impl Map for TanhSinh {
    fn node(&self, s: f64) -> Option<(f64, f64)> {
        let half = 0.5 * (self.b - self.a);
        let y = FRAC_PI_2 * s.sinh();
        // distance to the nearer endpoint, computed without cancellation
        let gap = half * 2.0 / ((2.0 * y.abs()).exp() + 1.0);
        let x = if s >= 0.0 { self.b - gap } else { self.a + gap };
        if x <= self.a || x >= self.b || gap == 0.0 {
            return None;
        }
        let cy = y.cosh();
        let w = half * FRAC_PI_2 * s.cosh() / (cy * cy);
        (w > 0.0 && w.is_finite()).then_some((x, w))
    }
}

/// Exp-sinh on `(0, inf)`; the integrand receives the offset from the start.
struct ExpSinh {
    scale: f64,
}

impl Map for ExpSinh {
    fn node(&self, s: f64) -> Option<(f64, f64)> {
        let y = FRAC_PI_2 * s.sinh();
        let x = y.exp() / self.scale;
        if x == 0.0 || !x.is_finite() {
            return None;
        }
        let w = x * FRAC_PI_2 * s.cosh();
        w.is_finite().then_some((x, w))
    }
}

fn check(v: ComplexValue, x: f64) -> Result<ComplexValue> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Integrand { abscissa: x });
    }
    if v.norm() < UNDERFLOW {
        Ok(real(0.0))
    } else {
        Ok(v)
    }
}

/// Sums `w f` over nodes `s = start + k * stride` walking away from the
/// centre in one direction.
fn sweep<F, M>(
    f: &F,
    map: &M,
    start: f64,
    stride: f64,
    h: f64,
    reference: f64,
    evals: &mut usize,
) -> Result<(ComplexValue, f64)>
where
    F: Fn(f64) -> Result<ComplexValue>,
    M: Map,
{
    let mut acc = real(0.0);
    let mut acc_abs = 0.0;
    let mut quiet = 0;
    let mut s = start;
    loop {
        let Some((x, w)) = map.node(s) else { break };
        let v = check(f(x)?, x)?;
        *evals += 1;
        let term = v * w;
        acc += term;
        acc_abs += term.norm();
        let contribution = term.norm() * h;
        let scale = reference.max((acc.norm() * h).abs());
        if contribution <= TAIL_CUTOFF * scale || contribution < UNDERFLOW {
            quiet += 1;
            if quiet >= 2 && s.abs() > 1.0 {
                break;
            }
        } else {
            quiet = 0;
        }
        s += stride;
    }
    Ok((acc, acc_abs))
}

fn de_integrate<F, M>(f: F, map: M, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexValue>,
    M: Map,
{
    let mut evals = 0usize;
    let mut h = FIRST_STEP;

    // level 0: every multiple of the first step
    let mut raw = real(0.0);
    // sum of |w f|, which bounds the rounding error of the weighted sum
    let mut raw_abs = 0.0;
    if let Some((x, w)) = map.node(0.0) {
        let t = check(f(x)?, x)? * w;
        raw += t;
        raw_abs += t.norm();
        evals += 1;
    }
    let (right, right_abs) = sweep(&f, &map, h, h, h, 0.0, &mut evals)?;
    raw += right;
    raw_abs += right_abs;
    let reference = (raw * h).norm();
    let (left, left_abs) = sweep(&f, &map, -h, -h, h, reference, &mut evals)?;
    raw += left;
    raw_abs += left_abs;
    let mut estimate = raw * h;

    let mut level_errors = Vec::new();
    let mut below = 0;
    for _ in 1..=MAX_LEVELS {
        if evals >= tol.max_evals {
            break;
        }
        h *= 0.5;
        let reference = estimate.norm();
        for stride in [2.0 * h, -2.0 * h] {
            let (part, part_abs) = sweep(&f, &map, stride * 0.5, stride, h, reference, &mut evals)?;
            raw += part;
            raw_abs += part_abs;
        }
        let next = raw * h;
        let err = (next - estimate).norm();
        estimate = next;
        level_errors.push(err);
        let roundoff = 100.0 * f64::EPSILON * raw_abs * h;
        if err <= tol.threshold(estimate.norm()).max(roundoff) {
            below += 1;
            if below >= 2 {
                return Ok(QuadratureResult {
                    value: estimate,
                    abs_error_estimate: err,
                    evaluations: evals,
                    converged: true,
                    level_errors,
                });
            }
        } else {
            below = 0;
        }
    }
    let err = level_errors.last().copied().unwrap_or(f64::INFINITY);
    Ok(QuadratureResult {
        value: estimate,
        abs_error_estimate: err,
        evaluations: evals,
        converged: false,
        level_errors,
    })
}

/// `int_a^b f(x) dx` for a fallible integrand.
pub fn try_integrate_finite<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("finite rule needs finite limits".into()));
    }
    if a > b {
        let mut r = try_integrate_finite(f, b, a, tol)?;
        r.value = -r.value;
        return Ok(r);
    }
    de_integrate(f, TanhSinh { a, b }, tol)
}

/// `int_a^b f(x) dx` by tanh-sinh.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> ComplexValue,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, tol)
}

/// `int_0^inf f(d) dd` where the integrand receives the distance from the
/// lower limit directly, so endpoint singularities keep full precision.
pub fn try_integrate_offset<F>(f: F, decay_scale: f64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::Domain(format!(
            "decay scale must be positive, got {decay_scale}"
        )));
    }
    de_integrate(f, ExpSinh { scale: decay_scale }, tol)
}

/// `int_a^inf f(x) dx` by exp-sinh.
pub fn integrate_semi_infinite<F>(f: F, a: f64, decay_scale: f64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> ComplexValue,
{
    try_integrate_offset(|d| Ok(f(a + d)), decay_scale, tol)
}

pub fn try_integrate_over<F>(domain: Domain, f: F, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    match domain {
        Domain::Finite { a, b } => try_integrate_finite(f, a, b, tol),
        Domain::SemiInfinite { start, decay_scale } => try_integrate_offset(|d| f(start + d), decay_scale, tol),
    }
}

pub fn integrate_over<F>(domain: Domain, f: F, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> ComplexValue,
{
    try_integrate_over(domain, |x| Ok(f(x)), tol)
}

/// Iterated integral `int_outer int_inner f(x, y) dy dx`, inner layer first,
/// with the inner relative target ten times tighter than the outer one.
pub fn try_integrate_double<F>(f: F, outer: Domain, inner: Domain, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> Result<ComplexValue>,
{
    if let Domain::Finite { a, b } = outer {
        if a == b {
            return Ok(QuadratureResult::zero());
        }
    }
    let inner_tol = tol.with_rel(tol.rel_target * 0.1);
    let tag = |layer: &str, e: Error| Error::Domain(format!("{layer} layer: {e}"));
    let mut r = try_integrate_over(
        outer,
        |x| {
            let r = try_integrate_over(inner, |y| f(x, y), &inner_tol).map_err(|e| tag("inner", e))?;
            Ok(r.value)
        },
        tol,
    )
    .map_err(|e| match e {
        Error::Domain(msg) if msg.starts_with("inner") => Error::Domain(msg),
        other => tag("outer", other),
    })?;
    r.evaluations = r.evaluations.max(1);
    Ok(r)
}

pub fn integrate_double<F>(f: F, outer: Domain, inner: Domain, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> ComplexValue,
{
    try_integrate_double(|x, y| Ok(f(x, y)), outer, inner, tol)
}
