//! Numerical checks of the identities satisfied by the kernel and its
//! Bessel-family reductions.
//!
//! Every check produces [`IdentityReport`]s. Checks on a sweep (a ratio
//! audit) classify the whole sweep at once: `match` when every ratio is one,
//! `constant-ratio` when the ratio is a constant other than one, `mismatch`
//! when it moves.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_xorshift::XorShiftRng;

use crate::bessel::{bessel_k, hankel, hankel_via_k, HankelKind};
use crate::confluent::{ln_parabolic_d, ln_whittaker_w};
use crate::error::{Error, Result};
use crate::kernel::{
    kernel_closed, kernel_closed_continued, kernel_closed_factorial_substitute, kernel_closed_imaginary,
    kernel_integral, kernel_series, ClosedForm, Diagnostics, KernelParams, Variant, SERIES_MAX_TERMS,
};
use crate::legendre::gegenbauer_orthogonality_check;
use crate::numerics::{c, gamma, ln_gamma, pochhammer_int, real, ComplexValue, Tolerance, I};
use crate::quadrature::{try_integrate_double, try_integrate_offset, Domain};
use crate::report::{classify_ratios, params, ratio_spread, sort_reports, IdentityReport, ParamValue, Params, Status};

/// Identity ids.
pub mod ids {
    pub const GAMMA_REFLECTION: &str = "gamma-reflection";
    pub const GAMMA_RECURRENCE: &str = "gamma-recurrence";
    pub const POCHHAMMER_RECURRENCE: &str = "pochhammer-recurrence";
    pub const POCHHAMMER_EXACT: &str = "pochhammer-exact";
    pub const MACDONALD_WHITTAKER: &str = "macdonald-whittaker-series";
    pub const MACDONALD_WHITTAKER_SQUARED: &str = "macdonald-whittaker-squared-coefficients";
    pub const PARABOLIC_SUM: &str = "parabolic-cylinder-sum";
    pub const PARABOLIC_SUM_RESCALED: &str = "parabolic-cylinder-sum-rescaled";
    pub const CLOSED_FORM: &str = "kernel-closed-form";
    pub const SERIES_STANDARD: &str = "kernel-series-standard";
    pub const SERIES_EXTRA: &str = "kernel-series-extra-pochhammer";
    pub const KL_ORTHOGONALITY: &str = "kontorovich-lebedev-weak-orthogonality";
    pub const MACDONALD_SQUARE: &str = "macdonald-square-integral";
    pub const KERNEL_SQUARE: &str = "kernel-square-integral";
    pub const HANKEL_MACDONALD: &str = "hankel-macdonald-relation";
    pub const IMAGINARY_ARGUMENT: &str = "kernel-imaginary-argument";
    pub const GEGENBAUER: &str = "gegenbauer-orthogonality";
}

/// Strict tolerance of the Macdonald–Whittaker identity.
pub const MACDONALD_WHITTAKER_TOL: f64 = 1e-9;
/// A ratio within this of one counts as a match in ratio audits.
pub const RATIO_UNIT_TOL: f64 = 1e-7;
/// Largest relative spread of a constant ratio.
pub const RATIO_CONST_TOL: f64 = 1e-6;

fn kernel_tol() -> Tolerance {
    Tolerance::default().with_rel(1e-12)
}

/// Turns the per-point reports of a sweep into a sweep verdict.
fn classify_sweep(mut reports: Vec<IdentityReport>, unit_tol: f64, const_tol: f64) -> Vec<IdentityReport> {
    if reports
        .iter()
        .any(|r| matches!(r.status, Status::Error | Status::Diverged))
    {
        return reports;
    }
    let ratios: Vec<ComplexValue> = reports.iter().map(|r| r.ratio).collect();
    let status = classify_ratios(&ratios, unit_tol, const_tol);
    let (mean, spread) = ratio_spread(&ratios);
    for r in &mut reports {
        r.status = status;
        r.notes = format!("sweep ratio mean {mean:.12e}, relative spread {spread:.3e}");
    }
    reports
}

// ---------------------------------------------------------------------------
// Gamma and Pochhammer

/// Reflection, recurrence and Pochhammer checks on `points` pseudo-random
/// complex arguments drawn from a fixed seed.
pub fn gamma_checks(points: usize, seed: u64) -> Vec<IdentityReport> {
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let tol = 1e-12;
    for idx in 0..points {
        let z = loop {
            let z = c(rng.random_range(-4.5..4.5), rng.random_range(-3.0..3.0));
            // keep clear of the poles
            if (z - real(z.re.round())).norm() > 0.05 {
                break z;
            }
        };
        let n = rng.random_range(0..12i64);
        let p = params([("point", (idx as i64).into()), ("z", z.into())]);
        let reflection = (|| Ok::<_, Error>((gamma(z)? * gamma(real(1.0) - z)?, real(PI) / (z * PI).sin())))();
        out.push(match reflection {
            Ok((l, r)) => IdentityReport::compare(ids::GAMMA_REFLECTION, p.clone(), l, r, tol),
            Err(e) => IdentityReport::error(ids::GAMMA_REFLECTION, p.clone(), &e),
        });
        let recurrence = (|| Ok::<_, Error>((gamma(z + 1.0)?, z * gamma(z)?)))();
        out.push(match recurrence {
            Ok((l, r)) => IdentityReport::compare(ids::GAMMA_RECURRENCE, p.clone(), l, r, tol),
            Err(e) => IdentityReport::error(ids::GAMMA_RECURRENCE, p.clone(), &e),
        });
        let mut pp = p;
        pp.insert("n".into(), n.into());
        let poch = (|| Ok::<_, Error>((pochhammer_int(z, n + 1)?, pochhammer_int(z, n)? * (z + n as f64))))();
        out.push(match poch {
            Ok((l, r)) => IdentityReport::compare(ids::POCHHAMMER_RECURRENCE, pp, l, r, tol),
            Err(e) => IdentityReport::error(ids::POCHHAMMER_RECURRENCE, pp, &e),
        });
    }
    for (n, expect) in [(0i64, 1.0), (2, 0.0)] {
        let p = params([("n", n.into()), ("z", 0.0.into())]);
        out.push(match pochhammer_int(real(0.0), n) {
            Ok(v) => {
                let status = if v == real(expect) {
                    Status::Match
                } else {
                    Status::Mismatch
                };
                IdentityReport::new(ids::POCHHAMMER_EXACT, p, v, real(expect), status, "exact equality")
            }
            Err(e) => IdentityReport::error(ids::POCHHAMMER_EXACT, p, &e),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// Macdonald function as a Whittaker series

/// How the coefficients `(-σ)ᵢ(1-σ-n/2)ᵢ/i!` are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientPath {
    General,
    /// `[(-σ)ᵢ]²/i!`, valid for `n = 2` only.
    Squared,
}

pub fn macdonald_whittaker_coefficients(
    n: u32,
    sigma: ComplexValue,
    terms: usize,
    path: CoefficientPath,
) -> Result<Vec<ComplexValue>> {
    if path == CoefficientPath::Squared && n != 2 {
        return Err(Error::Domain(format!("squared coefficients need n = 2, got {n}")));
    }
    let a = -sigma;
    let b = real(1.0 - n as f64 / 2.0) - sigma;
    let mut out = Vec::with_capacity(terms);
    let mut cur = real(1.0);
    for i in 0..terms {
        if i > 0 {
            let k = (i - 1) as f64;
            let second = match path {
                CoefficientPath::General => b + k,
                CoefficientPath::Squared => a + k,
            };
            cur = cur * (a + k) * second / i as f64;
        }
        out.push(cur);
    }
    Ok(out)
}

/// `(2u)^{-(σ+1)/2} √π Σᵢ (-σ)ᵢ(1-σ-n/2)ᵢ/i! · W_{σ/2-i, (σ+n-1)/2}(2u)`.
pub fn macdonald_whittaker_sum(
    n: u32,
    sigma: ComplexValue,
    u: f64,
    tol: &Tolerance,
) -> Result<crate::hypergeom::SeriesResult> {
    let a = -sigma;
    let b = real(1.0 - n as f64 / 2.0) - sigma;
    let mu = (sigma + (n as f64 - 1.0)) * 0.5;
    let z = real(2.0 * u);
    let pref = z.powc(-(sigma + 1.0) * 0.5) * PI.sqrt();
    let mut ln_coeff = real(0.0);
    let mut sum = real(0.0);
    let mut quiet = 0;
    let mut last = 0.0;
    for i in 0..SERIES_MAX_TERMS {
        let fi = i as f64;
        if i > 0 {
            let fa = a + (fi - 1.0);
            let fb = b + (fi - 1.0);
            if fa == real(0.0) || fb == real(0.0) {
                return Ok(crate::hypergeom::SeriesResult::exact(pref * sum, i));
            }
            ln_coeff += fa.ln() + fb.ln() - fi.ln();
        }
        let term = (ln_coeff + ln_whittaker_w(sigma * 0.5 - fi, mu, z)?).exp();
        if !(term.re.is_finite() && term.im.is_finite()) {
            break;
        }
        sum += term;
        last = term.norm();
        if last <= tol.threshold(sum.norm()) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(crate::hypergeom::SeriesResult {
                    value: pref * sum,
                    terms_used: i + 1,
                    tail_estimate: 2.0 * last * pref.norm(),
                    converged: true,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(crate::hypergeom::SeriesResult {
        value: pref * sum,
        terms_used: SERIES_MAX_TERMS,
        tail_estimate: 2.0 * last * pref.norm(),
        converged: false,
    })
}

/// `K_{σ+(n-1)/2}(u)` against its Whittaker series (even `n`).
pub fn verify_macdonald_whittaker(n: u32, sigma: ComplexValue, u: f64) -> IdentityReport {
    let p = params([("n", (n as i64).into()), ("sigma", sigma.into()), ("u", u.into())]);
    let id = ids::MACDONALD_WHITTAKER;
    if n == 0 || n % 2 != 0 {
        return IdentityReport::error(id, p, &Error::Domain(format!("n must be even and positive, got {n}")));
    }
    let lhs = match bessel_k(sigma + (n as f64 - 1.0) / 2.0, u) {
        Ok(v) => v,
        Err(e) => return IdentityReport::error(id, p, &e),
    };
    let series = match macdonald_whittaker_sum(n, sigma, u, &Tolerance::tight()) {
        Ok(s) => s,
        Err(e) => return IdentityReport::error(id, p, &e),
    };
    let r = IdentityReport::compare(id, p, lhs, series.value, MACDONALD_WHITTAKER_TOL);
    if series.converged {
        let notes = format!("{}; {} series terms", r.notes, series.terms_used);
        r.with_notes(notes)
    } else {
        let notes = format!(
            "series not settled after {} terms, last term {:.3e}",
            series.terms_used, series.tail_estimate
        );
        r.with_status(Status::Diverged).with_notes(notes)
    }
}

/// General and squared coefficient paths must agree exactly at `n = 2`.
pub fn verify_squared_coefficients(sigma: ComplexValue, terms: usize) -> IdentityReport {
    let p = params([("sigma", sigma.into()), ("terms", terms.into())]);
    let id = ids::MACDONALD_WHITTAKER_SQUARED;
    let general = macdonald_whittaker_coefficients(2, sigma, terms, CoefficientPath::General);
    let squared = macdonald_whittaker_coefficients(2, sigma, terms, CoefficientPath::Squared);
    match (general, squared) {
        (Ok(g), Ok(s)) => {
            let same = g.iter().zip(&s).all(|(a, b)| a == b);
            let last = terms.saturating_sub(1);
            let status = if same { Status::Match } else { Status::Mismatch };
            IdentityReport::new(
                id,
                p,
                g[last],
                s[last],
                status,
                "coefficients compared for exact equality",
            )
        }
        (Err(e), _) | (_, Err(e)) => IdentityReport::error(id, p, &e),
    }
}

// ---------------------------------------------------------------------------
// Parabolic cylinder sum

/// Which form of the parabolic-cylinder sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParabolicForm {
    /// `Σ 2^{2j}Γ(j+1/2)D_{-2j-1}(2√u) = √π e^{-2u}/(2√u)`
    Doubled,
    /// `Σ 2^{j}Γ(j+1/2)D_{-2j-1}(2√u) = √π e^{-u}/(2√u)`
    Rescaled,
}

impl ParabolicForm {
    fn id(self) -> &'static str {
        match self {
            ParabolicForm::Doubled => ids::PARABOLIC_SUM,
            ParabolicForm::Rescaled => ids::PARABOLIC_SUM_RESCALED,
        }
    }

    fn base_power(self) -> f64 {
        match self {
            ParabolicForm::Doubled => 2.0,
            ParabolicForm::Rescaled => 1.0,
        }
    }

    pub fn rhs(self, u: f64) -> f64 {
        PI.sqrt() * (-self.base_power() * u).exp() / (2.0 * u.sqrt())
    }
}

/// Terms `j = 0..terms` of the sum; stops early at the first term that
/// overflows.
pub fn parabolic_terms(u: f64, terms: usize, form: ParabolicForm) -> Result<Vec<f64>> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("u must be positive, got {u}")));
    }
    let z = real(2.0 * u.sqrt());
    let mut out = Vec::with_capacity(terms);
    for j in 0..terms {
        let fj = j as f64;
        let ln = form.base_power() * fj * std::f64::consts::LN_2
            + ln_gamma(real(fj + 0.5))?
            + ln_parabolic_d(real(-2.0 * fj - 1.0), z)?;
        let t = ln.exp().re;
        if !t.is_finite() {
            break;
        }
        out.push(t);
    }
    Ok(out)
}

/// Whether `|t_j|` decreases for every `j > from`.
pub fn tail_decreasing(terms: &[f64], from: usize) -> bool {
    terms
        .iter()
        .skip(from)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1].abs() <= w[0].abs())
}

pub fn verify_parabolic_sum(u: f64, terms: usize, form: ParabolicForm) -> IdentityReport {
    let p = params([("terms", terms.into()), ("u", u.into())]);
    let id = form.id();
    let t = match parabolic_terms(u, terms, form) {
        Ok(t) => t,
        Err(e) => return IdentityReport::error(id, p, &e),
    };
    let mut partial = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    for x in &t {
        acc += x;
        partial.push(acc);
    }
    let trace: Vec<String> = [0usize, 5, 20, 100, 200, terms.saturating_sub(1)]
        .iter()
        .filter(|&&j| j < partial.len())
        .map(|&j| format!("S_{j}={:.12e}", partial[j]))
        .collect();
    let decreasing = tail_decreasing(&t, 5);
    let rhs = real(form.rhs(u));
    let r = IdentityReport::compare(id, p, real(acc), rhs, 1e-6);
    let mut notes = format!(
        "{}; partial sums {}; tail decreasing beyond j=5: {decreasing}",
        r.notes,
        trace.join(", ")
    );
    if t.len() < terms {
        notes.push_str(&format!("; term {} overflows", t.len()));
    }
    let status = if r.status == Status::Match {
        Status::Match
    } else if !decreasing || t.len() < terms {
        Status::Diverged
    } else {
        Status::Mismatch
    };
    r.with_status(status).with_notes(notes)
}

// ---------------------------------------------------------------------------
// Kernel closed forms and series

/// One kernel representation against the integral at a single point.
pub fn verify_closed_form(p: &KernelParams) -> IdentityReport {
    let prm = kernel_params_record(p);
    let id = ids::CLOSED_FORM;
    let form = match ClosedForm::detect(p) {
        Some(f) => f,
        None => return IdentityReport::error(id, prm, &Error::NoClosedForm("no closed-form pattern".into())),
    };
    let integral = match kernel_integral(p, &kernel_tol()) {
        Ok(v) => v.value,
        Err(e) => return IdentityReport::error(id, prm, &e),
    };
    if form == ClosedForm::OddSigmaHatZero && p.n >= 3 {
        // the printed form carries (0)_{n-1} = 0
        let printed = match kernel_closed(p) {
            Ok(v) => v.value,
            Err(e) => return IdentityReport::error(id, prm, &e),
        };
        let sub = match kernel_closed_factorial_substitute(p) {
            Ok(v) => v,
            Err(e) => return IdentityReport::error(id, prm, &e),
        };
        let notes = format!(
            "form {}: printed factor (0)_{} = 0 gives {printed}, equal to the integral; rhs is the (n-2)! substitute",
            form.as_str(),
            p.n - 1
        );
        return IdentityReport::new(id, prm, integral, sub, Status::ConstantRatio, notes);
    }
    match kernel_closed(p) {
        Ok(v) => {
            let r = IdentityReport::compare(id, prm, integral, v.value, 1e-7);
            let notes = format!("form {}; {}", form.as_str(), r.notes);
            r.with_notes(notes)
        }
        Err(e) => IdentityReport::error(id, prm, &e),
    }
}

/// Closed forms on a 3×3 grid per pattern.
pub fn closed_form_audit() -> Vec<IdentityReport> {
    let us = [0.5, 1.0, 2.0];
    let mut out = Vec::new();
    let grids: [(u32, bool, [ComplexValue; 3]); 6] = [
        // (n, spectral parameter is sigma, values)
        (2, true, [real(0.0), real(0.4), c(0.3, 0.7)]),
        (4, true, [real(0.0), real(0.4), c(0.3, 0.7)]),
        (2, false, [c(0.3, 0.5), real(0.35), c(-0.5, 1.0)]),
        (3, false, [c(0.0, 1.0), real(0.3), c(0.2, -0.4)]),
        (1, true, [real(0.7), c(0.0, 1.0), c(0.2, 0.3)]),
        (3, true, [real(0.7), c(0.0, 1.0), c(0.2, 0.3)]),
    ];
    for (n, on_sigma, values) in grids {
        for v in values {
            for u in us {
                let (s, sh) = if on_sigma { (v, real(0.0)) } else { (real(0.0), v) };
                match KernelParams::new(u, n, 0, s, sh) {
                    Ok(p) => out.push(verify_closed_form(&p)),
                    Err(e) => out.push(IdentityReport::error(ids::CLOSED_FORM, Params::new(), &e)),
                }
            }
        }
    }
    out
}

fn kernel_params_record(p: &KernelParams) -> Params {
    params([
        ("k0", (p.k0 as i64).into()),
        ("n", (p.n as i64).into()),
        ("sigma", p.sigma.into()),
        ("sigma_hat", p.sigma_hat.into()),
        ("u", p.u.into()),
    ])
}

fn series_id(variant: Variant) -> &'static str {
    match variant {
        Variant::Standard => ids::SERIES_STANDARD,
        Variant::ExtraPochhammer => ids::SERIES_EXTRA,
    }
}

/// Series value against the integral at one point.
pub fn verify_series_point(p: &KernelParams, variant: Variant) -> IdentityReport {
    let prm = kernel_params_record(p);
    let id = series_id(variant);
    let integral = match kernel_integral(p, &kernel_tol()) {
        Ok(v) => v.value,
        Err(e) => return IdentityReport::error(id, prm, &e),
    };
    let series = match kernel_series(p, variant, &Tolerance::default().with_rel(1e-13)) {
        Ok(v) => v,
        Err(e) => return IdentityReport::error(id, prm, &e),
    };
    let r = IdentityReport::compare(id, prm, series.value, integral, RATIO_UNIT_TOL);
    match series.diagnostics {
        Diagnostics::Series(s) if !s.converged => r
            .with_status(Status::Diverged)
            .with_notes(format!("series not settled after {} terms", s.terms_used)),
        Diagnostics::Series(s) => {
            let notes = format!("{}; {} series terms", r.notes, s.terms_used);
            r.with_notes(notes)
        }
        _ => r,
    }
}

/// A kernel parameter family `(n, k₀, σ, σ̂)` swept over `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFamily {
    pub n: u32,
    pub k0: u32,
    pub sigma: ComplexValue,
    pub sigma_hat: ComplexValue,
}

impl KernelFamily {
    pub const fn new(n: u32, k0: u32, sigma: f64, sigma_hat: f64) -> Self {
        Self {
            n,
            k0,
            sigma: ComplexValue::new(sigma, 0.0),
            sigma_hat: ComplexValue::new(sigma_hat, 0.0),
        }
    }

    pub fn at(&self, u: f64) -> Result<KernelParams> {
        KernelParams::new(u, self.n, self.k0, self.sigma, self.sigma_hat)
    }
}

/// Families of the series audit; none has an identically vanishing kernel.
pub const SERIES_AUDIT_FAMILIES: [KernelFamily; 16] = [
    KernelFamily::new(1, 0, -0.5, 0.0),
    KernelFamily::new(1, 0, 0.3, 0.0),
    KernelFamily::new(1, 0, 0.3, 0.2),
    KernelFamily::new(1, 1, 0.3, 0.2),
    KernelFamily::new(2, 0, 2.0, 0.0),
    KernelFamily::new(2, 0, 0.3, 0.0),
    KernelFamily::new(2, 0, 1.0, 0.25),
    KernelFamily::new(2, 0, 0.3, 0.25),
    KernelFamily::new(2, 1, 0.3, 0.0),
    KernelFamily::new(2, 1, 0.3, 0.25),
    KernelFamily::new(3, 0, 1.0, 0.2),
    KernelFamily::new(3, 1, 0.3, 0.2),
    KernelFamily::new(4, 0, 0.3, 0.0),
    KernelFamily::new(4, 0, 1.0, 0.25),
    KernelFamily::new(4, 1, 1.0, 0.0),
    KernelFamily::new(4, 1, 2.0, 0.3),
];

pub const AUDIT_US: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Ratio of series to integral across `us`, classified as one sweep.
pub fn series_ratio_audit(family: &KernelFamily, variant: Variant, us: &[f64]) -> Vec<IdentityReport> {
    let reports = us
        .iter()
        .map(|&u| match family.at(u) {
            Ok(p) => verify_series_point(&p, variant),
            Err(e) => IdentityReport::error(series_id(variant), params([("u", u.into())]), &e),
        })
        .collect();
    classify_sweep(reports, RATIO_UNIT_TOL, RATIO_CONST_TOL)
}

/// Both variants for every audit family, each report noting the variant
/// selected for its family (the first whose ratio is constant, if any).
pub fn series_audit() -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for fam in &SERIES_AUDIT_FAMILIES {
        let sweeps: Vec<(Variant, Vec<IdentityReport>)> = Variant::ALL
            .iter()
            .map(|&v| (v, series_ratio_audit(fam, v, &AUDIT_US)))
            .collect();
        let selected = sweeps
            .iter()
            .find(|(_, r)| r.iter().all(|x| x.status.is_ok()))
            .map(|(v, r)| format!("{} (ratio {:.10e})", v.as_str(), r[0].ratio))
            .unwrap_or_else(|| "none".to_string());
        for (_, reports) in sweeps {
            for mut r in reports {
                r.notes = format!("{}; selected variant: {selected}", r.notes);
                out.push(r);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pointwise kernel products

/// The kernel-product identities, each of the form
/// `ker(u; ...)·ker(u; ...) = c(u, ρ, ρ̂)·K_{iρ}(u)K_{iρ̂}(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductIdentity {
    /// even `n`: `ker(u;n,0,(1-n)/2+iρ,0)·ker(u;n,0,(1-n)/2+iρ̂,0)`
    EvenSigma,
    /// `ker(u;2,0,0,-1/2+iρ)·ker(u;2,0,0,-1/2+iρ̂)`
    EvenSigmaHat,
    /// `ker(u;2,0,-1/2+iρ,0)·ker(u;2,0,0,-1/2+iρ̂)`
    EvenMixed,
    /// `ker(u;1,0,0,iρ)·ker(u;3,0,0,-1+iρ̂)`
    OddSigmaHat,
    /// `ker(u;1,0,iρ,0)·ker(u;3,0,0,-1+iρ̂)`
    OddMixed,
}

impl ProductIdentity {
    pub const ALL: [ProductIdentity; 5] = [
        ProductIdentity::EvenSigma,
        ProductIdentity::EvenSigmaHat,
        ProductIdentity::EvenMixed,
        ProductIdentity::OddSigmaHat,
        ProductIdentity::OddMixed,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ProductIdentity::EvenSigma => "kernel-product-even-sigma",
            ProductIdentity::EvenSigmaHat => "kernel-product-even-sigma-hat",
            ProductIdentity::EvenMixed => "kernel-product-even-mixed",
            ProductIdentity::OddSigmaHat => "kernel-product-odd-sigma-hat",
            ProductIdentity::OddMixed => "kernel-product-odd-mixed",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.id() == id)
    }

    /// The two kernels of the product.
    pub fn factors(self, n: u32, u: f64, rho: f64, rho_hat: f64) -> Result<[KernelParams; 2]> {
        let zero = real(0.0);
        let ir = c(0.0, rho);
        let irh = c(0.0, rho_hat);
        Ok(match self {
            ProductIdentity::EvenSigma => {
                if n == 0 || n % 2 != 0 {
                    return Err(Error::Domain(format!("n must be even and positive, got {n}")));
                }
                let base = (1.0 - n as f64) / 2.0;
                [
                    KernelParams::new(u, n, 0, ir + base, zero)?,
                    KernelParams::new(u, n, 0, irh + base, zero)?,
                ]
            }
            ProductIdentity::EvenSigmaHat => [
                KernelParams::new(u, 2, 0, zero, ir - 0.5)?,
                KernelParams::new(u, 2, 0, zero, irh - 0.5)?,
            ],
            ProductIdentity::EvenMixed => [
                KernelParams::new(u, 2, 0, ir - 0.5, zero)?,
                KernelParams::new(u, 2, 0, zero, irh - 0.5)?,
            ],
            ProductIdentity::OddSigmaHat => [
                KernelParams::new(u, 1, 0, zero, ir)?,
                KernelParams::new(u, 3, 0, zero, irh - 1.0)?,
            ],
            ProductIdentity::OddMixed => [
                KernelParams::new(u, 1, 0, ir, zero)?,
                KernelParams::new(u, 3, 0, zero, irh - 1.0)?,
            ],
        })
    }

    /// Coefficient `c(u, ρ, ρ̂)` of `K_{iρ}(u)K_{iρ̂}(u)`.
    pub fn coefficient(self, n: u32, u: f64, rho: f64, rho_hat: f64) -> Result<ComplexValue> {
        let coth = |x: f64| 1.0 / (PI * x).tanh();
        Ok(match self {
            ProductIdentity::EvenSigma => {
                let f = gamma(real(n as f64 - 1.0))?.re;
                let g = gamma(real(n as f64 / 2.0))?.re;
                real(-f * f / ((2.0 * u).powi(n as i32 - 1) * PI * g))
            }
            ProductIdentity::EvenSigmaHat => {
                -(c(-0.5, rho) * c(-0.5, rho_hat)) / (2.0 * PI * coth(rho) * coth(rho_hat) * u)
            }
            ProductIdentity::EvenMixed => I * coth(rho) / (2.0 * PI * PI),
            ProductIdentity::OddSigmaHat => -c(rho_hat * rho_hat, rho_hat) / (PI * PI * u),
            ProductIdentity::OddMixed => I * rho_hat * c(-1.0, rho_hat) / (PI * u),
        })
    }
}

/// Both sides of one product identity at one point.
pub fn verify_pointwise_product(which: ProductIdentity, n: u32, u: f64, rho: f64, rho_hat: f64) -> IdentityReport {
    let mut p = params([("rho", rho.into()), ("rho_hat", rho_hat.into()), ("u", u.into())]);
    if which == ProductIdentity::EvenSigma {
        p.insert("n".into(), (n as i64).into());
    }
    let id = which.id();
    let sides = (|| -> Result<(ComplexValue, ComplexValue)> {
        let [a, b] = which.factors(n, u, rho, rho_hat)?;
        let tol = kernel_tol();
        let lhs = kernel_integral(&a, &tol)?.value * kernel_integral(&b, &tol)?.value;
        let rhs = which.coefficient(n, u, rho, rho_hat)? * bessel_k(c(0.0, rho), u)? * bessel_k(c(0.0, rho_hat), u)?;
        Ok((lhs, rhs))
    })();
    match sides {
        Ok((lhs, rhs)) => IdentityReport::compare(id, p, lhs, rhs, RATIO_UNIT_TOL),
        Err(e) => IdentityReport::error(id, p, &e),
    }
}

/// Product identity swept over `us` at fixed `(ρ, ρ̂)`.
pub fn product_ratio_audit(which: ProductIdentity, n: u32, rho: f64, rho_hat: f64, us: &[f64]) -> Vec<IdentityReport> {
    let reports = us
        .iter()
        .map(|&u| verify_pointwise_product(which, n, u, rho, rho_hat))
        .collect();
    classify_sweep(reports, RATIO_UNIT_TOL, RATIO_CONST_TOL)
}

pub const PRODUCT_US: [f64; 3] = [0.5, 1.0, 2.0];

pub fn product_audit() -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for which in ProductIdentity::ALL {
        let ns: &[u32] = if which == ProductIdentity::EvenSigma {
            &[2, 4]
        } else {
            &[2]
        };
        for &n in ns {
            for (rho, rho_hat) in [(1.0, 1.0), (1.0, 2.0)] {
                out.extend(product_ratio_audit(which, n, rho, rho_hat, &PRODUCT_US));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Kontorovich–Lebedev weak orthogonality

/// Lower end of the smearing range. Orders closer to zero take the slow
/// integral route for `K`.
const KL_MIN_ORDER: f64 = 0.05;

/// Smeared pairing `∫₀^∞ u⁻¹ K_{iρ₀}(u) ∫ g(ρ̂) K_{iρ̂}(u) dρ̂ du` with the
/// unit-peak bump `g(ρ̂) = exp(-(ρ̂-ρ₀)²/(2w²))` on
/// `ρ̂ ∈ [max(0.05, ρ₀-8w), ρ₀+8w]`.
///
/// The outer integral runs over `x = ln u ∈ [-9/w, ln 60]`: below `-9/w` the
/// smeared kernel is under `e^{-40}` of its size, above `ln 60` the Macdonald
/// factors are. With `flip` set both orders change sign.
pub fn kl_pairing(rho0: f64, width: f64, flip: bool, tol: &Tolerance) -> Result<ComplexValue> {
    let s = if flip { -1.0 } else { 1.0 };
    // the smeared kernel is O(width); where it cancels to far below that,
    // an absolute floor stands in for the relative target
    let tol = tol.with_abs_floor(tol.rel_target * 1e-3 * width);
    let outer = Domain::Finite {
        a: -9.0 / width,
        b: 60f64.ln(),
    };
    let inner = Domain::Finite {
        a: (rho0 - 8.0 * width).max(KL_MIN_ORDER),
        b: rho0 + 8.0 * width,
    };
    let r = try_integrate_double(
        |x, rh| {
            let u = x.exp();
            let g = (-(rh - rho0).powi(2) / (2.0 * width * width)).exp();
            Ok(bessel_k(c(0.0, s * rho0), u)? * bessel_k(c(0.0, s * rh), u)? * g)
        },
        outer,
        inner,
        &tol,
    )?
    .require_converged()?;
    Ok(r.value)
}

/// `π² / (2ρ₀ sinh πρ₀)`
pub fn kl_limit(rho0: f64) -> f64 {
    PI * PI / (2.0 * rho0 * (PI * rho0).sinh())
}

pub const KL_WIDTHS: [f64; 3] = [0.2, 0.1, 0.05];

/// Weak orthogonality at `rho0`: pairings for each width, Richardson
/// extrapolation over the last two widths (second-order smoothing error)
/// and the order-flip symmetry.
pub fn kl_weak_orthogonality(rho0: f64, widths: &[f64], tol: &Tolerance) -> IdentityReport {
    let p = params([("rho0", rho0.into()), ("widths", widths.len().into())]);
    let id = ids::KL_ORTHOGONALITY;
    if widths.is_empty() || widths.iter().any(|&w| !(w > 0.0) || rho0 < 3.0 * w) {
        return IdentityReport::error(
            id,
            p,
            &Error::Domain("every width must be positive and at most rho0/3".into()),
        );
    }
    let values: Result<Vec<ComplexValue>> = widths.iter().map(|&w| kl_pairing(rho0, w, false, tol)).collect();
    let values = match values {
        Ok(v) => v,
        Err(e) => return IdentityReport::error(id, p, &e),
    };
    let last = widths.len() - 1;
    let extrapolated = if last == 0 {
        values[0]
    } else {
        let q = (widths[last - 1] / widths[last]).powi(2);
        (values[last] * q - values[last - 1]) / (q - 1.0)
    };
    let flipped = match kl_pairing(rho0, widths[last], true, tol) {
        Ok(v) => v,
        Err(e) => return IdentityReport::error(id, p, &e),
    };
    let symmetry = (flipped - values[last]).norm() / values[last].norm();
    let rhs = real(kl_limit(rho0));
    let r = IdentityReport::compare(id, p, extrapolated, rhs, 1e-2);
    let per_width: Vec<String> = widths
        .iter()
        .zip(&values)
        .map(|(w, v)| format!("w={w}: {:.12e}", v.re))
        .collect();
    let notes = format!(
        "{}; {}; order-flip relative change {symmetry:.3e}",
        r.notes,
        per_width.join(", ")
    );
    r.with_notes(notes)
}

// ---------------------------------------------------------------------------
// Square integrals

/// `∫₀^∞ [K_{iρ}(2πu)]² du = π / (8 cosh πρ)`.
pub fn verify_macdonald_square(rho: f64) -> IdentityReport {
    let p = params([("rho", rho.into())]);
    let id = ids::MACDONALD_SQUARE;
    let lhs = try_integrate_offset(
        |u| {
            if u == 0.0 {
                return Ok(real(0.0));
            }
            let k = bessel_k(c(0.0, rho), 2.0 * PI * u)?;
            Ok(k * k)
        },
        2.0 * PI,
        &Tolerance::default().with_rel(1e-11),
    )
    .and_then(|r| r.require_converged());
    match lhs {
        Ok(r) => IdentityReport::compare(id, p, r.value, real(PI / (8.0 * (PI * rho).cosh())), 1e-6),
        Err(e) => IdentityReport::error(id, p, &e),
    }
}

/// `∫₀^∞ ker²(u; 1, 0, iρ, 0) du` against `-sech(πρ)/(16π²)`, with the
/// `σ̂ = iρ` twin noted.
pub fn verify_kernel_square(rho: f64) -> IdentityReport {
    let p = params([("rho", rho.into())]);
    let id = ids::KERNEL_SQUARE;
    let square_integral = |s: ComplexValue, sh: ComplexValue| -> Result<ComplexValue> {
        let r = try_integrate_offset(
            |u| {
                if u == 0.0 {
                    return Ok(real(0.0));
                }
                let k = kernel_closed(&KernelParams::new(u, 1, 0, s, sh)?)?.value;
                Ok(k * k)
            },
            1.0,
            &Tolerance::default().with_rel(1e-11),
        )?
        .require_converged()?;
        Ok(r.value)
    };
    let sides = (|| {
        Ok::<_, Error>((
            square_integral(c(0.0, rho), real(0.0))?,
            square_integral(real(0.0), c(0.0, rho))?,
        ))
    })();
    match sides {
        Ok((lhs, twin)) => {
            let rhs = real(-1.0 / (16.0 * PI * PI * (PI * rho).cosh()));
            let r = IdentityReport::new(id, p, lhs, rhs, Status::Match, "");
            let twin_diff = (twin - lhs).norm() / lhs.norm();
            let notes = format!("sigma_hat = i rho twin differs by {twin_diff:.3e} relative");
            r.with_notes(notes)
        }
        Err(e) => IdentityReport::error(id, p, &e),
    }
}

pub const SQUARE_RHOS: [f64; 3] = [0.5, 1.0, 2.0];

/// Both square integrals; the kernel one is a ratio audit across `rhos`
/// (constant to `1e-4`).
pub fn concluding_integrals(rhos: &[f64]) -> Vec<IdentityReport> {
    let mut out: Vec<IdentityReport> = rhos.iter().map(|&r| verify_macdonald_square(r)).collect();
    let kernel: Vec<IdentityReport> = rhos.iter().map(|&r| verify_kernel_square(r)).collect();
    let twin_notes: Vec<String> = kernel.iter().map(|r| r.notes.clone()).collect();
    let mut kernel = classify_sweep(kernel, RATIO_UNIT_TOL, 1e-4);
    for (r, t) in kernel.iter_mut().zip(twin_notes) {
        r.notes = format!("{}; {t}", r.notes);
    }
    out.extend(kernel);
    out
}

// ---------------------------------------------------------------------------
// Hankel functions

/// `H^{(1+η)}_ν(u)` from `J`/`Y` against the rotated Macdonald function.
pub fn verify_hankel_relation(kind: HankelKind, nu: ComplexValue, u: f64) -> IdentityReport {
    let eta = match kind {
        HankelKind::First => 0i64,
        HankelKind::Second => 1,
    };
    let p = params([("eta", eta.into()), ("nu", nu.into()), ("u", u.into())]);
    let id = ids::HANKEL_MACDONALD;
    let sides = (|| Ok::<_, Error>((hankel(kind, nu, real(u))?, hankel_via_k(kind, nu, u)?)))();
    match sides {
        Ok((l, r)) => IdentityReport::compare(id, p, l, r, 1e-8),
        Err(e) => IdentityReport::error(id, p, &e),
    }
}

pub fn hankel_suite() -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for kind in [HankelKind::First, HankelKind::Second] {
        for nu in [real(0.5), real(1.5), real(-0.5), real(0.0), c(0.0, 1.0), c(0.3, 0.2)] {
            for u in [0.5, 1.0, 2.0, 5.0] {
                out.push(verify_hankel_relation(kind, nu, u));
            }
        }
    }
    out
}

/// Even-`n` closed form continued to `u = εiω` against the Hankel form,
/// swept over `omegas`.
pub fn imaginary_argument_audit(n: u32, epsilon: f64, omegas: &[f64]) -> Vec<IdentityReport> {
    let reports = omegas
        .iter()
        .map(|&w| {
            let p = params([
                ("epsilon", (epsilon as i64).into()),
                ("n", (n as i64).into()),
                ("omega", w.into()),
            ]);
            let sides =
                (|| Ok::<_, Error>((kernel_closed_continued(n, w, epsilon)?, kernel_closed_imaginary(n, w)?)))();
            match sides {
                Ok((l, r)) => IdentityReport::compare(ids::IMAGINARY_ARGUMENT, p, l, r, RATIO_UNIT_TOL),
                Err(e) => IdentityReport::error(ids::IMAGINARY_ARGUMENT, p, &e),
            }
        })
        .collect();
    classify_sweep(reports, RATIO_UNIT_TOL, RATIO_CONST_TOL)
}

// ---------------------------------------------------------------------------
// Suites

pub const SUITES: [&str; 11] = [
    "gamma",
    "macdonald-whittaker",
    "parabolic-cylinder",
    "kernel-closed-forms",
    "kernel-series",
    "kernel-products",
    "kl-orthogonality",
    "square-integrals",
    "hankel",
    "imaginary-argument",
    "gegenbauer",
];

pub const GAMMA_POINTS: usize = 100;
pub const GAMMA_SEED: u64 = 0x5eed_0001;
pub const PARABOLIC_TERMS: usize = 500;
pub const PARABOLIC_US: [f64; 3] = [0.25, 1.0, 4.0];

fn suite_reports(name: &str) -> Result<Vec<IdentityReport>> {
    Ok(match name {
        "gamma" => gamma_checks(GAMMA_POINTS, GAMMA_SEED),
        "macdonald-whittaker" => {
            let mut out = Vec::new();
            for n in [2, 4] {
                for s in [0.0, 1.0, 2.0, 3.0, 0.5] {
                    for u in [0.5, 1.0, 2.0, 5.0] {
                        out.push(verify_macdonald_whittaker(n, real(s), u));
                    }
                }
            }
            for s in [real(0.0), real(3.0), c(0.3, 0.2), real(-1.7)] {
                out.push(verify_squared_coefficients(s, 12));
            }
            out
        }
        "parabolic-cylinder" => PARABOLIC_US
            .iter()
            .flat_map(|&u| {
                [ParabolicForm::Doubled, ParabolicForm::Rescaled].map(|f| verify_parabolic_sum(u, PARABOLIC_TERMS, f))
            })
            .collect(),
        "kernel-closed-forms" => closed_form_audit(),
        "kernel-series" => series_audit(),
        "kernel-products" => product_audit(),
        "kl-orthogonality" => vec![kl_weak_orthogonality(
            1.0,
            &KL_WIDTHS,
            &Tolerance::default().with_rel(1e-8),
        )],
        "square-integrals" => concluding_integrals(&SQUARE_RHOS),
        "hankel" => hankel_suite(),
        "imaginary-argument" => {
            let mut out = Vec::new();
            for n in [2, 4] {
                for eps in [1.0, -1.0] {
                    out.extend(imaginary_argument_audit(n, eps, &[1.0, 2.0, 3.0]));
                }
            }
            out
        }
        "gegenbauer" => {
            let mut out = Vec::new();
            for rho in [0.5, 1.0, 1.5, 2.5] {
                for k in 0..=6 {
                    for m in 0..=6 {
                        out.push(gegenbauer_orthogonality_check(k, m, rho));
                    }
                }
            }
            out
        }
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(suite_reports(s)?);
            }
            out
        }
        other => return Err(Error::Domain(format!("unknown suite '{other}'"))),
    })
}

/// Runs a suite (or `all`) and returns its reports in canonical order.
pub fn run_suite(name: &str) -> Result<Vec<IdentityReport>> {
    let mut reports = suite_reports(name)?;
    sort_reports(&mut reports);
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Single-point dispatch

fn get<'a>(p: &'a Params, key: &str) -> Result<&'a ParamValue> {
    p.get(key)
        .ok_or_else(|| Error::Domain(format!("missing parameter '{key}'")))
}

fn get_f64(p: &Params, key: &str) -> Result<f64> {
    let v = get(p, key)?.as_complex();
    if v.im != 0.0 {
        return Err(Error::Domain(format!("parameter '{key}' must be real")));
    }
    Ok(v.re)
}

fn get_complex(p: &Params, key: &str) -> Result<ComplexValue> {
    Ok(get(p, key)?.as_complex())
}

fn get_int(p: &Params, key: &str) -> Result<i64> {
    let v = get_f64(p, key)?;
    if v.fract() != 0.0 {
        return Err(Error::Domain(format!("parameter '{key}' must be an integer")));
    }
    Ok(v as i64)
}

fn get_u32(p: &Params, key: &str) -> Result<u32> {
    u32::try_from(get_int(p, key)?).map_err(|_| Error::Domain(format!("parameter '{key}' out of range")))
}

fn get_u32_or(p: &Params, key: &str, default: u32) -> Result<u32> {
    if p.contains_key(key) {
        get_u32(p, key)
    } else {
        Ok(default)
    }
}

fn kernel_from(p: &Params) -> Result<KernelParams> {
    KernelParams::new(
        get_f64(p, "u")?,
        get_u32(p, "n")?,
        get_u32_or(p, "k0", 0)?,
        get_complex(p, "sigma")?,
        get_complex(p, "sigma_hat")?,
    )
}

/// Identity ids accepted by [`evaluate`] together with their parameters.
pub const POINT_IDENTITIES: [(&str, &str); 17] = [
    (ids::MACDONALD_WHITTAKER, "n sigma u"),
    (ids::PARABOLIC_SUM, "u terms"),
    (ids::PARABOLIC_SUM_RESCALED, "u terms"),
    (ids::CLOSED_FORM, "u n sigma sigma_hat [k0=0]"),
    (ids::SERIES_STANDARD, "u n k0 sigma sigma_hat"),
    (ids::SERIES_EXTRA, "u n k0 sigma sigma_hat"),
    ("kernel-product-even-sigma", "u rho rho_hat [n=2]"),
    ("kernel-product-even-sigma-hat", "u rho rho_hat"),
    ("kernel-product-even-mixed", "u rho rho_hat"),
    ("kernel-product-odd-sigma-hat", "u rho rho_hat"),
    ("kernel-product-odd-mixed", "u rho rho_hat"),
    (ids::KL_ORTHOGONALITY, "rho0 width"),
    (ids::MACDONALD_SQUARE, "rho"),
    (ids::KERNEL_SQUARE, "rho"),
    (ids::HANKEL_MACDONALD, "eta nu u"),
    (ids::IMAGINARY_ARGUMENT, "n epsilon omega"),
    (ids::GEGENBAUER, "k m rho"),
];

/// Evaluates one identity at one parameter point. Malformed parameters are
/// an `Err`; numerical failures are reports with status `error`.
pub fn evaluate(id: &str, p: &Params) -> Result<IdentityReport> {
    if let Some(which) = ProductIdentity::from_id(id) {
        return Ok(verify_pointwise_product(
            which,
            get_u32_or(p, "n", 2)?,
            get_f64(p, "u")?,
            get_f64(p, "rho")?,
            get_f64(p, "rho_hat")?,
        ));
    }
    Ok(match id {
        ids::MACDONALD_WHITTAKER => {
            verify_macdonald_whittaker(get_u32(p, "n")?, get_complex(p, "sigma")?, get_f64(p, "u")?)
        }
        ids::PARABOLIC_SUM => {
            verify_parabolic_sum(get_f64(p, "u")?, get_u32(p, "terms")? as usize, ParabolicForm::Doubled)
        }
        ids::PARABOLIC_SUM_RESCALED => {
            verify_parabolic_sum(get_f64(p, "u")?, get_u32(p, "terms")? as usize, ParabolicForm::Rescaled)
        }
        ids::CLOSED_FORM => verify_closed_form(&kernel_from(p)?),
        ids::SERIES_STANDARD => verify_series_point(&kernel_from(p)?, Variant::Standard),
        ids::SERIES_EXTRA => verify_series_point(&kernel_from(p)?, Variant::ExtraPochhammer),
        ids::KL_ORTHOGONALITY => kl_weak_orthogonality(
            get_f64(p, "rho0")?,
            &[get_f64(p, "width")?],
            &Tolerance::default().with_rel(1e-8),
        ),
        ids::MACDONALD_SQUARE => verify_macdonald_square(get_f64(p, "rho")?),
        ids::KERNEL_SQUARE => verify_kernel_square(get_f64(p, "rho")?),
        ids::HANKEL_MACDONALD => {
            let kind = HankelKind::from_index(get_int(p, "eta")? as u8 + 1)?;
            verify_hankel_relation(kind, get_complex(p, "nu")?, get_f64(p, "u")?)
        }
        ids::IMAGINARY_ARGUMENT => {
            let eps = get_f64(p, "epsilon")?;
            imaginary_argument_audit(get_u32(p, "n")?, eps, &[get_f64(p, "omega")?]).remove(0)
        }
        ids::GEGENBAUER => gegenbauer_orthogonality_check(get_u32(p, "k")?, get_u32(p, "m")?, get_f64(p, "rho")?),
        other => return Err(Error::Domain(format!("unknown identity '{other}'"))),
    })
}
