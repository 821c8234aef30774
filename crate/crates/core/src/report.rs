//! Identity report records shared by the verification suites and the CLI.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numerics::{real, ComplexValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Match,
    ConstantRatio,
    /// The ratio of the two sides changes across the sweep.
    Mismatch,
    Diverged,
    Error,
}

impl Status {
    /// Whether the CLI treats the status as a pass.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Match | Status::ConstantRatio)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::ConstantRatio => "constant-ratio",
            Status::Mismatch => "mismatch",
            Status::Diverged => "diverged",
            Status::Error => "error",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex([f64; 2]),
}

impl ParamValue {
    fn sort_key(&self) -> (f64, f64) {
        match *self {
            ParamValue::Int(v) => (v as f64, 0.0),
            ParamValue::Real(v) => (v, 0.0),
            ParamValue::Complex([re, im]) => (re, im),
        }
    }

    pub fn as_complex(&self) -> ComplexValue {
        let (re, im) = self.sort_key();
        ComplexValue::new(re, im)
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Complex([re, im]) if im < 0.0 => write!(f, "{re}{im}i"),
            ParamValue::Complex([re, im]) => write!(f, "{re}+{im}i"),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}

impl From<ComplexValue> for ParamValue {
    fn from(v: ComplexValue) -> Self {
        if v.im == 0.0 {
            ParamValue::Real(v.re)
        } else {
            ParamValue::Complex([v.re, v.im])
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

pub fn params<const N: usize>(items: [(&str, ParamValue); N]) -> Params {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// One identity check: two sides, their discrepancy and a verdict.
///
/// `rel_diff` is `|lhs - rhs| / |rhs|`, or the absolute difference when the
/// right side is zero. `ratio` is `lhs / rhs`, or zero when undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub params: Params,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub ratio: ComplexValue,
    pub status: Status,
    pub notes: String,
}

fn finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl IdentityReport {
    pub fn new(
        identity_id: &str,
        params: Params,
        lhs: ComplexValue,
        rhs: ComplexValue,
        status: Status,
        notes: impl Into<String>,
    ) -> Self {
        if !finite(lhs) || !finite(rhs) {
            let notes = format!("non-finite side (lhs {lhs}, rhs {rhs}); {}", notes.into());
            return Self::error_with_notes(identity_id, params, notes);
        }
        let abs_diff = (lhs - rhs).norm();
        let rhs_mag = rhs.norm();
        let rel_diff = if rhs_mag > 0.0 { abs_diff / rhs_mag } else { abs_diff };
        let ratio = if rhs_mag > 0.0 && finite(lhs / rhs) {
            lhs / rhs
        } else {
            real(0.0)
        };
        Self {
            identity_id: identity_id.to_string(),
            params,
            lhs,
            rhs,
            abs_diff,
            rel_diff,
            ratio,
            status,
            notes: notes.into(),
        }
    }

    /// `match` when `rel_diff <= tol`, `mismatch` otherwise.
    pub fn compare(identity_id: &str, params: Params, lhs: ComplexValue, rhs: ComplexValue, tol: f64) -> Self {
        let mut r = Self::new(identity_id, params, lhs, rhs, Status::Match, "");
        if r.status == Status::Match && !(r.rel_diff <= tol) {
            r.status = Status::Mismatch;
        }
        r.notes = format!("tolerance {tol:e}");
        r
    }

    /// A failed evaluation; numeric fields are zero and the error text goes
    /// to `notes`.
    pub fn error(identity_id: &str, params: Params, err: &Error) -> Self {
        Self::error_with_notes(identity_id, params, err.to_string())
    }

    fn error_with_notes(identity_id: &str, params: Params, notes: String) -> Self {
        Self {
            identity_id: identity_id.to_string(),
            params,
            lhs: real(0.0),
            rhs: real(0.0),
            abs_diff: 0.0,
            rel_diff: 0.0,
            ratio: real(0.0),
            status: Status::Error,
            notes,
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        if self.status != Status::Error {
            self.status = status;
        }
        self
    }
}

/// Relative spread of a set of ratios: `max_i |r_i - mean| / |mean|`.
pub fn ratio_spread(ratios: &[ComplexValue]) -> (ComplexValue, f64) {
    if ratios.is_empty() {
        return (real(0.0), 0.0);
    }
    let mean = ratios.iter().sum::<ComplexValue>() / ratios.len() as f64;
    let dev = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    let mag = mean.norm();
    let spread = if mag > 0.0 { dev / mag } else { dev };
    (mean, spread)
}

/// Verdict for a ratio sweep: `match` if every ratio is within `unit_tol` of
/// one, `constant-ratio` if the spread is within `const_tol`, else `mismatch`.
pub fn classify_ratios(ratios: &[ComplexValue], unit_tol: f64, const_tol: f64) -> Status {
    if ratios.iter().all(|r| (r - 1.0).norm() <= unit_tol) {
        return Status::Match;
    }
    let (mean, spread) = ratio_spread(ratios);
    if mean.norm() > 0.0 && spread <= const_tol {
        Status::ConstantRatio
    } else {
        Status::Mismatch
    }
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.total_cmp(&b)
}

/// Order by identity id, then by parameters (keys alphabetically, values
/// numerically).
pub fn report_order(a: &IdentityReport, b: &IdentityReport) -> Ordering {
    a.identity_id.cmp(&b.identity_id).then_with(|| {
        let mut ai = a.params.iter();
        let mut bi = b.params.iter();
        loop {
            match (ai.next(), bi.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, va)), Some((kb, vb))) => {
                    let (ar, aim) = va.sort_key();
                    let (br, bim) = vb.sort_key();
                    let ord = ka.cmp(kb).then_with(|| cmp_f64(ar, br)).then_with(|| cmp_f64(aim, bim));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    })
}

pub fn sort_reports(reports: &mut [IdentityReport]) {
    reports.sort_by(report_order);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn sample() -> IdentityReport {
        IdentityReport::compare(
            "macdonald-whittaker-series",
            params([("n", 2i64.into()), ("sigma", c(0.5, -1.0).into()), ("u", 1.5.into())]),
            c(1.0, 2.0),
            c(1.0, 2.0 + 1e-12),
            1e-9,
        )
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(sample()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expect = vec![
            "identity_id",
            "params",
            "lhs",
            "rhs",
            "abs_diff",
            "rel_diff",
            "ratio",
            "status",
            "notes",
        ];
        expect.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, expect);
        assert_eq!(v["lhs"], serde_json::json!([1.0, 2.0]));
        assert_eq!(v["status"], "match");
        assert_eq!(v["params"]["n"], 2);
        assert_eq!(v["params"]["sigma"], serde_json::json!([0.5, -1.0]));
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let back: IdentityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let e = IdentityReport::error("x", Params::new(), &Error::Domain("bad".into()));
        let back: IdentityReport = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn status_rules() {
        let r = IdentityReport::compare("a", Params::new(), real(1.0), real(1.1), 1e-3);
        assert_eq!(r.status, Status::Mismatch);
        let r = IdentityReport::compare("a", Params::new(), real(f64::NAN), real(1.0), 1e-3);
        assert_eq!(r.status, Status::Error);
        let zero_rhs = IdentityReport::compare("a", Params::new(), real(1e-13), real(0.0), 1e-12);
        assert_eq!(zero_rhs.status, Status::Match);
        assert_eq!(zero_rhs.ratio, real(0.0));
    }

    #[test]
    fn ratio_classification() {
        assert_eq!(classify_ratios(&[real(1.0), c(1.0, 1e-9)], 1e-7, 1e-6), Status::Match);
        assert_eq!(
            classify_ratios(&[real(0.5), real(0.5 + 1e-8)], 1e-7, 1e-6),
            Status::ConstantRatio
        );
        assert_eq!(classify_ratios(&[real(0.5), real(0.6)], 1e-7, 1e-6), Status::Mismatch);
        let (mean, spread) = ratio_spread(&[real(1.0), real(3.0)]);
        assert_eq!(mean, real(2.0));
        assert!((spread - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ordering_is_numeric() {
        let mk = |u: f64| IdentityReport::compare("k", params([("u", u.into())]), real(1.0), real(1.0), 0.0);
        let mut v = vec![mk(10.0), mk(2.0), mk(0.5)];
        sort_reports(&mut v);
        let us: Vec<_> = v.iter().map(|r| r.params["u"]).collect();
        assert_eq!(
            us,
            vec![ParamValue::Real(0.5), ParamValue::Real(2.0), ParamValue::Real(10.0)]
        );
    }
}
