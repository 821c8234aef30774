//! Report serialization and output sinks.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use shiftker_core::report::sort_reports;
use shiftker_core::{IdentityReport, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

pub fn params_text(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// Shortest round-trip form, with an exponent for very large or small values.
fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
    } else {
        x.to_string()
    }
}

pub fn to_json(reports: &[IdentityReport]) -> io::Result<String> {
    let mut s = serde_json::to_string_pretty(reports).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(reports: &[IdentityReport]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "identity_id",
        "params",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_diff",
        "rel_diff",
        "ratio_re",
        "ratio_im",
        "status",
        "notes",
    ])?;
    for r in reports {
        w.write_record([
            r.identity_id.clone(),
            params_text(&r.params),
            num(r.lhs.re),
            num(r.lhs.im),
            num(r.rhs.re),
            num(r.rhs.im),
            num(r.abs_diff),
            num(r.rel_diff),
            num(r.ratio.re),
            num(r.ratio.im),
            r.status.to_string(),
            r.notes.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

/// Whitespace-separated columns `x rel_diff abs_diff ratio_re ratio_im`, one
/// block per identity id, blocks separated by a blank line. `x` is the
/// parameter `x_param`, or the row index within the block when the block's
/// first report does not have it.
pub fn to_plotdata(reports: &[IdentityReport], x_param: &str) -> String {
    let mut out = String::new();
    let mut current: Option<&str> = None;
    let mut row = 0usize;
    let mut by_param = true;
    for r in reports {
        if current != Some(r.identity_id.as_str()) {
            if current.is_some() {
                out.push('\n');
            }
            by_param = r.params.contains_key(x_param);
            let x_name = if by_param { x_param } else { "index" };
            out.push_str(&format!(
                "# {}\n# {x_name} rel_diff abs_diff ratio_re ratio_im\n",
                r.identity_id
            ));
            current = Some(&r.identity_id);
            row = 0;
        }
        let x = match r.params.get(x_param) {
            Some(v) if by_param => v.as_complex().re,
            _ => row as f64,
        };
        out.push_str(&format!(
            "{x:e} {:e} {:e} {:e} {:e}\n",
            r.rel_diff, r.abs_diff, r.ratio.re, r.ratio.im
        ));
        row += 1;
    }
    out
}

pub fn render(reports: &mut [IdentityReport], format: Format, x_param: &str) -> io::Result<String> {
    sort_reports(reports);
    match format {
        Format::Json => to_json(reports),
        Format::Csv => to_csv(reports),
        Format::Plotdata => Ok(to_plotdata(reports, x_param)),
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.{}.partial", std::process::id()))
}

/// Writes `text` to `path` through a temporary sibling and a rename, so a
/// failed write leaves no partial file; without a path, writes to stdout.
pub fn write_output(text: &str, path: Option<&Path>) -> io::Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        return out.flush();
    };
    let tmp = temp_path(path);
    let result = fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use shiftker_core::numerics::real;
    use shiftker_core::report::params;

    fn rep(id: &str, u: f64) -> IdentityReport {
        IdentityReport::compare(id, params([("u", u.into())]), real(1.0), real(2.0), 1e-9)
    }

    #[test]
    fn csv_rows_sorted_by_u() {
        let mut v = vec![rep("a", 2.0), rep("a", 0.5)];
        let text = render(&mut v, Format::Csv, "u").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("identity_id,params"));
        assert!(lines[1].starts_with("a,u=0.5,"));
        assert!(lines[2].starts_with("a,u=2,"));
    }

    #[test]
    fn plotdata_columns() {
        let mut v = vec![rep("a", 2.0), rep("a", 0.5), rep("b", 1.0)];
        let text = render(&mut v, Format::Plotdata, "u").unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0][0], 0.5);
        assert_eq!(rows[0][1], 0.5);
        assert_eq!(rows[1][0], 2.0);
        assert!(text.contains("\n\n# b\n"));
    }

    #[test]
    fn failed_write_leaves_nothing() {
        let dir = std::env::temp_dir().join(format!("shiftker-emit-{}", std::process::id()));
        let target = dir.join("missing").join("out.json");
        assert!(write_output("x", Some(&target)).is_err());
        assert!(!target.exists());
    }
}
