//! `shiftker`: command-line front end for the kernel, its special functions
//! and the identity suites.
//!
//! Exit codes: 0 when every check is `match` or `constant-ratio`, 1 when any
//! check is `mismatch`, `diverged` or `error` (or on I/O failure), 2 on
//! usage errors.

mod emit;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use emit::{render, write_output, Format};
use shiftker_core::bessel::{
    bessel_i, bessel_j, bessel_k, bessel_k_integral, bessel_y, hankel, hankel_via_k, HankelKind,
};
use shiftker_core::confluent::{ln_parabolic_d, ln_whittaker_w, parabolic_d, tricomi_u, whittaker_w};
use shiftker_core::identity::{self, POINT_IDENTITIES, SUITES};
use shiftker_core::kernel::{kernel_closed, kernel_integral, kernel_series};
use shiftker_core::legendre::{gegenbauer_c, legendre_p, LegendreArgs};
use shiftker_core::numerics::{ln_gamma, pochhammer, reciprocal_gamma};
use shiftker_core::{ComplexValue, IdentityReport, KernelParams, KernelValue, Method, Params, Tolerance, Variant};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "shiftker",
    version,
    about = "Kernel of the shift-subgroup intertwining operator and its special functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one special function.
    Eval(EvalArgs),
    /// Evaluate the kernel by one or all methods.
    Kernel(KernelArgs),
    /// Run an identity suite.
    Verify(VerifyArgs),
    /// Evaluate one identity over a parameter grid.
    Grid(GridArgs),
    /// Re-emit a saved JSON report in another format.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Lngamma,
    Rgamma,
    Poch,
    Besselk,
    Besseli,
    Besselj,
    Bessely,
    Hankel1,
    Hankel2,
    Tricomiu,
    Whittakerw,
    Pcfd,
    Legendrep,
    Gegenbauer,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: Function,
    /// Order (Bessel, parabolic cylinder), degree (Legendre) or Pochhammer shift.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    nu: Option<ComplexValue>,
    /// Argument.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    x: Option<ComplexValue>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    a: Option<ComplexValue>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    b: Option<ComplexValue>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    kappa: Option<ComplexValue>,
    /// Whittaker or Legendre order.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    mu: Option<ComplexValue>,
    /// Gegenbauer degree.
    #[arg(long)]
    k: Option<u32>,
    /// Gegenbauer parameter.
    #[arg(long, value_parser = parse::real, allow_hyphen_values = true)]
    rho: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Integral,
    Series,
    Closed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantChoice {
    Standard,
    ExtraPochhammer,
    Both,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_parser = parse::real)]
    u: f64,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    k0: u32,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    sigma: ComplexValue,
    #[arg(long = "sigma-hat", value_parser = parse::complex, allow_hyphen_values = true)]
    sigma_hat: ComplexValue,
    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    method: MethodChoice,
    #[arg(long, value_enum, default_value_t = VariantChoice::Both)]
    variant: VariantChoice,
    /// Relative tolerance of the integral and series evaluations.
    #[arg(long = "rel-tol", value_parser = parse::real, default_value_t = 1e-12)]
    rel_tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportSink {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Parameter used as the first plotdata column.
    #[arg(long = "x-param", default_value = "u")]
    x_param: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    suite: String,
    #[command(flatten)]
    sink: ReportSink,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    identity: String,
    /// Swept parameter, `name=start:stop:step`; repeat for a product grid.
    #[arg(long = "param", value_parser = parse::range)]
    ranges: Vec<parse::Range>,
    /// Fixed parameter, `name=value`.
    #[arg(long = "set", value_parser = parse::assignment, allow_hyphen_values = true)]
    fixed: Vec<(String, shiftker_core::ParamValue)>,
    #[command(flatten)]
    sink: ReportSink,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    sink: ReportSink,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAIL,
        message: message.into(),
    }
}

fn need<T: Copy>(v: Option<T>, name: &str, f: Function) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--fn {f:?} needs --{name}").to_lowercase()))
}

fn real_arg(v: ComplexValue, name: &str) -> Result<f64, Failure> {
    if v.im != 0.0 {
        return Err(usage(format!("--{name} must be real")));
    }
    Ok(v.re)
}

#[derive(Serialize)]
struct EvalOutput {
    function: String,
    value: ComplexValue,
    /// Difference from an independent evaluation path, when one exists.
    error_estimate: Option<f64>,
}

fn eval(args: &EvalArgs) -> Result<EvalOutput, Failure> {
    use Function as F;
    let f = args.function;
    let nu = || need(args.nu, "nu", f);
    let x = || need(args.x, "x", f);
    let core = |e: shiftker_core::Error| failed(e.to_string());
    let (value, check) = match f {
        F::Lngamma => (ln_gamma(x()?).map_err(core)?, None),
        F::Rgamma => (reciprocal_gamma(x()?), None),
        F::Poch => (pochhammer(x()?, nu()?).map_err(core)?, None),
        F::Besselk => {
            let (nu, x) = (nu()?, real_arg(x()?, "x")?);
            let v = bessel_k(nu, x).map_err(core)?;
            let alt = bessel_k_integral(nu, x, &Tolerance::default().with_rel(1e-13)).map_err(core)?;
            (v, Some(alt))
        }
        F::Besseli => (bessel_i(nu()?, x()?).map_err(core)?, None),
        F::Besselj => (bessel_j(nu()?, x()?).map_err(core)?, None),
        F::Bessely => (bessel_y(nu()?, x()?).map_err(core)?, None),
        F::Hankel1 | F::Hankel2 => {
            let kind = if f == F::Hankel1 {
                HankelKind::First
            } else {
                HankelKind::Second
            };
            let (nu, x) = (nu()?, x()?);
            let v = hankel(kind, nu, x).map_err(core)?;
            let alt = if x.im == 0.0 && x.re > 0.0 {
                Some(hankel_via_k(kind, nu, x.re).map_err(core)?)
            } else {
                None
            };
            (v, alt)
        }
        F::Tricomiu => (
            tricomi_u(need(args.a, "a", f)?, need(args.b, "b", f)?, x()?).map_err(core)?,
            None,
        ),
        F::Whittakerw => {
            let (k, m, z) = (need(args.kappa, "kappa", f)?, need(args.mu, "mu", f)?, x()?);
            let v = whittaker_w(k, m, z).map_err(core)?;
            (v, ln_whittaker_w(k, m, z).ok().map(|l| l.exp()))
        }
        F::Pcfd => {
            let (nu, z) = (nu()?, x()?);
            let v = parabolic_d(nu, z).map_err(core)?;
            (v, ln_parabolic_d(nu, z).ok().map(|l| l.exp()))
        }
        F::Legendrep => {
            let t = real_arg(x()?, "x")?;
            let args = LegendreArgs::new(nu()?, need(args.mu, "mu", f)?, t);
            (legendre_p(args).map_err(core)?, None)
        }
        F::Gegenbauer => {
            let v =
                gegenbauer_c(need(args.k, "k", f)?, need(args.rho, "rho", f)?, real_arg(x()?, "x")?).map_err(core)?;
            (ComplexValue::new(v, 0.0), None)
        }
    };
    Ok(EvalOutput {
        function: format!("{f:?}").to_lowercase(),
        value,
        error_estimate: check.map(|c| (c - value).norm()),
    })
}

#[derive(Serialize)]
struct KernelEntry {
    method: Method,
    variant: Option<Variant>,
    value: ComplexValue,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct KernelRatio {
    numerator: String,
    denominator: String,
    ratio: ComplexValue,
}

#[derive(Serialize)]
struct KernelOutput {
    params: KernelParams,
    values: Vec<KernelEntry>,
    ratios: Vec<KernelRatio>,
}

fn entry_label(e: &KernelEntry) -> String {
    let m = serde_json::to_value(e.method)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    match e.variant {
        Some(v) => format!("{m}-{}", v.as_str()),
        None => m,
    }
}

fn kernel(args: &KernelArgs) -> Result<KernelOutput, Failure> {
    let p = KernelParams::new(args.u, args.n, args.k0, args.sigma, args.sigma_hat).map_err(|e| usage(e.to_string()))?;
    let tol = Tolerance::default().with_rel(args.rel_tol);
    let mut values = Vec::new();
    let push = |values: &mut Vec<KernelEntry>,
                method: Method,
                variant: Option<Variant>,
                r: shiftker_core::Result<KernelValue>| {
        values.push(match r {
            Ok(v) => KernelEntry {
                method,
                variant,
                value: v.value,
                converged: v.diagnostics.converged(),
                error: None,
            },
            Err(e) => KernelEntry {
                method,
                variant,
                value: ComplexValue::new(0.0, 0.0),
                converged: false,
                error: Some(e.to_string()),
            },
        })
    };
    let all = args.method == MethodChoice::All;
    if all || args.method == MethodChoice::Integral {
        push(&mut values, Method::Integral, None, kernel_integral(&p, &tol));
    }
    if all || args.method == MethodChoice::Series {
        let variants: &[Variant] = match args.variant {
            VariantChoice::Standard => &[Variant::Standard],
            VariantChoice::ExtraPochhammer => &[Variant::ExtraPochhammer],
            VariantChoice::Both => &Variant::ALL,
        };
        for &v in variants {
            push(&mut values, Method::Series, Some(v), kernel_series(&p, v, &tol));
        }
    }
    if all || args.method == MethodChoice::Closed {
        push(&mut values, Method::Closed, None, kernel_closed(&p));
    }
    let mut ratios = Vec::new();
    let good: Vec<&KernelEntry> = values.iter().filter(|e| e.error.is_none()).collect();
    for (i, a) in good.iter().enumerate() {
        for b in &good[i + 1..] {
            if b.value.norm() > 0.0 {
                ratios.push(KernelRatio {
                    numerator: entry_label(a),
                    denominator: entry_label(b),
                    ratio: a.value / b.value,
                });
            }
        }
    }
    Ok(KernelOutput {
        params: p,
        values,
        ratios,
    })
}

fn all_ok(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.status.is_ok())
}

fn emit_reports(mut reports: Vec<IdentityReport>, sink: &ReportSink) -> Result<bool, Failure> {
    if reports.is_empty() {
        return Err(failed("no reports to emit"));
    }
    let text = render(&mut reports, sink.format, &sink.x_param).map_err(|e| failed(e.to_string()))?;
    write_output(&text, sink.output.as_deref()).map_err(|e| failed(format!("cannot write output: {e}")))?;
    Ok(all_ok(&reports))
}

fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    if args.suite != "all" && !SUITES.contains(&args.suite.as_str()) {
        return Err(usage(format!(
            "unknown suite '{}'; known: all, {}",
            args.suite,
            SUITES.join(", ")
        )));
    }
    let reports = identity::run_suite(&args.suite).map_err(|e| failed(e.to_string()))?;
    emit_reports(reports, &args.sink)
}

fn grid_points(args: &GridArgs) -> Result<Vec<Params>, Failure> {
    let mut base = Params::new();
    for (k, v) in &args.fixed {
        base.insert(k.clone(), *v);
    }
    let mut points = vec![base];
    for r in &args.ranges {
        if args.fixed.iter().any(|(k, _)| *k == r.name) {
            return Err(usage(format!("parameter '{}' is both swept and fixed", r.name)));
        }
        points = points
            .into_iter()
            .flat_map(|p| {
                r.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.insert(r.name.clone(), v.into());
                    q
                })
            })
            .collect();
        if points.len() > parse::MAX_RANGE_POINTS {
            return Err(usage(format!("grid exceeds {} points", parse::MAX_RANGE_POINTS)));
        }
    }
    Ok(points)
}

fn grid(args: &GridArgs) -> Result<bool, Failure> {
    if !POINT_IDENTITIES.iter().any(|(id, _)| *id == args.identity) {
        let known: Vec<String> = POINT_IDENTITIES.iter().map(|(id, p)| format!("{id} ({p})")).collect();
        return Err(usage(format!(
            "unknown identity '{}'; known: {}",
            args.identity,
            known.join(", ")
        )));
    }
    let points = grid_points(args)?;
    // evaluation order is free; the output order is fixed by sorting
    let reports: Result<Vec<IdentityReport>, shiftker_core::Error> = points
        .par_iter()
        .map(|p| identity::evaluate(&args.identity, p))
        .collect();
    let reports = reports.map_err(|e| usage(e.to_string()))?;
    emit_reports(reports, &args.sink)
}

fn report(args: &ReportArgs) -> Result<bool, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| failed(format!("cannot read {}: {e}", args.input.display())))?;
    let reports: Vec<IdentityReport> = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{} is not a report array: {e}", args.input.display())))?;
    emit_reports(reports, &args.sink)
}

fn print_json<T: Serialize>(value: &T, output: Option<&std::path::Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| failed(e.to_string()))?;
    text.push('\n');
    write_output(&text, output).map_err(|e| failed(format!("cannot write output: {e}")))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match &cli.command {
        Command::Eval(a) => {
            print_json(&eval(a)?, None)?;
            Ok(true)
        }
        Command::Kernel(a) => {
            let out = kernel(a)?;
            let ok = out.values.iter().all(|e| e.error.is_none() && e.converged);
            print_json(&out, a.output.as_deref())?;
            Ok(ok)
        }
        Command::Verify(a) => verify(a),
        Command::Grid(a) => grid(a),
        Command::Report(a) => report(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("shiftker: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
