use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qlab_core::verify::{self, CheckReport, Mode, ParamMap, Selection, SuiteConfig};
use qlab_core::Error;

mod config;

#[derive(Parser)]
#[command(name = "qlab", version, about = "Checks q-series identities exactly, numerically and asymptotically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run one check.
    Verify {
        id: String,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        /// q-order of an exact check.
        #[arg(long, conflicts_with_all = ["bits", "t"])]
        order: Option<i64>,
        /// Precision in bits of a numeric or asymptotic check.
        #[arg(long)]
        bits: Option<u32>,
        /// Decreasing t grid of an asymptotic check.
        #[arg(long = "t", value_name = "T1,T2,...")]
        t: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the registry suite.
    Suite {
        /// exact, numeric, asymptotic (comma separated) or all.
        #[arg(long)]
        select: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long = "asym-bits")]
        asym_bits: Option<u32>,
        #[arg(long = "t", value_name = "T1,T2,...")]
        t: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        timing: bool,
    },
    /// Dump the coefficients of a named series as CSV.
    Coeffs {
        /// One of euler-lhs, euler-rhs, eta-product.
        series: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long)]
        order: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate both sides and the residual of a claim along a t range.
    Sweep {
        id: String,
        /// `start,stop,count`.
        #[arg(long = "t", value_name = "START,STOP,COUNT")]
        t: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, default_value_t = verify::DEFAULT_ASYM_BITS)]
        bits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command: usage problems exit 2, anything else 1.
enum Fail {
    Usage(String),
    Run(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownIdentity(id) => {
                Fail::Usage(format!("unknown identity {id:?}; valid ids: {}", verify::ids().join(", ")))
            }
            e @ (Error::BadParameter { .. } | Error::UnsupportedMode { .. }) => Fail::Usage(e.to_string()),
            e => Fail::Run(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Usage(msg.into())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_params(raw: &[String]) -> Result<ParamMap, Fail> {
    raw.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--param {p:?}: expected key=value")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Fail> {
    let ts = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("bad t value {v:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) || ts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(usage("t grid must be strictly decreasing positive reals"));
    }
    Ok(ts)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Run(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => verify::reports_to_json(reports),
        Format::Csv => verify::reports_to_csv(reports),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    id: &str,
    params: &[String],
    mode: Option<Mode>,
    order: Option<i64>,
    bits: Option<u32>,
    t: Option<&str>,
    out: &Option<PathBuf>,
    format: Format,
    timing: bool,
) -> Result<bool, Fail> {
    let spec = verify::lookup(id)?;
    let params = parse_params(params)?;
    let modes = spec.modes();
    let mode = match mode {
        Some(m) => m,
        None if t.is_some() => Mode::Asymptotic,
        None if order.is_some() => Mode::Exact,
        None if bits.is_some() && modes.contains(&Mode::Numeric) => Mode::Numeric,
        None => modes[0],
    };
    let mut report = match mode {
        Mode::Exact => verify::check_exact(id, &params, order.unwrap_or(verify::DEFAULT_ORDER))?,
        Mode::Numeric => verify::check_numeric(id, &params, bits.unwrap_or(verify::DEFAULT_BITS))?,
        Mode::Asymptotic => {
            let ts = match t {
                Some(s) => parse_grid(s)?,
                None => verify::DEFAULT_T_GRID.to_vec(),
            };
            verify::check_asymptotic(id, &params, &ts, bits.unwrap_or(verify::DEFAULT_ASYM_BITS))?
        }
    };
    if !timing {
        report.elapsed_ms = 0;
    }
    println!("{}", report.summary());
    if out.is_some() {
        write_out(out, &render(std::slice::from_ref(&report), format))?;
    }
    Ok(report.passed())
}

struct SuiteArgs {
    select: Option<String>,
    config: Option<PathBuf>,
    order: Option<i64>,
    bits: Option<u32>,
    asym_bits: Option<u32>,
    t: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    timing: bool,
}

fn cmd_suite(a: SuiteArgs) -> Result<bool, Fail> {
    let file = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("reading {}: {e}", p.display())))?;
            config::parse(&text).map_err(usage)?
        }
        None => config::FileConfig::default(),
    };
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.values.get(key).cloned());
    let num = |v: Option<String>, key: &str| -> Result<Option<u64>, Fail> {
        v.map(|s| s.parse::<u64>().map_err(|_| usage(format!("{key}: expected a non-negative integer")))).transpose()
    };

    let select: Selection = pick(a.select, "select").unwrap_or_else(|| "all".into()).parse()?;
    let mut cfg = SuiteConfig::default();
    if let Some(n) = num(pick(a.order.map(|v| v.to_string()), "order"), "order")? {
        cfg.order = n as i64;
    }
    if let Some(n) = num(pick(a.bits.map(|v| v.to_string()), "bits"), "bits")? {
        cfg.bits = n as u32;
    }
    if let Some(n) = num(pick(a.asym_bits.map(|v| v.to_string()), "asym-bits"), "asym-bits")? {
        cfg.asym_bits = n as u32;
    }
    if let Some(t) = pick(a.t, "t") {
        cfg.t_grid = parse_grid(&t)?;
    }
    cfg.timing = a.timing || file.values.get("timing").is_some_and(|v| v == "true");
    let ids = verify::ids();
    let mut overrides: BTreeMap<String, ParamMap> = BTreeMap::new();
    for (id, k, v) in &file.params {
        if !ids.contains(&id.as_str()) {
            return Err(Error::UnknownIdentity(id.clone()).into());
        }
        overrides.entry(id.clone()).or_default().insert(k.clone(), v.clone());
    }
    cfg.overrides = overrides;
    let out = a.out.or_else(|| file.values.get("out").map(PathBuf::from));
    let format = match (a.format, file.values.get("format").map(String::as_str)) {
        (Some(f), _) => f,
        (None, None | Some("json")) => Format::Json,
        (None, Some("csv")) => Format::Csv,
        (None, Some(other)) => return Err(usage(format!("format: unknown value {other:?}"))),
    };

    let reports = verify::run_suite(&select, &cfg);
    for r in &reports {
        println!("{}", r.summary());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} checks, {} failed", reports.len(), failed);
    if out.is_some() {
        write_out(&out, &render(&reports, format))?;
    }
    Ok(failed == 0)
}

fn cmd_coeffs(series: &str, params: &[String], order: i64, out: &Option<PathBuf>) -> Result<bool, Fail> {
    if order < 1 {
        return Err(usage("--order must be at least 1"));
    }
    let params = parse_params(params)?;
    let s = verify::coeffs(series, &params, order).map_err(|e| match e {
        Error::UnknownIdentity(_) => {
            let names: Vec<&str> = verify::SERIES.iter().map(|(n, _)| *n).collect();
            usage(format!("unknown series {series:?}; valid series: {}", names.join(", ")))
        }
        e => e.into(),
    })?;
    write_out(out, &s.to_csv())?;
    Ok(true)
}

fn cmd_sweep(id: &str, t: &str, params: &[String], bits: u32, out: &Option<PathBuf>) -> Result<bool, Fail> {
    verify::lookup(id)?;
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    let [start, stop, count] = parts[..] else {
        return Err(usage("--t expects start,stop,count"));
    };
    let bad = |v: &str| usage(format!("bad --t component {v:?}"));
    let start: f64 = start.parse().map_err(|_| bad(start))?;
    let stop: f64 = stop.parse().map_err(|_| bad(stop))?;
    let count: usize = count.parse().map_err(|_| bad(count))?;
    let ts = verify::t_range(start, stop, count)?;
    let rows = verify::sweep(id, &parse_params(params)?, &ts, bits)?;
    let mut text = String::from("t,lhs,rhs,residual\n");
    for r in rows {
        text.push_str(&format!("{},{},{},{}\n", r.t, r.lhs, r.rhs, r.residual));
    }
    write_out(out, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { id, params, mode, order, bits, t, out, format, timing } => {
            cmd_verify(&id, &params, mode, order, bits, t.as_deref(), &out, format, timing)
        }
        Command::Suite { select, config, order, bits, asym_bits, t, out, format, timing } => {
            cmd_suite(SuiteArgs { select, config, order, bits, asym_bits, t, out, format, timing })
        }
        Command::Coeffs { series, params, order, out } => cmd_coeffs(&series, &params, order, &out),
        Command::Sweep { id, t, params, bits, out } => cmd_sweep(&id, &t, &params, bits, &out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
