//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::maps::{MonomialMap, Symbol};
use crate::operators::OpMatrix;
use crate::spaces::{KernelKind, SpaceSpec};
use crate::verify::{self, CheckReport, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "holospace", version, about = "Operators on weighted Hardy spaces of the disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Symbol: moebius:a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im | monomial:a_re,a_im,M | poly:c0_re,c0_im,...
    #[arg(long, global = true)]
    pub symbol: Option<String>,

    /// Space: hardy | bergman:α | dirichlet | s2 | s2tilde | equiv:α
    #[arg(long, global = true, default_value = "s2")]
    pub space: String,

    /// Exponent for the adjoint identity; overrides the one implied by --space.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Truncation degree N.
    #[arg(long, global = true, default_value_t = 256, value_parser = parse_trunc)]
    pub trunc: usize,

    /// Relative tolerance for numerical rank.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_tol)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Kernel point for `kernel`, as re,im.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Operator norm of D_φ on the space.
    Norm,
    /// Eigenvalues of the truncated D_φ, with the exact set when known.
    Spectrum,
    /// Adjoint identity check for a linear fractional symbol.
    Adjoint,
    /// Kernel coefficients and kernel identity check.
    Kernel,
    /// Full verification suite.
    Check,
    /// Norm sweep for φ = a z^M, M = 1, 2, 3.
    Figure,
    /// Version and grammar summary.
    Info,
}

fn parse_trunc(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (8..=4096).contains(&n) {
        Ok(n)
    } else {
        Err(format!("trunc must lie in [8, 4096], got {n}"))
    }
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err(format!("tol must lie in (0, 1), got {t}"))
    }
}

fn parse_point(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number in point {s:?}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("point must be re or re,im, got {s:?}"))),
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map_or(Value::Null, |x| json!(round12(x))),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Writes flat records as JSON lines, CSV or an aligned table.
pub fn emit(rows: &[Value], format: Format, out: &mut dyn Write) -> Result<()> {
    let rows: Vec<Value> = rows.iter().cloned().map(round_value).collect();
    let mut keys: Vec<String> = Vec::new();
    for r in &rows {
        if let Value::Object(o) = r {
            for k in o.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
    }
    let get = |r: &Value, k: &str| r.get(k).map(cell).unwrap_or_default();
    match format {
        Format::Json => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&keys)?;
            for r in &rows {
                w.write_record(keys.iter().map(|k| get(r, k)))?;
            }
            w.flush()?;
        }
        Format::Table => {
            let widths: Vec<usize> = keys
                .iter()
                .map(|k| rows.iter().map(|r| get(r, k).len()).chain([k.len()]).max().unwrap_or(0).min(60))
                .collect();
            let line = |cells: Vec<String>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(keys.clone()))?;
            for r in &rows {
                writeln!(out, "{}", line(keys.iter().map(|k| get(r, k)).collect()))?;
            }
        }
    }
    Ok(())
}

fn cval(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn symbol_of(cli: &Cli) -> Result<Symbol> {
    cli.symbol
        .as_deref()
        .ok_or_else(|| Error::Parse("--symbol is required for this command".into()))?
        .parse()
}

fn norm_rows(cli: &Cli) -> Result<Vec<Value>> {
    let symbol = symbol_of(cli)?;
    let space: SpaceSpec = cli.space.parse()?;
    let sup = symbol.certify_strict()?;
    let op = OpMatrix::d_phi(&symbol, cli.trunc)?.with_space(space);
    let mut row = json!({
        "operator": "D_phi",
        "symbol": symbol.to_string(),
        "space": space.to_string(),
        "trunc": cli.trunc,
        "sup_norm": sup,
        "norm": op.operator_norm()?,
    });
    if let (Symbol::Monomial(m), SpaceSpec::S2) = (&symbol, space) {
        row["norm_formula"] = json!(m.norm_formula());
        row["nu"] = json!(m.nu());
        if cli.trunc < m.min_trunc_for_norm() {
            row["warning"] = json!(format!("N >= {} needed to resolve the norm", m.min_trunc_for_norm()));
        }
    }
    Ok(vec![row])
}

fn spectrum_rows(cli: &Cli) -> Result<Vec<Value>> {
    let symbol = symbol_of(cli)?;
    let space: SpaceSpec = cli.space.parse()?;
    symbol.certify_self_map()?;
    let op = OpMatrix::d_phi(&symbol, cli.trunc)?.with_space(space);
    let summary = op.spectral_summary(cli.tol)?;
    let reference = match verify::check_spectrum(&symbol, cli.trunc) {
        Ok(r) => Some(r),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let mut rows: Vec<Value> = verify::collapse(&summary.eigenvalues, verify::tol::SPECTRUM)
        .into_iter()
        .map(|(z, k)| json!({ "kind": "eigenvalue", "re": z.re, "im": z.im, "multiplicity": k }))
        .collect();
    if let Some(r) = reference {
        if let Some(Value::Array(pts)) = r.reference.get("spectrum") {
            for p in pts {
                rows.push(json!({ "kind": "reference", "re": p[0], "im": p[1] }));
            }
        }
        rows.push(json!({ "kind": "hausdorff", "re": r.discrepancy, "passed": r.passed }));
    }
    Ok(rows)
}

fn adjoint_report(cli: &Cli) -> Result<CheckReport> {
    let symbol = symbol_of(cli)?;
    let Symbol::Moebius(m) = symbol else {
        return Err(Error::Unsupported("adjoint identities need a moebius symbol".into()));
    };
    if let Some(alpha) = cli.alpha {
        return verify::check_adjoint_intertwine(&m, alpha, cli.trunc);
    }
    match cli.space.parse::<SpaceSpec>()? {
        SpaceSpec::S2tilde => verify::check_adjoint_s2tilde(&m, cli.trunc, cli.seed),
        SpaceSpec::S2 => verify::check_adjoint_s2_compact(&m, &[cli.trunc / 2, cli.trunc]),
        SpaceSpec::Hardy => verify::check_adjoint_intertwine(&m, -1.0, cli.trunc),
        SpaceSpec::Dirichlet => verify::check_adjoint_intertwine(&m, -2.0, cli.trunc),
        SpaceSpec::Bergman { alpha } => verify::check_adjoint_intertwine(&m, alpha, cli.trunc),
        SpaceSpec::Equiv { alpha } => Err(Error::Unsupported(format!(
            "no adjoint identity on equiv:{alpha}; pass --alpha for the Bergman-type exponent"
        ))),
    }
}

fn kernel_rows(cli: &Cli) -> Result<(Vec<Value>, bool)> {
    let space: SpaceSpec = cli.space.parse()?;
    let report = verify::check_kernels(space, 20, cli.trunc, cli.seed)?;
    let mut rows = Vec::new();
    if let Some(w) = cli.w.as_deref() {
        let w = parse_point(w)?;
        let kp = space.kernel(KernelKind::PointEval, w, cli.trunc)?;
        let kd = space.kernel(KernelKind::DerivEval, w, cli.trunc)?;
        for j in 0..=cli.trunc.min(16) {
            rows.push(json!({
                "n": j,
                "point_eval": cval(kp.coeff(j)),
                "deriv_eval": cval(kd.coeff(j)),
            }));
        }
    }
    let passed = report.passed;
    rows.push(report_row(&report));
    Ok((rows, passed))
}

fn report_row(r: &CheckReport) -> Value {
    json!({
        "check_id": r.check_id,
        "passed": r.passed,
        "discrepancy": r.discrepancy,
        "tolerance": r.tolerance,
        "trunc": r.trunc_degree,
        "runtime_ms": r.runtime_ms,
    })
}

/// One row of the norm sweep for `φ = a z^M`.
pub fn figure_row(m: u32, abs_a: f64) -> Result<Value> {
    let map = MonomialMap::new(Complex64::new(abs_a, 0.0), m)?;
    let n = map.min_trunc_for_norm().max(8);
    let op = OpMatrix::d_phi(&Symbol::Monomial(map), n)?.with_space(SpaceSpec::S2);
    Ok(json!({
        "M": m,
        "abs_a": abs_a,
        "nu": map.nu(),
        "norm_formula": map.norm_formula(),
        "norm_svd": op.operator_norm()?,
    }))
}

/// `|a| = 0.010, 0.015, …, 0.950`.
pub fn figure_grid() -> Vec<f64> {
    (0..=188).map(|k| (10 + 5 * k) as f64 / 1000.0).collect()
}

pub fn figure_rows() -> Result<Vec<Value>> {
    let grid: Vec<(u32, f64)> = (1..=3u32).flat_map(|m| figure_grid().into_iter().map(move |a| (m, a))).collect();
    grid.par_iter().map(|&(m, a)| figure_row(m, a)).collect()
}

fn info_rows() -> Vec<Value> {
    vec![json!({
        "name": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "spaces": "hardy | bergman:alpha | dirichlet | s2 | s2tilde | equiv:alpha",
        "symbols": "moebius:a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im | monomial:a_re,a_im,M | poly:c0_re,c0_im,...",
        "default_seed": DEFAULT_SEED,
        "threads": rayon::current_num_threads(),
    })]
}

fn open_out(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Executes a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    let single = |report: CheckReport| -> Result<i32> {
        let mut out = open_out(cli)?;
        match cli.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
            f => emit(&[report_row(&report)], f, &mut out)?,
        }
        out.flush()?;
        Ok(if report.passed { 0 } else { 1 })
    };
    let rows = match cli.command {
        Command::Norm => norm_rows(cli)?,
        Command::Spectrum => spectrum_rows(cli)?,
        Command::Figure => figure_rows()?,
        Command::Info => info_rows(),
        Command::Adjoint => return single(adjoint_report(cli)?),
        Command::Kernel => {
            let (rows, passed) = kernel_rows(cli)?;
            let mut out = open_out(cli)?;
            emit(&rows, cli.format, &mut out)?;
            out.flush()?;
            return Ok(if passed { 0 } else { 1 });
        }
        Command::Check => {
            let reports = verify::run_suite(cli.seed);
            let mut out = open_out(cli)?;
            match cli.format {
                Format::Json => {
                    for r in &reports {
                        writeln!(out, "{}", serde_json::to_string(r)?)?;
                    }
                }
                f => emit(&reports.iter().map(report_row).collect::<Vec<_>>(), f, &mut out)?,
            }
            out.flush()?;
            let failing: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.check_id.as_str()).collect();
            if failing.is_empty() {
                return Ok(0);
            }
            for id in &failing {
                eprintln!("FAILED {id}");
            }
            return Ok(1);
        }
    };
    let mut out = open_out(cli)?;
    emit(&rows, cli.format, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("HOLOSPACE_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
}

/// Parses arguments, runs, and maps errors to exit codes.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match thread_pool() {
        Some(pool) => pool.install(|| run(&cli)),
        None => run(&cli),
    };
    match result {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
