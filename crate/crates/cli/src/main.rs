//! `bhenum`: elements of bounded height, units, the PS baseline and benches.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bounded_height::arith::rational::{fmt_rat, parse_rat, BigRat};
use bounded_height::baseline::{self, BenchReport, PsOutput};
use bounded_height::field::io::{field_to_string, load_field};
use bounded_height::field::{quadratic_field, rational_field, FieldData, NFElem};
use bounded_height::search::output::{record_json, result_to_string};
use bounded_height::search::{self, ElementRecord, SearchError, SearchOutput};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bhenum", version, about = "Number field elements of bounded relative height")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct RunConfig {
    /// `quad:<d>`, `rational`, or a path to a field-data file.
    field: String,
    /// Height bound B as `p`, `p/q` or a decimal.
    #[arg(long)]
    bound: String,
    /// Tolerance theta in (0, 1]; below 1/2 enables the real-quadratic refinement.
    #[arg(long, default_value = "1/100")]
    tolerance: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Refuse PS scans larger than this many tuples.
    #[arg(long, default_value_t = baseline::DEFAULT_CAP)]
    ps_cap: u64,
    /// Decide L' exactly against B (compute only).
    #[arg(long)]
    resolve: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lists L and L' for H_K(x) <= B.
    Compute(RunConfig),
    /// Units with H_K(u) <= D (pass D as --bound).
    Units(RunConfig),
    /// The PS baseline scan.
    Ps(RunConfig),
    /// Search-ratio rows for the chosen methods.
    Bench {
        #[command(flatten)]
        cfg: RunConfig,
        /// Comma-separated subset of `a,ps`.
        #[arg(long, default_value = "a,ps")]
        methods: String,
    },
    /// Field summary; `--out` also writes the field-data document.
    FieldInfo {
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Loads a field-data file with full verification.
    FieldVerify { path: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Fixture(String),
    Capacity(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Fixture(_) => 3,
            CliError::Capacity(_) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Fixture(m) => write!(f, "invalid field data: {m}"),
            CliError::Capacity(m) => write!(f, "capacity exceeded: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> CliError {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else if let SearchError::InvalidInput(m) = e {
            CliError::Usage(m)
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Internal(format!("{}: {e}", path.display()))
}

/// `p`, `p/q` or a terminating decimal such as `0.5`, all exact.
fn parse_exact(s: &str) -> Result<BigRat, CliError> {
    let bad = || CliError::Usage(format!("not a rational number: {s:?}"));
    let t = s.trim();
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let digits = format!("{}{fp}", ip.trim_start_matches(['-', '+']));
        let q = parse_rat(&format!("{digits}/1{}", "0".repeat(fp.len()))).map_err(|_| bad())?;
        return Ok(if neg { -q } else { q });
    }
    parse_rat(t).map_err(|_| bad())
}

fn load(spec: &str) -> Result<FieldData, CliError> {
    if spec == "rational" || spec == "Q" {
        return Ok(rational_field());
    }
    if let Some(d) = spec.strip_prefix("quad:") {
        let d: i64 = d.trim().parse().map_err(|_| CliError::Usage(format!("bad quadratic field {spec:?}")))?;
        return quadratic_field(d).map_err(|e| CliError::Usage(format!("{spec}: {e}")));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(CliError::Usage(format!("unknown field {spec:?} (expected quad:<d>, rational, or a file)")));
    }
    load_field(path).map_err(|e| CliError::Fixture(format!("{spec}: {e}")))
}

fn bound_and_theta(cfg: &RunConfig) -> Result<(BigRat, BigRat), CliError> {
    let b = parse_exact(&cfg.bound)?;
    if b < BigRat::from_integer(1.into()) {
        return Err(CliError::Usage(format!("bound {} is below 1", cfg.bound)));
    }
    let t = parse_exact(&cfg.tolerance)?;
    if t <= BigRat::from_integer(0.into()) || t > BigRat::from_integer(1.into()) {
        return Err(CliError::Usage(format!("tolerance {} is outside (0, 1]", cfg.tolerance)));
    }
    Ok((b, t))
}

/// Writes the document to `--out` (summary to stdout) or to stdout (summary to stderr).
fn emit(out: &Option<PathBuf>, doc: &str, summary: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            fs::write(p, doc).map_err(|e| io_err(p, e))?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().write_all(doc.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn coords(x: &NFElem) -> Vec<String> {
    x.coords().iter().map(fmt_rat).collect()
}

fn csv_doc(n: usize, rows: Vec<(&str, &NFElem, Option<&ElementRecord>)>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["list".to_string(), "height_mid".into(), "height_rad".into()];
    head.extend((0..n).map(|i| format!("c{i}")));
    let ce = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(&head).map_err(ce)?;
    for (list, x, rec) in rows {
        let mut r = vec![list.to_string()];
        match rec {
            Some(e) => r.extend([fmt_rat(&e.height_mid), fmt_rat(&e.height_rad)]),
            None => r.extend([String::new(), String::new()]),
        }
        r.extend(coords(x));
        w.write_record(&r).map_err(ce)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?)
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization");
    s.push('\n');
    s
}

fn compute(k: &FieldData, b: &BigRat, theta: &BigRat) -> Result<(SearchOutput, u128), CliError> {
    let t0 = Instant::now();
    let out = search::run(k, b, theta)?;
    Ok((out, t0.elapsed().as_millis()))
}

fn cmd_compute(cfg: &RunConfig) -> Result<(), CliError> {
    let k = load(&cfg.field)?;
    let (b, theta) = bound_and_theta(cfg)?;
    let (out, ms) = compute(&k, &b, &theta)?;
    let doc = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => result_to_string(&out),
        Format::Csv => csv_doc(
            k.n,
            out.l
                .iter()
                .map(|e| ("L", &e.x, Some(e)))
                .chain(out.lprime.iter().map(|e| ("Lprime", &e.x, Some(e))))
                .collect(),
        )?,
    };
    let c = &out.counters;
    let mut summary = format!(
        "field {}  B {}  theta {}  |L| {}  |L'| {}  elements {}  search_space {}  generators {}  pairs {}  unit_tuples {}  resolved {}  dropped {}  elapsed_ms {}",
        out.field,
        fmt_rat(&b),
        fmt_rat(&theta),
        out.l.len(),
        out.lprime.len(),
        out.total(),
        c.search_space,
        c.generators,
        c.pairs,
        c.unit_tuples,
        c.resolved_to_l,
        c.dropped,
        ms
    );
    if cfg.resolve {
        let r = search::resolve_exact(&out, &k, baseline::RESOLVE_BITS)?;
        summary.push_str(&format!(
            "  lprime_inside {}  lprime_outside {}  lprime_undecided {}  final {}",
            r.inside.len(),
            r.outside.len(),
            r.undecided.len(),
            out.l.len() + r.inside.len()
        ));
    }
    emit(&cfg.out, &doc, &summary)
}

fn cmd_units(cfg: &RunConfig) -> Result<(), CliError> {
    let k = load(&cfg.field)?;
    let (d, theta) = bound_and_theta(cfg)?;
    let out = search::units_with_tolerance(&k, &d, &theta)?;
    let doc = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "field": k.label,
            "D": fmt_rat(&d),
            "units": out.units.iter().map(record_json).collect::<Vec<_>>(),
            "borderline": out.borderline.iter().map(record_json).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_doc(
            k.n,
            out.units
                .iter()
                .map(|e| ("units", &e.x, Some(e)))
                .chain(out.borderline.iter().map(|e| ("borderline", &e.x, Some(e))))
                .collect(),
        )?,
    };
    let summary =
        format!("field {}  D {}  units {}  borderline {}", k.label, fmt_rat(&d), out.units.len(), out.borderline.len());
    emit(&cfg.out, &doc, &summary)
}

fn run_ps(k: &FieldData, b: &BigRat, cap: u64) -> Result<(PsOutput, u128), CliError> {
    let t0 = Instant::now();
    let out = baseline::ps_enumerate(k, b, cap)?;
    Ok((out, t0.elapsed().as_millis()))
}

fn cmd_ps(cfg: &RunConfig) -> Result<(), CliError> {
    let k = load(&cfg.field)?;
    let (b, _) = bound_and_theta(cfg)?;
    let (out, ms) = run_ps(&k, &b, cfg.ps_cap)?;
    let doc = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "field": k.label,
            "B": fmt_rat(&b),
            "search_space": out.search_space.to_string(),
            "elements": out.elements.iter().map(coords).collect::<Vec<_>>(),
            "borderline": out.borderline.iter().map(coords).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_doc(
            k.n,
            out.elements
                .iter()
                .map(|x| ("elements", x, None))
                .chain(out.borderline.iter().map(|x| ("borderline", x, None)))
                .collect(),
        )?,
    };
    let summary = format!(
        "field {}  B {}  elements {}  borderline {}  search_space {}  elapsed_ms {}",
        k.label,
        fmt_rat(&b),
        out.elements.len(),
        out.borderline.len(),
        out.search_space,
        ms
    );
    emit(&cfg.out, &doc, &summary)
}

fn report_json(r: &BenchReport) -> Value {
    json!({
        "method": r.method,
        "field": r.field,
        "B": fmt_rat(&r.bound),
        "theta": r.theta.as_ref().map(fmt_rat),
        "elapsed_ms": r.elapsed_ms as u64,
        "search_space": r.search_space.to_string(),
        "found": r.found,
        "ratio": fmt_rat(&r.ratio),
    })
}

fn cmd_bench(cfg: &RunConfig, methods: &str) -> Result<(), CliError> {
    let k = load(&cfg.field)?;
    let (b, theta) = bound_and_theta(cfg)?;
    let mut reports = Vec::new();
    for m in methods.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        let r = match m {
            "a" => {
                let t0 = Instant::now();
                let out = search::run(&k, &b, &theta)?;
                let space = out.counters.search_space.into();
                baseline::search_ratio("a", &k.label, &b, Some(&theta), t0.elapsed(), &space, out.total() as u64)?
            }
            "ps" => {
                let t0 = Instant::now();
                let out = baseline::ps_enumerate(&k, &b, cfg.ps_cap)?;
                baseline::search_ratio("ps", &k.label, &b, None, t0.elapsed(), &out.search_space, out.found())?
            }
            other => return Err(CliError::Usage(format!("unknown method {other:?} (expected a or ps)"))),
        };
        reports.push(r);
    }
    if reports.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    let table = baseline::render_table(&reports);
    let doc = match cfg.format {
        Some(Format::Json) => pretty(&Value::Array(reports.iter().map(report_json).collect())),
        Some(Format::Csv) | None if cfg.out.is_some() || cfg.format.is_some() => {
            let mut buf = Vec::new();
            baseline::write_csv(&reports, &mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
            String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))?
        }
        _ => {
            print!("{table}");
            return Ok(());
        }
    };
    match &cfg.out {
        Some(p) => {
            fs::write(p, doc).map_err(|e| io_err(p, e))?;
            print!("{table}");
        }
        None => print!("{doc}"),
    }
    Ok(())
}

fn cmd_field_info(spec: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    let k = load(spec)?;
    let r2 = k.local_degrees().iter().filter(|d| **d == 2).count();
    let info = json!({
        "label": k.label,
        "degree": k.n,
        "signature": [k.n - 2 * r2, r2],
        "disc": k.disc.to_string(),
        "unit_rank": k.unit_rank(),
        "class_number": k.class_number(),
        "roots_of_unity": k.mu.len(),
    });
    if let Some(p) = out {
        fs::write(p, field_to_string(&k)).map_err(|e| io_err(p, e))?;
    }
    print!("{}", pretty(&info));
    Ok(())
}

fn cmd_field_verify(path: &Path) -> Result<(), CliError> {
    if !path.is_file() {
        return Err(CliError::Usage(format!("no such file: {}", path.display())));
    }
    let k = load_field(path).map_err(|e| CliError::Fixture(format!("{}: {e}", path.display())))?;
    println!(
        "ok: {} (degree {}, unit rank {}, class number {}) verified",
        k.label,
        k.n,
        k.unit_rank(),
        k.class_number()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("{}", CliError::Usage("--threads must be positive".into()));
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let res = match &cli.cmd {
        Cmd::Compute(c) => cmd_compute(c),
        Cmd::Units(c) => cmd_units(c),
        Cmd::Ps(c) => cmd_ps(c),
        Cmd::Bench { cfg, methods } => cmd_bench(cfg, methods),
        Cmd::FieldInfo { field, out } => cmd_field_info(field, out),
        Cmd::FieldVerify { path } => cmd_field_verify(path),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
