//! Command-line front end. Every subcommand writes machine-readable output and
//! maps failures onto stable exit codes.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::arith::IntPoly;
use crate::census;
use crate::error::{Error, Result};
use crate::measures;
use crate::orders::{ConvenienceCertificate, FieldContext};
use crate::ppav::{self, Family, StratumReport};
use crate::weil::IsogenyClassSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INVALID_WEIL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "PPAV_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "strata",
    version,
    about = "Polarized abelian varieties in ordinary isogeny classes"
)]
pub struct Cli {
    /// Cap on worker threads (default: PPAV_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a Weil polynomial and report orders, ratios and certificates.
    Analyze(AnalyzeArgs),
    /// Enumerate ordinary elliptic isogeny classes over F_p.
    EcCensus(CensusArgs),
    /// Convenience certificate for an order read from JSON.
    Convenient(ConvenientArgs),
    /// Normalizing constants and density tables.
    Measures(MeasuresArgs),
    /// Search for an elliptic class with small minimal-stratum share.
    FindHeavy(FindHeavyArgs),
    /// Sweep an explicit quartic family over primes p = 7 mod 8.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Coefficients c0,c1,...,c2n in ascending order of degree.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub weil: Vec<String>,
    #[arg(long)]
    pub q: String,
    /// Emit JSON instead of a text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = census::DEFAULT_BINS)]
    pub bins: usize,
    /// Per-trace CSV; the summary JSON always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the sorted h/H scan as JSON.
    #[arg(long)]
    pub minus_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvenientArgs {
    #[arg(long)]
    pub order_file: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    #[arg(long)]
    pub n: usize,
    /// Grid points per axis for the density table.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Density CSV destination; without it a requested grid goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FindHeavyArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub d0: i64,
    #[arg(long, default_value_t = 10_000)]
    pub limit: u64,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub pmax: u64,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotWeilShape(_) | Error::InvalidWeil(_) => EXIT_INVALID_WEIL,
        Error::Io(_) => EXIT_IO,
        Error::Csv(c) if c.is_io_error() => EXIT_IO,
        Error::Json(j) if j.is_io() => EXIT_IO,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_DOMAIN,
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads(requested: Option<usize>) {
    let n = requested.or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok());
    if let Some(n) = n.filter(|&n| n > 0) {
        // a pool built earlier in the process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    configure_threads(cli.threads);
    match &cli.command {
        Command::Analyze(a) => analyze(a, out),
        Command::EcCensus(a) => ec_census(a, out),
        Command::Convenient(a) => convenient(&a.order_file, out),
        Command::Measures(a) => measures_cmd(a, out),
        Command::FindHeavy(a) => {
            let heavy = ppav::find_heavy_isogeny_class(a.m, a.d0, a.limit)?;
            write_json(out, &heavy)
        }
        Command::Examples(a) => {
            let members = ppav::family_sweep(a.family, a.pmax)?;
            write_json(out, &members)
        }
    }
}

fn write_json<W: Write, T: Serialize + ?Sized>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Domain(format!("{what}: {s:?} is not an integer")))
}

/// Everything `analyze` reports for one isogeny class.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub spec: IsogenyClassSpec,
    pub is_weil: bool,
    pub is_simple: bool,
    pub is_ordinary: bool,
    /// Order-file JSON of `Z[pi, pi-bar]`.
    pub minimal_order: Value,
    pub convenience: ConvenienceCertificate,
    #[serde(serialize_with = "crate::serde_util::f64_17")]
    pub h_minus_estimate: f64,
    pub strata: Vec<StratumReport>,
}

pub fn analysis_report(f: IntPoly, q: BigInt) -> Result<AnalysisReport> {
    let spec = IsogenyClassSpec::simple_ordinary(f, q)?;
    let ctx = FieldContext::new(&spec)?;
    let order = ctx.minimal_order()?;
    Ok(AnalysisReport {
        is_weil: true,
        is_simple: true,
        is_ordinary: true,
        minimal_order: ctx.lattice_to_json(&order),
        convenience: ctx.convenient_certificate(&order)?,
        h_minus_estimate: ppav::h_minus_estimate(&spec)?,
        strata: ppav::stratum_reports(&spec)?,
        spec,
    })
}

fn analyze<W: Write>(a: &AnalyzeArgs, out: &mut W) -> Result<()> {
    let coeffs = a
        .weil
        .iter()
        .map(|c| parse_int(c, "--weil"))
        .collect::<Result<Vec<_>>>()?;
    let q = parse_int(&a.q, "--q")?;
    let report = analysis_report(IntPoly::new(coeffs), q)?;
    if a.json {
        return write_json(out, &report);
    }
    let s = &report.spec;
    writeln!(out, "f = {}  q = {}  n = {}", s.f(), s.q(), s.n())?;
    writeln!(out, "real Weil polynomial g = {}", s.g())?;
    let angles: Vec<String> = s.angles().iter().map(|t| format!("{t:.10}")).collect();
    writeln!(out, "angles = [{}]", angles.join(", "))?;
    writeln!(
        out,
        "weil = {}  simple = {}  ordinary = {}",
        report.is_weil, report.is_simple, report.is_ordinary
    )?;
    writeln!(out, "minimal order = {}", report.minimal_order)?;
    let c = &report.convenience;
    writeln!(
        out,
        "convenient = {}  (stable = {}, real subring Gorenstein = {}, imaginary index = {})",
        c.is_convenient, c.stable_under_conjugation, c.real_subring_gorenstein, c.pure_imaginary_index
    )?;
    writeln!(out, "h- estimate = {:.6}", report.h_minus_estimate)?;
    for r in &report.strata {
        writeln!(out, "stratum {}:", r.stratum)?;
        writeln!(out, "  ratio exact = {}  trig = {:.6}", r.ratio_exact, r.ratio_trig)?;
        if let Some(count) = &r.exact_count {
            writeln!(out, "  exact count = {count}")?;
        }
        if let Some(est) = r.estimate {
            writeln!(out, "  estimate = {est:.6}")?;
        }
        writeln!(
            out,
            "  surjectivity = {}  odd ramified = {}  unit index = {}",
            r.surjectivity, r.odd_ramified, r.unit_index_real
        )?;
        match &r.polarizations_per_variety {
            Some(k) => writeln!(out, "  polarizations per variety = {k}")?,
            None => writeln!(out, "  polarizations per variety = unknown")?,
        }
    }
    Ok(())
}

fn ec_census<W: Write>(a: &CensusArgs, out: &mut W) -> Result<()> {
    let rows = census::enumerate_ec(a.p)?;
    let summary = census::summarize(&rows, a.bins)?;
    if let Some(path) = &a.out {
        census::write_rows_csv(&rows, create(path)?)?;
    }
    if let Some(path) = &a.minus_out {
        let mut w = create(path)?;
        write_json(&mut w, &census::minus_fraction_scan(a.p)?)?;
        w.flush()?;
    }
    write_json(out, &summary)
}

/// Output of `convenient`: the certificate plus the Gorenstein test of `R` itself.
#[derive(Debug, Serialize)]
pub struct ConvenientOutput {
    #[serde(flatten)]
    pub certificate: ConvenienceCertificate,
    pub is_gorenstein: bool,
}

pub fn convenient_output(path: &Path) -> Result<ConvenientOutput> {
    let (ctx, order) = FieldContext::read_order_file(path)?;
    Ok(ConvenientOutput {
        certificate: ctx.convenient_certificate(&order)?,
        is_gorenstein: order.is_gorenstein()?,
    })
}

fn convenient<W: Write>(path: &Path, out: &mut W) -> Result<()> {
    write_json(out, &convenient_output(path)?)
}

fn measures_cmd<W: Write>(a: &MeasuresArgs, out: &mut W) -> Result<()> {
    let table = match (a.grid, &a.out) {
        (Some(g), _) => Some(measures::density_table(a.n, g)?),
        (None, Some(_)) => Some(measures::density_table(a.n, 50)?),
        (None, None) => None,
    };
    match (&a.out, table) {
        (Some(path), Some(rows)) => {
            measures::write_density_csv(&rows, create(path)?)?;
            write_json(out, &measures::measure_spec(a.n)?)
        }
        (None, Some(rows)) => measures::write_density_csv(&rows, out),
        _ => write_json(out, &measures::measure_spec(a.n)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<()>, String) {
        let cli = Cli::try_parse_from(std::iter::once("strata").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = run(&cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn analyze_quartic() {
        let (r, text) = run_args(&["analyze", "--weil", "529,-138,32,-6,1", "--q", "23", "--json"]);
        r.unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["strata"][0]["ratio_exact"], "255024");
        assert_eq!(v["convenience"]["is_convenient"], true);
    }

    #[test]
    fn analyze_elliptic() {
        let (r, text) = run_args(&["analyze", "--weil", "5,-3,1", "--q", "5", "--json"]);
        r.unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let strata = v["strata"].as_array().unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(strata[0]["exact_count"], "1");
    }

    #[test]
    fn exit_codes() {
        let (r, _) = run_args(&["analyze", "--weil", "4,0,5,0,1", "--q", "2"]);
        assert_eq!(exit_code(&r.unwrap_err()), EXIT_INVALID_WEIL);
        let (r, _) = run_args(&["analyze", "--weil", "4,x,1", "--q", "2"]);
        assert_eq!(exit_code(&r.unwrap_err()), EXIT_DOMAIN);
        let (r, _) = run_args(&["analyze", "--weil", "5,-3,1", "--q", "6"]);
        assert_eq!(exit_code(&r.unwrap_err()), EXIT_DOMAIN);
        let (r, _) = run_args(&["convenient", "--order-file", "/nonexistent/order.json"]);
        assert_eq!(exit_code(&r.unwrap_err()), EXIT_IO);
        let (r, _) = run_args(&["ec-census", "--p", "100"]);
        assert_eq!(exit_code(&r.unwrap_err()), EXIT_DOMAIN);
        assert!(Cli::try_parse_from(["strata", "measures", "--n", "1", "--bogus"]).is_err());
    }

    #[test]
    fn shipped_order_file_matches_construction() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ex-inconvenient.json");
        let shipped: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let (ctx, order) = crate::orders::inconvenient_example().unwrap();
        assert_eq!(shipped, ctx.lattice_to_json(&order));
        let out = convenient_output(&path).unwrap();
        assert!(!out.certificate.is_convenient);
        assert_eq!(out.certificate.pure_imaginary_index, BigInt::from(2));
        assert!(out.is_gorenstein);
    }
}
