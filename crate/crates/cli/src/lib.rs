//! Command-line front end: `sample`, `verify`, `bench` and `field`.
//!
//! Exit codes are 0 on success, 1 when a check fails or something breaks
//! internally, and 2 for invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use sl2design::bases::{build_selfdual_basis, check_admissible, hankel_generator, BasisSpec};
use sl2design::circuit::CliffordCircuit;
use sl2design::sampler::{enumerate_ensemble, parse_sample, sample_in, basis_for, Construction};
use sl2design::sl2::Sl2Element;
use sl2design::verify::{bilateral_twirl_check, check_segments, pauli_mixing_check, Weight};
use sl2design::{irreducible_poly, BitPoly, FieldCtx, FieldElement, MulStrategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Version tag of the JSON report schema.
pub const REPORT_SCHEMA: &str = "v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] sl2design::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sl2design::Error as E;
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Core(
                E::Domain(_)
                | E::NotAdmissible { .. }
                | E::TooLarge { .. }
                | E::Parse { .. }
                | E::Dimension { .. }
                | E::CtxMismatch { .. },
            ) => EXIT_INVALID,
            _ => EXIT_FAIL,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "sl2design", version, about = "Sample and verify exact unitary 2-designs built from SL2(GF(2^n)) circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit sampled circuits in the circuit text format.
    Sample(SampleArgs),
    /// Check a whole small ensemble or one sampled circuit.
    Verify(VerifyArgs),
    /// Gate count, depth and ancilla table as CSV.
    Bench(BenchArgs),
    /// Field and basis facts for GF(2^n).
    Field(FieldArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "poly_recursive")]
    pub construction: Construction,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "karatsuba")]
    pub strategy: MulStrategy,
    /// Number of consecutive seeds to emit, starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Enumerate and check the whole ensemble (n <= 2).
    #[arg(long, conflicts_with = "sample")]
    pub ensemble: bool,
    /// A file written by `sample`.
    #[arg(long)]
    pub sample: Option<PathBuf>,
    /// Expected SL2 element as `alpha,beta,gamma,delta` in hex.
    #[arg(long = "against-M", requires = "sample")]
    pub against_m: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "poly_recursive")]
    pub construction: Construction,
    #[arg(long, default_value = "karatsuba")]
    pub strategy: MulStrategy,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [64usize, 128, 256, 512, 1024])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [Construction::PolyRecursive])]
    pub construction: Vec<Construction>,
    #[arg(long, value_delimiter = ',', default_values_t = [MulStrategy::Schoolbook, MulStrategy::Karatsuba])]
    pub strategy: Vec<MulStrategy>,
    /// Seeds `seed..seed+seeds` are sampled per cell and averaged.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub seeds: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "karatsuba")]
    pub strategy: MulStrategy,
    /// Multiply two elements given as `a,b` in hex.
    #[arg(long)]
    pub mul: Option<String>,
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Sample(a) => cmd_sample(&a, out).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out).map(|_| EXIT_OK),
        Command::Field(a) => cmd_field(&a, out).map(|_| EXIT_OK),
    }
}

fn pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if workers == Some(0) {
        return Err(CliError::Invalid("--workers must be at least 1".into()));
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| CliError::Internal(e.to_string()))
}

fn emit(path: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_construction(n: usize, c: Construction) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Invalid("n must be at least 1".into()));
    }
    if !c.available(n) {
        return Err(CliError::Invalid(format!("construction {c} is not available for n = {n}")));
    }
    Ok(())
}

/// Text of `count` samples for consecutive seeds, in seed order.
pub fn sample_text(
    n: usize,
    construction: Construction,
    strategy: MulStrategy,
    seed: u64,
    count: u64,
    workers: Option<usize>,
) -> CliResult<String> {
    check_construction(n, construction)?;
    if count == 0 {
        return Err(CliError::Invalid("--count must be at least 1".into()));
    }
    let basis = basis_for(n, construction, strategy)?;
    let seeds: Vec<u64> = (0..count)
        .map(|i| seed.checked_add(i).ok_or_else(|| CliError::Invalid("seed range overflows".into())))
        .collect::<CliResult<_>>()?;
    let texts: Vec<String> = pool(workers)?.install(|| {
        seeds
            .par_iter()
            .map(|&s| sample_in(&basis, construction, s, strategy).map(|d| d.to_text()))
            .collect::<sl2design::Result<_>>()
    })?;
    Ok(texts.concat())
}

pub fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = sample_text(a.n, a.construction, a.strategy, a.seed, a.count, a.workers)?;
    emit(&a.output, out, &text)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub summary: String,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub mode: &'static str,
    pub n: usize,
    pub construction: String,
    pub strategy: String,
    pub ok: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.summary);
            s.push('\n');
        }
        s.push_str(if self.ok { "PASS\n" } else { "FAIL\n" });
        s
    }
}

/// Exhaustive twirl and mixing checks over the whole ensemble.
pub fn verify_ensemble(n: usize, construction: Construction, strategy: MulStrategy) -> CliResult<VerifyReport> {
    check_construction(n, construction)?;
    let samples = enumerate_ensemble(n, construction, strategy)?;
    let w: Weight = Ratio::new(1, samples.len() as i64);
    let full: Vec<(&CliffordCircuit, Weight)> = samples.iter().map(|s| (&s.circuit, w)).collect();
    let u: Vec<(CliffordCircuit, Weight)> = samples.iter().map(|s| (s.u_part(), w)).collect();
    let twirl = bilateral_twirl_check(&full)?;
    let mixing = pauli_mixing_check(&u)?;
    let checks = vec![
        CheckResult {
            name: "bilateral-twirl".into(),
            ok: twirl.ok,
            summary: twirl.to_string(),
            counterexample: twirl.counterexample.clone(),
        },
        CheckResult {
            name: "pauli-mixing".into(),
            ok: mixing.ok,
            summary: mixing.to_string(),
            counterexample: mixing.counterexample.clone(),
        },
    ];
    Ok(VerifyReport {
        schema: REPORT_SCHEMA,
        mode: "ensemble",
        n,
        construction: construction.to_string(),
        strategy: strategy.to_string(),
        ok: checks.iter().all(|c| c.ok),
        checks,
    })
}

/// Induced-action check of a sample file against `against_m`, or against the
/// `M` recorded in the file.
pub fn verify_sample_text(text: &str, against_m: Option<&str>) -> CliResult<VerifyReport> {
    let (circuit, rec) = parse_sample(text)?;
    let m = match against_m {
        Some(s) => Sl2Element::from_hex(rec.basis.ctx(), s)?,
        None => rec.m.clone().ok_or_else(|| CliError::Invalid("file records no M; pass --against-M".into()))?,
    };
    if rec.segments.is_empty() {
        return Err(CliError::Invalid("file records no segments".into()));
    }
    let rep = check_segments(&circuit, &rec.basis, &rec.segments, &rec.vw_mod4_blocks, &m)?;
    let checks = vec![CheckResult {
        name: "induced-action".into(),
        ok: rep.ok,
        summary: rep.to_string(),
        counterexample: rep.counterexample.clone(),
    }];
    Ok(VerifyReport {
        schema: REPORT_SCHEMA,
        mode: "sample",
        n: rec.n,
        construction: rec.construction.to_string(),
        strategy: rec.strategy.to_string(),
        ok: rep.ok,
        checks,
    })
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let report = match (&a.sample, a.ensemble) {
        (Some(path), false) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            verify_sample_text(&text, a.against_m.as_deref())?
        }
        (None, true) => {
            let n = a.n.ok_or_else(|| CliError::Invalid("--ensemble needs --n".into()))?;
            verify_ensemble(n, a.construction, a.strategy)?
        }
        _ => return Err(CliError::Invalid("pass exactly one of --ensemble or --sample".into())),
    };
    let text = match a.format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    emit(&a.output, out, &text)?;
    Ok(if report.ok { EXIT_OK } else { EXIT_FAIL })
}

/// One bench row; counts are means over the cell's seeds.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub construction: String,
    pub strategy: String,
    pub gate_count: f64,
    pub depth: f64,
    pub ancillas: usize,
    pub wall_time: f64,
}

/// Rows sorted by `(n, construction, strategy)`.
pub fn bench_rows(a: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    if a.seeds == 0 {
        return Err(CliError::Invalid("--seeds must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for &n in &a.n {
        for &c in &a.construction {
            check_construction(n, c)?;
            for &s in &a.strategy {
                cells.push((n, c, s));
            }
        }
    }
    cells.sort();
    cells.dedup();
    let seeds: Vec<u64> = (a.seed..a.seed.saturating_add(a.seeds)).collect();
    pool(a.workers)?.install(|| {
        cells
            .par_iter()
            .map(|&(n, c, s)| -> CliResult<BenchRow> {
                let basis = basis_for(n, c, s)?;
                let (mut gates, mut depth, mut anc) = (0usize, 0usize, 0usize);
                let start = Instant::now();
                for &seed in &seeds {
                    let m = sample_in(&basis, c, seed, s)?.circuit.metrics();
                    gates += m.gate_count;
                    depth += m.depth;
                    anc = anc.max(m.ancilla_count);
                }
                let k = seeds.len() as f64;
                Ok(BenchRow {
                    n,
                    construction: c.to_string(),
                    strategy: s.to_string(),
                    gate_count: gates as f64 / k,
                    depth: depth as f64 / k,
                    ancillas: anc,
                    wall_time: start.elapsed().as_secs_f64() / k,
                })
            })
            .collect()
    })
}

pub fn bench_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = bench_rows(a)?;
    emit(&a.output, out, &bench_csv(&rows)?)
}

fn parse_element(ctx: &std::sync::Arc<FieldCtx>, s: &str) -> CliResult<FieldElement> {
    let p = BitPoly::from_hex(s).ok_or_else(|| CliError::Invalid(format!("bad hex `{s}`")))?;
    if p.degree().is_some_and(|d| d >= ctx.n()) {
        return Err(CliError::Invalid(format!("`{s}` does not fit in GF(2^{})", ctx.n())));
    }
    Ok(FieldElement::from_poly(ctx, &p))
}

pub fn cmd_field(a: &FieldArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.n == 0 {
        return Err(CliError::Invalid("n must be at least 1".into()));
    }
    let ctx = FieldCtx::new(a.n, a.strategy)?;
    let poly = BasisSpec::polynomial(&ctx);
    let adm = check_admissible(a.n);
    writeln!(out, "n {}", a.n)?;
    writeln!(out, "modulus {}", irreducible_poly(a.n).to_hex())?;
    let h = hankel_generator(poly.w()).ok_or_else(|| CliError::Internal("polynomial W is not Hankel".into()))?;
    let h: String = (0..h.len()).map(|i| if h.get(i) { '1' } else { '0' }).collect();
    writeln!(out, "polynomial_w_hankel {h}")?;
    writeln!(out, "admissible {} e {}", adm.admissible as u8, adm.e)?;
    if adm.admissible {
        let sd = build_selfdual_basis(a.n, a.strategy)?;
        let g = sd.generator().map(|g| g.to_string()).unwrap_or_default();
        writeln!(out, "selfdual_generator {g}")?;
        writeln!(out, "selfdual_w_identity {}", sd.w().is_identity() as u8)?;
    }
    if let Some(m) = &a.mul {
        let (x, y) = m
            .split_once(',')
            .ok_or_else(|| CliError::Invalid("--mul expects `a,b`".into()))?;
        let p = parse_element(&ctx, x)?.mul(&parse_element(&ctx, y)?)?;
        writeln!(out, "product {p}")?;
    }
    Ok(())
}
