//! The `planepart` command line: table reproduction, zero grids,
//! verification sweeps, bound checks, asymptotics and the pp cache.
//!
//! Data goes to the output stream and progress to the error stream. Exit
//! codes: 0 success, 1 a FAILS where HOLDS is predicted, 2 usage or
//! resource error, 3 UNCERTAIN.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use output::{Dataset, Format, Layout, OUTPUT_SCHEMA_VERSION};

use crate::asymptotics::{expansion_check_corollary, expansion_check_konkav, wright_constants, wright_estimate};
use crate::ball::{Ball, RoundDir};
use crate::divisor::{check_sigma2_even_logconcave, sigma2_table};
use crate::error::{Error, Result};
use crate::family::{check_monotone, generate_family_capped, PolyFamily};
use crate::lab::{
    bo_zero_grid, cft_zero_grid, complex_zero_rows, even_a_coefficient_scan, final_step_threshold, minimal_sums_table,
    pp_sums_table, pp_sums_table_plain, turan_poly, verify_bo_poly, verify_bo_pp, verify_logconcave_pp,
    FinalStepKind, PairRegion, PpValues, ZeroEntry, ZeroFamily,
};
use crate::partitions::{
    cache_file_name, find_cached, load_table, pp_ball, pp_exact_capped, read_header, save_table, PPTable,
    DEFAULT_BALL_PRECISION, DEFAULT_MEM_CAP,
};
use crate::report::{IneqReport, Record, Verdict};
use crate::roots::largest_positive_root;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNCERTAIN: i32 = 3;

pub const CACHE_ENV: &str = "PLANEPART_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "planepart", version, about = "Plane partitions, their polynomials, and the inequalities between them")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory holding cached pp tables.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Memory cap for exact tables, in bytes; K, M, G suffixes allowed.
    #[arg(long, global = true, value_parser = parse_bytes, default_value_t = DEFAULT_MEM_CAP)]
    mem_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a table of values.
    #[command(subcommand)]
    Table(TableCmd),
    /// Largest real zeros and complex zero data.
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// Run an inequality sweep.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Thresholds of the bound polynomials.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Asymptotic formula and expansion checks.
    #[command(subcommand)]
    Asym(AsymCmd),
    /// Manage cached pp tables.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Debug, Subcommand)]
enum TableCmd {
    /// pp(0..=max).
    Pp {
        #[arg(long, default_value_t = 10)]
        max: usize,
    },
    /// σ₂(1..=max).
    Sigma2 {
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
    /// P_1..P_max.
    Polys {
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
    /// Δ_{a+1,a−1} for a_min ≤ a ≤ a_max.
    TuranPolys {
        #[arg(long, default_value_t = 2)]
        a_min: usize,
        #[arg(long, default_value_t = 5)]
        a_max: usize,
    },
    /// Σ_k (P_k(x)P_b(x) − P_{k+b}(x))₋ for b = 1..=b_max.
    MinimalSums {
        #[arg(long, default_value = "2", value_parser = parse_rational)]
        x: BigRational,
        #[arg(long, default_value_t = 10)]
        b_max: usize,
    },
    /// Σ_k (pp(k)pp(b) − pp(k+b))₋ for b = 2..=b_max.
    PpSums {
        #[arg(long, default_value_t = 9)]
        b_max: usize,
        /// Sum the differences without taking negative parts.
        #[arg(long)]
        plain: bool,
    },
}

#[derive(Debug, Args)]
struct ComplexArgs {
    /// Emit every exported complex zero (a, b, re, im, kind).
    #[arg(long)]
    emit_complex: bool,
    /// Starting working precision for complex zeros, in bits.
    #[arg(long, default_value_t = 128)]
    precision: u64,
}

#[derive(Debug, Subcommand)]
enum ZerosCmd {
    /// Largest real zeros of P_{a,b}.
    Bo {
        #[arg(long, default_value_t = 12)]
        a_max: usize,
        #[arg(long, default_value_t = 12)]
        b_max: usize,
        #[arg(long, default_value_t = 1)]
        decimals: usize,
    },
    /// Largest positive real zeros of Δ_{a,b}, or with --emit-complex the
    /// zeros of largest real part for b = 2, 3, 4.
    Cft {
        #[arg(long, default_value_t = 2)]
        a_min: usize,
        #[arg(long, default_value_t = 20)]
        a_max: usize,
        #[arg(long, default_value_t = 2)]
        decimals: usize,
        #[command(flatten)]
        complex: ComplexArgs,
    },
    /// Largest positive real zeros of Δ_{a+1,a−1}, or with --emit-complex
    /// all its zeros with positive real part.
    Turan {
        #[arg(long, default_value_t = 1)]
        a_min: usize,
        #[arg(long, default_value_t = 20)]
        a_max: usize,
        #[arg(long, default_value_t = 4)]
        decimals: usize,
        #[command(flatten)]
        complex: ComplexArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Ball,
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// pp(a)pp(b) > pp(a+b) for 2 ≤ b ≤ a, sum_min ≤ a+b ≤ sum_max.
    BoPp {
        #[arg(long, default_value_t = 12)]
        sum_min: usize,
        #[arg(long, default_value_t = 472)]
        sum_max: usize,
    },
    /// pp(n)² > pp(n−1)pp(n+1) for n_min ≤ n ≤ n_max.
    LogconcavePp {
        #[arg(long, default_value_t = 12)]
        n_min: usize,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
        backend: BackendArg,
        /// Ball precision in bits.
        #[arg(long, default_value_t = DEFAULT_BALL_PRECISION)]
        precision: u64,
    },
    /// pp(n+1) < 3pp(n) for 1 ≤ n ≤ max.
    StepBound {
        #[arg(long, default_value_t = 1000)]
        max: usize,
    },
    /// P_{a,b}(x) > 0 for 1 ≤ b ≤ a, b ≥ b_min, sum_min ≤ a+b ≤ sum_max.
    BoPoly {
        #[arg(long, default_value = "2", value_parser = parse_rational)]
        x: BigRational,
        #[arg(long, default_value_t = 12)]
        sum_min: usize,
        #[arg(long, default_value_t = 52)]
        sum_max: usize,
        #[arg(long, default_value_t = 1)]
        b_min: usize,
    },
    /// Coefficients of Δ_{a+1,a−1} for 2 ≤ a ≤ a_max.
    EvenCoeffs {
        #[arg(long, default_value_t = 200)]
        a_max: usize,
    },
    /// P_{n+1}(x) > P_n(x) for 1 ≤ n ≤ max.
    Monotone {
        #[arg(long, default_value_t = 50)]
        max: usize,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        x: BigRational,
    },
    /// σ₂(a)² > σ₂(a−1)σ₂(a+1) for even a ≤ max.
    Sigma2Even {
        #[arg(long, default_value_t = 1000)]
        max: usize,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    /// Least integer from which a bound polynomial stays positive.
    FinalStep {
        /// grad7, x2final, pp-final, pp-final-as-printed or all.
        #[arg(long, default_value = "all")]
        kind: String,
    },
}

#[derive(Debug, Subcommand)]
enum AsymCmd {
    /// Wright's estimate, compared with pp(n) when n ≤ compare_max.
    Wright {
        #[arg(long, value_delimiter = ',', default_values_t = vec![100u64, 1000, 10000])]
        n: Vec<u64>,
        #[arg(long, default_value_t = 30)]
        digits: usize,
        /// Largest n for which pp(n) is computed exactly for the ratio.
        #[arg(long, default_value_t = 20_000)]
        compare_max: u64,
    },
    /// Residual of the second difference of n^s on a log-uniform grid.
    Konkav {
        #[arg(long, default_value = "2/3", value_parser = parse_rational)]
        s: BigRational,
        #[arg(long, default_value_t = 100)]
        n_min: u64,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value_t = 128)]
        precision: u64,
    },
    /// Two-sided bound on exp(C1(2n^(2/3) − (n+1)^(2/3) − (n−1)^(2/3))).
    Corollary {
        /// "wright" for 3ζ(3)^(1/3)/2^(2/3), or a positive rational.
        #[arg(long, default_value = "wright")]
        c1: String,
        #[arg(long, default_value_t = 1000)]
        n_min: u64,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
        #[arg(long, default_value_t = 128)]
        precision: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CacheCmd {
    /// Compute pp(0..=max) and store it in the cache directory.
    Build {
        #[arg(long)]
        max: usize,
    },
    /// List the cached tables.
    Info,
    /// Load every cached table and check the recurrence at every index.
    Verify,
}

fn parse_bytes(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    let (digits, mult) = match t.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&t[..t.len() - 1], 1u64 << 10),
        Some('M') => (&t[..t.len() - 1], 1 << 20),
        Some('G') => (&t[..t.len() - 1], 1 << 30),
        Some('T') => (&t[..t.len() - 1], 1 << 40),
        _ => (t, 1),
    };
    let v: u64 = digits.parse().map_err(|e| format!("bad byte count {s:?}: {e}"))?;
    v.checked_mul(mult).ok_or_else(|| format!("byte count {s:?} overflows"))
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = t.strip_prefix('-').map_or((false, t), |r| (true, r));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !format!("{int}{frac}").bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a rational number: {s:?}"));
    }
    let num: BigInt = format!("{int}{frac}").parse().map_err(|e| format!("{s:?}: {e}"))?;
    let v = BigRational::new(num, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -v } else { v })
}

/// What a command produced: data plus the exit code it implies.
struct Outcome {
    data: Dataset,
    code: i32,
}

impl Outcome {
    fn ok(data: Dataset) -> Outcome {
        Outcome { data, code: EXIT_OK }
    }
}

struct Ctx<'a> {
    format: Format,
    cache_dir: Option<PathBuf>,
    mem_cap: u64,
    err: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn progress(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", msg.as_ref());
    }

    /// pp(0..=n), from the smallest cached table covering n if any.
    fn pp_table(&mut self, n: usize) -> Result<PPTable> {
        if let Some(dir) = self.cache_dir.clone() {
            if let Some(path) = find_cached(&dir, n) {
                self.progress(format!("loading {}", path.display()));
                return load_table(&path)?.truncated(n);
            }
        }
        self.progress(format!("computing pp(0..={n})"));
        pp_exact_capped(n, self.mem_cap)
    }

    fn family(&mut self, n: usize) -> Result<PolyFamily> {
        self.progress(format!("generating P_0..P_{n}"));
        generate_family_capped(n, self.mem_cap)
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { format: cli.format, cache_dir: cli.cache_dir.clone(), mem_cap: cli.mem_cap, err };
    let pool = match cli.jobs {
        Some(0) => {
            ctx.progress("error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            ctx.progress(format!("error: cannot start worker threads: {e}"));
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli.command, &mut ctx));
    match result.and_then(|o| o.data.write(ctx.format, out).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            ctx.progress(format!("error: {e}"));
            match e {
                Error::Inconclusive(_) => EXIT_UNCERTAIN,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    match command {
        Command::Table(t) => table(t, ctx),
        Command::Zeros(z) => zeros(z, ctx),
        Command::Verify(v) => verify(v, ctx),
        Command::Bounds(BoundsCmd::FinalStep { kind }) => final_step(&kind),
        Command::Asym(a) => asym(a, ctx),
        Command::Cache(c) => cache(c, ctx),
    }
}

fn table(cmd: TableCmd, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    let data = match cmd {
        TableCmd::Pp { max } => {
            let t = ctx.pp_table(max)?;
            let mut d = Dataset::new("pp", &["n", "pp"]);
            for (n, v) in t.values().iter().enumerate() {
                d.push(vec![n.to_string(), v.to_string()]);
            }
            d
        }
        TableCmd::Sigma2 { max } => {
            let s = sigma2_table(max)?;
            let mut d = Dataset::new("sigma2", &["n", "sigma2"]);
            for n in 1..=max {
                d.push(vec![n.to_string(), s.get(n).to_string()]);
            }
            d
        }
        TableCmd::Polys { max } => {
            let f = ctx.family(max)?;
            let mut d = Dataset::new("polys", &["n", "P_n(x)"]);
            for n in 1..=max {
                d.push(vec![n.to_string(), f.get(n).to_string()]);
            }
            d.layout = Layout::Rows;
            d
        }
        TableCmd::TuranPolys { a_min, a_max } => {
            if a_min == 0 || a_min > a_max {
                return Err(Error::InvalidArgument(format!("empty or invalid range {a_min}..={a_max}")));
            }
            let f = ctx.family(a_max + 1)?;
            let mut d = Dataset::new("turan-polys", &["a", "Delta_{a+1,a-1}(x)"]);
            for a in a_min..=a_max {
                d.push(vec![a.to_string(), turan_poly(&f, a)?.to_string()]);
            }
            d
        }
        TableCmd::MinimalSums { x, b_max } => {
            let f = ctx.family(11)?;
            let sums = minimal_sums_table(&f, &x, b_max)?;
            let mut d = Dataset::new(format!("minimal-sums at x={x}"), &["b", "sum", "rounded"]);
            for (b, s) in sums.iter().enumerate() {
                d.push(vec![(b + 1).to_string(), s.to_string(), s.round().to_integer().to_string()]);
            }
            d
        }
        TableCmd::PpSums { b_max, plain } => {
            let t = ctx.pp_table(11)?;
            let sums = if plain { pp_sums_table_plain(&t, b_max)? } else { pp_sums_table(&t, b_max)? };
            let mut d = Dataset::new(if plain { "pp-sums-plain" } else { "pp-sums" }, &["b", "sum"]);
            for (i, s) in sums.iter().enumerate() {
                d.push(vec![(i + 2).to_string(), s.to_string()]);
            }
            d
        }
    };
    Ok(Outcome::ok(data))
}

fn zero_cell(e: &ZeroEntry) -> String {
    e.value.clone().unwrap_or_else(|| "--".into())
}

fn zero_grid(title: &str, entries: &[ZeroEntry]) -> Dataset {
    let mut d = Dataset::new(title, &["a", "b", "zero"]);
    for e in entries {
        d.push(vec![e.a.to_string(), e.b.to_string(), zero_cell(e)]);
    }
    d.layout = Layout::Grid { row: 0, col: 1, value: 2 };
    d
}

fn complex_rows(
    ctx: &mut Ctx<'_>,
    which: ZeroFamily,
    a_min: usize,
    a_max: usize,
    precision: u64,
) -> Result<Outcome> {
    let top = if which == ZeroFamily::Turan { a_max + 1 } else { a_max };
    let f = ctx.family(top)?;
    ctx.progress(format!("complex zeros for a = {a_min}..={a_max}"));
    let (rows, uncertain) = complex_zero_rows(&f, which, a_min, a_max, precision)?;
    let title = match which {
        ZeroFamily::Turan => "zeros of Delta_{a+1,a-1} with positive real part",
        ZeroFamily::CftLargest => "zeros of Delta_{a,b} with largest real part",
    };
    let mut d = Dataset::new(title, &["a", "b", "re", "im", "kind"]);
    for r in rows {
        let a = if which == ZeroFamily::Turan { r.a - 1 } else { r.a };
        let kind = if r.is_real { "real" } else { "complex" };
        d.push(vec![a.to_string(), r.b.to_string(), format!("{:e}", r.re), format!("{:e}", r.im), kind.into()]);
    }
    if uncertain {
        ctx.progress("warning: some zeros were not certified at the precision cap");
    }
    Ok(Outcome { data: d, code: if uncertain { EXIT_UNCERTAIN } else { EXIT_OK } })
}

fn zeros(cmd: ZerosCmd, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    match cmd {
        ZerosCmd::Bo { a_max, b_max, decimals } => {
            let f = ctx.family(a_max + b_max)?;
            let grid = bo_zero_grid(&f, a_max, b_max, decimals)?;
            Ok(Outcome::ok(zero_grid("largest real zeros of P_{a,b}", &grid)))
        }
        ZerosCmd::Cft { a_min, a_max, decimals, complex } => {
            if complex.emit_complex {
                return complex_rows(ctx, ZeroFamily::CftLargest, a_min.max(4), a_max, complex.precision);
            }
            let f = ctx.family(a_max)?;
            let grid: Vec<ZeroEntry> =
                cft_zero_grid(&f, a_max, decimals)?.into_iter().filter(|e| e.a >= a_min).collect();
            Ok(Outcome::ok(zero_grid("largest positive real zeros of Delta_{a,b}", &grid)))
        }
        ZerosCmd::Turan { a_min, a_max, decimals, complex } => {
            if complex.emit_complex {
                return complex_rows(ctx, ZeroFamily::Turan, a_min, a_max, complex.precision);
            }
            if a_min == 0 || a_min > a_max {
                return Err(Error::InvalidArgument(format!("empty or invalid range {a_min}..={a_max}")));
            }
            let f = ctx.family(a_max + 1)?;
            let tol = BigRational::new(1.into(), BigInt::from(10).pow(decimals as u32 + 3));
            let mut d = Dataset::new("largest positive real zeros of Delta_{a+1,a-1}", &["a", "zero"]);
            for a in a_min..=a_max {
                let enc = largest_positive_root(&turan_poly(&f, a)?, &tol)?;
                let cell = enc.map_or_else(
                    || "--".to_string(),
                    |e| e.rounded(decimals).unwrap_or_else(|| crate::roots::round_half_up(&e.midpoint(), decimals)),
                );
                d.push(vec![a.to_string(), cell]);
            }
            Ok(Outcome::ok(d))
        }
    }
}

/// Report records as rows; `predicted(record)` says whether the theory
/// predicts HOLDS there.
fn report_outcome(report: &IneqReport, predicted: impl Fn(&Record) -> bool) -> Outcome {
    let mut d = Dataset::new(format!("{} {}", report.kind, report.range), &["a", "b", "verdict", "witness"]);
    for r in &report.records {
        let witness = r.witness.as_ref().map_or_else(String::new, ToString::to_string);
        d.push(vec![r.a.to_string(), r.b.map_or_else(String::new, |b| b.to_string()), r.verdict.to_string(), witness]);
    }
    let t = report.tally();
    d.note(format!(
        "{} {} ({:?}): {} HOLDS, {} FAILS, {} EQUALITY, {} UNCERTAIN",
        report.kind, report.range, report.backend, t.holds, t.fails, t.equality, t.uncertain
    ));
    d.layout = Layout::Filtered { column: 2, keep_out: Verdict::Holds.to_string() };
    let unexpected = report
        .records
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Fails | Verdict::Equality) && predicted(r));
    let code = if unexpected {
        EXIT_FAILS
    } else if t.uncertain > 0 {
        EXIT_UNCERTAIN
    } else {
        EXIT_OK
    };
    Outcome { data: d, code }
}

fn verify(cmd: VerifyCmd, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    match cmd {
        VerifyCmd::BoPp { sum_min, sum_max } => {
            let t = ctx.pp_table(sum_max.max(11))?;
            let sweep = verify_bo_pp(&t, sum_min, sum_max)?;
            let known = sweep.exceptions.clone();
            ctx.progress(format!("failing pairs below a+b = 12: {known:?}"));
            Ok(report_outcome(&sweep.report, |r| {
                let pair = (r.a as usize, r.b.unwrap_or(0) as usize);
                pair.0 + pair.1 >= 12 || !known.contains(&pair)
            }))
        }
        VerifyCmd::LogconcavePp { n_min, n_max, backend, precision } => {
            let report = match backend {
                BackendArg::Exact => {
                    let t = ctx.pp_table(n_max + 1)?;
                    verify_logconcave_pp(PpValues::Exact(&t), n_min, n_max)?
                }
                BackendArg::Ball => {
                    ctx.progress(format!("computing pp balls up to {} at {precision} bits", n_max + 1));
                    let t = pp_ball(n_max + 1, precision)?;
                    verify_logconcave_pp(PpValues::Ball(&t), n_min, n_max)?
                }
            };
            Ok(report_outcome(&report, |r| r.a >= 12 || r.a % 2 == 0))
        }
        VerifyCmd::StepBound { max } => {
            if max == 0 {
                return Err(Error::InvalidArgument("step bound needs --max >= 1".into()));
            }
            let t = ctx.pp_table(max + 1)?;
            let report = crate::partitions::step_bound_report(&t, 1, max);
            Ok(report_outcome(&report, |r| r.a != 1))
        }
        VerifyCmd::BoPoly { x, sum_min, sum_max, b_min } => {
            let f = ctx.family(sum_max)?;
            let report = verify_bo_poly(&f, &x, PairRegion::new(sum_min, sum_max, b_min))?;
            let five = BigRational::from_integer(5.into());
            let two = BigRational::from_integer(2.into());
            Ok(report_outcome(&report, |r| x > five || (x >= two && r.a + r.b.unwrap_or(0) >= 12)))
        }
        VerifyCmd::EvenCoeffs { a_max } => {
            let f = ctx.family(a_max + 1)?;
            let report = even_a_coefficient_scan(&f, a_max)?;
            Ok(report_outcome(&report, |r| r.a % 2 == 0))
        }
        VerifyCmd::Monotone { max, x } => {
            let f = ctx.family(max + 1)?;
            let report = check_monotone(&f, max, &x)?;
            Ok(report_outcome(&report, |_| true))
        }
        VerifyCmd::Sigma2Even { max } => {
            let report = check_sigma2_even_logconcave(max)?;
            Ok(report_outcome(&report, |_| true))
        }
    }
}

fn final_step(kind: &str) -> Result<Outcome> {
    let kinds: Vec<FinalStepKind> =
        if kind == "all" { FinalStepKind::ALL.to_vec() } else { vec![kind.parse::<FinalStepKind>()?] };
    let mut d = Dataset::new("final-step thresholds", &["kind", "largest_root", "threshold", "claimed", "confirmed"]);
    let mut code = EXIT_OK;
    for k in kinds {
        let r = final_step_threshold(k)?;
        let root = r.largest_root.as_ref().map_or_else(|| "--".to_string(), |e| crate::roots::round_half_up(&e.midpoint(), 6));
        if !r.confirmed {
            code = code.max(EXIT_UNCERTAIN);
        }
        if k != FinalStepKind::PpFinalAsPrinted && r.threshold > k.claimed_threshold() {
            code = EXIT_FAILS;
        }
        d.push(vec![
            k.to_string(),
            root,
            r.threshold.to_string(),
            k.claimed_threshold().to_string(),
            r.confirmed.to_string(),
        ]);
    }
    Ok(Outcome { data: d, code })
}

fn sci(b: &Ball, digits: usize) -> String {
    b.mid().to_sci(digits, RoundDir::Down)
}

fn asym(cmd: AsymCmd, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    match cmd {
        AsymCmd::Wright { n, digits, compare_max } => {
            let top = n.iter().copied().filter(|&v| v <= compare_max).max();
            let table = match top {
                Some(t) => Some(ctx.pp_table(t as usize)?),
                None => None,
            };
            let mut d = Dataset::new("Wright's estimate", &["n", "estimate", "pp", "ratio"]);
            for v in n {
                let e = wright_estimate(v, digits)?;
                let (pp, ratio) = match &table {
                    Some(t) if v <= compare_max => {
                        let exact = t.get(v as usize);
                        let prec = e.estimate.mid().bits().max(64) + 64;
                        let ratio = Ball::from_biguint(exact, prec)
                            .div(&e.estimate, prec)
                            .ok_or_else(|| Error::Inconclusive("estimate encloses zero".into()))?;
                        (exact.to_string(), sci(&ratio, 20))
                    }
                    _ => (String::new(), String::new()),
                };
                d.push(vec![v.to_string(), sci(&e.estimate, digits), pp, ratio]);
            }
            let c = wright_constants(digits);
            d.note(format!("zeta(3) = {}", sci(&c.zeta3, digits)));
            d.note(format!("zeta'(-1) = {}", sci(&c.zeta_prime_minus_one, digits)));
            d.note(format!("C1 = {}", sci(&c.c1, digits)));
            d.note(format!("C2 = {}", sci(&c.c2, digits)));
            Ok(Outcome::ok(d))
        }
        AsymCmd::Konkav { s, n_min, n_max, precision } => {
            let r = expansion_check_konkav(&s, n_min, n_max, precision)?;
            let mut d = Dataset::new(format!("konkav residual at s={s}"), &["n", "residual"]);
            for x in &r.samples {
                d.push(vec![x.n.to_string(), sci(&x.residual, 20)]);
            }
            d.note(format!("sup |R_n| <= {:e}", r.sup_abs));
            for (start, sup) in &r.decade_sups {
                d.note(format!("decade from {start}: sup |R_n| <= {sup:e}"));
            }
            Ok(Outcome::ok(d))
        }
        AsymCmd::Corollary { c1, n_min, n_max, precision } => {
            let (c1_ball, is_wright) = if c1 == "wright" {
                (wright_constants(16).c1.clone(), true)
            } else {
                let q = parse_rational(&c1).map_err(Error::InvalidArgument)?;
                if !q.is_positive() {
                    return Err(Error::InvalidArgument(format!("C1 must be positive, got {c1}")));
                }
                (Ball::from_rational(&q, precision.max(64) + 64), false)
            };
            let r = expansion_check_corollary(&c1_ball, n_min, n_max, precision)?;
            let mut d = Dataset::new("corollary bounds", &["n", "lower", "middle", "upper", "verdict"]);
            for row in &r.rows {
                d.push(vec![
                    row.n.to_string(),
                    sci(&row.lower, 20),
                    sci(&row.middle, 20),
                    sci(&row.upper, 20),
                    row.verdict().to_string(),
                ]);
            }
            d.note(match r.holds_from {
                Some(n) => format!("both bounds hold from n = {n} through {n_max}"),
                None => format!("bounds fail or are undecided at n = {n_max}"),
            });
            let verdicts: Vec<Verdict> = r.rows.iter().map(|x| x.verdict()).collect();
            let code = if is_wright && verdicts.contains(&Verdict::Fails) {
                EXIT_FAILS
            } else if verdicts.contains(&Verdict::Uncertain) {
                EXIT_UNCERTAIN
            } else {
                EXIT_OK
            };
            Ok(Outcome { data: d, code })
        }
    }
}

fn cache_dir(ctx: &Ctx<'_>) -> Result<PathBuf> {
    ctx.cache_dir
        .clone()
        .ok_or_else(|| Error::InvalidArgument(format!("no cache directory: pass --cache-dir or set {CACHE_ENV}")))
}

fn cached_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<(usize, PathBuf)> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let n: usize = name.strip_prefix("pp-")?.strip_suffix(".txt")?.parse().ok()?;
            Some((n, e.path()))
        })
        .collect();
    files.sort();
    Ok(files.into_iter().map(|(_, p)| p).collect())
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())
}

fn cache(cmd: CacheCmd, ctx: &mut Ctx<'_>) -> Result<Outcome> {
    let dir = cache_dir(ctx)?;
    match cmd {
        CacheCmd::Build { max } => {
            std::fs::create_dir_all(&dir)?;
            ctx.progress(format!("computing pp(0..={max})"));
            let t = pp_exact_capped(max, ctx.mem_cap)?;
            let path = dir.join(cache_file_name(max));
            save_table(&t, &path)?;
            let mut d = Dataset::new("cache build", &["file", "n", "sigma2sha"]);
            d.push(vec![file_name(&path), max.to_string(), t.sigma2_sha().to_string()]);
            Ok(Outcome::ok(d))
        }
        CacheCmd::Info => {
            let mut d = Dataset::new("cache info", &["file", "version", "n", "sigma2sha"]);
            for p in cached_files(&dir)? {
                let h = read_header(&p)?;
                d.push(vec![file_name(&p), h.version.to_string(), h.n.to_string(), h.sigma2_sha]);
            }
            Ok(Outcome::ok(d))
        }
        CacheCmd::Verify => {
            let mut d = Dataset::new("cache verify", &["file", "status"]);
            let mut code = EXIT_OK;
            for p in cached_files(&dir)? {
                ctx.progress(format!("verifying {}", p.display()));
                let status = match load_table(&p).and_then(|t| t.verify_recurrence()) {
                    Ok(None) => "ok".to_string(),
                    Ok(Some(n)) => format!("recurrence fails at {n}"),
                    Err(e) => e.to_string(),
                };
                if status != "ok" {
                    code = EXIT_FAILS;
                }
                d.push(vec![file_name(&p), status]);
            }
            Ok(Outcome { data: d, code })
        }
    }
}
