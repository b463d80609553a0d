//! `psum`: batch verification of prime/semiprime counting identities and
//! conjecture scanning, with JSON-lines or CSV records.
//!
//! Every subcommand runs one verifier or scanner over a sweep (a `--range`
//! or a seeded `--sample` set), streams one record per argument in
//! ascending order, and prints a one-line summary to standard error. Exit
//! status: 0 when every check passed, 1 when any record is a violation or
//! inconclusive, 2 on usage or resource errors.
//!
//! Output on standard out is byte-identical for identical configuration
//! (including `--seed`); `--timings` adds per-record compute times and
//! forfeits that guarantee.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use psum_core::conjecture::{self, WindowScanner};
use psum_core::identity::{self, ParityVariant, VerificationReport};
use psum_core::prime::{self, FactorSieve, PrimeTable};
use psum_core::report::ScanTally;
use psum_core::upsilon::{self, UpsilonSummary};
use psum_core::{ScanRecord, ScanStatus};

/// Environment variable naming the prime-table cache directory.
const CACHE_DIR_ENV: &str = "PSUM_CACHE_DIR";

/// Chunk width for parallel sweeps; records are emitted in order.
const CHUNK: usize = 8_192;

/// Relative spread above which the three log-sum routes count as
/// disagreeing.
const ROUTE_AGREEMENT: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "psum",
    version,
    about = "Sieve-backed verification of prime/semiprime counting identities and conjecture scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the semiprime pair-count formula at each x (x >= 5).
    Thm1(SweepArgs),
    /// Verify the floor-log parity sum identity at each x (x >= 1).
    Thm2(SweepArgs),
    /// Reconstruct the prime count from the explicit formula and compare
    /// with the sieve (x >= 2).
    #[command(name = "pi-formula")]
    PiFormula(PiFormulaArgs),
    /// Compute the three semiprime log-sum routes at each x (x >= 2).
    Upsilon(SweepArgs),
    /// Emit the Mertens-type growth trend at checkpoint arguments
    /// (strictly increasing, each >= 16).
    Trend(TrendArgs),
    /// Scan prime windows over n (n >= 3).
    #[command(name = "prime-window")]
    PrimeWindow(PrimeWindowArgs),
    /// Search for two semiprime products congruent modulo n (n >= 5).
    Collision(CollisionArgs),
    /// Exhibit a Goldbach-based congruence for each even n (n >= 6).
    Goldbach(SweepArgs),
}

#[derive(Debug, Clone, Copy)]
struct RangeSpec {
    start: u64,
    end: u64,
    step: u64,
}

fn parse_range(text: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let (a, b, s) = match parts.as_slice() {
        [a, b] => (a, b, None),
        [a, b, s] => (a, b, Some(s)),
        _ => return Err("expected A:B or A:B:S".to_string()),
    };
    let start: u64 = a.trim().parse().map_err(|_| format!("bad start '{a}'"))?;
    let end: u64 = b.trim().parse().map_err(|_| format!("bad end '{b}'"))?;
    let step: u64 = match s {
        Some(s) => s.trim().parse().map_err(|_| format!("bad step '{s}'"))?,
        None => 1,
    };
    if step == 0 {
        return Err("step must be positive".to_string());
    }
    if start > end {
        return Err(format!("start {start} exceeds end {end}"));
    }
    Ok(RangeSpec { start, end, step })
}

/// Newtype so clap takes the whole comma-separated list as one value.
#[derive(Debug, Clone)]
struct XsList(Vec<u64>);

fn parse_xs(text: &str) -> Result<XsList, String> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad checkpoint '{part}'"))
        })
        .collect::<Result<Vec<u64>, String>>()
        .map(XsList)
}

#[derive(Args)]
struct SweepArgs {
    /// Inclusive sweep A:B, optionally strided A:B:S.
    #[arg(
        long,
        value_parser = parse_range,
        value_name = "A:B[:S]",
        conflicts_with_all = ["sample", "min", "max", "seed"]
    )]
    range: Option<RangeSpec>,

    /// Draw K seeded uniform samples instead of sweeping a range.
    #[arg(long, value_name = "K", requires = "max", requires = "seed")]
    sample: Option<u64>,

    /// Smallest sampled value (defaults to the subcommand's domain floor).
    #[arg(long, value_name = "M", requires = "sample")]
    min: Option<u64>,

    /// Largest sampled value.
    #[arg(long, value_name = "M", requires = "sample")]
    max: Option<u64>,

    /// RNG seed; a fixed seed draws the identical sample set every run.
    #[arg(long, value_name = "S", requires = "sample")]
    seed: Option<u64>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Prime-table limit; raised with a warning when the sweep needs more.
    #[arg(long, value_name = "L")]
    sieve_limit: Option<u64>,

    /// Record format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write records to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Append per-record compute milliseconds (JSON only; output is no
    /// longer byte-identical across runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct PiFormulaArgs {
    #[command(flatten)]
    sweep: SweepArgs,

    /// Parity-term variant to evaluate.
    #[arg(long, value_enum, default_value_t = VariantArg::Statement)]
    variant: VariantArg,

    /// Append a comparison of both parity-term variants over the sweep
    /// (requires a step-1 --range and JSON format).
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct PrimeWindowArgs {
    #[command(flatten)]
    sweep: SweepArgs,

    /// Mantissa bits for escalated boundary decisions (min 128).
    #[arg(long, value_name = "P", default_value_t = 192)]
    precision_bits: usize,

    /// Append an (epsilon, delta) fit record after each window (JSON
    /// only).
    #[arg(long)]
    fit: bool,
}

#[derive(Args)]
struct CollisionArgs {
    /// Single modulus to search.
    #[arg(long, value_name = "N", conflicts_with_all = ["range", "sample", "min", "max", "seed"])]
    n: Option<u64>,

    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct TrendArgs {
    /// Comma-separated checkpoint arguments, strictly increasing.
    #[arg(long, value_parser = parse_xs, value_name = "X1,X2,...", conflicts_with = "range")]
    xs: Option<XsList>,

    /// Checkpoints as an inclusive strided range A:B:S.
    #[arg(long, value_parser = parse_range, value_name = "A:B[:S]")]
    range: Option<RangeSpec>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Statement,
    Proof,
}

impl From<VariantArg> for ParityVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Statement => ParityVariant::Statement,
            VariantArg::Proof => ParityVariant::Proof,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Thm1(args) => cmd_thm1(args),
        Command::Thm2(args) => cmd_thm2(args),
        Command::PiFormula(args) => cmd_pi_formula(args),
        Command::Upsilon(args) => cmd_upsilon(args),
        Command::Trend(args) => cmd_trend(args),
        Command::PrimeWindow(args) => cmd_prime_window(args),
        Command::Collision(args) => cmd_collision(args),
        Command::Goldbach(args) => cmd_goldbach(args),
    }
}

/// Ascending sweep values, yielded in bounded chunks so 10^8-scale ranges
/// never materialize.
enum ValueStream {
    Range { next: u64, end: u64, step: u64, done: bool },
    List { values: Vec<u64>, pos: usize },
}

impl ValueStream {
    fn from_samples(mut values: Vec<u64>) -> Self {
        values.sort_unstable();
        ValueStream::List { values, pos: 0 }
    }

    fn next_chunk(&mut self, buf: &mut Vec<u64>, cap: usize) -> bool {
        buf.clear();
        match self {
            ValueStream::Range { next, end, step, done } => {
                if *done {
                    return false;
                }
                while buf.len() < cap {
                    buf.push(*next);
                    match next.checked_add(*step) {
                        Some(v) if v <= *end => *next = v,
                        _ => {
                            *done = true;
                            break;
                        }
                    }
                }
                true
            }
            ValueStream::List { values, pos } => {
                if *pos >= values.len() {
                    return false;
                }
                let take = cap.min(values.len() - *pos);
                buf.extend_from_slice(&values[*pos..*pos + take]);
                *pos += take;
                true
            }
        }
    }

    /// Largest value the sweep will visit; sizes the sieve build.
    fn max_value(&self) -> u64 {
        match self {
            ValueStream::Range { end, .. } => *end,
            ValueStream::List { values, .. } => values.last().copied().unwrap_or(0),
        }
    }
}

/// Resolve a sweep to a value stream, enforcing the subcommand's domain
/// floor with `hypothesis` as the user-facing reason.
fn build_stream(args: &SweepArgs, floor: u64, hypothesis: &str) -> anyhow::Result<ValueStream> {
    match (&args.range, args.sample) {
        (Some(r), None) => {
            if r.start < floor {
                bail!("{hypothesis} (got --range starting at {})", r.start);
            }
            Ok(ValueStream::Range {
                next: r.start,
                end: r.end,
                step: r.step,
                done: false,
            })
        }
        (None, Some(k)) => {
            let max = args.max.expect("clap enforces --max with --sample");
            let seed = args.seed.expect("clap enforces --seed with --sample");
            let min = args.min.unwrap_or(floor);
            if min < floor {
                bail!("{hypothesis} (got --min {min})");
            }
            if max < min {
                bail!("--max {max} is below --min {min}");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (0..k).map(|_| rng.random_range(min..=max)).collect();
            Ok(ValueStream::from_samples(values))
        }
        (None, None) => bail!("provide --range A:B[:S] or --sample K --max M --seed S"),
        (Some(_), Some(_)) => unreachable!("clap marks --range and --sample as conflicting"),
    }
}

/// Build the shared prime table, honoring `--sieve-limit` but never below
/// what the sweep requires; cache through the directory named by
/// `PSUM_CACHE_DIR` when set.
fn build_table(required: u64, user_limit: Option<u64>) -> anyhow::Result<PrimeTable> {
    let required = required.max(3);
    let mut limit = required;
    if let Some(user) = user_limit {
        if user < required {
            eprintln!("warning: --sieve-limit {user} is below the required {required}; raising");
        }
        limit = limit.max(user);
    }
    let cache_dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    let table = prime::load_or_build(limit, cache_dir.as_deref())
        .with_context(|| format!("building the prime table to {limit}"))?;
    Ok(table)
}

struct Emitter {
    writer: BufWriter<Box<dyn Write>>,
    format: Format,
    timings: bool,
}

impl Emitter {
    fn new(common: &CommonArgs) -> anyhow::Result<Self> {
        if common.timings && common.format == Format::Csv {
            bail!("--timings requires --format json (CSV rows have fixed columns)");
        }
        let sink: Box<dyn Write> = match &common.out {
            Some(path) => Box::new(
                File::create(path)
                    .with_context(|| format!("creating output file {}", path.display()))?,
            ),
            None => Box::new(io::stdout()),
        };
        Ok(Emitter {
            writer: BufWriter::new(sink),
            format: common.format,
            timings: common.timings,
        })
    }

    fn csv_header(&mut self, header: &str) -> io::Result<()> {
        if self.format == Format::Csv {
            writeln!(self.writer, "{header}")?;
        }
        Ok(())
    }

    fn line(&mut self, line: &str) -> io::Result<()> {
        writeln!(self.writer, "{line}")
    }

    fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

#[derive(Default)]
struct RunStats {
    checked: u64,
    exact: u64,
    violations: u64,
    inconclusive: u64,
}

impl RunStats {
    /// Print the summary line and translate the counters into the exit
    /// code contract.
    fn conclude(&self, started: Instant) -> ExitCode {
        eprintln!(
            "checked={} exact={} violations={} inconclusive={} elapsed={:.3}s",
            self.checked,
            self.exact,
            self.violations,
            self.inconclusive,
            started.elapsed().as_secs_f64()
        );
        if self.violations > 0 || self.inconclusive > 0 {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    }
}

/// Drive a sweep in parallel chunks with ordered emission. Inconclusive
/// records are counted and skipped; any other error aborts the run.
fn run_chunks<T, F, H>(
    stream: &mut ValueStream,
    timings: bool,
    stats: &mut RunStats,
    worker: F,
    mut handle: H,
) -> anyhow::Result<()>
where
    T: Send,
    F: Fn(u64) -> psum_core::Result<T> + Sync,
    H: FnMut(&mut RunStats, T, Option<f64>) -> anyhow::Result<()>,
{
    let mut buf = Vec::with_capacity(CHUNK);
    while stream.next_chunk(&mut buf, CHUNK) {
        let results: Vec<(u64, Option<f64>, psum_core::Result<T>)> = buf
            .par_iter()
            .map(|&x| {
                let start = Instant::now();
                let result = worker(x);
                let ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
                (x, ms, result)
            })
            .collect();
        for (x, ms, result) in results {
            match result {
                Ok(value) => handle(stats, value, ms)?,
                Err(e) if e.is_inconclusive() => {
                    stats.checked += 1;
                    stats.inconclusive += 1;
                }
                Err(e) => return Err(e).with_context(|| format!("at argument {x}")),
            }
        }
    }
    Ok(())
}

/// Shared driver for the identity subcommands: emit each report and count
/// exactness.
fn run_identity_sweep<F>(
    args: &SweepArgs,
    floor: u64,
    hypothesis: &str,
    table_for: impl Fn(u64) -> u64,
    make_worker: impl FnOnce(Option<PrimeTable>) -> F,
    needs_table: bool,
) -> anyhow::Result<ExitCode>
where
    F: Fn(u64) -> psum_core::Result<VerificationReport> + Sync,
{
    let started = Instant::now();
    let mut stream = build_stream(args, floor, hypothesis)?;
    let table = if needs_table {
        Some(build_table(table_for(stream.max_value()), args.common.sieve_limit)?)
    } else {
        None
    };
    let worker = make_worker(table);

    let mut emitter = Emitter::new(&args.common)?;
    emitter.csv_header(VerificationReport::csv_header())?;
    let mut stats = RunStats::default();
    let format = emitter.format;
    run_chunks(
        &mut stream,
        emitter.timings,
        &mut stats,
        worker,
        |stats, report: VerificationReport, ms| {
            stats.checked += 1;
            if report.exact {
                stats.exact += 1;
            } else {
                stats.violations += 1;
            }
            let line = match format {
                Format::Json => report.json_line(ms),
                Format::Csv => report.csv_row(),
            };
            emitter.line(&line)?;
            Ok(())
        },
    )?;
    emitter.finish()?;
    Ok(stats.conclude(started))
}

fn cmd_thm1(args: SweepArgs) -> anyhow::Result<ExitCode> {
    run_identity_sweep(
        &args,
        5,
        "thm1 requires x >= 5: the pair-count formula is stated only where \
         two odd primes exist",
        |end| end,
        |table| {
            let table = table.expect("thm1 builds a table");
            move |x| identity::verify_semiprime_count(x, &table)
        },
        true,
    )
}

fn cmd_thm2(args: SweepArgs) -> anyhow::Result<ExitCode> {
    run_identity_sweep(
        &args,
        1,
        "thm2 requires x >= 1",
        |_| 0,
        |_table| |x| identity::verify_floor_log_parity(x),
        false,
    )
}

fn cmd_pi_formula(args: PiFormulaArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let variant: ParityVariant = args.variant.into();
    if args.audit {
        if args.sweep.common.format != Format::Json {
            bail!("--audit requires --format json");
        }
        match &args.sweep.range {
            Some(r) if r.step == 1 => {}
            Some(_) => bail!("--audit requires a step-1 --range"),
            None => bail!("--audit requires --range (it compares variants over a contiguous sweep)"),
        }
    }

    let mut stream = build_stream(
        &args.sweep,
        2,
        "pi-formula requires x >= 2: ln x must not vanish",
    )?;
    let end = stream.max_value();
    let table = build_table(end, args.sweep.common.sieve_limit)?;
    let sieve = FactorSieve::build((end / 2).max(4))
        .with_context(|| format!("building the factor sieve to {}", (end / 2).max(4)))?;

    let mut emitter = Emitter::new(&args.sweep.common)?;
    emitter.csv_header(VerificationReport::csv_header())?;
    let mut stats = RunStats::default();
    let format = emitter.format;
    run_chunks(
        &mut stream,
        emitter.timings,
        &mut stats,
        |x| identity::verify_pi_reconstruction(x, &table, &sieve, variant),
        |stats, report: VerificationReport, ms| {
            stats.checked += 1;
            if report.exact {
                stats.exact += 1;
            } else {
                stats.violations += 1;
            }
            let line = match format {
                Format::Json => report.json_line(ms),
                Format::Csv => report.csv_row(),
            };
            emitter.line(&line)?;
            Ok(())
        },
    )?;

    if args.audit {
        let range = args.sweep.range.expect("validated above");
        let audit = identity::audit_parity_variants(range.start, range.end, &table, &sieve)?;
        emitter.line(&audit.json_line())?;
    }
    emitter.finish()?;
    Ok(stats.conclude(started))
}

fn cmd_upsilon(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let mut stream = build_stream(&args, 2, "upsilon requires x >= 2")?;
    let end = stream.max_value();
    let table = build_table((end / 2).max(end.isqrt()), args.common.sieve_limit)?;
    let sieve = FactorSieve::build(end.max(4))
        .with_context(|| format!("building the factor sieve to {}", end.max(4)))?;

    let mut emitter = Emitter::new(&args.common)?;
    emitter.csv_header(UpsilonSummary::csv_header())?;
    let mut stats = RunStats::default();
    let format = emitter.format;
    run_chunks(
        &mut stream,
        emitter.timings,
        &mut stats,
        |x| upsilon::summarize(x, &table, &sieve),
        |stats, summary: UpsilonSummary, ms| {
            stats.checked += 1;
            let spread = route_spread(&summary);
            if spread <= ROUTE_AGREEMENT {
                stats.exact += 1;
            } else {
                stats.violations += 1;
            }
            let line = match format {
                Format::Json => summary.json_line(ms),
                Format::Csv => summary.csv_row(),
            };
            emitter.line(&line)?;
            Ok(())
        },
    )?;
    emitter.finish()?;
    Ok(stats.conclude(started))
}

/// Worst pairwise relative disagreement among the three summation routes.
fn route_spread(summary: &UpsilonSummary) -> f64 {
    let reference = summary
        .sum_direct
        .abs()
        .max(summary.sum_lemma.abs())
        .max(summary.sum_logsemiprime.abs())
        .max(f64::MIN_POSITIVE);
    let a = (summary.sum_direct - summary.sum_lemma).abs();
    let b = (summary.sum_direct - summary.sum_logsemiprime).abs();
    a.max(b) / reference
}

fn cmd_trend(args: TrendArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let xs: Vec<u64> = match (&args.xs, &args.range) {
        (Some(xs), None) => xs.0.clone(),
        (None, Some(r)) => {
            let count = (r.end - r.start) / r.step + 1;
            if count > 100_000 {
                bail!("trend expects checkpoint lists, not dense sweeps (got {count} values)");
            }
            (0..count).map(|i| r.start + i * r.step).collect()
        }
        (None, None) => bail!("provide --xs X1,X2,... or --range A:B[:S]"),
        (Some(_), Some(_)) => unreachable!("clap marks --xs and --range as conflicting"),
    };
    let end = xs.last().copied().unwrap_or(0);
    let table = build_table(end / 2, args.common.sieve_limit)?;

    let rows = upsilon::trend_table(&xs, &table)?;
    let mut emitter = Emitter::new(&args.common)?;
    let mut stats = RunStats::default();
    match emitter.format {
        Format::Csv => {
            let csv = upsilon::trend_csv(&rows);
            for line in csv.lines() {
                emitter.line(line)?;
            }
        }
        Format::Json => {
            for row in &rows {
                emitter.line(&row.json_line())?;
            }
        }
    }
    stats.checked = rows.len() as u64;
    stats.exact = rows.len() as u64;
    emitter.finish()?;
    Ok(stats.conclude(started))
}

/// Fold one scan record into both counter sets and emit it.
fn emit_scan(
    emitter: &mut Emitter,
    stats: &mut RunStats,
    tally: &mut ScanTally,
    record: &ScanRecord,
    ms: Option<f64>,
) -> anyhow::Result<()> {
    stats.checked += 1;
    tally.record(record.status);
    match record.status {
        ScanStatus::Pass => stats.exact += 1,
        ScanStatus::Violation => stats.violations += 1,
        ScanStatus::NotFound => {}
    }
    let line = match emitter.format {
        Format::Json => record.json_line(ms),
        Format::Csv => record.csv_row(),
    };
    emitter.line(&line)?;
    Ok(())
}

fn cmd_prime_window(args: PrimeWindowArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    if args.fit && args.sweep.common.format != Format::Json {
        bail!("--fit requires --format json");
    }
    let mut stream = build_stream(
        &args.sweep,
        3,
        "prime-window requires n >= 3: the window quantities need ln ln n! > 0",
    )?;
    let table = build_table(
        nth_prime_bound(stream.max_value()),
        args.sweep.common.sieve_limit,
    )?;

    let mut emitter = Emitter::new(&args.sweep.common)?;
    emitter.csv_header(ScanRecord::csv_header())?;
    let mut stats = RunStats::default();
    let mut tally = ScanTally::default();

    // The scanner carries the incremental log-factorial state, so windows
    // run sequentially; each step is O(step) after the previous one.
    let mut scanner = WindowScanner::new(&table).with_precision_bits(args.precision_bits);
    let mut buf = Vec::with_capacity(CHUNK);
    while stream.next_chunk(&mut buf, CHUNK) {
        for &n in &buf {
            let start = Instant::now();
            match scanner.scan(n) {
                Ok(record) => {
                    let ms = emitter
                        .timings
                        .then(|| start.elapsed().as_secs_f64() * 1e3);
                    emit_scan(&mut emitter, &mut stats, &mut tally, &record, ms)?;
                    if args.fit {
                        let fit = scanner.fit(n)?;
                        emitter.line(&fit.json_line())?;
                    }
                }
                Err(e) if e.is_inconclusive() => {
                    stats.checked += 1;
                    stats.inconclusive += 1;
                    tally.record_inconclusive();
                }
                Err(e) => return Err(e).with_context(|| format!("at n = {n}")),
            }
        }
    }
    if emitter.format == Format::Json {
        emitter.line(&tally.json_line())?;
    }
    emitter.finish()?;
    Ok(stats.conclude(started))
}

/// Upper bound on the n-th prime, sizing the table so `nth_prime(end)`
/// stays in range (n (ln n + ln ln n) bounds it from above for n >= 6).
fn nth_prime_bound(n: u64) -> u64 {
    if n < 6 {
        return 64;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 16
}

fn cmd_collision(args: CollisionArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let mut stream = match args.n {
        Some(n) => {
            if n < 5 {
                bail!("collision requires n >= 5: a product of two odd primes must exist");
            }
            ValueStream::List { values: vec![n], pos: 0 }
        }
        None => build_stream(
            &args.sweep,
            5,
            "collision requires n >= 5: a product of two odd primes must exist",
        )?,
    };
    let table = build_table(stream.max_value(), args.sweep.common.sieve_limit)?;

    let mut emitter = Emitter::new(&args.sweep.common)?;
    emitter.csv_header(ScanRecord::csv_header())?;
    let mut stats = RunStats::default();
    let mut tally = ScanTally::default();
    let format = emitter.format;
    // emit_scan needs the emitter, so fold counters inline instead.
    run_chunks(
        &mut stream,
        emitter.timings,
        &mut stats,
        |n| conjecture::find_collision(n, &table),
        |stats, record: ScanRecord, ms| {
            stats.checked += 1;
            tally.record(record.status);
            match record.status {
                ScanStatus::Pass => stats.exact += 1,
                ScanStatus::Violation => stats.violations += 1,
                ScanStatus::NotFound => {}
            }
            let line = match format {
                Format::Json => record.json_line(ms),
                Format::Csv => record.csv_row(),
            };
            emitter.line(&line)?;
            Ok(())
        },
    )?;
    if emitter.format == Format::Json {
        emitter.line(&tally.json_line())?;
    }
    emitter.finish()?;
    Ok(stats.conclude(started))
}

fn cmd_goldbach(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let mut stream = goldbach_stream(&args)?;
    let table = build_table(stream.max_value(), args.common.sieve_limit)?;

    let mut emitter = Emitter::new(&args.common)?;
    emitter.csv_header(ScanRecord::csv_header())?;
    let mut stats = RunStats::default();
    let mut tally = ScanTally::default();
    let format = emitter.format;
    run_chunks(
        &mut stream,
        emitter.timings,
        &mut stats,
        |n| conjecture::goldbach_congruence(n, &table),
        |stats, record: ScanRecord, ms| {
            stats.checked += 1;
            tally.record(record.status);
            match record.status {
                ScanStatus::Pass => stats.exact += 1,
                ScanStatus::Violation => stats.violations += 1,
                ScanStatus::NotFound => {}
            }
            let line = match format {
                Format::Json => record.json_line(ms),
                Format::Csv => record.csv_row(),
            };
            emitter.line(&line)?;
            Ok(())
        },
    )?;
    if emitter.format == Format::Json {
        emitter.line(&tally.json_line())?;
    }
    emitter.finish()?;
    Ok(stats.conclude(started))
}

/// Goldbach sweeps visit even arguments only: ranges are aligned to the
/// next even start and an even stride, samples are drawn from the even
/// numbers directly.
fn goldbach_stream(args: &SweepArgs) -> anyhow::Result<ValueStream> {
    const HYPOTHESIS: &str = "goldbach requires even n >= 6: the decomposition needs two odd primes";
    match (&args.range, args.sample) {
        (Some(r), None) => {
            if r.start < 6 {
                bail!("{HYPOTHESIS} (got --range starting at {})", r.start);
            }
            let start = r.start + r.start % 2;
            let step = if r.step == 1 { 2 } else { r.step };
            if step % 2 != 0 {
                bail!("{HYPOTHESIS} (a stride of {step} leaves the even numbers)");
            }
            if start > r.end {
                bail!("--range {}:{} contains no even argument", r.start, r.end);
            }
            Ok(ValueStream::Range {
                next: start,
                end: r.end,
                step,
                done: false,
            })
        }
        (None, Some(k)) => {
            let max = args.max.expect("clap enforces --max with --sample");
            let seed = args.seed.expect("clap enforces --seed with --sample");
            let min = args.min.unwrap_or(6);
            if min < 6 {
                bail!("{HYPOTHESIS} (got --min {min})");
            }
            let lo = min.div_ceil(2);
            let hi = max / 2;
            if hi < lo {
                bail!("--min {min}..--max {max} contains no even argument");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (0..k).map(|_| 2 * rng.random_range(lo..=hi)).collect();
            Ok(ValueStream::from_samples(values))
        }
        (None, None) => bail!("provide --range A:B[:S] or --sample K --max M --seed S"),
        (Some(_), Some(_)) => unreachable!("clap marks --range and --sample as conflicting"),
    }
}
