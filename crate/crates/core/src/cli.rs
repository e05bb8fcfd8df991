//! Command-line front end. Every subcommand echoes its resolved configuration
//! in JSON output; output bytes depend only on the arguments.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 I/O failure,
//! 4 resource limit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{pi_prime_joint, pi_prime_linear};
use crate::census::{
    estimate_means, in_e_set, in_f_set, run_census, CensusReport, Estimate, NormalityParams,
};
use crate::cf::{expand, Convention, Digit, Rational};
use crate::enumeration::{count_r, SequenceKind};
use crate::error::Error;
use crate::measures::{constants, gauss_measure, Pattern};
use crate::stream::{
    hypothesis_ratios_for, normality_report, parse_indices, DigitStream, DigitWriter, DumpFormat,
    HypothesisCheckpoint, GrowthTracker,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "CFNORMAL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cfnormal", version, about = "Continued-fraction normality of concatenated rational sequences")]
pub struct Cli {
    /// Worker threads for census and Monte Carlo runs (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
    Digits,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Continued fraction digits and convergents of p/q.
    Expand(ExpandArgs),
    /// First N digits of a concatenated sequence.
    Stream(StreamArgs),
    /// Pattern frequencies and log-denominator growth of a stream.
    Stats(StatsArgs),
    /// Count rationals that are not (eps, s)-normal.
    Census(CensusArgs),
    /// |R(m)| for a sequence kind.
    Count(CountArgs),
    /// Primes of the form lq + a (and optionally l q' + a') for l <= x.
    Piprime(PiPrimeArgs),
    /// Reference constants.
    Constants,
    /// Stream the rationals at the indices listed in a file.
    StreamFile(StreamFileArgs),
    /// Monte Carlo Gauss measure of a digit-prefix event.
    Estimate(EstimateArgs),
}

fn parse_kind(s: &str) -> Result<SequenceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_conv(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    /// Rational in lowest terms, written p/q.
    pub rational: String,
    #[arg(long, default_value = "long", value_parser = parse_conv)]
    pub conv: Convention,
}

#[derive(Debug, Args, Serialize)]
pub struct StreamArgs {
    #[arg(long, default_value = "all", value_parser = parse_kind)]
    pub kind: SequenceKind,
    #[arg(long, default_value = "long", value_parser = parse_conv)]
    pub conv: Convention,
    /// Number of digits.
    #[arg(short = 'n', long = "n")]
    pub n: u64,
    /// Prefix the dump with a `cfdigits v1` header line.
    #[arg(long)]
    pub header: bool,
    /// LEB128 varints instead of decimal text.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[arg(long, default_value = "all", value_parser = parse_kind)]
    pub kind: SequenceKind,
    #[arg(long, default_value = "long", value_parser = parse_conv)]
    pub conv: Convention,
    #[arg(short = 'n', long = "n", default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 5)]
    pub max_digit: Digit,
    #[arg(long, default_value_t = 2)]
    pub max_len: usize,
    /// Also report the growth-hypothesis ratios at N, 2N, 4N.
    #[arg(long)]
    pub hypothesis: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long, default_value = "all", value_parser = parse_kind)]
    pub kind: SequenceKind,
    #[arg(long, default_value = "long", value_parser = parse_conv)]
    pub conv: Convention,
    /// Largest denominator; repeat for several bounds.
    #[arg(short = 'm', long = "m", required = true)]
    pub m: Vec<u64>,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value = "1", value_parser = parse_pattern)]
    pub s: Pattern,
    /// Include wall-clock time (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long, default_value = "all", value_parser = parse_kind)]
    pub kind: SequenceKind,
    #[arg(short = 'm', long = "m")]
    pub m: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PiPrimeArgs {
    #[arg(short = 'x', long = "x")]
    pub x: u64,
    #[arg(short = 'q', long = "q")]
    pub q: u64,
    #[arg(short = 'a', long = "a")]
    pub a: u64,
    /// Second form l q' + a'; both must then be prime.
    #[arg(long, requires = "ap")]
    pub qp: Option<u64>,
    #[arg(long, requires = "qp")]
    pub ap: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct StreamFileArgs {
    /// File of whitespace-separated 1-based indices into the lowest-terms sequence.
    pub path: PathBuf,
    #[arg(long, default_value = "long", value_parser = parse_conv)]
    pub conv: Convention,
    /// Write the hypothesis-ratio report (JSON) here; otherwise it goes to stderr.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub header: bool,
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// The prefix equals `--s`.
    Cylinder,
    /// The E set for `--eps`, `--s`, `-n`.
    E,
    /// The F set for `--eps`, `-n`.
    F,
    /// Mean of ln q_N / N (not an event; reports a mean).
    Growth,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long, value_enum, default_value = "cylinder")]
    pub event: EventKind,
    #[arg(long, default_value = "1", value_parser = parse_pattern)]
    pub s: Pattern,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(short = 'n', long = "n", default_value_t = 100)]
    pub n: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Resource(m) => write!(f, "resource limit: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(m) => CliError::Resource(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: Config<'a>,
    result: T,
}

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    command: &'a Command,
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
}

struct Ctx<'a> {
    cli: &'a Cli,
    format: Format,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&self, out: &mut dyn Write, result: T) -> CliResult {
        let env = Envelope {
            config: Config { command: &self.cli.command, format: self.format, threads: self.cli.threads },
            result,
        };
        serde_json::to_writer_pretty(&mut *out, &env).map_err(io::Error::from)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    fn unsupported(&self, name: &str) -> CliError {
        CliError::Usage(format!("format {:?} is not available for {name}", self.format))
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Stream(_) | Command::StreamFile(_) => Format::Digits,
        Command::Stats(_) | Command::Census(_) | Command::Estimate(_) => Format::Json,
        Command::Expand(_) | Command::Count(_) | Command::Piprime(_) | Command::Constants => Format::Text,
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let ctx = Ctx { cli, format: cli.format.unwrap_or_else(|| default_format(&cli.command)) };
    let mut file;
    let out: &mut dyn Write = match &cli.out {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    match &cli.command {
        Command::Expand(a) => cmd_expand(&ctx, a, out),
        Command::Stream(a) => cmd_stream(&ctx, a, out),
        Command::Stats(a) => cmd_stats(&ctx, a, out),
        Command::Census(a) => cmd_census(&ctx, a, out),
        Command::Count(a) => cmd_count(&ctx, a, out),
        Command::Piprime(a) => cmd_piprime(&ctx, a, out),
        Command::Constants => cmd_constants(&ctx, out),
        Command::StreamFile(a) => cmd_stream_file(&ctx, a, out, stderr),
        Command::Estimate(a) => cmd_estimate(&ctx, a, out),
    }?;
    out.flush()?;
    Ok(())
}

fn join_digits(d: &[Digit]) -> String {
    d.iter().map(Digit::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct ConvergentRow {
    index: usize,
    p: String,
    q: String,
}

#[derive(Serialize)]
struct ExpandResult {
    digits: Vec<Digit>,
    convergents: Vec<ConvergentRow>,
}

fn cmd_expand(ctx: &Ctx, a: &ExpandArgs, out: &mut dyn Write) -> CliResult {
    let r: Rational = a.rational.parse()?;
    let e = expand(r, a.conv);
    let convergents: Vec<ConvergentRow> = e
        .convergents()?
        .into_iter()
        .map(|c| ConvergentRow { index: c.index, p: c.p.to_string(), q: c.q.to_string() })
        .collect();
    match ctx.format {
        Format::Text => {
            writeln!(out, "{}", join_digits(e.digits()))?;
            for c in &convergents {
                writeln!(out, "{}\t{}\t{}", c.index, c.p, c.q)?;
            }
            Ok(())
        }
        Format::Json => ctx.json(out, ExpandResult { digits: e.digits().to_vec(), convergents }),
        _ => Err(ctx.unsupported("expand")),
    }
}

fn write_stream(
    stream: &mut DigitStream,
    limit: Option<u64>,
    kind_name: &str,
    header: bool,
    binary: bool,
    out: &mut dyn Write,
) -> CliResult {
    let mut w = DigitWriter::new(out, if binary { DumpFormat::Varint } else { DumpFormat::Text });
    if header {
        w.write_header(kind_name, stream.convention())?;
    }
    while limit.is_none_or(|n| stream.emitted() < n) {
        match stream.try_next()? {
            Some(d) => w.write_digit(d)?,
            None => break,
        }
    }
    w.finish()?;
    Ok(())
}

fn cmd_stream(ctx: &Ctx, a: &StreamArgs, out: &mut dyn Write) -> CliResult {
    if ctx.format != Format::Digits {
        return Err(ctx.unsupported("stream"));
    }
    let mut stream = DigitStream::new(a.kind, a.conv);
    write_stream(&mut stream, Some(a.n), a.kind.name(), a.header, a.binary, out)
}

#[derive(Serialize)]
struct StatsResult {
    #[serde(flatten)]
    report: crate::stream::NormalityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis: Option<Vec<HypothesisCheckpoint>>,
}

fn cmd_stats(ctx: &Ctx, a: &StatsArgs, out: &mut dyn Write) -> CliResult {
    let report = normality_report(a.kind, a.conv, a.n, a.max_digit, a.max_len)?;
    let hypothesis = if a.hypothesis {
        Some(hypothesis_ratios_for(&mut DigitStream::new(a.kind, a.conv), a.n)?)
    } else {
        None
    };
    match ctx.format {
        Format::Json => ctx.json(out, StatsResult { report, hypothesis }),
        Format::Csv => {
            writeln!(out, "pattern,count,N,empirical,mu,deviation")?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    join_digits(r.pattern.digits()),
                    r.count,
                    r.n,
                    r.empirical,
                    r.mu,
                    r.deviation
                )?;
            }
            Ok(())
        }
        _ => Err(ctx.unsupported("stats")),
    }
}

fn cmd_census(ctx: &Ctx, a: &CensusArgs, out: &mut dyn Write) -> CliResult {
    let params = NormalityParams::new(a.eps, a.s.clone(), a.conv)?;
    let mut reports: Vec<CensusReport> = Vec::with_capacity(a.m.len());
    for &m in &a.m {
        let mut rep = run_census(a.kind, m, &params)?;
        if !a.timing {
            rep.wall_seconds = None;
        }
        reports.push(rep);
    }
    match ctx.format {
        Format::Json => ctx.json(out, reports),
        Format::Csv => {
            writeln!(out, "{}", CensusReport::CSV_HEADER)?;
            for r in &reports {
                writeln!(out, "{}", r.csv_row())?;
            }
            Ok(())
        }
        _ => Err(ctx.unsupported("census")),
    }
}

#[derive(Serialize)]
struct CountResult {
    count: u64,
}

fn cmd_count(ctx: &Ctx, a: &CountArgs, out: &mut dyn Write) -> CliResult {
    let count = count_r(a.kind, a.m)?;
    match ctx.format {
        Format::Text => Ok(writeln!(out, "{count}")?),
        Format::Json => ctx.json(out, CountResult { count }),
        _ => Err(ctx.unsupported("count")),
    }
}

fn cmd_piprime(ctx: &Ctx, a: &PiPrimeArgs, out: &mut dyn Write) -> CliResult {
    let count = match (a.qp, a.ap) {
        (Some(qp), Some(ap)) => pi_prime_joint(a.x, a.q, a.a, qp, ap)?,
        _ => pi_prime_linear(a.x, a.q, a.a)?,
    };
    match ctx.format {
        Format::Text => Ok(writeln!(out, "{count}")?),
        Format::Json => ctx.json(out, CountResult { count }),
        _ => Err(ctx.unsupported("piprime")),
    }
}

fn cmd_constants(ctx: &Ctx, out: &mut dyn Write) -> CliResult {
    let c = constants();
    match ctx.format {
        Format::Text => {
            writeln!(out, "g {}", c.g)?;
            writeln!(out, "G {}", c.golden)?;
            writeln!(out, "ln2 {}", c.log2)?;
            Ok(())
        }
        Format::Json => ctx.json(out, c),
        _ => Err(ctx.unsupported("constants")),
    }
}

#[derive(Serialize)]
struct StreamFileReport {
    path: String,
    rationals: usize,
    digits: u64,
    hypothesis: Vec<HypothesisCheckpoint>,
}

fn cmd_stream_file(ctx: &Ctx, a: &StreamFileArgs, out: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    if ctx.format != Format::Digits {
        return Err(ctx.unsupported("stream-file"));
    }
    let text = std::fs::read_to_string(&a.path)?;
    let indices = parse_indices(&text)?;
    let rationals = indices.len();
    let mut stream = DigitStream::from_indices(indices.clone(), a.conv);
    write_stream(&mut stream, None, "index-file", a.header, a.binary, out)?;
    let total = stream.emitted();
    let hypothesis = if total == 0 {
        Vec::new()
    } else {
        hypothesis_ratios_for(&mut DigitStream::from_indices(indices, a.conv), (total / 4).max(1))?
    };
    let report = StreamFileReport { path: a.path.display().to_string(), rationals, digits: total, hypothesis };
    let json = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
    match &a.report {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => writeln!(stderr, "{json}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateResult {
    #[serde(flatten)]
    estimate: Estimate,
    depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
}

fn cmd_estimate(ctx: &Ctx, a: &EstimateArgs, out: &mut dyn Write) -> CliResult {
    if ctx.format != Format::Json {
        return Err(ctx.unsupported("estimate"));
    }
    if a.n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let k = a.s.len();
    let n = a.n as usize;
    let (depth, reference) = match a.event {
        EventKind::Cylinder => (k, Some(gauss_measure(&a.s))),
        EventKind::E => (n + k - 1, None),
        EventKind::F => (n, None),
        EventKind::Growth => (n, Some(constants().g)),
    };
    let s = &a.s;
    let (eps, nn) = (a.eps, a.n);
    let stat = |d: &[Digit]| -> f64 {
        let hit = match a.event {
            EventKind::Cylinder => d == s.digits(),
            EventKind::E => in_e_set(d, eps, s, nn).expect("depth covers read-ahead"),
            EventKind::F => in_f_set(d, eps, nn).expect("depth covers N"),
            EventKind::Growth => {
                let mut g = GrowthTracker::new(0);
                d.iter().for_each(|&x| g.push(x));
                return g.rate();
            }
        };
        if hit {
            1.0
        } else {
            0.0
        }
    };
    let estimate = estimate_means(&[stat], depth, a.samples, a.seed)?[0];
    ctx.json(out, EstimateResult { estimate, depth, reference })
}
