//! Digit streams of concatenated expansions and the statistics computed on
//! them: overlapping pattern counts, log-denominator growth and the
//! hypothesis ratios of the concatenation theorem.

use std::collections::{BTreeMap, VecDeque};
use std::io::{self, BufRead, Read, Write};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::cf::{write_digits, Convention, Digit};
use crate::enumeration::{Enumerator, Member, RationalCursor, SequenceKind};
use crate::error::{Error, Result};
use crate::measures::{gauss_measure, Pattern, KHINCHIN_LEVY_EXPONENT};

/// Where the concatenated rationals come from.
#[derive(Debug, Clone)]
pub enum RationalSource {
    /// The whole sequence, in order.
    Kind(SequenceKind),
    /// `r_{f(1)}, r_{f(2)}, ...` for an explicit list of 1-based indices into `kind`.
    Indices { kind: SequenceKind, indices: Vec<u64> },
}

#[derive(Debug, Clone)]
enum Feed {
    Cursor(RationalCursor),
    Indices { enumerator: Enumerator, indices: Vec<u64>, next: usize },
}

impl Feed {
    fn next_member(&mut self) -> Result<Option<Member>> {
        match self {
            Feed::Cursor(c) => Ok(c.next()),
            Feed::Indices { enumerator, indices, next } => match indices.get(*next) {
                Some(&i) => {
                    *next += 1;
                    enumerator.rational_at(i).map(Some)
                }
                None => Ok(None),
            },
        }
    }
}

/// Lazy digit stream of the concatenation `expand(r_{f(1)}) expand(r_{f(2)}) ...`.
///
/// Kind-backed streams never end; index-list streams end after the last index.
#[derive(Debug, Clone)]
pub struct DigitStream {
    feed: Feed,
    convention: Convention,
    buf: Vec<Digit>,
    offset: usize,
    position: u64,
    m: u64,
    current: Option<Member>,
    sum_len: u64,
    max_len: u64,
}

impl DigitStream {
    pub fn new(kind: SequenceKind, convention: Convention) -> Self {
        Self::from_source(RationalSource::Kind(kind), convention)
    }

    pub fn from_source(source: RationalSource, convention: Convention) -> Self {
        let feed = match source {
            RationalSource::Kind(kind) => Feed::Cursor(RationalCursor::new(kind)),
            RationalSource::Indices { kind, indices } => {
                Feed::Indices { enumerator: Enumerator::new(kind), indices, next: 0 }
            }
        };
        Self {
            feed,
            convention,
            buf: Vec::with_capacity(64),
            offset: 0,
            position: 0,
            m: 0,
            current: None,
            sum_len: 0,
            max_len: 0,
        }
    }

    /// Stream over 1-based indices into the lowest-terms sequence.
    pub fn from_indices(indices: Vec<u64>, convention: Convention) -> Self {
        Self::from_source(
            RationalSource::Indices { kind: SequenceKind::AllLowestTerms, indices },
            convention,
        )
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Digits emitted so far.
    pub fn emitted(&self) -> u64 {
        self.position
    }

    /// Number of rationals whose expansion has been started; once at least
    /// one digit is out, `sum_{n<M} L < emitted <= sum_{n<=M} L`.
    pub fn rational_count(&self) -> u64 {
        self.m
    }

    /// The rational currently being expanded.
    pub fn current(&self) -> Option<Member> {
        self.current
    }

    /// Digits of the current rational already emitted.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// `sum_{n<=M} L(r_{f(n)})`.
    pub fn total_length(&self) -> u64 {
        self.sum_len
    }

    /// `max_{n<=M} L(r_{f(n)})`.
    pub fn max_length(&self) -> u64 {
        self.max_len
    }

    /// Next digit, or an error if an index in the source is out of range.
    pub fn try_next(&mut self) -> Result<Option<Digit>> {
        while self.offset == self.buf.len() {
            let Some(member) = self.feed.next_member()? else {
                return Ok(None);
            };
            let r = member.rational();
            self.buf.clear();
            write_digits(r.num(), r.den(), self.convention, &mut self.buf);
            self.offset = 0;
            self.m += 1;
            self.current = Some(member);
            let len = self.buf.len() as u64;
            self.sum_len += len;
            self.max_len = self.max_len.max(len);
        }
        let d = self.buf[self.offset];
        self.offset += 1;
        self.position += 1;
        Ok(Some(d))
    }

    /// Next digit. Kind-backed streams are infinite and always return `Some`.
    pub fn next_digit(&mut self) -> Option<Digit> {
        self.try_next().expect("index out of range in stream source")
    }

    /// Append up to `count` digits to `out`; returns how many were written.
    pub fn fill(&mut self, out: &mut Vec<Digit>, count: usize) -> Result<usize> {
        out.reserve(count);
        for written in 0..count {
            match self.try_next()? {
                Some(d) => out.push(d),
                None => return Ok(written),
            }
        }
        Ok(count)
    }

    pub fn take_digits(&mut self, count: usize) -> Result<Vec<Digit>> {
        let mut out = Vec::new();
        self.fill(&mut out, count)?;
        Ok(out)
    }
}

impl Iterator for DigitStream {
    type Item = Digit;

    fn next(&mut self) -> Option<Digit> {
        self.next_digit()
    }
}

/// Overlapping multi-pattern counter over a digit stream.
///
/// Aho-Corasick automaton on the alphabet `{other, 1, ..., max_digit}` where
/// `max_digit` is the largest digit appearing in any pattern. Counts occurrence
/// *starts* at positions `1..=horizon`; an occurrence starting near the horizon
/// is resolved once the `k - 1` following digits have been pushed.
#[derive(Debug, Clone)]
pub struct FrequencyTracker {
    patterns: Vec<Pattern>,
    alphabet: usize,
    delta: Vec<u32>,
    // outputs[state] = (pattern id, pattern length) for every pattern that is a suffix
    outputs: Vec<Vec<(u32, u32)>>,
    counts: Vec<u64>,
    horizon: u64,
    max_k: usize,
    state: u32,
    pushed: u64,
}

impl FrequencyTracker {
    /// Tracker for `patterns`, counting starts at positions `1..=horizon`.
    pub fn new(patterns: &[Pattern], horizon: u64) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Domain("pattern set is empty".into()));
        }
        if horizon == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        let max_digit = patterns.iter().flat_map(|p| p.digits()).copied().max().unwrap_or(1);
        if max_digit > 1 << 16 {
            return Err(Error::Resource(format!("pattern digit {max_digit} too large for automaton")));
        }
        let alphabet = max_digit as usize + 1;

        // trie
        let mut children: Vec<Vec<u32>> = vec![vec![u32::MAX; alphabet]];
        let mut outputs: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
        for (id, p) in patterns.iter().enumerate() {
            let mut s = 0usize;
            for &d in p.digits() {
                let c = d as usize;
                if children[s][c] == u32::MAX {
                    children[s][c] = children.len() as u32;
                    children.push(vec![u32::MAX; alphabet]);
                    outputs.push(Vec::new());
                }
                s = children[s][c] as usize;
            }
            outputs[s].push((id as u32, p.len() as u32));
        }

        // BFS: failure links folded into a dense transition table
        let states = children.len();
        let mut delta = vec![0u32; states * alphabet];
        let mut fail = vec![0u32; states];
        let mut queue = VecDeque::new();
        for c in 0..alphabet {
            let child = children[0][c];
            if child != u32::MAX {
                delta[c] = child;
                queue.push_back(child);
            }
        }
        while let Some(s) = queue.pop_front() {
            let s = s as usize;
            let inherited = outputs[fail[s] as usize].clone();
            outputs[s].extend(inherited);
            for c in 0..alphabet {
                let child = children[s][c];
                let via_fail = delta[fail[s] as usize * alphabet + c];
                if child != u32::MAX {
                    fail[child as usize] = via_fail;
                    delta[s * alphabet + c] = child;
                    queue.push_back(child);
                } else {
                    delta[s * alphabet + c] = via_fail;
                }
            }
        }

        let max_k = patterns.iter().map(Pattern::len).max().unwrap_or(1);
        Ok(Self {
            patterns: patterns.to_vec(),
            alphabet,
            delta,
            outputs,
            counts: vec![0; patterns.len()],
            horizon,
            max_k,
            state: 0,
            pushed: 0,
        })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Digits pushed so far.
    pub fn pushed(&self) -> u64 {
        self.pushed
    }

    /// Total digits needed before every count is final: `N + max_k - 1`.
    pub fn required(&self) -> u64 {
        self.horizon + self.max_k as u64 - 1
    }

    pub fn is_complete(&self) -> bool {
        self.pushed >= self.required()
    }

    pub fn push(&mut self, d: Digit) {
        let c = if (d as usize) < self.alphabet { d as usize } else { 0 };
        self.state = self.delta[self.state as usize * self.alphabet + c];
        self.pushed += 1;
        for &(id, k) in &self.outputs[self.state as usize] {
            // start position of this occurrence is pushed - k + 1
            if self.pushed < self.horizon + k as u64 {
                self.counts[id as usize] += 1;
            }
        }
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn counts(&self) -> BTreeMap<Pattern, u64> {
        self.patterns.iter().cloned().zip(self.counts.iter().copied()).collect()
    }
}

/// `A_s(N)` for every `s`, reading `N + max_k - 1` digits from `digits`.
///
/// Fails with [`Error::TooShort`] if the input ends early.
pub fn count_patterns<I>(digits: I, patterns: &[Pattern], n: u64) -> Result<BTreeMap<Pattern, u64>>
where
    I: IntoIterator<Item = Digit>,
{
    let mut tracker = FrequencyTracker::new(patterns, n)?;
    let needed = tracker.required();
    for d in digits.into_iter().take(needed as usize) {
        tracker.push(d);
    }
    if !tracker.is_complete() {
        return Err(Error::TooShort { needed: needed as usize, available: tracker.pushed() as usize });
    }
    Ok(tracker.counts())
}

/// Tracks `ln q_n` of the concatenated number through the ratio recurrence,
/// auditing it against exact integer arithmetic every `checkpoint` digits.
#[derive(Debug, Clone)]
pub struct GrowthTracker {
    logq: f64,
    ratio: f64,
    n: u64,
    checkpoint: usize,
    window: Vec<Digit>,
    window_logq: f64,
    window_ratio: f64,
    max_audit_error: f64,
}

pub const DEFAULT_CHECKPOINT: usize = 10_000;
pub const DEFAULT_MAX_PATTERNS: usize = 10_000;

impl Default for GrowthTracker {
    fn default() -> Self {
        Self::new(DEFAULT_CHECKPOINT)
    }
}

impl GrowthTracker {
    /// A `checkpoint` of 0 disables the exact audit.
    pub fn new(checkpoint: usize) -> Self {
        Self {
            logq: 0.0,
            ratio: 0.0,
            n: 0,
            checkpoint,
            window: Vec::with_capacity(checkpoint),
            window_logq: 0.0,
            window_ratio: 0.0,
            max_audit_error: 0.0,
        }
    }

    pub fn push(&mut self, a: Digit) {
        let x = a as f64 + self.ratio;
        self.logq += x.ln();
        self.ratio = 1.0 / x;
        self.n += 1;
        if self.checkpoint > 0 {
            self.window.push(a);
            if self.window.len() == self.checkpoint {
                self.audit();
            }
        }
    }

    fn audit(&mut self) {
        let (x, y) = window_denominator_coefficients(&self.window);
        // q_end = x q_start + y q_{start-1}, so ln q_end - ln q_start = ln(x + y r)
        let exact_increment = ln_big(&x) + (1.0 + ratio_big(&y, &x) * self.window_ratio).ln();
        let exact = self.window_logq + exact_increment;
        if exact > 0.0 {
            let err = (self.logq - exact).abs() / exact;
            self.max_audit_error = self.max_audit_error.max(err);
        }
        self.window.clear();
        self.window_logq = self.logq;
        self.window_ratio = self.ratio;
    }

    pub fn logq(&self) -> f64 {
        self.logq
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `ln q_n / n`; zero before the first digit.
    pub fn rate(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.logq / self.n as f64
        }
    }

    /// `q_{n-1} / q_n`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Largest relative error seen at an exact checkpoint.
    pub fn max_audit_error(&self) -> f64 {
        self.max_audit_error
    }
}

// Product of [[a,1],[1,0]] over the window, returned as the first row (x, y).
// With the convention (q_n, q_{n-1}) = (q_{n-1}, q_{n-2}) [[a,1],[1,0]], the
// denominator after the window is x q_start + y q_{start-1}.
fn window_denominator_coefficients(window: &[Digit]) -> (BigUint, BigUint) {
    fn product(ds: &[Digit]) -> [BigUint; 4] {
        if ds.len() == 1 {
            return [BigUint::from(ds[0]), BigUint::from(1u8), BigUint::from(1u8), BigUint::from(0u8)];
        }
        let (l, r) = ds.split_at(ds.len() / 2);
        let [a, b, c, d] = product(l);
        let [e, f, g, h] = product(r);
        [&a * &e + &b * &g, &a * &f + &b * &h, &c * &e + &d * &g, &c * &f + &d * &h]
    }
    let [a, _, c, _] = product(window);
    (a, c)
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = x.to_string().parse().unwrap_or(f64::INFINITY);
        if f.is_finite() {
            return f.ln();
        }
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ratio_big(num: &BigUint, den: &BigUint) -> f64 {
    (ln_big(num) - ln_big(den)).exp()
}

/// Exact `ln q_n` for a digit prefix, from the integer matrix product.
pub fn exact_log_denominator(digits: &[Digit]) -> f64 {
    if digits.is_empty() {
        return 0.0;
    }
    let (x, _) = window_denominator_coefficients(digits);
    ln_big(&x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub kind: SequenceKind,
    pub convention: Convention,
    #[serde(rename = "N")]
    pub n: u64,
    pub max_digit: Digit,
    pub max_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub pattern: Pattern,
    pub count: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub empirical: f64,
    pub mu: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub logq: f64,
    pub n: u64,
    pub rate: f64,
    pub g_ref: f64,
    pub audit_max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub params: ReportParams,
    pub rows: Vec<ReportRow>,
    pub growth: GrowthSummary,
}

impl NormalityReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }

    pub fn row(&self, pattern: &Pattern) -> Option<&ReportRow> {
        self.rows.iter().find(|r| &r.pattern == pattern)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportConfig {
    pub checkpoint: usize,
    pub max_patterns: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { checkpoint: DEFAULT_CHECKPOINT, max_patterns: DEFAULT_MAX_PATTERNS }
    }
}

/// Empirical frequencies over an explicit pattern list for one stream, plus
/// the growth summary at `N`.
pub fn frequency_report(
    stream: &mut DigitStream,
    patterns: &[Pattern],
    n: u64,
    cfg: ReportConfig,
) -> Result<(Vec<ReportRow>, GrowthSummary)> {
    if patterns.len() > cfg.max_patterns {
        return Err(Error::Resource(format!(
            "{} patterns exceed the limit of {}",
            patterns.len(),
            cfg.max_patterns
        )));
    }
    let mut tracker = FrequencyTracker::new(patterns, n)?;
    let mut growth = GrowthTracker::new(cfg.checkpoint);
    let needed = tracker.required();
    for i in 0..needed {
        let Some(d) = stream.try_next()? else {
            return Err(Error::TooShort { needed: needed as usize, available: i as usize });
        };
        tracker.push(d);
        if i < n {
            growth.push(d);
        }
    }
    let rows = patterns
        .iter()
        .enumerate()
        .map(|(id, p)| {
            let count = tracker.count(id);
            let empirical = count as f64 / n as f64;
            let mu = gauss_measure(p);
            ReportRow { pattern: p.clone(), count, n, empirical, mu, deviation: (empirical - mu).abs() }
        })
        .collect();
    let summary = GrowthSummary {
        logq: growth.logq(),
        n: growth.n(),
        rate: growth.rate(),
        g_ref: KHINCHIN_LEVY_EXPONENT,
        audit_max_rel_error: growth.max_audit_error(),
    };
    Ok((rows, summary))
}

/// Frequencies of every pattern with digits `<= max_digit` and length
/// `<= max_len` in the first `N >= 1000` digits of the kind's stream.
pub fn normality_report(
    kind: SequenceKind,
    convention: Convention,
    n: u64,
    max_digit: Digit,
    max_len: usize,
) -> Result<NormalityReport> {
    normality_report_with(kind, convention, n, max_digit, max_len, ReportConfig::default())
}

pub fn normality_report_with(
    kind: SequenceKind,
    convention: Convention,
    n: u64,
    max_digit: Digit,
    max_len: usize,
    cfg: ReportConfig,
) -> Result<NormalityReport> {
    if n < 1000 {
        return Err(Error::Domain(format!("normality report needs N >= 1000, got {n}")));
    }
    if max_digit == 0 || max_len == 0 {
        return Err(Error::Domain("max_digit and max_len must be positive".into()));
    }
    // guard before materialising the set
    let mut size: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(max_digit as u128);
        size = size.saturating_add(layer);
    }
    if size > cfg.max_patterns as u128 {
        return Err(Error::Resource(format!(
            "{size} patterns exceed the limit of {}",
            cfg.max_patterns
        )));
    }
    let patterns = Pattern::all_up_to(max_digit, max_len);
    let mut stream = DigitStream::new(kind, convention);
    let (rows, growth) = frequency_report(&mut stream, &patterns, n, cfg)?;
    Ok(NormalityReport {
        params: ReportParams { kind, convention, n, max_digit, max_len },
        rows,
        growth,
    })
}

/// Diagnostics for the two growth hypotheses of the concatenation theorem at
/// one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheckpoint {
    #[serde(rename = "N")]
    pub n: u64,
    /// `M(N)`, the number of rationals needed to reach digit `N`.
    #[serde(rename = "M")]
    pub m: u64,
    pub sum_len: u64,
    pub max_len: u64,
    /// Denominator of `r_{f(M)}`.
    pub last_den: u64,
    pub n_over_sum: f64,
    pub n_max_over_sum: f64,
    pub m_over_n: f64,
}

fn checkpoint_of(stream: &DigitStream) -> HypothesisCheckpoint {
    let n = stream.emitted();
    let sum = stream.total_length().max(1) as f64;
    HypothesisCheckpoint {
        n,
        m: stream.rational_count(),
        sum_len: stream.total_length(),
        max_len: stream.max_length(),
        last_den: stream.current().map_or(0, |m| m.den),
        n_over_sum: n as f64 / sum,
        n_max_over_sum: n as f64 * stream.max_length() as f64 / sum,
        m_over_n: if n == 0 { 0.0 } else { stream.rational_count() as f64 / n as f64 },
    }
}

/// Ratios at `N`, `2N`, `4N` (stopping early if a finite stream runs out).
pub fn hypothesis_ratios_for(stream: &mut DigitStream, n: u64) -> Result<Vec<HypothesisCheckpoint>> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(3);
    for target in [n, 2 * n, 4 * n] {
        while stream.emitted() < target {
            if stream.try_next()?.is_none() {
                break;
            }
        }
        out.push(checkpoint_of(stream));
        if stream.emitted() < target {
            break;
        }
    }
    Ok(out)
}

pub fn hypothesis_ratios(kind: SequenceKind, convention: Convention, n: u64) -> Result<Vec<HypothesisCheckpoint>> {
    hypothesis_ratios_for(&mut DigitStream::new(kind, convention), n)
}

/// Encoding of a digit dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DumpFormat {
    /// Space-separated decimal, no trailing newline.
    #[default]
    Text,
    /// Unsigned LEB128 varints, back to back.
    Varint,
}

pub fn dump_header(kind: &str, convention: Convention) -> String {
    format!("cfdigits v1 kind={kind} conv={convention}\n")
}

/// Writes digits in a dump format, tracking separators across calls.
#[derive(Debug)]
pub struct DigitWriter<W: Write> {
    out: W,
    format: DumpFormat,
    first: bool,
}

impl<W: Write> DigitWriter<W> {
    pub fn new(out: W, format: DumpFormat) -> Self {
        Self { out, format, first: true }
    }

    pub fn write_header(&mut self, kind: &str, convention: Convention) -> io::Result<()> {
        self.out.write_all(dump_header(kind, convention).as_bytes())
    }

    pub fn write_digit(&mut self, d: Digit) -> io::Result<()> {
        match self.format {
            DumpFormat::Text => {
                if !self.first {
                    self.out.write_all(b" ")?;
                }
                write!(self.out, "{d}")?;
            }
            DumpFormat::Varint => {
                let mut v = d;
                loop {
                    let byte = (v & 0x7f) as u8;
                    v >>= 7;
                    if v == 0 {
                        self.out.write_all(&[byte])?;
                        break;
                    }
                    self.out.write_all(&[byte | 0x80])?;
                }
            }
        }
        self.first = false;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Parsed digit dump: optional header fields and the digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitDump {
    pub kind: Option<String>,
    pub convention: Option<Convention>,
    pub digits: Vec<Digit>,
}

/// Reads a dump produced by [`DigitWriter`], with or without header.
pub fn read_dump<R: Read>(input: R, format: DumpFormat) -> Result<DigitDump> {
    let mut reader = io::BufReader::new(input);
    let mut dump = DigitDump { kind: None, convention: None, digits: Vec::new() };
    let head = reader.fill_buf().map_err(|e| Error::Domain(e.to_string()))?;
    if head.starts_with(b"cfdigits ") {
        let mut line = String::new();
        reader.read_line(&mut line).map_err(|e| Error::Domain(e.to_string()))?;
        let mut fields = line.split_whitespace();
        fields.next();
        if fields.next() != Some("v1") {
            return Err(Error::Domain("unsupported digit dump version".into()));
        }
        for field in fields {
            match field.split_once('=') {
                Some(("kind", v)) => dump.kind = Some(v.to_string()),
                Some(("conv", v)) => dump.convention = Some(v.parse()?),
                _ => return Err(Error::Domain(format!("bad header field {field:?}"))),
            }
        }
    }
    let mut rest = Vec::new();
    reader.read_to_end(&mut rest).map_err(|e| Error::Domain(e.to_string()))?;
    match format {
        DumpFormat::Text => {
            let text = std::str::from_utf8(&rest).map_err(|_| Error::Domain("dump is not UTF-8".into()))?;
            for tok in text.split_whitespace() {
                let d: Digit = tok.parse().map_err(|_| Error::Domain(format!("bad digit {tok:?}")))?;
                if d == 0 {
                    return Err(Error::InvalidDigits("digit 0 in dump"));
                }
                dump.digits.push(d);
            }
        }
        DumpFormat::Varint => {
            let mut v: u64 = 0;
            let mut shift = 0u32;
            for &b in &rest {
                if shift >= 64 {
                    return Err(Error::Domain("varint overflow".into()));
                }
                v |= ((b & 0x7f) as u64) << shift;
                if b & 0x80 == 0 {
                    dump.digits.push(v);
                    v = 0;
                    shift = 0;
                } else {
                    shift += 7;
                }
            }
            if shift != 0 {
                return Err(Error::Domain("truncated varint".into()));
            }
        }
    }
    Ok(dump)
}

/// Parses whitespace-separated 1-based indices.
pub fn parse_indices(text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| match tok.parse::<u64>() {
            Ok(0) | Err(_) => Err(Error::Domain(format!("bad index {tok:?}"))),
            Ok(i) => Ok(i),
        })
        .collect()
}
