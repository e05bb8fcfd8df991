//! Per-rational normality classification, the exceptional sets used in the
//! normality proof (`Gamma`, `Gamma'`, `E`, `F`), exhaustive censuses over a
//! sequence, and Monte Carlo estimates of Gauss measure.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ArithTables;
use crate::cf::{convergents, write_digits, Convention, Digit, Rational};
use crate::enumeration::{admits_den, contains, count_r_with, SequenceKind};
use crate::error::{Error, Result};
use crate::measures::{gauss_measure, GaussDigitSampler, Pattern, KHINCHIN_LEVY_EXPONENT as G};
use crate::stream::{count_patterns, exact_log_denominator, GrowthTracker};

pub use crate::cf::digit_length;

/// Largest denominator bound accepted by a census.
pub const MAX_CENSUS_DEN: u64 = 1 << 15;
/// Largest digit depth a Monte Carlo predicate may request.
pub const MAX_SAMPLE_DEPTH: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityParams {
    pub epsilon: f64,
    pub s: Pattern,
    pub convention: Convention,
}

impl NormalityParams {
    pub fn new(epsilon: f64, s: Pattern, convention: Convention) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0,1), got {epsilon}")));
        }
        Ok(Self { epsilon, s, convention })
    }
}

/// Occurrences of `s` lying wholly inside `digits`, overlaps included.
pub fn occurrences(digits: &[Digit], s: &[Digit]) -> u64 {
    if s.len() > digits.len() {
        return 0;
    }
    digits.windows(s.len()).filter(|w| *w == s).count() as u64
}

/// Both sides of the `(epsilon, s)`-normality test for one rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityVerdict {
    pub normal: bool,
    pub length: usize,
    pub count: u64,
    /// `|A_s(r)/L(r) - mu(C_s)|`
    pub frequency_deviation: f64,
    /// `|ln q / L(r) - g|`
    pub growth_deviation: f64,
}

fn verdict(digits: &[Digit], den: u128, s: &Pattern, mu: f64, epsilon: f64) -> NormalityVerdict {
    let length = digits.len();
    let count = occurrences(digits, s.digits());
    let frequency_deviation = (count as f64 / length as f64 - mu).abs();
    let growth_deviation = ((den as f64).ln() / length as f64 - G).abs();
    NormalityVerdict {
        normal: frequency_deviation < epsilon && growth_deviation < epsilon,
        length,
        count,
        frequency_deviation,
        growth_deviation,
    }
}

/// `r` is `(epsilon, s)`-normal when its own digit string has `s`-frequency
/// within `epsilon` of `mu(C_s)` and `ln q / L(r)` within `epsilon` of `g`.
pub fn is_eps_s_normal(r: Rational, p: &NormalityParams) -> NormalityVerdict {
    let mut digits = Vec::new();
    write_digits(r.num(), r.den(), p.convention, &mut digits);
    verdict(&digits, r.den(), &p.s, gauss_measure(&p.s), p.epsilon)
}

/// `floor((1 - 2 delta) ln m / g)`.
pub fn n_delta(m: u64, delta: f64) -> Result<u64> {
    if m < 3 {
        return Err(Error::Domain(format!("m must be at least 3, got {m}")));
    }
    if !(delta > 0.0 && delta < 1.0 / 3.0) {
        return Err(Error::Domain(format!("delta must lie in (0,1/3), got {delta}")));
    }
    Ok(((1.0 - 2.0 * delta) * (m as f64).ln() / G).floor() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub m: u64,
    pub delta: f64,
    pub eta: f64,
    pub s: Pattern,
    pub n: u64,
}

impl GammaParams {
    /// Fails when the derived prefix length `n` is 0 (the set is then
    /// meaningless since `ln q_0 / 0` is undefined).
    pub fn new(m: u64, delta: f64, eta: f64, s: Pattern) -> Result<Self> {
        let n = n_delta(m, delta)?;
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::Domain(format!("eta must be positive, got {eta}")));
        }
        if n == 0 {
            return Err(Error::Domain(format!("n_delta({m}, {delta}) = 0")));
        }
        Ok(Self { m, delta, eta, s, n })
    }

    /// `(m^{(1-2d)(1-d/12g)} e^{-2g}, m^{(1-2d)(1+d/g)})`, the range a
    /// `Gamma'` prefix pins `q_{n-1} < q_n` into.
    pub fn q_bounds(&self) -> (f64, f64) {
        let lm = (self.m as f64).ln();
        let d = self.delta;
        let lower = ((1.0 - 2.0 * d) * (1.0 - d / (12.0 * G)) * lm - 2.0 * G).exp();
        let upper = ((1.0 - 2.0 * d) * (1.0 + d / G) * lm).exp();
        (lower, upper)
    }
}

fn window_frequency(prefix: &[Digit], s: &Pattern) -> f64 {
    occurrences(prefix, s.digits()) as f64 / prefix.len() as f64
}

/// Exceptional set `Gamma`: `den(r) <= m` and either `L(r) < n`, or the
/// length-`n` prefix has `|ln q_n / n - g| > delta`, or its `s`-frequency is
/// more than `eta` from `mu(C_s)`.
pub fn in_gamma(r: Rational, gp: &GammaParams, conv: Convention) -> bool {
    if r.den() > gp.m as u128 {
        return false;
    }
    let mut digits = Vec::new();
    write_digits(r.num(), r.den(), conv, &mut digits);
    let n = gp.n as usize;
    if digits.len() < n {
        return true;
    }
    let prefix = &digits[..n];
    let qn = convergents(prefix).expect("prefix of a small rational").last().expect("n >= 1").q;
    let growth = ((qn as f64).ln() / n as f64 - G).abs();
    growth > gp.delta || (window_frequency(prefix, &gp.s) - gauss_measure(&gp.s)).abs() > gp.eta
}

/// `Gamma'`: the cylinder of `prefix` (length `n >= 2`) is kept when
/// `|ln q_n/n - g| <= delta`, `|ln q_{n-1}/(n-1) - g| <= delta/12` and the
/// `s`-frequency is within `eta` of `mu(C_s)`.
pub fn gamma_prime_contains(prefix: &[Digit], gp: &GammaParams) -> Result<bool> {
    if prefix.len() as u64 != gp.n {
        return Err(Error::Domain(format!("prefix length {} differs from n = {}", prefix.len(), gp.n)));
    }
    if gp.n < 2 {
        return Err(Error::Domain("Gamma' needs n >= 2".into()));
    }
    if prefix.contains(&0) {
        return Err(Error::InvalidDigits("zero digit"));
    }
    let n = prefix.len();
    let cs = convergents(prefix)?;
    let (qn1, qn) = (cs[n - 2].q as f64, cs[n - 1].q as f64);
    Ok((qn.ln() / n as f64 - G).abs() <= gp.delta
        && (qn1.ln() / (n - 1) as f64 - G).abs() <= gp.delta / 12.0
        && (window_frequency(prefix, &gp.s) - gauss_measure(&gp.s)).abs() <= gp.eta)
}

/// `E_{epsilon,s,N}`: `|A_s(N) - mu(C_s) N| > epsilon mu(C_s) N`, decided from
/// the first `N + k - 1` digits.
pub fn in_e_set(digits: &[Digit], epsilon: f64, s: &Pattern, n: u64) -> Result<bool> {
    let counts = count_patterns(digits.iter().copied(), std::slice::from_ref(s), n)?;
    let a = counts[s] as f64;
    let mu = gauss_measure(s);
    let nf = n as f64;
    Ok((a - mu * nf).abs() > epsilon * mu * nf)
}

// Float and exact log-denominators agree far below this margin.
const F_SET_EXACT_MARGIN: f64 = 1e-7;

/// `F_{epsilon,N}`: `|ln q_N / N - g| > epsilon`, with `q_N` of the first `N` digits.
pub fn in_f_set(digits: &[Digit], epsilon: f64, n: u64) -> Result<bool> {
    let n_usize = n as usize;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if digits.len() < n_usize {
        return Err(Error::TooShort { needed: n_usize, available: digits.len() });
    }
    let prefix = &digits[..n_usize];
    let mut tracker = GrowthTracker::new(0);
    prefix.iter().for_each(|&a| tracker.push(a));
    let mut dev = (tracker.rate() - G).abs();
    if (dev - epsilon).abs() < F_SET_EXACT_MARGIN {
        dev = (exact_log_denominator(prefix) / n as f64 - G).abs();
    }
    Ok(dev > epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub kind: SequenceKind,
    pub m: u64,
    /// Denominators covered: `den_lo..=m`.
    pub den_lo: u64,
    pub epsilon: f64,
    pub s: Pattern,
    pub convention: Convention,
    pub total: u64,
    pub abnormal: u64,
    pub ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

impl CensusReport {
    /// Combine reports over adjacent denominator ranges (`self` below `other`).
    pub fn merge(&self, other: &CensusReport) -> Result<CensusReport> {
        if self.kind != other.kind
            || self.epsilon != other.epsilon
            || self.s != other.s
            || self.convention != other.convention
            || other.den_lo != self.m + 1
        {
            return Err(Error::Domain("census reports are not adjacent runs of one configuration".into()));
        }
        let total = self.total + other.total;
        let abnormal = self.abnormal + other.abnormal;
        Ok(CensusReport {
            m: other.m,
            den_lo: self.den_lo,
            total,
            abnormal,
            ratio: ratio(abnormal, total),
            wall_seconds: match (self.wall_seconds, other.wall_seconds) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            ..self.clone()
        })
    }

    /// `abnormal * ln m / m^2`.
    pub fn scaled_abnormal(&self) -> f64 {
        let m = self.m as f64;
        self.abnormal as f64 * m.ln() / (m * m)
    }

    pub const CSV_HEADER: &'static str = "m,kind,eps,s,total,abnormal,ratio";

    pub fn csv_row(&self) -> String {
        let s: Vec<String> = self.s.digits().iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.m,
            self.kind,
            self.epsilon,
            s.join(" "),
            self.total,
            self.abnormal,
            self.ratio
        )
    }
}

fn ratio(abnormal: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        abnormal as f64 / total as f64
    }
}

/// Classify every member of `R(m)` for `kind`.
pub fn run_census(kind: SequenceKind, m: u64, p: &NormalityParams) -> Result<CensusReport> {
    run_census_range(kind, 2, m, p)
}

/// Census restricted to denominators in `den_lo..=m`.
pub fn run_census_range(kind: SequenceKind, den_lo: u64, m: u64, p: &NormalityParams) -> Result<CensusReport> {
    if m < 3 {
        return Err(Error::Domain(format!("census needs m >= 3, got {m}")));
    }
    if m > MAX_CENSUS_DEN {
        return Err(Error::Resource(format!("census bound {m} exceeds {MAX_CENSUS_DEN}")));
    }
    if den_lo < 2 || den_lo > m {
        return Err(Error::Domain(format!("denominator range {den_lo}..={m} is empty")));
    }
    let start = Instant::now();
    let tables = ArithTables::build(m)?;
    let mu = gauss_measure(&p.s);
    let (total, abnormal) = (den_lo..=m)
        .into_par_iter()
        .map(|q| {
            if !admits_den(&tables, kind, q) {
                return (0u64, 0u64);
            }
            let mut digits = Vec::with_capacity(32);
            let (mut total, mut abnormal) = (0, 0);
            for num in 1..q {
                if !contains(&tables, kind, num, q) {
                    continue;
                }
                let r = Rational::reduced(num as u128, q as u128).expect("member in (0,1)");
                digits.clear();
                write_digits(r.num(), r.den(), p.convention, &mut digits);
                total += 1;
                if !verdict(&digits, r.den(), &p.s, mu, p.epsilon).normal {
                    abnormal += 1;
                }
            }
            (total, abnormal)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if den_lo == 2 {
        debug_assert_eq!(Some(total), count_r_with(&tables, kind, m).ok());
    }
    Ok(CensusReport {
        kind,
        m,
        den_lo,
        epsilon: p.epsilon,
        s: p.s.clone(),
        convention: p.convention,
        total,
        abnormal,
        ratio: ratio(abnormal, total),
        wall_seconds: Some(start.elapsed().as_secs_f64()),
    })
}

/// `|Gamma|` and the number of reduced fractions with denominator `<= m`.
pub fn gamma_census(gp: &GammaParams, conv: Convention) -> Result<(u64, u64)> {
    if gp.m > MAX_CENSUS_DEN {
        return Err(Error::Resource(format!("census bound {} exceeds {MAX_CENSUS_DEN}", gp.m)));
    }
    Ok((2..=gp.m)
        .into_par_iter()
        .map(|q| {
            let (mut inside, mut total) = (0u64, 0u64);
            for num in 1..q {
                if let Ok(r) = Rational::new(num as u128, q as u128) {
                    total += 1;
                    if in_gamma(r, gp, conv) {
                        inside += 1;
                    }
                }
            }
            (inside, total)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        Estimate { estimate: mean, stderr: (var / nf).sqrt(), samples: n }
    }
}

/// A statistic of a sampled digit prefix, for mixing closures in [`estimate_means`].
pub type DigitStat<'a> = dyn Fn(&[Digit]) -> f64 + Sync + 'a;

const SAMPLE_BLOCK: u64 = 1024;

/// Means of several statistics of the same Gauss-distributed digit prefixes.
///
/// Each sample is an exact draw of `depth` digits from the Gauss measure.
/// Samples are split into fixed blocks with independent ChaCha streams, so
/// results do not depend on the thread count.
pub fn estimate_means<F>(stats: &[F], depth: usize, n_samples: u64, seed: u64) -> Result<Vec<Estimate>>
where
    F: Fn(&[Digit]) -> f64 + Sync,
{
    if n_samples < 1000 {
        return Err(Error::Domain(format!("need at least 1000 samples, got {n_samples}")));
    }
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    if depth > MAX_SAMPLE_DEPTH {
        return Err(Error::Resource(format!("depth {depth} exceeds {MAX_SAMPLE_DEPTH}")));
    }
    let blocks = n_samples.div_ceil(SAMPLE_BLOCK);
    let k = stats.len();
    let sums = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = SAMPLE_BLOCK.min(n_samples - b * SAMPLE_BLOCK);
            let mut acc = vec![(0.0f64, 0.0f64); k];
            let mut digits = Vec::with_capacity(depth);
            for _ in 0..count {
                digits.clear();
                GaussDigitSampler::new().fill(&mut rng, &mut digits, depth);
                for (a, f) in acc.iter_mut().zip(stats) {
                    let v = f(&digits);
                    a.0 += v;
                    a.1 += v * v;
                }
            }
            acc
        })
        .reduce(
            || vec![(0.0, 0.0); k],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| {
                    x.0 += y.0;
                    x.1 += y.1;
                });
                a
            },
        );
    Ok(sums.into_iter().map(|(s, s2)| Estimate::from_sums(s, s2, n_samples)).collect())
}

/// Gauss measure of the set of points whose first `depth` digits satisfy
/// `predicate`, with binomial standard error.
pub fn estimate_measure<P>(predicate: P, depth: usize, n_samples: u64, seed: u64) -> Result<Estimate>
where
    P: Fn(&[Digit]) -> bool + Sync,
{
    let stat = |d: &[Digit]| if predicate(d) { 1.0 } else { 0.0 };
    Ok(estimate_means(&[stat], depth, n_samples, seed)?[0])
}
