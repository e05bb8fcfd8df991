//! Cylinder sets `C_s`, their Gauss and Lebesgue measures, and the
//! constants `g = pi^2 / (12 ln 2)` and `G = (1 + sqrt 5) / 2`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cf::{convergent_pair, Digit, Fraction, Rational};
use crate::error::{Error, Result};

/// A nonempty string `s = [d_1, ..., d_k]` of positive digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Digit>", into = "Vec<Digit>")]
pub struct Pattern(Vec<Digit>);

impl Pattern {
    pub fn new(digits: Vec<Digit>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidDigits("pattern must be nonempty"));
        }
        if digits.contains(&0) {
            return Err(Error::InvalidDigits("pattern digits must be >= 1"));
        }
        Ok(Self(digits))
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    /// `k`, the rank of the cylinder.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reversed(&self) -> Pattern {
        Pattern(self.0.iter().rev().copied().collect())
    }

    /// All patterns with digits in `1..=max_digit` and length `1..=max_len`,
    /// shortest first, lexicographic within a length.
    pub fn all_up_to(max_digit: Digit, max_len: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<Digit>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * max_digit as usize);
            for prefix in &layer {
                for d in 1..=max_digit {
                    let mut p = prefix.clone();
                    p.push(d);
                    next.push(p);
                }
            }
            out.extend(next.iter().cloned().map(Pattern));
            layer = next;
        }
        out
    }
}

impl TryFrom<Vec<Digit>> for Pattern {
    type Error = Error;

    fn try_from(v: Vec<Digit>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Pattern> for Vec<Digit> {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// Parses `1,2`, `[1,2]` or `1 2`.
impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let digits = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<Digit>()
                    .map_err(|_| Error::Domain(format!("bad pattern digit {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(digits)
    }
}

/// Exact geometry of a cylinder: the endpoints `<d_1..d_k>` and
/// `<d_1..d_k + 1>`, ordered so that `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CylinderGeometry {
    pub lower: Fraction,
    pub upper: Fraction,
    pub pn: u128,
    pub qn: u128,
    pub pn1: u128,
    pub qn1: u128,
}

impl CylinderGeometry {
    /// Half-open membership `lower <= x < upper`.
    pub fn contains(&self, x: Fraction) -> Result<bool> {
        Ok(!x.lt(&self.lower)? && x.lt(&self.upper)?)
    }
}

pub fn cylinder_geometry(s: &Pattern) -> Result<CylinderGeometry> {
    let (prev, cur) = convergent_pair(s.digits())?;
    let mediant = Fraction {
        num: cur.p.checked_add(prev.p).ok_or(Error::Overflow("cylinder endpoint"))?,
        den: cur.q.checked_add(prev.q).ok_or(Error::Overflow("cylinder endpoint"))?,
    };
    let conv = Fraction { num: cur.p, den: cur.q };
    // The convergent is the right endpoint for odd rank.
    let (lower, upper) = if s.len() % 2 == 1 { (mediant, conv) } else { (conv, mediant) };
    Ok(CylinderGeometry { lower, upper, pn: cur.p, qn: cur.q, pn1: prev.p, qn1: prev.q })
}

/// `lambda(C_s) = 1 / (q_n (q_n + q_{n-1}))`, exactly.
pub fn lebesgue_measure(s: &Pattern) -> Result<Rational> {
    let (prev, cur) = convergent_pair(s.digits())?;
    let den = cur
        .q
        .checked_add(prev.q)
        .and_then(|x| x.checked_mul(cur.q))
        .ok_or(Error::Overflow("lebesgue measure"))?;
    Rational::new(1, den)
}

/// `mu(C_s)` for the Gauss measure.
///
/// With `B = q_n (p_{n-1} + p_n + q_{n-1} + q_n)` the exact identity
/// `mu(C_s) = |log(1 + (-1)^(n-1) / B)| / ln 2` holds, so only one well
/// conditioned `ln_1p` is evaluated. Strings whose convergents overflow
/// `u128` fall back to a log-domain evaluation of `B`.
pub fn gauss_measure(s: &Pattern) -> f64 {
    let sign = if s.len() % 2 == 1 { 1.0 } else { -1.0 };
    match convergent_pair(s.digits()) {
        Ok((prev, cur)) => {
            let b = cur.q as f64 * (prev.p as f64 + cur.p as f64 + prev.q as f64 + cur.q as f64);
            (sign / b).ln_1p().abs() / LN_2
        }
        Err(_) => gauss_measure_log_domain(s.digits()),
    }
}

fn gauss_measure_log_domain(digits: &[Digit]) -> f64 {
    // alpha = q_{n-1}/q_n, x_n = p_n/q_n, both bounded; ln q_n accumulates.
    let (mut alpha, mut ln_q) = (0.0f64, 0.0f64);
    let (mut x_prev, mut x) = (0.0f64, 0.0f64);
    let (mut p_prev, mut p, mut q_prev, mut q) = (1.0f64, 0.0f64, 0.0f64, 1.0f64);
    for &a in digits {
        let a = a as f64;
        ln_q += (a + alpha).ln();
        alpha = 1.0 / (a + alpha);
        let (np, nq) = (a * p + p_prev, a * q + q_prev);
        p_prev = p;
        q_prev = q;
        p = np;
        q = nq;
        let scale = q.max(1.0);
        p /= scale;
        q /= scale;
        p_prev /= scale;
        q_prev /= scale;
        x_prev = x;
        x = p / q;
    }
    let ln_b = 2.0 * ln_q + (x_prev * alpha + x + alpha + 1.0).ln();
    (-ln_b).exp() / LN_2
}

/// `(1/ln 2) |ln((1 + upper)/(1 + lower))|` evaluated from the endpoints in
/// floating point. Loses accuracy for deep cylinders; kept as a cross-check.
pub fn gauss_measure_from_endpoints(geom: &CylinderGeometry) -> f64 {
    ((1.0 + geom.upper.to_f64()) / (1.0 + geom.lower.to_f64())).ln().abs() / LN_2
}

/// Constants of the continued-fraction dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// `g = pi^2 / (12 ln 2)`, the almost-sure limit of `ln q_N / N`.
    pub g: f64,
    /// The golden ratio `G`; `q_n >= F_{n+1} ~ G^n`.
    pub golden: f64,
    pub log2: f64,
    /// `exp(g)`, the Khinchin-Levy constant.
    pub khinchin_levy: f64,
}

pub const KHINCHIN_LEVY_EXPONENT: f64 = PI * PI / (12.0 * LN_2);
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

pub fn constants() -> Constants {
    Constants {
        g: KHINCHIN_LEVY_EXPONENT,
        golden: GOLDEN_RATIO,
        log2: LN_2,
        khinchin_levy: KHINCHIN_LEVY_EXPONENT.exp(),
    }
}

/// Inverse-CDF sampler: for `u` uniform on `(0, 1)`, `2^u - 1` is Gauss distributed
/// because `mu([0, x]) = log2(1 + x)`.
pub fn sample_gauss(u: f64) -> f64 {
    (u * LN_2).exp_m1()
}

/// Draws the continued-fraction digits of a Gauss-distributed point one at a time.
///
/// Conditioned on the first `n` digits, `y = T^n x` has density proportional
/// to `1 / ((1 + alpha y)(1 + beta y))` with `alpha = q_{n-1}/q_n` and
/// `beta = (p_{n-1} + q_{n-1}) / (p_n + q_n)`. Each digit is drawn from that
/// conditional law by inverting its CDF, so the joint law of any prefix is
/// exactly `mu` up to one rounding per draw. The first draw is
/// [`sample_gauss`].
#[derive(Debug, Clone, Copy)]
pub struct GaussDigitSampler {
    alpha: f64,
    beta: f64,
}

impl Default for GaussDigitSampler {
    fn default() -> Self {
        Self::new()
    }
}

// Below this gap the two factors are treated as equal; the induced density
// error is of the same order.
const MERGE_GAP: f64 = 1e-9;
const MAX_SAMPLED_DIGIT: f64 = (1u64 << 52) as f64;

impl GaussDigitSampler {
    pub fn new() -> Self {
        Self { alpha: 0.0, beta: 1.0 }
    }

    /// The point `y = T^n x` given the digits drawn so far.
    pub fn sample_tail<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        let (a, b) = (self.alpha, self.beta);
        if (a - b).abs() < MERGE_GAP {
            u / (1.0 + a - u * a)
        } else {
            let c = u * ((a - b) / (1.0 + b)).ln_1p();
            let e = c.exp_m1();
            e / (a - b - b * e)
        }
    }

    pub fn next_digit<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Digit {
        let y = self.sample_tail(rng);
        let inv = 1.0 / y;
        let d = if inv.is_finite() && inv < MAX_SAMPLED_DIGIT { inv.floor().max(1.0) } else { MAX_SAMPLED_DIGIT };
        self.alpha = 1.0 / (d + self.alpha);
        self.beta = 1.0 / (d + self.beta);
        d as Digit
    }

    pub fn fill<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut Vec<Digit>, count: usize) {
        out.reserve(count);
        for _ in 0..count {
            out.push(self.next_digit(rng));
        }
    }
}

/// Digits of a real `x` in `[0, 1)` by iterating the Gauss map in double
/// precision. Only the first dozen or so digits are reliable.
pub fn float_digits(mut x: f64, depth: usize) -> Vec<Digit> {
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        if x <= 0.0 {
            break;
        }
        let inv = 1.0 / x;
        let a = inv.floor();
        out.push(a.min(MAX_SAMPLED_DIGIT) as Digit);
        x = inv - a;
    }
    out
}

/// Convergent denominators are at least Fibonacci numbers: `q_n >= F_{n+1}`.
pub fn fibonacci(n: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    a
}
