//! Exact continued-fraction arithmetic on rationals in the open unit interval.
//!
//! A rational `p/q` in `(0, 1)` has exactly two finite expansions
//! `<a_1, ..., a_L>`: the *short* one, whose last digit is at least 2, and the
//! *long* one, which ends in `..., a_L - 1, 1`. [`Convention::Long`] is the
//! default everywhere in this crate.
//!
//! All convergent arithmetic is carried out in `u128` with checked
//! operations; an overflow is reported as [`Error::Overflow`], never wrapped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// A single continued-fraction digit (partial quotient), always `>= 1`.
pub type Digit = u64;

/// A rational number `num/den` in lowest terms with `0 < num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u128, u128)", into = "(u128, u128)")]
pub struct Rational {
    num: u128,
    den: u128,
}

impl Rational {
    /// Validates that `num/den` is already reduced and lies strictly inside `(0, 1)`.
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational { num, den, reason: "zero denominator" });
        }
        if num == 0 || num >= den {
            return Err(Error::InvalidRational { num, den, reason: "not in the open interval (0,1)" });
        }
        if gcd(num, den) != 1 {
            return Err(Error::InvalidRational { num, den, reason: "not in lowest terms" });
        }
        Ok(Self { num, den })
    }

    /// Reduces `num/den` first, then validates.
    pub fn reduced(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational { num, den, reason: "zero denominator" });
        }
        let g = gcd(num, den).max(1);
        Self::new(num / g, den / g)
    }

    pub(crate) const fn new_unchecked(num: u128, den: u128) -> Self {
        Self { num, den }
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("expected p/q, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u128>()
                .map_err(|_| Error::Domain(format!("bad integer {t:?} in {s:?}")))
        };
        Self::new(parse(p)?, parse(q)?)
    }
}

impl TryFrom<(u128, u128)> for Rational {
    type Error = Error;

    fn try_from((num, den): (u128, u128)) -> Result<Self> {
        Self::new(num, den)
    }
}

impl From<Rational> for (u128, u128) {
    fn from(r: Rational) -> Self {
        (r.num, r.den)
    }
}

/// A nonnegative fraction in lowest terms, not restricted to `(0, 1)`.
///
/// Used where a value may sit on the boundary, such as cylinder endpoints
/// (`<1> = 1`) or the value of a reversed digit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

impl Fraction {
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact `self < other` by cross multiplication.
    pub fn lt(&self, other: &Fraction) -> Result<bool> {
        let a = self.num.checked_mul(other.den).ok_or(Error::Overflow("fraction comparison"))?;
        let b = other.num.checked_mul(self.den).ok_or(Error::Overflow("fraction comparison"))?;
        Ok(a < b)
    }
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        Self { num: r.num, den: r.den }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Which of the two finite expansions of a rational to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Final digit `>= 2`.
    Short,
    /// Final digit `1`.
    #[default]
    Long,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Short => "short",
            Convention::Long => "long",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "short" => Ok(Convention::Short),
            "long" => Ok(Convention::Long),
            _ => Err(Error::Domain(format!("unknown convention {s:?} (expected short|long)"))),
        }
    }
}

/// A finite continued-fraction expansion `<a_1, ..., a_L>` of a rational in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CfExpansion {
    digits: Vec<Digit>,
    convention: Convention,
}

impl CfExpansion {
    /// Wraps a digit string, inferring the convention from the final digit.
    ///
    /// Rejects the empty string, zero digits, and `[1]` (which is the value 1).
    pub fn from_digits(digits: Vec<Digit>) -> Result<Self> {
        let last = *digits.last().ok_or(Error::InvalidDigits("empty expansion"))?;
        if digits.contains(&0) {
            return Err(Error::InvalidDigits("digits must be >= 1"));
        }
        if digits.len() == 1 && last == 1 {
            return Err(Error::InvalidDigits("<1> is the value 1, outside (0,1)"));
        }
        let convention = if last == 1 { Convention::Long } else { Convention::Short };
        Ok(Self { digits, convention })
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<Digit> {
        self.digits
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `L(r)`, the number of digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Rewrites the tail `<..., a>` <-> `<..., a-1, 1>` to match `conv`.
    pub fn to_convention(&self, conv: Convention) -> CfExpansion {
        if conv == self.convention {
            return self.clone();
        }
        let mut digits = self.digits.clone();
        match conv {
            Convention::Long => {
                let last = digits.last_mut().expect("nonempty");
                *last -= 1;
                digits.push(1);
            }
            Convention::Short => {
                digits.pop();
                *digits.last_mut().expect("long expansions have length >= 2") += 1;
            }
        }
        CfExpansion { digits, convention: conv }
    }

    pub fn convergents(&self) -> Result<Vec<Convergent>> {
        convergents(&self.digits)
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(">")
    }
}

/// The `index`-th convergent `p/q` of a digit string; index 0 is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    pub p: u128,
    pub q: u128,
}

/// Forward convergent recurrence `x_n = a_n x_{n-1} + x_{n-2}` on `(p, q)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Recurrence {
    pub p_prev: u128,
    pub q_prev: u128,
    pub p: u128,
    pub q: u128,
    pub index: usize,
}

impl Recurrence {
    pub fn new() -> Self {
        // (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (0, 1)
        Self { p_prev: 1, q_prev: 0, p: 0, q: 1, index: 0 }
    }

    pub fn push(&mut self, a: Digit) -> Result<()> {
        let a = a as u128;
        let p = a
            .checked_mul(self.p)
            .and_then(|x| x.checked_add(self.p_prev))
            .ok_or(Error::Overflow("convergent numerator"))?;
        let q = a
            .checked_mul(self.q)
            .and_then(|x| x.checked_add(self.q_prev))
            .ok_or(Error::Overflow("convergent denominator"))?;
        self.p_prev = self.p;
        self.q_prev = self.q;
        self.p = p;
        self.q = q;
        self.index += 1;
        Ok(())
    }

    pub fn run(digits: &[Digit]) -> Result<Self> {
        let mut rec = Self::new();
        for &a in digits {
            rec.push(a)?;
        }
        Ok(rec)
    }

    pub fn current(&self) -> Convergent {
        Convergent { index: self.index, p: self.p, q: self.q }
    }

    pub fn previous(&self) -> Convergent {
        Convergent { index: self.index.saturating_sub(1), p: self.p_prev, q: self.q_prev }
    }
}

/// Continued-fraction digits of `num/den` (assumed reduced, `0 < num < den`)
/// appended to `out`. Shared fast path for expansion and digit streams.
pub fn write_digits(mut num: u128, mut den: u128, conv: Convention, out: &mut Vec<Digit>) {
    debug_assert!(num > 0 && num < den);
    while num != 0 {
        out.push((den / num) as Digit);
        let r = den % num;
        den = num;
        num = r;
    }
    if conv == Convention::Long {
        *out.last_mut().expect("nonempty") -= 1;
        out.push(1);
    }
}

/// Expansion of `r` in the requested convention, via the Euclidean algorithm.
pub fn expand(r: Rational, conv: Convention) -> CfExpansion {
    let mut digits = Vec::with_capacity(16);
    write_digits(r.num, r.den, conv, &mut digits);
    CfExpansion { digits, convention: conv }
}

/// The number of digits of `r` under `conv`, without allocating.
pub fn digit_length(r: Rational, conv: Convention) -> usize {
    let (mut num, mut den) = (r.num, r.den);
    let mut len = 0;
    while num != 0 {
        let rem = den % num;
        den = num;
        num = rem;
        len += 1;
    }
    match conv {
        Convention::Short => len,
        Convention::Long => len + 1,
    }
}

/// Exact value of any nonempty digit string with digits `>= 1`.
///
/// The value lies in `(0, 1]`; it is 1 only for `[1]`.
pub fn evaluate_digits(digits: &[Digit]) -> Result<Fraction> {
    if digits.is_empty() {
        return Err(Error::InvalidDigits("empty digit string"));
    }
    if digits.contains(&0) {
        return Err(Error::InvalidDigits("digits must be >= 1"));
    }
    // Backward recurrence: value = 1/(a_1 + 1/(a_2 + ...)).
    let (mut num, mut den): (u128, u128) = (0, 1);
    for &a in digits.iter().rev() {
        let next_den = (a as u128)
            .checked_mul(den)
            .and_then(|x| x.checked_add(num))
            .ok_or(Error::Overflow("evaluate"))?;
        num = den;
        den = next_den;
    }
    Ok(Fraction { num, den })
}

/// Exact rational value of an expansion; inverse of [`expand`].
pub fn evaluate(e: &CfExpansion) -> Result<Rational> {
    let f = evaluate_digits(&e.digits)?;
    Ok(Rational::new_unchecked(f.num, f.den))
}

/// Convergents `p_k/q_k` for `k = 1..=len`.
pub fn convergents(digits: &[Digit]) -> Result<Vec<Convergent>> {
    let mut rec = Recurrence::new();
    let mut out = Vec::with_capacity(digits.len());
    for &a in digits {
        if a == 0 {
            return Err(Error::InvalidDigits("digits must be >= 1"));
        }
        rec.push(a)?;
        out.push(rec.current());
    }
    Ok(out)
}

/// `(p_{n-1}/q_{n-1}, p_n/q_n)` for a digit string of length `n >= 1`.
pub fn convergent_pair(digits: &[Digit]) -> Result<(Convergent, Convergent)> {
    if digits.is_empty() {
        return Err(Error::InvalidDigits("empty digit string"));
    }
    let rec = Recurrence::run(digits)?;
    Ok((rec.previous(), rec.current()))
}

/// The rational whose expansion is `expand(r, conv) ++ expand(r', conv)`,
/// computed as `(u p + v p') / (u q + v q')` where `r = p/q`, `r' = v/u`
/// and `p'/q'` is `r` with its last digit removed.
pub fn concat_rationals(r: Rational, rprime: Rational, conv: Convention) -> Result<Rational> {
    let digits = expand(r, conv).into_digits();
    let (prev, cur) = convergent_pair(&digits)?;
    let (v, u) = (rprime.num, rprime.den);
    let mul_add = |a: u128, x: u128, b: u128, y: u128| {
        a.checked_mul(x)
            .and_then(|ax| b.checked_mul(y).and_then(|by| ax.checked_add(by)))
            .ok_or(Error::Overflow("concatenation"))
    };
    let num = mul_add(u, cur.p, v, prev.p)?;
    let den = mul_add(u, cur.q, v, prev.q)?;
    Ok(Rational::new_unchecked(num, den))
}

/// The Gauss shift `T<a_1, a_2, ...> = <a_2, ...>` on a finite expansion.
///
/// Returns `None` when the shifted value is 0: either the input has length 1,
/// or only a trailing `1` of a long expansion remains (`T(1/(a+1)) = 0`).
pub fn gauss_shift(e: &CfExpansion) -> Option<CfExpansion> {
    let rest = &e.digits[1..];
    match rest {
        [] | [1] => None,
        _ => Some(CfExpansion { digits: rest.to_vec(), convention: e.convention }),
    }
}

/// The Gauss map `x -> 1/x - floor(1/x)`, with `T(0) = 0`.
pub fn gauss_map(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("gauss_map expects 0 <= x < 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let y = 1.0 / x;
    Ok(y - y.floor())
}

/// The reversed digit string; its value is `q_{n-1}/q_n` of the original.
pub fn mirror(digits: &[Digit]) -> Vec<Digit> {
    digits.iter().rev().copied().collect()
}
