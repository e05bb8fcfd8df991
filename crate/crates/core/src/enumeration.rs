//! The rational sequences that get concatenated: all fractions in `(0, 1)`
//! (with or without duplicates), squarefree-over-squarefree, and the three
//! prime-constrained families. Every kind is ordered by ascending
//! denominator, then ascending numerator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, mobius_count, ArithTables};
use crate::cf::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    /// Every pair `p/q` with `1 <= p < q`, unreduced (`2/4` appears).
    #[serde(rename = "aks-dup")]
    AllWithDuplicates,
    /// Every reduced fraction in `(0, 1)`.
    #[serde(rename = "all")]
    AllLowestTerms,
    /// Reduced fractions with squarefree numerator and denominator.
    #[serde(rename = "squarefree")]
    SquarefreeBoth,
    /// Reduced fractions with prime denominator.
    #[serde(rename = "nat-prime")]
    NatOverPrime,
    /// Reduced fractions with prime numerator.
    #[serde(rename = "prime-nat")]
    PrimeOverNat,
    /// Prime numerator and prime denominator.
    #[serde(rename = "prime-prime")]
    PrimeOverPrime,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 6] = [
        SequenceKind::AllLowestTerms,
        SequenceKind::AllWithDuplicates,
        SequenceKind::SquarefreeBoth,
        SequenceKind::NatOverPrime,
        SequenceKind::PrimeOverNat,
        SequenceKind::PrimeOverPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::AllWithDuplicates => "aks-dup",
            SequenceKind::AllLowestTerms => "all",
            SequenceKind::SquarefreeBoth => "squarefree",
            SequenceKind::NatOverPrime => "nat-prime",
            SequenceKind::PrimeOverNat => "prime-nat",
            SequenceKind::PrimeOverPrime => "prime-prime",
        }
    }

    /// Whether members are reduced fractions (everything except the AKS
    /// sequence with duplicates).
    pub fn is_lowest_terms(self) -> bool {
        self != SequenceKind::AllWithDuplicates
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "all" | "aks" | "lowest" => SequenceKind::AllLowestTerms,
            "aks-dup" | "dup" | "all-dup" => SequenceKind::AllWithDuplicates,
            "squarefree" | "sqf" => SequenceKind::SquarefreeBoth,
            "nat-prime" | "type1" => SequenceKind::NatOverPrime,
            "prime-nat" | "type2" => SequenceKind::PrimeOverNat,
            "prime-prime" | "type3" => SequenceKind::PrimeOverPrime,
            _ => return Err(Error::Domain(format!("unknown sequence kind {s:?}"))),
        })
    }
}

/// One element of a sequence as listed: `num/den` with `1 <= num < den`.
///
/// Only [`SequenceKind::AllWithDuplicates`] yields unreduced pairs; its
/// digits are those of the reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Member {
    pub num: u64,
    pub den: u64,
}

impl Member {
    pub fn rational(&self) -> Rational {
        Rational::reduced(self.num as u128, self.den as u128).expect("members lie in (0,1)")
    }
}

impl From<Rational> for Member {
    fn from(r: Rational) -> Self {
        Member { num: r.num() as u64, den: r.den() as u64 }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Sieve tables that grow by doubling as larger denominators are requested.
#[derive(Debug, Clone)]
pub(crate) struct GrowingSieve {
    tables: ArithTables,
}

impl GrowingSieve {
    pub fn new(limit: u64) -> Self {
        Self { tables: ArithTables::build(limit.max(64)).expect("initial sieve fits") }
    }

    pub fn covering(&mut self, n: u64) -> &ArithTables {
        if n > self.tables.limit() {
            let mut limit = self.tables.limit();
            while limit < n {
                limit *= 2;
            }
            self.tables = ArithTables::build(limit).expect("sieve limit within bounds");
        }
        &self.tables
    }

    pub fn tables(&self) -> &ArithTables {
        &self.tables
    }
}

fn prime_pi(t: &ArithTables, x: u64) -> u64 {
    t.primes().partition_point(|&p| (p as u64) <= x) as u64
}

/// Whether some member of `kind` has denominator `q`.
pub(crate) fn admits_den(t: &ArithTables, kind: SequenceKind, q: u64) -> bool {
    match kind {
        SequenceKind::SquarefreeBoth => t.is_squarefree(q),
        SequenceKind::NatOverPrime | SequenceKind::PrimeOverPrime => t.is_prime(q),
        _ => q >= 2,
    }
}

/// Membership of the pair `p/q` (tables must cover `q`).
pub(crate) fn contains(t: &ArithTables, kind: SequenceKind, p: u64, q: u64) -> bool {
    if p == 0 || p >= q {
        return false;
    }
    match kind {
        SequenceKind::AllWithDuplicates => true,
        SequenceKind::AllLowestTerms => gcd_u64(p, q) == 1,
        SequenceKind::SquarefreeBoth => {
            t.is_squarefree(q) && t.is_squarefree(p) && gcd_u64(p, q) == 1
        }
        SequenceKind::NatOverPrime => t.is_prime(q),
        SequenceKind::PrimeOverNat => t.is_prime(p) && !q.is_multiple_of(p),
        SequenceKind::PrimeOverPrime => t.is_prime(p) && t.is_prime(q),
    }
}

/// Squarefree `l <= x` coprime to `q`, as
/// `sum_{d <= sqrt x, (d,q)=1} mu(d) #{t <= x/d^2 : (t,q)=1}`.
fn squarefree_coprime_count(t: &ArithTables, x: u64, q_primes: &[u64]) -> u64 {
    let mut total: i128 = 0;
    let mut d = 1u64;
    while d * d <= x {
        if t.is_squarefree(d) && q_primes.iter().all(|&p| !d.is_multiple_of(p)) {
            let factors = t.prime_factors(d);
            let c = mobius_count(x / (d * d), q_primes) as i128;
            if factors.len().is_multiple_of(2) {
                total += c;
            } else {
                total -= c;
            }
        }
        d += 1;
    }
    total as u64
}

/// Number of members with denominator exactly `q` and numerator `<= x`.
pub(crate) fn rank_at_den(t: &ArithTables, kind: SequenceKind, x: u64, q: u64) -> u64 {
    if !admits_den(t, kind, q) {
        return 0;
    }
    let x = x.min(q - 1);
    match kind {
        SequenceKind::AllWithDuplicates | SequenceKind::NatOverPrime => x,
        SequenceKind::AllLowestTerms => mobius_count(x, &t.prime_factors(q)),
        SequenceKind::SquarefreeBoth => squarefree_coprime_count(t, x, &t.prime_factors(q)),
        SequenceKind::PrimeOverNat => {
            let dividing = t.prime_factors(q).iter().filter(|&&p| p <= x).count() as u64;
            prime_pi(t, x) - dividing
        }
        SequenceKind::PrimeOverPrime => prime_pi(t, x),
    }
}

/// Number of members with denominator exactly `q`.
pub(crate) fn count_at_den(t: &ArithTables, kind: SequenceKind, q: u64) -> u64 {
    match kind {
        SequenceKind::AllLowestTerms => t.phi(q),
        _ => rank_at_den(t, kind, q - 1, q),
    }
}

/// `|R(m)|` using prebuilt tables covering `m`.
pub fn count_r_with(t: &ArithTables, kind: SequenceKind, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Domain(format!("count_R needs m >= 2, got {m}")));
    }
    if m > t.limit() {
        return Err(Error::Domain(format!("m = {m} exceeds table limit {}", t.limit())));
    }
    Ok(match kind {
        SequenceKind::AllWithDuplicates => m * (m - 1) / 2,
        SequenceKind::AllLowestTerms => t.phi_summatory(m)? - 1,
        _ => (2..=m).map(|q| count_at_den(t, kind, q)).sum(),
    })
}

/// `|R(m)|`: members of `kind` with denominator at most `m`, counted from
/// sieve tables without enumerating them.
pub fn count_r(kind: SequenceKind, m: u64) -> Result<u64> {
    let t = ArithTables::build(m.max(2))?;
    count_r_with(&t, kind, m)
}

/// Random access into one sequence kind, caching per-denominator prefix counts.
#[derive(Debug, Clone)]
pub struct Enumerator {
    kind: SequenceKind,
    sieve: GrowingSieve,
    // prefix[q] = number of members with denominator < q
    prefix: Vec<u64>,
}

impl Enumerator {
    pub fn new(kind: SequenceKind) -> Self {
        Self { kind, sieve: GrowingSieve::new(1024), prefix: vec![0, 0, 0] }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    fn extend_prefix_to(&mut self, q: u64) {
        let t = self.sieve.covering(q);
        while (self.prefix.len() as u64) <= q {
            let next_q = self.prefix.len() as u64 - 1;
            let last = *self.prefix.last().expect("seeded");
            self.prefix.push(last + count_at_den(t, self.kind, next_q));
        }
    }

    /// The `i`-th member (1-based).
    pub fn rational_at(&mut self, i: u64) -> Result<Member> {
        if i == 0 {
            return Err(Error::Domain("sequence indices start at 1".into()));
        }
        // find the smallest q with prefix[q + 1] >= i
        let mut q = 2u64;
        loop {
            self.extend_prefix_to(q + 1);
            if self.prefix[q as usize + 1] >= i {
                break;
            }
            q += 1;
        }
        let within = i - self.prefix[q as usize];
        let t = self.sieve.tables();
        let (mut lo, mut hi) = (1u64, q - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if rank_at_den(t, self.kind, mid, q) >= within {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        debug_assert!(contains(t, self.kind, lo, q));
        Ok(Member { num: lo, den: q })
    }

    /// Index (1-based) of the pair `num/den`, which must be a member.
    pub fn index_of_pair(&mut self, num: u64, den: u64) -> Result<u64> {
        self.extend_prefix_to(den);
        let t = self.sieve.tables();
        if !contains(t, self.kind, num, den) {
            return Err(Error::NotMember { kind: self.kind.name(), num: num as u128, den: den as u128 });
        }
        Ok(self.prefix[den as usize] + rank_at_den(t, self.kind, num, den))
    }

    pub fn index_of(&mut self, r: Rational) -> Result<u64> {
        self.index_of_pair(r.num() as u64, r.den() as u64)
    }
}

pub fn rational_at(kind: SequenceKind, i: u64) -> Result<Member> {
    Enumerator::new(kind).rational_at(i)
}

pub fn index_of(kind: SequenceKind, r: Rational) -> Result<u64> {
    Enumerator::new(kind).index_of(r)
}

/// Sequential walk over a kind's members in order.
#[derive(Debug, Clone)]
pub struct RationalCursor {
    kind: SequenceKind,
    sieve: GrowingSieve,
    index: u64,
    den: u64,
    num: u64,
    // primes below the current denominator, for the prime-numerator kinds
    prime_pos: usize,
}

impl RationalCursor {
    pub fn new(kind: SequenceKind) -> Self {
        Self { kind, sieve: GrowingSieve::new(1024), index: 0, den: 2, num: 0, prime_pos: 0 }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// Index of the most recently returned member (0 before the first).
    pub fn index(&self) -> u64 {
        self.index
    }

    fn advance_den(&mut self) {
        self.den += 1;
        self.num = 0;
        self.prime_pos = 0;
    }
}

impl Iterator for RationalCursor {
    type Item = Member;

    fn next(&mut self) -> Option<Member> {
        loop {
            let q = self.den;
            let kind = self.kind;
            let t = self.sieve.covering(q);
            if !admits_den(t, kind, q) {
                self.advance_den();
                continue;
            }
            let found = match kind {
                SequenceKind::PrimeOverNat | SequenceKind::PrimeOverPrime => {
                    let primes = t.primes();
                    let mut found = None;
                    while let Some(&p) = primes.get(self.prime_pos) {
                        let p = p as u64;
                        if p >= q {
                            break;
                        }
                        self.prime_pos += 1;
                        if kind == SequenceKind::PrimeOverPrime || !q.is_multiple_of(p) {
                            found = Some(p);
                            break;
                        }
                    }
                    found
                }
                _ => {
                    let mut found = None;
                    let mut p = self.num + 1;
                    while p < q {
                        if contains(t, kind, p, q) {
                            found = Some(p);
                            break;
                        }
                        p += 1;
                    }
                    found
                }
            };
            match found {
                Some(p) => {
                    self.num = p;
                    self.index += 1;
                    return Some(Member { num: p, den: q });
                }
                None => self.advance_den(),
            }
        }
    }
}

/// `R(m)` in sequence order.
pub fn enumerate_r(kind: SequenceKind, m: u64) -> impl Iterator<Item = Member> {
    RationalCursor::new(kind).take_while(move |r| r.den <= m)
}
