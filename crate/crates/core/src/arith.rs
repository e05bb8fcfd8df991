//! Integer tables and counting functions: a linear sieve carrying Euler's
//! phi, divisor counts and squarefree flags, deterministic Miller-Rabin,
//! and the counters `pi'(x; q, a)` / `pi'(x; q, a; q', a')` for primes in
//! linear forms.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`ArithTables::build`].
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Tables over `0..=limit` from one pass of the linear (Euler) sieve.
#[derive(Debug, Clone)]
pub struct ArithTables {
    limit: u64,
    lpf: Vec<u32>,
    phi: Vec<u32>,
    divisors: Vec<u16>,
    squarefree: Vec<bool>,
    primes: Vec<u32>,
}

impl ArithTables {
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}"
            )));
        }
        let n = limit as usize;
        let mut lpf = vec![0u32; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut divisors = vec![0u16; n + 1];
        let mut squarefree = vec![true; n + 1];
        // exponent of the least prime factor
        let mut lpf_exp = vec![0u8; n + 1];
        let mut primes = Vec::with_capacity(if n > 10 { n / ((n as f64).ln() as usize) * 5 / 4 } else { 8 });

        phi[1] = 1;
        divisors[1] = 1;
        squarefree[0] = false;
        for i in 2..=n {
            if lpf[i] == 0 {
                lpf[i] = i as u32;
                phi[i] = (i - 1) as u32;
                divisors[i] = 2;
                lpf_exp[i] = 1;
                primes.push(i as u32);
            }
            let lpf_i = lpf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > lpf_i || ip > n {
                    break;
                }
                lpf[ip] = p;
                if p == lpf_i {
                    let e = lpf_exp[i];
                    lpf_exp[ip] = e + 1;
                    phi[ip] = phi[i] * p;
                    divisors[ip] = divisors[i] / (e as u16 + 1) * (e as u16 + 2);
                    squarefree[ip] = false;
                } else {
                    lpf_exp[ip] = 1;
                    phi[ip] = phi[i] * (p - 1);
                    divisors[ip] = divisors[i] * 2;
                    squarefree[ip] = squarefree[i];
                }
            }
        }
        Ok(Self { limit, lpf, phi, divisors, squarefree, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.lpf[n as usize] as u64 == n
    }

    /// Table lookup inside the sieve range, Miller-Rabin beyond it.
    pub fn is_prime_any(&self, n: u64) -> bool {
        if n <= self.limit {
            self.is_prime(n)
        } else {
            is_prime_u64(n)
        }
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize] as u64
    }

    pub fn divisor_count(&self, n: u64) -> u64 {
        self.divisors[n as usize] as u64
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.squarefree[n as usize]
    }

    pub fn least_prime_factor(&self, n: u64) -> Option<u64> {
        (n >= 2).then(|| self.lpf[n as usize] as u64)
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Distinct prime factors of `n <= limit`, ascending.
    pub fn prime_factors(&self, mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.lpf[n as usize] as u64;
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        out
    }

    /// Exact `sum_{n <= m} phi(n)`.
    pub fn phi_summatory(&self, m: u64) -> Result<u64> {
        self.check_range(m)?;
        Ok(self.phi[1..=m as usize].iter().map(|&x| x as u64).sum())
    }

    /// Number of `l <= x` with `gcd(l, m) = 1` (any `x`, `m <= limit`).
    pub fn coprime_count(&self, x: u64, m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::Domain("coprime_count needs m >= 1".into()));
        }
        self.check_range(m)?;
        Ok(mobius_count(x, &self.prime_factors(m)))
    }

    fn check_range(&self, m: u64) -> Result<()> {
        if m > self.limit {
            return Err(Error::Domain(format!("{m} exceeds table limit {}", self.limit)));
        }
        Ok(())
    }
}

/// Distinct prime factors by trial division.
pub fn factor_distinct(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `sum_{d | rad} mu(d) floor(x / d)` over the squarefree divisors built from `primes`.
pub(crate) fn mobius_count(x: u64, primes: &[u64]) -> u64 {
    fn go(x: u64, primes: &[u64], d: u64, sign: bool, acc: &mut i128) {
        let term = (x / d) as i128;
        *acc += if sign { -term } else { term };
        for (i, &p) in primes.iter().enumerate() {
            match d.checked_mul(p) {
                Some(nd) if nd <= x => go(x, &primes[i + 1..], nd, !sign, acc),
                _ => {}
            }
        }
    }
    let mut acc = 0i128;
    go(x, primes, 1, false, &mut acc);
    acc as u64
}

/// Exact `sum_{n <= m} phi(n)`, building tables internally.
pub fn phi_summatory(m: u64) -> Result<u64> {
    ArithTables::build(m.max(2))?.phi_summatory(m)
}

/// Number of `l <= x` with `gcd(l, m) = 1`, by Moebius inversion over the divisors of `m`.
pub fn coprime_count(x: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("coprime_count needs m >= 1".into()));
    }
    Ok(mobius_count(x, &factor_distinct(m)))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

// Bases 2..17 are a deterministic witness set below 341_550_071_728_321;
// the first twelve primes cover all of u64.
const SMALL_BASES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];
const ALL_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const SMALL_BASES_BOUND: u64 = 341_550_071_728_321;

/// Deterministic Miller-Rabin for any `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in ALL_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let bases: &[u64] = if n < SMALL_BASES_BOUND { &SMALL_BASES } else { &ALL_BASES };
    'witness: for &a in bases {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn linear_value(l: u64, q: u64, a: u64) -> Result<u64> {
    l.checked_mul(q)
        .and_then(|v| v.checked_add(a))
        .ok_or(Error::Overflow("linear form l*q + a"))
}

const PI_CHUNK: u64 = 4096;

/// `pi'(x; q, a)`: the number of `1 <= l <= x` with `l q + a` prime.
pub fn pi_prime_linear(x: u64, q: u64, a: u64) -> Result<u64> {
    if q == 0 || a == 0 {
        return Err(Error::Domain("q and a must be positive".into()));
    }
    if gcd_u64(a, q) != 1 {
        return Err(Error::Domain(format!("gcd(a, q) = gcd({a}, {q}) must be 1")));
    }
    linear_value(x, q, a)?;
    let chunks = x.div_ceil(PI_CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * PI_CHUNK + 1;
            let hi = ((c + 1) * PI_CHUNK).min(x);
            (lo..=hi).filter(|&l| is_prime_u64(l * q + a)).count() as u64
        })
        .sum())
}

/// `pi'(x; q, a; q', a')`: the number of `1 <= l <= x` with both `l q + a`
/// and `l q' + a'` prime. Requires `a q' - q a' != 0`.
pub fn pi_prime_joint(x: u64, q: u64, a: u64, qp: u64, ap: u64) -> Result<u64> {
    if q == 0 || a == 0 || qp == 0 || ap == 0 {
        return Err(Error::Domain("q, a, q', a' must be positive".into()));
    }
    if gcd_u64(a, q) != 1 || gcd_u64(ap, qp) != 1 {
        return Err(Error::Domain("need gcd(a, q) = gcd(a', q') = 1".into()));
    }
    let t = a as i128 * qp as i128 - q as i128 * ap as i128;
    if t == 0 {
        return Err(Error::Domain("a q' - q a' must be nonzero".into()));
    }
    linear_value(x, q, a)?;
    linear_value(x, qp, ap)?;
    let chunks = x.div_ceil(PI_CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * PI_CHUNK + 1;
            let hi = ((c + 1) * PI_CHUNK).min(x);
            (lo..=hi)
                .filter(|&l| is_prime_u64(l * q + a) && is_prime_u64(l * qp + ap))
                .count() as u64
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_by_gcd(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd_u64(k, n) == 1).count() as u64
    }

    #[test]
    fn phi_table_small() {
        let t = ArithTables::build(10).unwrap();
        let phis: Vec<u64> = (1..=10).map(|n| t.phi(n)).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
        for n in 1..=10 {
            assert_eq!(t.phi(n), phi_by_gcd(n));
        }
        let primes: Vec<u64> = (0..=10).filter(|&n| t.is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
    }

    #[test]
    fn divisor_counts_and_squarefree() {
        let t = ArithTables::build(1000).unwrap();
        assert_eq!(t.divisor_count(12), 6);
        for n in 1..=1000u64 {
            let d = (1..=n).filter(|k| n % k == 0).count() as u64;
            assert_eq!(t.divisor_count(n), d, "d({n})");
            let sqf = (2..=n).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0);
            assert_eq!(t.is_squarefree(n), sqf, "squarefree({n})");
        }
    }

    #[test]
    fn sieve_limits() {
        assert!(matches!(ArithTables::build(MAX_SIEVE_LIMIT + 1), Err(Error::Resource(_))));
        assert!(ArithTables::build(1).is_err());
    }

    #[test]
    fn phi_summatory_small() {
        assert_eq!(phi_summatory(5).unwrap(), 10);
        assert_eq!(phi_summatory(1).unwrap(), 1);
    }

    #[test]
    fn coprime_count_examples() {
        assert_eq!(coprime_count(10, 6).unwrap(), 3);
        assert_eq!(coprime_count(37, 1).unwrap(), 37);
        assert_eq!(coprime_count(0, 6).unwrap(), 0);
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let t = ArithTables::build(200_000).unwrap();
        for n in 0..=200_000u64 {
            assert_eq!(is_prime_u64(n), t.is_prime(n), "{n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(18_446_744_073_709_551_555));
    }

    #[test]
    fn pi_prime_examples() {
        assert_eq!(pi_prime_linear(10, 2, 1).unwrap(), 7);
        assert_eq!(pi_prime_linear(20, 6, 1).unwrap(), 13);
        assert_eq!(pi_prime_joint(10, 2, 1, 4, 1).unwrap(), 3);
        assert!(pi_prime_joint(10, 2, 1, 2, 1).is_err());
        assert!(pi_prime_linear(10, 4, 2).is_err());
    }
}
