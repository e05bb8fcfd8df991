//! Sieve tables, totient sums, coprime counts and primes in linear forms.
use cfnormal::arith::{coprime_count, pi_prime_joint, pi_prime_linear, ArithTables};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = ArithTables::build(1_000_000)?;
    println!("primes below 10^6: {}", t.primes().len());
    println!("phi(360) = {}, d(360) = {}, factors {:?}", t.phi(360), t.divisor_count(360), t.prime_factors(360));

    for m in [1_000u64, 10_000, 100_000, 1_000_000] {
        let s = t.phi_summatory(m)?;
        let scaled = s as f64 * std::f64::consts::PI.powi(2) / (3.0 * (m * m) as f64);
        println!("sum phi up to {m:>8}: {s:>14}  ratio to 3m^2/pi^2 {scaled:.5}");
    }
    println!("#{{l <= 10^6 : gcd(l, 30030) = 1}} = {}", coprime_count(1_000_000, 30_030)?);

    println!("\n{:>8} {:>10} {:>12}", "x", "pi(x;2,1)", "twin-like");
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        // l with both 6l - 1 and 6l + 1 prime
        println!("{x:>8} {:>10} {:>12}", pi_prime_linear(x, 2, 1)?, pi_prime_joint(x, 6, 1, 6, 5)?);
    }
    Ok(())
}
