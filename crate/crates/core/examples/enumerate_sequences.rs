//! The six rational sequences: first members, sizes, and random access.
use cfnormal::enumeration::{count_r, enumerate_r, Enumerator, SequenceKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in SequenceKind::ALL {
        let head: Vec<String> = enumerate_r(kind, 7).take(10).map(|m| m.to_string()).collect();
        println!("{:<12} {}", kind.name(), head.join(" "));
    }

    println!("\n{:<12} {:>14} {:>14} {:>14}", "|R(m)|", "m=10^2", "m=10^4", "m=10^6");
    for kind in SequenceKind::ALL {
        let c: Vec<u64> = [100, 10_000, 1_000_000].iter().map(|&m| count_r(kind, m)).collect::<Result<_, _>>()?;
        println!("{:<12} {:>14} {:>14} {:>14}", kind.name(), c[0], c[1], c[2]);
    }

    let mut e = Enumerator::new(SequenceKind::PrimeOverPrime);
    let i = 1_000_000;
    let m = e.rational_at(i)?;
    println!("\nprime-prime #{i} = {m}, index back = {}", e.index_of_pair(m.num, m.den)?);
    Ok(())
}
