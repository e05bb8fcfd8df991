//! Pattern frequencies and log-denominator growth along one stream.
use cfnormal::cf::Convention;
use cfnormal::enumeration::SequenceKind;
use cfnormal::stream::{hypothesis_ratios, normality_report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind: SequenceKind = std::env::args().nth(1).unwrap_or_else(|| "prime-prime".into()).parse()?;
    for n in [10_000u64, 100_000, 1_000_000] {
        let rep = normality_report(kind, Convention::Long, n, 3, 2)?;
        println!("N = {n}: max relative deviation {:.4}", rep.max_deviation());
        if n == 1_000_000 {
            for row in &rep.rows {
                println!("  {:<6} {:>9.6} vs {:>9.6}  dev {:.4}", row.pattern.to_string(), row.empirical, row.mu, row.deviation);
            }
            let g = &rep.growth;
            println!("  ln q_N / N = {:.5} (g = {:.5}), audit error {:.1e}", g.rate, g.g_ref, g.audit_max_rel_error);
        }
    }

    println!("\n{:>9} {:>9} {:>9} {:>10}", "N", "M", "N/sumL", "M/N");
    for cp in hypothesis_ratios(kind, Convention::Long, 1_000_000)? {
        println!("{:>9} {:>9} {:>9.4} {:>10.6}", cp.n, cp.m, cp.n_over_sum, cp.m_over_n);
    }
    Ok(())
}
