//! How many rationals with denominator up to m fail (eps, s)-normality, and
//! the prefix sets used to bound that count.
use cfnormal::cf::Convention;
use cfnormal::census::{gamma_census, run_census, CensusReport, GammaParams, NormalityParams};
use cfnormal::enumeration::SequenceKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = NormalityParams::new(0.25, "1".parse()?, Convention::Long)?;
    println!("{}", CensusReport::CSV_HEADER);
    for kind in [SequenceKind::AllLowestTerms, SequenceKind::PrimeOverPrime] {
        for m in [256, 512, 1024, 2048] {
            println!("{}", run_census(kind, m, &p)?.csv_row());
        }
    }

    println!("\nfraction of rationals in Gamma(m, delta = 0.1, eta = 0.1, s = [1])");
    for m in [100u64, 1_000, 10_000] {
        let gp = GammaParams::new(m, 0.1, 0.1, "1".parse()?)?;
        let (inside, total) = gamma_census(&gp, Convention::Long)?;
        println!("  m = {m:>6}  n = {:>2}  {inside}/{total} = {:.4}", gp.n, inside as f64 / total as f64);
    }
    Ok(())
}
