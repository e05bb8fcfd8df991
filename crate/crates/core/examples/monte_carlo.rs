//! Monte Carlo Gauss measures of cylinder, frequency and growth events.
use cfnormal::census::{estimate_means, in_e_set, in_f_set, DigitStat};
use cfnormal::cf::Digit;
use cfnormal::measures::{gauss_measure, Pattern};
use cfnormal::stream::exact_log_denominator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s: Pattern = "1,2".parse()?;
    let hit = |d: &[Digit]| f64::from(u8::from(d[..2] == [1, 2]));
    let est = estimate_means(&[hit], 2, 1_000_000, 7)?;
    println!("mu(C_[1,2]) ~ {:.5} +- {:.5}  exact {:.5}", est[0].estimate, est[0].stderr, gauss_measure(&s));

    let one: Pattern = "1".parse()?;
    let eps = 0.2;
    println!("\n{:>5} {:>10} {:>10} {:>10}", "N", "E(eps=.2)", "F(eps=.2)", "ln q_N/N");
    for n in [10usize, 100, 1000] {
        let e = |d: &[Digit]| f64::from(u8::from(in_e_set(d, eps, &one, n as u64).unwrap()));
        let f = |d: &[Digit]| f64::from(u8::from(in_f_set(d, eps, n as u64).unwrap()));
        let g = |d: &[Digit]| exact_log_denominator(&d[..n]) / n as f64;
        let stats: [&DigitStat; 3] = [&e, &f, &g];
        let r = estimate_means(&stats, n + 1, 20_000, 11)?;
        println!("{n:>5} {:>10.5} {:>10.5} {:>10.5}", r[0].estimate, r[1].estimate, r[2].estimate);
    }
    Ok(())
}
