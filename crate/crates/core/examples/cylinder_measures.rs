//! Gauss and Lebesgue measures of cylinder sets for short digit patterns.
use cfnormal::measures::{cylinder_geometry, gauss_measure, lebesgue_measure, Pattern};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<10} {:>22} {:>12} {:>12}", "pattern", "interval", "lebesgue", "gauss");
    for s in Pattern::all_up_to(3, 2) {
        let g = cylinder_geometry(&s)?;
        let interval = format!("[{}/{}, {}/{})", g.lower.num, g.lower.den, g.upper.num, g.upper.den);
        println!("{:<10} {:>22} {:>12.6} {:>12.6}", s.to_string(), interval, lebesgue_measure(&s)?.to_f64(), gauss_measure(&s));
    }

    // first-digit cylinders partition the unit interval
    let total: f64 = (1..=100_000).map(|a| gauss_measure(&Pattern::new(vec![a]).unwrap())).sum();
    println!("\nsum over first digits 1..=100000: {total:.8}");

    let s: Pattern = "1,4,2,7".parse()?;
    println!("mu({s}) = {:.3e}, mu(reversed) = {:.3e}", gauss_measure(&s), gauss_measure(&s.reversed()));
    Ok(())
}
