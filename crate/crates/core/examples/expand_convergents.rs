//! Expand a rational in both conventions, list its convergents, and check
//! the concatenation and mirror identities on it.
use cfnormal::cf::{concat_rationals, convergents, evaluate_digits, expand, mirror, Convention, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r: Rational = std::env::args().nth(1).unwrap_or_else(|| "355/1132".into()).parse()?;
    for conv in [Convention::Short, Convention::Long] {
        let e = expand(r, conv);
        println!("{:>5}: {:?}", conv.to_string(), e.digits());
    }

    let e = expand(r, Convention::Long);
    println!("\n  n  p_n/q_n");
    for c in e.convergents()? {
        println!("{:>3}  {}/{}", c.index, c.p, c.q);
    }

    // <d_1..d_n> reversed evaluates to q_{n-1}/q_n
    let cs = convergents(e.digits())?;
    let back = evaluate_digits(&mirror(e.digits()))?;
    println!("\nmirror -> {}/{}  (q_(n-1)/q_n = {}/{})", back.num, back.den, cs[cs.len() - 2].q, cs[cs.len() - 1].q);

    let other = Rational::new(2, 7)?;
    let joined = concat_rationals(r, other, Convention::Long)?;
    println!("{r} ++ {other} = {joined}  digits {:?}", expand(joined, Convention::Long).digits());
    Ok(())
}
