use cfnormal::cf::{convergents, expand, Convention, Digit, Rational};
use cfnormal::census::{
    estimate_measure, gamma_census, gamma_prime_contains, in_e_set, in_f_set, in_gamma,
    is_eps_s_normal, n_delta, run_census, run_census_range, GammaParams, NormalityParams,
};
use cfnormal::enumeration::SequenceKind;
use cfnormal::measures::{gauss_measure, Pattern, KHINCHIN_LEVY_EXPONENT as G};
use proptest::prelude::*;

fn pat(d: &[Digit]) -> Pattern {
    Pattern::new(d.to_vec()).unwrap()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduced_up_to(m: u128) -> impl Iterator<Item = Rational> {
    (2..=m).flat_map(|q| (1..q).filter(move |&p| gcd(p, q) == 1).map(move |p| Rational::new(p, q).unwrap()))
}

// Independent oracle for the (eps, s) test, straight from the two inequalities.
fn normal_oracle(r: Rational, eps: f64, s: &[Digit], conv: Convention) -> bool {
    let d = expand(r, conv).into_digits();
    let l = d.len() as f64;
    let a = if s.len() > d.len() { 0 } else { d.windows(s.len()).filter(|w| *w == s).count() };
    let mu = gauss_measure(&pat(s));
    (a as f64 / l - mu).abs() < eps && ((r.den() as f64).ln() / l - G).abs() < eps
}

#[test]
fn census_matches_oracle_classification() {
    for conv in [Convention::Short, Convention::Long] {
        for (eps, s) in [(0.25, vec![1]), (0.3, vec![2]), (0.4, vec![1, 2])] {
            let p = NormalityParams::new(eps, pat(&s), conv).unwrap();
            let rep = run_census(SequenceKind::AllLowestTerms, 150, &p).unwrap();
            let (mut total, mut abnormal) = (0, 0);
            for r in reduced_up_to(150) {
                total += 1;
                let oracle = normal_oracle(r, eps, &s, conv);
                assert_eq!(is_eps_s_normal(r, &p).normal, oracle, "{r}");
                abnormal += u64::from(!oracle);
            }
            assert_eq!((rep.total, rep.abnormal), (total, abnormal));
        }
    }
}

#[test]
fn census_ratio_falls_from_256_to_2048() {
    let p = NormalityParams::new(0.25, pat(&[1]), Convention::Long).unwrap();
    let a = run_census(SequenceKind::AllLowestTerms, 256, &p).unwrap();
    let b = run_census(SequenceKind::AllLowestTerms, 2048, &p).unwrap();
    assert!(b.ratio < a.ratio);
}

#[test]
fn census_merges_additively() {
    let p = NormalityParams::new(0.25, pat(&[1]), Convention::Long).unwrap();
    for kind in SequenceKind::ALL {
        let whole = run_census(kind, 400, &p).unwrap();
        let low = run_census_range(kind, 2, 200, &p).unwrap();
        let high = run_census_range(kind, 201, 400, &p).unwrap();
        let merged = low.merge(&high).unwrap();
        assert_eq!((merged.total, merged.abnormal, merged.m, merged.den_lo), (whole.total, whole.abnormal, 400, 2));
        assert!(high.merge(&low).is_err());
    }
}

#[test]
fn normal_rationals_have_bracketed_lengths() {
    let m = 2000u128;
    let eps = 0.25;
    let p = NormalityParams::new(eps, pat(&[1]), Convention::Long).unwrap();
    let root = (m as f64).sqrt().ceil() as u128;
    for r in reduced_up_to(m).filter(|r| r.den() >= root) {
        let v = is_eps_s_normal(r, &p);
        if v.normal {
            let lq = (r.den() as f64).ln();
            let l = v.length as f64;
            assert!(lq / (G + eps) < l && l < lq / (G - eps), "{r}");
        }
    }
}

#[test]
fn lengths_obey_fibonacci_bound() {
    let golden = cfnormal::measures::GOLDEN_RATIO.ln();
    for r in reduced_up_to(10_000).step_by(7) {
        let l = cfnormal::census::digit_length(r, Convention::Long) as f64;
        assert!(l <= (r.den() as f64).ln() / golden + 2.0, "{r}");
        assert_eq!(
            cfnormal::census::digit_length(r, Convention::Long),
            cfnormal::census::digit_length(r, Convention::Short) + 1
        );
    }
}

#[test]
fn n_delta_is_monotone_in_m() {
    for delta in [0.01, 0.1, 0.2, 0.33] {
        let mut last = 0;
        for m in 3..5000 {
            let n = n_delta(m, delta).unwrap();
            assert!(n >= last);
            last = n;
        }
    }
}

fn q_pair(prefix: &[Digit]) -> (f64, f64) {
    let cs = convergents(prefix).unwrap();
    let n = cs.len();
    (cs[n - 2].q as f64, cs[n - 1].q as f64)
}

#[test]
fn gamma_prime_prefixes_satisfy_q_bounds() {
    let gp = GammaParams::new(200, 0.1, 0.1, pat(&[1])).unwrap();
    let n = gp.n as usize;
    assert!(n >= 2);
    let (lower, upper) = gp.q_bounds();
    let mut accepted = 0;
    let mut prefix = vec![1u64; n];
    loop {
        if gamma_prime_contains(&prefix, &gp).unwrap() {
            accepted += 1;
            let (qn1, qn) = q_pair(&prefix);
            assert!(lower <= qn1 && qn1 < qn && qn <= upper, "{prefix:?}");
        }
        // odometer over digits 1..=8
        let mut i = 0;
        while i < n && prefix[i] == 8 {
            prefix[i] = 1;
            i += 1;
        }
        if i == n {
            break;
        }
        prefix[i] += 1;
    }
    // n = 3 here and the delta/12 window for q_2 is [10.55, 10.91], so no
    // length-3 prefix is kept
    assert_eq!(accepted, 0);
}

#[test]
fn sampled_gamma_prime_prefixes_satisfy_q_bounds() {
    use cfnormal::measures::GaussDigitSampler;
    use rand::SeedableRng;
    let gp = GammaParams::new(100_000_000, 0.05, 0.3, pat(&[1])).unwrap();
    let (lower, upper) = gp.q_bounds();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    let mut accepted = 0;
    let mut prefix = Vec::new();
    for _ in 0..200_000 {
        prefix.clear();
        GaussDigitSampler::new().fill(&mut rng, &mut prefix, gp.n as usize);
        if prefix.iter().any(|&d| d > 1 << 20) {
            continue;
        }
        if gamma_prime_contains(&prefix, &gp).unwrap() {
            accepted += 1;
            let (qn1, qn) = q_pair(&prefix);
            assert!(lower <= qn1 && qn1 < qn && qn <= upper, "{prefix:?}");
        }
    }
    assert!(accepted > 100, "{accepted}");
}

#[test]
fn gamma_and_gamma_prime_are_consistent() {
    let gp = GammaParams::new(500, 0.1, 0.1, pat(&[1])).unwrap();
    let n = gp.n as usize;
    for conv in [Convention::Short, Convention::Long] {
        for r in reduced_up_to(500) {
            let d = expand(r, conv).into_digits();
            if d.len() < n {
                assert!(in_gamma(r, &gp, conv));
                continue;
            }
            let prefix = &d[..n];
            let kept = gamma_prime_contains(prefix, &gp).unwrap();
            if in_gamma(r, &gp, conv) {
                assert!(!kept, "{r} {conv}");
            }
            if kept {
                assert!(!in_gamma(r, &gp, conv));
            }
        }
    }
}

#[test]
fn gamma_fraction_shrinks_with_m() {
    let s = pat(&[1]);
    let small = GammaParams::new(1000, 0.1, 0.1, s.clone()).unwrap();
    let large = GammaParams::new(10_000, 0.1, 0.1, s).unwrap();
    let (a, ta) = gamma_census(&small, Convention::Long).unwrap();
    let (b, tb) = gamma_census(&large, Convention::Long).unwrap();
    println!("Gamma fraction: m=1e3 {:.4}, m=1e4 {:.4}", a as f64 / ta as f64, b as f64 / tb as f64);
    assert!((b as f64 / tb as f64) < (a as f64 / ta as f64));
}

#[test]
fn e_and_f_sets_on_periodic_prefixes() {
    let s = pat(&[1]);
    assert!(in_e_set(&[1; 1000], 0.5, &s, 1000).unwrap());
    let alternating: Vec<Digit> = (0..2000).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
    // frequency 1/2 vs mu = 0.415: relative gap 0.2047
    assert!(in_e_set(&alternating, 0.2, &s, 1000).unwrap());
    assert!(!in_e_set(&alternating, 0.21, &s, 1000).unwrap());
    assert!(in_f_set(&[1; 50], 0.5, 50).unwrap());
    assert!(!in_f_set(&[3; 50], 0.05, 50).unwrap());
}

#[test]
fn e_set_uses_strict_inequality() {
    // A = N = 2 for s = [1]; |2 - 2 mu| = eps * 2 mu exactly when eps = (1 - mu)/mu
    let s = pat(&[1]);
    let mu = gauss_measure(&s);
    let boundary = (1.0 - mu) / mu;
    assert!(in_e_set(&[1, 1], boundary * (1.0 - 1e-12), &s, 2).unwrap());
    assert!(!in_e_set(&[1, 1], boundary * (1.0 + 1e-12), &s, 2).unwrap());
}

proptest! {
    #[test]
    fn e_and_f_are_antitone_in_eps(
        digits in prop::collection::vec(1u64..8, 60..120),
        e1 in 0.0f64..2.0,
        e2 in 0.0f64..2.0,
        s in prop::collection::vec(1u64..3, 1..3),
    ) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let s = Pattern::new(s).unwrap();
        let n = 50;
        if in_e_set(&digits, hi, &s, n).unwrap() {
            prop_assert!(in_e_set(&digits, lo, &s, n).unwrap());
        }
        if in_f_set(&digits, hi, n).unwrap() {
            prop_assert!(in_f_set(&digits, lo, n).unwrap());
        }
    }
}

#[test]
fn monte_carlo_recovers_cylinder_measures() {
    let first = estimate_measure(|d: &[Digit]| d[0] == 1, 1, 1_000_000, 42).unwrap();
    assert!((first.estimate - 0.41504).abs() < 3.0 * first.stderr, "{first:?}");
    let pair = estimate_measure(|d: &[Digit]| d == [1, 2], 2, 1_000_000, 43).unwrap();
    assert!((pair.estimate - (21.0f64 / 20.0).log2()).abs() < 3.0 * pair.stderr, "{pair:?}");
    let all = estimate_measure(|_: &[Digit]| true, 5, 1000, 44).unwrap();
    assert_eq!(all.estimate, 1.0);
}
