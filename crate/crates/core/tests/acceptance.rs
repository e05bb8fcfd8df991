//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line with the measured values before asserting.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use cfnormal::arith::{phi_summatory, pi_prime_joint, pi_prime_linear};
use cfnormal::cf::{concat_rationals, convergents, evaluate, expand, Convention, Digit, Rational};
use cfnormal::census::{estimate_means, in_e_set, in_f_set, run_census, DigitStat, NormalityParams};
use cfnormal::enumeration::{count_r, RationalCursor, SequenceKind};
use cfnormal::measures::{
    cylinder_geometry, gauss_measure, lebesgue_measure, sample_gauss, Pattern, KHINCHIN_LEVY_EXPONENT as G,
};
use cfnormal::stream::{count_patterns, frequency_report, DigitStream, GrowthTracker, ReportConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Criteria run one at a time so runtime bounds are not skewed by each other.
static SERIAL: Mutex<()> = Mutex::new(());

fn verdict(id: u32, title: &str, pass: bool, detail: String) {
    println!("{} C{id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn best_of<T>(runs: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..runs {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed());
        out = Some(v);
    }
    (out.expect("runs >= 1"), best)
}

fn pat(d: &[Digit]) -> Pattern {
    Pattern::new(d.to_vec()).unwrap()
}

#[test]
fn c01_prefix_of_aks_concatenation() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let args = ["cfnormal", "stream", "--kind", "aks-dup", "--conv", "short", "-n", "8"];
    let ((code, out), t) = best_of(5, || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cfnormal::cli::run(args, &mut out, &mut err);
        (code, out)
    });
    let text = String::from_utf8(out).unwrap();
    let pass = code == 0 && text == "2 3 1 2 4 2 1 3" && t < Duration::from_millis(1);
    verdict(1, "AKS prefix", pass, format!("output {text:?}, exit {code}, {t:?}"));
}

#[test]
fn c02_prime_over_prime_listing() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (got, t) = best_of(5, || {
        RationalCursor::new(SequenceKind::PrimeOverPrime).take(6).map(|m| (m.num, m.den)).collect::<Vec<_>>()
    });
    let want = vec![(2, 3), (2, 5), (3, 5), (2, 7), (3, 7), (5, 7)];
    let pass = got == want && t < Duration::from_millis(1);
    verdict(2, "type3 listing", pass, format!("{got:?} in {t:?}"));
}

fn max_deviation(kind: SequenceKind, n: u64, patterns: &[Pattern]) -> f64 {
    let mut stream = DigitStream::new(kind, Convention::Long);
    let (rows, _) = frequency_report(&mut stream, patterns, n, ReportConfig::default()).unwrap();
    rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
}

#[test]
fn c03_digit_frequencies_converge() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let patterns: Vec<Pattern> =
        [&[1][..], &[2], &[3], &[4], &[5], &[1, 1], &[1, 2], &[2, 1]].iter().map(|d| pat(d)).collect();
    let mut all_pass = true;
    let mut lines = Vec::new();
    for kind in SequenceKind::ALL {
        let start = Instant::now();
        let at_1e6 = max_deviation(kind, 1_000_000, &patterns);
        let elapsed = start.elapsed();
        let (pass, how) = if at_1e6 < 0.01 {
            (true, format!("max dev {at_1e6:.4} < 0.01"))
        } else {
            let curve = [max_deviation(kind, 10_000, &patterns), max_deviation(kind, 100_000, &patterns), at_1e6];
            let monotone = curve[0] > curve[1] && curve[1] > curve[2];
            (monotone, format!("max dev {at_1e6:.4} >= 0.01; curve 1e4/1e5/1e6 = {:.4}/{:.4}/{:.4} {}",
                curve[0], curve[1], curve[2], if monotone { "decreasing" } else { "not decreasing" }))
        };
        let pass = pass && elapsed < Duration::from_secs(30);
        all_pass &= pass;
        lines.push(format!("{kind}: {how} ({elapsed:.2?})"));
    }
    verdict(3, "digit-frequency convergence", all_pass, lines.join("; "));
}

#[test]
fn c04_log_denominator_growth() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut stream_pass = true;
    let mut lines = Vec::new();
    for kind in SequenceKind::ALL {
        let mut g = GrowthTracker::default();
        DigitStream::new(kind, Convention::Long).take(1_000_000).for_each(|d| g.push(d));
        let gap = g.rate() - G;
        stream_pass &= gap.abs() < 0.02;
        lines.push(format!("{kind} {:.4} (gap {gap:+.4})", g.rate()));
    }
    let growth = |d: &[Digit]| {
        let mut g = GrowthTracker::new(0);
        d.iter().for_each(|&a| g.push(a));
        g.rate()
    };
    let mc = estimate_means(&[growth], 100, 10_000, 2024).unwrap()[0];
    let mc_pass = (mc.estimate - G).abs() < 0.02;
    verdict(
        4,
        "log q_N / N -> g",
        stream_pass && mc_pass,
        format!(
            "streams at N=1e6: {}; Monte Carlo mean ln q_100/100 = {:.4} +- {:.4} ({})",
            lines.join(", "),
            mc.estimate,
            mc.stderr,
            if mc_pass { "ok" } else { "off" }
        ),
    );
}

#[test]
fn c05_totient_sum() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let ratio = phi_summatory(10_000).unwrap() as f64 * std::f64::consts::PI.powi(2) / 3e8;
    let small = phi_summatory(5).unwrap();
    let pass = (0.995..=1.005).contains(&ratio) && small == 10;
    verdict(5, "totient summatory", pass, format!("ratio at 1e4 = {ratio:.5}, sum to 5 = {small}"));
}

#[test]
fn c06_census_decay() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let p = NormalityParams::new(0.25, pat(&[1]), Convention::Long).unwrap();
    let reps: Vec<_> = [256u64, 512, 1024, 2048]
        .iter()
        .map(|&m| run_census(SequenceKind::AllLowestTerms, m, &p).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let ratios: Vec<f64> = reps.iter().map(|r| r.ratio).collect();
    let scaled: Vec<f64> = reps.iter().map(|r| r.scaled_abnormal()).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let spread = scaled.iter().cloned().fold(0.0, f64::max) / scaled.iter().cloned().fold(f64::MAX, f64::min);
    let pass = decreasing && spread < 3.0 && elapsed < Duration::from_secs(60);
    verdict(
        6,
        "census decay",
        pass,
        format!(
            "abnormal/total {:.5?} ({}), abnormal ln m / m^2 {:.3?} spread {spread:.2}x, {elapsed:.2?}",
            ratios,
            if decreasing { "strictly decreasing" } else { "not strictly decreasing" },
            scaled
        ),
    );
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn forward_value(digits: &[Digit]) -> (u128, u128) {
    let (mut p0, mut q0, mut p1, mut q1) = (1u128, 0u128, 0u128, 1u128);
    for &a in digits {
        let a = a as u128;
        (p0, q0, p1, q1) = (p1, q1, a * p1 + p0, a * q1 + q0);
    }
    let g = gcd(p1, q1);
    (p1 / g, q1 / g)
}

#[test]
fn c07_oracle_equivalences() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut failures = [0u64; 5];

    for q in 2..=2000u128 {
        for p in (1..q).filter(|&p| gcd(p, q) == 1) {
            let r = Rational::new(p, q).unwrap();
            for conv in [Convention::Short, Convention::Long] {
                let e = expand(r, conv);
                if evaluate(&e).ok() != Some(r) {
                    failures[0] += 1;
                }
                let cs = convergents(e.digits()).unwrap();
                let (mut pp, mut qp) = (0i128, 1i128);
                for c in &cs {
                    let (pn, qn) = (c.p as i128, c.q as i128);
                    if (pn * qp - pp * qn).abs() != 1 {
                        failures[2] += 1;
                    }
                    (pp, qp) = (pn, qn);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut draw = || loop {
        let q: u128 = rng.random_range(2..=5000);
        if let Ok(r) = Rational::new(rng.random_range(1..q), q) {
            return r;
        }
    };
    for i in 0..10_000 {
        let conv = if i % 2 == 0 { Convention::Short } else { Convention::Long };
        let (r, rp) = (draw(), draw());
        let mut digits = expand(r, conv).into_digits();
        digits.extend(expand(rp, conv).digits());
        let got = concat_rationals(r, rp, conv).unwrap();
        if (got.num(), got.den()) != forward_value(&digits) {
            failures[1] += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let kind = SequenceKind::ALL[case % 6];
        let buf: Vec<Digit> = DigitStream::new(kind, Convention::Long).take(20_000).collect();
        let n = rng.random_range(1..=19_990usize);
        let mut patterns: Vec<Pattern> = (0..rng.random_range(1..=6))
            .map(|_| {
                let len = rng.random_range(1..=4);
                Pattern::new((0..len).map(|_| rng.random_range(1..=5)).collect()).unwrap()
            })
            .collect();
        patterns.sort();
        patterns.dedup();
        let counts = count_patterns(buf.iter().copied(), &patterns, n as u64).unwrap();
        for p in &patterns {
            let naive = (0..n).filter(|&i| buf.get(i..i + p.len()) == Some(p.digits())).count() as u64;
            if counts[p] != naive {
                failures[3] += 1;
            }
        }
    }

    for x in [1u64, 10, 100, 1000] {
        for q in 1..=10u64 {
            for a in (1..=10u64).filter(|&a| gcd(a as u128, q as u128) == 1) {
                let brute = (1..=x).filter(|l| trial_prime(l * q + a)).count() as u64;
                if pi_prime_linear(x, q, a).unwrap() != brute {
                    failures[4] += 1;
                }
            }
        }
        for (q, a, qp, ap) in [(2, 1, 4, 1), (2, 1, 2, 3), (6, 1, 6, 5), (1, 1, 3, 2)] {
            let brute = (1..=x).filter(|l| trial_prime(l * q + a) && trial_prime(l * qp + ap)).count() as u64;
            if pi_prime_joint(x, q, a, qp, ap).unwrap() != brute {
                failures[4] += 1;
            }
        }
    }

    let pass = failures.iter().all(|&f| f == 0);
    verdict(
        7,
        "oracle equivalences",
        pass,
        format!(
            "failures: round trip {}, concat {}, determinant {}, pattern counter {}, prime counters {}",
            failures[0], failures[1], failures[2], failures[3], failures[4]
        ),
    );
}

#[test]
fn c08_measure_invariants() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_reversal = 0.0f64;
    let mut width_failures = 0;
    for _ in 0..10_000 {
        let len = rng.random_range(1..=10);
        let s = Pattern::new((0..len).map(|_| rng.random_range(1..=30)).collect()).unwrap();
        worst_reversal = worst_reversal.max((gauss_measure(&s) - gauss_measure(&s.reversed())).abs());
        let g = cylinder_geometry(&s).unwrap();
        if g.qn * (g.qn + g.qn1) < 1 << 63 {
            let l = lebesgue_measure(&s).unwrap();
            let num = g.upper.num * g.lower.den - g.lower.num * g.upper.den;
            let den = g.upper.den * g.lower.den;
            if num * l.den() != den * l.num() {
                width_failures += 1;
            }
        }
    }
    let n = 1_000_000;
    let hits = (0..n).filter(|_| sample_gauss(rng.random::<f64>()) < 0.5).count();
    let freq = hits as f64 / n as f64;
    let push_gap = (freq - 1.5f64.log2()).abs();
    let pass = worst_reversal < 1e-12 && width_failures == 0 && push_gap < 0.002;
    verdict(
        8,
        "measure invariants",
        pass,
        format!("max reversal gap {worst_reversal:.1e}, width failures {width_failures}, mu([0,1/2)) estimate {freq:.5} (gap {push_gap:.5})"),
    );
}

#[test]
fn c09_e_and_f_sets_shrink() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let s = pat(&[1]);
    let ns = [100u64, 1_000, 10_000];
    let stats: Vec<Box<DigitStat>> = ns
        .iter()
        .flat_map(|&n| {
            let s = s.clone();
            let e: Box<DigitStat> =
                Box::new(move |d: &[Digit]| f64::from(u8::from(in_e_set(d, 0.5, &s, n).unwrap())));
            let f: Box<DigitStat> =
                Box::new(move |d: &[Digit]| f64::from(u8::from(in_f_set(d, 0.1, n).unwrap())));
            [e, f]
        })
        .collect();
    let est = estimate_means(&stats, 10_000, 100_000, 99).unwrap();
    let e: Vec<f64> = est.iter().step_by(2).map(|x| x.estimate).collect();
    let f: Vec<f64> = est.iter().skip(1).step_by(2).map(|x| x.estimate).collect();
    let strictly = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let pass = strictly(&e) && strictly(&f);
    verdict(
        9,
        "E/F decay",
        pass,
        format!(
            "mu(E_0.5,[1],N) at N=1e2/1e3/1e4: {:.5}/{:.5}/{:.5} ({}); mu(F_0.1,N): {:.5}/{:.5}/{:.5} ({}); 1e5 samples",
            e[0], e[1], e[2],
            if strictly(&e) { "strictly decreasing" } else { "not strictly decreasing" },
            f[0], f[1], f[2],
            if strictly(&f) { "strictly decreasing" } else { "not strictly decreasing" },
        ),
    );
}

#[test]
fn c10_prime_family_orders() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let ms = [1_000u64, 10_000, 100_000];
    let band = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::MAX, f64::min);
    let t1: Vec<f64> = ms
        .iter()
        .map(|&m| count_r(SequenceKind::NatOverPrime, m).unwrap() as f64 * (m as f64).ln() / (m as f64).powi(2))
        .collect();
    let t3: Vec<f64> = ms
        .iter()
        .map(|&m| count_r(SequenceKind::PrimeOverPrime, m).unwrap() as f64 * (m as f64).ln().powi(2) / (m as f64).powi(2))
        .collect();
    let elapsed = start.elapsed();
    let pass = band(&t1) < 2.0 && band(&t3) < 2.0 && elapsed < Duration::from_secs(60);
    verdict(
        10,
        "prime family orders",
        pass,
        format!("type1 {t1:.4?} ({:.2}x), type3 {t3:.4?} ({:.2}x), {elapsed:.2?}", band(&t1), band(&t3)),
    );
}
