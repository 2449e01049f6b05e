//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_integer::Integer;
use spectral_weights::filtrations::jordan_blocks;
use spectral_weights::frobenius::check_dense_identities;
use spectral_weights::reflexive::{enumerate_reflexive, REFERENCE_TABLE_N3, REFERENCE_TABLE_N4};
use spectral_weights::spectrum::{
    multiplicities, spectral_polynomial, spectral_polynomial_coefficients, spectrum_direct,
};
use spectral_weights::verify::{random_systems, verify_corpus, verify_list, Check, Summary, VerifyOptions};
use spectral_weights::weights::systems_with_mu;
use spectral_weights::{Rational, WeightSystem};

struct Outcome {
    problems: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { problems: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }

    fn summary(&mut self, summary: &Summary, checks: &[Check], label: &str) {
        for &c in checks {
            let failures: Vec<_> = summary.failures_for(c).collect();
            if let Some(first) = failures.first() {
                self.problems.push(format!(
                    "{label}: {} {} failures, first {:?}: {}",
                    failures.len(),
                    c,
                    first.weights,
                    first.detail
                ));
            }
        }
    }
}

fn report(number: usize, title: &str, outcome: Outcome, started: Instant) -> bool {
    let ok = outcome.problems.is_empty();
    println!(
        "criterion {number:>2}: {}  {title} ({:.1}s)",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    for p in outcome.problems.iter().take(10) {
        println!("      {p}");
    }
    ok
}

fn ws(raw: &[i64]) -> WeightSystem {
    WeightSystem::new(raw).unwrap()
}

/// Expands `prod_{k=0}^{n} (S + k)`, constant term first, over the integers.
fn rising_product(n: i64) -> Vec<Rational> {
    let mut c: Vec<i64> = vec![1];
    for k in 0..=n {
        let mut next = vec![0; c.len() + 1];
        for (d, &x) in c.iter().enumerate() {
            next[d + 1] += x;
            next[d] += k * x;
        }
        c = next;
    }
    c.into_iter().map(Rational::from).collect()
}

/// Every nondecreasing gcd-1 triple with each entry dividing the sum, `mu <= 100`.
fn brute_force_triples() -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for mu in 3..=100u64 {
        for a in 1..=mu {
            for b in a..=mu {
                if a + b >= mu {
                    break;
                }
                let c = mu - a - b;
                if c < b || a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                if [a, b, c].iter().all(|x| mu % x == 0) {
                    out.insert(vec![a, b, c]);
                }
            }
        }
    }
    out
}

const SWEEP: [Check; 10] = [
    Check::OracleEquality,
    Check::Symmetry,
    Check::Bernstein,
    Check::Pairing,
    Check::Reflexive,
    Check::SaitoIdentity,
    Check::Orthogonality,
    Check::NilpotentLowersH,
    Check::Conjugation,
    Check::HodgeTate,
];

fn main() {
    let total = Instant::now();
    let mut results = Vec::new();

    // The exhaustive mu <= 60 sweep is shared by criteria 2, 3, 4, 6, 8 and 9.
    let t = Instant::now();
    let sweep = verify_corpus(60, &VerifyOptions::new(SWEEP));
    let sweep_time = t.elapsed();
    let random =
        verify_list(&random_systems(1000, 500, 2024), &VerifyOptions::new([Check::OracleEquality, Check::Symmetry]));
    println!("swept {} systems with mu <= 60 in {:.1}s", sweep.systems, sweep_time.as_secs_f64());

    // 1
    let t = Instant::now();
    let mut o = Outcome::new();
    for n in 2..=8usize {
        let w = WeightSystem::all_ones(n + 1);
        let expected: Vec<(Rational, u64)> = (0..=n as i64).map(|k| (Rational::from(k), 1)).collect();
        o.require(spectral_polynomial(&w) == expected, || format!("n = {n}: roots {:?}", spectral_polynomial(&w)));
        o.require(spectral_polynomial_coefficients(&w) == rising_product(n as i64), || {
            format!("n = {n}: coefficients")
        });
    }
    results.push(report(1, "all-ones spectrum", o, t));

    // 2
    let t = Instant::now();
    let mut o = Outcome::new();
    o.require(sweep.systems == (2..=60).map(|mu| systems_with_mu(mu).len() as u64).sum::<u64>(), || {
        "corpus size".into()
    });
    o.summary(&sweep, &[Check::OracleEquality], "mu <= 60");
    o.require(random.systems == 1000, || "random sample size".into());
    o.summary(&random, &[Check::OracleEquality], "random mu <= 500");
    results.push(report(2, "step recursion equals direct merge", o, t));

    // 3
    let t = Instant::now();
    let mut o = Outcome::new();
    o.summary(&sweep, &[Check::Symmetry], "mu <= 60");
    o.summary(&random, &[Check::Symmetry], "random mu <= 500");
    results.push(report(3, "spectral symmetries", o, t));

    // 4
    let t = Instant::now();
    let mut o = Outcome::new();
    o.summary(&sweep, &[Check::Bernstein], "mu <= 60");
    results.push(report(4, "Bernstein relation", o, t));

    // 5
    let t = Instant::now();
    let mut o = Outcome::new();
    let birkhoff = verify_corpus(40, &VerifyOptions::new([Check::Birkhoff, Check::FAction, Check::Charpoly]));
    o.summary(&birkhoff, &[Check::Birkhoff, Check::FAction, Check::Charpoly], "mu <= 40");
    results.push(report(5, "Birkhoff matrices, f-action and charpoly", o, t));

    // 6
    let t = Instant::now();
    let mut o = Outcome::new();
    o.summary(&sweep, &[Check::Pairing], "mu <= 60");
    // Dense matrices as a cross-check of the structured comparison.
    for mu in 2..=16 {
        for w in systems_with_mu(mu) {
            let f = check_dense_identities(&w);
            o.require(f.is_empty(), || format!("{:?}: {f:?}", w.weights()));
        }
    }
    results.push(report(6, "pairing and metric identities", o, t));

    // 7
    let t = Instant::now();
    let mut o = Outcome::new();
    let w = ws(&[1, 2, 12, 15, 30]);
    let jordan = jordan_blocks(&w);
    let spec = spectrum_direct(&w);
    let classes = jordan.classes();
    o.require(classes.len() == 1 && classes.contains_key(&Rational::ZERO), || "more than the class 0".into());
    let hist = jordan.size_histogram();
    o.require(jordan.largest_block() == 5 && hist.get(&5) == Some(&1), || format!("histogram {hist:?}"));
    o.require(hist.get(&3) == Some(&3), || format!("histogram {hist:?}"));
    o.require(jordan.blocks().iter().map(|b| b.size).sum::<usize>() == 60, || "sizes do not sum to 60".into());
    let mult = multiplicities(spec.s());
    let count = |size: u64| mult.iter().filter(|(_, c)| *c == size).count();
    o.require(hist.get(&2).copied().unwrap_or(0) == count(2), || format!("size 2: {:?} vs {}", hist.get(&2), count(2)));
    o.require(hist.get(&1).copied().unwrap_or(0) == count(1), || format!("size 1: {:?} vs {}", hist.get(&1), count(1)));
    println!("      mu = 60 block sizes: {hist:?}");
    results.push(report(7, "Jordan blocks of (1,2,12,15,30)", o, t));

    // 8
    let t = Instant::now();
    let mut o = Outcome::new();
    let rows = |n: usize| -> BTreeSet<Vec<u64>> {
        enumerate_reflexive(n).unwrap().into_iter().map(|r| r.weights.weights().to_vec()).collect()
    };
    let three = rows(3);
    for r in REFERENCE_TABLE_N3 {
        o.require(three.contains(r.as_slice()), || format!("n = 3 is missing {r:?}"));
    }
    let four = rows(4);
    for r in REFERENCE_TABLE_N4 {
        o.require(four.contains(r.as_slice()), || {
            let mu: u64 = r.iter().sum();
            format!(
                "n = 4 is missing {r:?}, mu = {mu}; not reflexive since {:?} do not divide {mu}",
                r.iter().filter(|&&x| !mu.is_multiple_of(x)).collect::<Vec<_>>()
            )
        });
    }
    let two = rows(2);
    let expected: BTreeSet<Vec<u64>> = [vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 3]].into_iter().collect();
    o.require(two == expected, || format!("n = 2 gives {two:?}"));
    o.require(two == brute_force_triples(), || "n = 2 differs from brute force".into());
    o.summary(&sweep, &[Check::Reflexive], "mu <= 60");
    results.push(report(8, "reflexive tables", o, t));

    // 9
    let t = Instant::now();
    let mut o = Outcome::new();
    let nine =
        [Check::SaitoIdentity, Check::Orthogonality, Check::NilpotentLowersH, Check::Conjugation, Check::HodgeTate];
    o.summary(&sweep, &nine, "mu <= 60");
    results.push(report(9, "Saito, orthogonality, conjugation and Hodge-Tate", o, t));

    // 10
    let t = Instant::now();
    let mut o = Outcome::new();
    let mut opts = VerifyOptions::new([Check::PathIndependence]);
    opts.path_samples = 500;
    let systems = random_systems(20, 30, 10);
    let paths = verify_list(&systems, &opts);
    o.require(paths.systems == 20, || "sample size".into());
    o.summary(&paths, &[Check::PathIndependence], "20 systems, mu <= 30");
    results.push(report(10, "path independence of monomial reduction", o, t));

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed in {:.1}s", results.len(), total.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
