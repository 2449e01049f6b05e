//! Identity suites over single systems and whole corpora.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::filtrations::FiltrationContext;
use crate::frobenius::{solve_pairing, FrobeniusInitialData};
use crate::gauss_manin::{GElement, GaussManin};
use crate::rational::Rational;
use crate::reflexive::is_reflexive;
use crate::spectrum::{
    check_symmetry, index_bijection, multiplicities, spectrum_direct, spectrum_from_steps, step_sequence, Spectrum,
};
use crate::weights::{corpus_shards, for_each_system_with_first, random_system, WeightSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// Step recursion and direct merge give the same spectrum; the step map is a bijection.
    OracleEquality,
    Symmetry,
    Bernstein,
    /// `birkhoff_matrices` against the initial data.
    Birkhoff,
    /// Multiplication by `f` on the basis, exactly and modulo `theta`.
    FAction,
    Charpoly,
    /// `c = g`, `g A_inf + A_inf^T g = n g`, `g g = id`.
    Pairing,
    Jordan,
    /// Nesting and depth of `H`, `G` and `M`.
    Filtrations,
    SaitoIdentity,
    Orthogonality,
    NilpotentLowersH,
    Conjugation,
    /// `H^p = M(n - 2p)`; only checked for all-ones weights.
    HodgeTate,
    /// Integral spectrum iff every weight divides `mu`.
    Reflexive,
    PathIndependence,
}

impl Check {
    pub const ALL: [Check; 16] = [
        Check::OracleEquality,
        Check::Symmetry,
        Check::Bernstein,
        Check::Birkhoff,
        Check::FAction,
        Check::Charpoly,
        Check::Pairing,
        Check::Jordan,
        Check::Filtrations,
        Check::SaitoIdentity,
        Check::Orthogonality,
        Check::NilpotentLowersH,
        Check::Conjugation,
        Check::HodgeTate,
        Check::Reflexive,
        Check::PathIndependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::OracleEquality => "oracle-equality",
            Check::Symmetry => "symmetry",
            Check::Bernstein => "bernstein",
            Check::Birkhoff => "birkhoff",
            Check::FAction => "f-action",
            Check::Charpoly => "charpoly",
            Check::Pairing => "pairing",
            Check::Jordan => "jordan",
            Check::Filtrations => "filtrations",
            Check::SaitoIdentity => "saito-identity",
            Check::Orthogonality => "orthogonality",
            Check::NilpotentLowersH => "nilpotent-lowers-h",
            Check::Conjugation => "conjugation",
            Check::HodgeTate => "hodge-tate",
            Check::Reflexive => "reflexive",
            Check::PathIndependence => "path-independence",
        }
    }

    fn needs_steps(self) -> bool {
        matches!(
            self,
            Check::OracleEquality | Check::Bernstein | Check::Birkhoff | Check::FAction | Check::PathIndependence
        )
    }

    fn needs_filtrations(self) -> bool {
        matches!(
            self,
            Check::Jordan
                | Check::Filtrations
                | Check::SaitoIdentity
                | Check::Orthogonality
                | Check::NilpotentLowersH
                | Check::Conjugation
                | Check::HodgeTate
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub mu: u64,
    pub weights: Vec<u64>,
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub checks: BTreeSet<Check>,
    /// Random exponent vectors per system for [`Check::PathIndependence`].
    pub path_samples: usize,
    /// Entries of sampled exponent vectors lie in `-range..=range`.
    pub exponent_range: i64,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn new(checks: impl IntoIterator<Item = Check>) -> Self {
        VerifyOptions { checks: checks.into_iter().collect(), path_samples: 20, exponent_range: 3, seed: 0 }
    }

    pub fn all() -> Self {
        Self::new(Check::ALL)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub systems: u64,
    pub checks: Vec<Check>,
    /// Sorted by `mu`, weights, check.
    pub failures: Vec<Failure>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_for(&self, check: Check) -> impl Iterator<Item = &Failure> {
        self.failures.iter().filter(move |f| f.check == check)
    }

    fn merge(mut self, other: Summary) -> Summary {
        self.systems += other.systems;
        self.failures.extend(other.failures);
        self
    }

    fn finish(mut self, opts: &VerifyOptions) -> Summary {
        self.checks = opts.checks.iter().copied().collect();
        self.failures.sort();
        self
    }
}

struct Recorder<'a> {
    w: &'a WeightSystem,
    out: Vec<Failure>,
}

impl Recorder<'_> {
    fn fail(&mut self, check: Check, detail: impl Into<String>) {
        self.out.push(Failure { mu: self.w.mu(), weights: self.w.weights().to_vec(), check, detail: detail.into() });
    }
}

/// Runs the selected checks on one system.
pub fn verify_system(w: &WeightSystem, opts: &VerifyOptions) -> Vec<Failure> {
    let mut rec = Recorder { w, out: Vec::new() };
    let has = |c: Check| opts.checks.contains(&c);
    let spec = spectrum_direct(w);

    if has(Check::Symmetry) {
        for v in check_symmetry(&spec) {
            rec.fail(Check::Symmetry, format!("{v:?}"));
        }
    }
    if has(Check::Reflexive) && is_reflexive(w) != spec.is_integral() {
        rec.fail(Check::Reflexive, format!("reflexive = {}, integral = {}", is_reflexive(w), spec.is_integral()));
    }
    if has(Check::Pairing) {
        let data = FrobeniusInitialData::from_spectrum(&spec);
        if let Err(e) = data.check() {
            rec.fail(Check::Pairing, e.to_string());
        }
        match solve_pairing(&spec) {
            Ok(c) if c.equals_permutation(data.partner()) => {}
            Ok(_) => rec.fail(Check::Pairing, "pairing c differs from g"),
            Err(e) => rec.fail(Check::Pairing, e.to_string()),
        }
    }
    if has(Check::Charpoly) {
        check_charpoly(&mut rec, &FrobeniusInitialData::from_spectrum(&spec));
    }

    let spec = if opts.checks.iter().any(|c| c.needs_steps()) { check_module(&mut rec, spec, opts) } else { spec };
    if opts.checks.iter().any(|c| c.needs_filtrations()) {
        check_filtrations(&mut rec, &FiltrationContext::from_spectrum(spec), opts);
    }
    rec.out
}

/// Checks that need the step sequence and the Gauss-Manin module. Hands the
/// spectrum back for the filtration checks.
fn check_module(rec: &mut Recorder, spec: Spectrum, opts: &VerifyOptions) -> Spectrum {
    let has = |c: Check| opts.checks.contains(&c);
    let w = rec.w;
    let mu = w.mu() as usize;
    let steps = step_sequence(w);
    if has(Check::OracleEquality) {
        if spectrum_from_steps(&steps, w) != spec {
            rec.fail(Check::OracleEquality, "step recursion and direct merge disagree");
        }
        if let Err(e) = index_bijection(&steps, w) {
            rec.fail(Check::OracleEquality, e.to_string());
        }
    }
    let data = FrobeniusInitialData::from_spectrum(&spec);
    let gm = GaussManin::from_parts(w, spec, steps);
    if has(Check::Bernstein) && gm.bernstein_check() != GElement::term(mu, mu as i64, 0, Rational::ONE) {
        rec.fail(Check::Bernstein, format!("got {}", gm.bernstein_check()));
    }
    if has(Check::Birkhoff) {
        match gm.birkhoff_matrices() {
            Ok((a0, ainf)) => {
                if a0 != data.a0() {
                    rec.fail(Check::Birkhoff, "A_0 is not mu times the cyclic shift");
                }
                if ainf != data.ainf() {
                    rec.fail(Check::Birkhoff, "A_inf is not diag(sigma)");
                }
            }
            Err(e) => rec.fail(Check::Birkhoff, e.to_string()),
        }
    }
    if has(Check::FAction) {
        check_f_action(rec, &gm, &data);
    }
    if has(Check::PathIndependence) {
        check_paths(rec, &gm, opts);
    }
    gm.into_parts().0
}

fn check_charpoly(rec: &mut Recorder, data: &FrobeniusInitialData) {
    let mu = data.mu();
    let mut expected = vec![Rational::ZERO; mu + 1];
    expected[0] = -Rational::from(mu).pow(mu as u32);
    expected[mu] = Rational::ONE;
    if data.a0().charpoly() != expected {
        rec.fail(Check::Charpoly, "charpoly(A_0) != T^mu - mu^mu");
    }
}

fn check_f_action(rec: &mut Recorder, gm: &GaussManin, data: &FrobeniusInitialData) {
    let mu = data.mu();
    let sigma = data.ainf_diagonal();
    let a0 = data.a0();
    for k in 0..mu {
        // f omega_k = mu omega_{k+1} + sigma(k) theta omega_k
        let mut expected = GElement::term(mu, 0, (k + 1) % mu, Rational::from(mu));
        expected.add_term(-1, k, sigma[k].clone());
        let image = gm.f_action_basis(k);
        if image != expected {
            rec.fail(Check::FAction, format!("f omega_{k} = {image}"));
        }
        // column k of f modulo theta
        for row in 0..mu {
            if &image.coeff(0, row) != a0.get(row, k) {
                rec.fail(Check::FAction, format!("f modulo theta differs from A_0 at ({row}, {k})"));
            }
        }
    }
}

/// Random exponent vectors, each reduced along the greedy path and along a
/// shuffled one, plus the basis monomials `u^{a(k)}`.
fn check_paths(rec: &mut Recorder, gm: &GaussManin, opts: &VerifyOptions) {
    let w = gm.weights();
    let mu = gm.mu();
    for k in 0..mu {
        let a: Vec<i64> = gm.steps().a(k).iter().map(|&v| v as i64).collect();
        match gm.reduce_monomial(&a) {
            Ok(x) if x == GElement::basis(mu, k) => {}
            Ok(x) => rec.fail(Check::PathIndependence, format!("u^a({k}) reduces to {x}")),
            Err(e) => rec.fail(Check::PathIndependence, e.to_string()),
        }
    }
    let mut rng = StdRng::seed_from_u64(opts.seed ^ w.weights().iter().fold(mu as u64, |h, &x| h.wrapping_mul(31) + x));
    for _ in 0..opts.path_samples {
        let a: Vec<i64> =
            (0..w.weights().len()).map(|_| rng.gen_range(-opts.exponent_range..=opts.exponent_range)).collect();
        if let Some(detail) = path_mismatch(gm, &a, &mut rng) {
            rec.fail(Check::PathIndependence, detail);
        }
    }
}

/// Compares the greedy reduction of `u^a` with a shuffled path and with the
/// shifted representative `a + w`. Returns a description of the first mismatch.
pub fn path_mismatch<R: Rng + ?Sized>(gm: &GaussManin, a: &[i64], rng: &mut R) -> Option<String> {
    let w = gm.weights();
    let greedy = match gm.reduce_monomial(a) {
        Ok(x) => x,
        Err(e) => return Some(e.to_string()),
    };
    let target = crate::gauss_manin::ExponentVector(a.to_vec()).canonical(w);
    let mut path = gm.default_path(&target);
    path.shuffle(rng);
    match gm.reduce_along(&target, &path) {
        Ok(x) if x == greedy => {}
        Ok(x) => return Some(format!("u^{a:?}: greedy {greedy} but path {path:?} gives {x}")),
        Err(e) => return Some(e.to_string()),
    }
    // Shifting by w only changes the canonical exponent when `a` is
    // already nonnegative.
    if a.iter().any(|&x| x < 0) {
        return None;
    }
    let shifted: Vec<i64> = a.iter().zip(w.weights()).map(|(&x, &wi)| x + wi as i64).collect();
    match gm.reduce_monomial(&shifted) {
        Ok(x) if x == greedy => None,
        Ok(x) => Some(format!("u^{a:?} and u^{shifted:?} reduce differently: {greedy} vs {x}")),
        Err(e) => Some(e.to_string()),
    }
}

fn check_filtrations(rec: &mut Recorder, ctx: &FiltrationContext, opts: &VerifyOptions) {
    let has = |c: Check| opts.checks.contains(&c);
    let spec = ctx.spectrum();
    let n = spec.n() as i64;
    if has(Check::Jordan) {
        for v in ctx.jordan().check() {
            rec.fail(Check::Jordan, v);
        }
        // Block sizes are value multiplicities.
        let mut sizes: Vec<u64> = ctx.jordan().blocks().iter().map(|b| b.size as u64).collect();
        let mut mult: Vec<u64> = multiplicities(spec.s()).into_iter().map(|(_, c)| c).collect();
        sizes.sort_unstable();
        mult.sort_unstable();
        if sizes != mult {
            rec.fail(Check::Jordan, "block sizes differ from value multiplicities");
        }
    }
    if has(Check::Filtrations) {
        for v in ctx.report().check(spec) {
            rec.fail(Check::Filtrations, v);
        }
    }
    for p in 0..=n + 1 {
        if has(Check::SaitoIdentity) && !ctx.saito_identity(p) {
            rec.fail(Check::SaitoIdentity, format!("p = {p}"));
        }
        if has(Check::NilpotentLowersH) && !ctx.nilpotent_lowers_h(p) {
            rec.fail(Check::NilpotentLowersH, format!("p = {p}"));
        }
    }
    if has(Check::Orthogonality) {
        for (alpha, p) in ctx.orthogonality_failures() {
            rec.fail(Check::Orthogonality, format!("alpha = {alpha}, p = {p}"));
        }
    }
    if has(Check::Conjugation) {
        for k in ctx.conjugation_violations() {
            rec.fail(Check::Conjugation, format!("k = {k}"));
        }
    }
    if has(Check::HodgeTate) && rec.w.weights().iter().all(|&x| x == 1) {
        let report = ctx.report();
        for p in 0..=n + 1 {
            if report.h(p) != report.monodromy(n - 2 * p) {
                rec.fail(Check::HodgeTate, format!("p = {p}"));
            }
        }
    }
}

/// Every gcd-1 nondecreasing system with `2 <= mu <= max_mu` and at least two weights.
pub fn verify_corpus(max_mu: u64, opts: &VerifyOptions) -> Summary {
    // A_0 depends on mu alone, so its characteristic polynomial is checked once per mu.
    let mut per_system = opts.clone();
    per_system.checks.remove(&Check::Charpoly);
    let mut summary = corpus_shards(max_mu)
        .into_par_iter()
        .map(|(mu, first)| {
            let mut part = Summary::default();
            for_each_system_with_first(mu, first, &mut |w| {
                part.systems += 1;
                part.failures.extend(verify_system(w, &per_system));
            });
            part
        })
        .reduce(Summary::default, Summary::merge);
    if opts.checks.contains(&Check::Charpoly) {
        let charpoly = VerifyOptions::new([Check::Charpoly]);
        let extra: Vec<Failure> = (2..=max_mu)
            .into_par_iter()
            .flat_map_iter(|mu| verify_system(&WeightSystem::all_ones(mu as usize), &charpoly))
            .collect();
        summary.failures.extend(extra);
    }
    summary.finish(opts)
}

/// `count` random systems with `mu <= max_mu`, drawn from `seed`.
pub fn verify_random(count: usize, max_mu: u64, opts: &VerifyOptions) -> Summary {
    let systems = random_systems(count, max_mu, opts.seed);
    verify_list(&systems, opts)
}

pub fn verify_list(systems: &[WeightSystem], opts: &VerifyOptions) -> Summary {
    systems
        .par_iter()
        .map(|w| Summary { systems: 1, checks: Vec::new(), failures: verify_system(w, opts) })
        .reduce(Summary::default, Summary::merge)
        .finish(opts)
}

/// Deterministic sample of random systems; lengths range up to `min(mu, 12)`.
pub fn random_systems(count: usize, max_mu: u64, seed: u64) -> Vec<WeightSystem> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_system(&mut rng, max_mu, 12)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_on_small_systems() {
        let opts = VerifyOptions::all();
        for raw in [&[1, 1, 1][..], &[1, 2, 3], &[1, 1, 3], &[2, 3, 5], &[1, 1, 1, 1], &[1, 2, 12, 15, 30]] {
            let w = WeightSystem::new(raw).unwrap();
            if w.mu() > 30 {
                let mut cheap = opts.clone();
                cheap.checks.remove(&Check::FAction);
                cheap.checks.remove(&Check::PathIndependence);
                assert!(verify_system(&w, &cheap).is_empty());
            } else {
                assert_eq!(verify_system(&w, &opts), vec![], "{raw:?}");
            }
        }
    }

    #[test]
    fn corpus_is_deterministic_and_green() {
        let mut opts = VerifyOptions::all();
        opts.checks.remove(&Check::FAction);
        opts.path_samples = 2;
        let a = verify_corpus(12, &opts);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.systems, (2..=12).map(|mu| crate::weights::systems_with_mu(mu).len() as u64).sum::<u64>());
        assert_eq!(verify_corpus(12, &opts), a);
    }

    #[test]
    fn random_sample_is_reproducible() {
        assert_eq!(random_systems(5, 40, 7), random_systems(5, 40, 7));
        let s = verify_random(20, 40, &VerifyOptions::new([Check::OracleEquality, Check::Symmetry]));
        assert!(s.passed());
        assert_eq!(s.systems, 20);
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>(), Ok(c));
        }
        assert!("nope".parse::<Check>().is_err());
    }
}
