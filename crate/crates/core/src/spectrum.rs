//! Spectral numbers of a weight system.
//!
//! Two independent routes produce the same [`Spectrum`]: the step recursion
//! ([`step_sequence`] then [`spectrum_from_steps`]) and the sorted merge of the
//! sets `{l * mu / w_i : 0 <= l < w_i}` ([`spectrum_direct`]). Equal values are
//! ordered by generator index `i`, which is the order the recursion's
//! minimum-index tie-break produces.

use num_integer::Integer;
use thiserror::Error;

use crate::rational::Rational;
use crate::weights::WeightSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("step map is not a bijection at k = {k}: {reason}")]
    BijectionViolation { k: usize, reason: String },
}

/// The terms `(a(k), i(k))` of the step recursion, stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSequence {
    width: usize,
    a: Vec<u64>,
    i: Vec<usize>,
}

impl StepSequence {
    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    pub fn a(&self, k: usize) -> &[u64] {
        &self.a[k * self.width..(k + 1) * self.width]
    }

    pub fn i(&self, k: usize) -> usize {
        self.i[k]
    }

    /// The sequence of directions `i(0), i(1), ...`.
    pub fn directions(&self) -> &[usize] {
        &self.i
    }

    /// `a(k)_{i(k)}`, the exponent being raised at step `k`.
    pub fn level(&self, k: usize) -> u64 {
        self.a[k * self.width + self.i[k]]
    }
}

/// `(a(k), i(k))` for `k = 0..=mu`.
pub fn step_sequence(w: &WeightSystem) -> StepSequence {
    extended_step_sequence(w, w.mu() as usize + 1)
}

/// The step recursion run for `len` terms (`len` may exceed `mu + 1`).
pub fn extended_step_sequence(w: &WeightSystem, len: usize) -> StepSequence {
    let weights = w.weights();
    let width = weights.len();
    let mut flat = Vec::with_capacity(len * width);
    let mut dirs = Vec::with_capacity(len);
    let mut a = vec![0u64; width];
    let mut i = 0usize;
    for k in 0..len {
        if k > 0 {
            a[i] += 1;
            i = argmin_ratio(&a, weights);
        }
        flat.extend_from_slice(&a);
        dirs.push(i);
    }
    StepSequence { width, a: flat, i: dirs }
}

/// Smallest index attaining `min_j a_j / w_j`, compared by cross multiplication.
fn argmin_ratio(a: &[u64], w: &[u64]) -> usize {
    let mut best = 0;
    for j in 1..a.len() {
        if (a[j] as u128) * (w[best] as u128) < (a[best] as u128) * (w[j] as u128) {
            best = j;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    mu: u64,
    max_weight: u64,
    /// Nondecreasing spectral values `s(k)`.
    s: Vec<Rational>,
    /// `sigma(k) = k - s(k)`.
    sigma: Vec<Rational>,
    /// `alpha(k) = ceil(s(k)) - s(k)`, the eigenvalue class in `[0, 1)`.
    alpha: Vec<Rational>,
    /// The label `(i, l)` with `s(k) = l * mu / w_i`.
    generators: Vec<(usize, u64)>,
}

impl Spectrum {
    fn from_labels(w: &WeightSystem, generators: Vec<(usize, u64)>) -> Self {
        let mu = w.mu();
        let len = generators.len();
        let (mut s, mut sigma, mut alpha) = (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
        for (k, &(i, l)) in generators.iter().enumerate() {
            // s = p/q in lowest terms; k - s and ceil(s) - s share the denominator q.
            let (num, den) = ((l * mu) as i64, w.weight(i) as i64);
            let g = num.gcd(&den).max(1);
            let (p, q) = (num / g, den / g);
            s.push(Rational::from_reduced(p, q));
            sigma.push(Rational::from_reduced(k as i64 * q - p, q));
            alpha.push(Rational::from_reduced((p + q - 1) / q * q - p, q));
        }
        Spectrum { n: w.n(), mu, max_weight: w.max_weight(), s, sigma, alpha, generators }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn generators(&self) -> &[(usize, u64)] {
        &self.generators
    }

    /// Whether every `s(k)` is an integer.
    pub fn is_integral(&self) -> bool {
        self.s.iter().all(Rational::is_integer)
    }

    /// Distinct eigenvalue classes, ascending.
    pub fn classes(&self) -> Vec<Rational> {
        let mut out = self.alpha.clone();
        out.sort();
        out.dedup();
        out
    }
}

/// `s(k) = mu * a(k)_{i(k)} / w_{i(k)}` read off the step sequence.
pub fn spectrum_from_steps(seq: &StepSequence, w: &WeightSystem) -> Spectrum {
    let mu = w.mu() as usize;
    let labels = (0..mu).map(|k| (seq.i(k), seq.level(k))).collect();
    Spectrum::from_labels(w, labels)
}

/// Sorted disjoint union of `{l * mu / w_i : 0 <= l < w_i}`, ties by generator index.
pub fn spectrum_direct(w: &WeightSystem) -> Spectrum {
    let mut labels: Vec<(usize, u64)> =
        w.weights().iter().enumerate().flat_map(|(i, &wi)| (0..wi).map(move |l| (i, l))).collect();
    let weights = w.weights();
    // l/w_i against l'/w_j; mu is a common factor.
    labels.sort_by(|&(i, l), &(j, m)| {
        let lhs = l as u128 * weights[j] as u128;
        let rhs = m as u128 * weights[i] as u128;
        lhs.cmp(&rhs).then(i.cmp(&j))
    });
    Spectrum::from_labels(w, labels)
}

/// The roots `sigma(k)` with multiplicities, ascending by root.
pub fn spectral_polynomial(w: &WeightSystem) -> Vec<(Rational, u64)> {
    multiplicities(spectrum_direct(w).sigma())
}

/// Multiset of values as `(value, count)`, ascending.
pub fn multiplicities(values: &[Rational]) -> Vec<(Rational, u64)> {
    let mut sorted = values.to_vec();
    sorted.sort();
    let mut out: Vec<(Rational, u64)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((last, c)) if *last == v => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Expands `prod_k (S + sigma(k))` into coefficients, constant term first.
pub fn spectral_polynomial_coefficients(w: &WeightSystem) -> Vec<Rational> {
    let mut coeffs = vec![Rational::ONE];
    for sigma in spectrum_direct(w).sigma() {
        let mut next = vec![Rational::ZERO; coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * sigma;
        }
        coeffs = next;
    }
    coeffs
}

/// A failed spectral identity, with the index where it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryViolation {
    /// `s(k) + s(mu + n - k) != mu` for some `n + 1 <= k < mu`.
    Reflection { k: usize },
    /// `sigma(k + 1) > sigma(k) + 1`, with `sigma(mu)` read as 0.
    StepBound { k: usize },
    /// `sigma(k)` outside `[0, n]`.
    Range { k: usize },
    /// `sigma(k) == 0` for `k != 0`.
    ZeroAway { k: usize },
    /// `sigma(k) == n` for `k != n`.
    TopAway { k: usize },
    /// `sigma(k) + sigma(n - k) != n` for `k <= n`.
    LowPairing { k: usize },
    /// `s(k) != 0` for some `k <= n`.
    LeadingZeros { k: usize },
    /// `s(n + 1) != mu / max w`.
    FirstNonzero,
}

/// Checks every symmetry and monotonicity identity of the spectrum.
pub fn check_symmetry(spec: &Spectrum) -> Vec<SymmetryViolation> {
    use SymmetryViolation::*;
    let n = spec.n;
    let mu = spec.mu as usize;
    let mu_r = Rational::from(spec.mu);
    let n_r = Rational::from(n);
    let s = &spec.s;
    let sigma = &spec.sigma;
    let mut out = Vec::new();

    for k in n + 1..mu {
        if &s[k] + &s[mu + n - k] != mu_r {
            out.push(Reflection { k });
        }
    }
    for k in 0..mu {
        let next = if k + 1 == mu { Rational::ZERO } else { sigma[k + 1].clone() };
        if next > &sigma[k] + &Rational::ONE {
            out.push(StepBound { k });
        }
    }
    for k in 0..mu {
        if sigma[k].is_negative() || sigma[k] > n_r {
            out.push(Range { k });
        }
        if sigma[k].is_zero() && k != 0 {
            out.push(ZeroAway { k });
        }
        if sigma[k] == n_r && k != n {
            out.push(TopAway { k });
        }
    }
    for k in 0..=n.min(mu - 1) {
        if n - k < mu && &sigma[k] + &sigma[n - k] != n_r {
            out.push(LowPairing { k });
        }
        if !s[k].is_zero() {
            out.push(LeadingZeros { k });
        }
    }
    // Smallest nonzero value is mu / max w, reached by the heaviest weight.
    if mu > n + 1 && s[n + 1] != Rational::new(spec.mu as i64, spec.max_weight as i64) {
        out.push(FirstNonzero);
    }
    out
}

/// `k -> (i(k), a(k)_{i(k)})` for `k < mu`, verified to be a bijection onto
/// `{(i, l) : 0 <= l < w_i}`.
pub fn index_bijection(seq: &StepSequence, w: &WeightSystem) -> Result<Vec<(usize, u64)>, SpectrumError> {
    let mu = w.mu() as usize;
    let mut seen: Vec<Vec<bool>> = w.weights().iter().map(|&wi| vec![false; wi as usize]).collect();
    let mut map = Vec::with_capacity(mu);
    for k in 0..mu {
        let (i, l) = (seq.i(k), seq.level(k));
        if l >= w.weight(i) {
            return Err(SpectrumError::BijectionViolation {
                k,
                reason: format!("a(k)_{} = {} exceeds w_{} - 1", i, l, i),
            });
        }
        let slot = &mut seen[i][l as usize];
        if *slot {
            return Err(SpectrumError::BijectionViolation { k, reason: format!("pair ({}, {}) hit twice", i, l) });
        }
        *slot = true;
        map.push((i, l));
    }
    // mu pairs, all distinct, in a set of size mu: onto.
    Ok(map)
}
