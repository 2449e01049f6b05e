//! Weight systems `(w_0, ..., w_n)` and the corpora used by the sweeps.

use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("no weights given")]
    Empty,
    #[error("weight #{index} is {value}, weights must be positive")]
    NonPositiveWeight { index: usize, value: i64 },
    #[error("gcd is {gcd}, not 1")]
    GcdNotOne { gcd: u64 },
    #[error("need at least 2 weights, got {count}")]
    TooFewWeights { count: usize },
}

/// A validated weight system: positive, nondecreasing, gcd 1, at least two entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<u64>,
    mu: u64,
    /// `weights[j] == input[order[j]]` for the input as given by the caller.
    order: Vec<usize>,
    /// Factor the input was divided by when gcd normalization was requested.
    scaled_by: u64,
}

impl WeightSystem {
    /// Validates `raw`, sorting it ascending. Rejects a gcd other than 1.
    pub fn new(raw: &[i64]) -> Result<Self, WeightError> {
        Self::build(raw, false)
    }

    /// Like [`WeightSystem::new`] but divides by the gcd instead of failing.
    pub fn normalized(raw: &[i64]) -> Result<Self, WeightError> {
        Self::build(raw, true)
    }

    fn build(raw: &[i64], divide_gcd: bool) -> Result<Self, WeightError> {
        if raw.is_empty() {
            return Err(WeightError::Empty);
        }
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, &v)| v <= 0) {
            return Err(WeightError::NonPositiveWeight { index, value });
        }
        if raw.len() < 2 {
            return Err(WeightError::TooFewWeights { count: raw.len() });
        }
        let g = raw.iter().fold(0u64, |g, &v| g.gcd(&(v as u64)));
        if g != 1 && !divide_gcd {
            return Err(WeightError::GcdNotOne { gcd: g });
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| raw[i]);
        let weights: Vec<u64> = order.iter().map(|&i| raw[i] as u64 / g).collect();
        let mu = weights.iter().sum();
        Ok(WeightSystem { weights, mu, order, scaled_by: g })
    }

    /// Builds from weights already known to be valid and sorted (corpus generation).
    fn from_sorted_unchecked(weights: Vec<u64>) -> Self {
        debug_assert!(weights.windows(2).all(|p| p[0] <= p[1]));
        let mu = weights.iter().sum();
        let order = (0..weights.len()).collect();
        WeightSystem { weights, mu, order, scaled_by: 1 }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    /// Number of weights minus one.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub fn max_weight(&self) -> u64 {
        *self.weights.last().expect("nonempty")
    }

    /// Position in the caller's input of each sorted weight.
    pub fn input_order(&self) -> &[usize] {
        &self.order
    }

    /// The weights in the order the caller gave them (after any gcd division).
    pub fn weights_in_input_order(&self) -> Vec<u64> {
        let mut out = vec![0; self.weights.len()];
        for (j, &pos) in self.order.iter().enumerate() {
            out[pos] = self.weights[j];
        }
        out
    }

    pub fn gcd_divisor(&self) -> u64 {
        self.scaled_by
    }

    /// `n == 1`: every formula still makes sense but lies below the classical range `n >= 2`.
    pub fn below_classical_range(&self) -> bool {
        self.n() < 2
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.below_classical_range() {
            out.push("below-paper-range: n = 1, results are extrapolated from the n >= 2 theory".to_string());
        }
        if self.scaled_by != 1 {
            out.push(format!("weights divided by their gcd {}", self.scaled_by));
        }
        out
    }

    pub fn all_ones(count: usize) -> Self {
        Self::from_sorted_unchecked(vec![1; count])
    }
}

/// Calls `visit` on every nondecreasing gcd-1 system with at least two weights and
/// `sum == mu` whose smallest weight is `first`.
pub fn for_each_system_with_first(mu: u64, first: u64, visit: &mut dyn FnMut(&WeightSystem)) {
    if first == 0 || first * 2 > mu {
        return;
    }
    let mut parts = vec![first];
    extend_partition(&mut parts, mu - first, first, first, visit);
}

fn extend_partition(
    parts: &mut Vec<u64>,
    remaining: u64,
    min_part: u64,
    gcd: u64,
    visit: &mut dyn FnMut(&WeightSystem),
) {
    // Last part takes everything that is left.
    if remaining >= min_part && gcd.gcd(&remaining) == 1 {
        let mut weights = parts.clone();
        weights.push(remaining);
        visit(&WeightSystem::from_sorted_unchecked(weights));
    }
    let mut p = min_part;
    while 2 * p <= remaining {
        parts.push(p);
        extend_partition(parts, remaining - p, p, gcd.gcd(&p), visit);
        parts.pop();
        p += 1;
    }
}

/// Every gcd-1 nondecreasing system with `sum == mu`, in lexicographic order.
pub fn systems_with_mu(mu: u64) -> Vec<WeightSystem> {
    let mut out = Vec::new();
    for first in 1..=mu / 2 {
        for_each_system_with_first(mu, first, &mut |w| out.push(w.clone()));
    }
    out
}

/// Work units `(mu, smallest weight)` covering every system with `2 <= mu <= max_mu`.
pub fn corpus_shards(max_mu: u64) -> Vec<(u64, u64)> {
    (2..=max_mu).flat_map(|mu| (1..=mu / 2).map(move |first| (mu, first))).collect()
}

/// A random valid system with `mu <= max_mu` and between 2 and `max_len` weights.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, max_mu: u64, max_len: usize) -> WeightSystem {
    assert!(max_mu >= 2 && max_len >= 2);
    loop {
        let len = rng.gen_range(2..=max_len.min(max_mu as usize));
        let budget = max_mu - (len as u64 - 1);
        // Mix heavy and light weights so both regimes show up.
        let cap = if rng.gen_bool(0.5) { budget } else { budget.min(12) };
        let raw: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=cap) as i64).collect();
        if raw.iter().sum::<i64>() as u64 > max_mu {
            continue;
        }
        if let Ok(w) = WeightSystem::new(&raw) {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_three() {
        let w = WeightSystem::new(&[1, 1, 1]).unwrap();
        assert_eq!(w.weights(), &[1, 1, 1]);
        assert_eq!(w.n(), 2);
        assert_eq!(w.mu(), 3);
    }

    #[test]
    fn sorts_and_remembers_order() {
        let w = WeightSystem::new(&[30, 1, 15, 2, 12]).unwrap();
        assert_eq!(w.weights(), &[1, 2, 12, 15, 30]);
        assert_eq!(w.n(), 4);
        assert_eq!(w.mu(), 60);
        assert_eq!(w.weights_in_input_order(), vec![30, 1, 15, 2, 12]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(WeightSystem::new(&[2, 4, 6]), Err(WeightError::GcdNotOne { gcd: 2 }));
        assert_eq!(WeightSystem::new(&[2, 4, 6]).unwrap_err().to_string(), "gcd is 2, not 1");
        assert_eq!(WeightSystem::new(&[1, 0, 2]), Err(WeightError::NonPositiveWeight { index: 1, value: 0 }));
        assert_eq!(WeightSystem::new(&[1]), Err(WeightError::TooFewWeights { count: 1 }));
        assert_eq!(WeightSystem::new(&[]), Err(WeightError::Empty));
    }

    #[test]
    fn gcd_normalization() {
        let w = WeightSystem::normalized(&[6, 2, 4]).unwrap();
        assert_eq!(w.weights(), &[1, 2, 3]);
        assert_eq!(w.gcd_divisor(), 2);
        assert!(!w.warnings().is_empty());
    }

    #[test]
    fn idempotent() {
        let w = WeightSystem::new(&[5, 3, 3, 1]).unwrap();
        let raw: Vec<i64> = w.weights().iter().map(|&x| x as i64).collect();
        let again = WeightSystem::new(&raw).unwrap();
        assert_eq!(again.weights(), w.weights());
        assert_eq!(again.input_order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn n_equal_one_is_flagged() {
        let w = WeightSystem::new(&[1, 2]).unwrap();
        assert!(w.below_classical_range());
        assert!(!WeightSystem::all_ones(3).below_classical_range());
        assert_eq!(WeightSystem::all_ones(6).mu(), 6);
    }

    #[test]
    fn corpus_counts_match_brute_force() {
        // Brute force: all nondecreasing tuples of length >= 2 summing to mu with gcd 1.
        fn brute(mu: u64) -> usize {
            fn rec(rem: u64, min: u64, len: usize, g: u64, acc: &mut usize) {
                if rem == 0 {
                    if len >= 2 && g == 1 {
                        *acc += 1;
                    }
                    return;
                }
                for p in min..=rem {
                    rec(rem - p, p, len + 1, g.gcd(&p), acc);
                }
            }
            let mut acc = 0;
            rec(mu, 1, 0, 0, &mut acc);
            acc
        }
        for mu in 2..=24 {
            let systems = systems_with_mu(mu);
            assert_eq!(systems.len(), brute(mu), "mu = {mu}");
            assert!(systems.iter().all(|w| w.mu() == mu));
        }
    }

    #[test]
    fn random_systems_are_valid() {
        let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(11);
        for _ in 0..200 {
            let w = random_system(&mut rng, 500, 8);
            assert!(w.mu() <= 500);
            assert_eq!(w.weights().iter().fold(0u64, |g, &x| g.gcd(&x)), 1);
        }
    }
}
