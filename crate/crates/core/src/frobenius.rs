//! Frobenius initial data `(A_0, A_inf, g, e_0)` and the higher residue pairing.
//!
//! `A_0` sends `e_k` to `mu e_{k+1}` (indices mod `mu`), `A_inf` is
//! `diag(sigma(0), ..., sigma(mu-1))` and `g` pairs `e_k` with `e_{pi(k)}`,
//! where `pi(k) = n - k` for `k <= n` and `pi(k) = mu + n - k` otherwise.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::spectrum::{spectrum_direct, Spectrum};
use crate::weights::WeightSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("metric is not an involution at index {k}")]
    NotInvolution { k: usize },
    #[error("g A_inf + A_inf^T g != n g at ({k}, {l})")]
    AdjointIdentity { k: usize, l: usize },
    #[error("pairing constraints leave residue class {class} undetermined")]
    PairingUndetermined { class: usize },
}

/// Partner of `k` under the metric.
pub fn metric_partner(n: usize, mu: usize, k: usize) -> usize {
    if k <= n {
        n - k
    } else {
        mu + n - k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusInitialData {
    mu: usize,
    n: usize,
    sigma: Vec<Rational>,
    partner: Vec<usize>,
}

impl FrobeniusInitialData {
    /// Builds the data without running [`FrobeniusInitialData::check`].
    pub fn from_spectrum(spec: &Spectrum) -> Self {
        let (n, mu) = (spec.n(), spec.len());
        FrobeniusInitialData {
            mu,
            n,
            sigma: spec.sigma().to_vec(),
            partner: (0..mu).map(|k| metric_partner(n, mu, k)).collect(),
        }
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the unit `e_0`.
    pub fn unit(&self) -> usize {
        0
    }

    /// The diagonal of `A_inf`.
    pub fn ainf_diagonal(&self) -> &[Rational] {
        &self.sigma
    }

    /// `g` as a permutation: `g(e_k, e_l) = 1` iff `l = partner()[k]`.
    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    pub fn a0(&self) -> Matrix {
        let mu = self.mu;
        let m = Rational::from(mu);
        Matrix::from_fn(mu, mu, |r, c| if r == (c + 1) % mu { m.clone() } else { Rational::ZERO })
    }

    pub fn ainf(&self) -> Matrix {
        Matrix::diagonal(&self.sigma)
    }

    pub fn g(&self) -> Matrix {
        permutation_matrix(&self.partner)
    }

    /// Checks `g^2 = id` and `g A_inf + A_inf^T g = n g` on the permutation form.
    pub fn check(&self) -> Result<(), FrobeniusError> {
        let n = Rational::from(self.n);
        for k in 0..self.mu {
            let l = self.partner[k];
            if self.partner[l] != k {
                return Err(FrobeniusError::NotInvolution { k });
            }
            // (g A_inf + A_inf^T g)[k][l] = (sigma(l) + sigma(k)) g[k][l]
            if &self.sigma[k] + &self.sigma[l] != n {
                return Err(FrobeniusError::AdjointIdentity { k, l });
            }
        }
        Ok(())
    }
}

fn permutation_matrix(partner: &[usize]) -> Matrix {
    let mu = partner.len();
    Matrix::from_fn(mu, mu, |r, c| if partner[r] == c { Rational::ONE } else { Rational::ZERO })
}

pub fn initial_data(w: &WeightSystem) -> FrobeniusInitialData {
    let data = FrobeniusInitialData::from_spectrum(&spectrum_direct(w));
    data.check().expect("metric identities hold for every weight system");
    data
}

/// `c[k][l]` with `S(omega_k, omega_l) = c[k][l] s_0 tau^{-n}` and `s_0 = 1`.
///
/// The entries depend only on `(k + l) mod mu`, so one value per residue class is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    class_value: Vec<Rational>,
}

impl PairingMatrix {
    pub fn mu(&self) -> usize {
        self.class_value.len()
    }

    pub fn get(&self, k: usize, l: usize) -> &Rational {
        &self.class_value[(k + l) % self.mu()]
    }

    pub fn matrix(&self) -> Matrix {
        let mu = self.mu();
        Matrix::from_fn(mu, mu, |k, l| self.get(k, l).clone())
    }

    /// Entrywise equality with the permutation matrix of `partner`.
    ///
    /// Each row meets every residue class exactly once, so this holds iff a
    /// single class carries the value `1`, the rest are `0`, and every pair
    /// `(k, partner[k])` falls in that class.
    pub fn equals_permutation(&self, partner: &[usize]) -> bool {
        let mu = self.mu();
        if partner.len() != mu {
            return false;
        }
        let mut nonzero = self.class_value.iter().enumerate().filter(|(_, v)| !v.is_zero());
        let (Some((class, value)), None) = (nonzero.next(), nonzero.next()) else { return false };
        value == &Rational::ONE && partner.iter().enumerate().all(|(k, &l)| (k + l) % mu == class)
    }
}

/// Solves for the pairing from its constraints.
///
/// Compatibility with `A_0` forces `c[k][l]` to depend only on `(k + l) mod mu`;
/// compatibility with `A_inf` forces `c[k][l] = 0` unless `sigma(k) + sigma(l) = n`.
/// A residue class survives only if every pair in it satisfies the second
/// condition, and the normalization `c[0][n] = 1` fixes the surviving class.
pub fn solve_pairing(spec: &Spectrum) -> Result<PairingMatrix, FrobeniusError> {
    let (n, mu) = (spec.n(), spec.len());
    let sigma = spec.sigma();
    let target = Rational::from(n);
    let mut class_value = vec![Rational::ZERO; mu];
    class_value[n % mu] = Rational::ONE;
    for (class, value) in class_value.iter().enumerate() {
        let consistent = (0..mu).all(|k| &sigma[k] + &sigma[(class + mu - k) % mu] == target);
        if value.is_zero() == consistent {
            // Either the normalized class violates A_inf, or a second class
            // could carry an independent constant.
            return Err(FrobeniusError::PairingUndetermined { class });
        }
    }
    Ok(PairingMatrix { class_value })
}

pub fn pairing_matrix(w: &WeightSystem) -> PairingMatrix {
    solve_pairing(&spectrum_direct(w)).expect("the pairing is unique for every weight system")
}

/// `det(T - A_0)`, constant term first.
pub fn charpoly_a0(w: &WeightSystem) -> Vec<Rational> {
    initial_data(w).a0().charpoly()
}

/// Identities between `A_0`, `A_inf`, `g` and `c`, checked on dense matrices.
pub fn check_dense_identities(w: &WeightSystem) -> Vec<String> {
    let data = initial_data(w);
    let g = data.g();
    let ainf = data.ainf();
    let a0 = data.a0();
    let mut failures = Vec::new();
    if &(&g * &ainf) + &(&ainf.transpose() * &g) != g.scale(&Rational::from(data.n)) {
        failures.push("g A_inf + A_inf^T g != n g".to_string());
    }
    if &g * &g != Matrix::identity(data.mu) {
        failures.push("g g != id".to_string());
    }
    if !g.is_symmetric() {
        failures.push("g not symmetric".to_string());
    }
    if &g * &a0 != &a0.transpose() * &g {
        failures.push("A_0 not self-adjoint for g".to_string());
    }
    if pairing_matrix(w).matrix() != g {
        failures.push("pairing c != g".to_string());
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::systems_with_mu;

    fn ws(v: &[i64]) -> WeightSystem {
        WeightSystem::new(v).unwrap()
    }

    fn pairs(data: &FrobeniusInitialData) -> Vec<(usize, usize)> {
        data.partner().iter().copied().enumerate().collect()
    }

    #[test]
    fn all_ones_three() {
        let d = initial_data(&ws(&[1, 1, 1]));
        assert_eq!(d.ainf_diagonal(), &[0.into(), 1.into(), 2.into()]);
        assert_eq!(pairs(&d), vec![(0, 2), (1, 1), (2, 0)]);
        let c = pairing_matrix(&ws(&[1, 1, 1]));
        for k in 0..3 {
            for l in 0..3 {
                let expect = if k + l == 2 { 1 } else { 0 };
                assert_eq!(c.get(k, l), &Rational::from(expect));
            }
        }
        assert_eq!(charpoly_a0(&ws(&[1, 1, 1])), vec![(-27).into(), 0.into(), 0.into(), 1.into()]);
    }

    #[test]
    fn one_two_three() {
        let w = ws(&[1, 2, 3]);
        let d = initial_data(&w);
        assert_eq!(pairs(&d), vec![(0, 2), (1, 1), (2, 0), (3, 5), (4, 4), (5, 3)]);
        let c = pairing_matrix(&w);
        assert_eq!(c.get(3, 5), &Rational::ONE);
        assert_eq!(c.get(4, 4), &Rational::ONE);
        assert_eq!(c.get(3, 4), &Rational::ZERO);
    }

    #[test]
    fn all_ones_ainf_is_range() {
        for len in 2..8 {
            let d = initial_data(&WeightSystem::all_ones(len));
            let expect: Vec<Rational> = (0..len).map(Rational::from).collect();
            assert_eq!(d.ainf_diagonal(), expect.as_slice());
        }
    }

    #[test]
    fn charpoly_one_one_two() {
        let p = charpoly_a0(&ws(&[1, 1, 2]));
        assert_eq!(p, vec![(-256).into(), 0.into(), 0.into(), 0.into(), 1.into()]);
    }

    /// Bareiss fraction-free determinant of an integer matrix.
    fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
        let n = m.len();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    /// Charpoly by evaluating `det(t - A_0)` at `mu + 1` integer points and
    /// solving the Vandermonde system.
    fn charpoly_by_interpolation(mu: usize) -> Vec<Rational> {
        let points: Vec<i128> = (0..=mu as i128).collect();
        let values: Vec<Rational> = points
            .iter()
            .map(|&t| {
                let m = (0..mu)
                    .map(|r| {
                        (0..mu)
                            .map(|c| (if r == c { t } else { 0 }) - if r == (c + 1) % mu { mu as i128 } else { 0 })
                            .collect()
                    })
                    .collect();
                Rational::from_bigint(bareiss_det(m).into())
            })
            .collect();
        // Newton divided differences, then expand to monomial coefficients.
        let mut dd = values.clone();
        for level in 1..=mu {
            for i in (level..=mu).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / Rational::from((points[i] - points[i - level]) as i64);
            }
        }
        let mut coeffs = vec![Rational::ZERO; mu + 1];
        for i in (0..=mu).rev() {
            // coeffs = coeffs * (T - x_i) + dd[i]
            let mut next = vec![Rational::ZERO; mu + 1];
            for d in 0..mu {
                next[d + 1] += &coeffs[d];
                next[d] -= &(&coeffs[d] * &Rational::from(points[i] as i64));
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        coeffs
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        for mu in 2..=12u64 {
            let w = &systems_with_mu(mu)[0];
            assert_eq!(charpoly_a0(w), charpoly_by_interpolation(mu as usize), "mu = {mu}");
        }
    }

    #[test]
    fn class_form_agrees_with_dense_comparison() {
        for mu in 2..=12 {
            for w in systems_with_mu(mu) {
                let c = pairing_matrix(&w);
                let d = initial_data(&w);
                assert_eq!(c.equals_permutation(d.partner()), c.matrix() == d.g());
                assert!(c.equals_permutation(d.partner()));
                let mut shifted = d.partner().to_vec();
                shifted.rotate_left(1);
                assert_eq!(c.equals_permutation(&shifted), c.matrix() == permutation_matrix(&shifted));
            }
        }
    }

    #[test]
    fn dense_identities_small_corpus() {
        for mu in 2..=14 {
            for w in systems_with_mu(mu) {
                assert!(check_dense_identities(&w).is_empty(), "{:?}", w.weights());
                assert_eq!(pairing_matrix(&w).get(0, w.n()), &Rational::ONE);
            }
        }
    }

    #[test]
    fn a0_matches_birkhoff_extraction() {
        use crate::gauss_manin::GaussManin;
        for v in [&[1, 1, 1][..], &[1, 2, 3], &[1, 1, 2, 3], &[2, 3, 5]] {
            let w = ws(v);
            let d = initial_data(&w);
            let (a0, ainf) = GaussManin::new(&w).birkhoff_matrices().unwrap();
            assert_eq!(a0, d.a0());
            assert_eq!(ainf, d.ainf());
        }
    }
}
