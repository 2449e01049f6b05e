//! The Gauss-Manin module in the basis `omega_0, ..., omega_{mu-1}`.
//!
//! An element is a vector of Laurent polynomials in `tau` (`theta = 1/tau`).
//! The connection acts on basis elements by
//! `tau d/dtau omega_k = -sigma(k) omega_k - mu tau omega_{k+1}` with
//! `omega_mu = omega_0`, and on everything else by the Leibniz rule.
//! Monomial classes `[u^a omega_0]` are reduced to the basis by walking a
//! lattice path from `0` to `a` and applying, at each step in direction `j`,
//! `u^{a + 1_j} omega_0 = -(1/mu) theta (tau d/dtau + L_j(a)) u^a omega_0`
//! with `L_j(a) = |a| - mu a_j / w_j`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::spectrum::{spectrum_direct, step_sequence, Spectrum, StepSequence};
use crate::weights::WeightSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussManinError {
    #[error("element has {got} coordinates, expected mu = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("theta^2 d/dtheta omega_{k} has a tau^{exponent} term outside the Birkhoff form")]
    DecompositionFailure { k: usize, exponent: i64 },
    #[error("invalid lattice path: {0}")]
    InvalidPath(String),
}

/// A Laurent polynomial in `tau` with exact coefficients; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i64, coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or(Rational::ZERO)
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("{c}*tau^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element `sum_k p_k(tau) omega_k` of the Gauss-Manin module, stored as
/// its nonzero terms `coeff * tau^m * omega_k` keyed by `(k, m)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GElement {
    mu: usize,
    terms: BTreeMap<(usize, i64), Rational>,
}

impl GElement {
    pub fn zero(mu: usize) -> Self {
        GElement { mu, terms: BTreeMap::new() }
    }

    /// `omega_k`.
    pub fn basis(mu: usize, k: usize) -> Self {
        Self::term(mu, 0, k, Rational::ONE)
    }

    /// `coeff * tau^m * omega_k`.
    pub fn term(mu: usize, m: i64, k: usize, coeff: Rational) -> Self {
        let mut x = Self::zero(mu);
        x.add_term(m, k, coeff);
        x
    }

    pub fn from_entries(entries: Vec<LaurentPoly>) -> Self {
        let mut x = Self::zero(entries.len());
        for (k, p) in entries.into_iter().enumerate() {
            for (m, c) in p.terms {
                x.terms.insert((k, m), c);
            }
        }
        x
    }

    /// The rank `mu`.
    pub fn len(&self) -> usize {
        self.mu
    }

    pub fn is_empty(&self) -> bool {
        self.mu == 0
    }

    /// The coefficient of `omega_k`.
    pub fn entry(&self, k: usize) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.range((k, i64::MIN)..=(k, i64::MAX)).map(|(&(_, m), c)| (m, c.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * tau^m * omega_k`.
    pub fn add_term(&mut self, m: i64, k: usize, coeff: Rational) {
        assert!(k < self.mu, "basis index {k} out of range for rank {}", self.mu);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((k, m)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `coeff * tau^m * omega_k`, or zero.
    pub fn coeff(&self, m: i64, k: usize) -> Rational {
        self.terms.get(&(k, m)).cloned().unwrap_or(Rational::ZERO)
    }

    /// `(k, m, coeff)` for every stored term, ordered by `k` then `m`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &Rational)> {
        self.terms.iter().map(|(&(k, m), c)| (k, m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &GElement) -> GElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::ONE, 0);
        out
    }

    /// `self += factor * tau^shift * other`.
    pub fn add_scaled(&mut self, other: &GElement, factor: &Rational, shift: i64) {
        if factor.is_zero() {
            return;
        }
        for (k, m, c) in other.terms() {
            self.add_term(m + shift, k, c * factor);
        }
    }

    pub fn scale(&self, factor: &Rational) -> GElement {
        let mut out = GElement::zero(self.mu);
        out.add_scaled(self, factor, 0);
        out
    }

    /// Multiplication by `tau^d`.
    pub fn shift(&self, d: i64) -> GElement {
        GElement { mu: self.mu, terms: self.terms.iter().map(|(&(k, m), c)| ((k, m + d), c.clone())).collect() }
    }
}

impl fmt::Debug for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, m, c)| match m {
                0 => format!("{c}*w{k}"),
                1 => format!("{c}*tau*w{k}"),
                _ => format!("{c}*tau^{m}*w{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// V-order of an element; the zero element sits above every finite order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum VOrder {
    Finite(Rational),
    Infinite,
}

/// Exponent vector of a monomial `u^a`, defined modulo `Z (w_0, ..., w_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    /// The representative `a + m w` with `m` minimal such that every entry is
    /// nonnegative; at least one entry is then below its weight.
    pub fn canonical(&self, w: &WeightSystem) -> Vec<u64> {
        let m = self
            .0
            .iter()
            .zip(w.weights())
            .map(|(&a, &wi)| (-a).div_euclid(wi as i64) + i64::from((-a).rem_euclid(wi as i64) != 0))
            .max()
            .expect("nonempty");
        self.0.iter().zip(w.weights()).map(|(&a, &wi)| (a + m * wi as i64) as u64).collect()
    }
}

/// A weight system together with its spectrum, prepared for module computations.
#[derive(Debug, Clone)]
pub struct GaussManin {
    w: WeightSystem,
    spectrum: Spectrum,
    steps: StepSequence,
}

impl GaussManin {
    pub fn new(w: &WeightSystem) -> Self {
        GaussManin { w: w.clone(), spectrum: spectrum_direct(w), steps: step_sequence(w) }
    }

    /// Reuses a spectrum and step sequence already computed for `w`.
    pub fn from_parts(w: &WeightSystem, spectrum: Spectrum, steps: StepSequence) -> Self {
        debug_assert_eq!(spectrum.len(), w.mu() as usize);
        GaussManin { w: w.clone(), spectrum, steps }
    }

    pub fn into_parts(self) -> (Spectrum, StepSequence) {
        (self.spectrum, self.steps)
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.w
    }

    pub fn mu(&self) -> usize {
        self.w.mu() as usize
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn steps(&self) -> &StepSequence {
        &self.steps
    }

    fn check_len(&self, x: &GElement) -> Result<(), GaussManinError> {
        if x.len() != self.mu() {
            return Err(GaussManinError::DimensionMismatch { expected: self.mu(), got: x.len() });
        }
        Ok(())
    }

    /// The action of `tau d/dtau`.
    pub fn tau_dtau(&self, x: &GElement) -> Result<GElement, GaussManinError> {
        self.check_len(x)?;
        let mu = self.mu();
        let mu_r = Rational::from(mu);
        let sigma = self.spectrum.sigma();
        let mut out = GElement::zero(mu);
        for (k, m, c) in x.terms() {
            out.add_term(m, k, c * &(Rational::from(m) - &sigma[k]));
            out.add_term(m + 1, (k + 1) % mu, -(c * &mu_r));
        }
        Ok(out)
    }

    /// `-(1/mu) tau^d (tau d/dtau + shift) x`, computed termwise in one pass.
    fn lowered(&self, x: &GElement, shift: &Rational, d: i64) -> GElement {
        let mu = self.mu();
        let minus_inv_mu = Rational::from_reduced(-1, mu as i64);
        let sigma = self.spectrum.sigma();
        let mut out = GElement::zero(mu);
        for (k, m, c) in x.terms() {
            let diag = &(&Rational::from(m) - &sigma[k]) + shift;
            out.add_term(m + d, k, &(c * &diag) * &minus_inv_mu);
            // -(1/mu) * (-mu tau omega_{k+1}) = tau omega_{k+1}
            out.add_term(m + d + 1, (k + 1) % mu, c.clone());
        }
        out
    }

    /// Applies `prod_k [-(1/mu)(tau d/dtau - s(k))]` to `omega_0`, the factor
    /// `k = 0` first. Bernstein's relation says the result is `tau^mu omega_0`.
    pub fn bernstein_check(&self) -> GElement {
        let mu = self.mu();
        let mut x = GElement::basis(mu, 0);
        for s in self.spectrum.s() {
            x = self.lowered(&x, &-s, 0);
        }
        x
    }

    /// `(A_0, A_inf)` extracted from `theta^2 d/dtheta omega = omega A_0 + theta omega A_inf`.
    pub fn birkhoff_matrices(&self) -> Result<(Matrix, Matrix), GaussManinError> {
        let mu = self.mu();
        let mut a0 = Matrix::zeros(mu, mu);
        let mut ainf = Matrix::zeros(mu, mu);
        for k in 0..mu {
            // theta^2 d/dtheta = -theta (tau d/dtau)
            let y = self.tau_dtau(&GElement::basis(mu, k))?.shift(-1).scale(&-Rational::ONE);
            for (row, m, c) in y.terms() {
                match m {
                    0 => a0.set(row, k, c.clone()),
                    -1 => ainf.set(row, k, c.clone()),
                    exponent => return Err(GaussManinError::DecompositionFailure { k, exponent }),
                }
            }
        }
        Ok((a0, ainf))
    }

    /// `L_j(a) = |a| - mu a_j / w_j`.
    pub fn l_form(&self, a: &[u64], j: usize) -> Rational {
        let total: u64 = a.iter().sum();
        Rational::from(total) - Rational::new((self.w.mu() * a[j]) as i64, self.w.weight(j) as i64)
    }

    fn raise(&self, rep: &GElement, current: &[u64], j: usize) -> GElement {
        self.lowered(rep, &self.l_form(current, j), -1)
    }

    /// The class `[u^a omega_0]` in the basis, for any integer exponent vector.
    pub fn reduce_monomial(&self, a: &[i64]) -> Result<GElement, GaussManinError> {
        if a.len() != self.w.weights().len() {
            return Err(GaussManinError::InvalidPath(format!(
                "exponent vector has {} entries, expected {}",
                a.len(),
                self.w.weights().len()
            )));
        }
        let target = ExponentVector(a.to_vec()).canonical(&self.w);
        let path = self.default_path(&target);
        self.reduce_along(&target, &path)
    }

    /// Reduces `[u^target omega_0]` along `path`, a sequence of directions whose
    /// counts are exactly the entries of `target`.
    pub fn reduce_along(&self, target: &[u64], path: &[usize]) -> Result<GElement, GaussManinError> {
        let len = self.w.weights().len();
        if target.len() != len {
            return Err(GaussManinError::InvalidPath(format!("target has {} entries, expected {len}", target.len())));
        }
        let mut current = vec![0u64; len];
        let mut rep = GElement::basis(self.mu(), 0);
        for &j in path {
            if j >= len || current[j] >= target[j] {
                return Err(GaussManinError::InvalidPath(format!("step {j} overshoots the target")));
            }
            rep = self.raise(&rep, &current, j);
            current[j] += 1;
        }
        if current != target {
            return Err(GaussManinError::InvalidPath("path stops short of the target".into()));
        }
        Ok(rep)
    }

    /// Greedy path: always step in the direction with the smallest `c_j / w_j`
    /// among those not yet at the target, lowest index on ties. For
    /// `target = a(k)` this is the step recursion itself.
    pub fn default_path(&self, target: &[u64]) -> Vec<usize> {
        let w = self.w.weights();
        let mut current = vec![0u64; target.len()];
        let mut path = Vec::with_capacity(target.iter().sum::<u64>() as usize);
        loop {
            let mut best: Option<usize> = None;
            for j in 0..target.len() {
                if current[j] >= target[j] {
                    continue;
                }
                best = match best {
                    Some(b) if (current[b] as u128) * (w[j] as u128) <= (current[j] as u128) * (w[b] as u128) => {
                        Some(b)
                    }
                    _ => Some(j),
                };
            }
            let Some(j) = best else { break };
            current[j] += 1;
            path.push(j);
        }
        path
    }

    /// `f [u^a omega_0] = sum_i w_i [u^{a + 1_i} omega_0]`.
    pub fn f_action_monomial(&self, a: &[i64]) -> Result<GElement, GaussManinError> {
        let mut out = GElement::zero(self.mu());
        for (i, &wi) in self.w.weights().iter().enumerate() {
            let mut b = a.to_vec();
            b[i] += 1;
            out = out.add(&self.reduce_monomial(&b)?.scale(&Rational::from(wi)));
        }
        Ok(out)
    }

    /// `f omega_k`, raising `omega_k = [u^{a(k)} omega_0]` once in each
    /// direction. Agrees with [`Self::f_action_monomial`] on `a(k)` because
    /// reduction is path independent.
    pub fn f_action_basis(&self, k: usize) -> GElement {
        let mu = self.mu();
        let a = self.steps.a(k % mu);
        let start = GElement::basis(mu, k % mu);
        let mut out = GElement::zero(mu);
        for (j, &wj) in self.w.weights().iter().enumerate() {
            out.add_scaled(&self.raise(&start, a, j), &Rational::from(wj), 0);
        }
        out
    }

    /// Multiplication by `f` on a general element (`f` commutes with `tau`).
    pub fn f_action(&self, x: &GElement) -> Result<GElement, GaussManinError> {
        self.check_len(x)?;
        let mu = self.mu();
        let mut images: Vec<Option<GElement>> = vec![None; mu];
        let mut out = GElement::zero(mu);
        for (k, m, c) in x.terms() {
            if images[k].is_none() {
                images[k] = Some(self.f_action_basis(k));
            }
            let image = images[k].as_ref().expect("just filled");
            out = out.add(&image.shift(m).scale(c));
        }
        Ok(out)
    }

    /// Matrix of multiplication by `f` on `G_0 / theta G_0` in the basis `omega`.
    pub fn f_matrix_mod_theta(&self) -> Result<Matrix, GaussManinError> {
        let mu = self.mu();
        let mut m = Matrix::zeros(mu, mu);
        for k in 0..mu {
            let image = self.f_action(&GElement::basis(mu, k))?;
            for (row, e, c) in image.terms() {
                if e == 0 {
                    m.set(row, k, c.clone());
                }
            }
        }
        Ok(m)
    }

    /// Largest `sigma(k) - m` over the stored terms `tau^m omega_k`.
    ///
    /// `omega_k` has order `sigma(k)` and multiplication by `tau` lowers the
    /// order by one (`omega'_k = tau^{floor sigma(k)} omega_k` has order in `[0, 1)`).
    /// Termwise maximum is exact because the basis is adapted to the filtration.
    pub fn v_order(&self, x: &GElement) -> Result<VOrder, GaussManinError> {
        self.check_len(x)?;
        let sigma = self.spectrum.sigma();
        Ok(x.terms().map(|(k, m, _)| &sigma[k] - &Rational::from(m)).max().map_or(VOrder::Infinite, VOrder::Finite))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gm(raw: &[i64]) -> GaussManin {
        GaussManin::new(&WeightSystem::new(raw).unwrap())
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn tau_dtau_examples() {
        let g = gm(&[1, 1, 1]);
        let x = g.tau_dtau(&GElement::basis(3, 0)).unwrap();
        assert_eq!(x, GElement::term(3, 1, 1, q(-3)));
        assert!(g.tau_dtau(&GElement::zero(3)).unwrap().is_zero());
        let y = g.tau_dtau(&GElement::term(3, 1, 1, q(1))).unwrap();
        assert_eq!(y, GElement::term(3, 2, 2, q(-3)));
        assert_eq!(g.tau_dtau(&GElement::zero(4)), Err(GaussManinError::DimensionMismatch { expected: 3, got: 4 }));
    }

    #[test]
    fn bernstein_examples() {
        for raw in [&[1, 1, 1][..], &[1, 1, 2], &[1, 2, 3]] {
            let g = gm(raw);
            let mu = g.mu();
            assert_eq!(g.bernstein_check(), GElement::term(mu, mu as i64, 0, q(1)), "{raw:?}");
        }
    }

    #[test]
    fn birkhoff_examples() {
        let g = gm(&[1, 1, 2]);
        let (a0, ainf) = g.birkhoff_matrices().unwrap();
        assert_eq!(ainf, Matrix::diagonal(&[q(0), q(1), q(2), q(1)]));
        let cyclic = Matrix::from_fn(4, 4, |r, c| if r == (c + 1) % 4 { q(4) } else { q(0) });
        assert_eq!(a0, cyclic);

        let g = gm(&[1, 1, 1, 1]);
        assert_eq!(g.birkhoff_matrices().unwrap().1, Matrix::diagonal(&[q(0), q(1), q(2), q(3)]));

        let (a0, _) = gm(&[1, 2, 3]).birkhoff_matrices().unwrap();
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(a0.get(r, c), &if r == (c + 1) % 6 { q(6) } else { q(0) });
            }
        }
    }

    #[test]
    fn monomials_of_the_step_sequence_are_the_basis() {
        let g = gm(&[1, 2, 3]);
        for k in 0..6 {
            let a: Vec<i64> = g.steps().a(k).iter().map(|&v| v as i64).collect();
            assert_eq!(g.reduce_monomial(&a).unwrap(), GElement::basis(6, k), "k = {k}");
        }
        assert_eq!(g.reduce_monomial(&[0, 0, 0]).unwrap(), GElement::basis(6, 0));
        assert_eq!(g.reduce_monomial(&[1, 2, 3]).unwrap(), GElement::basis(6, 0));
        assert_eq!(g.reduce_monomial(&[-1, -2, -3]).unwrap(), GElement::basis(6, 0));
    }

    #[test]
    fn hand_reduction_of_u0_squared() {
        // w = (1,1,1): u_0^2 omega_0 = omega_2 + theta omega_1 via the path (0, 0).
        let g = gm(&[1, 1, 1]);
        let x = g.reduce_along(&[2, 0, 0], &[0, 0]).unwrap();
        let mut expected = GElement::basis(3, 2);
        expected.add_term(-1, 1, q(1));
        assert_eq!(x, expected);
        // Same class through the canonical representative (2,0,0) - 0*w.
        assert_eq!(g.reduce_monomial(&[2, 0, 0]).unwrap(), expected);
    }

    #[test]
    fn canonical_representative() {
        let w = WeightSystem::new(&[1, 1, 28]).unwrap();
        assert_eq!(ExponentVector(vec![-10, 10, 0]).canonical(&w), vec![0, 20, 280]);
        assert_eq!(ExponentVector(vec![3, 5, 60]).canonical(&w), vec![1, 3, 4]);
        assert_eq!(ExponentVector(vec![1, 1, 28]).canonical(&w), vec![0, 0, 0]);
    }

    #[test]
    fn invalid_paths() {
        let g = gm(&[1, 1, 2]);
        assert!(g.reduce_along(&[1, 0, 0], &[1]).is_err());
        assert!(g.reduce_along(&[1, 1, 0], &[0]).is_err());
        assert!(g.reduce_along(&[1, 1], &[]).is_err());
    }

    #[test]
    fn f_action_examples() {
        let g = gm(&[1, 1, 2]);
        // f omega_0 = mu omega_1
        assert_eq!(g.f_action(&GElement::basis(4, 0)).unwrap(), GElement::term(4, 0, 1, q(4)));
        // f omega_1 = 4 omega_2 + sigma(1) theta omega_1
        let mut expected = GElement::term(4, 0, 2, q(4));
        expected.add_term(-1, 1, q(1));
        assert_eq!(g.f_action(&GElement::basis(4, 1)).unwrap(), expected);
        // f omega_{mu-1} = mu omega_0 + sigma(mu-1) theta omega_{mu-1}
        let mut expected = GElement::term(4, 0, 0, q(4));
        expected.add_term(-1, 3, q(1));
        assert_eq!(g.f_action(&GElement::basis(4, 3)).unwrap(), expected);
        let (a0, _) = g.birkhoff_matrices().unwrap();
        assert_eq!(g.f_matrix_mod_theta().unwrap(), a0);
    }

    #[test]
    fn basis_f_action_matches_full_reduction() {
        for raw in [&[1, 1, 2][..], &[1, 2, 3, 3], &[2, 3, 7], &[1, 1, 4, 6], &[3, 5, 5, 8]] {
            let g = gm(raw);
            for k in 0..g.mu() {
                let a: Vec<i64> = g.steps().a(k).iter().map(|&v| v as i64).collect();
                assert_eq!(g.f_action_basis(k), g.f_action_monomial(&a).unwrap(), "{raw:?} k={k}");
            }
        }
    }

    #[test]
    fn v_order_examples() {
        let g = gm(&[1, 1, 1]);
        for k in 0..3 {
            assert_eq!(g.v_order(&GElement::basis(3, k)).unwrap(), VOrder::Finite(q(k as i64)));
        }
        assert_eq!(g.v_order(&GElement::term(3, 1, 0, q(1))).unwrap(), VOrder::Finite(q(-1)));
        assert_eq!(g.v_order(&GElement::term(3, -1, 0, q(1))).unwrap(), VOrder::Finite(q(1)));
        let x = GElement::basis(3, 2).add(&GElement::term(3, 1, 0, q(1)));
        assert_eq!(g.v_order(&x).unwrap(), VOrder::Finite(q(2)));
        assert_eq!(g.v_order(&GElement::zero(3)).unwrap(), VOrder::Infinite);
        assert!(VOrder::Infinite > VOrder::Finite(q(1000)));
    }

    #[test]
    fn connection_preserves_v_order() {
        for raw in [&[1, 2, 3, 3][..], &[1, 1, 1, 1], &[2, 3, 7]] {
            let g = gm(raw);
            let mu = g.mu();
            let sigma = g.spectrum().sigma();
            for k in 0..mu {
                let next = GElement::term(mu, 1, (k + 1) % mu, q(1));
                let next_sigma = if k + 1 == mu { q(0) } else { sigma[k + 1].clone() };
                assert_eq!(g.v_order(&next).unwrap(), VOrder::Finite(&next_sigma - &q(1)));
                let d = g.tau_dtau(&GElement::basis(mu, k)).unwrap();
                assert!(g.v_order(&d).unwrap() <= VOrder::Finite(sigma[k].clone()), "{raw:?} k = {k}");
            }
        }
    }
}
