//! Jordan structure of the monodromy and the filtrations built from it.
//!
//! The nilpotent part of the monodromy acts on the classes `[omega'_k]`,
//! grouped by the eigenvalue class `alpha_k = ceil(s(k)) - s(k)`. Its Jordan
//! blocks are the maximal runs of equal `s` values in canonical order.
//! Everything here works at the level of index sets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::frobenius::metric_partner;
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::spectrum::{spectrum_direct, Spectrum};
use crate::weights::WeightSystem;

pub type IndexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("{alpha} is not an eigenvalue class of this system")]
    UnknownEigenvalueClass { alpha: Rational },
    #[error("index {k} is out of range 0..{mu}")]
    IndexOutOfRange { k: usize, mu: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub size: usize,
    /// The common `s` value of the run.
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanData {
    n: usize,
    weight: Vec<i64>,
    offset: Vec<usize>,
    block_of: Vec<usize>,
    blocks: Vec<Block>,
}

impl JordanData {
    /// Blocks grouped by eigenvalue class `ceil(s) - s`.
    pub fn classes(&self) -> BTreeMap<Rational, Vec<Block>> {
        let mut classes: BTreeMap<Rational, Vec<Block>> = BTreeMap::new();
        for b in &self.blocks {
            classes.entry(b.value.ceil() - &b.value).or_default().push(b.clone());
        }
        classes
    }

    /// All blocks in index order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Monodromy weight `nu_k`.
    pub fn weight(&self, k: usize) -> i64 {
        self.weight[k]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weight
    }

    /// Position of `k` inside its block.
    pub fn offset(&self, k: usize) -> usize {
        self.offset[k]
    }

    pub fn block_containing(&self, k: usize) -> &Block {
        &self.blocks[self.block_of[k]]
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.size).max().unwrap_or(0)
    }

    /// `size -> number of blocks of that size`.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for b in &self.blocks {
            *h.entry(b.size).or_insert(0) += 1;
        }
        h
    }

    /// Violations of the block size bounds and weight pattern.
    pub fn check(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        for b in &self.blocks {
            let bound = if b.value.is_zero() {
                n + 1
            } else if b.value.is_integer() {
                n.saturating_sub(1)
            } else {
                n
            };
            let ok = if b.value.is_zero() { b.size == bound } else { b.size <= bound };
            if !ok {
                out.push(format!("block at {} with s = {} has size {}", b.start, b.value, b.size));
            }
            for j in 0..b.size {
                if self.weight[b.start + j] != b.size as i64 - 1 - 2 * j as i64 {
                    out.push(format!("weight of index {} is {}", b.start + j, self.weight[b.start + j]));
                }
            }
        }
        let total: usize = self.blocks.iter().map(|b| b.size).sum();
        if total != self.weight.len() {
            out.push(format!("block sizes sum to {total}, not {}", self.weight.len()));
        }
        out
    }
}

fn jordan_from_spectrum(spec: &Spectrum) -> JordanData {
    let s = spec.s();
    let mu = s.len();
    let mut blocks = Vec::new();
    let mut weight = vec![0; mu];
    let mut offset = vec![0; mu];
    let mut block_of = vec![0; mu];
    let mut k = 0;
    while k < mu {
        let mut end = k + 1;
        while end < mu && s[end] == s[k] {
            end += 1;
        }
        let size = end - k;
        for j in 0..size {
            weight[k + j] = size as i64 - 1 - 2 * j as i64;
            offset[k + j] = j;
            block_of[k + j] = blocks.len();
        }
        blocks.push(Block { start: k, size, value: s[k].clone() });
        k = end;
    }
    JordanData { n: spec.n(), weight, offset, block_of, blocks }
}

pub fn jordan_blocks(w: &WeightSystem) -> JordanData {
    let data = jordan_from_spectrum(&spectrum_direct(w));
    debug_assert!(data.check().is_empty(), "{:?}", data.check());
    data
}

/// Indices of class `alpha` in increasing order.
pub fn class_indices(spec: &Spectrum, alpha: &Rational) -> Result<Vec<usize>, FiltrationError> {
    let idx: Vec<usize> = (0..spec.len()).filter(|&k| &spec.alpha()[k] == alpha).collect();
    if idx.is_empty() {
        return Err(FiltrationError::UnknownEigenvalueClass { alpha: alpha.clone() });
    }
    Ok(idx)
}

/// The nilpotent operator on the class `alpha`, in the basis of that class's
/// indices (returned alongside). Basis vector `k` goes to `k + 1` when
/// `s(k + 1) = s(k)` and to zero otherwise.
pub fn nilpotent_matrix(w: &WeightSystem, alpha: &Rational) -> Result<(Vec<usize>, Matrix), FiltrationError> {
    let spec = spectrum_direct(w);
    let idx = class_indices(&spec, alpha)?;
    let s = spec.s();
    let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let mut m = Matrix::zeros(idx.len(), idx.len());
    for (p, &k) in idx.iter().enumerate() {
        if k + 1 < s.len() && s[k + 1] == s[k] {
            m.set(pos[&(k + 1)], p, Rational::ONE);
        }
    }
    Ok((idx, m))
}

/// Block starts, read off the spectrum directly: `0` and every `k >= n + 1`
/// with `s(k - 1) < s(k)`.
pub fn primitive_indices(w: &WeightSystem) -> IndexSet {
    let spec = spectrum_direct(w);
    primitive_from_spectrum(&spec)
}

fn primitive_from_spectrum(spec: &Spectrum) -> IndexSet {
    let s = spec.s();
    std::iter::once(0).chain((spec.n() + 1..s.len()).filter(|&k| s[k - 1] < s[k])).collect()
}

/// `k -> k` for `k <= n`, otherwise `mu + n - k - nu_k`.
pub fn conjugate_index(w: &WeightSystem, k: usize) -> Result<usize, FiltrationError> {
    let mu = w.mu() as usize;
    if k >= mu {
        return Err(FiltrationError::IndexOutOfRange { k, mu });
    }
    Ok(conjugate_with(&jordan_blocks(w), w.n(), mu, k))
}

fn conjugate_with(jordan: &JordanData, n: usize, mu: usize, k: usize) -> usize {
    if k <= n {
        k
    } else {
        (mu as i64 + n as i64 - k as i64 - jordan.weight(k)) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationReport {
    pub n: usize,
    pub mu: usize,
    /// `hp[p] = {k : floor(sigma(k)) >= p}` for `p = 0..=n+1`.
    pub hp: Vec<IndexSet>,
    /// `gp[p] = {k : floor(sigma(k)) <= p}` for `p = 0..=n`.
    pub gp: Vec<IndexSet>,
    /// Monodromy filtration `M(m) = {k : nu_k <= m}` for `m = -n-1..=n`.
    pub m: BTreeMap<i64, IndexSet>,
    /// Weight filtration for `m = 0..=2n+1`.
    pub w: BTreeMap<i64, IndexSet>,
    pub primitive: IndexSet,
    pub conj: Vec<usize>,
}

impl FiltrationReport {
    pub fn h(&self, p: i64) -> IndexSet {
        if p <= 0 {
            (0..self.mu).collect()
        } else {
            self.hp.get(p as usize).cloned().unwrap_or_default()
        }
    }

    pub fn monodromy(&self, m: i64) -> IndexSet {
        if m > self.n as i64 {
            (0..self.mu).collect()
        } else {
            self.m.get(&m).cloned().unwrap_or_default()
        }
    }

    /// Violations of nesting and opposedness.
    pub fn check(&self, spec: &Spectrum) -> Vec<String> {
        let mut out = Vec::new();
        let all: IndexSet = (0..self.mu).collect();
        if self.hp[0] != all {
            out.push("H^0 is not everything".into());
        }
        if !self.hp[self.n + 1].is_empty() {
            out.push("H^{n+1} is not empty".into());
        }
        for p in 0..=self.n {
            if !self.hp[p + 1].is_subset(&self.hp[p]) {
                out.push(format!("H^{} not inside H^{p}", p + 1));
            }
        }
        for p in 0..self.n {
            if !self.gp[p].is_subset(&self.gp[p + 1]) {
                out.push(format!("G_{p} not inside G_{}", p + 1));
            }
        }
        let mut prev: Option<&IndexSet> = None;
        for (m, set) in &self.m {
            if let Some(p) = prev {
                if !p.is_subset(set) {
                    out.push(format!("M({}) not inside M({m})", m - 1));
                }
            }
            prev = Some(set);
        }
        for k in 0..self.mu {
            let f = spec.sigma()[k].floor().to_i64().expect("small") as usize;
            if !self.hp[f].contains(&k) || self.hp[f + 1].contains(&k) {
                out.push(format!("index {k} sits at the wrong depth of H"));
            }
            if !self.gp[f].contains(&k) || (f > 0 && self.gp[f - 1].contains(&k)) {
                out.push(format!("index {k} sits at the wrong depth of G"));
            }
        }
        out
    }
}

fn floor_sigma(spec: &Spectrum) -> Vec<usize> {
    spec.sigma().iter().map(|x| x.floor().to_i64().expect("small") as usize).collect()
}

pub fn saito_filtration(w: &WeightSystem) -> FiltrationReport {
    let spec = spectrum_direct(w);
    let jordan = jordan_from_spectrum(&spec);
    let report = report_from(&spec, &jordan);
    debug_assert!(report.check(&spec).is_empty(), "{:?}", report.check(&spec));
    report
}

fn report_from(spec: &Spectrum, jordan: &JordanData) -> FiltrationReport {
    let n = spec.n();
    let mu = spec.len();
    let fl = floor_sigma(spec);
    let hp = (0..=n + 1).map(|p| (0..mu).filter(|&k| fl[k] >= p).collect()).collect();
    let gp = (0..=n).map(|p| (0..mu).filter(|&k| fl[k] <= p).collect()).collect();
    let ni = n as i64;
    let m = (-ni - 1..=ni).map(|m| (m, (0..mu).filter(|&k| jordan.weight(k) <= m).collect())).collect();
    let w = (0..=2 * ni + 1)
        .map(|m| {
            let set = (0..mu)
                .filter(|&k| {
                    let shift = if spec.alpha()[k].is_zero() { ni } else { ni + 1 };
                    jordan.weight(k) <= m - shift
                })
                .collect();
            (m, set)
        })
        .collect();
    FiltrationReport {
        n,
        mu,
        hp,
        gp,
        m,
        w,
        primitive: primitive_from_spectrum(spec),
        conj: (0..mu).map(|k| conjugate_with(jordan, n, mu, k)).collect(),
    }
}

/// Precomputed data for running the index identities repeatedly on one system.
pub struct FiltrationContext {
    spec: Spectrum,
    jordan: JordanData,
    floor: Vec<i64>,
    conj: Vec<usize>,
    /// Eigenvalue class of each index, as a position in `class_values`.
    class_of: Vec<usize>,
    class_values: Vec<Rational>,
    class_members: Vec<Vec<usize>>,
    /// Class of `1 - alpha` (of `0` for `alpha = 0`), if present.
    paired_class: Vec<Option<usize>>,
    /// `floor(sigma(k)) + nu_k + [sigma(k) not integral]`.
    saito_key: Vec<i64>,
    /// `s(k + 1) = s(k)`.
    continues: Vec<bool>,
    report: std::cell::OnceCell<FiltrationReport>,
}

impl FiltrationContext {
    pub fn new(w: &WeightSystem) -> Self {
        Self::from_spectrum(spectrum_direct(w))
    }

    pub fn from_spectrum(spec: Spectrum) -> Self {
        let jordan = jordan_from_spectrum(&spec);
        let (n, mu) = (spec.n(), spec.len());
        let floor: Vec<i64> = floor_sigma(&spec).into_iter().map(|f| f as i64).collect();
        let conj = (0..mu).map(|k| conjugate_with(&jordan, n, mu, k)).collect();
        let class_values = spec.classes();
        let class_of: Vec<usize> =
            spec.alpha().iter().map(|a| class_values.binary_search(a).expect("listed class")).collect();
        let mut class_members = vec![Vec::new(); class_values.len()];
        for (k, &c) in class_of.iter().enumerate() {
            class_members[c].push(k);
        }
        let paired_class = class_values
            .iter()
            .enumerate()
            .map(|(c, a)| if a.is_zero() { Some(c) } else { class_values.binary_search(&(Rational::ONE - a)).ok() })
            .collect();
        let saito_key =
            (0..mu).map(|k| floor[k] + jordan.weight(k) + i64::from(!spec.sigma()[k].is_integer())).collect();
        let continues = (0..mu).map(|k| k + 1 < mu && jordan.offset(k + 1) > 0).collect();
        FiltrationContext {
            spec,
            jordan,
            floor,
            conj,
            class_of,
            class_values,
            class_members,
            paired_class,
            saito_key,
            continues,
            report: std::cell::OnceCell::new(),
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spec
    }

    pub fn jordan(&self) -> &JordanData {
        &self.jordan
    }

    pub fn report(&self) -> &FiltrationReport {
        self.report.get_or_init(|| report_from(&self.spec, &self.jordan))
    }

    pub fn conjugates(&self) -> &[usize] {
        &self.conj
    }

    /// Conjugating `{k : floor(sigma(k)) + nu_k <= n - p - [sigma(k) not integral]}`
    /// recovers `H^p`.
    pub fn saito_identity(&self, p: i64) -> bool {
        let n = self.spec.n() as i64;
        let mu = self.spec.len();
        let mut image = vec![false; mu];
        for k in 0..mu {
            if self.saito_key[k] <= n - p {
                image[self.conj[k]] = true;
            }
        }
        (0..mu).all(|k| image[k] == (self.floor[k] >= p))
    }

    /// The `g`-orthogonal of `H^p_alpha`, as an index set inside the paired
    /// class, against `H^{n-p}_{1-alpha}` (or `H^{n+1-p}_0` when `alpha = 0`).
    pub fn orthogonality(&self, alpha: &Rational, p: i64) -> Result<bool, FiltrationError> {
        let class = self
            .class_values
            .binary_search(alpha)
            .map_err(|_| FiltrationError::UnknownEigenvalueClass { alpha: alpha.clone() })?;
        Ok(self.orthogonality_for_class(class, p))
    }

    fn orthogonality_for_class(&self, class: usize, p: i64) -> bool {
        let (n, mu) = (self.spec.n(), self.spec.len());
        let alpha = &self.class_values[class];
        let depth = if alpha.is_zero() { n as i64 + 1 - p } else { n as i64 - p };
        let Some(paired) = self.paired_class[class] else { return false };
        self.class_members[paired].iter().all(|&j| {
            let partner = metric_partner(n, mu, j);
            let in_h = self.class_of[partner] == class && self.floor[partner] >= p;
            !in_h == (self.floor[j] >= depth)
        })
    }

    /// Orthogonality for every class and every `p` in `0..=n+1`; returns the failures.
    pub fn orthogonality_failures(&self) -> Vec<(Rational, i64)> {
        let n = self.spec.n() as i64;
        let mut out = Vec::new();
        for class in 0..self.class_values.len() {
            for p in 0..=n + 1 {
                if !self.orthogonality_for_class(class, p) {
                    out.push((self.class_values[class].clone(), p));
                }
            }
        }
        out
    }

    /// `N` maps the span of `H^p` into the span of `H^{p+1}`.
    pub fn nilpotent_lowers_h(&self, p: i64) -> bool {
        (0..self.spec.len()).all(|k| self.floor[k] < p || !self.continues[k] || self.floor[k + 1] > p)
    }

    /// `k -> conj(k)` is an involution with `s(conj k) = mu - s(k)` off `0..=n`.
    pub fn conjugation_violations(&self) -> Vec<usize> {
        let (n, mu) = (self.spec.n(), self.spec.len());
        let s = self.spec.s();
        let mu_r = Rational::from(mu);
        (0..mu)
            .filter(|&k| {
                let c = self.conj[k];
                c >= mu || self.conj[c] != k || (k > n && s[c] != &mu_r - &s[k])
            })
            .collect()
    }
}

pub fn saito_identity_check(w: &WeightSystem, p: i64) -> bool {
    FiltrationContext::new(w).saito_identity(p)
}

pub fn orthogonality_check(w: &WeightSystem, alpha: &Rational, p: i64) -> Result<bool, FiltrationError> {
    FiltrationContext::new(w).orthogonality(alpha, p)
}
