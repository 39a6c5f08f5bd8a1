//! Matroids given by their bases, standard constructors, minors and the
//! f/h-vectors of independence complexes.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest ground set supported; sets are stored as `u64` masks.
pub const MAX_GROUND: usize = 64;

/// Constructors refuse to materialize more bases than this.
pub const MAX_BASES: usize = 1 << 20;

/// A subset of the ground set `{0, .., n-1}` packed into a machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_mask(mask: u64) -> Self {
        ElementSet(mask)
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!(e < MAX_GROUND);
        ElementSet(1 << e)
    }

    /// Panics if an element is `>= 64`; use [`ElementSet::try_from_elements`]
    /// for untrusted input.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(ElementSet::EMPTY, |acc, e| acc.with(e))
    }

    pub fn try_from_elements(elements: &[usize], n: usize) -> Result<Self, MatroidError> {
        let mut set = ElementSet::EMPTY;
        for &e in elements {
            if e >= n {
                return Err(MatroidError::ElementOutOfRange { element: e, n });
            }
            set = set.with(e);
        }
        Ok(set)
    }

    /// All of `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_GROUND && self.0 >> e & 1 == 1
    }

    #[must_use]
    pub fn with(self, e: usize) -> Self {
        assert!(e < MAX_GROUND, "element {e} exceeds the 64-element ground set cap");
        ElementSet(self.0 | 1 << e)
    }

    #[must_use]
    pub fn without(self, e: usize) -> Self {
        ElementSet(self.0 & !(1u64 << e))
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ElementSet(cur))
        })
    }

    /// Compares by sorted element lists, so `{0,1,5} < {0,2,3}`.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `[0, 3, 5]`.
impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(d)?;
        if let Some(&e) = elements.iter().find(|&&e| e >= MAX_GROUND) {
            return Err(serde::de::Error::custom(format!(
                "element {e} exceeds the 64-element ground set cap"
            )));
        }
        Ok(ElementSet::from_elements(elements))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("the family of bases is empty")]
    EmptyBases,
    #[error("bases have different sizes ({first} and {other})")]
    RankMismatch { first: usize, other: usize },
    #[error("basis exchange fails: removing {element} from {from} has no replacement in {to}")]
    NotAMatroid {
        from: ElementSet,
        to: ElementSet,
        element: usize,
    },
    #[error("element {element} is outside the ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("contracted set {0} is dependent")]
    DependentContraction(ElementSet),
    #[error("contracted and restricted sets overlap in {0}")]
    OverlappingSets(ElementSet),
    #[error("{0} is not a basis")]
    NotABasis(ElementSet),
}

/// A matroid on `{0, .., n-1}` stored as its family of bases.
///
/// Bases are kept in lexicographic order of their sorted element lists. That
/// order is the vertex order of the matroid polytope used everywhere else in
/// the crate, so a "basis index" and a "vertex index" are the same thing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<ElementSet>,
    lookup: HashSet<ElementSet>,
}

/// The JSON interchange form `{"n": 4, "bases": [[0, 1], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub bases: Vec<Vec<usize>>,
}

impl Matroid {
    /// Validates the basis family (equal sizes and the exchange axiom) and
    /// builds the matroid. Duplicate bases are merged.
    pub fn from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::BadParameters(format!(
                "ground set of size {n} exceeds {MAX_GROUND}"
            )));
        }
        let sets = bases
            .iter()
            .map(|b| ElementSet::try_from_elements(b, n))
            .collect::<Result<Vec<_>, _>>()?;
        for (b, set) in bases.iter().zip(&sets) {
            if set.len() != b.len() {
                return Err(MatroidError::BadParameters(format!(
                    "basis {b:?} repeats an element"
                )));
            }
        }
        Self::from_sets(n, sets)
    }

    pub fn from_sets(n: usize, sets: Vec<ElementSet>) -> Result<Self, MatroidError> {
        let first = *sets.first().ok_or(MatroidError::EmptyBases)?;
        if let Some(other) = sets.iter().find(|b| b.len() != first.len()) {
            return Err(MatroidError::RankMismatch {
                first: first.len(),
                other: other.len(),
            });
        }
        if let Some(bad) = sets.iter().find(|b| !b.is_subset(ElementSet::full(n))) {
            let element = bad.difference(ElementSet::full(n)).iter().next().unwrap_or(0);
            return Err(MatroidError::ElementOutOfRange { element, n });
        }
        let unique: BTreeSet<ElementSet> = sets.into_iter().collect();
        let mut bases: Vec<ElementSet> = unique.into_iter().collect();
        bases.sort_by(|a, b| a.lex_cmp(*b));
        let lookup: HashSet<ElementSet> = bases.iter().copied().collect();
        let matroid = Matroid {
            n,
            rank: first.len(),
            bases,
            lookup,
        };
        matroid.check_exchange()?;
        Ok(matroid)
    }

    fn check_exchange(&self) -> Result<(), MatroidError> {
        for &b in &self.bases {
            for &b2 in &self.bases {
                for x in b.difference(b2).iter() {
                    let reduced = b.without(x);
                    let ok = b2
                        .difference(b)
                        .iter()
                        .any(|y| self.lookup.contains(&reduced.with(y)));
                    if !ok {
                        return Err(MatroidError::NotAMatroid {
                            from: b,
                            to: b2,
                            element: x,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The uniform matroid: every `k`-subset of `{0, .., n-1}` is a basis.
    pub fn uniform(n: usize, k: usize) -> Result<Self, MatroidError> {
        if k == 0 || k > n || n > MAX_GROUND {
            return Err(MatroidError::BadParameters(format!(
                "uniform matroid needs 0 < k <= n <= {MAX_GROUND}, got n={n}, k={k}"
            )));
        }
        if binomial(n, k) > MAX_BASES as u128 {
            return Err(MatroidError::BadParameters(format!(
                "U({n},{k}) has more than {MAX_BASES} bases"
            )));
        }
        Self::from_sets(n, k_subsets(n, k))
    }

    /// The cycle matroid of a multigraph. Edge `i` becomes ground element `i`;
    /// bases are the spanning forests with the maximum number of edges.
    pub fn graphic(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, MatroidError> {
        let m = edges.len();
        if m > MAX_GROUND {
            return Err(MatroidError::BadParameters(format!(
                "{m} edges exceed the {MAX_GROUND}-element cap"
            )));
        }
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
        {
            return Err(MatroidError::BadParameters(format!(
                "edge ({u}, {v}) uses a vertex outside 0..{vertex_count}"
            )));
        }
        let mut forest = UnionFind::new(vertex_count);
        let rank = edges.iter().filter(|&&(u, v)| forest.union(u, v)).count();
        if binomial(m, rank) > MAX_BASES as u128 {
            return Err(MatroidError::BadParameters(format!(
                "graph with {m} edges and rank {rank} has too many candidate bases"
            )));
        }
        let bases: Vec<ElementSet> = k_subsets(m, rank)
            .into_iter()
            .filter(|s| {
                let mut uf = UnionFind::new(vertex_count);
                s.iter().all(|e| uf.union(edges[e].0, edges[e].1))
            })
            .collect();
        Self::from_sets(m, bases)
    }

    /// The Catalan matroid of the given rank on `2 * rank` elements: bases
    /// `b_1 < .. < b_rank` with `b_i <= 2i - 1` (elements 0-indexed,
    /// positions 1-indexed).
    pub fn catalan(rank: usize) -> Result<Self, MatroidError> {
        if rank == 0 || 2 * rank > MAX_GROUND {
            return Err(MatroidError::BadParameters(format!(
                "catalan matroid needs 1 <= rank <= {}, got {rank}",
                MAX_GROUND / 2
            )));
        }
        let n = 2 * rank;
        let bases: Vec<ElementSet> = k_subsets(n, rank)
            .into_iter()
            .filter(|s| s.iter().enumerate().all(|(i, b)| b <= 2 * i + 1))
            .collect();
        Self::from_sets(n, bases)
    }

    pub fn from_json(json: &MatroidJson) -> Result<Self, MatroidError> {
        Self::from_bases(json.n, &json.bases)
    }

    pub fn to_json(&self) -> MatroidJson {
        MatroidJson {
            n: self.n,
            bases: self.bases.iter().map(|b| b.to_vec()).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn basis(&self, index: usize) -> ElementSet {
        self.bases[index]
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, set: ElementSet) -> bool {
        self.lookup.contains(&set)
    }

    pub fn basis_index(&self, set: ElementSet) -> Option<usize> {
        if !self.is_basis(set) {
            return None;
        }
        self.bases
            .binary_search_by(|b| b.lex_cmp(set))
            .ok()
    }

    pub fn is_independent(&self, set: ElementSet) -> bool {
        self.bases.iter().any(|b| set.is_subset(*b))
    }

    /// Elements lying in no basis.
    pub fn loops(&self) -> ElementSet {
        let covered = self
            .bases
            .iter()
            .fold(ElementSet::EMPTY, |acc, b| acc.union(*b));
        ElementSet::full(self.n).difference(covered)
    }

    /// Every independent set, each listed once, ordered by size then lexicographically.
    pub fn independent_sets(&self) -> Vec<ElementSet> {
        let mut seen = HashSet::new();
        for b in &self.bases {
            seen.extend(b.subsets());
        }
        let mut all: Vec<ElementSet> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        all
    }

    /// `(M / contract) | restrict_to`, relabelled onto `0..restrict_to.len()`.
    pub fn minor(&self, contract: ElementSet, restrict_to: ElementSet) -> Result<Minor, MatroidError> {
        let ground = ElementSet::full(self.n);
        for set in [contract, restrict_to] {
            if let Some(e) = set.difference(ground).iter().next() {
                return Err(MatroidError::ElementOutOfRange { element: e, n: self.n });
            }
        }
        let overlap = contract.intersection(restrict_to);
        if !overlap.is_empty() {
            return Err(MatroidError::OverlappingSets(overlap));
        }
        if !self.is_independent(contract) {
            return Err(MatroidError::DependentContraction(contract));
        }
        // Bases of M/I are B \ I for bases B containing I; bases of a
        // restriction are the largest traces on the restricted set.
        let traces: BTreeSet<ElementSet> = self
            .bases
            .iter()
            .filter(|b| contract.is_subset(**b))
            .map(|b| b.difference(contract).intersection(restrict_to))
            .collect();
        let top = traces.iter().map(|t| t.len()).max().unwrap_or(0);
        let element_map = restrict_to.to_vec();
        let relabel = |t: ElementSet| {
            ElementSet::from_elements(
                element_map
                    .iter()
                    .enumerate()
                    .filter(|(_, &orig)| t.contains(orig))
                    .map(|(new, _)| new),
            )
        };
        let bases: Vec<ElementSet> = traces
            .into_iter()
            .filter(|t| t.len() == top)
            .map(relabel)
            .collect();
        let matroid = Matroid::from_sets(element_map.len(), bases)?;
        Ok(Minor {
            matroid,
            element_map,
        })
    }

    /// `f_{-1}, f_0, .., f_{r-1}`: independent sets counted by size.
    pub fn f_vector(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.rank + 1];
        for s in self.independent_sets() {
            f[s.len()] += 1;
        }
        f
    }

    /// h-vector of the independence complex, `h_0, .., h_r`.
    pub fn h_vector(&self) -> HVector {
        let f = self.f_vector();
        let r = self.rank;
        // sum_j f_{j-1} x^j (1-x)^{r-j}
        let mut h = vec![0i128; r + 1];
        for (j, &fj) in f.iter().enumerate() {
            for (i, slot) in h.iter_mut().enumerate().skip(j) {
                let c = binomial(r - j, i - j) as i128;
                let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                *slot += sign * c * fj as i128;
            }
        }
        HVector(
            h.into_iter()
                .map(|c| u64::try_from(c).expect("matroid h-vectors are nonnegative"))
                .collect(),
        )
    }
}

/// A minor together with the original label of each new ground element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minor {
    pub matroid: Matroid,
    /// `element_map[new] = original`.
    pub element_map: Vec<usize>,
}

/// `h_0, .., h_r` of an independence complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HVector(pub Vec<u64>);

impl HVector {
    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Coefficients with trailing zeros removed, for comparing polynomials.
    pub fn trimmed(&self) -> Vec<u64> {
        let mut v = self.0.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// The histogram of a list of sizes, as an h-vector of the given length.
    pub fn from_sizes<I: IntoIterator<Item = usize>>(sizes: I, rank: usize) -> Self {
        let mut h = vec![0u64; rank + 1];
        for s in sizes {
            if s >= h.len() {
                h.resize(s + 1, 0);
            }
            h[s] += 1;
        }
        HVector(h)
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<ElementSet> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(ElementSet::from_elements(idx.iter().copied()));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false when `u` and `v` were already connected.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}
