//! Shelling orders of independence complexes and of the dual matroid
//! polytope, restriction sets and internally passive sets.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, HVector, Matroid};
use crate::polytope::{face_lattice_oracle, first_tie, FaceLattice, Functional, PolytopeError, Rational, VertexSet};

/// A sequence of basis indices, a full order or a prefix of one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacetOrder(pub Vec<usize>);

impl FacetOrder {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> FacetOrder {
        FacetOrder(self.0.iter().rev().copied().collect())
    }

    /// Builds an order from explicit element lists.
    pub fn from_bases(m: &Matroid, bases: &[Vec<usize>]) -> Result<Self, ShellingError> {
        bases
            .iter()
            .map(|b| {
                let set = ElementSet::try_from_elements(b, m.ground_size())
                    .map_err(|_| ShellingError::NotABasis(ElementSet::EMPTY))?;
                m.basis_index(set).ok_or(ShellingError::NotABasis(set))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FacetOrder)
    }

    pub fn facets(&self, m: &Matroid) -> Vec<ElementSet> {
        self.0.iter().map(|&i| m.basis(i)).collect()
    }
}

/// A total order on the ground set, stored as the position of each element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundOrder {
    position: Vec<usize>,
}

impl GroundOrder {
    /// `sequence` lists the elements from smallest to largest.
    pub fn from_sequence(sequence: &[usize]) -> Result<Self, ShellingError> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (p, &e) in sequence.iter().enumerate() {
            if e >= n || position[e] != usize::MAX {
                return Err(ShellingError::InvalidOrder(format!(
                    "{sequence:?} is not a permutation of 0..{n}"
                )));
            }
            position[e] = p;
        }
        Ok(GroundOrder { position })
    }

    pub fn natural(n: usize) -> Self {
        GroundOrder {
            position: (0..n).collect(),
        }
    }

    /// Elements ordered by their value under `l`.
    pub fn from_functional(l: &Functional) -> Self {
        Self::from_sequence(&l.element_order()).expect("element_order is a permutation")
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }

    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.position.len()];
        for (e, &p) in self.position.iter().enumerate() {
            seq[p] = e;
        }
        seq
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellingError {
    #[error("the facet at position {position} does not add an interval of new faces")]
    NotAShellingStep { position: usize },
    #[error("prefix is not a partial shelling (fails at position {position})")]
    NotAPartialShelling { position: usize },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("{0} is not a basis")]
    NotABasis(ElementSet),
    #[error("functional is not generic: bases {first} and {second} have equal weight")]
    NonGenericFunctional { first: ElementSet, second: ElementSet },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Restriction sets of a shelling, listed by position in the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionSets {
    /// Basis index at each position.
    pub order: Vec<usize>,
    /// The basis at each position.
    pub facets: Vec<ElementSet>,
    /// The restriction set at each position.
    pub sets: Vec<ElementSet>,
    pub ground_size: usize,
    pub loops: ElementSet,
}

impl RestrictionSets {
    /// Assembles restriction data from explicit tables (e.g. published
    /// shelling tables). Positions are taken in the given order.
    pub fn from_table(m: &Matroid, rows: &[(Vec<usize>, Vec<usize>)]) -> Result<Self, ShellingError> {
        let mut order = Vec::with_capacity(rows.len());
        let mut sets = Vec::with_capacity(rows.len());
        for (basis, restriction) in rows {
            let set = ElementSet::from_elements(basis.iter().copied());
            order.push(m.basis_index(set).ok_or(ShellingError::NotABasis(set))?);
            sets.push(ElementSet::from_elements(restriction.iter().copied()));
        }
        Ok(RestrictionSets {
            facets: order.iter().map(|&i| m.basis(i)).collect(),
            order,
            sets,
            ground_size: m.ground_size(),
            loops: m.loops(),
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Restriction set of a basis index, if it appears in the order.
    pub fn of_basis(&self, basis: usize) -> Option<ElementSet> {
        self.order.iter().position(|&b| b == basis).map(|p| self.sets[p])
    }

    pub fn size_histogram(&self, rank: usize) -> HVector {
        HVector::from_sizes(self.sets.iter().map(|s| s.len()), rank)
    }
}

/// Why a step of a candidate shelling failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepFailureReason {
    IndexOutOfRange,
    RepeatedFacet,
    /// The new faces do not form an interval `[R, F]`.
    NotAnInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFailure {
    pub position: usize,
    pub reason: StepFailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingVerdict {
    pub failure: Option<StepFailure>,
    /// True when the order lists every basis.
    pub complete: bool,
}

impl ShellingVerdict {
    pub fn is_shelling(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for ShellingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure {
            None if self.complete => f.write_str("shelling"),
            None => f.write_str("partial shelling"),
            Some(fail) => write!(f, "not a shelling: position {} ({:?})", fail.position, fail.reason),
        }
    }
}

/// The restriction set of `facet` given the facets before it, or `None` when
/// the new faces are not an interval.
///
/// `R = {x in F : F \ x lies in an earlier facet}`; the step is a shelling
/// step iff every earlier facet misses some element of `R`.
fn shelling_step(facet: ElementSet, earlier: &[ElementSet]) -> Option<ElementSet> {
    if earlier.is_empty() {
        return Some(ElementSet::EMPTY);
    }
    let r = facet.len();
    let restriction = earlier
        .iter()
        .filter(|g| r > 0 && facet.intersection(**g).len() == r - 1)
        .fold(ElementSet::EMPTY, |acc, g| acc.union(facet.difference(*g)));
    earlier
        .iter()
        .all(|g| !facet.difference(*g).intersection(restriction).is_empty())
        .then_some(restriction)
}

fn walk_order(m: &Matroid, order: &FacetOrder) -> Result<Vec<ElementSet>, StepFailure> {
    let mut seen = vec![false; m.basis_count()];
    let mut earlier = Vec::with_capacity(order.len());
    let mut sets = Vec::with_capacity(order.len());
    for (position, &b) in order.0.iter().enumerate() {
        let fail = |reason| StepFailure { position, reason };
        if b >= m.basis_count() {
            return Err(fail(StepFailureReason::IndexOutOfRange));
        }
        if seen[b] {
            return Err(fail(StepFailureReason::RepeatedFacet));
        }
        seen[b] = true;
        let facet = m.basis(b);
        let restriction = shelling_step(facet, &earlier).ok_or(fail(StepFailureReason::NotAnInterval))?;
        sets.push(restriction);
        earlier.push(facet);
    }
    Ok(sets)
}

/// Checks that every step adds an interval of new faces. Prefixes are
/// judged as partial shellings.
pub fn is_shelling(m: &Matroid, order: &FacetOrder) -> ShellingVerdict {
    ShellingVerdict {
        failure: walk_order(m, order).err(),
        complete: order.len() == m.basis_count(),
    }
}

/// Restriction sets of a (partial) shelling, read off the face intervals.
pub fn restriction_sets(m: &Matroid, order: &FacetOrder) -> Result<RestrictionSets, ShellingError> {
    let sets = walk_order(m, order).map_err(|fail| match fail.reason {
        StepFailureReason::NotAnInterval => ShellingError::NotAShellingStep {
            position: fail.position,
        },
        other => ShellingError::InvalidOrder(format!("{other:?} at position {}", fail.position)),
    })?;
    Ok(RestrictionSets {
        order: order.0.clone(),
        facets: order.facets(m),
        sets,
        ground_size: m.ground_size(),
        loops: m.loops(),
    })
}

/// `IP(B)`: elements of `B` exchangeable for a smaller element outside `B`.
pub fn internally_passive_set(m: &Matroid, ground: &GroundOrder, basis: ElementSet) -> Result<ElementSet, ShellingError> {
    if !m.is_basis(basis) {
        return Err(ShellingError::NotABasis(basis));
    }
    let outside = ElementSet::full(m.ground_size()).difference(basis);
    Ok(ElementSet::from_elements(basis.iter().filter(|&b| {
        outside
            .iter()
            .any(|c| ground.less(c, b) && m.is_basis(basis.without(b).with(c)))
    })))
}

/// Bases sorted by increasing weight. Ties are rejected, naming the first
/// tied pair in the fixed pair enumeration.
pub fn line_shelling_order(m: &Matroid, l: &Functional) -> Result<FacetOrder, ShellingError> {
    l.check_len(m.ground_size())?;
    if let Some((i, j)) = first_tie(m, l) {
        return Err(ShellingError::NonGenericFunctional {
            first: m.basis(i),
            second: m.basis(j),
        });
    }
    let weights = l.weights(m);
    let mut order: Vec<usize> = (0..m.basis_count()).collect();
    order.sort_by(|&a, &b| weights[a].cmp(&weights[b]));
    Ok(FacetOrder(order))
}

/// The functional with values `2^n - 2^(n-i)`, which orders the bases
/// lexicographically by their sorted element lists.
pub fn lexicographic_functional(n: usize) -> Functional {
    let n = n as u32;
    Functional::new(
        (0..n)
            .map(|i| Rational::from_integer((BigInt::from(2).pow(n) - BigInt::from(2).pow(n - i)).into()))
            .collect(),
    )
}

/// `l + eps * lex` for an exact `eps` small enough that every strict
/// comparison of basis weights under `l` survives, and a further factor
/// `10^-6` below that so displayed values are unchanged. Ties are broken
/// lexicographically; a generic `l` is returned unchanged.
pub fn perturb_lexicographic(m: &Matroid, l: &Functional) -> Functional {
    if first_tie(m, l).is_none() {
        return l.clone();
    }
    let lex = lexicographic_functional(m.ground_size());
    let mut weights = l.weights(m);
    weights.sort();
    weights.dedup();
    let gap = weights
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(|| Rational::from_integer(1.into()));
    let lex_weights = lex.weights(m);
    let spread = lex_weights.iter().max().expect("a basis") - lex_weights.iter().min().expect("a basis");
    let eps = gap / (spread * Rational::from_integer(2_000_000.into()));
    Functional::new(l.coords().iter().zip(lex.coords()).map(|(a, b)| a + b * &eps).collect())
}

/// Result of [`extend_partial_shelling`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    /// A full shelling order beginning with the prefix.
    Completed(FacetOrder),
    /// The prefix is not downward closed in the internally passive poset of
    /// the given ground order. This says nothing about extendability.
    NotAnIdeal { missing: usize, below: usize },
}

/// Completes a partial shelling whose bases form an order ideal of the
/// internally passive poset, appending the remaining bases by increasing
/// IP-set size.
pub fn extend_partial_shelling(m: &Matroid, prefix: &FacetOrder, ground: &GroundOrder) -> Result<Extension, ShellingError> {
    if let Some(fail) = is_shelling(m, prefix).failure {
        return Err(ShellingError::NotAPartialShelling {
            position: fail.position,
        });
    }
    let ip: Vec<ElementSet> = m
        .bases()
        .iter()
        .map(|b| internally_passive_set(m, ground, *b))
        .collect::<Result<_, _>>()?;
    let mut in_prefix = vec![false; m.basis_count()];
    for &b in prefix.as_slice() {
        in_prefix[b] = true;
    }
    for &b in prefix.as_slice() {
        if let Some(missing) = (0..m.basis_count()).find(|&c| !in_prefix[c] && ip[c].is_subset(ip[b])) {
            return Ok(Extension::NotAnIdeal { missing, below: b });
        }
    }
    let mut rest: Vec<usize> = (0..m.basis_count()).filter(|&b| !in_prefix[b]).collect();
    // strict containment implies strictly smaller size, so this is a linear extension
    rest.sort_by_key(|&b| (ip[b].len(), b));
    let mut order = prefix.0.clone();
    order.extend(rest);
    Ok(Extension::Completed(FacetOrder(order)))
}

/// Decides whether an order of the bases is a shelling of the dual matroid
/// polytope, whose facets correspond to the vertices of `P_M`.
///
/// Works on the face lattice of `P_M` turned upside down. A facet step is
/// valid when its intersection with the earlier facets is a nonempty union
/// of its own facets that begins some shelling of its boundary; that is
/// decided recursively, with exhaustive search over facet subsets. Prefixes
/// must also extend to a full shelling.
pub fn is_polytopal_shelling(m: &Matroid, order: &FacetOrder) -> Result<bool, ShellingError> {
    let lattice = face_lattice_oracle(m)?;
    if walk_order(m, order).is_err_and(|f| f.reason != StepFailureReason::NotAnInterval) {
        return Ok(false);
    }
    let mut checker = DualShellingChecker::new(&lattice);
    let top = 0; // the empty face of P_M is the whole dual polytope
    let facets = checker.facets(top).to_vec();
    let local: HashMap<usize, usize> = facets.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut used: u128 = 0;
    for &b in order.as_slice() {
        let face = lattice.index_of(1u128 << b).expect("every basis is a vertex");
        let g = local[&face];
        if !checker.valid_step(top, used, g) {
            return Ok(false);
        }
        used |= 1 << g;
    }
    if order.len() < m.basis_count() {
        return Ok(checker.completable(top, used));
    }
    Ok(true)
}

/// Memoized recursion over the dual face lattice. A node is a face index of
/// `P_M`; its facets in the dual are the faces of `P_M` covering it.
struct DualShellingChecker<'a> {
    lattice: &'a FaceLattice,
    polytope_dim: i32,
    segment_memo: HashMap<(usize, u128), bool>,
    complete_memo: HashMap<(usize, u128), bool>,
}

impl<'a> DualShellingChecker<'a> {
    fn new(lattice: &'a FaceLattice) -> Self {
        DualShellingChecker {
            lattice,
            polytope_dim: lattice.polytope_dim(),
            segment_memo: HashMap::new(),
            complete_memo: HashMap::new(),
        }
    }

    fn facets(&self, node: usize) -> &[usize] {
        self.lattice.covers_of(node)
    }

    fn dual_dim(&self, node: usize) -> i32 {
        self.polytope_dim - 1 - self.lattice.dim(node)
    }

    fn full_mask(&self, node: usize) -> u128 {
        let k = self.facets(node).len();
        if k == 128 {
            u128::MAX
        } else {
            (1u128 << k) - 1
        }
    }

    /// Can facet `g` of `node` follow the facets in `used`?
    fn valid_step(&mut self, node: usize, used: u128, g: usize) -> bool {
        let facets = self.facets(node).to_vec();
        let gface = facets[g];
        if self.dual_dim(gface) <= 0 || used == 0 {
            return true;
        }
        let top = self.lattice.top();
        let sub_facets = self.facets(gface).to_vec();
        let mut generated: u128 = 0;
        let mut lower: Vec<VertexSet> = Vec::new();
        for (i, &u) in facets.iter().enumerate() {
            if used >> i & 1 == 0 {
                continue;
            }
            let meet = self.lattice.join(gface, u);
            if meet == top {
                continue; // empty in the dual
            }
            match sub_facets.iter().position(|&h| h == meet) {
                Some(h) => generated |= 1 << h,
                None => lower.push(self.lattice.face(meet)),
            }
        }
        if generated == 0 {
            return false;
        }
        // every smaller piece of the intersection must lie in one of the generated facets
        let pure = lower.iter().all(|&piece| {
            sub_facets
                .iter()
                .enumerate()
                .any(|(h, &hf)| generated >> h & 1 == 1 && self.lattice.face(hf) & piece == self.lattice.face(hf))
        });
        pure && self.initial_segment(gface, generated)
    }

    /// Is the facet set `target` of `node` the beginning of a shelling of
    /// the boundary of `node`?
    fn initial_segment(&mut self, node: usize, target: u128) -> bool {
        if let Some(&v) = self.segment_memo.get(&(node, target)) {
            return v;
        }
        let mut seen = HashMap::new();
        let ok = self.reach(node, 0, target, &mut seen) && self.completable(node, target);
        self.segment_memo.insert((node, target), ok);
        ok
    }

    /// Can `target` be built from `from` one valid step at a time?
    fn reach(&mut self, node: usize, from: u128, target: u128, seen: &mut HashMap<u128, bool>) -> bool {
        if from == target {
            return true;
        }
        if let Some(&v) = seen.get(&from) {
            return v;
        }
        let mut ok = false;
        let mut rest = target & !from;
        while rest != 0 {
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.valid_step(node, from, g) && self.reach(node, from | 1 << g, target, seen) {
                ok = true;
                break;
            }
        }
        seen.insert(from, ok);
        ok
    }

    fn completable(&mut self, node: usize, used: u128) -> bool {
        let full = self.full_mask(node);
        if used == full {
            return true;
        }
        if let Some(&v) = self.complete_memo.get(&(node, used)) {
            return v;
        }
        let mut ok = false;
        let mut rest = full & !used;
        while rest != 0 {
            let g = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.valid_step(node, used, g) && self.completable(node, used | 1 << g) {
                ok = true;
                break;
            }
        }
        self.complete_memo.insert((node, used), ok);
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::from_elements(e.iter().copied())
    }

    fn u42() -> Matroid {
        Matroid::uniform(4, 2).unwrap()
    }

    /// The edge order 12 < 23 < 34 < 14 < 13 < 24 in 0-indexed labels.
    fn nonpolytopal_order(m: &Matroid) -> FacetOrder {
        FacetOrder::from_bases(m, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 2], vec![1, 3]]).unwrap()
    }

    /// New faces at each step by brute force over all subsets; returns the
    /// unique minimal new face if the new faces form an interval.
    fn brute_force_restriction(facets: &[ElementSet]) -> Option<Vec<ElementSet>> {
        let mut out = Vec::new();
        for (j, f) in facets.iter().enumerate() {
            let new: Vec<ElementSet> = f
                .subsets()
                .filter(|s| facets[..j].iter().all(|g| !s.is_subset(*g)))
                .collect();
            let min = *new.iter().min_by_key(|s| s.len())?;
            let interval: Vec<ElementSet> = f.subsets().filter(|s| min.is_subset(*s)).collect();
            let mut a = new.clone();
            let mut b = interval;
            a.sort();
            b.sort();
            if a != b {
                return None;
            }
            out.push(min);
        }
        Some(out)
    }

    #[test]
    fn example_order_restriction_sets() {
        let m = u42();
        let order = nonpolytopal_order(&m);
        let rs = restriction_sets(&m, &order).unwrap();
        // 1-indexed: {}, {3}, {4}, {1,4}, {1,3}, {2,4}
        let expected = vec![set(&[]), set(&[2]), set(&[3]), set(&[0, 3]), set(&[0, 2]), set(&[1, 3])];
        assert_eq!(rs.sets, expected);
        assert_eq!(brute_force_restriction(&order.facets(&m)).unwrap(), expected);
        assert!(is_shelling(&m, &order).is_shelling());
    }

    #[test]
    fn disjoint_second_facet_fails() {
        let m = u42();
        let order = FacetOrder::from_bases(&m, &[vec![0, 1], vec![2, 3]]).unwrap();
        let verdict = is_shelling(&m, &order);
        assert_eq!(
            verdict.failure,
            Some(StepFailure {
                position: 1,
                reason: StepFailureReason::NotAnInterval
            })
        );
        assert!(matches!(
            restriction_sets(&m, &order),
            Err(ShellingError::NotAShellingStep { position: 1 })
        ));
    }

    #[test]
    fn malformed_orders() {
        let m = u42();
        assert_eq!(
            is_shelling(&m, &FacetOrder(vec![0, 0])).failure.unwrap().reason,
            StepFailureReason::RepeatedFacet
        );
        assert_eq!(
            is_shelling(&m, &FacetOrder(vec![0, 9])).failure.unwrap().reason,
            StepFailureReason::IndexOutOfRange
        );
    }

    #[test]
    fn non_reversible_shelling_from_three_disjoint_bases() {
        // lexicographic shelling of U(6,2) with {2,3} and {4,5} moved to the end
        let m = Matroid::uniform(6, 2).unwrap();
        let a = m.basis_index(set(&[2, 3])).unwrap();
        let b = m.basis_index(set(&[4, 5])).unwrap();
        let mut order: Vec<usize> = (0..m.basis_count()).filter(|&i| i != a && i != b).collect();
        order.extend([a, b]);
        let order = FacetOrder(order);
        assert!(is_shelling(&m, &order).is_shelling());
        let rev = is_shelling(&m, &order.reversed());
        assert_eq!(rev.failure.unwrap().position, 1);
    }

    #[test]
    fn internally_passive_sets() {
        let m = u42();
        let natural = GroundOrder::natural(4);
        assert_eq!(internally_passive_set(&m, &natural, set(&[2, 3])).unwrap(), set(&[2, 3]));
        assert_eq!(internally_passive_set(&m, &natural, set(&[0, 1])).unwrap(), set(&[]));
        assert!(matches!(
            internally_passive_set(&m, &natural, set(&[0, 1, 2])),
            Err(ShellingError::NotABasis(_))
        ));
        let cat = Matroid::catalan(3).unwrap();
        let order = GroundOrder::from_functional(&Functional::from_integers(&[1, 2, 3, 4, 5, 6]));
        assert_eq!(internally_passive_set(&cat, &order, set(&[1, 3, 5])).unwrap(), set(&[1, 3, 5]));
    }

    #[test]
    fn lexicographic_weights_give_lex_order() {
        let m = u42();
        let order = line_shelling_order(&m, &Functional::from_integers(&[0, 8, 12, 14])).unwrap();
        assert_eq!(order.0, vec![0, 1, 2, 3, 4, 5]);
        let tie = line_shelling_order(&m, &Functional::from_integers(&[1, 2, 3, 4])).unwrap_err();
        assert_eq!(
            tie,
            ShellingError::NonGenericFunctional {
                first: set(&[0, 3]),
                second: set(&[1, 2])
            }
        );
    }

    #[test]
    fn lexicographic_and_colex_functionals() {
        for n in 1..=7 {
            for r in 1..=n {
                let m = Matroid::uniform(n, r).unwrap();
                let lex = lexicographic_functional(n);
                let order = line_shelling_order(&m, &lex).unwrap();
                assert_eq!(order.0, (0..m.basis_count()).collect::<Vec<_>>());
                assert!(is_shelling(&m, &order).is_shelling());
                let neg = lex.scaled(&Rational::from_integer((-1).into()));
                let colex = line_shelling_order(&m, &neg).unwrap();
                assert_eq!(colex, order.reversed());
                let bases = colex.facets(&m);
                assert!(bases.windows(2).all(|w| colex_less_reversed(w[0], w[1])));
                assert!(is_shelling(&m, &colex).is_shelling());
            }
        }
        assert_eq!(lexicographic_functional(4), Functional::from_integers(&[0, 8, 12, 14]));
    }

    /// Colex for the reversed ground order: the set whose largest element of
    /// the symmetric difference (smallest in the natural order) is smaller comes first.
    fn colex_less_reversed(a: ElementSet, b: ElementSet) -> bool {
        let first = a.difference(b).union(b.difference(a)).iter().next().unwrap();
        b.contains(first)
    }

    #[test]
    fn perturbation_breaks_ties_lexicographically() {
        let m = Matroid::catalan(3).unwrap();
        let l = Functional::from_integers(&[1, 2, 3, 4, 5, 6]);
        assert!(line_shelling_order(&m, &l).is_err());
        let p = perturb_lexicographic(&m, &l);
        let order = line_shelling_order(&m, &p).unwrap();
        let w = l.weights(&m);
        for pair in order.0.windows(2) {
            assert!(w[pair[0]] < w[pair[1]] || (w[pair[0]] == w[pair[1]] && pair[0] < pair[1]));
        }
        assert_eq!(p.element_order(), l.element_order());
        let generic = Functional::from_integers(&[1, 2, 4, 8]);
        assert_eq!(perturb_lexicographic(&Matroid::uniform(4, 2).unwrap(), &generic), generic);
    }

    #[test]
    fn ground_order_validation() {
        assert!(GroundOrder::from_sequence(&[0, 0, 1]).is_err());
        assert!(GroundOrder::from_sequence(&[0, 3, 1]).is_err());
        let g = GroundOrder::from_sequence(&[2, 0, 1]).unwrap();
        assert!(g.less(2, 0));
        assert_eq!(g.sequence(), vec![2, 0, 1]);
    }

    /// Independent shelling test for the 3-cube dual to U(4,2): two facets
    /// meet in an edge unless the bases are complementary; inside a square,
    /// the previously met edges must be nonempty and not exactly two opposite
    /// edges.
    fn cube_oracle(m: &Matroid, order: &FacetOrder) -> bool {
        let facets = order.facets(m);
        (1..facets.len()).all(|j| {
            let f = facets[j];
            let met: Vec<ElementSet> = facets[..j].iter().copied().filter(|g| !g.is_disjoint(f)).collect();
            let opposite_pair = met.len() == 2 && met[0].is_disjoint(met[1]);
            !met.is_empty() && !opposite_pair
        })
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, k - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn polytopal_check_matches_cube_oracle() {
        let m = u42();
        let mut count = 0;
        for p in permutations(6) {
            let order = FacetOrder(p);
            let polytopal = is_polytopal_shelling(&m, &order).unwrap();
            assert_eq!(polytopal, cube_oracle(&m, &order), "{order:?}");
            if polytopal {
                count += 1;
                assert!(is_shelling(&m, &order).is_shelling());
                assert!(is_polytopal_shelling(&m, &order.reversed()).unwrap());
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn example_order_is_not_polytopal() {
        let m = u42();
        assert!(!is_polytopal_shelling(&m, &nonpolytopal_order(&m)).unwrap());
        let line = line_shelling_order(&m, &Functional::from_integers(&[1, 2, 4, 8])).unwrap();
        assert!(is_polytopal_shelling(&m, &line).unwrap());
        assert!(is_polytopal_shelling(&m, &line.reversed()).unwrap());
    }

    #[test]
    fn polytopal_prefixes_must_extend() {
        let m = u42();
        let prefix = FacetOrder::from_bases(&m, &[vec![0, 1], vec![0, 2]]).unwrap();
        assert!(is_polytopal_shelling(&m, &prefix).unwrap());
        let bad = FacetOrder::from_bases(&m, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!is_polytopal_shelling(&m, &bad).unwrap());
    }

    #[test]
    fn extension_of_ideal_prefix() {
        let m = u42();
        let natural = GroundOrder::natural(4);
        let prefix = FacetOrder::from_bases(&m, &[vec![0, 1], vec![0, 2]]).unwrap();
        match extend_partial_shelling(&m, &prefix, &natural).unwrap() {
            Extension::Completed(order) => {
                assert_eq!(&order.0[..2], prefix.as_slice());
                assert_eq!(order.len(), 6);
                assert!(is_shelling(&m, &order).is_shelling());
            }
            other => panic!("expected completion, got {other:?}"),
        }
        let first = FacetOrder(vec![0]);
        assert!(matches!(
            extend_partial_shelling(&m, &first, &natural).unwrap(),
            Extension::Completed(_)
        ));
        let disjoint = FacetOrder::from_bases(&m, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(
            extend_partial_shelling(&m, &disjoint, &natural),
            Err(ShellingError::NotAPartialShelling { position: 1 })
        ));
        // {0,1},{1,2}: IP({1,2}) = {1,2} contains IP({0,2}) = {2}
        let skip = FacetOrder::from_bases(&m, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(
            extend_partial_shelling(&m, &skip, &natural).unwrap(),
            Extension::NotAnIdeal { .. }
        ));
    }
}
