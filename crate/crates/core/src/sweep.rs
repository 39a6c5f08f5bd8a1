//! Pinned broken-line sweeps of the matroid polytope and the randomized
//! pivot search that generates them.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid};
use crate::polytope::{
    first_tie, region_hash, sign_vector, unique_minimizer, Functional, PolytopeError, Rational, RationalJson, SignVector,
};
use crate::shelling::{internally_passive_set, perturb_lexicographic, restriction_sets, FacetOrder, GroundOrder, RestrictionSets, ShellingError};

/// Denominator of the random convex coefficients.
pub const COEFFICIENT_DENOMINATOR: i64 = 1_000_000;
/// Bound on the integer coordinates of sampled initial functionals.
pub const INITIAL_BOX: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("no admissible functional found within {attempts} attempts")]
    ExhaustedMisses { attempts: usize },
    #[error("initial functional is minimized at {minimizer}, not at the base vertex")]
    InitialNotPinned { minimizer: ElementSet },
    #[error("functional is not generic: bases {first} and {second} have equal weight")]
    NonGenericFunctional { first: ElementSet, second: ElementSet },
    #[error("{0} is not a basis")]
    NotABasis(ElementSet),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(SweepViolation),
    #[error("restriction set at position {position} is {direct} but the witness gives {ip}")]
    WitnessMismatch {
        position: usize,
        direct: ElementSet,
        ip: ElementSet,
    },
    #[error(transparent)]
    Shelling(#[from] ShellingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// An order of all bases with one witness functional per position.
#[derive(Clone, PartialEq, Eq)]
pub struct Sweep {
    order: FacetOrder,
    witnesses: Vec<Functional>,
    regions: Vec<SignVector>,
}

impl fmt::Debug for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sweep")
            .field("order", &self.order)
            .field("witnesses", &self.witnesses)
            .finish()
    }
}

impl Sweep {
    /// Wraps an explicit order and witnesses; nothing is validated.
    pub fn new(m: &Matroid, order: FacetOrder, witnesses: Vec<Functional>) -> Result<Self, SweepError> {
        for l in &witnesses {
            l.check_len(m.ground_size())?;
        }
        let regions = witnesses.iter().map(|l| sign_vector(m, l)).collect();
        Ok(Sweep {
            order,
            witnesses,
            regions,
        })
    }

    /// The order induced by per-position witnesses: position `k` takes the
    /// remaining basis of least weight under the `k`-th witness.
    pub fn induced(m: &Matroid, witnesses: Vec<Functional>) -> Result<Self, SweepError> {
        if witnesses.len() != m.basis_count() {
            return Err(SweepError::InvalidParams(format!(
                "{} witnesses for {} bases",
                witnesses.len(),
                m.basis_count()
            )));
        }
        for l in &witnesses {
            l.check_len(m.ground_size())?;
        }
        let mut remaining: Vec<usize> = (0..m.basis_count()).collect();
        let mut order = Vec::with_capacity(remaining.len());
        for l in &witnesses {
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .min_by(|a, b| l.weight(m.basis(*a.1)).cmp(&l.weight(m.basis(*b.1))))
                .expect("one witness per basis");
            order.push(remaining.remove(pos));
        }
        Sweep::new(m, FacetOrder(order), witnesses)
    }

    /// Witnesses given as `(first position, functional)` segments; each
    /// functional is copied forward to the next segment.
    pub fn from_segments(m: &Matroid, segments: &[(usize, Functional)]) -> Result<Self, SweepError> {
        let count = m.basis_count();
        if segments.first().map(|s| s.0) != Some(0) || segments.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(SweepError::InvalidParams(
                "segments must start at position 0 and increase".into(),
            ));
        }
        if segments.last().is_some_and(|s| s.0 >= count) {
            return Err(SweepError::InvalidParams("segment beyond the last position".into()));
        }
        let mut witnesses = Vec::with_capacity(count);
        for (i, (start, l)) in segments.iter().enumerate() {
            let end = segments.get(i + 1).map_or(count, |s| s.0);
            witnesses.extend(std::iter::repeat_n(l.clone(), end - start));
        }
        Sweep::induced(m, witnesses)
    }

    /// The line shelling of `l` as a sweep with a constant witness.
    pub fn constant(m: &Matroid, l: &Functional) -> Result<Self, SweepError> {
        Sweep::induced(m, vec![l.clone(); m.basis_count()])
    }

    pub fn base_vertex(&self) -> usize {
        self.order.0[0]
    }

    pub fn order(&self) -> &FacetOrder {
        &self.order
    }

    pub fn witnesses(&self) -> &[Functional] {
        &self.witnesses
    }

    pub fn regions(&self) -> &[SignVector] {
        &self.regions
    }

    pub fn region_hash(&self) -> String {
        region_hash(&self.regions)
    }

    /// `(first position, functional)` for each maximal run of equal witnesses.
    pub fn segments(&self) -> Vec<(usize, &Functional)> {
        let mut out: Vec<(usize, &Functional)> = Vec::new();
        for (k, l) in self.witnesses.iter().enumerate() {
            if out.last().is_none_or(|(_, prev)| *prev != l) {
                out.push((k, l));
            }
        }
        out
    }

    pub fn to_json(&self, m: &Matroid) -> SweepJson {
        SweepJson {
            order: self.order.0.iter().map(|&b| m.basis(b).to_vec()).collect(),
            segments: self
                .segments()
                .into_iter()
                .map(|(start, l)| SegmentJson {
                    start,
                    functional: l.to_json(),
                })
                .collect(),
            region_hash: self.region_hash(),
        }
    }

    /// Rebuilds a sweep and checks the stored order and region hash.
    pub fn from_json(m: &Matroid, json: &SweepJson) -> Result<Self, SweepError> {
        let segments = json
            .segments
            .iter()
            .map(|s| Ok((s.start, Functional::from_json(&s.functional)?)))
            .collect::<Result<Vec<_>, PolytopeError>>()?;
        let sweep = Sweep::from_segments(m, &segments)?;
        let order = FacetOrder::from_bases(m, &json.order)?;
        if order != sweep.order {
            return Err(SweepError::InvalidParams("stored order differs from the witnesses".into()));
        }
        if sweep.region_hash() != json.region_hash {
            return Err(SweepError::InvalidParams("region hash mismatch".into()));
        }
        Ok(sweep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub start: usize,
    pub functional: Vec<RationalJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepJson {
    pub order: Vec<Vec<usize>>,
    pub segments: Vec<SegmentJson>,
    pub region_hash: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepCondition {
    /// Wrong lengths or the order is not a permutation of the bases.
    Malformed,
    /// Condition 1: every witness is minimized at the base vertex.
    Pinned,
    /// Condition 2: the witness at `k` cuts the first `k + 1` bases off.
    Cut,
    /// Condition 3: every witness separates all vertices.
    Generic,
}

impl SweepCondition {
    pub fn number(self) -> usize {
        match self {
            SweepCondition::Malformed => 0,
            SweepCondition::Pinned => 1,
            SweepCondition::Cut => 2,
            SweepCondition::Generic => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepViolation {
    pub condition: SweepCondition,
    pub position: usize,
}

impl fmt::Display for SweepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} ({:?}) fails at position {}", self.condition.number(), self.condition, self.position)
    }
}

fn check_conditions(m: &Matroid, s: &Sweep, pinned: bool) -> Option<SweepViolation> {
    let count = m.basis_count();
    let malformed = SweepViolation {
        condition: SweepCondition::Malformed,
        position: 0,
    };
    if s.order.len() != count || s.witnesses.len() != count {
        return Some(malformed);
    }
    let mut seen = vec![false; count];
    for &b in s.order.as_slice() {
        if b >= count || std::mem::replace(&mut seen[b], true) {
            return Some(malformed);
        }
    }
    let base = s.base_vertex();
    let weights: Vec<Vec<Rational>> = s.witnesses.iter().map(|l| l.weights(m)).collect();
    let violation = |condition, failing: &dyn Fn(usize) -> bool| {
        (0..count).find(|&k| failing(k)).map(|position| SweepViolation { condition, position })
    };
    let pinned_fails = |k: usize| {
        let w = &weights[k];
        (0..count).any(|b| b != base && w[b] <= w[base])
    };
    let cut_fails = |k: usize| {
        let w = &weights[k];
        let pivot = &w[s.order.0[k]];
        let below = (0..count).filter(|&b| w[b] <= *pivot).count();
        below != k + 1 || s.order.0[..=k].iter().any(|&b| w[b] > *pivot)
    };
    let generic_fails = |k: usize| !s.regions[k].is_generic();
    if pinned {
        if let Some(v) = violation(SweepCondition::Pinned, &pinned_fails) {
            return Some(v);
        }
    }
    violation(SweepCondition::Cut, &cut_fails).or_else(|| violation(SweepCondition::Generic, &generic_fails))
}

/// Checks pinnedness, the cut conditions and genericity. Reports the
/// lowest-numbered failing condition at its first position.
pub fn validate_sweep(m: &Matroid, s: &Sweep) -> Option<SweepViolation> {
    check_conditions(m, s, true)
}

/// Like [`validate_sweep`] but without pinnedness.
pub fn validate_broken_line(m: &Matroid, s: &Sweep) -> Option<SweepViolation> {
    check_conditions(m, s, false)
}

/// Restriction sets of a broken-line sweep read off as internally passive
/// sets under each witness, cross-checked against the face intervals.
pub fn sweep_restriction_sets(m: &Matroid, s: &Sweep) -> Result<RestrictionSets, SweepError> {
    if let Some(v) = validate_broken_line(m, s) {
        return Err(SweepError::InvalidSweep(v));
    }
    let direct = restriction_sets(m, &s.order)?;
    for (position, (&b, l)) in s.order.as_slice().iter().zip(&s.witnesses).enumerate() {
        let ip = internally_passive_set(m, &GroundOrder::from_functional(l), m.basis(b))?;
        if ip != direct.sets[position] {
            return Err(SweepError::WitnessMismatch {
                position,
                direct: direct.sets[position],
                ip,
            });
        }
    }
    Ok(direct)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub vfav: ElementSet,
    /// 1-indexed positions at which new witnesses are drawn.
    pub pivots: Vec<usize>,
    pub limit: usize,
    pub misses: usize,
    pub w: Rational,
    pub seed: u64,
    pub initial: Option<Functional>,
    /// Replace a tied initial functional by its lexicographic perturbation.
    pub perturb_ties: bool,
}

impl SearchParams {
    pub fn new(vfav: ElementSet) -> Self {
        SearchParams {
            vfav,
            pivots: Vec::new(),
            limit: 3,
            misses: 50,
            w: Rational::from_integer(1.into()),
            seed: 0,
            initial: None,
            perturb_ties: false,
        }
    }

    /// Returns the basis index of `vfav`.
    pub fn validate(&self, m: &Matroid) -> Result<usize, SweepError> {
        let base = m.basis_index(self.vfav).ok_or(SweepError::NotABasis(self.vfav))?;
        let invalid = |msg: String| Err(SweepError::InvalidParams(msg));
        if self.limit == 0 {
            return invalid("limit must be at least 1".into());
        }
        if self.misses == 0 {
            return invalid("misses must be at least 1".into());
        }
        if self.w.is_negative() {
            return invalid("w must be nonnegative".into());
        }
        if self.pivots.windows(2).any(|p| p[0] >= p[1]) {
            return invalid(format!("pivots {:?} are not strictly increasing", self.pivots));
        }
        if let Some(&p) = self.pivots.iter().find(|&&p| p == 0 || p >= m.basis_count()) {
            return invalid(format!("pivot {p} outside 1..{}", m.basis_count() - 1));
        }
        if let Some(l) = &self.initial {
            l.check_len(m.ground_size())?;
        }
        Ok(base)
    }
}

/// Seeds an independent stream for a branch of the search tree.
pub fn branch_rng(seed: u64, path: &[usize]) -> ChaCha8Rng {
    let mut state = splitmix(seed);
    state = splitmix(state ^ path.len() as u64);
    for &p in path {
        state = splitmix(state ^ (p as u64).wrapping_add(0x9e37_79b9));
    }
    ChaCha8Rng::seed_from_u64(state)
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn check_pinned(m: &Matroid, base: usize, l: &Functional) -> Result<(), SweepError> {
    if let Some((i, j)) = first_tie(m, l) {
        return Err(SweepError::NonGenericFunctional {
            first: m.basis(i),
            second: m.basis(j),
        });
    }
    match unique_minimizer(m, l) {
        Some(b) if b == base => Ok(()),
        Some(b) => Err(SweepError::InitialNotPinned { minimizer: m.basis(b) }),
        None => unreachable!("generic functionals have a unique minimizer"),
    }
}

/// The supplied initial functional after validation, or a sampled one
/// with coordinates `k / INITIAL_BOX` in `[-1, 1]` that is generic and
/// minimized at `vfav`. Pivot coefficients live in `(0, 1)`, so both terms
/// of a pivot candidate are on the same scale.
///
/// A random functional lands in the normal cone of one vertex among
/// `basis_count`, so sampling is allowed `misses * basis_count` draws.
pub fn initial_functional(m: &Matroid, params: &SearchParams) -> Result<Functional, SweepError> {
    let base = params.validate(m)?;
    if let Some(l) = &params.initial {
        let l = if params.perturb_ties {
            perturb_lexicographic(m, l)
        } else {
            l.clone()
        };
        check_pinned(m, base, &l)?;
        return Ok(l);
    }
    let mut rng = branch_rng(params.seed, &[]);
    let attempts = params.misses.saturating_mul(m.basis_count());
    for _ in 0..attempts {
        let values: Vec<i64> = (0..m.ground_size())
            .map(|_| rng.random_range(-INITIAL_BOX..=INITIAL_BOX))
            .collect();
        let l = Functional::new(
            values
                .into_iter()
                .map(|v| Rational::new(BigInt::from(v), BigInt::from(INITIAL_BOX)))
                .collect(),
        );
        if check_pinned(m, base, &l).is_ok() {
            return Ok(l);
        }
    }
    Err(SweepError::ExhaustedMisses { attempts })
}

/// Draws new witnesses for position `prefix.len()` of a partial sweep whose
/// placed bases are `prefix` and whose current witness is `current`.
///
/// A candidate `w * current + sum_i c_i (v_i - v_1)` is kept when it is
/// generic, minimized at the base vertex, keeps `prefix` strictly below the
/// other bases, and lies in a region not already kept. Every other draw,
/// duplicates included, is a miss.
pub fn pivot_candidates(
    m: &Matroid,
    prefix: &[usize],
    current: &Functional,
    params: &SearchParams,
    rng: &mut impl Rng,
) -> Vec<Functional> {
    let base = prefix[0];
    let base_set = m.basis(base);
    let n = m.ground_size();
    let denominator = BigInt::from(COEFFICIENT_DENOMINATOR);
    let carried = current.scaled(&params.w);
    let mut placed = vec![false; m.basis_count()];
    for &b in prefix {
        placed[b] = true;
    }
    let mut accepted = Vec::new();
    let mut regions: HashSet<SignVector> = HashSet::new();
    let mut misses = 0;
    while accepted.len() < params.limit && misses < params.misses {
        let mut numerators = vec![0i64; n];
        let mut total = 0i64;
        for (i, b) in m.bases().iter().enumerate() {
            if i == base {
                continue;
            }
            let c = rng.random_range(1..COEFFICIENT_DENOMINATOR);
            total += c;
            for e in b.iter() {
                numerators[e] += c;
            }
        }
        for e in base_set.iter() {
            numerators[e] -= total;
        }
        let coords = carried
            .coords()
            .iter()
            .zip(&numerators)
            .map(|(x, &num)| x + Rational::new(BigInt::from(num), denominator.clone()))
            .collect();
        let candidate = Functional::new(coords);
        let region = sign_vector(m, &candidate);
        let weights = candidate.weights(m);
        let pinned = (0..weights.len()).all(|b| b == base || weights[b] > weights[base]);
        let cut = {
            let high = prefix.iter().map(|&b| &weights[b]).max().expect("nonempty prefix");
            (0..weights.len()).all(|b| placed[b] || weights[b] > *high)
        };
        if region.is_generic() && pinned && cut && regions.insert(region) {
            accepted.push(candidate);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    accepted
}

/// A stored sweep with its derived restriction sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredSweep {
    pub sweep: Sweep,
    pub restriction: RestrictionSets,
    pub region_hash: String,
}

/// Sweeps kept across searches, deduplicated by their region sequences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultStore {
    sweeps: Vec<StoredSweep>,
    hashes: HashSet<String>,
}

impl ResultStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sweeps(&self) -> &[StoredSweep] {
        &self.sweeps
    }

    pub fn len(&self) -> usize {
        self.sweeps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sweeps.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&StoredSweep> {
        self.sweeps.get(id)
    }

    fn contains_regions(&self, sweep: &Sweep, hash: &str) -> bool {
        self.hashes.contains(hash) && self.sweeps.iter().any(|s| s.sweep.regions == sweep.regions)
    }

    /// Validates and inserts a sweep. Returns false for an invalid or
    /// already stored sweep.
    pub fn insert(&mut self, m: &Matroid, sweep: Sweep) -> Result<bool, SweepError> {
        let region_hash = sweep.region_hash();
        if self.contains_regions(&sweep, &region_hash) {
            return Ok(false);
        }
        if let Some(v) = validate_sweep(m, &sweep) {
            return Err(SweepError::InvalidSweep(v));
        }
        let restriction = sweep_restriction_sets(m, &sweep)?;
        self.hashes.insert(region_hash.clone());
        self.sweeps.push(StoredSweep {
            sweep,
            restriction,
            region_hash,
        });
        Ok(true)
    }

    /// Adds every sweep of `other` not already present; returns how many
    /// were added.
    pub fn merge(&mut self, m: &Matroid, other: ResultStore) -> Result<usize, SweepError> {
        let mut added = 0;
        for s in other.sweeps {
            added += usize::from(self.insert(m, s.sweep)?);
        }
        Ok(added)
    }

    /// Groups stored sweeps by their exact family of restriction sets,
    /// keyed by `(basis, restriction set)` pairs sorted by basis.
    pub fn distinct_families(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<(Vec<(usize, ElementSet)>, Vec<usize>)> = Vec::new();
        for (id, s) in self.sweeps.iter().enumerate() {
            let mut family: Vec<(usize, ElementSet)> =
                s.restriction.order.iter().copied().zip(s.restriction.sets.iter().copied()).collect();
            family.sort();
            match groups.iter_mut().find(|g| g.0 == family) {
                Some(g) => g.1.push(id),
                None => groups.push((family, vec![id])),
            }
        }
        groups.into_iter().map(|g| g.1).collect()
    }
}

/// Depth-first search over pivot branches. Each completed sweep is merged
/// into `store`; positions without a pivot copy the witness forward, and a
/// pivot with no admissible candidate does the same.
pub fn run_search(m: &Matroid, params: &SearchParams, store: ResultStore) -> Result<ResultStore, SweepError> {
    let initial = initial_functional(m, params)?;
    let base = params.validate(m)?;
    let mut store = store;
    let mut search = Search {
        m,
        params,
        store: &mut store,
    };
    search.descend(vec![base], vec![initial], &mut Vec::new())?;
    Ok(store)
}

struct Search<'a> {
    m: &'a Matroid,
    params: &'a SearchParams,
    store: &'a mut ResultStore,
}

impl Search<'_> {
    fn descend(&mut self, prefix: Vec<usize>, witnesses: Vec<Functional>, path: &mut Vec<usize>) -> Result<(), SweepError> {
        let count = self.m.basis_count();
        let position = prefix.len();
        if position == count {
            let sweep = Sweep::new(self.m, FacetOrder(prefix), witnesses)?;
            self.store.insert(self.m, sweep)?;
            return Ok(());
        }
        let current = witnesses.last().expect("initial witness").clone();
        let choices = if self.params.pivots.contains(&position) {
            let mut rng = branch_rng(self.params.seed, path);
            let found = pivot_candidates(self.m, &prefix, &current, self.params, &mut rng);
            if found.is_empty() {
                vec![current]
            } else {
                found
            }
        } else {
            vec![current]
        };
        for (branch, l) in choices.into_iter().enumerate() {
            let next = next_vertex(self.m, &prefix, &l);
            let mut p = prefix.clone();
            p.push(next);
            let mut w = witnesses.clone();
            w.push(l);
            path.push(branch);
            self.descend(p, w, path)?;
            path.pop();
        }
        Ok(())
    }
}

fn next_vertex(m: &Matroid, prefix: &[usize], l: &Functional) -> usize {
    let mut placed = vec![false; m.basis_count()];
    for &b in prefix {
        placed[b] = true;
    }
    (0..m.basis_count())
        .filter(|&b| !placed[b])
        .min_by(|&a, &b| l.weight(m.basis(a)).cmp(&l.weight(m.basis(b))))
        .expect("a remaining basis")
}

/// True when `l` has the same sign pattern as `l` scaled by `factor > 0`.
pub fn scaling_preserves_region(m: &Matroid, l: &Functional, factor: &Rational) -> bool {
    assert!(factor.is_positive() && !factor.is_zero());
    sign_vector(m, l) == sign_vector(m, &l.scaled(factor))
}
