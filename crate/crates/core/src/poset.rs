//! Restriction-set posets, their structure, Gale orders and isomorphism.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid};
use crate::polytope::vertices_and_graph;
use crate::shelling::{internally_passive_set, is_shelling, FacetOrder, GroundOrder, RestrictionSets};
use crate::sweep::branch_rng;

/// Largest poset accepted by [`poset_isomorphic`].
pub const ISOMORPHISM_MAX: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("positions {first} and {second} share the restriction set {set}")]
    DuplicateRestrictionSets { first: usize, second: usize, set: ElementSet },
    #[error("poset has {size} elements, more than {max}")]
    TooLarge { size: usize, max: usize },
    #[error("orientation has a cycle through basis {0}")]
    CyclicOrientation(usize),
    #[error("order does not list every basis exactly once")]
    BadOrder,
}

/// Bases ordered by containment of their restriction sets. Node `i` is the
/// basis at position `i` of the originating order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionPoset {
    source: RestrictionSets,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

pub fn build_poset(rs: &RestrictionSets) -> Result<RestrictionPoset, PosetError> {
    let mut seen: HashMap<ElementSet, usize> = HashMap::new();
    for (i, &s) in rs.sets.iter().enumerate() {
        if let Some(&first) = seen.get(&s) {
            return Err(PosetError::DuplicateRestrictionSets { first, second: i, set: s });
        }
        seen.insert(s, i);
    }
    let k = rs.sets.len();
    let less = |a: usize, b: usize| a != b && rs.sets[a].is_subset(rs.sets[b]);
    let mut covers = Vec::new();
    let mut up = vec![Vec::new(); k];
    let mut down = vec![Vec::new(); k];
    for a in 0..k {
        for b in 0..k {
            if less(a, b) && !(0..k).any(|c| less(a, c) && less(c, b)) {
                covers.push((a, b));
                up[a].push(b);
                down[b].push(a);
            }
        }
    }
    Ok(RestrictionPoset {
        source: rs.clone(),
        covers,
        up,
        down,
    })
}

impl RestrictionPoset {
    pub fn len(&self) -> usize {
        self.source.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.sets.is_empty()
    }

    pub fn restriction_sets(&self) -> &RestrictionSets {
        &self.source
    }

    pub fn set(&self, i: usize) -> ElementSet {
        self.source.sets[i]
    }

    pub fn basis(&self, i: usize) -> ElementSet {
        self.source.facets[i]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.source.sets[i].len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.source.sets[a].is_subset(self.source.sets[b])
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn bottom(&self) -> Option<usize> {
        self.source.sets.iter().position(|s| s.is_empty())
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn position_of_set(&self, set: ElementSet) -> Option<usize> {
        self.source.sets.iter().position(|&s| s == set)
    }

    /// Longest chain length from a minimal element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.rank(i));
        let mut h = vec![0; self.len()];
        for &i in &order {
            h[i] = self.down[i].iter().map(|&d| h[d] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Hasse diagram in DOT, nodes named by position in the order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  {i} [label=\"{i}\\n{}\"];", self.set(i));
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  {a} -> {b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            nodes: (0..self.len())
                .map(|i| PosetNode {
                    position: i,
                    basis: self.basis(i).to_vec(),
                    restriction: self.set(i).to_vec(),
                    rank: self.rank(i),
                })
                .collect(),
            covers: self.covers.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetNode {
    pub position: usize,
    pub basis: Vec<usize>,
    pub restriction: Vec<usize>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub nodes: Vec<PosetNode>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Every cover step raises the restriction-set size by one.
    pub graded: bool,
    /// The augmentation property of restriction sets.
    pub greedoid: bool,
    /// Every pair has a meet and a join once a top element is adjoined.
    pub lattice_after_top: bool,
    /// Every pair has a meet.
    pub meets_exist: bool,
    /// Every pair has a join without the adjoined top.
    pub joins_exist: bool,
    /// Atoms are the singletons of elements outside the first basis and
    /// not loops, one per such element.
    pub atoms_ok: bool,
    /// Ranks of the maximal elements, ascending.
    pub maximal_ranks: Vec<usize>,
}

pub fn check_structure(p: &RestrictionPoset) -> StructureReport {
    let k = p.len();
    let graded = p.covers.iter().all(|&(a, b)| p.rank(b) == p.rank(a) + 1);
    let sets: HashSet<ElementSet> = p.source.sets.iter().copied().collect();
    let greedoid = (0..k).all(|a| {
        (0..k).all(|b| {
            let (x, y) = (p.set(a), p.set(b));
            x.len() >= y.len() || y.difference(x).iter().any(|e| sets.contains(&x.with(e)))
        })
    });
    let meets_exist = all_pairs_have(p, Bound::Lower);
    let joins_exist = all_pairs_have(p, Bound::Upper);
    let mut maximal_ranks: Vec<usize> = p.maximal().iter().map(|&i| p.rank(i)).collect();
    maximal_ranks.sort_unstable();
    StructureReport {
        graded,
        greedoid,
        // joins in P + top are least upper bounds or the top itself; they
        // exist for every pair exactly when meets exist in P
        lattice_after_top: meets_exist && upper_bounds_have_least(p),
        meets_exist,
        joins_exist,
        atoms_ok: atoms_ok(p),
        maximal_ranks,
    }
}

#[derive(Clone, Copy)]
enum Bound {
    Lower,
    Upper,
}

fn extremal_bound(p: &RestrictionPoset, a: usize, b: usize, side: Bound) -> Option<Option<usize>> {
    let below = |x: usize, y: usize| p.leq(x, y);
    let bounds: Vec<usize> = (0..p.len())
        .filter(|&c| match side {
            Bound::Lower => below(c, a) && below(c, b),
            Bound::Upper => below(a, c) && below(b, c),
        })
        .collect();
    if bounds.is_empty() {
        return Some(None);
    }
    let best = bounds.iter().copied().find(|&c| {
        bounds.iter().all(|&d| match side {
            Bound::Lower => below(d, c),
            Bound::Upper => below(c, d),
        })
    });
    best.map(Some)
}

/// Every pair has a greatest lower bound (or least upper bound).
fn all_pairs_have(p: &RestrictionPoset, side: Bound) -> bool {
    (0..p.len()).all(|a| (a..p.len()).all(|b| matches!(extremal_bound(p, a, b, side), Some(Some(_)))))
}

/// Pairs with upper bounds have a least one (no bound means the top).
fn upper_bounds_have_least(p: &RestrictionPoset) -> bool {
    (0..p.len()).all(|a| (a..p.len()).all(|b| extremal_bound(p, a, b, Bound::Upper).is_some()))
}

fn atoms_ok(p: &RestrictionPoset) -> bool {
    let Some(bottom) = p.bottom() else {
        return p.is_empty();
    };
    let first = p.basis(bottom);
    let expected = ElementSet::full(p.source.ground_size)
        .difference(first)
        .difference(p.source.loops);
    let atoms = p.upper_covers(bottom);
    let mut covered = ElementSet::EMPTY;
    for &a in atoms {
        let s = p.set(a);
        if s.len() != 1 || !s.is_subset(expected) || !covered.is_disjoint(s) {
            return false;
        }
        covered = covered.union(s);
    }
    if covered != expected {
        return false;
    }
    // the atoms below B are exactly the singletons of B \ B_1
    (0..p.len()).all(|i| {
        let below: ElementSet = atoms
            .iter()
            .filter(|&&a| p.leq(a, i))
            .fold(ElementSet::EMPTY, |acc, &a| acc.union(p.set(a)));
        below == p.basis(i).difference(first)
    })
}

/// The orientation of the polytope graph along a facet order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleOrder {
    /// Arcs `(from, to)` between basis indices.
    pub arcs: Vec<(usize, usize)>,
    /// `reach[a]` lists the bases strictly above `a` in the transitive closure.
    reach: Vec<Vec<bool>>,
}

impl GaleOrder {
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.reach.len())
            .filter(|&v| self.arcs.iter().all(|&(_, to)| to != v))
            .collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.reach.len())
            .filter(|&v| self.arcs.iter().all(|&(from, _)| from != v))
            .collect()
    }

    /// True when `order` never places a basis before one below it.
    pub fn is_linear_extension(&self, order: &FacetOrder) -> bool {
        let mut pos = vec![usize::MAX; self.reach.len()];
        for (i, &b) in order.as_slice().iter().enumerate() {
            pos[b] = i;
        }
        self.arcs.iter().all(|&(a, b)| pos[a] < pos[b])
    }
}

/// Orients each edge of the polytope graph from the earlier basis to the
/// later one and closes transitively.
pub fn gale_order(m: &Matroid, order: &FacetOrder) -> Result<GaleOrder, PosetError> {
    let count = m.basis_count();
    let mut pos = vec![usize::MAX; count];
    for (i, &b) in order.as_slice().iter().enumerate() {
        if b >= count || pos[b] != usize::MAX {
            return Err(PosetError::BadOrder);
        }
        pos[b] = i;
    }
    if order.len() != count {
        return Err(PosetError::BadOrder);
    }
    let (_, graph) = vertices_and_graph(m);
    let arcs: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .map(|&(a, b)| if pos[a] < pos[b] { (a, b) } else { (b, a) })
        .collect();
    let mut succ = vec![Vec::new(); count];
    for &(a, b) in &arcs {
        succ[a].push(b);
    }
    let topo = topological_order(&succ)?;
    let mut reach = vec![vec![false; count]; count];
    for &v in topo.iter().rev() {
        for &w in &succ[v] {
            reach[v][w] = true;
            let row = reach[w].clone();
            for (x, &r) in row.iter().enumerate() {
                reach[v][x] |= r;
            }
        }
    }
    Ok(GaleOrder { arcs, reach })
}

fn topological_order(succ: &[Vec<usize>]) -> Result<Vec<usize>, PosetError> {
    let mut indegree = vec![0; succ.len()];
    for out in succ {
        for &w in out {
            indegree[w] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..succ.len()).filter(|&v| indegree[v] == 0).collect();
    let mut topo = Vec::with_capacity(succ.len());
    while let Some(v) = ready.pop() {
        topo.push(v);
        for &w in &succ[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    match (0..succ.len()).find(|&v| indegree[v] > 0) {
        Some(v) => Err(PosetError::CyclicOrientation(v)),
        None => Ok(topo),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearExtensionReport {
    pub trials: usize,
    /// A sampled linear extension that is not a shelling.
    pub counterexample: Option<FacetOrder>,
}

impl LinearExtensionReport {
    pub fn all_shell(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Samples linear extensions of the internally passive poset of `ground`
/// by repeatedly taking a random minimal basis, and checks each shells.
pub fn linear_extension_shelling_check(m: &Matroid, ground: &GroundOrder, trials: usize, seed: u64) -> LinearExtensionReport {
    let ip: Vec<ElementSet> = m
        .bases()
        .iter()
        .map(|&b| internally_passive_set(m, ground, b).expect("bases of m"))
        .collect();
    let mut rng = branch_rng(seed, &[usize::MAX]);
    for _ in 0..trials {
        let mut remaining: Vec<usize> = (0..m.basis_count()).collect();
        let mut order = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let minimal: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&b| !remaining.iter().any(|&c| c != b && ip[c].is_subset(ip[b])))
                .collect();
            let &pick = minimal.choose(&mut rng).expect("finite posets have minimal elements");
            remaining.retain(|&b| b != pick);
            order.push(pick);
        }
        let order = FacetOrder(order);
        if !is_shelling(m, &order).is_shelling() {
            return LinearExtensionReport {
                trials,
                counterexample: Some(order),
            };
        }
    }
    LinearExtensionReport {
        trials,
        counterexample: None,
    }
}

/// Exact isomorphism test by backtracking over elements partitioned by
/// height, number of elements below and above, and cover degrees.
pub fn poset_isomorphic(p: &RestrictionPoset, q: &RestrictionPoset) -> Result<bool, PosetError> {
    for x in [p, q] {
        if x.len() > ISOMORPHISM_MAX {
            return Err(PosetError::TooLarge {
                size: x.len(),
                max: ISOMORPHISM_MAX,
            });
        }
    }
    if p.len() != q.len() || p.covers.len() != q.covers.len() {
        return Ok(false);
    }
    let pi = invariants(p);
    let qi = invariants(q);
    let mut ps = pi.clone();
    let mut qs = qi.clone();
    ps.sort();
    qs.sort();
    if ps != qs {
        return Ok(false);
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (pi[i].0, i));
    let mut image = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    Ok(extend_map(p, q, &pi, &qi, &order, 0, &mut image, &mut used))
}

type Invariant = (usize, usize, usize, usize, usize);

fn invariants(p: &RestrictionPoset) -> Vec<Invariant> {
    let h = p.heights();
    (0..p.len())
        .map(|i| {
            let below = (0..p.len()).filter(|&j| p.leq(j, i)).count();
            let above = (0..p.len()).filter(|&j| p.leq(i, j)).count();
            (h[i], below, above, p.down[i].len(), p.up[i].len())
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn extend_map(
    p: &RestrictionPoset,
    q: &RestrictionPoset,
    pi: &[Invariant],
    qi: &[Invariant],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for y in 0..q.len() {
        if used[y] || pi[x] != qi[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&z| {
            let fz = image[z];
            p.leq(z, x) == q.leq(fz, y) && p.leq(x, z) == q.leq(y, fz)
        });
        if !consistent {
            continue;
        }
        image[x] = y;
        used[y] = true;
        if extend_map(p, q, pi, qi, order, depth + 1, image, used) {
            return true;
        }
        used[y] = false;
        image[x] = usize::MAX;
    }
    false
}
