//! Monomial labelings of restriction-set posets by pure multicomplexes,
//! and the h-vector decomposition over a basis.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, HVector, Matroid, MatroidError};
use crate::poset::{check_structure, RestrictionPoset};

/// Largest poset accepted by [`find_pure_labeling`].
pub const LABELING_MAX: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MulticomplexError {
    #[error("poset has {size} elements, more than {max}")]
    TooLarge { size: usize, max: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// An exponent vector over the variables `a, b, c, ..`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn times_variable(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// Divisors of one degree less, one per variable present.
    pub fn maximal_divisors(&self) -> Vec<Monomial> {
        (0..self.0.len())
            .filter(|&i| self.0[i] > 0)
            .map(|i| {
                let mut e = self.0.clone();
                e[i] -= 1;
                Monomial(e)
            })
            .collect()
    }

    /// Parses `1`, `a`, `ab^2`, `a^2c` over `vars` variables.
    pub fn parse(text: &str, vars: usize) -> Option<Monomial> {
        let mut e = vec![0u32; vars];
        let text = text.trim();
        if text == "1" {
            return Some(Monomial(e));
        }
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let i = (c as usize).checked_sub('a' as usize).filter(|&i| i < vars && i < 26)?;
            let mut power = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                power = digits.parse().ok()?;
            }
            e[i] += power;
        }
        Some(Monomial(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        for (i, &p) in self.0.iter().enumerate() {
            if p == 0 {
                continue;
            }
            if i < 26 {
                write!(f, "{}", (b'a' + i as u8) as char)?;
            } else {
                write!(f, "x{i}")?;
            }
            if p > 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

/// A monomial for every poset element, indexed like the poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialLabeling {
    pub labels: Vec<Monomial>,
}

impl MonomialLabeling {
    pub fn variable_count(&self) -> usize {
        self.labels.first().map_or(0, |m| m.0.len())
    }

    /// Multiset of label degrees as a histogram.
    pub fn degree_histogram(&self) -> Vec<u64> {
        HVector::from_sizes(self.labels.iter().map(|m| m.degree() as usize), 0).0
    }

    pub fn to_json(&self) -> Vec<LabelJson> {
        self.labels
            .iter()
            .enumerate()
            .map(|(position, m)| LabelJson {
                position,
                exponents: m.0.clone(),
                monomial: m.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelJson {
    pub position: usize,
    pub exponents: Vec<u32>,
    pub monomial: String,
}

/// Why no labeling exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoLabeling {
    /// Some cover does not raise the restriction-set size by one.
    NotGraded,
    /// No element with an empty restriction set.
    NoBottom,
    /// Maximal elements below the top rank.
    NotPure { maximal: Vec<usize> },
    /// No degree-`rank` monomial has exactly the lower-cover labels of
    /// `first` as its maximal divisors; `blocked` lists every element of
    /// that rank in the same situation.
    Blocked { first: usize, rank: usize, blocked: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LabelingOutcome {
    Labeling { labeling: MonomialLabeling },
    NoLabeling { certificate: NoLabeling },
}

impl LabelingOutcome {
    pub fn labeling(&self) -> Option<&MonomialLabeling> {
        match self {
            LabelingOutcome::Labeling { labeling } => Some(labeling),
            LabelingOutcome::NoLabeling { .. } => None,
        }
    }
}

/// Searches for a labeling of `p` by a pure multicomplex.
///
/// The atoms receive the variables in position order; every variable must
/// label an atom because the labels are closed under division. A rank-`k`
/// element then needs a degree-`k` monomial whose maximal divisors are
/// exactly the labels of its lower covers. With two or more lower covers
/// that monomial is their lcm, and with one it is a pure power, so the
/// search is a single pass with the backtracking frame kept for clarity of
/// failure reporting.
pub fn find_pure_labeling(p: &RestrictionPoset) -> Result<LabelingOutcome, MulticomplexError> {
    if p.len() > LABELING_MAX {
        return Err(MulticomplexError::TooLarge {
            size: p.len(),
            max: LABELING_MAX,
        });
    }
    let no = |certificate| Ok(LabelingOutcome::NoLabeling { certificate });
    let report = check_structure(p);
    if !report.graded {
        return no(NoLabeling::NotGraded);
    }
    let Some(bottom) = p.bottom() else {
        return no(NoLabeling::NoBottom);
    };
    let top_rank = report.maximal_ranks.last().copied().unwrap_or(0);
    let low: Vec<usize> = p.maximal().into_iter().filter(|&i| p.rank(i) < top_rank).collect();
    if !low.is_empty() {
        return no(NoLabeling::NotPure { maximal: low });
    }

    let atoms: Vec<usize> = (0..p.len()).filter(|&i| p.rank(i) == 1).collect();
    let vars = atoms.len();
    let mut labels: Vec<Option<Monomial>> = vec![None; p.len()];
    let mut used: HashMap<Monomial, usize> = HashMap::new();
    labels[bottom] = Some(Monomial::one(vars));
    used.insert(Monomial::one(vars), bottom);
    for (v, &a) in atoms.iter().enumerate() {
        labels[a] = Some(Monomial::variable(vars, v));
        used.insert(Monomial::variable(vars, v), a);
    }
    for rank in 2..=top_rank {
        let level: Vec<usize> = (0..p.len()).filter(|&i| p.rank(i) == rank).collect();
        let mut blocked = Vec::new();
        for &x in &level {
            match candidate(p, &labels, x, &used) {
                Some(m) if blocked.is_empty() => {
                    used.insert(m.clone(), x);
                    labels[x] = Some(m);
                }
                Some(_) => {}
                None => blocked.push(x),
            }
        }
        if let Some(&first) = blocked.first() {
            // the rest of the level, judged against the labels placed so far
            let blocked: Vec<usize> = level
                .iter()
                .copied()
                .filter(|&x| labels[x].is_none() && candidate(p, &labels, x, &used).is_none())
                .chain(std::iter::once(first))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            return no(NoLabeling::Blocked { first, rank, blocked });
        }
    }
    Ok(LabelingOutcome::Labeling {
        labeling: MonomialLabeling {
            labels: labels.into_iter().map(|m| m.expect("every rank labeled")).collect(),
        },
    })
}

/// The unique unused monomial whose maximal divisors are the lower-cover
/// labels of `x`, if any.
fn candidate(
    p: &RestrictionPoset,
    labels: &[Option<Monomial>],
    x: usize,
    used: &HashMap<Monomial, usize>,
) -> Option<Monomial> {
    let mut below: Vec<Monomial> = p
        .lower_covers(x)
        .iter()
        .map(|&c| labels[c].clone().expect("lower ranks labeled"))
        .collect();
    below.sort();
    below.dedup();
    let first = below.first()?;
    (0..first.0.len())
        .map(|i| first.times_variable(i))
        .find(|m| {
            let mut divisors = m.maximal_divisors();
            divisors.sort();
            divisors == below && !used.contains_key(m)
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelingViolation {
    WrongSize { expected: usize, got: usize },
    MixedVariableCounts { element: usize },
    NotInjective { first: usize, second: usize },
    BottomNotOne { element: usize },
    WrongDegree { element: usize },
    /// Comparability and divisibility disagree on this pair.
    OrderMismatch { lower: usize, upper: usize },
    /// A divisor of this label is not a label.
    NotClosed { element: usize, divisor: Monomial },
    /// Maximal labels of different degrees.
    NotPure { element: usize },
}

/// Rechecks every labeling condition from scratch and names the first
/// violation.
pub fn verify_labeling(p: &RestrictionPoset, labeling: &MonomialLabeling) -> Option<LabelingViolation> {
    let labels = &labeling.labels;
    if labels.len() != p.len() {
        return Some(LabelingViolation::WrongSize {
            expected: p.len(),
            got: labels.len(),
        });
    }
    let vars = labeling.variable_count();
    if let Some(element) = labels.iter().position(|m| m.0.len() != vars) {
        return Some(LabelingViolation::MixedVariableCounts { element });
    }
    let mut seen: HashMap<&Monomial, usize> = HashMap::new();
    for (i, m) in labels.iter().enumerate() {
        if let Some(&first) = seen.get(m) {
            return Some(LabelingViolation::NotInjective { first, second: i });
        }
        seen.insert(m, i);
    }
    for (i, m) in labels.iter().enumerate() {
        if p.set(i).is_empty() && m.degree() != 0 {
            return Some(LabelingViolation::BottomNotOne { element: i });
        }
        if m.degree() as usize != p.rank(i) {
            return Some(LabelingViolation::WrongDegree { element: i });
        }
    }
    for a in 0..p.len() {
        for b in 0..p.len() {
            if p.leq(a, b) != labels[a].divides(&labels[b]) {
                return Some(LabelingViolation::OrderMismatch { lower: a, upper: b });
            }
        }
    }
    for (i, m) in labels.iter().enumerate() {
        if let Some(d) = m.maximal_divisors().into_iter().find(|d| !seen.contains_key(d)) {
            return Some(LabelingViolation::NotClosed { element: i, divisor: d });
        }
    }
    let maximal: Vec<usize> = (0..labels.len())
        .filter(|&i| (0..labels.len()).all(|j| j == i || !labels[i].divides(&labels[j])))
        .collect();
    let top = maximal.iter().map(|&i| labels[i].degree()).max();
    maximal
        .into_iter()
        .find(|&i| Some(labels[i].degree()) != top)
        .map(|element| LabelingViolation::NotPure { element })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HTerm {
    /// The independent set `I`, disjoint from the basis.
    pub independent: Vec<usize>,
    /// h-vector of `(M / I) | B`.
    pub minor_h: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HDecomposition {
    pub holds: bool,
    pub terms: Vec<HTerm>,
    /// `sum_I t^|I| h((M / I) | B, t)`, trailing zeros trimmed.
    pub total: Vec<u64>,
    /// `h(M)`, trailing zeros trimmed.
    pub expected: Vec<u64>,
}

/// Checks `h(M, t) = sum_{I independent, I disjoint from B} t^|I| h((M/I)|B, t)`.
pub fn h_decomposition_identity(m: &Matroid, basis: ElementSet) -> Result<HDecomposition, MulticomplexError> {
    if !m.is_basis(basis) {
        return Err(MatroidError::NotABasis(basis).into());
    }
    let mut total: Vec<u64> = Vec::new();
    let mut terms = Vec::new();
    for i in m.independent_sets().into_iter().filter(|i| i.is_disjoint(basis)) {
        let minor = m.minor(i, basis)?;
        let h = minor.matroid.h_vector().0;
        let shift = i.len();
        if total.len() < shift + h.len() {
            total.resize(shift + h.len(), 0);
        }
        for (k, c) in h.iter().enumerate() {
            total[shift + k] += c;
        }
        terms.push(HTerm {
            independent: i.to_vec(),
            minor_h: h,
        });
    }
    let total = HVector(total).trimmed();
    let expected = m.h_vector().trimmed();
    Ok(HDecomposition {
        holds: total == expected,
        terms,
        total,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poset::build_poset;
    use crate::shelling::{restriction_sets, FacetOrder, RestrictionSets};

    fn set(e: &[usize]) -> ElementSet {
        ElementSet::from_elements(e.iter().copied())
    }

    fn catalan_sweep_poset() -> RestrictionPoset {
        let m = Matroid::catalan(3).unwrap();
        build_poset(&fixtures::catalan_pivot_sweep().restriction_sets(&m)).unwrap()
    }

    #[test]
    fn monomial_text() {
        let m = Monomial::parse("ab^2", 3).unwrap();
        assert_eq!(m, Monomial(vec![1, 2, 0]));
        assert_eq!(m.to_string(), "ab^2");
        assert_eq!(Monomial::parse("1", 2).unwrap().to_string(), "1");
        assert_eq!(Monomial::parse("a^2c", 3).unwrap().to_string(), "a^2c");
        assert!(Monomial::parse("d", 3).is_none());
    }

    #[test]
    fn catalan_sweep_labeling_matches_expected() {
        let p = catalan_sweep_poset();
        let outcome = find_pure_labeling(&p).unwrap();
        let labeling = outcome.labeling().expect("labeling exists");
        assert_eq!(verify_labeling(&p, labeling), None);
        for (r, text) in fixtures::catalan_sweep_labels() {
            let i = p.position_of_set(set(&r)).unwrap();
            assert_eq!(labeling.labels[i].to_string(), text, "{r:?}");
        }
        assert_eq!(labeling.degree_histogram(), fixtures::catalan_h_vector());
    }

    #[test]
    fn graphic_line_poset_has_no_labeling() {
        let m = fixtures::graphic_matroid();
        let p = build_poset(&RestrictionSets::from_table(&m, &fixtures::graphic_line_table()).unwrap()).unwrap();
        match find_pure_labeling(&p).unwrap() {
            LabelingOutcome::NoLabeling {
                certificate: NoLabeling::Blocked { first, rank, blocked },
            } => {
                assert_eq!(p.set(first), set(&[1, 3, 5]));
                assert_eq!(rank, 3);
                assert!(blocked.contains(&11) && blocked.contains(&12));
            }
            other => panic!("expected a blocked certificate, got {other:?}"),
        }
    }

    #[test]
    fn tampered_labelings_are_rejected() {
        let p = catalan_sweep_poset();
        let mut labeling = find_pure_labeling(&p).unwrap().labeling().unwrap().clone();
        let i = p.position_of_set(set(&[0, 3, 5])).unwrap();
        let a2 = p.position_of_set(set(&[1, 3])).unwrap();
        labeling.labels[i] = Monomial::parse("a^2b", 3).unwrap();
        assert_eq!(
            verify_labeling(&p, &labeling),
            Some(LabelingViolation::OrderMismatch { lower: a2, upper: i })
        );
        let mut dup = find_pure_labeling(&p).unwrap().labeling().unwrap().clone();
        dup.labels[2] = dup.labels[1].clone();
        assert_eq!(
            verify_labeling(&p, &dup),
            Some(LabelingViolation::NotInjective { first: 1, second: 2 })
        );
    }

    #[test]
    fn two_element_chain() {
        let m = Matroid::uniform(2, 1).unwrap();
        let p = build_poset(&restriction_sets(&m, &FacetOrder(vec![0, 1])).unwrap()).unwrap();
        let labeling = find_pure_labeling(&p).unwrap().labeling().unwrap().clone();
        let text: Vec<String> = labeling.labels.iter().map(|l| l.to_string()).collect();
        assert_eq!(text, vec!["1", "a"]);
    }

    #[test]
    fn non_graded_poset_has_no_labeling() {
        let m = Matroid::uniform(4, 2).unwrap();
        let rs = restriction_sets(&m, fixtures::unpinned_broken_line(&m).order()).unwrap();
        let p = build_poset(&rs).unwrap();
        if !check_structure(&p).graded {
            assert_eq!(
                find_pure_labeling(&p).unwrap(),
                LabelingOutcome::NoLabeling {
                    certificate: NoLabeling::NotGraded
                }
            );
        }
        let rs = RestrictionSets::from_table(
            &m,
            &[(vec![0, 1], vec![]), (vec![0, 2], vec![2]), (vec![1, 2], vec![1, 2]), (vec![0, 3], vec![3])],
        )
        .unwrap();
        let p = build_poset(&rs).unwrap();
        assert_eq!(
            find_pure_labeling(&p).unwrap(),
            LabelingOutcome::NoLabeling {
                certificate: NoLabeling::NotPure { maximal: vec![3] }
            }
        );
        let skip = RestrictionSets::from_table(&m, &[(vec![0, 1], vec![]), (vec![1, 2], vec![1, 2])]).unwrap();
        assert_eq!(
            find_pure_labeling(&build_poset(&skip).unwrap()).unwrap(),
            LabelingOutcome::NoLabeling {
                certificate: NoLabeling::NotGraded
            }
        );
    }

    /// h-vector of a minor computed independently from its independent sets.
    fn direct_h(m: &Matroid) -> Vec<u64> {
        let r = m.rank() as i64;
        let f = m.f_vector();
        (0..=r)
            .map(|i| {
                (0..=i)
                    .map(|j| {
                        let c = binom(r - j, i - j);
                        let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                        sign * c * f[j as usize] as i64
                    })
                    .sum::<i64>() as u64
            })
            .collect()
    }

    fn binom(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn decomposition_for_u42() {
        let m = Matroid::uniform(4, 2).unwrap();
        let d = h_decomposition_identity(&m, set(&[0, 1])).unwrap();
        assert!(d.holds);
        assert_eq!(d.total, vec![1, 2, 3]);
        let by_set: HashMap<Vec<usize>, Vec<u64>> =
            d.terms.iter().map(|t| (t.independent.clone(), t.minor_h.clone())).collect();
        assert_eq!(by_set[&vec![]], vec![1, 0, 0]);
        assert_eq!(by_set[&vec![2]], vec![1, 1]);
        assert_eq!(by_set[&vec![3]], vec![1, 1]);
        assert_eq!(by_set[&vec![2, 3]], vec![1]);
        for t in &d.terms {
            let minor = m.minor(ElementSet::from_elements(t.independent.iter().copied()), set(&[0, 1])).unwrap();
            assert_eq!(direct_h(&minor.matroid), t.minor_h);
        }
        assert!(matches!(
            h_decomposition_identity(&m, set(&[0])),
            Err(MulticomplexError::Matroid(MatroidError::NotABasis(_)))
        ));
    }

    #[test]
    fn decomposition_for_fixtures() {
        let g = fixtures::graphic_matroid();
        let d = h_decomposition_identity(&g, set(&[0, 1, 2])).unwrap();
        assert!(d.holds);
        assert_eq!(d.total, vec![1, 3, 5, 4]);
        let rank0 = Matroid::from_sets(2, vec![ElementSet::EMPTY]).unwrap();
        let d = h_decomposition_identity(&rank0, ElementSet::EMPTY).unwrap();
        assert!(d.holds);
        assert_eq!(d.total, vec![1]);
    }
}
