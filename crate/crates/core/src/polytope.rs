//! Geometry of the matroid polytope: vertices, the exchange graph, exact
//! linear functionals, sign vectors against the arrangement of vertex
//! differences, and a brute-force face lattice for small ground sets.
//!
//! Every vertex satisfies `sum_e x_e = r`, so adding a multiple of the
//! all-ones vector to a functional shifts all vertex weights equally and never
//! changes a sign. Functionals are therefore used as-is, without projecting
//! out the all-ones direction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid};

/// Exact rational scalar.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("face lattice enumeration supports ground sets of at most {max} elements, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("cannot parse {0:?} as an exact rational")]
    BadNumber(String),
    #[error("functional has {got} coordinates, the ground set has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Parses `"-6.54"`, `"3/4"`, `"12"` or `"1e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, PolytopeError> {
    let bad = || PolytopeError::BadNumber(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Rounds to three significant digits and keeps trailing zeros: `1.00`,
/// `-6.54`, `0.880`, `-0.157`, `11.7`. Display only.
pub fn format_sig3(value: &Rational) -> String {
    if value.is_zero() {
        return "0.00".to_string();
    }
    let ten = Rational::from_integer(BigInt::from(10));
    let abs = value.abs();
    // exponent e with 10^e <= |x| < 10^(e+1)
    let mut e: i32 = 0;
    let pow = |k: i32| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            Rational::one() / num_traits::pow(ten.clone(), (-k) as usize)
        }
    };
    while abs >= pow(e + 1) {
        e += 1;
    }
    while abs < pow(e) {
        e -= 1;
    }
    let round_half_up = |x: Rational| -> BigInt {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        (x + half).floor().to_integer()
    };
    let mut digits = round_half_up(&abs * pow(2 - e));
    if digits >= BigInt::from(1000) {
        e += 1;
        digits = round_half_up(&abs * pow(2 - e));
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let d = digits.to_string();
    let body = if e >= 2 {
        let zeros = "0".repeat((e - 2) as usize);
        format!("{d}{zeros}")
    } else if e >= 0 {
        let split = (e + 1) as usize;
        format!("{}.{}", &d[..split], &d[split..])
    } else {
        let zeros = "0".repeat((-e - 1) as usize);
        format!("0.{zeros}{d}")
    };
    format!("{sign}{body}")
}

/// One coordinate of a serialized functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: IntJson,
    pub den: IntJson,
}

/// JSON integer, falling back to a decimal string beyond `i64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntJson {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for IntJson {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => IntJson::Small(x),
            None => IntJson::Big(v.to_string()),
        }
    }
}

impl IntJson {
    fn to_bigint(&self) -> Result<BigInt, PolytopeError> {
        match self {
            IntJson::Small(x) => Ok(BigInt::from(*x)),
            IntJson::Big(s) => BigInt::from_str(s).map_err(|_| PolytopeError::BadNumber(s.clone())),
        }
    }
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().into(),
            den: r.denom().into(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = PolytopeError;

    fn try_from(r: &RationalJson) -> Result<Self, PolytopeError> {
        let den = r.den.to_bigint()?;
        if den.is_zero() {
            return Err(PolytopeError::BadNumber("zero denominator".into()));
        }
        Ok(Rational::new(r.num.to_bigint()?, den))
    }
}

/// A linear functional on `R^E`, i.e. an exact weight per ground element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Functional {
    coords: Vec<Rational>,
}

impl Functional {
    pub fn new(coords: Vec<Rational>) -> Self {
        Functional { coords }
    }

    pub fn zero(n: usize) -> Self {
        Functional {
            coords: vec![Rational::zero(); n],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Functional {
            coords: values.iter().map(|&v| Rational::from_integer(v.into())).collect(),
        }
    }

    /// Parses each entry with [`parse_rational`], e.g. `["-6.54", "4.96"]`.
    pub fn parse<S: AsRef<str>>(values: &[S]) -> Result<Self, PolytopeError> {
        values
            .iter()
            .map(|v| parse_rational(v.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Functional::new)
    }

    /// Parses a comma-separated list such as `1,2,3` or `-6.54, 4.96`.
    pub fn parse_list(text: &str) -> Result<Self, PolytopeError> {
        let parts: Vec<&str> = text
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']'])
            .split(',')
            .collect();
        Self::parse(&parts)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn check_len(&self, n: usize) -> Result<(), PolytopeError> {
        if self.coords.len() == n {
            Ok(())
        } else {
            Err(PolytopeError::LengthMismatch {
                expected: n,
                got: self.coords.len(),
            })
        }
    }

    /// The weight `sum_{e in set} l(e)`, i.e. the value at the vertex `chi_set`.
    pub fn weight(&self, set: ElementSet) -> Rational {
        set.iter()
            .fold(Rational::zero(), |acc, e| acc + &self.coords[e])
    }

    pub fn weights(&self, m: &Matroid) -> Vec<Rational> {
        m.bases().iter().map(|b| self.weight(*b)).collect()
    }

    /// `self * factor`
    #[must_use]
    pub fn scaled(&self, factor: &Rational) -> Self {
        Functional::new(self.coords.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * (chi_to - chi_from)`
    #[must_use]
    pub fn plus_difference(&self, factor: &Rational, to: ElementSet, from: ElementSet) -> Self {
        let mut coords = self.coords.clone();
        for e in to.difference(from).iter() {
            coords[e] += factor;
        }
        for e in from.difference(to).iter() {
            coords[e] -= factor;
        }
        Functional::new(coords)
    }

    /// Ground elements sorted by increasing value, ties broken by index.
    pub fn element_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.coords.len()).collect();
        order.sort_by(|&a, &b| self.coords[a].cmp(&self.coords[b]).then(a.cmp(&b)));
        order
    }

    pub fn to_json(&self) -> Vec<RationalJson> {
        self.coords.iter().map(RationalJson::from).collect()
    }

    pub fn from_json(coords: &[RationalJson]) -> Result<Self, PolytopeError> {
        coords
            .iter()
            .map(Rational::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map(Functional::new)
    }

    /// `(1.00, 2.00, ...)` with three significant digits.
    pub fn display_sig3(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(format_sig3).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact form, e.g. `(-327/50, 124/25, 1)`.
impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Functional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coords = Vec::<RationalJson>::deserialize(d)?;
        Functional::from_json(&coords).map_err(serde::de::Error::custom)
    }
}

/// Sign of `l(B_i) - l(B_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    fn of(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

/// Index pairs `(i, j)` with `i < j` over `count` bases, in lexicographic
/// order. This is the fixed enumeration behind every [`SignVector`].
pub fn basis_pairs(count: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..count).flat_map(move |i| (i + 1..count).map(move |j| (i, j)))
}

/// The region of a functional in the arrangement of hyperplanes
/// `{l : l(v_i) = l(v_j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    signs: Vec<Sign>,
}

impl SignVector {
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn is_generic(&self) -> bool {
        !self.signs.contains(&Sign::Zero)
    }

    /// Position in the pair enumeration of the first zero entry.
    pub fn first_zero(&self) -> Option<usize> {
        self.signs.iter().position(|&s| s == Sign::Zero)
    }

    pub fn sign(&self, pair_index: usize) -> Sign {
        self.signs[pair_index]
    }

    /// The sign of the pair `(i, j)`, `i < j`, among `count` bases.
    pub fn sign_of(&self, count: usize, i: usize, j: usize) -> Sign {
        assert!(i < j && j < count);
        // pairs before row i: sum_{k<i} (count - 1 - k)
        let offset = i * (2 * count - i - 1) / 2;
        self.signs[offset + (j - i - 1)]
    }

    /// `+`, `-`, `0` characters in pair order.
    pub fn to_symbols(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

/// Signs of all pairwise weight differences under [`basis_pairs`].
pub fn sign_vector(m: &Matroid, l: &Functional) -> SignVector {
    let weights = l.weights(m);
    let signs = basis_pairs(weights.len())
        .map(|(i, j)| Sign::of(weights[i].cmp(&weights[j])))
        .collect();
    SignVector { signs }
}

/// The first tied basis pair under `l`, in the fixed pair enumeration.
pub fn first_tie(m: &Matroid, l: &Functional) -> Option<(usize, usize)> {
    let weights = l.weights(m);
    basis_pairs(weights.len()).find(|&(i, j)| weights[i] == weights[j])
}

/// The unique basis of smallest weight, or `None` on a tie at the minimum.
pub fn unique_minimizer(m: &Matroid, l: &Functional) -> Option<usize> {
    let weights = l.weights(m);
    let (best, min) = weights
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))?;
    (weights.iter().filter(|w| *w == min).count() == 1).then_some(best)
}

/// SHA-256 over a sequence of regions, hex encoded.
pub fn region_hash<'a, I: IntoIterator<Item = &'a SignVector>>(regions: I) -> String {
    let mut hasher = Sha256::new();
    for r in regions {
        hasher.update(r.to_symbols().as_bytes());
        hasher.update(b"|");
    }
    hex::encode(hasher.finalize())
}

/// The graph of the matroid polytope: bases adjacent iff they differ by a
/// single exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl PolytopeGraph {
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.node_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The 0/1 characteristic vector of a set.
pub fn characteristic_vector(set: ElementSet, n: usize) -> Vec<u8> {
    (0..n).map(|e| u8::from(set.contains(e))).collect()
}

/// Vertices (in basis order) and the edge graph of the matroid polytope.
pub fn vertices_and_graph(m: &Matroid) -> (Vec<Vec<u8>>, PolytopeGraph) {
    let vertices = m
        .bases()
        .iter()
        .map(|b| characteristic_vector(*b, m.ground_size()))
        .collect();
    let edges = basis_pairs(m.basis_count())
        .filter(|&(i, j)| m.basis(i).difference(m.basis(j)).len() == 1)
        .collect();
    (
        vertices,
        PolytopeGraph {
            node_count: m.basis_count(),
            edges,
        },
    )
}

/// Largest ground set accepted by [`face_lattice_oracle`].
pub const FACE_LATTICE_MAX_GROUND: usize = 8;

/// A set of polytope vertices (basis indices). With at most 8 ground
/// elements there are at most 70 bases, so 128 bits suffice.
pub type VertexSet = u128;

/// The face lattice of a matroid polytope, faces given by their vertex sets.
#[derive(Debug, Clone)]
pub struct FaceLattice {
    vertex_count: usize,
    /// Sorted by dimension, then by vertex bits. Index 0 is the empty face,
    /// the last index is the polytope itself.
    faces: Vec<VertexSet>,
    dims: Vec<i32>,
    /// `covers[i]` lists the faces covering face `i`.
    covers: Vec<Vec<usize>>,
    index: HashMap<VertexSet, usize>,
}

/// Cover relations of a face lattice, for export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceLatticeJson {
    pub faces: Vec<Vec<usize>>,
    pub dims: Vec<i32>,
    pub covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face(&self, i: usize) -> VertexSet {
        self.faces[i]
    }

    pub fn dim(&self, i: usize) -> i32 {
        self.dims[i]
    }

    pub fn covers_of(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn index_of(&self, face: VertexSet) -> Option<usize> {
        self.index.get(&face).copied()
    }

    pub fn polytope_dim(&self) -> i32 {
        *self.dims.last().unwrap()
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// `counts[d]` = number of faces of dimension `d`, for `d = 0..=dim P`.
    pub fn f_counts(&self) -> Vec<usize> {
        let top = self.polytope_dim().max(0) as usize;
        let mut counts = vec![0; top + 1];
        for &d in &self.dims {
            if d >= 0 {
                counts[d as usize] += 1;
            }
        }
        counts
    }

    /// Vertex sets of the faces of dimension `d`.
    pub fn faces_of_dim(&self, d: i32) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .zip(&self.dims)
            .filter(|(_, &fd)| fd == d)
            .map(|(&f, _)| vertex_list(f))
            .collect()
    }

    /// The smallest face containing both faces (their join).
    pub fn join(&self, a: usize, b: usize) -> usize {
        let union = self.faces[a] | self.faces[b];
        self.smallest_face_containing(union)
    }

    pub fn smallest_face_containing(&self, vertices: VertexSet) -> usize {
        // faces are sorted by dimension, and the faces containing a set form a
        // filter with a unique minimum
        self.faces
            .iter()
            .position(|&f| f & vertices == vertices)
            .expect("the polytope contains every vertex")
    }

    pub fn is_graded_lattice(&self) -> bool {
        let n = self.faces.len();
        let graded = (0..n).all(|i| self.covers[i].iter().all(|&j| self.dims[j] == self.dims[i] + 1));
        // meets are intersections and must be faces; joins exist by construction
        let meets = (0..n).all(|i| (0..n).all(|j| self.index.contains_key(&(self.faces[i] & self.faces[j]))));
        graded && meets
    }

    pub fn to_json(&self) -> FaceLatticeJson {
        FaceLatticeJson {
            faces: self.faces.iter().map(|&f| vertex_list(f)).collect(),
            dims: self.dims.clone(),
            covers: self
                .covers
                .iter()
                .enumerate()
                .flat_map(|(i, cs)| cs.iter().map(move |&j| (i, j)))
                .collect(),
        }
    }
}

pub fn vertex_list(set: VertexSet) -> Vec<usize> {
    (0..128).filter(|&i| set >> i & 1 == 1).collect()
}

/// Visits every ordered set partition of `0..n` as a block label per element
/// (`labels[e]` = block index, blocks numbered from 0 and all nonempty).
fn for_each_ordered_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    // set partitions as restricted growth strings, then every order of the blocks
    fn growth(rgs: &mut Vec<usize>, n: usize, blocks: usize, visit: &mut dyn FnMut(&[usize], usize)) {
        if rgs.len() == n {
            visit(rgs, blocks);
            return;
        }
        for b in 0..=blocks {
            rgs.push(b);
            growth(rgs, n, blocks.max(b + 1), visit);
            rgs.pop();
        }
    }
    fn permutations(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(perm);
            return;
        }
        for i in 0..k {
            permutations(perm, k - 1, visit);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut rgs = Vec::with_capacity(n);
    let mut labels = vec![0; n];
    growth(&mut rgs, n, 0, &mut |rgs, blocks| {
        let mut perm: Vec<usize> = (0..blocks).collect();
        permutations(&mut perm, blocks, &mut |perm| {
            for (label, &block) in labels.iter_mut().zip(rgs) {
                *label = perm[block];
            }
            visit(&labels);
        });
    });
}

/// Complete face lattice of `P_M` from the braid arrangement: every cell of
/// the braid fan lies in one normal cone, so the maximizing vertex sets of
/// one representative functional per ordered partition are exactly the
/// nonempty faces.
pub fn face_lattice_oracle(m: &Matroid) -> Result<FaceLattice, PolytopeError> {
    let n = m.ground_size();
    if n > FACE_LATTICE_MAX_GROUND {
        return Err(PolytopeError::TooLarge {
            n,
            max: FACE_LATTICE_MAX_GROUND,
        });
    }
    let bases = m.bases();
    let mut found: BTreeMap<VertexSet, ()> = BTreeMap::new();
    for_each_ordered_partition(n, |labels| {
        let weight = |b: ElementSet| b.iter().map(|e| labels[e]).sum::<usize>();
        let best = bases.iter().map(|b| weight(*b)).max().unwrap_or(0);
        let face = bases
            .iter()
            .enumerate()
            .filter(|(_, b)| weight(**b) == best)
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        found.insert(face, ());
    });
    let full: VertexSet = if bases.len() == 128 {
        u128::MAX
    } else {
        (1u128 << bases.len()) - 1
    };
    found.insert(full, ());
    found.insert(0, ());
    let mut faces: Vec<VertexSet> = found.into_keys().collect();

    // dims from longest chains: the empty face is -1, vertices 0
    faces.sort_by_key(|f| (f.count_ones(), *f));
    let k = faces.len();
    let mut dims = vec![-1i32; k];
    for i in 1..k {
        dims[i] = (0..i)
            .filter(|&j| faces[j] & faces[i] == faces[j] && faces[j] != faces[i])
            .map(|j| dims[j] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (dims[i], faces[i]));
    let faces: Vec<VertexSet> = order.iter().map(|&i| faces[i]).collect();
    let dims: Vec<i32> = order.iter().map(|&i| dims[i]).collect();
    let covers = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| dims[j] == dims[i] + 1 && faces[i] & faces[j] == faces[i])
                .collect()
        })
        .collect();
    let index = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    Ok(FaceLattice {
        vertex_count: bases.len(),
        faces,
        dims,
        covers,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_rational("-6.54").unwrap(), q(-654, 100));
        assert_eq!(parse_rational("0.880").unwrap(), q(22, 25));
        assert_eq!(parse_rational("12").unwrap(), q(12, 1));
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-0.243").unwrap(), q(-243, 1000));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn three_significant_digits() {
        let cases = [
            ("1", "1.00"),
            ("-6.54", "-6.54"),
            ("0.88", "0.880"),
            ("-0.157", "-0.157"),
            ("11.7", "11.7"),
            ("18.94", "18.9"),
            ("9.996", "10.0"),
            ("123.4", "123"),
            ("0.0012345", "0.00123"),
            ("1234", "1230"),
            ("0", "0.00"),
        ];
        for (input, expected) in cases {
            assert_eq!(format_sig3(&parse_rational(input).unwrap()), expected, "{input}");
        }
    }

    #[test]
    fn u42_graph_is_octahedron_skeleton() {
        let m = Matroid::uniform(4, 2).unwrap();
        let (vertices, graph) = vertices_and_graph(&m);
        assert_eq!(vertices.len(), 6);
        assert_eq!(vertices[0], vec![1, 1, 0, 0]);
        // brute force: 15 pairs minus the three complementary ones
        let complementary = basis_pairs(6)
            .filter(|&(i, j)| m.basis(i).is_disjoint(m.basis(j)))
            .count();
        assert_eq!(complementary, 3);
        assert_eq!(graph.edges.len(), 15 - complementary);
        assert!(graph.is_connected());

        let point = Matroid::uniform(2, 2).unwrap();
        let (v, g) = vertices_and_graph(&point);
        assert_eq!((v.len(), g.edges.len()), (1, 0));
    }

    #[test]
    fn sign_vector_entries() {
        let m = Matroid::uniform(4, 2).unwrap();
        let l = Functional::from_integers(&[1, 2, 4, 8]);
        let sv = sign_vector(&m, &l);
        let i01 = m.basis_index(ElementSet::from_elements([0, 1])).unwrap();
        let i23 = m.basis_index(ElementSet::from_elements([2, 3])).unwrap();
        assert_eq!(sv.sign_of(6, i01, i23), Sign::Minus);
        assert!(sv.is_generic());

        let tied = sign_vector(&m, &Functional::from_integers(&[1, 2, 3, 4]));
        assert!(!tied.is_generic());
        let i03 = m.basis_index(ElementSet::from_elements([0, 3])).unwrap();
        let i12 = m.basis_index(ElementSet::from_elements([1, 2])).unwrap();
        assert_eq!(tied.sign_of(6, i03, i12), Sign::Zero);
        assert_eq!(first_tie(&m, &Functional::from_integers(&[1, 2, 3, 4])), Some((i03, i12)));

        let zero = sign_vector(&m, &Functional::zero(4));
        assert!(zero.signs().iter().all(|&s| s == Sign::Zero));
    }

    #[test]
    fn sign_of_matches_pair_enumeration() {
        let m = Matroid::catalan(3).unwrap();
        let l = Functional::from_integers(&[3, -1, 4, 1, -5, 9]);
        let sv = sign_vector(&m, &l);
        for (k, (i, j)) in basis_pairs(14).enumerate() {
            assert_eq!(sv.sign(k), sv.sign_of(14, i, j));
        }
    }

    #[test]
    fn unique_minimizer_detects_ties() {
        let m = Matroid::uniform(4, 2).unwrap();
        assert_eq!(unique_minimizer(&m, &Functional::from_integers(&[1, 2, 4, 8])), Some(0));
        assert_eq!(unique_minimizer(&m, &Functional::from_integers(&[1, 1, 4, 8])), Some(0));
        assert_eq!(unique_minimizer(&m, &Functional::from_integers(&[1, 1, 1, 8])), None);
    }

    /// Affine dimension of a 0/1 point set by exact Gaussian elimination,
    /// independent of the lattice chain lengths.
    fn affine_dim(points: &[Vec<u8>]) -> i32 {
        if points.is_empty() {
            return -1;
        }
        let mut rows: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&points[0])
                    .map(|(&a, &b)| Rational::from_integer((a as i64 - b as i64).into()))
                    .collect()
            })
            .collect();
        let cols = points[0].len();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) {
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && !rows[r][c].is_zero() {
                        let f = &rows[r][c] / &rows[rank][c];
                        let pivot = rows[rank].clone();
                        for (x, y) in rows[r].iter_mut().zip(pivot) {
                            *x -= &f * y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank as i32
    }

    #[test]
    fn octahedron_face_counts() {
        let m = Matroid::uniform(4, 2).unwrap();
        let lattice = face_lattice_oracle(&m).unwrap();
        assert_eq!(lattice.f_counts(), vec![6, 12, 8, 1]);
        assert!(lattice.is_graded_lattice());
        let (vertices, graph) = vertices_and_graph(&m);
        for i in 0..lattice.face_count() {
            let pts: Vec<Vec<u8>> = vertex_list(lattice.face(i)).into_iter().map(|v| vertices[v].clone()).collect();
            assert_eq!(affine_dim(&pts), lattice.dim(i));
        }
        let mut edges: Vec<(usize, usize)> = lattice
            .faces_of_dim(1)
            .into_iter()
            .map(|f| (f[0], f[1]))
            .collect();
        edges.sort();
        assert_eq!(edges, graph.edges);
    }

    #[test]
    fn simplex_face_lattices() {
        let seg = face_lattice_oracle(&Matroid::uniform(2, 1).unwrap()).unwrap();
        assert_eq!(seg.f_counts(), vec![2, 1]);
        let tri = face_lattice_oracle(&Matroid::uniform(3, 1).unwrap()).unwrap();
        assert_eq!(tri.f_counts(), vec![3, 3, 1]);
        let point = face_lattice_oracle(&Matroid::uniform(3, 3).unwrap()).unwrap();
        assert_eq!(point.f_counts(), vec![1]);
    }

    #[test]
    fn face_lattice_rejects_large_ground_sets() {
        let m = Matroid::uniform(9, 1).unwrap();
        assert!(matches!(face_lattice_oracle(&m), Err(PolytopeError::TooLarge { n: 9, .. })));
    }

    #[test]
    fn functional_json_round_trip() {
        let l = Functional::parse(&["-6.54", "4.96", "1/3", "7"]).unwrap();
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(json, r#"[{"num":-327,"den":50},{"num":124,"den":25},{"num":1,"den":3},{"num":7,"den":1}]"#);
        let back: Functional = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn element_order_sorts_by_value() {
        let l = Functional::from_integers(&[3, 2, 1, 8]);
        assert_eq!(l.element_order(), vec![2, 1, 0, 3]);
    }
}
