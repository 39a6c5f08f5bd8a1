//! Random matroids and brute-force oracles shared by the integration tests.
//! The oracles work on raw bit masks and never call the library's shelling,
//! poset or multicomplex code.

#![allow(dead_code)]

use brokenline::matroid::{ElementSet, Matroid};
use brokenline::poset::RestrictionPoset;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn masks(sets: &[ElementSet]) -> Vec<u64> {
    sets.iter().map(|s| s.mask()).collect()
}

pub fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&e| mask >> e & 1 == 1).collect()
}

pub fn submasks(mask: u64) -> Vec<u64> {
    let mut out = vec![0];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out
}

fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// h-vector from face counts by size, trailing zeros trimmed.
pub fn h_from_f(f: &[i64], r: usize) -> Vec<u64> {
    let r = r as i64;
    let mut h: Vec<u64> = (0..=r)
        .map(|k| {
            let v: i64 = (0..=k)
                .map(|s| {
                    let sign = if (k - s) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(r - s, k - s) * f.get(s as usize).copied().unwrap_or(0)
                })
                .sum();
            assert!(v >= 0, "negative h entry");
            v as u64
        })
        .collect();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

/// h-vector of the complex whose facets are `bases`, by counting faces.
pub fn h_oracle(bases: &[u64], n: usize) -> Vec<u64> {
    let r = bases.first().map_or(0, |b| b.count_ones() as usize);
    let mut f = vec![0i64; r + 1];
    for s in 0..(1u64 << n) {
        if bases.iter().any(|&b| is_subset(s, b)) {
            f[s.count_ones() as usize] += 1;
        }
    }
    h_from_f(&f, r)
}

pub fn trimmed(h: &[u64]) -> Vec<u64> {
    let mut h = h.to_vec();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

/// Histogram of set sizes, trailing zeros trimmed.
pub fn size_histogram(sets: &[u64]) -> Vec<u64> {
    let mut h = vec![0u64; 65];
    for s in sets {
        h[s.count_ones() as usize] += 1;
    }
    trimmed(&h)
}

/// Internally passive elements of `basis`: `e` such that some smaller
/// `f` outside the basis gives the basis `basis - e + f`. `rank[e]` is the
/// position of `e` in the ground order.
pub fn ip_oracle(bases: &[u64], rank: &[usize], basis: u64) -> u64 {
    let n = rank.len();
    let mut out = 0;
    for e in elements(basis) {
        let passive = (0..n)
            .filter(|&f| basis >> f & 1 == 0 && rank[f] < rank[e])
            .any(|f| bases.contains(&(basis & !(1 << e) | 1 << f)));
        if passive {
            out |= 1 << e;
        }
    }
    out
}

/// `R(F_j)`: vertices `v` of `F_j` with `F_j - v` inside an earlier facet.
pub fn restriction_oracle(facets: &[u64]) -> Vec<u64> {
    facets
        .iter()
        .enumerate()
        .map(|(j, &f)| {
            elements(f)
                .into_iter()
                .filter(|&v| facets[..j].iter().any(|&g| is_subset(f & !(1 << v), g)))
                .fold(0, |acc, v| acc | 1 << v)
        })
        .collect()
}

/// Shelling test by enumerating faces: the faces new at step `j` must be
/// exactly those containing `R(F_j)`.
pub fn shelling_oracle(facets: &[u64]) -> bool {
    let rs = restriction_oracle(facets);
    facets.iter().enumerate().all(|(j, &f)| {
        submasks(f).into_iter().all(|s| {
            let new = !facets[..j].iter().any(|&g| is_subset(s, g));
            new == is_subset(rs[j], s)
        })
    })
}

/// Shelling test for the boundary of the 3-cube, whose facets are the six
/// bases of `U(4,2)`; opposite facets are complementary bases. A facet
/// meets the earlier ones in the edges shared with earlier adjacent facets,
/// and that union must be nonempty and not two opposite edges.
pub fn cube_shelling_oracle(facets: &[u64]) -> bool {
    (1..facets.len()).all(|j| {
        let met: Vec<u64> = facets[..j]
            .iter()
            .copied()
            .filter(|&g| g & facets[j] != 0)
            .collect();
        !(met.is_empty() || (met.len() == 2 && met[0] & met[1] == 0))
    })
}

/// Inclusion-order isomorphism of two set families by trying every bijection.
pub fn families_isomorphic(a: &[u64], b: &[u64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..b.len()).collect();
    permutations(&mut perm, 0, &mut |p| {
        (0..a.len()).all(|i| (0..a.len()).all(|j| is_subset(a[i], a[j]) == is_subset(b[p[i]], b[p[j]])))
    })
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, f) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn all_orders(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permutations(&mut p, 0, &mut |q| {
        out.push(q.to_vec());
        false
    });
    out.sort();
    out
}

pub fn greedoid_oracle(family: &[u64]) -> bool {
    family.iter().all(|&a| {
        family.iter().all(|&b| {
            a.count_ones() >= b.count_ones() || elements(b & !a).into_iter().any(|x| family.contains(&(a | 1 << x)))
        })
    })
}

/// Meets and joins in the inclusion order once a top is adjoined.
pub fn lattice_after_top_oracle(family: &[u64]) -> bool {
    let greatest = |cands: Vec<u64>| cands.iter().any(|&c| cands.iter().all(|&d| is_subset(d, c)));
    let least = |cands: Vec<u64>| cands.is_empty() || cands.iter().any(|&c| cands.iter().all(|&d| is_subset(c, d)));
    family.iter().all(|&a| {
        family.iter().all(|&b| {
            let lower: Vec<u64> = family.iter().copied().filter(|&c| is_subset(c, a) && is_subset(c, b)).collect();
            let upper: Vec<u64> = family.iter().copied().filter(|&c| is_subset(a, c) && is_subset(b, c)).collect();
            greatest(lower) && least(upper)
        })
    })
}

/// Atoms of the inclusion order are the singletons outside `first` and the loops.
pub fn atoms_oracle(family: &[u64], first: u64, loops: u64, n: usize) -> bool {
    let bottom = family.iter().copied().find(|&s| family.iter().all(|&t| is_subset(s, t)));
    let Some(bottom) = bottom else { return false };
    let mut atoms: Vec<u64> = family
        .iter()
        .copied()
        .filter(|&s| s != bottom && !family.iter().any(|&t| t != bottom && t != s && is_subset(bottom, t) && is_subset(t, s)))
        .collect();
    atoms.sort();
    let mut expected: Vec<u64> = (0..n).filter(|&v| (first | loops) >> v & 1 == 0).map(|v| 1 << v).collect();
    expected.sort();
    atoms == expected
}

/// Checks a monomial labeling directly: injective, divisibility matches the
/// poset order, closed under division, `1` at the bottom, and pure.
pub fn labeling_oracle(p: &RestrictionPoset, labels: &[Vec<u32>]) -> bool {
    let k = p.len();
    if labels.len() != k {
        return false;
    }
    let divides = |a: &[u32], b: &[u32]| a.iter().zip(b).all(|(x, y)| x <= y);
    let degree = |a: &[u32]| a.iter().sum::<u32>();
    for i in 0..k {
        for j in 0..k {
            if i != j && labels[i] == labels[j] {
                return false;
            }
            if divides(&labels[i], &labels[j]) != p.leq(i, j) {
                return false;
            }
        }
        for v in 0..labels[i].len() {
            if labels[i][v] > 0 {
                let mut d = labels[i].clone();
                d[v] -= 1;
                if !labels.contains(&d) {
                    return false;
                }
            }
        }
    }
    let maximal: Vec<&Vec<u32>> = labels
        .iter()
        .filter(|a| !labels.iter().any(|b| b != *a && divides(a, b)))
        .collect();
    let top = maximal.iter().map(|a| degree(a)).max().unwrap_or(0);
    labels.iter().any(|a| degree(a) == 0) && maximal.iter().all(|a| degree(a) == top)
}

/// Brute-force `sum_I t^|I| h((M/I)|B, t)` over independent `I` disjoint from `B`.
pub fn h_decomposition_oracle(bases: &[u64], n: usize, basis: u64) -> Vec<u64> {
    let independent = |s: u64| bases.iter().any(|&b| is_subset(s, b));
    let mut total = vec![0u64; n + 2];
    for i in 0..(1u64 << n) {
        if i & basis != 0 || !independent(i) {
            continue;
        }
        let faces: Vec<u64> = submasks(basis).into_iter().filter(|&j| independent(i | j)).collect();
        let r = faces.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
        let mut f = vec![0i64; r + 1];
        for face in faces {
            f[face.count_ones() as usize] += 1;
        }
        for (d, c) in h_from_f(&f, r).into_iter().enumerate() {
            total[d + i.count_ones() as usize] += c;
        }
    }
    trimmed(&total)
}

fn binary_matroid(rng: &mut ChaCha8Rng) -> Matroid {
    loop {
        let r = rng.random_range(1..=4usize);
        let n = rng.random_range(r..=7usize);
        let columns: Vec<u32> = (0..n).map(|_| rng.random_range(0..(1u32 << r))).collect();
        let bases: Vec<Vec<usize>> = (0u64..(1 << n))
            .filter(|s| s.count_ones() as usize == r)
            .filter(|&s| gf2_rank(elements(s).iter().map(|&e| columns[e])) == r)
            .map(elements)
            .collect();
        if !bases.is_empty() {
            return Matroid::from_bases(n, &bases).expect("binary matroids satisfy exchange");
        }
    }
}

fn gf2_rank(vectors: impl Iterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn graphic_matroid(rng: &mut ChaCha8Rng) -> Matroid {
    let vertices = rng.random_range(2..=5usize);
    let edge_count = rng.random_range(1..=7usize);
    let mut edges = vec![(0, 1)];
    while edges.len() < edge_count {
        edges.push((rng.random_range(0..vertices), rng.random_range(0..vertices)));
    }
    edges.shuffle(rng);
    Matroid::graphic(vertices, &edges).expect("small graph")
}

/// A random matroid of positive rank on at most `max_n` elements: uniform,
/// graphic, Catalan or binary.
pub fn random_matroid(rng: &mut ChaCha8Rng, max_n: usize) -> Matroid {
    loop {
        let m = match rng.random_range(0..4) {
            0 => {
                let n = rng.random_range(1..=7usize);
                Matroid::uniform(n, rng.random_range(1..=n)).expect("uniform")
            }
            1 => graphic_matroid(rng),
            2 => Matroid::catalan(rng.random_range(1..=3)).expect("catalan"),
            _ => binary_matroid(rng),
        };
        if m.ground_size() <= max_n && m.rank() > 0 {
            return m;
        }
    }
}

/// A random functional with distinct integer coordinates that is generic on `m`.
pub fn random_generic_functional(rng: &mut ChaCha8Rng, m: &Matroid) -> brokenline::polytope::Functional {
    loop {
        let coords: Vec<i64> = (0..m.ground_size()).map(|_| rng.random_range(-1000..=1000)).collect();
        let l = brokenline::polytope::Functional::from_integers(&coords);
        if brokenline::polytope::first_tie(m, &l).is_none() {
            return l;
        }
    }
}

/// Ground-order ranks induced by a functional: smaller weight first, ties by index.
pub fn ground_ranks(l: &brokenline::polytope::Functional) -> Vec<usize> {
    let c = l.coords();
    let mut seq: Vec<usize> = (0..c.len()).collect();
    seq.sort_by(|&a, &b| c[a].cmp(&c[b]).then(a.cmp(&b)));
    let mut rank = vec![0; c.len()];
    for (i, &e) in seq.iter().enumerate() {
        rank[e] = i;
    }
    rank
}

pub fn random_basis(rng: &mut ChaCha8Rng, m: &Matroid) -> ElementSet {
    m.basis(rng.random_range(0..m.basis_count()))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
