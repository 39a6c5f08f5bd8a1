//! Reference matroids, shelling tables and sweeps used by the tests,
//! examples and the CLI.

use crate::matroid::Matroid;
use crate::polytope::Functional;
use crate::shelling::{perturb_lexicographic, FacetOrder, RestrictionSets};
use crate::sweep::{Sweep, SweepError};

/// Rows of `(basis, restriction set)` in shelling order.
pub type Table = Vec<(Vec<usize>, Vec<usize>)>;

fn table(rows: &[(&[usize], &[usize])]) -> Table {
    rows.iter().map(|(b, r)| (b.to_vec(), r.to_vec())).collect()
}

/// A printed sweep: witnesses as decimal strings with their first position.
#[derive(Debug, Clone)]
pub struct SweepFixture {
    pub segments: Vec<(usize, Vec<&'static str>)>,
    pub table: Table,
}

impl SweepFixture {
    /// Pivot positions (1-indexed) at which the witness changes.
    pub fn pivots(&self) -> Vec<usize> {
        self.segments.iter().skip(1).map(|s| s.0).collect()
    }

    pub fn functionals(&self) -> Vec<(usize, Functional)> {
        self.segments
            .iter()
            .map(|(start, coords)| (*start, Functional::parse(coords).expect("fixture decimals parse")))
            .collect()
    }

    /// The sweep with every tied witness perturbed lexicographically.
    pub fn sweep(&self, m: &Matroid) -> Result<Sweep, SweepError> {
        let segments: Vec<(usize, Functional)> = self
            .functionals()
            .into_iter()
            .map(|(k, l)| (k, perturb_lexicographic(m, &l)))
            .collect();
        Sweep::from_segments(m, &segments)
    }

    pub fn restriction_sets(&self, m: &Matroid) -> RestrictionSets {
        RestrictionSets::from_table(m, &self.table).expect("fixture bases")
    }
}

/// Graphic matroid on six edges with 13 bases.
pub fn graphic_matroid() -> Matroid {
    let bases: Vec<Vec<usize>> = [
        [0, 1, 2],
        [0, 1, 3],
        [0, 1, 4],
        [0, 1, 5],
        [1, 2, 3],
        [0, 2, 5],
        [1, 2, 4],
        [0, 3, 5],
        [0, 4, 5],
        [1, 3, 5],
        [1, 4, 5],
        [2, 3, 5],
        [2, 4, 5],
    ]
    .iter()
    .map(|b| b.to_vec())
    .collect();
    Matroid::from_bases(6, &bases).expect("graphic fixture is a matroid")
}

pub fn graphic_h_vector() -> Vec<u64> {
    vec![1, 3, 5, 4]
}

/// Line shelling of [`graphic_matroid`] by `(1, 2, 3, 4, 5, 6)`.
pub fn graphic_line_table() -> Table {
    table(&[
        (&[0, 1, 2], &[]),
        (&[0, 1, 3], &[3]),
        (&[0, 1, 4], &[4]),
        (&[0, 1, 5], &[5]),
        (&[1, 2, 3], &[2, 3]),
        (&[0, 2, 5], &[2, 5]),
        (&[1, 2, 4], &[2, 4]),
        (&[0, 3, 5], &[3, 5]),
        (&[0, 4, 5], &[4, 5]),
        (&[1, 3, 5], &[1, 3, 5]),
        (&[1, 4, 5], &[1, 4, 5]),
        (&[2, 3, 5], &[2, 3, 5]),
        (&[2, 4, 5], &[2, 4, 5]),
    ])
}

/// Pinned sweep of [`graphic_matroid`] with pivots at positions 1 and 2.
pub fn graphic_pivot_sweep() -> SweepFixture {
    SweepFixture {
        segments: vec![
            (0, vec!["1", "2", "3", "4", "5", "6"]),
            (1, vec!["-6.54", "4.96", "4.39", "6.94", "6.53", "5.05"]),
            (2, vec!["-7.78", "5.30", "4.18", "7.94", "8.00", "5.91"]),
        ],
        table: table(&[
            (&[0, 1, 2], &[]),
            (&[0, 2, 5], &[5]),
            (&[0, 1, 5], &[1, 5]),
            (&[0, 1, 3], &[3]),
            (&[0, 1, 4], &[4]),
            (&[0, 3, 5], &[3, 5]),
            (&[0, 4, 5], &[4, 5]),
            (&[1, 2, 3], &[2, 3]),
            (&[1, 2, 4], &[2, 4]),
            (&[2, 3, 5], &[2, 3, 5]),
            (&[2, 4, 5], &[2, 4, 5]),
            (&[1, 3, 5], &[1, 3, 5]),
            (&[1, 4, 5], &[1, 4, 5]),
        ]),
    }
}

/// A second pinned sweep of [`graphic_matroid`] whose poset is isomorphic
/// to the line-shelling poset.
pub fn graphic_second_sweep() -> SweepFixture {
    SweepFixture {
        segments: vec![
            (0, vec!["1", "2", "3", "4", "5", "6"]),
            (1, vec!["-0.243", "2.63", "5.57", "11.7", "11.6", "6.10"]),
            (2, vec!["1.86", "-7.10", "3.30", "12.7", "9.05", "4.34"]),
        ],
        table: table(&[
            (&[0, 1, 2], &[]),
            (&[0, 1, 5], &[5]),
            (&[0, 1, 4], &[4]),
            (&[1, 2, 4], &[2, 4]),
            (&[1, 4, 5], &[4, 5]),
            (&[0, 1, 3], &[3]),
            (&[1, 2, 3], &[2, 3]),
            (&[0, 2, 5], &[2, 5]),
            (&[1, 3, 5], &[3, 5]),
            (&[0, 4, 5], &[0, 4, 5]),
            (&[2, 4, 5], &[2, 4, 5]),
            (&[0, 3, 5], &[0, 3, 5]),
            (&[2, 3, 5], &[2, 3, 5]),
        ]),
    }
}

pub fn catalan_h_vector() -> Vec<u64> {
    vec![1, 3, 5, 5]
}

/// Line shelling of `catalan(3)` by `(1, 2, 3, 4, 5, 6)`.
pub fn catalan_line_table() -> Table {
    table(&[
        (&[0, 1, 2], &[]),
        (&[0, 1, 3], &[3]),
        (&[0, 1, 4], &[4]),
        (&[0, 2, 3], &[2, 3]),
        (&[0, 1, 5], &[5]),
        (&[0, 2, 4], &[2, 4]),
        (&[1, 2, 3], &[1, 2, 3]),
        (&[0, 2, 5], &[2, 5]),
        (&[0, 3, 4], &[3, 4]),
        (&[1, 2, 4], &[1, 2, 4]),
        (&[0, 3, 5], &[3, 5]),
        (&[1, 2, 5], &[1, 2, 5]),
        (&[1, 3, 4], &[1, 3, 4]),
        (&[1, 3, 5], &[1, 3, 5]),
    ])
}

/// Pinned sweep of `catalan(3)` with pivots at positions 1 to 4.
pub fn catalan_pivot_sweep() -> SweepFixture {
    SweepFixture {
        segments: vec![
            (0, vec!["1", "2", "3", "4", "5", "6"]),
            (1, vec!["-10.7", "-5.84", "-14.9", "2.67", "18.9", "17.5"]),
            (2, vec!["0.573", "3.24", "-8.68", "6.11", "10.6", "12.3"]),
            (3, vec!["1.32", "1.56", "-0.157", "4.38", "11.0", "6.36"]),
            (4, vec!["1.81", "0.880", "-0.449", "4.08", "10.9", "6.87"]),
        ],
        table: table(&[
            (&[0, 1, 2], &[]),
            (&[0, 2, 3], &[3]),
            (&[1, 2, 3], &[1, 3]),
            (&[0, 1, 3], &[0, 1, 3]),
            (&[1, 2, 5], &[5]),
            (&[0, 2, 5], &[0, 5]),
            (&[0, 1, 5], &[0, 1, 5]),
            (&[1, 2, 4], &[4]),
            (&[1, 3, 5], &[3, 5]),
            (&[0, 2, 4], &[0, 4]),
            (&[0, 3, 5], &[0, 3, 5]),
            (&[0, 1, 4], &[0, 1, 4]),
            (&[1, 3, 4], &[3, 4]),
            (&[0, 3, 4], &[0, 3, 4]),
        ]),
    }
}

/// Unpinned broken line on `U(4,2)`: `01, 02, 12` by `(1,2,3,8)`, then
/// `23, 13, 03` by `(3,2,1,8)`.
pub fn unpinned_broken_line(m: &Matroid) -> Sweep {
    let order = FacetOrder::from_bases(m, &[vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3], vec![1, 3], vec![0, 3]])
        .expect("U(4,2) bases");
    let l1 = Functional::from_integers(&[1, 2, 3, 8]);
    let l2 = Functional::from_integers(&[3, 2, 1, 8]);
    Sweep::new(m, order, vec![l1.clone(), l1.clone(), l1, l2.clone(), l2.clone(), l2]).expect("lengths match")
}

/// A shelling of `U(4,2)` that does not come from the cube: edges
/// `12, 23, 34, 14, 13, 24` of `K4` written 0-indexed.
pub fn non_polytopal_order(m: &Matroid) -> FacetOrder {
    FacetOrder::from_bases(m, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 2], vec![1, 3]])
        .expect("U(4,2) bases")
}

/// Restriction sets of [`non_polytopal_order`], 0-indexed.
pub fn non_polytopal_restriction_sets() -> Vec<Vec<usize>> {
    vec![vec![], vec![2], vec![3], vec![0, 3], vec![0, 2], vec![1, 3]]
}

/// Monomial labels of the [`catalan_pivot_sweep`] poset, as
/// `(restriction set, monomial)` with atoms `{3} = a`, `{5} = b`, `{4} = c`.
pub fn catalan_sweep_labels() -> Vec<(Vec<usize>, &'static str)> {
    vec![
        (vec![], "1"),
        (vec![3], "a"),
        (vec![5], "b"),
        (vec![4], "c"),
        (vec![1, 3], "a^2"),
        (vec![0, 5], "b^2"),
        (vec![3, 5], "ab"),
        (vec![0, 4], "c^2"),
        (vec![3, 4], "ac"),
        (vec![0, 1, 3], "a^3"),
        (vec![0, 1, 5], "b^3"),
        (vec![0, 3, 5], "ab^2"),
        (vec![0, 1, 4], "c^3"),
        (vec![0, 3, 4], "ac^2"),
    ]
}
