//! Bounded search for a permutation basis of an uncertified lattice.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::lattice::GLattice;
use crate::linalg::{inverse_unimodular, is_pure, IntMatrix};

const MAX_RANK: usize = 6;
const MAX_HEIGHT: i64 = 2;
const NODE_BUDGET: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationSearch {
    /// Columns of `basis` form a Z-basis permuted by the group; `lattice` is
    /// the same module written in that basis.
    Found { basis: IntMatrix, lattice: GLattice },
    /// Rank above 6, no basis among vectors with entries in `[-2, 2]`, or the
    /// search budget ran out. Says nothing about the lattice.
    Unknown,
}

/// Looks for a basis that the group permutes, built from orbits of vectors
/// with entries in `[-2, 2]`.
pub fn find_permutation_basis(m: &GLattice) -> PermutationSearch {
    let n = m.rank();
    if m.is_permutation_certified() {
        return PermutationSearch::Found {
            basis: IntMatrix::identity(n),
            lattice: m.clone(),
        };
    }
    if n > MAX_RANK {
        return PermutationSearch::Unknown;
    }
    let Some(actions) = small_actions(m) else {
        return PermutationSearch::Unknown;
    };
    let orbits = bounded_orbits(&actions, n);
    let mut search = Search {
        orbits: &orbits,
        n,
        nodes: 0,
        chosen: Vec::new(),
    };
    match search.run(0) {
        Some(columns) => {
            let big: Vec<Vec<BigInt>> = columns
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let basis = IntMatrix::from_columns(n, &big);
            let inv = inverse_unimodular(&basis).expect("search only accepts unimodular bases");
            let action = m.actions().iter().map(|a| &(&inv * a) * &basis).collect();
            let lattice = GLattice::new(m.group_arc().clone(), n, action).expect("change of basis");
            debug_assert!(lattice.is_permutation_certified());
            PermutationSearch::Found { basis, lattice }
        }
        None => PermutationSearch::Unknown,
    }
}

fn small_actions(m: &GLattice) -> Option<Vec<Vec<i64>>> {
    m.actions()
        .iter()
        .map(|a| a.entries().iter().map(ToPrimitive::to_i64).collect())
        .collect()
}

fn apply(a: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum())
        .collect()
}

/// Orbits of height-bounded vectors whose members are all height-bounded,
/// with at most `n` members, in a deterministic order.
fn bounded_orbits(actions: &[Vec<i64>], n: usize) -> Vec<Vec<Vec<i64>>> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut orbits = Vec::new();
    let width = (2 * MAX_HEIGHT + 1) as usize;
    let total = width.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let x = (c % width) as i64 - MAX_HEIGHT;
                c /= width;
                x
            })
            .collect();
        if v.iter().all(|&x| x == 0) || seen.contains(&v) {
            continue;
        }
        let orbit: BTreeSet<Vec<i64>> = actions.iter().map(|a| apply(a, &v, n)).collect();
        seen.extend(orbit.iter().cloned());
        if orbit.len() <= n
            && orbit
                .iter()
                .all(|w| w.iter().all(|x| x.abs() <= MAX_HEIGHT))
        {
            orbits.push(orbit.into_iter().collect());
        }
    }
    orbits
}

struct Search<'a> {
    orbits: &'a [Vec<Vec<i64>>],
    n: usize,
    nodes: usize,
    chosen: Vec<Vec<i64>>,
}

impl Search<'_> {
    fn run(&mut self, start: usize) -> Option<Vec<Vec<i64>>> {
        if self.chosen.len() == self.n {
            return Some(self.chosen.clone());
        }
        for idx in start..self.orbits.len() {
            self.nodes += 1;
            if self.nodes > NODE_BUDGET {
                return None;
            }
            let orbit = &self.orbits[idx];
            if self.chosen.len() + orbit.len() > self.n {
                continue;
            }
            let before = self.chosen.len();
            self.chosen.extend(orbit.iter().cloned());
            if self.extendable() {
                if let Some(found) = self.run(idx + 1) {
                    return Some(found);
                }
            }
            self.chosen.truncate(before);
        }
        None
    }

    /// The chosen vectors are part of a Z-basis.
    fn extendable(&self) -> bool {
        let cols: Vec<Vec<BigInt>> = self
            .chosen
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let b = IntMatrix::from_columns(self.n, &cols);
        crate::linalg::rank(&b) == b.cols() && is_pure(&b)
    }
}
