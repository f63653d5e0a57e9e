//! Built-in groups, lattices and presentations used by the CLI and the tests.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flasque::coflasque_resolution;
use crate::group::FiniteGroup;
use crate::lattice::{GLattice, LatticeMap};
use crate::linalg::IntMatrix;

/// Permutation generators of the catalog groups.
pub fn group_generators(name: &str) -> Option<(usize, Vec<Vec<usize>>)> {
    let gens: (usize, Vec<Vec<usize>>) = match name {
        "C1" => (1, vec![]),
        "C2" => (2, vec![vec![1, 0]]),
        "C3" => (3, vec![vec![1, 2, 0]]),
        "C4" => (4, vec![vec![1, 2, 3, 0]]),
        "V4" => (4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        "C6" => (6, vec![vec![1, 2, 3, 4, 5, 0]]),
        "S3" => (3, vec![vec![1, 2, 0], vec![1, 0, 2]]),
        "D4" => (4, vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
        // left multiplication by i and j on 1, i, j, k, -1, -i, -j, -k
        "Q8" => (
            8,
            vec![vec![1, 4, 3, 6, 5, 0, 7, 2], vec![2, 7, 4, 1, 6, 3, 0, 5]],
        ),
        "A4" => (4, vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]]),
        _ => return None,
    };
    Some(gens)
}

pub const GROUP_NAMES: [&str; 9] = ["C2", "C3", "C4", "V4", "C6", "S3", "D4", "Q8", "A4"];

pub fn group(name: &str) -> Result<Arc<FiniteGroup>> {
    let (degree, gens) = group_generators(name)
        .ok_or_else(|| Error::InvalidGroup(format!("unknown catalog group {name}")))?;
    Ok(Arc::new(FiniteGroup::from_permutations(degree, &gens)?))
}

/// `χ(g) = -1` exactly on the elements outside the index-two subgroup `h`.
fn sign_character(g: &FiniteGroup, h: &[usize]) -> Vec<i64> {
    g.elements()
        .map(|e| if h.contains(&e) { 1 } else { -1 })
        .collect()
}

fn index_two_subgroup(g: &FiniteGroup) -> Vec<usize> {
    g.all_subgroups()
        .iter()
        .find(|s| 2 * s.order() == g.order())
        .expect("group has an index-two subgroup")
        .elements()
        .to_vec()
}

/// Names of the catalog lattices.
pub const LATTICE_NAMES: [&str; 26] = [
    "trivial-C2-rank1",
    "sign-C2",
    "regular-C2",
    "regular-C3",
    "regular-V4",
    "regular-S3",
    "norm-one-C3",
    "norm-one-C4",
    "norm-one-C6",
    "norm-one-biquadratic",
    "augmentation-biquadratic",
    "norm-one-S3",
    "norm-one-D4",
    "norm-one-Q8",
    "norm-one-A4",
    "augmentation-S3",
    "augmentation-D4",
    "augmentation-Q8",
    "augmentation-A4",
    "sign-C4",
    "sign-S3",
    "permutation-S3-C2",
    "trivial-V4-rank2",
    "sign-plus-regular-C2",
    "norm-one-plus-trivial-S3",
    "norm-one-plus-augmentation-C3",
];

/// A catalog lattice by name.
pub fn lattice(name: &str) -> Result<GLattice> {
    let unknown = || {
        Error::InvalidGroup(format!(
            "unknown catalog entry {name}; available: {}",
            LATTICE_NAMES.join(", ")
        ))
    };
    if !LATTICE_NAMES.contains(&name) {
        return Err(unknown());
    }
    let m = match name {
        "trivial-C2-rank1" => GLattice::trivial(group("C2")?, 1),
        "sign-C2" => GLattice::character(group("C2")?, &[1, -1])?,
        "trivial-V4-rank2" => GLattice::trivial(group("V4")?, 2),
        "norm-one-biquadratic" => GLattice::norm_one(group("V4")?),
        "augmentation-biquadratic" => GLattice::norm_one(group("V4")?).dual(),
        "permutation-S3-C2" => {
            let g = group("S3")?;
            let h = g
                .all_subgroups()
                .iter()
                .find(|s| s.order() == 2)
                .expect("S3 has involutions")
                .clone();
            GLattice::permutation(g, &h)?
        }
        "sign-C4" | "sign-S3" => {
            let g = group(&name[5..])?;
            let chi = sign_character(&g, &index_two_subgroup(&g));
            GLattice::character(g, &chi)?
        }
        "sign-plus-regular-C2" => lattice("sign-C2")?.direct_sum(&lattice("regular-C2")?)?,
        "norm-one-plus-trivial-S3" => {
            let g = group("S3")?;
            GLattice::norm_one(g.clone()).direct_sum(&GLattice::trivial(g, 1))?
        }
        "norm-one-plus-augmentation-C3" => {
            let j = GLattice::norm_one(group("C3")?);
            j.direct_sum(&j.dual())?
        }
        _ => {
            if let Some(g) = name.strip_prefix("regular-") {
                GLattice::regular(group(g).map_err(|_| unknown())?)
            } else if let Some(g) = name.strip_prefix("norm-one-") {
                GLattice::norm_one(group(g).map_err(|_| unknown())?)
            } else if let Some(g) = name.strip_prefix("augmentation-") {
                GLattice::norm_one(group(g).map_err(|_| unknown())?).dual()
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(m)
}

/// A surjection from a permutation lattice onto a character lattice `T`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub permutation: GLattice,
    pub target: GLattice,
    pub surjection: LatticeMap,
}

/// `Z[G] -> J_G` for every catalog group, and a coflasque resolution
/// `P -> I_G` of the augmentation ideal for the non-cyclic ones.
pub fn presentations() -> Result<Vec<Presentation>> {
    presentation_names()
        .iter()
        .map(|n| presentation(n))
        .collect()
}

pub fn presentation_names() -> Vec<String> {
    let regular = GROUP_NAMES
        .iter()
        .map(|g| format!("presentation-regular-{g}"));
    let augmentation = ["V4", "S3", "D4", "Q8", "A4"]
        .iter()
        .map(|g| format!("presentation-augmentation-{g}"));
    regular.chain(augmentation).collect()
}

pub fn presentation(name: &str) -> Result<Presentation> {
    let unknown = || Error::InvalidGroup(format!("unknown presentation {name}"));
    let (p, t, surjection) = if let Some(g) = name.strip_prefix("presentation-regular-") {
        let g = group(g).map_err(|_| unknown())?;
        let reg = GLattice::regular(g.clone());
        let n = IntMatrix::from_columns(g.order(), &[vec![1.into(); g.order()]]);
        let (t, map) = reg.quotient_by_pure_sublattice(&n)?;
        (reg, t, map)
    } else if let Some(g) = name.strip_prefix("presentation-augmentation-") {
        let t = GLattice::norm_one(group(g).map_err(|_| unknown())?).dual();
        let ext = coflasque_resolution(&t)?;
        (ext.middle().clone(), t, ext.project().clone())
    } else {
        return Err(unknown());
    };
    Ok(Presentation {
        name: name.to_string(),
        permutation: p,
        target: t,
        surjection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        let orders: Vec<usize> = GROUP_NAMES
            .iter()
            .map(|n| group(n).unwrap().order())
            .collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 6, 6, 8, 8, 12]);
        assert!(!group("Q8").unwrap().is_abelian());
        // Q8 has a unique involution
        let q8 = group("Q8").unwrap();
        assert_eq!(
            q8.elements().filter(|&e| q8.element_order(e) == 2).count(),
            1
        );
    }

    #[test]
    fn every_lattice_builds() {
        for name in LATTICE_NAMES {
            lattice(name).unwrap();
        }
        assert!(lattice("norm-one-C5").is_err());
        assert_eq!(lattice("norm-one-biquadratic").unwrap().rank(), 3);
        assert_eq!(
            lattice("sign-C2").unwrap().action(1),
            &IntMatrix::from_i64(1, 1, &[-1])
        );
    }
}
