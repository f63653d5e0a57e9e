//! Flasque and coflasque lattices, resolutions, and extension calculus.

mod extension;
mod permutation;
mod resolution;

pub use extension::{
    ext1, extension_class, is_split, permutation_section, pullback_resolution, pushout,
    LatticeExtension,
};
pub use permutation::{find_permutation_basis, PermutationSearch};
pub use resolution::{
    coflasque_resolution, coflasque_resolution_with, flasque_resolution, flasque_resolution_with,
    FlasqueResolution, GeneratorOrder,
};

use serde::Serialize;

use crate::cohomology::{h1, tate_h0};
use crate::group::Subgroup;
use crate::lattice::GLattice;
use crate::linalg::AbelianGroupStructure;

/// `H^1(H, ·)` for one representative `H` of every conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyCertificate {
    pub entries: Vec<CertificateEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    pub subgroup: Vec<usize>,
    pub h1: AbelianGroupStructure,
}

impl CohomologyCertificate {
    pub fn all_trivial(&self) -> bool {
        self.entries.iter().all(|e| e.h1.is_trivial())
    }
}

fn class_representatives(m: &GLattice) -> Vec<Subgroup> {
    m.group()
        .subgroup_conjugacy_classes()
        .iter()
        .map(|c| c.representative.clone())
        .collect()
}

fn h1_certificate(m: &GLattice) -> CohomologyCertificate {
    let entries = class_representatives(m)
        .into_iter()
        .map(|h| CertificateEntry {
            h1: h1(&m.restrict(&h)).structure().clone(),
            subgroup: h.elements().to_vec(),
        })
        .collect();
    CohomologyCertificate { entries }
}

/// `M` is flasque when `H^1(H, M°) = 0` for every subgroup `H`.
pub fn is_flasque(m: &GLattice) -> (bool, CohomologyCertificate) {
    let cert = h1_certificate(&m.dual());
    (cert.all_trivial(), cert)
}

/// `M` is coflasque when `H^1(H, M) = 0` for every subgroup `H`.
pub fn is_coflasque(m: &GLattice) -> (bool, CohomologyCertificate) {
    let cert = h1_certificate(m);
    (cert.all_trivial(), cert)
}

/// Invariants of `M` attached to one subgroup class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FingerprintEntry {
    pub subgroup: Vec<usize>,
    pub fixed_rank: usize,
    pub h1: AbelianGroupStructure,
    pub h1_dual: AbelianGroupStructure,
    pub tate_h0: AbelianGroupStructure,
}

/// Per-class invariants of a lattice. The `H^1` entries do not change when
/// a permutation lattice is added, so they are invariants of the class of
/// `M` up to permutation summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityFingerprint {
    pub entries: Vec<FingerprintEntry>,
}

impl SimilarityFingerprint {
    /// Compares the entries for `H^1` of the lattice and of its dual. A mismatch proves
    /// the lattices are not equal up to permutation summands; a match is only
    /// consistent with it.
    pub fn same_h1_entries(&self, other: &SimilarityFingerprint) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.subgroup == b.subgroup && a.h1 == b.h1 && a.h1_dual == b.h1_dual)
    }
}

pub fn similarity_fingerprint(m: &GLattice) -> SimilarityFingerprint {
    let dual = m.dual();
    let entries = class_representatives(m)
        .into_iter()
        .map(|h| FingerprintEntry {
            fixed_rank: m.fixed_sublattice(&h).cols(),
            h1: h1(&m.restrict(&h)).structure().clone(),
            h1_dual: h1(&dual.restrict(&h)).structure().clone(),
            tate_h0: tate_h0(&h, m)
                .expect("invariants contain the norms")
                .structure()
                .clone(),
            subgroup: h.elements().to_vec(),
        })
        .collect();
    SimilarityFingerprint { entries }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap())
    }

    #[test]
    fn predicates() {
        assert!(is_flasque(&GLattice::trivial(s3(), 2)).0);
        assert!(is_coflasque(&GLattice::trivial(s3(), 2)).0);
        assert!(is_flasque(&GLattice::regular(s3())).0);
        let sign = GLattice::character(c2(), &[1, -1]).unwrap();
        let (flasque, cert) = is_flasque(&sign);
        assert!(!flasque);
        assert_eq!(
            cert.entries.last().unwrap().h1,
            AbelianGroupStructure::cyclic(2)
        );
        assert!(!is_coflasque(&sign).0);
    }

    #[test]
    fn fingerprint_of_zero_and_of_sums() {
        let g = s3();
        let zero = similarity_fingerprint(&GLattice::trivial(g.clone(), 0));
        assert!(zero.entries.iter().all(|e| e.fixed_rank == 0
            && e.h1.is_trivial()
            && e.h1_dual.is_trivial()
            && e.tate_h0.is_trivial()));
        let j = GLattice::norm_one(g.clone());
        let base = similarity_fingerprint(&j);
        for class in g.subgroup_conjugacy_classes() {
            let p = GLattice::permutation(g.clone(), &class.representative).unwrap();
            let bigger = similarity_fingerprint(&j.direct_sum(&p).unwrap());
            assert!(base.same_h1_entries(&bigger));
        }
    }
}
