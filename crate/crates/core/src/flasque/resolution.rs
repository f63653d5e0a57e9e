//! Coflasque and flasque resolutions.

use num_bigint::BigInt;

use super::{is_coflasque, is_flasque, CohomologyCertificate, LatticeExtension};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::{cosets, GLattice, LatticeMap, PermutationCertificate};
use crate::linalg::{solve_integer, IntMatrix};

/// Order in which basis vectors of `M^H` are offered as generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorOrder {
    #[default]
    Natural,
    Reversed,
}

/// `0 -> M -> P -> F -> 0` with `P` a permutation lattice and `F` flasque,
/// together with the certificates that establish both properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlasqueResolution {
    pub extension: LatticeExtension,
    pub permutation_certificate: PermutationCertificate,
    pub flasque_certificate: CohomologyCertificate,
}

impl FlasqueResolution {
    pub fn verify(&self) -> Result<()> {
        self.extension.verify()?;
        if !self.permutation_certificate.verify(self.extension.middle()) {
            return Err(Error::Internal(
                "permutation certificate does not match".into(),
            ));
        }
        if !self.flasque_certificate.all_trivial() {
            return Err(Error::Internal(
                "flasque certificate has a nonzero entry".into(),
            ));
        }
        let (holds, recomputed) = is_flasque(self.extension.quotient());
        if !holds || recomputed != self.flasque_certificate {
            return Err(Error::Internal("flasque certificate does not match".into()));
        }
        Ok(())
    }

    pub fn lattice(&self) -> &GLattice {
        self.extension.sub()
    }

    pub fn permutation(&self) -> &GLattice {
        self.extension.middle()
    }

    pub fn flasque(&self) -> &GLattice {
        self.extension.quotient()
    }
}

/// One summand `Z[G/H]` of the resolving permutation lattice, sent onto `M`
/// by `gH -> g b` for an `H`-invariant vector `b`.
struct Block {
    subgroup: Subgroup,
    vector: Vec<BigInt>,
    reps: Vec<usize>,
}

impl Block {
    fn new(group: &FiniteGroup, subgroup: Subgroup, vector: Vec<BigInt>) -> Self {
        let (reps, _) = cosets(group, &subgroup);
        Block {
            subgroup,
            vector,
            reps,
        }
    }

    /// Images in `M` of the `H`-orbit sums of cosets, which span the image
    /// of `Z[G/K]^H`.
    fn invariant_images(&self, m: &GLattice, h: &Subgroup) -> Vec<Vec<BigInt>> {
        let group = m.group();
        let (_, coset_of) = cosets(group, &self.subgroup);
        let mut seen = vec![false; self.reps.len()];
        let mut out = Vec::new();
        for start in 0..self.reps.len() {
            if seen[start] {
                continue;
            }
            let mut sum = vec![BigInt::from(0); m.rank()];
            let mut members: Vec<usize> = h
                .elements()
                .iter()
                .map(|&x| coset_of[group.mul(x, self.reps[start])])
                .collect();
            members.sort_unstable();
            members.dedup();
            for c in members {
                seen[c] = true;
                let v = m.action(self.reps[c]).mul_vec(&self.vector);
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
            }
            out.push(sum);
        }
        out
    }
}

/// `0 -> C -> P -> M -> 0` with `P` a permutation lattice and `C` coflasque.
///
/// Subgroup classes are visited from the largest order down. For each
/// representative `H`, every basis vector of `M^H` that is not already in
/// the image of `P^H` contributes a summand `Z[G/H]` generated by it. After
/// the visit `P^H -> M^H` is onto, so `H^1(H, C) = 0` for every `H` (up to
/// conjugation), and the trivial subgroup makes `P -> M` surjective.
pub fn coflasque_resolution(m: &GLattice) -> Result<LatticeExtension> {
    coflasque_resolution_with(m, GeneratorOrder::Natural)
}

pub fn coflasque_resolution_with(m: &GLattice, order: GeneratorOrder) -> Result<LatticeExtension> {
    let group = m.group();
    let n = m.rank();
    let mut blocks: Vec<Block> = Vec::new();
    let mut classes: Vec<&Subgroup> = group
        .subgroup_conjugacy_classes()
        .iter()
        .map(|c| &c.representative)
        .collect();
    classes.reverse();
    for h in classes {
        let mut images: Vec<Vec<BigInt>> = blocks
            .iter()
            .flat_map(|b| b.invariant_images(m, h))
            .collect();
        let fixed = m.fixed_sublattice(h);
        let mut candidates = fixed.columns();
        if order == GeneratorOrder::Reversed {
            candidates.reverse();
        }
        for b in candidates {
            let span = IntMatrix::from_columns(n, &images);
            if solve_integer(&span, &b)?.is_some() {
                continue;
            }
            let block = Block::new(group, h.clone(), b);
            images.extend(block.invariant_images(m, h));
            blocks.push(block);
        }
    }

    let arc = m.group_arc().clone();
    let mut p = GLattice::trivial(arc.clone(), 0);
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for block in &blocks {
        p = p.direct_sum(&GLattice::permutation(arc.clone(), &block.subgroup)?)?;
        columns.extend(
            block
                .reps
                .iter()
                .map(|&r| m.action(r).mul_vec(&block.vector)),
        );
    }
    let matrix = IntMatrix::from_columns(n, &columns);
    let surjection = LatticeMap::new(p, m.clone(), matrix)?;
    let ext = LatticeExtension::from_surjection(surjection)
        .map_err(|e| Error::Internal(format!("coflasque resolution is not exact: {e}")))?;
    if !is_coflasque(ext.sub()).0 {
        return Err(Error::Internal(
            "kernel of the coflasque resolution is not coflasque".into(),
        ));
    }
    Ok(ext)
}

/// `0 -> M -> P -> F -> 0`, the dual of a coflasque resolution of `M°`.
/// Permutation lattices are self-dual on the nose, so `P° = P`.
pub fn flasque_resolution(m: &GLattice) -> Result<FlasqueResolution> {
    flasque_resolution_with(m, GeneratorOrder::Natural)
}

pub fn flasque_resolution_with(m: &GLattice, order: GeneratorOrder) -> Result<FlasqueResolution> {
    let co = coflasque_resolution_with(&m.dual(), order)?;
    let extension = co.dual();
    extension.verify()?;
    let permutation_certificate = extension
        .middle()
        .permutation_certificate()
        .cloned()
        .ok_or_else(|| Error::Internal("resolving lattice lost its permutation basis".into()))?;
    let (holds, flasque_certificate) = is_flasque(extension.quotient());
    if !holds {
        return Err(Error::Internal(
            "cokernel of the flasque resolution is not flasque".into(),
        ));
    }
    if !permutation_certificate.verify(extension.middle()) {
        return Err(Error::Internal(
            "permutation certificate does not match".into(),
        ));
    }
    Ok(FlasqueResolution {
        extension,
        permutation_certificate,
        flasque_certificate,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cohomology::h1;
    use crate::linalg::AbelianGroupStructure;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn v4() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).unwrap())
    }

    fn sign() -> GLattice {
        GLattice::character(c2(), &[1, -1]).unwrap()
    }

    #[test]
    fn coflasque_of_trivial_lattice() {
        let z = GLattice::trivial(c2(), 1);
        let ext = coflasque_resolution(&z).unwrap();
        assert_eq!(ext.middle(), &z);
        assert_eq!(ext.sub().rank(), 0);
    }

    #[test]
    fn coflasque_of_sign() {
        let ext = coflasque_resolution(&sign()).unwrap();
        assert_eq!(ext.middle(), &GLattice::regular(c2()));
        assert_eq!(ext.sub(), &GLattice::trivial(c2(), 1));
    }

    #[test]
    fn coflasque_of_biquadratic_norm_one() {
        let ext = coflasque_resolution(&GLattice::norm_one(v4())).unwrap();
        assert!(is_coflasque(ext.sub()).0);
    }

    #[test]
    fn flasque_examples() {
        let z = GLattice::trivial(c2(), 1);
        let res = flasque_resolution(&z).unwrap();
        assert_eq!(res.permutation(), &z);
        assert_eq!(res.flasque().rank(), 0);

        let res = flasque_resolution(&sign()).unwrap();
        assert_eq!(res.permutation(), &GLattice::regular(c2()));
        assert_eq!(res.flasque(), &z);

        // Q = J_{V4}: H^1(V4, F) is the Schur multiplier Z/2
        let res = flasque_resolution(&GLattice::norm_one(v4())).unwrap();
        assert_eq!(
            h1(res.flasque()).structure(),
            &AbelianGroupStructure::cyclic(2)
        );
        // its dual has F with H^1 = 0
        let res = flasque_resolution(&GLattice::norm_one(v4()).dual()).unwrap();
        assert!(h1(res.flasque()).is_trivial());
    }

    #[test]
    fn reversed_order_also_resolves() {
        let j = GLattice::norm_one(v4());
        let res = flasque_resolution_with(&j, GeneratorOrder::Reversed).unwrap();
        res.verify().unwrap();
    }
}
