//! Ш^i_ω: classes that restrict to zero on every cyclic subgroup.

use super::presentation::block_relations;
use super::{
    h1, h2_bar_bounded, kernel_structure, restriction_h1_from, restriction_h2_from, CohomMap,
};
use crate::error::{Error, Result};
use crate::flasque::LatticeExtension;
use crate::lattice::GLattice;
use crate::limits::Limits;
use crate::linalg::{AbelianGroupStructure, IntMatrix};

/// `Ш^i_ω(G, M)` for `i ∈ {1, 2}`. Degree 2 uses the bar resolution and is
/// subject to the configured cap on `|G|`.
pub fn sha_omega(degree: u32, m: &GLattice) -> Result<AbelianGroupStructure> {
    sha_omega_bounded(degree, m, Limits::from_env().max_bar_order)
}

/// Kernel of `H^i(G, M) -> ∏ H^i(C, M)` over one cyclic subgroup per
/// conjugacy class. Conjugate subgroups have the same kernel, and the
/// trivial subgroup contributes nothing.
pub fn sha_omega_bounded(degree: u32, m: &GLattice, bound: usize) -> Result<AbelianGroupStructure> {
    let source = match degree {
        1 => h1(m),
        2 => h2_bar_bounded(m, bound)?,
        _ => {
            return Err(Error::InvalidGroup(format!(
                "Ш is defined here for degrees 1 and 2, got {degree}"
            )))
        }
    };
    if source.is_trivial() {
        return Ok(AbelianGroupStructure::trivial());
    }
    let mut maps: Vec<CohomMap> = Vec::new();
    for class in m.group().subgroup_conjugacy_classes() {
        let c = &class.representative;
        if !c.is_cyclic() || c.is_trivial() {
            continue;
        }
        let map = match degree {
            1 => restriction_h1_from(&source, m, c)?,
            _ => restriction_h2_from(&source, m, c, bound)?,
        };
        maps.push(map);
    }
    let targets: Vec<_> = maps.iter().map(CohomMap::target).collect();
    let rb = block_relations(&targets);
    let blocks: Vec<IntMatrix> = maps.iter().map(|f| f.matrix().clone()).collect();
    let phi = IntMatrix::vstack_all(source.generator_count(), &blocks)?;
    Ok(kernel_structure(&phi, source.relations(), &rb))
}

/// `Ш^2_ω(G, M)` as `Ш^1_ω(G, F)` for a resolution `0 -> M -> P -> F -> 0`
/// with `P` a certified permutation lattice: `Ш^1_ω(P) = Ш^2_ω(P) = 0`
/// makes the connecting map an isomorphism.
pub fn h2_shifted(m: &GLattice, res: &LatticeExtension) -> Result<AbelianGroupStructure> {
    if res.sub() != m {
        return Err(Error::InvalidExtension(
            "resolution does not start at the given lattice".into(),
        ));
    }
    let certified = res
        .middle()
        .permutation_certificate()
        .is_some_and(|c| c.verify(res.middle()));
    if !certified {
        return Err(Error::InvalidExtension(
            "middle term is not a certified permutation lattice".into(),
        ));
    }
    res.verify()?;
    sha_omega(1, res.quotient())
}
