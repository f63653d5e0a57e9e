//! Short exact sequences of lattices and the operations on them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cohomology::{h1, FinitelyPresentedAbelianGroup};
use crate::error::{Error, Result};
use crate::lattice::{GLattice, LatticeMap};
use crate::linalg::{
    cokernel_structure, inverse_unimodular, is_pure, kernel_basis, left_inverse_pure, rank,
    solve_integer, solve_integer_matrix, AbelianGroupStructure, IntMatrix,
};

/// `0 -> A -> E -> C -> 0`, verified exact at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeExtension {
    inject: LatticeMap,
    project: LatticeMap,
}

impl LatticeExtension {
    pub fn new(inject: LatticeMap, project: LatticeMap) -> Result<Self> {
        let ext = LatticeExtension { inject, project };
        ext.verify()?;
        Ok(ext)
    }

    /// Re-checks exactness: `inject` injective with saturated image,
    /// `project ∘ inject = 0`, equal ranks of image and kernel (both
    /// saturated, so equal), and `project` surjective.
    pub fn verify(&self) -> Result<()> {
        let i = self.inject.matrix();
        let p = self.project.matrix();
        if self.inject.target() != self.project.source() {
            return Err(Error::InvalidExtension("maps do not compose".into()));
        }
        if rank(i) != i.cols() {
            return Err(Error::InvalidExtension("injection is not injective".into()));
        }
        if !is_pure(i) {
            return Err(Error::InvalidExtension(
                "image of the injection is not saturated".into(),
            ));
        }
        if !(p * i).is_zero() {
            return Err(Error::InvalidExtension("composite is not zero".into()));
        }
        if i.cols() + rank(p) != i.rows() {
            return Err(Error::InvalidExtension("not exact in the middle".into()));
        }
        if !cokernel_structure(p).is_trivial() {
            return Err(Error::NotSurjective);
        }
        Ok(())
    }

    /// `0 -> ker p -> E -> C -> 0` for a surjection `p`.
    pub fn from_surjection(project: LatticeMap) -> Result<Self> {
        if !project.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let k = project.kernel();
        let (_, inject) = project.source().sublattice(&k)?;
        LatticeExtension::new(inject, project)
    }

    /// `0 -> B -> E -> E/B -> 0` for a stable pure sublattice with basis `b`.
    pub fn from_sublattice(e: &GLattice, b: &IntMatrix) -> Result<Self> {
        let (_, inject) = e.sublattice(b)?;
        let (_, project) = e.quotient_by_pure_sublattice(b)?;
        LatticeExtension::new(inject, project)
    }

    /// `0 -> A -> A ⊕ C -> C -> 0`.
    pub fn split(a: &GLattice, c: &GLattice) -> Result<Self> {
        let e = a.direct_sum(c)?;
        let (ra, rc) = (a.rank(), c.rank());
        let mut i = IntMatrix::zeros(ra + rc, ra);
        i.set_block(0, 0, &IntMatrix::identity(ra));
        let mut p = IntMatrix::zeros(rc, ra + rc);
        p.set_block(0, ra, &IntMatrix::identity(rc));
        LatticeExtension::new(
            LatticeMap::new(a.clone(), e.clone(), i)?,
            LatticeMap::new(e, c.clone(), p)?,
        )
    }

    /// The dual sequence `0 -> C° -> E° -> A° -> 0`.
    pub fn dual(&self) -> LatticeExtension {
        LatticeExtension {
            inject: self.project.dual(),
            project: self.inject.dual(),
        }
    }

    pub fn inject(&self) -> &LatticeMap {
        &self.inject
    }

    pub fn project(&self) -> &LatticeMap {
        &self.project
    }

    /// `A`
    pub fn sub(&self) -> &GLattice {
        self.inject.source()
    }

    /// `E`
    pub fn middle(&self) -> &GLattice {
        self.inject.target()
    }

    /// `C`
    pub fn quotient(&self) -> &GLattice {
        self.project.target()
    }
}

/// `Ext^1(C, A) = H^1(G, Hom(C, A))`, valid because `C` is free over `Z`.
pub fn ext1(c: &GLattice, a: &GLattice) -> Result<AbelianGroupStructure> {
    Ok(h1(&c.hom(a)?).structure().clone())
}

/// Class of an extension in `H^1(G, Hom(C, A))`: the presentation and the
/// coordinates of the class.
///
/// With a Z-linear section `s` of the projection, `g s g^{-1} - s` lands in
/// the image of `A`, and its preimage `φ_g` is a crossed homomorphism.
pub fn extension_class(
    ext: &LatticeExtension,
) -> Result<(FinitelyPresentedAbelianGroup, Vec<BigInt>)> {
    let (a, e, c) = (ext.sub(), ext.middle(), ext.quotient());
    let group = e.group();
    let i = ext.inject.matrix();
    let p = ext.project.matrix();
    let s = solve_integer_matrix(p, &IntMatrix::identity(c.rank()))?.ok_or(Error::NotSurjective)?;
    let (ra, rc) = (a.rank(), c.rank());
    let mut cocycle = Vec::with_capacity(ra * rc * group.order());
    for g in group.elements() {
        let conj = &(e.action(g) * &s) * c.action(group.inverse(g));
        let f = &conj - &s;
        let phi = solve_integer_matrix(i, &f)?
            .ok_or_else(|| Error::Internal("failure cocycle leaves the sublattice".into()))?;
        cocycle.extend(phi.entries().iter().cloned());
    }
    let hom = c.hom(a)?;
    let presentation = h1(&hom);
    let coords = presentation.coordinates(&cocycle);
    Ok((presentation, coords))
}

/// An equivariant section of the projection, when one exists.
///
/// Solves `p S = I` together with `E(g) S = S C(g)` for the generators,
/// a linear system in the entries of `S`.
pub fn is_split(ext: &LatticeExtension) -> Result<Option<LatticeMap>> {
    let (e, c) = (ext.middle(), ext.quotient());
    let (re, rc) = (e.rank(), c.rank());
    let p = ext.project.matrix();
    let var = |i: usize, j: usize| i * rc + j;
    let gens = e.group().reduced_generators();
    let rows = rc * rc + gens.len() * re * rc;
    let mut m = IntMatrix::zeros(rows, re * rc);
    let mut rhs = vec![BigInt::zero(); rows];
    // p S = I
    for k in 0..rc {
        for j in 0..rc {
            let row = k * rc + j;
            for i in 0..re {
                m[(row, var(i, j))] = p[(k, i)].clone();
            }
            if k == j {
                rhs[row] = BigInt::one();
            }
        }
    }
    // E(g) S - S C(g) = 0
    for (t, &g) in gens.iter().enumerate() {
        let eg = e.action(g);
        let cg = c.action(g);
        for a in 0..re {
            for j in 0..rc {
                let row = rc * rc + (t * re + a) * rc + j;
                for i in 0..re {
                    m[(row, var(i, j))] += &eg[(a, i)];
                }
                for l in 0..rc {
                    m[(row, var(a, l))] -= &cg[(l, j)];
                }
            }
        }
    }
    let Some(x) = solve_integer(&m, &rhs)? else {
        return Ok(None);
    };
    let section = IntMatrix::from_vec(re, rc, x)?;
    if !(p * &section).is_identity() {
        return Err(Error::Internal(
            "section does not split the projection".into(),
        ));
    }
    Ok(Some(LatticeMap::new(c.clone(), e.clone(), section)?))
}

/// Equivariant section of a surjection `E -> P` onto a certified permutation
/// lattice. For each orbit `Z[G/H]` a vector of `E^H` over the base vector is
/// found by an integer solve, then transported along the coset labels.
/// Returns `None` when some base vector has no `H`-invariant lift.
pub fn permutation_section(project: &LatticeMap) -> Result<Option<IntMatrix>> {
    let (e, p) = (project.source(), project.target());
    let cert = p
        .permutation_certificate()
        .ok_or_else(|| Error::InvalidExtension("target is not a permutation lattice".into()))?;
    let group = e.group();
    let mut section = IntMatrix::zeros(e.rank(), p.rank());
    for orbit in &cert.orbits {
        let h = group.subgroup(&orbit.stabilizer)?;
        let fixed = e.fixed_sublattice(&h);
        let images = project.matrix() * &fixed;
        let mut target = vec![BigInt::zero(); p.rank()];
        target[orbit.basis[0]] = BigInt::one();
        let Some(y) = solve_integer(&images, &target)? else {
            return Ok(None);
        };
        let lift = fixed.mul_vec(&y);
        let base_rep = orbit.coset_representatives[0];
        let base = e.action(group.inverse(base_rep)).mul_vec(&lift);
        for (&j, &r) in orbit.basis.iter().zip(&orbit.coset_representatives) {
            let v = e.action(r).mul_vec(&base);
            for (i, x) in v.into_iter().enumerate() {
                section[(i, j)] = x;
            }
        }
    }
    Ok(Some(section))
}

/// Push-out of `0 -> A -> E -> C -> 0` along `f: A -> B`:
/// `0 -> B -> (B ⊕ E) / {(f a, -i a)} -> C -> 0`.
pub fn pushout(ext: &LatticeExtension, f: &LatticeMap) -> Result<LatticeExtension> {
    if f.source() != ext.sub() {
        return Err(Error::InvalidExtension(
            "push-out map does not start at the sublattice".into(),
        ));
    }
    let b = f.target();
    let e = ext.middle();
    let (rb, re) = (b.rank(), e.rank());
    let sum = b.direct_sum(e)?;
    let relations = f.matrix().vstack(&-ext.inject.matrix())?;
    let (pushed, proj, section) = sum.quotient_parts(&relations)?;
    let mut include_b = IntMatrix::zeros(rb + re, rb);
    include_b.set_block(0, 0, &IntMatrix::identity(rb));
    let mut onto_c = IntMatrix::zeros(ext.quotient().rank(), rb + re);
    onto_c.set_block(0, rb, ext.project.matrix());
    let inject = LatticeMap::new(b.clone(), pushed.clone(), &proj * &include_b)?;
    let project = LatticeMap::new(pushed, ext.quotient().clone(), &onto_c * &section)?;
    LatticeExtension::new(inject, project)
}

/// From `0 -> Q -> P -> T -> 0` and `0 -> P1 -> F -> T -> 0` with `P`, `P1`
/// permutation lattices, builds `0 -> Q -> P ⊕ P1 -> F -> 0`.
///
/// The fibered product `Ê = ker(α, -β) ⊂ P ⊕ F` sits in
/// `0 -> Q -> Ê -> F -> 0` and `0 -> P1 -> Ê -> P -> 0`. The second sequence
/// splits because `P` is a permutation lattice and `H^1(H, P1) = 0`; an
/// explicit section `σ` gives the isomorphism `[σ | ι]: P ⊕ P1 -> Ê`.
pub fn pullback_resolution(
    res_t: &LatticeExtension,
    res_f: &LatticeExtension,
) -> Result<LatticeExtension> {
    if res_t.quotient() != res_f.quotient() {
        return Err(Error::InvalidExtension(
            "the two sequences end at different lattices".into(),
        ));
    }
    let (p, f, p1, q) = (res_t.middle(), res_f.middle(), res_f.sub(), res_t.sub());
    let (rp, rf) = (p.rank(), f.rank());
    let ambient = p.direct_sum(f)?;
    let alpha = res_t.project.matrix();
    let beta = res_f.project.matrix();
    let k = kernel_basis(&alpha.hstack(&-beta)?);
    let (hat_e, _) = ambient.sublattice(&k)?;
    let left = left_inverse_pure(&k)?;

    let mut first = IntMatrix::zeros(rp, rp + rf);
    first.set_block(0, 0, &IntMatrix::identity(rp));
    let mut second = IntMatrix::zeros(rf, rp + rf);
    second.set_block(0, rp, &IntMatrix::identity(rf));
    let onto_p = LatticeMap::new(hat_e.clone(), p.clone(), &first * &k)?;
    let onto_f = LatticeMap::new(hat_e.clone(), f.clone(), &second * &k)?;

    let mut from_q = IntMatrix::zeros(rp + rf, q.rank());
    from_q.set_block(0, 0, res_t.inject.matrix());
    let mut from_p1 = IntMatrix::zeros(rp + rf, p1.rank());
    from_p1.set_block(rp, 0, res_f.inject.matrix());
    let iota = &left * &from_p1;
    let q_into_e = &left * &from_q;

    let sigma = permutation_section(&onto_p)?.ok_or_else(|| {
        Error::Internal("middle column of the fibered product does not split".into())
    })?;
    let phi = sigma.hstack(&iota)?;
    let phi_inv = inverse_unimodular(&phi).ok_or_else(|| {
        Error::Internal("section and kernel do not span the fibered product".into())
    })?;
    let middle = p.direct_sum(p1)?;
    LatticeMap::new(middle.clone(), hat_e, phi.clone())?;
    let inject = LatticeMap::new(q.clone(), middle.clone(), &phi_inv * &q_into_e)?;
    let project = LatticeMap::new(middle, f.clone(), onto_f.matrix() * &phi)?;
    LatticeExtension::new(inject, project)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn sign() -> GLattice {
        GLattice::character(c2(), &[1, -1]).unwrap()
    }

    /// `0 -> sign -> Z[C2] -> Z -> 0`
    fn sign_into_regular() -> LatticeExtension {
        let reg = GLattice::regular(c2());
        let aug = LatticeMap::new(
            reg,
            GLattice::trivial(c2(), 1),
            IntMatrix::from_i64(1, 2, &[1, 1]),
        )
        .unwrap();
        LatticeExtension::from_surjection(aug).unwrap()
    }

    #[test]
    fn exactness_is_checked() {
        let ext = sign_into_regular();
        assert_eq!(ext.sub(), &sign());
        let reg = GLattice::regular(c2());
        // 2 x (1, 1): image not saturated
        let bad = LatticeMap::new(
            GLattice::trivial(c2(), 1),
            reg.clone(),
            IntMatrix::from_i64(2, 1, &[2, 2]),
        )
        .unwrap();
        let proj = LatticeMap::new(reg, sign(), IntMatrix::from_i64(1, 2, &[1, -1])).unwrap();
        assert!(LatticeExtension::new(bad, proj).is_err());
    }

    #[test]
    fn ext1_examples() {
        assert_eq!(
            ext1(&GLattice::trivial(c2(), 1), &sign()).unwrap(),
            AbelianGroupStructure::cyclic(2)
        );
        let trivial = Arc::new(FiniteGroup::trivial());
        assert!(ext1(
            &GLattice::trivial(trivial.clone(), 2),
            &GLattice::trivial(trivial, 3)
        )
        .unwrap()
        .is_trivial());
    }

    #[test]
    fn splitting() {
        let split = LatticeExtension::split(&sign(), &GLattice::trivial(c2(), 1)).unwrap();
        assert!(is_split(&split).unwrap().is_some());
        let ext = sign_into_regular();
        assert!(is_split(&ext).unwrap().is_none());
        let (presentation, coords) = extension_class(&ext).unwrap();
        assert_eq!(presentation.structure(), &AbelianGroupStructure::cyclic(2));
        assert!(coords.iter().any(|x| !x.is_zero()));
        let (_, coords) = extension_class(&split).unwrap();
        assert!(coords.iter().all(Zero::is_zero));
    }

    #[test]
    fn dual_sequence() {
        let ext = sign_into_regular();
        let d = ext.dual();
        d.verify().unwrap();
        assert_eq!(d.sub(), &GLattice::trivial(c2(), 1));
        assert_eq!(d.dual(), ext);
    }

    #[test]
    fn pushout_along_identity() {
        let ext = sign_into_regular();
        let id = LatticeMap::identity(ext.sub());
        let pushed = pushout(&ext, &id).unwrap();
        assert_eq!(pushed.middle().rank(), 2);
        assert!(is_split(&pushed).unwrap().is_none());
    }

    #[test]
    fn pullback_with_zero_end() {
        // T = 0: the output is Q -> P ⊕ P1 -> F with F = P1
        let g = c2();
        let zero = GLattice::trivial(g.clone(), 0);
        let reg = GLattice::regular(g.clone());
        let res_t = LatticeExtension::new(
            LatticeMap::identity(&reg),
            LatticeMap::new(reg.clone(), zero.clone(), IntMatrix::zeros(0, 2)).unwrap(),
        )
        .unwrap();
        let z = GLattice::trivial(g, 1);
        let res_f = LatticeExtension::new(
            LatticeMap::identity(&z),
            LatticeMap::new(z.clone(), zero, IntMatrix::zeros(0, 1)).unwrap(),
        )
        .unwrap();
        let out = pullback_resolution(&res_t, &res_f).unwrap();
        assert_eq!(out.middle(), &reg.direct_sum(&z).unwrap());
        assert!(is_split(&out).unwrap().is_some());
    }
}
