//! G-lattices: free finite-rank Z-modules with an action of a finite group,
//! and equivariant maps between them.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{
    cokernel_structure, complete_basis, inverse_unimodular, is_pure, kernel_basis,
    left_inverse_pure, solve_integer_matrix, IntMatrix,
};

/// Witness that a lattice's action permutes its standard basis.
///
/// Each orbit records its basis indices, the stabilizer `H` of the first
/// index, and for every index `j` of the orbit an element `g` with
/// `g e_{first} = e_j`. The orbit is therefore `Z[G/H]` with coset labels `gH`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationCertificate {
    pub orbits: Vec<PermutationOrbit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationOrbit {
    pub basis: Vec<usize>,
    pub stabilizer: Vec<usize>,
    pub coset_representatives: Vec<usize>,
}

impl PermutationCertificate {
    /// Reads a certificate off an action given by permutation matrices.
    pub fn from_action(group: &FiniteGroup, action: &[IntMatrix]) -> Option<Self> {
        let perms: Vec<Vec<usize>> = action
            .iter()
            .map(IntMatrix::as_permutation)
            .collect::<Option<_>>()?;
        let rank = action.first().map_or(0, IntMatrix::rows);
        let mut assigned = vec![false; rank];
        let mut orbits = Vec::new();
        for base in 0..rank {
            if assigned[base] {
                continue;
            }
            let mut basis = Vec::new();
            let mut reps = Vec::new();
            for g in group.elements() {
                let j = perms[g][base];
                if !assigned[j] {
                    assigned[j] = true;
                    basis.push(j);
                    reps.push(g);
                }
            }
            let stabilizer = group
                .elements()
                .filter(|&g| perms[g][base] == base)
                .collect();
            orbits.push(PermutationOrbit {
                basis,
                stabilizer,
                coset_representatives: reps,
            });
        }
        Some(PermutationCertificate { orbits })
    }

    /// Re-derives the action from the coset labels and compares it with `lattice`.
    pub fn verify(&self, lattice: &GLattice) -> bool {
        let group = lattice.group();
        let rank = lattice.rank();
        let mut covered = vec![false; rank];
        for orbit in &self.orbits {
            if orbit.basis.len() != orbit.coset_representatives.len()
                || orbit.basis.is_empty()
                || orbit.basis.len() * orbit.stabilizer.len() != group.order()
            {
                return false;
            }
            let Ok(stab) = group.subgroup(&orbit.stabilizer) else {
                return false;
            };
            for &b in &orbit.basis {
                if b >= rank || std::mem::replace(&mut covered[b], true) {
                    return false;
                }
            }
            // g e_j = e_k  iff  g * rep_j lies in rep_k H
            for g in group.elements() {
                let action = lattice.action(g);
                for (jj, &j) in orbit.basis.iter().enumerate() {
                    let moved = group.mul(g, orbit.coset_representatives[jj]);
                    let target = orbit
                        .coset_representatives
                        .iter()
                        .position(|&r| stab.contains(group.mul(group.inverse(r), moved)));
                    let Some(kk) = target else { return false };
                    let k = orbit.basis[kk];
                    for i in 0..rank {
                        let expected = if i == k {
                            BigInt::one()
                        } else {
                            BigInt::from(0)
                        };
                        if action[(i, j)] != expected {
                            return false;
                        }
                    }
                }
            }
        }
        covered.into_iter().all(|c| c)
    }
}

/// A G-lattice: `Z^rank` with an action given by one matrix per group element.
#[derive(Clone, Debug)]
pub struct GLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<IntMatrix>,
    permutation: Option<PermutationCertificate>,
}

impl PartialEq for GLattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.group == other.group && self.action == other.action
    }
}

impl Eq for GLattice {}

impl GLattice {
    /// Validates the action table: correct shapes, `action(1) = I` and
    /// `action(gh) = action(g) action(h)` for every pair. The pair check
    /// includes `(g, g^{-1})`, so every matrix is unimodular.
    pub fn new(group: Arc<FiniteGroup>, rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, a) in action.iter().enumerate() {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix of element {g} is {}x{}, expected {rank}x{rank}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        if !action[group.identity()].is_identity() {
            return Err(Error::NotHomomorphism(
                "identity does not act trivially".into(),
            ));
        }
        let permutation = PermutationCertificate::from_action(&group, &action);
        if permutation.is_some() {
            let perms: Vec<Vec<usize>> = action
                .iter()
                .map(|a| a.as_permutation().expect("checked"))
                .collect();
            for g in group.elements() {
                for h in group.elements() {
                    let gh = group.mul(g, h);
                    if (0..rank).any(|j| perms[g][perms[h][j]] != perms[gh][j]) {
                        return Err(Error::NotHomomorphism(format!("fails at ({g},{h})")));
                    }
                }
            }
        } else {
            for g in group.elements() {
                for h in group.elements() {
                    if &action[g] * &action[h] != action[group.mul(g, h)] {
                        return Err(Error::NotHomomorphism(format!("fails at ({g},{h})")));
                    }
                }
            }
        }
        Ok(GLattice {
            group,
            rank,
            action,
            permutation,
        })
    }

    /// Lattice from the images of the group's generators; the assignment is
    /// extended along a spanning tree and then checked as a homomorphism.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        rank: usize,
        images: &[IntMatrix],
    ) -> Result<Self> {
        let gens = group.generators().to_vec();
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator matrices for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for (k, m) in images.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "matrix for generator {k} is {}x{}, expected {rank}x{rank}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let action =
            group.extend_along_generators(&gens, images, IntMatrix::identity(rank), |a, b| a * b);
        for (k, &g) in gens.iter().enumerate() {
            if action[g] != images[k] {
                return Err(Error::NotHomomorphism(format!(
                    "generator {k} is assigned two different matrices"
                )));
            }
        }
        GLattice::new(group, rank, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn permutation_certificate(&self) -> Option<&PermutationCertificate> {
        self.permutation.as_ref()
    }

    pub fn is_permutation_certified(&self) -> bool {
        self.permutation.is_some()
    }

    pub fn same_group(&self, other: &GLattice) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group == other.group
    }

    pub fn trivial(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let action = vec![IntMatrix::identity(rank); group.order()];
        GLattice::new(group, rank, action).expect("trivial action")
    }

    /// `Z[G/H]` on the cosets of `h`, ordered by their least element.
    pub fn permutation(group: Arc<FiniteGroup>, h: &Subgroup) -> Result<Self> {
        let h = group.subgroup(h.elements())?;
        let (reps, coset_of) = cosets(&group, &h);
        let n = reps.len();
        let action = group
            .elements()
            .map(|g| {
                let perm: Vec<usize> = reps.iter().map(|&r| coset_of[group.mul(g, r)]).collect();
                IntMatrix::permutation(&perm)
            })
            .collect();
        GLattice::new(group, n, action)
    }

    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let trivial = group.trivial_subgroup();
        GLattice::permutation(group, &trivial).expect("trivial subgroup")
    }

    /// Rank-one lattice on which `g` acts by `character(g) ∈ {±1}`.
    pub fn character(group: Arc<FiniteGroup>, character: &[i64]) -> Result<Self> {
        let action = character
            .iter()
            .map(|&c| IntMatrix::from_i64(1, 1, &[c]))
            .collect();
        GLattice::new(group, 1, action)
    }

    /// `Hom_Z(M, Z)` with `g` acting by the transpose of `action(g^{-1})`.
    pub fn dual(&self) -> GLattice {
        let action = self
            .group
            .elements()
            .map(|g| self.action[self.group.inverse(g)].transpose())
            .collect();
        GLattice::new(self.group.clone(), self.rank, action).expect("dual of a lattice")
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        let action = self
            .group
            .elements()
            .map(|g| IntMatrix::block_diagonal(&self.action[g], &other.action[g]))
            .collect();
        GLattice::new(self.group.clone(), self.rank + other.rank, action)
    }

    /// `Hom_Z(self, target)` on row-major `target.rank x self.rank` matrices,
    /// with `(g f) = target(g) f self(g^{-1})`.
    pub fn hom(&self, target: &GLattice) -> Result<GLattice> {
        if !self.same_group(target) {
            return Err(Error::GroupMismatch);
        }
        let action = self
            .group
            .elements()
            .map(|g| {
                let inv = &self.action[self.group.inverse(g)];
                target.action[g].kron(&inv.transpose())
            })
            .collect();
        GLattice::new(self.group.clone(), self.rank * target.rank, action)
    }

    /// The same module viewed over `h`, which becomes a standalone group whose
    /// element `i` is `h.elements()[i]`.
    pub fn restrict(&self, h: &Subgroup) -> GLattice {
        let sub = Arc::new(h.to_group(&self.group));
        let action = h
            .elements()
            .iter()
            .map(|&e| self.action[e].clone())
            .collect();
        GLattice::new(sub, self.rank, action).expect("restriction of a valid action")
    }

    /// Saturated basis (columns) of the fixed sublattice `M^H`.
    pub fn fixed_sublattice(&self, h: &Subgroup) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let blocks: Vec<IntMatrix> = h
            .elements()
            .iter()
            .map(|&e| &self.action[e] - &id)
            .collect();
        let stacked = IntMatrix::vstack_all(self.rank, &blocks).expect("same width");
        kernel_basis(&stacked)
    }

    /// True when every group element maps the span of `b` into itself.
    pub fn is_stable(&self, b: &IntMatrix) -> Result<bool> {
        for &g in self.group.generators() {
            let image = &self.action[g] * b;
            if solve_integer_matrix(b, &image)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_stable_pure(&self, b: &IntMatrix) -> Result<()> {
        if b.rows() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "sublattice basis has {} rows, lattice rank is {}",
                b.rows(),
                self.rank
            )));
        }
        if crate::linalg::rank(b) != b.cols() {
            return Err(Error::DependentColumns);
        }
        if !is_pure(b) {
            return Err(Error::NotPure);
        }
        if !self.is_stable(b)? {
            return Err(Error::NotStable);
        }
        Ok(())
    }

    /// Quotient by the span of the columns of `b`, which must be a stable pure
    /// sublattice. Returns the quotient, the projection, and a Z-linear
    /// section `s` of the projection (`π s = I`).
    pub(crate) fn quotient_parts(&self, b: &IntMatrix) -> Result<(GLattice, IntMatrix, IntMatrix)> {
        self.check_stable_pure(b)?;
        let k = b.cols();
        let n = self.rank;
        let w = complete_basis(b)?;
        let winv = inverse_unimodular(&w)
            .ok_or_else(|| Error::Internal("completed basis is not unimodular".into()))?;
        let proj = winv.submatrix(k..n, 0..n);
        let section = w.submatrix(0..n, k..n);
        let action = self
            .group
            .elements()
            .map(|g| &(&proj * &self.action[g]) * &section)
            .collect();
        let quotient = GLattice::new(self.group.clone(), n - k, action)?;
        Ok((quotient, proj, section))
    }

    pub fn quotient_by_pure_sublattice(&self, b: &IntMatrix) -> Result<(GLattice, LatticeMap)> {
        let (quotient, proj, _) = self.quotient_parts(b)?;
        let map = LatticeMap::new(self.clone(), quotient.clone(), proj)?;
        Ok((quotient, map))
    }

    /// The stable pure sublattice spanned by the columns of `b`, with its inclusion.
    pub fn sublattice(&self, b: &IntMatrix) -> Result<(GLattice, LatticeMap)> {
        self.check_stable_pure(b)?;
        let left = left_inverse_pure(b)?;
        let action = self
            .group
            .elements()
            .map(|g| &(&left * &self.action[g]) * b)
            .collect();
        let sub = GLattice::new(self.group.clone(), b.cols(), action)?;
        let inclusion = LatticeMap::new(sub.clone(), self.clone(), b.clone())?;
        Ok((sub, inclusion))
    }

    /// `Z[G] / Z N` with `N` the sum of all group elements.
    pub fn norm_one(group: Arc<FiniteGroup>) -> GLattice {
        let regular = GLattice::regular(group.clone());
        let n = IntMatrix::from_columns(group.order(), &[vec![BigInt::one(); group.order()]]);
        regular
            .quotient_by_pure_sublattice(&n)
            .expect("the norm vector spans a stable pure sublattice")
            .0
    }
}

/// Left cosets `gH` ordered by their least element: the least elements, and
/// for every group element the index of its coset.
pub fn cosets(group: &FiniteGroup, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for g in group.elements() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &x in h.elements() {
            coset_of[group.mul(g, x)] = reps.len();
        }
        reps.push(g);
    }
    (reps, coset_of)
}

/// An equivariant homomorphism between lattices over the same group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    source: GLattice,
    target: GLattice,
    matrix: IntMatrix,
}

impl LatticeMap {
    /// Checks shape and `matrix * source(g) = target(g) * matrix` for every `g`.
    pub fn new(source: GLattice, target: GLattice, matrix: IntMatrix) -> Result<Self> {
        if !source.same_group(&target) {
            return Err(Error::GroupMismatch);
        }
        if matrix.rows() != target.rank || matrix.cols() != source.rank {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank,
                source.rank
            )));
        }
        for g in source.group.elements() {
            if &matrix * &source.action[g] != &target.action[g] * &matrix {
                return Err(Error::NotEquivariant(g));
            }
        }
        Ok(LatticeMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(lattice: &GLattice) -> Self {
        LatticeMap {
            source: lattice.clone(),
            target: lattice.clone(),
            matrix: IntMatrix::identity(lattice.rank),
        }
    }

    pub fn source(&self) -> &GLattice {
        &self.source
    }

    pub fn target(&self) -> &GLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ first`
    pub fn after(&self, first: &LatticeMap) -> Result<LatticeMap> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch(
                "composed maps do not match".into(),
            ));
        }
        Ok(LatticeMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// The transpose map `target° -> source°`.
    pub fn dual(&self) -> LatticeMap {
        LatticeMap {
            source: self.target.dual(),
            target: self.source.dual(),
            matrix: self.matrix.transpose(),
        }
    }

    pub fn is_injective(&self) -> bool {
        crate::linalg::rank(&self.matrix) == self.source.rank
    }

    pub fn is_surjective(&self) -> bool {
        cokernel_structure(&self.matrix).is_trivial()
    }

    /// Saturated kernel basis.
    pub fn kernel(&self) -> IntMatrix {
        kernel_basis(&self.matrix)
    }
}

pub fn trivial_lattice(group: Arc<FiniteGroup>, n: usize) -> GLattice {
    GLattice::trivial(group, n)
}

pub fn permutation_lattice(group: Arc<FiniteGroup>, h: &Subgroup) -> Result<GLattice> {
    GLattice::permutation(group, h)
}

pub fn dual(m: &GLattice) -> GLattice {
    m.dual()
}

pub fn direct_sum(m: &GLattice, n: &GLattice) -> Result<GLattice> {
    m.direct_sum(n)
}

pub fn hom_lattice(m: &GLattice, n: &GLattice) -> Result<GLattice> {
    m.hom(n)
}

pub fn restrict(m: &GLattice, h: &Subgroup) -> GLattice {
    m.restrict(h)
}

pub fn fixed_sublattice(m: &GLattice, h: &Subgroup) -> IntMatrix {
    m.fixed_sublattice(h)
}

pub fn quotient_by_pure_sublattice(m: &GLattice, b: &IntMatrix) -> Result<(GLattice, LatticeMap)> {
    m.quotient_by_pure_sublattice(b)
}

pub fn norm_one_lattice(group: Arc<FiniteGroup>) -> GLattice {
    GLattice::norm_one(group)
}
