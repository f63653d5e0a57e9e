//! Finitely presented abelian groups with cocycle representatives, maps
//! between them, and the kernel calculus used for Ш.
//!
//! A group is kept in Smith form: generators `e_1, .., e_t` with orders
//! `d_i` (`0` for a free generator) and relations `diag(d_1, .., d_t)`.
//! Each generator has a representative in an ambient cochain space, and a
//! projection matrix reads the coordinates of an arbitrary cocycle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    cokernel_structure, hermite_basis, kernel_basis, left_inverse_pure, smith_reduce,
    solve_integer_matrix, AbelianGroupStructure, IntMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitelyPresentedAbelianGroup {
    orders: Vec<BigInt>,
    relations: IntMatrix,
    structure: AbelianGroupStructure,
    representatives: Vec<Vec<BigInt>>,
    projection: IntMatrix,
}

impl FinitelyPresentedAbelianGroup {
    /// `orders[i]` is the order of generator `i` (0 if free), `representatives[i]`
    /// its cocycle, and row `i` of `projection` its coordinate functional.
    pub(crate) fn new(
        orders: Vec<BigInt>,
        representatives: Vec<Vec<BigInt>>,
        projection: IntMatrix,
    ) -> Self {
        debug_assert_eq!(orders.len(), representatives.len());
        debug_assert_eq!(orders.len(), projection.rows());
        let t = orders.len();
        let relations = IntMatrix::diagonal(t, t, &orders);
        let structure = AbelianGroupStructure::from_cyclic_orders(&orders, 0);
        FinitelyPresentedAbelianGroup {
            orders,
            relations,
            structure,
            representatives,
            projection,
        }
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self::new(Vec::new(), Vec::new(), IntMatrix::zeros(0, ambient_dim))
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.structure
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn representatives(&self) -> &[Vec<BigInt>] {
        &self.representatives
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }

    /// Coordinates of a cocycle, reduced modulo the generator orders.
    pub fn coordinates(&self, cocycle: &[BigInt]) -> Vec<BigInt> {
        let raw = self.projection.mul_vec(cocycle);
        raw.into_iter()
            .zip(&self.orders)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    /// True when the cocycle represents the zero class.
    pub fn is_zero_class(&self, cocycle: &[BigInt]) -> bool {
        self.coordinates(cocycle).iter().all(Zero::is_zero)
    }
}

impl Serialize for FinitelyPresentedAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.structure.serialize(s)
    }
}

/// Generators of `Z^l / image(rel)`: orders, representatives and coordinate
/// rows in `Z^l`. Unit factors are dropped, and with `torsion_only` so are
/// the free generators.
pub(crate) struct QuotientData {
    pub(crate) orders: Vec<BigInt>,
    pub(crate) representatives: Vec<Vec<BigInt>>,
    pub(crate) projection_rows: Vec<Vec<BigInt>>,
}

pub(crate) fn quotient_data(rel: &IntMatrix, torsion_only: bool) -> QuotientData {
    let red = smith_reduce(rel, false);
    let mut data = QuotientData {
        orders: Vec::new(),
        representatives: Vec::new(),
        projection_rows: Vec::new(),
    };
    for j in 0..rel.rows() {
        let d = if j < red.rank {
            red.diagonal[j].clone()
        } else {
            BigInt::zero()
        };
        if d.is_one() || (torsion_only && d.is_zero()) {
            continue;
        }
        data.orders.push(d);
        data.representatives.push(red.left.inverse_column(j));
        data.projection_rows.push(red.left.row(j));
    }
    data
}

/// `L / S` for a pure lattice `L` (basis columns `l`) containing the span of
/// the columns of `s`, both inside the ambient `Z^n`.
pub(crate) fn subquotient(l: &IntMatrix, s: &IntMatrix) -> Result<FinitelyPresentedAbelianGroup> {
    let n = l.rows();
    let y = solve_integer_matrix(l, s)?
        .ok_or_else(|| Error::Internal("sublattice is not contained in the lattice".into()))?;
    let left = left_inverse_pure(l)?;
    let data = quotient_data(&y, false);
    let reps = data.representatives.iter().map(|r| l.mul_vec(r)).collect();
    let rows = IntMatrix::from_rows(l.cols(), &data.projection_rows)?;
    let projection = if rows.rows() == 0 {
        IntMatrix::zeros(0, n)
    } else {
        &rows * &left
    };
    Ok(FinitelyPresentedAbelianGroup::new(
        data.orders,
        reps,
        projection,
    ))
}

/// A homomorphism between finitely presented groups, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomMap {
    source: FinitelyPresentedAbelianGroup,
    target: FinitelyPresentedAbelianGroup,
    matrix: IntMatrix,
}

impl CohomMap {
    /// Checks that the source relations land in the target relations.
    pub fn new(
        source: FinitelyPresentedAbelianGroup,
        target: FinitelyPresentedAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "cohomology map is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generator_count(),
                source.generator_count()
            )));
        }
        let image = &matrix * &source.relations;
        if solve_integer_matrix(&target.relations, &image)?.is_none() {
            return Err(Error::Internal("map does not respect relations".into()));
        }
        Ok(CohomMap {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &FinitelyPresentedAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FinitelyPresentedAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Kernel of the map as an abelian group.
    pub fn kernel(&self) -> AbelianGroupStructure {
        kernel_structure(&self.matrix, &self.source.relations, &self.target.relations)
    }
}

/// Kernel of `Z^s / im(ra) -> Z^t / im(rb)` induced by `phi`.
///
/// The preimage `L = { x : phi x ∈ im(rb) }` is the projection onto the
/// first `s` coordinates of `ker [phi | -rb]`. It contains `im(ra)`, and
/// the kernel is `L / im(ra)`, read off in a basis of `L`.
pub(crate) fn kernel_structure(
    phi: &IntMatrix,
    ra: &IntMatrix,
    rb: &IntMatrix,
) -> AbelianGroupStructure {
    let s = phi.cols();
    if s == 0 {
        return AbelianGroupStructure::trivial();
    }
    let joint = phi.hstack(&-rb).expect("same row count");
    let k = kernel_basis(&joint);
    let projected = k.submatrix(0..s, 0..k.cols());
    let l = hermite_basis(&projected);
    let y = solve_integer_matrix(&l, ra)
        .expect("dimensions agree")
        .expect("relations lie in the preimage");
    cokernel_structure(&y)
}

/// Direct product of presentations, generators concatenated.
pub(crate) fn block_relations(groups: &[&FinitelyPresentedAbelianGroup]) -> IntMatrix {
    let orders: Vec<BigInt> = groups
        .iter()
        .flat_map(|g| g.orders.iter().cloned())
        .collect();
    IntMatrix::diagonal(orders.len(), orders.len(), &orders)
}
