//! Exact integer linear algebra: normal forms, kernels, cokernels and
//! integral solving. Everything downstream reduces to these routines.

mod abelian;
mod matrix;
mod smith;

pub use abelian::AbelianGroupStructure;
pub use matrix::IntMatrix;
pub use smith::{snf, SmithDecomposition};

pub(crate) use abelian::bigint_json;
pub(crate) use smith::{smith_reduce, SmithReduction};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Canonical basis (column Hermite form) of the lattice spanned by the columns of `b`.
///
/// The output has full column rank, each basis vector has a positive leading
/// entry, and entries sharing a pivot row are reduced into `[0, pivot)`.
/// Two spanning sets of the same lattice give identical outputs.
pub fn hermite_basis(b: &IntMatrix) -> IntMatrix {
    let n = b.rows();
    let mut vecs: Vec<Vec<BigInt>> = b.columns();
    let mut pivot_row = 0;
    for coord in 0..n {
        if pivot_row >= vecs.len() {
            break;
        }
        loop {
            let best = (pivot_row..vecs.len())
                .filter(|&r| !vecs[r][coord].is_zero())
                .min_by_key(|&r| vecs[r][coord].abs());
            let Some(best) = best else { break };
            vecs.swap(pivot_row, best);
            let p = vecs[pivot_row][coord].clone();
            let mut clean = true;
            for r in pivot_row + 1..vecs.len() {
                if vecs[r][coord].is_zero() {
                    continue;
                }
                let q = vecs[r][coord].div_floor(&p);
                axpy(&mut vecs, r, pivot_row, &-q);
                if !vecs[r][coord].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if pivot_row < vecs.len() && !vecs[pivot_row][coord].is_zero() {
            if vecs[pivot_row][coord].is_negative() {
                for x in &mut vecs[pivot_row] {
                    *x = -&*x;
                }
            }
            let p = vecs[pivot_row][coord].clone();
            for r in 0..pivot_row {
                let q = vecs[r][coord].div_floor(&p);
                if !q.is_zero() {
                    axpy(&mut vecs, r, pivot_row, &-q);
                }
            }
            pivot_row += 1;
        }
    }
    vecs.truncate(pivot_row);
    IntMatrix::from_columns(n, &vecs)
}

fn axpy(vecs: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = vecs[source].clone();
    for (t, s) in vecs[target].iter_mut().zip(&src) {
        if !s.is_zero() {
            *t += factor * s;
        }
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_reduce(m, false).rank
}

/// Saturated basis of the integer null space `{x : M x = 0}`, in canonical form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let red = smith_reduce(m, true);
    let v = red.right.expect("tracked");
    let idx: Vec<usize> = (red.rank..m.cols()).collect();
    hermite_basis(&v.select_columns(&idx))
}

/// Isomorphism class of `Z^rows / image(M)`.
pub fn cokernel_structure(m: &IntMatrix) -> AbelianGroupStructure {
    let red = smith_reduce(m, false);
    let factors: Vec<BigInt> = red.diagonal[..red.rank]
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    AbelianGroupStructure::from_invariant_factors(factors, m.rows() - red.rank)
        .expect("smith diagonal forms a divisibility chain")
}

/// Integral solution of `M x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let red = smith_reduce(m, true);
    Ok(solve_with(&red, m.cols(), b))
}

pub(crate) fn solve_with(red: &SmithReduction, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut c = b.to_vec();
    red.left.apply(&mut c);
    let mut y = vec![BigInt::zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        if i < red.rank {
            let (q, r) = ci.div_rem(&red.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(red.right.as_ref().expect("tracked").mul_vec(&y))
}

/// Solves `M X = B` column by column; `None` if any column has no integral solution.
pub fn solve_integer_matrix(m: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    if b.rows() != m.rows() {
        return Err(Error::DimensionMismatch("solve: row counts differ".into()));
    }
    let red = smith_reduce(m, true);
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        match solve_with(&red, m.cols(), &b.column(j)) {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(IntMatrix::from_columns(m.cols(), &cols)))
}

/// Basis of the saturation of the span of the columns of `b`.
pub fn saturate(b: &IntMatrix) -> Result<IntMatrix> {
    let red = smith_reduce(b, false);
    if red.rank != b.cols() {
        return Err(Error::DependentColumns);
    }
    let cols: Vec<Vec<BigInt>> = (0..red.rank).map(|i| red.left.inverse_column(i)).collect();
    Ok(hermite_basis(&IntMatrix::from_columns(b.rows(), &cols)))
}

/// True when the columns are independent and span a pure sublattice.
pub fn is_pure(b: &IntMatrix) -> bool {
    let red = smith_reduce(b, false);
    red.rank == b.cols() && red.diagonal[..red.rank].iter().all(One::is_one)
}

/// Integral left inverse `L` (with `L B = I`) of a basis of a pure sublattice.
pub fn left_inverse_pure(b: &IntMatrix) -> Result<IntMatrix> {
    let red = smith_reduce(b, true);
    if red.rank != b.cols() {
        return Err(Error::DependentColumns);
    }
    if !red.diagonal[..red.rank].iter().all(One::is_one) {
        return Err(Error::NotPure);
    }
    let k = b.cols();
    let top: Vec<Vec<BigInt>> = (0..k).map(|i| red.left.row(i)).collect();
    let top = IntMatrix::from_rows(b.rows(), &top)?;
    Ok(red.right.as_ref().expect("tracked") * &top)
}

/// Inverse of a unimodular matrix, `None` if the matrix is not unimodular.
pub fn inverse_unimodular(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let red = smith_reduce(m, true);
    if red.rank != m.rows() || !red.diagonal.iter().all(One::is_one) {
        return None;
    }
    // U M V = I  =>  M^{-1} = V U
    Some(red.right.as_ref().expect("tracked") * &red.left.to_matrix())
}

/// Completes the basis `b` of a pure sublattice to a unimodular matrix `[b | c]`.
///
/// Standard basis vectors are preferred for the complement so quotients get
/// readable coordinates; otherwise the Smith transform supplies one.
pub fn complete_basis(b: &IntMatrix) -> Result<IntMatrix> {
    if !is_pure(b) {
        return Err(Error::NotPure);
    }
    let n = b.rows();
    let mut current = b.clone();
    for j in 0..n {
        if current.cols() == n {
            break;
        }
        let mut e = IntMatrix::zeros(n, 1);
        e[(j, 0)] = BigInt::one();
        let candidate = current.hstack(&e)?;
        if is_pure(&candidate) {
            current = candidate;
        }
    }
    if current.cols() == n {
        return Ok(current);
    }
    let red = smith_reduce(b, false);
    let extra: Vec<Vec<BigInt>> = (b.cols()..n).map(|i| red.left.inverse_column(i)).collect();
    b.hstack(&IntMatrix::from_columns(n, &extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity_and_zero() {
        let d = snf(&IntMatrix::identity(2));
        assert_eq!(d.diagonal(), ints(&[1, 1]));
        let z = snf(&IntMatrix::zeros(3, 2));
        assert!(z.s.is_zero());
        assert!(z.u.is_unimodular() && z.v.is_unimodular());
    }

    #[test]
    fn snf_two_by_two() {
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        let d = snf(&m);
        assert_eq!(d.diagonal(), ints(&[2, 4]));
        assert_eq!(&(&d.u * &m) * &d.v, d.s);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_basis(&IntMatrix::from_i64(1, 2, &[1, 1]));
        assert_eq!(k, IntMatrix::from_i64(2, 1, &[1, -1]));
        let k = kernel_basis(&IntMatrix::from_i64(1, 2, &[2, 4]));
        assert_eq!(k, IntMatrix::from_i64(2, 1, &[2, -1]));
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel_structure(&IntMatrix::identity(4)).is_trivial());
        let z2 = cokernel_structure(&IntMatrix::from_i64(1, 1, &[2]));
        assert_eq!(z2, AbelianGroupStructure::cyclic(2));
        let mixed = cokernel_structure(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 0]));
        assert_eq!(mixed.invariant_factors(), &ints(&[2])[..]);
        assert_eq!(mixed.free_rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let b = ints(&[3, -7]);
        assert_eq!(solve_integer(&IntMatrix::identity(2), &b).unwrap(), Some(b));
        assert_eq!(
            solve_integer(&IntMatrix::from_i64(1, 1, &[2]), &ints(&[1])).unwrap(),
            None
        );
        let m = IntMatrix::from_i64(1, 2, &[2, 3]);
        let x = solve_integer(&m, &ints(&[1])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), ints(&[1]));
        assert!(solve_integer(&m, &ints(&[1, 2])).is_err());
    }

    #[test]
    fn saturate_examples() {
        let e1 = IntMatrix::from_i64(2, 1, &[1, 0]);
        assert_eq!(saturate(&e1).unwrap(), e1);
        assert_eq!(saturate(&IntMatrix::from_i64(2, 1, &[2, 0])).unwrap(), e1);
        // full rank in Z^2, so the saturation is everything
        let b = IntMatrix::from_i64(2, 2, &[2, 0, 2, 4]);
        assert_eq!(saturate(&b).unwrap(), IntMatrix::identity(2));
        let dep = IntMatrix::from_i64(2, 2, &[1, 2, 1, 2]);
        assert_eq!(saturate(&dep), Err(Error::DependentColumns));
    }

    #[test]
    fn complete_basis_prefers_standard_vectors() {
        let n = IntMatrix::from_i64(3, 1, &[1, 1, 1]);
        let w = complete_basis(&n).unwrap();
        assert!(w.is_unimodular());
        let b = IntMatrix::from_i64(2, 1, &[2, 3]);
        assert!(complete_basis(&b).unwrap().is_unimodular());
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = inverse_unimodular(&m).unwrap();
        assert!((&m * &inv).is_identity());
        assert!(inverse_unimodular(&IntMatrix::from_i64(1, 1, &[2])).is_none());
    }
}
