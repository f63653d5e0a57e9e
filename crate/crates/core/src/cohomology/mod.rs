//! Cohomology of finite groups with coefficients in lattices.
//!
//! For `i >= 1` the groups `H^i(G, M)` are finite, so the cocycles `Z^i` are
//! the saturation of the coboundaries `B^i` and `H^i` is the torsion of
//! `C^i / B^i`. Only the coboundary map `d_{i-1}` is ever built.
//!
//! Cochain layouts, with `n = rank M`:
//! * 1-cochains: `x_g` in block `g` of `M^{|G|}`;
//! * normalized 2-cochains: `c(g, h)` for `g, h != 1` in block
//!   `pos(g) * (|G| - 1) + pos(h)` of `M^{(|G|-1)^2}`, where `pos` skips the identity.

mod presentation;
mod sha;

pub(crate) use presentation::{kernel_structure, quotient_data, subquotient};
pub use presentation::{CohomMap, FinitelyPresentedAbelianGroup};
pub use sha::{h2_shifted, sha_omega, sha_omega_bounded};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::GLattice;
use crate::limits::Limits;
use crate::linalg::{kernel_basis, left_inverse_pure, IntMatrix};

fn block(v: &[BigInt], i: usize, n: usize) -> &[BigInt] {
    &v[i * n..(i + 1) * n]
}

/// `H^0(G, M) = M^G`, free on a saturated basis of the invariants.
pub fn h0(m: &GLattice) -> FinitelyPresentedAbelianGroup {
    let f = m.fixed_sublattice(&m.group().whole());
    let k = f.cols();
    let projection = left_inverse_pure(&f).expect("fixed sublattice is pure");
    FinitelyPresentedAbelianGroup::new(vec![BigInt::zero(); k], f.columns(), projection)
}

/// Checks `x_{gh} = x_g + g x_h` for all pairs.
pub fn is_cocycle1(m: &GLattice, x: &[BigInt]) -> bool {
    let g = m.group();
    let n = m.rank();
    if x.len() != n * g.order() {
        return false;
    }
    for a in g.elements() {
        for b in g.elements() {
            let moved = m.action(a).mul_vec(block(x, b, n));
            let ab = block(x, g.mul(a, b), n);
            let xa = block(x, a, n);
            if (0..n).any(|i| ab[i] != &xa[i] + &moved[i]) {
                return false;
            }
        }
    }
    true
}

/// The 1-coboundary `g -> g m - m`.
pub fn coboundary1(m: &GLattice, v: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m.rank() * m.group().order());
    for g in m.group().elements() {
        let gv = m.action(g).mul_vec(v);
        out.extend(gv.iter().zip(v).map(|(a, b)| a - b));
    }
    out
}

/// `H^1(G, M)`.
///
/// A crossed homomorphism is determined by its values on the generators
/// `s_1, .., s_k`, so `Z^1` embeds as a pure sublattice of `M^k` containing
/// the coboundaries `(s_j m - m)_j`. Representatives are extended to every
/// element along a spanning tree and re-checked on all pairs.
pub fn h1(m: &GLattice) -> FinitelyPresentedAbelianGroup {
    let group = m.group();
    let n = m.rank();
    let order = group.order();
    let gens = group.reduced_generators();
    let id = IntMatrix::identity(n);
    let blocks: Vec<IntMatrix> = gens.iter().map(|&s| m.action(s) - &id).collect();
    let d = IntMatrix::vstack_all(n, &blocks).expect("same width");
    let data = quotient_data(&d, true);

    let tree = group.spanning_tree(&gens);
    let mut reps = Vec::with_capacity(data.orders.len());
    for values in &data.representatives {
        let mut x = vec![BigInt::zero(); n * order];
        for (elem, parent, k) in &tree {
            let moved = m.action(*parent).mul_vec(block(values, *k, n));
            for i in 0..n {
                x[elem * n + i] = &x[parent * n + i] + &moved[i];
            }
        }
        assert!(
            is_cocycle1(m, &x),
            "H^1 representative fails the cocycle identity"
        );
        reps.push(x);
    }
    let mut projection = IntMatrix::zeros(data.orders.len(), n * order);
    for (r, row) in data.projection_rows.iter().enumerate() {
        for (k, &s) in gens.iter().enumerate() {
            for i in 0..n {
                projection[(r, s * n + i)] = row[k * n + i].clone();
            }
        }
    }
    FinitelyPresentedAbelianGroup::new(data.orders, reps, projection)
}

/// Position of each element among the non-identity elements.
fn positions(g: &FiniteGroup) -> Vec<Option<usize>> {
    let mut next = 0;
    g.elements()
        .map(|e| {
            (e != g.identity()).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Value `c(a, b)` of a normalized 2-cochain, zero when either argument is 1.
fn value2<'a>(
    c: &'a [BigInt],
    pos: &[Option<usize>],
    a: usize,
    b: usize,
    n: usize,
    zero: &'a [BigInt],
) -> &'a [BigInt] {
    match (pos[a], pos[b]) {
        (Some(i), Some(j)) => block(c, i * (pos.len() - 1) + j, n),
        _ => zero,
    }
}

/// Checks `g c(h,k) - c(gh,k) + c(g,hk) - c(g,h) = 0` for all triples on a
/// normalized 2-cochain.
pub fn is_cocycle2(m: &GLattice, c: &[BigInt]) -> bool {
    let g = m.group();
    let n = m.rank();
    let q = g.order() - 1;
    if c.len() != n * q * q {
        return false;
    }
    let pos = positions(g);
    let zero = vec![BigInt::zero(); n];
    for a in g.elements() {
        for b in g.elements() {
            for k in g.elements() {
                let t1 = m.action(a).mul_vec(value2(c, &pos, b, k, n, &zero));
                let t2 = value2(c, &pos, g.mul(a, b), k, n, &zero);
                let t3 = value2(c, &pos, a, g.mul(b, k), n, &zero);
                let t4 = value2(c, &pos, a, b, n, &zero);
                if (0..n).any(|i| !(&t1[i] - &t2[i] + &t3[i] - &t4[i]).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Coboundary `d: C^1_norm -> C^2_norm`, `(d phi)(g,h) = g phi(h) - phi(gh) + phi(g)`.
fn bar_d1(m: &GLattice) -> IntMatrix {
    let g = m.group();
    let n = m.rank();
    let q = g.order() - 1;
    let pos = positions(g);
    let id = IntMatrix::identity(n);
    let neg = -&id;
    let mut d = IntMatrix::zeros(n * q * q, n * q);
    for a in g.elements() {
        let Some(i) = pos[a] else { continue };
        for b in g.elements() {
            let Some(j) = pos[b] else { continue };
            let row = (i * q + j) * n;
            d.add_block(row, j * n, m.action(a));
            if let Some(k) = pos[g.mul(a, b)] {
                d.add_block(row, k * n, &neg);
            }
            d.add_block(row, i * n, &id);
        }
    }
    d
}

/// `H^2(G, M)` from normalized bar cochains, with the configured size cap.
pub fn h2_bar(m: &GLattice) -> Result<FinitelyPresentedAbelianGroup> {
    h2_bar_bounded(m, Limits::from_env().max_bar_order)
}

pub fn h2_bar_bounded(m: &GLattice, bound: usize) -> Result<FinitelyPresentedAbelianGroup> {
    let order = m.group().order();
    if order > bound {
        return Err(Error::GroupTooLarge {
            bound,
            what: format!("bar resolution for a group of order {order}"),
        });
    }
    let n = m.rank();
    let q = order - 1;
    let dim = n * q * q;
    if dim == 0 {
        return Ok(FinitelyPresentedAbelianGroup::trivial(dim));
    }
    let d = bar_d1(m);
    let data = quotient_data(&d, true);
    for rep in &data.representatives {
        assert!(
            is_cocycle2(m, rep),
            "H^2 representative fails the cocycle identity"
        );
    }
    let projection = IntMatrix::from_rows(dim, &data.projection_rows)?;
    let projection = if projection.rows() == 0 {
        IntMatrix::zeros(0, dim)
    } else {
        projection
    };
    Ok(FinitelyPresentedAbelianGroup::new(
        data.orders,
        data.representatives,
        projection,
    ))
}

fn norm_element(m: &GLattice, h: &Subgroup) -> IntMatrix {
    let mut total = IntMatrix::zeros(m.rank(), m.rank());
    for &e in h.elements() {
        total = &total + m.action(e);
    }
    total
}

/// Cohomology of a cyclic subgroup `H = <σ>` by periodicity:
/// degree 1 is `ker N / im(σ - 1)`, degrees 0 (Tate) and 2 are `M^H / N M`.
/// Representatives live in `M`: the value at `σ` in degree 1, an invariant
/// vector otherwise.
pub fn tate_cyclic(
    h: &Subgroup,
    m: &GLattice,
    degree: u32,
) -> Result<FinitelyPresentedAbelianGroup> {
    let sigma = h.cyclic_generator().ok_or(Error::NotCyclic)?;
    let n = m.rank();
    let norm = norm_element(m, h);
    match degree {
        1 => {
            let l = kernel_basis(&norm);
            let s = m.action(sigma) - &IntMatrix::identity(n);
            subquotient(&l, &s)
        }
        0 | 2 => tate_h0(h, m),
        _ => Err(Error::InvalidGroup(format!("unsupported degree {degree}"))),
    }
}

/// Tate `Ĥ^0(H, M) = M^H / N_H M` for any subgroup.
pub fn tate_h0(h: &Subgroup, m: &GLattice) -> Result<FinitelyPresentedAbelianGroup> {
    let l = m.fixed_sublattice(h);
    subquotient(&l, &norm_element(m, h))
}

/// Restriction of a 1-cocycle on `G` to the standalone subgroup `H`.
fn restrict_cocycle1(x: &[BigInt], h: &Subgroup, n: usize) -> Vec<BigInt> {
    h.elements()
        .iter()
        .flat_map(|&e| block(x, e, n).iter().cloned())
        .collect()
}

/// Restriction of a normalized 2-cocycle on `G` to the standalone subgroup `H`.
fn restrict_cocycle2(c: &[BigInt], g: &FiniteGroup, h: &Subgroup, n: usize) -> Vec<BigInt> {
    let pos = positions(g);
    let zero = vec![BigInt::zero(); n];
    let local: Vec<usize> = h
        .elements()
        .iter()
        .copied()
        .filter(|&e| e != g.identity())
        .collect();
    let mut out = Vec::with_capacity(n * local.len() * local.len());
    for &a in &local {
        for &b in &local {
            out.extend(value2(c, &pos, a, b, n, &zero).iter().cloned());
        }
    }
    out
}

fn restriction_map(
    source: FinitelyPresentedAbelianGroup,
    target: FinitelyPresentedAbelianGroup,
    restrict: impl Fn(&[BigInt]) -> Vec<BigInt>,
) -> Result<CohomMap> {
    let columns: Vec<Vec<BigInt>> = source
        .representatives()
        .iter()
        .map(|z| target.coordinates(&restrict(z)))
        .collect();
    let matrix = if columns.is_empty() {
        IntMatrix::zeros(target.generator_count(), 0)
    } else {
        IntMatrix::from_columns(target.generator_count(), &columns)
    };
    CohomMap::new(source, target, matrix)
}

/// `res: H^1(G, M) -> H^1(H, M)`.
pub fn restriction_h1(m: &GLattice, h: &Subgroup) -> Result<CohomMap> {
    restriction_h1_from(&h1(m), m, h)
}

/// `res: H^2(G, M) -> H^2(H, M)` on bar cocycles.
pub fn restriction_h2(m: &GLattice, h: &Subgroup) -> Result<CohomMap> {
    let bound = Limits::from_env().max_bar_order;
    restriction_h2_from(&h2_bar_bounded(m, bound)?, m, h, bound)
}

pub(crate) fn restriction_h1_from(
    source: &FinitelyPresentedAbelianGroup,
    m: &GLattice,
    h: &Subgroup,
) -> Result<CohomMap> {
    let n = m.rank();
    restriction_map(source.clone(), h1(&m.restrict(h)), |z| {
        restrict_cocycle1(z, h, n)
    })
}

pub(crate) fn restriction_h2_from(
    source: &FinitelyPresentedAbelianGroup,
    m: &GLattice,
    h: &Subgroup,
    bound: usize,
) -> Result<CohomMap> {
    let n = m.rank();
    let target = h2_bar_bounded(&m.restrict(h), bound)?;
    restriction_map(source.clone(), target, |z| {
        restrict_cocycle2(z, m.group(), h, n)
    })
}
