//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The cohomology oracles avoid the library's cochain code. They use
//! `H^1(G, M) = (M/nM)^G / (M^G + nM)` for `n = |G|`, which holds because `n`
//! kills `H^1`, and `H^2(G, M) = H^1(G, M ⊗ J)` for `J = Z[G]/Z·N`, which comes
//! from the induced lattice `M ⊗ Z[G]`. Both identities commute with
//! restriction, so they also give `Ш^1_ω` and `Ш^2_ω`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use flasque_lab::catalog;
use flasque_lab::cohomology::h1;
use flasque_lab::flasque::LatticeExtension;
use flasque_lab::group::FiniteGroup;
use flasque_lab::lattice::{GLattice, LatticeMap};
use flasque_lab::linalg::{kernel_basis, AbelianGroupStructure, IntMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn group(name: &str) -> Arc<FiniteGroup> {
    catalog::group(name).unwrap()
}

pub fn catalog_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    catalog::GROUP_NAMES
        .iter()
        .map(|&n| (n, group(n)))
        .collect()
}

/// Small lattices over `g`: trivial, characters of index-two subgroups,
/// permutation lattices of every subgroup class, the norm-one lattice and its dual.
pub fn small_lattices(g: &Arc<FiniteGroup>) -> Vec<(String, GLattice)> {
    let mut out = vec![("Z".to_string(), GLattice::trivial(g.clone(), 1))];
    for h in g.all_subgroups() {
        if 2 * h.order() == g.order() {
            let chi: Vec<i64> = g
                .elements()
                .map(|e| if h.contains(e) { 1 } else { -1 })
                .collect();
            out.push((
                format!("sign{:?}", h.elements()),
                GLattice::character(g.clone(), &chi).unwrap(),
            ));
        }
    }
    for class in g.subgroup_conjugacy_classes() {
        let h = &class.representative;
        out.push((
            format!("Z[G/{:?}]", h.elements()),
            GLattice::permutation(g.clone(), h).unwrap(),
        ));
    }
    out.push(("J".to_string(), GLattice::norm_one(g.clone())));
    out.push(("I".to_string(), GLattice::norm_one(g.clone()).dual()));
    out
}

/// Every subgroup of `g`, as sorted element lists, by testing all subsets.
pub fn brute_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let elems: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if !elems.contains(&g.identity()) {
            continue;
        }
        let closed = elems
            .iter()
            .all(|&a| elems.iter().all(|&b| mask & (1 << g.mul(a, b)) != 0));
        if closed {
            out.insert(elems);
        }
    }
    out
}

/// Cyclic subgroups `<g>` by taking powers.
pub fn brute_cyclic_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    g.elements()
        .map(|x| {
            let mut s = BTreeSet::from([g.identity()]);
            let mut p = x;
            while p != g.identity() {
                s.insert(p);
                p = g.mul(p, x);
            }
            s.into_iter().collect()
        })
        .collect()
}

fn to_i64(m: &IntMatrix) -> Vec<i64> {
    m.entries().iter().map(|x| x.to_i64().unwrap()).collect()
}

fn apply_mod(a: &[i64], v: &[i64], n: i64) -> Vec<i64> {
    let r = v.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| a[i * r + j] * v[j])
                .sum::<i64>()
                .rem_euclid(n)
        })
        .collect()
}

/// Reductions mod `n` of the sublattice fixed by `elems`.
fn fixed_mod(m: &GLattice, elems: &[usize], n: i64) -> HashSet<Vec<i64>> {
    let r = m.rank();
    let blocks: Vec<IntMatrix> = elems
        .iter()
        .map(|&g| m.action(g) - &IntMatrix::identity(r))
        .collect();
    let stacked = IntMatrix::vstack_all(r, &blocks).unwrap();
    let basis = kernel_basis(&stacked);
    let cols: Vec<Vec<i64>> = (0..basis.cols())
        .map(|j| {
            basis
                .column(j)
                .iter()
                .map(|x| x.to_i64().unwrap())
                .collect()
        })
        .collect();
    let mut out = HashSet::from([vec![0; r]]);
    for c in &cols {
        let mut next = HashSet::new();
        for v in &out {
            for k in 0..n {
                next.insert(
                    v.iter()
                        .zip(c)
                        .map(|(a, b)| (a + k * b).rem_euclid(n))
                        .collect::<Vec<i64>>(),
                );
            }
        }
        out = next;
    }
    out
}

fn prime_factors(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    out
}

/// Above this many residue vectors the oracle declines.
pub const ORACLE_LIMIT: u64 = 300_000;

/// `{x in (M/n)^G : x in (M^H + nM) for every H in kill} / (M^G + nM)`.
fn brute_quotient(m: &GLattice, kill: &[Vec<usize>]) -> Option<AbelianGroupStructure> {
    let g = m.group();
    let n = g.order() as i64;
    let r = m.rank();
    if (n as u64)
        .checked_pow(r as u32)
        .is_none_or(|t| t > ORACLE_LIMIT)
    {
        return None;
    }
    let actions: Vec<Vec<i64>> = m.actions().iter().map(to_i64).collect();
    let all: Vec<usize> = g.elements().collect();
    let y = fixed_mod(m, &all, n);
    let killers: Vec<HashSet<Vec<i64>>> = kill.iter().map(|h| fixed_mod(m, h, n)).collect();
    let mut xs = Vec::new();
    let total = n.pow(r as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..r)
            .map(|_| {
                let x = c % n;
                c /= n;
                x
            })
            .collect();
        if actions.iter().all(|a| apply_mod(a, &v, n) == v)
            && killers.iter().all(|k| k.contains(&v))
        {
            xs.push(v);
        }
    }
    // |Q[d]| = #{x : d x in Y} / |Y|
    let torsion = |d: i64| -> usize {
        let count = xs
            .iter()
            .filter(|x| {
                y.contains(
                    &x.iter()
                        .map(|t| (t * d).rem_euclid(n))
                        .collect::<Vec<i64>>(),
                )
            })
            .count();
        assert_eq!(count % y.len(), 0);
        count / y.len()
    };
    let mut orders = Vec::new();
    for (p, a) in prime_factors(n) {
        let logs: Vec<u32> = (0..=a)
            .map(|k| {
                let size = torsion(p.pow(k));
                let mut e = 0;
                let mut s = size;
                while s > 1 {
                    assert_eq!(s % p as usize, 0);
                    s /= p as usize;
                    e += 1;
                }
                e
            })
            .collect();
        // factors of exponent >= k number logs[k] - logs[k - 1]
        for k in 1..=a as usize {
            let at_least = logs[k] - logs[k - 1];
            let at_least_next = if k < a as usize {
                logs[k + 1] - logs[k]
            } else {
                0
            };
            for _ in 0..(at_least - at_least_next) {
                orders.push(BigInt::from(p.pow(k as u32)));
            }
        }
    }
    Some(AbelianGroupStructure::from_cyclic_orders(&orders, 0))
}

pub fn brute_h1(m: &GLattice) -> Option<AbelianGroupStructure> {
    brute_quotient(m, &[])
}

pub fn brute_sha1(m: &GLattice) -> Option<AbelianGroupStructure> {
    let cyclic: Vec<Vec<usize>> = brute_cyclic_subgroups(m.group()).into_iter().collect();
    brute_quotient(m, &cyclic)
}

/// `M ⊗ J` with `J = Z[G]/Z·N` written on the images of the non-identity elements.
pub fn tensor_with_j(m: &GLattice) -> GLattice {
    let g = m.group_arc().clone();
    let others: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    let k = others.len();
    let j_action: Vec<IntMatrix> = g
        .elements()
        .map(|a| {
            let mut e = vec![0i64; k * k];
            for (col, &h) in others.iter().enumerate() {
                let target = g.mul(a, h);
                if target == g.identity() {
                    for row in 0..k {
                        e[row * k + col] = -1;
                    }
                } else {
                    let row = others.iter().position(|&x| x == target).unwrap();
                    e[row * k + col] = 1;
                }
            }
            IntMatrix::from_i64(k, k, &e)
        })
        .collect();
    let action = g
        .elements()
        .map(|a| m.action(a).kron(&j_action[a]))
        .collect();
    GLattice::new(g, m.rank() * k, action).unwrap()
}

pub fn brute_sha2(m: &GLattice) -> Option<AbelianGroupStructure> {
    brute_sha1(&tensor_with_j(m))
}

pub fn brute_h2(m: &GLattice) -> Option<AbelianGroupStructure> {
    brute_h1(&tensor_with_j(m))
}

/// A random unimodular matrix and its inverse, from elementary operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // column operation col_i += c col_j, and the inverse row operation
        let mut e = IntMatrix::identity(n);
        e[(j, i)] = c.into();
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(j, i)] = (-c).into();
        u = &u * &e;
        inv = &e_inv * &inv;
    }
    (u, inv)
}

/// The same module written in the basis given by the columns of `u`.
pub fn change_basis(m: &GLattice, u: &IntMatrix, inv: &IntMatrix) -> GLattice {
    let action = m.actions().iter().map(|a| &(inv * a) * u).collect();
    GLattice::new(m.group_arc().clone(), m.rank(), action).unwrap()
}

/// A random extension `0 -> A -> E -> C -> 0` with `E(g) = [[A(g), φ_g C(g)], [0, C(g)]]`
/// for `φ = Σ k_i z_i + δX` built from the generators `z_i` of `H^1(G, Hom(C, A))`,
/// written in a random basis of `E`. Returns the extension and whether every
/// `k_i` is divisible by the order of `z_i`, which is when the sequence splits.
pub fn random_extension(
    rng: &mut ChaCha8Rng,
    a: &GLattice,
    c: &GLattice,
) -> (LatticeExtension, bool) {
    let g = a.group_arc().clone();
    let (ra, rc) = (a.rank(), c.rank());
    let hom = c.hom(a).unwrap();
    let d = hom.rank();
    let h = h1(&hom);
    let mut phi = vec![BigInt::zero(); d * g.order()];
    let mut splits = true;
    for (rep, order) in h.representatives().iter().zip(h.orders()) {
        let order_i64 = order.to_i64().unwrap();
        let k = BigInt::from(rng.gen_range(0..2 * order_i64));
        splits &= (&k % order).is_zero();
        for (p, x) in phi.iter_mut().zip(rep) {
            *p += &k * x;
        }
    }
    let x: Vec<BigInt> = (0..d)
        .map(|_| BigInt::from(rng.gen_range(-2..=2i64)))
        .collect();
    for e in g.elements() {
        let moved = hom.action(e).mul_vec(&x);
        for i in 0..d {
            phi[e * d + i] += &moved[i] - &x[i];
        }
    }
    let n = ra + rc;
    let action: Vec<IntMatrix> = g
        .elements()
        .map(|e| {
            let phi_e = IntMatrix::from_vec(ra, rc, phi[e * d..(e + 1) * d].to_vec()).unwrap();
            let mut m = IntMatrix::zeros(n, n);
            m.set_block(0, 0, a.action(e));
            m.set_block(0, ra, &(&phi_e * c.action(e)));
            m.set_block(ra, ra, c.action(e));
            m
        })
        .collect();
    let e = GLattice::new(g, n, action).expect("cocycle gives an action");
    let (u, inv) = random_unimodular(rng, n);
    let e2 = change_basis(&e, &u, &inv);
    let mut inject = IntMatrix::zeros(n, ra);
    inject.set_block(0, 0, &IntMatrix::identity(ra));
    let mut project = IntMatrix::zeros(rc, n);
    project.set_block(0, ra, &IntMatrix::identity(rc));
    let inject = LatticeMap::new(a.clone(), e2.clone(), &inv * &inject).unwrap();
    let project = LatticeMap::new(e2, c.clone(), &project * &u).unwrap();
    (LatticeExtension::new(inject, project).unwrap(), splits)
}
