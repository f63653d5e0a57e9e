//! Randomized properties of the linear algebra, cohomology and resolutions.

mod common;

use common::*;
use flasque_lab::cohomology::{h1, h2_bar, h2_shifted, sha_omega, tate_cyclic};
use flasque_lab::flasque::{
    extension_class, flasque_resolution, flasque_resolution_with, is_flasque, is_split,
    similarity_fingerprint, GeneratorOrder,
};
use flasque_lab::lattice::GLattice;
use flasque_lab::linalg::{
    cokernel_structure, hermite_basis, is_pure, kernel_basis, rank, snf, solve_integer, IntMatrix,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| IntMatrix::from_i64(r, c, &v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermite_basis_spans_the_same_lattice(b in matrix_strategy(4, 5)) {
        let h = hermite_basis(&b);
        prop_assert_eq!(h.cols(), rank(&b));
        for j in 0..b.cols() {
            prop_assert!(solve_integer(&h, &b.column(j)).unwrap().is_some());
        }
        for j in 0..h.cols() {
            prop_assert!(solve_integer(&b, &h.column(j)).unwrap().is_some());
        }
        prop_assert_eq!(hermite_basis(&h), h);
    }

    #[test]
    fn kernel_is_saturated(m in matrix_strategy(4, 5)) {
        let k = kernel_basis(&m);
        prop_assert!((&m * &k).is_zero());
        prop_assert_eq!(k.cols() + rank(&m), m.cols());
        prop_assert!(k.cols() == 0 || is_pure(&k));
    }

    #[test]
    fn solve_recovers_a_solution(m in matrix_strategy(4, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<BigInt> = (0..m.cols()).map(|_| BigInt::from(rng.gen_range(-5..=5i64))).collect();
        let b = m.mul_vec(&x);
        let y = solve_integer(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn smith_form_is_a_divisibility_chain(m in matrix_strategy(5, 5)) {
        let s = snf(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.s.clone());
        prop_assert!(s.u.determinant().unwrap().abs() == BigInt::from(1));
        prop_assert!(s.v.determinant().unwrap().abs() == BigInt::from(1));
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        if m.is_square() {
            let det = m.determinant().unwrap().abs();
            if !det.is_zero() {
                prop_assert_eq!(cokernel_structure(&m).order(), Some(det));
            }
        }
    }
}

/// A random lattice: a sum of one or two small lattices in a random basis.
fn random_lattice(rng: &mut ChaCha8Rng, pool: &[(String, GLattice)], max_rank: usize) -> GLattice {
    loop {
        let a = &pool[rng.gen_range(0..pool.len())].1;
        let m = if rng.gen_bool(0.5) {
            a.direct_sum(&pool[rng.gen_range(0..pool.len())].1).unwrap()
        } else {
            a.clone()
        };
        if m.rank() <= max_rank && m.rank() > 0 {
            let (u, inv) = random_unimodular(rng, m.rank());
            return change_basis(&m, &u, &inv);
        }
    }
}

#[test]
fn cyclic_groups_agree_with_periodicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["C2", "C3", "C4", "C6"] {
        let g = group(name);
        let pool = small_lattices(&g);
        for _ in 0..6 {
            let m = random_lattice(&mut rng, &pool, 8);
            let whole = g.whole();
            assert_eq!(
                h1(&m).structure(),
                tate_cyclic(&whole, &m, 1).unwrap().structure()
            );
            assert_eq!(
                h2_bar(&m).unwrap().structure(),
                tate_cyclic(&whole, &m, 2).unwrap().structure()
            );
        }
    }
}

fn commutator_subgroup_order(g: &flasque_lab::group::FiniteGroup, h: &[usize]) -> usize {
    let comms: Vec<usize> = h
        .iter()
        .flat_map(|&a| h.iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b))))
        .collect();
    g.closure(&comms).len()
}

#[test]
fn shapiro_in_degrees_one_and_two() {
    for (name, g) in catalog_groups() {
        for h in g.all_subgroups() {
            let p = GLattice::permutation(g.clone(), h).unwrap();
            assert!(h1(&p).is_trivial(), "{name}");
            // H^2(G, Z[G/H]) = H^2(H, Z) = Hom(H, Q/Z)
            let abelianization = h.order() / commutator_subgroup_order(&g, h.elements());
            let h2 = h2_bar(&p).unwrap();
            assert_eq!(
                h2.structure().order(),
                Some(BigInt::from(abelianization)),
                "{name} {:?}",
                h.elements()
            );
        }
    }
}

#[test]
fn shifted_and_direct_sha2_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["C4", "V4", "S3", "D4", "Q8"] {
        let g = group(name);
        let pool = small_lattices(&g);
        for _ in 0..4 {
            let m = random_lattice(&mut rng, &pool, 6);
            let res = flasque_resolution(&m).unwrap();
            assert_eq!(
                h2_shifted(&m, &res.extension).unwrap(),
                sha_omega(2, &m).unwrap(),
                "{name}"
            );
        }
    }
}

#[test]
fn flasque_lattices_have_no_cyclic_h1() {
    for (_, g) in catalog_groups() {
        for (_, m) in small_lattices(&g) {
            let res = flasque_resolution(&m).unwrap();
            let f = res.flasque();
            assert!(is_flasque(f).0);
            for h in g.cyclic_subgroups() {
                assert!(h1(&f.restrict(&h)).is_trivial());
            }
        }
    }
}

#[test]
fn split_criterion_matches_the_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = [0usize; 2];
    for name in ["C2", "C4", "V4", "S3"] {
        let g = group(name);
        let pool: Vec<GLattice> = small_lattices(&g)
            .into_iter()
            .map(|(_, m)| m)
            .filter(|m| m.rank() <= 2)
            .collect();
        for _ in 0..10 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let c = &pool[rng.gen_range(0..pool.len())];
            let (ext, expected) = random_extension(&mut rng, a, c);
            let split = is_split(&ext).unwrap().is_some();
            let (_, class) = extension_class(&ext).unwrap();
            assert_eq!(split, expected, "{name}");
            assert_eq!(class.iter().all(Zero::is_zero), expected, "{name}");
            seen[split as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn fingerprints_ignore_basis_and_permutation_summands() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in ["V4", "S3", "D4"] {
        let g = group(name);
        let pool = small_lattices(&g);
        for _ in 0..3 {
            let m = random_lattice(&mut rng, &pool, 6);
            let base = similarity_fingerprint(&m);
            let (u, inv) = random_unimodular(&mut rng, m.rank());
            assert_eq!(similarity_fingerprint(&change_basis(&m, &u, &inv)), base);
            for class in g.subgroup_conjugacy_classes() {
                let p = GLattice::permutation(g.clone(), &class.representative).unwrap();
                assert!(base.same_h1_entries(&similarity_fingerprint(&m.direct_sum(&p).unwrap())));
            }
        }
    }
}

#[test]
fn independent_resolutions_have_equal_fingerprints() {
    for name in ["V4", "S3", "D4", "Q8"] {
        let g = group(name);
        for (lname, m) in small_lattices(&g) {
            let a = flasque_resolution_with(&m, GeneratorOrder::Natural).unwrap();
            let b = flasque_resolution_with(&m, GeneratorOrder::Reversed).unwrap();
            assert!(
                similarity_fingerprint(a.flasque())
                    .same_h1_entries(&similarity_fingerprint(b.flasque())),
                "{name} {lname}"
            );
        }
    }
}
