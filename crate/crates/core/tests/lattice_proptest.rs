use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use ttm_core::lattice::{cokernel, det, hermite_basis, integer_solve, kernel_basis, rank, unimodular_inverse};
use ttm_core::{IntMat, IntVec};

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases: 256, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |xs| {
            IntMat::from_vec(r, c, xs.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

#[test]
fn kernel_basis_is_saturated_kernel() {
    runner()
        .run(&matrix(4, 6), |a| {
            let k = kernel_basis(&a);
            prop_assert_eq!(k.cols(), a.cols() - rank(&a));
            prop_assert!((&a * &k).is_zero());
            // the kernel is a direct summand
            prop_assert!(cokernel(&k).torsion.is_empty());
            Ok(())
        })
        .unwrap();
}

#[test]
fn solve_recovers_integral_preimages() {
    let strat = matrix(4, 5).prop_flat_map(|a| {
        let c = a.cols();
        (Just(a), prop::collection::vec(-4i64..=4, c))
    });
    runner()
        .run(&strat, |(a, x)| {
            let b = a.mul_vec(&IntVec::from_i64s(&x));
            let y = integer_solve(&a, &b).unwrap();
            prop_assert!(y.is_some());
            prop_assert_eq!(a.mul_vec(&y.unwrap()), b.clone());
            let shifted = &b + &IntVec::unit(b.dim(), 0);
            if let Some(z) = integer_solve(&a, &shifted).unwrap() {
                prop_assert_eq!(a.mul_vec(&z), shifted);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn hermite_basis_is_canonical() {
    let strat = (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), 0..=4).prop_map(move |vs| (n, vs))
    });
    runner()
        .run(&strat, |(n, raw)| {
            let vs: Vec<IntVec> = raw.iter().map(|v| IntVec::from_i64s(v)).collect();
            let h = hermite_basis(&vs, n).unwrap();
            prop_assert_eq!(hermite_basis(&h, n).unwrap(), h.clone());
            // same span: each side solves into the other
            let hm = IntMat::from_columns(n, &h).unwrap();
            for v in &vs {
                prop_assert!(integer_solve(&hm, v).unwrap().is_some());
            }
            if !vs.is_empty() {
                let vm = IntMat::from_columns(n, &vs).unwrap();
                for w in &h {
                    prop_assert!(integer_solve(&vm, w).unwrap().is_some());
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn inverse_of_products_of_elementary_matrices() {
    let strat = (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -3i64..=3), 0..10).prop_map(move |ops| (n, ops))
    });
    runner()
        .run(&strat, |(n, ops)| {
            let mut u = IntMat::identity(n);
            for (i, j, f) in ops {
                if i == j {
                    continue;
                }
                let mut e = IntMat::identity(n);
                e[(i, j)] = f.into();
                u = &u * &e;
            }
            prop_assert_eq!(det(&u).unwrap().abs(), BigInt::from(1));
            let inv = unimodular_inverse(&u).unwrap();
            prop_assert!((&u * &inv).is_identity());
            prop_assert!((&inv * &u).is_identity());
            Ok(())
        })
        .unwrap();
}
