mod common;

use common::*;
use ncconvex_core::linalg::min_eig;
use ncconvex_core::sampler::{random_hermitian, random_matrix};
use ncconvex_core::sdp::{solve_feasibility, SdpProblem, SdpStatus, SparseHermitian};
use ncconvex_core::CMatrix;
use proptest::prelude::*;
use rand::Rng;

/// Random constraints satisfied by a random PSD matrix of the given rank.
fn constructed(seed: u64, dim: usize, rank: usize, constraints: usize) -> (SdpProblem, CMatrix) {
    let mut r = rng(seed);
    let g = random_matrix(&mut r, rank, dim);
    let q0 = g.adjoint() * g;
    let mut prob = SdpProblem::new(dim);
    for _ in 0..constraints {
        let a = random_hermitian(&mut r, dim);
        let coeffs = SparseHermitian::from_dense(&a).unwrap();
        let rhs = coeffs.inner(&q0);
        prob.constraints.push(ncconvex_core::sdp::Constraint { coeffs, rhs });
    }
    (prob, q0)
}

#[test]
fn constructed_instances_are_certified() {
    let mut r = rng(2024);
    for i in 0..20 {
        let dim = r.random_range(2..=16);
        let m = r.random_range(1..=dim * 2);
        let (prob, _) = constructed(i, dim, dim, m);
        let out = solve_feasibility(&prob);
        assert_eq!(out.status, SdpStatus::Feasible, "instance {i}: {:?}", out.diagnostic);
        assert!(out.constraint_residual <= prob.tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Whatever the instance, a Feasible answer is backed by the returned matrix.
    #[test]
    fn feasible_answers_are_sound(seed in any::<u64>(), dim in 1usize..=6, m in 1usize..=8, rank in 0usize..=6) {
        let (mut prob, _) = constructed(seed, dim, rank.min(dim), m);
        let mut r = rng(seed ^ 1);
        if r.random::<bool>() {
            // perturb the right-hand sides: may or may not stay feasible
            for c in &mut prob.constraints {
                c.rhs += r.random_range(-1.0..1.0);
            }
        }
        prob.max_iters = 2000;
        let out = solve_feasibility(&prob);
        if out.status == SdpStatus::Feasible {
            prop_assert!(prob.residual(&out.q) <= prob.tol);
            prop_assert!(min_eig(&out.q).unwrap() >= -prob.tol);
        } else {
            prop_assert!(out.diagnostic.is_some());
        }
    }
}
