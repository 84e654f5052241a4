mod common;

use common::*;
use ncconvex_core::ncpoly::{EvaluationPoint, VarClass, Word};
use ncconvex_core::sampler::{a2_pair_gap, random_matrix, sample_a2_pair};
use ncconvex_core::structure::{border_middle_decompose, evaluate_border_vector, hessian_part, reconstruct};
use ncconvex_core::CMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_q(seed: u64, mu: usize, d: usize) -> ncconvex_core::FreePolynomial {
    let mut r = rng(seed);
    let terms = r.random_range(1..=6);
    let words: Vec<Word> = (0..terms).map(|_| random_quadratic_word(&mut r, mu, 2)).collect();
    poly_from_words(&mut r, d, mu, &words)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decompose_then_reconstruct_is_exact(seed in any::<u64>(), mu in 1usize..=2, d in 1usize..=2) {
        let q = random_q(seed, mu, d);
        let form = border_middle_decompose(&q).unwrap();
        prop_assert_eq!(reconstruct(&form).unwrap(), q);
    }

    #[test]
    fn hermitian_q_has_formally_hermitian_middle(seed in any::<u64>(), mu in 1usize..=2, d in 1usize..=2) {
        let q = hermitize(&random_q(seed, mu, d));
        let form = border_middle_decompose(&q).unwrap();
        prop_assert!(form.is_formally_hermitian(1e-12));
    }

    #[test]
    fn border_vector_middle_matrix_identity(seed in any::<u64>(), mu in 1usize..=2, d in 1usize..=2, n in 1usize..=3, m in 1usize..=3) {
        let q = hermitize(&random_q(seed, mu, d));
        let form = border_middle_decompose(&q).unwrap();
        let pair = sample_a2_pair(mu, n, m, seed).unwrap();
        let (a, x) = pair.compressed();
        let alpha: Vec<CMatrix> = pair.r.iter().map(|r| r.view((n, n), (m, m)).into_owned()).collect();
        let beta: Vec<CMatrix> = pair.s.iter().map(|s| s.view((0, n), (n, m)).into_owned()).collect();
        let border = evaluate_border_vector(&form, &a, &beta).unwrap();
        let middle = form.evaluate_middle(&alpha).unwrap();
        let gap = a2_pair_gap(&q, &pair).unwrap();
        let expected = border.adjoint() * middle * border;
        let full = q.evaluate(&EvaluationPoint::from_tuples(&pair.r, &pair.s).unwrap()).unwrap();
        prop_assert!((&gap - &expected).norm() <= 1e-9 * (1.0 + full.norm()));
        let _ = x;
    }

    #[test]
    fn hessian_matches_second_difference(seed in any::<u64>(), mu in 1usize..=2, d in 1usize..=2, n in 1usize..=3) {
        let mut r = rng(seed);
        // degree <= 2 in the second class: quadratic, linear and constant words
        let mut words: Vec<Word> = (0..3).map(|_| random_quadratic_word(&mut r, mu, 2)).collect();
        for _ in 0..3 {
            let len = r.random_range(0..=2);
            let mut w = random_first_word(&mut r, mu, len);
            if r.random::<bool>() {
                w = w.concat(&Word::letter(random_letter(&mut r, VarClass::Second, mu)));
            }
            words.push(w);
        }
        let p = hermitize(&poly_from_words(&mut r, d, mu, &words));
        let q = hessian_part(&p, VarClass::Second).unwrap();
        let a = random_tuple(&mut r, mu, n);
        let x = random_tuple(&mut r, mu, n);
        let h = random_tuple(&mut r, mu, n);
        let eval = |s: f64| {
            let xs: Vec<CMatrix> = x.iter().zip(&h).map(|(xi, hi)| xi + hi.scale(s)).collect();
            p.evaluate(&EvaluationPoint::from_tuples(&a, &xs).unwrap()).unwrap()
        };
        let second = (eval(1.0) + eval(-1.0) - eval(0.0).scale(2.0)).scale(0.5);
        let direct = q.evaluate(&EvaluationPoint::from_tuples(&a, &h).unwrap()).unwrap();
        prop_assert!((&second - &direct).norm() <= 1e-9 * (1.0 + direct.norm() + eval(1.0).norm()));
    }
}

#[test]
fn border_vector_rejects_wrong_tuple_lengths() {
    let q = random_q(1, 2, 1);
    let form = border_middle_decompose(&q).unwrap();
    let mut r = rng(3);
    let beta = vec![random_matrix(&mut r, 2, 1)];
    assert!(evaluate_border_vector(&form, &[], &beta).is_err());
}
