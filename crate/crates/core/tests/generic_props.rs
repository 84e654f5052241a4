mod common;

use common::*;
use ncconvex_core::generic::{amitsur_point, amitsur_tuple, independence_check, is_zero_poly, word_vector_rank};
use ncconvex_core::structure::monomial_count;
use proptest::prelude::*;

#[test]
fn shift_tuples_separate_short_words() {
    for mu in 1..=2 {
        for m in 0..=3 {
            let t = amitsur_tuple(mu, m);
            assert!(independence_check(&t.matrices, &t.vacuum, m), "mu={mu} m={m}");
            assert_eq!(word_vector_rank(&t.matrices, &t.vacuum, m), monomial_count(mu, m));
        }
    }
}

#[test]
fn shift_matrices_are_real_symmetric() {
    let t = amitsur_tuple(2, 3);
    for m in &t.matrices {
        assert_eq!(m, &m.adjoint());
        assert!(m.iter().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // A nonzero polynomial never vanishes on the shift tuple deep enough for
    // its degree.
    #[test]
    fn nonzero_polynomials_do_not_vanish(seed in any::<u64>(), mu in 1usize..=2, d in 1usize..=2) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, d, mu, 3, 3);
        prop_assume!(!p.is_zero());
        let test = is_zero_poly(&p);
        prop_assert!(!test.is_zero);
        prop_assert!(test.witness_norm > 1e-8);
    }

    #[test]
    fn zero_polynomial_vanishes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 2, 4, 3);
        let z = p.sub(&p).unwrap();
        let test = is_zero_poly(&z);
        prop_assert!(test.is_zero && test.witness_norm == 0.0);
        let (pt, _) = amitsur_point(2, 3);
        prop_assert!(z.evaluate(&pt).unwrap().norm() == 0.0);
    }
}
