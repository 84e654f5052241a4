#![allow(dead_code)]

use ncconvex_core::ncpoly::{FreePolynomial, Var, VarClass, Word};
use ncconvex_core::sampler::{complex_gaussian, random_hermitian, random_matrix, trial_rng};
use ncconvex_core::CMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, 99)
}

pub fn random_letter(rng: &mut ChaCha8Rng, class: VarClass, mu: usize) -> Var {
    Var::new(class, rng.random_range(1..=mu))
}

pub fn random_any_word(rng: &mut ChaCha8Rng, mu: usize, len: usize) -> Word {
    (0..len)
        .map(|_| {
            let class = if rng.random::<bool>() { VarClass::First } else { VarClass::Second };
            random_letter(rng, class, mu)
        })
        .collect()
}

pub fn random_first_word(rng: &mut ChaCha8Rng, mu: usize, len: usize) -> Word {
    (0..len).map(|_| random_letter(rng, VarClass::First, mu)).collect()
}

/// A word with exactly two second-class letters and at most `max_first`
/// first-class letters, placed at random.
pub fn random_quadratic_word(rng: &mut ChaCha8Rng, mu: usize, max_first: usize) -> Word {
    let total_first = rng.random_range(0..=max_first);
    let mut parts = [0usize; 3];
    for _ in 0..total_first {
        parts[rng.random_range(0..3)] += 1;
    }
    let u0 = random_first_word(rng, mu, parts[0]);
    let u1 = random_first_word(rng, mu, parts[1]);
    let u2 = random_first_word(rng, mu, parts[2]);
    let xj = Word::letter(random_letter(rng, VarClass::Second, mu));
    let xk = Word::letter(random_letter(rng, VarClass::Second, mu));
    u0.concat(&xj).concat(&u1).concat(&xk).concat(&u2)
}

pub fn random_coeff(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    random_matrix(rng, d, d)
}

pub fn poly_from_words(rng: &mut ChaCha8Rng, d: usize, mu: usize, words: &[Word]) -> FreePolynomial {
    let mut p = FreePolynomial::zero(d, d, mu);
    for w in words {
        p.add_term(w.clone(), random_coeff(rng, d)).unwrap();
    }
    p
}

pub fn hermitize(p: &FreePolynomial) -> FreePolynomial {
    p.add(&p.adjoint()).unwrap().scale(ncconvex_core::Complex64::new(0.5, 0.0))
}

pub fn random_poly(rng: &mut ChaCha8Rng, d: usize, mu: usize, terms: usize, max_len: usize) -> FreePolynomial {
    let words: Vec<Word> = (0..terms)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            random_any_word(rng, mu, len)
        })
        .collect();
    poly_from_words(rng, d, mu, &words)
}

pub fn random_tuple(rng: &mut ChaCha8Rng, mu: usize, n: usize) -> Vec<CMatrix> {
    (0..mu).map(|_| random_hermitian(rng, n)).collect()
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> ncconvex_core::Complex64 {
    complex_gaussian(rng)
}
