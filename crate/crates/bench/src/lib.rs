//! Benchmark fixtures shared by the criterion benches.

use ncconvex_core::ncpoly::{FreePolynomial, Mode, Word};
use ncconvex_core::{CMatrix, Complex64};

/// A scalar polynomial from `(word, coefficient)` pairs.
pub fn scalar_poly(mu: usize, terms: &[(&str, f64)], mode: Mode) -> FreePolynomial {
    FreePolynomial::from_terms(
        1,
        1,
        mu,
        terms.iter().map(|(w, c)| {
            let word = if w.is_empty() { Word::empty() } else { Word::parse(w, mode).unwrap() };
            (word, CMatrix::from_element(1, 1, Complex64::new(*c, 0.0)))
        }),
    )
    .unwrap()
}
