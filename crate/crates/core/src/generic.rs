//! Generic evaluation points built from shift operators on word space.
//!
//! On the Hilbert space with orthonormal basis the words of length at most
//! `m`, let `S_j` prepend letter `j` (and annihilate words of length `m`).
//! The hermitian tuple `T_j = S_j + S_j^*` together with `v = e_∅` separates
//! every word of length at most `m`: `{w(T) v}` is linearly independent.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::numeric_rank;
use crate::ncpoly::{EvaluationPoint, FreePolynomial, Var, VarClass, Word};
use crate::structure::enumerate_monomials;
use crate::CMatrix;

/// The shift tuple `T` and the vacuum vector `v = e_∅`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmitsurTuple {
    pub matrices: Vec<CMatrix>,
    pub vacuum: DVector<Complex64>,
    pub basis: Vec<Word>,
}

/// Builds the shift tuple over an alphabet of `mu` letters on words of length `<= m`.
pub fn amitsur_tuple(mu: usize, m: usize) -> AmitsurTuple {
    let basis = enumerate_monomials(mu, m);
    let n = basis.len();
    let mut matrices = Vec::with_capacity(mu);
    for j in 1..=mu {
        let mut t = CMatrix::zeros(n, n);
        let letter = Word::letter(Var::first(j));
        for (col, w) in basis.iter().enumerate() {
            if w.len() < m {
                let target = letter.concat(w);
                let row = basis.binary_search(&target).expect("shifted word is in the basis");
                t[(row, col)] = Complex64::new(1.0, 0.0);
                t[(col, row)] = Complex64::new(1.0, 0.0);
            }
        }
        matrices.push(t);
    }
    let mut vacuum = DVector::zeros(n);
    vacuum[0] = Complex64::new(1.0, 0.0);
    AmitsurTuple { matrices, vacuum, basis }
}

/// The matrix whose columns are `w(A) v` over all words of length `<= kappa`
/// in `A.len()` letters.
pub fn word_vector_matrix(a: &[CMatrix], v: &DVector<Complex64>, kappa: usize) -> CMatrix {
    let words = enumerate_monomials(a.len(), kappa);
    let n = v.len();
    let mut out = CMatrix::zeros(n, words.len());
    for (col, w) in words.iter().enumerate() {
        // w(A) v = A_{i1} ... A_{il} v, applied right to left
        let mut vec = v.clone();
        for letter in w.letters().iter().rev() {
            vec = &a[letter.index - 1] * vec;
        }
        out.set_column(col, &vec);
    }
    out
}

/// Numeric rank of [`word_vector_matrix`].
pub fn word_vector_rank(a: &[CMatrix], v: &DVector<Complex64>, kappa: usize) -> usize {
    numeric_rank(&word_vector_matrix(a, v, kappa))
}

/// `true` iff `{w(A) v : |w| <= kappa}` is linearly independent.
pub fn independence_check(a: &[CMatrix], v: &DVector<Complex64>, kappa: usize) -> bool {
    let m = word_vector_matrix(a, v, kappa);
    numeric_rank(&m) == m.ncols()
}

/// Outcome of [`is_zero_poly`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTest {
    /// Exact answer from the stored term map.
    pub is_zero: bool,
    /// `max_γ ||p(T)(e_γ ⊗ v)||` at the shift tuple over the combined alphabet.
    pub witness_norm: f64,
}

/// An evaluation point assigning the shift tuple over the combined alphabet
/// of size `2·mu`: first-class letter `j` gets `T_j`, second-class letter `j`
/// gets `T_{mu+j}`.
pub fn amitsur_point(mu: usize, m: usize) -> (EvaluationPoint, DVector<Complex64>) {
    let tuple = amitsur_tuple(2 * mu, m);
    let (first, second) = tuple.matrices.split_at(mu);
    let pt = EvaluationPoint::from_tuples(first, second).expect("shift matrices are hermitian and square");
    (pt, tuple.vacuum)
}

/// Exact zero test with a numeric witness from the generic point.
pub fn is_zero_poly(p: &FreePolynomial) -> ZeroTest {
    let is_zero = p.is_zero();
    let m = p.degree().unwrap_or(0);
    let (pt, v) = amitsur_point(p.mu(), m);
    let value = p.evaluate(&pt).expect("every letter is assigned");
    let n = v.len();
    let mut witness_norm: f64 = 0.0;
    for gamma in 0..p.cols() {
        let mut probe = DVector::<Complex64>::zeros(p.cols() * n);
        probe.rows_mut(gamma * n, n).copy_from(&v);
        witness_norm = witness_norm.max((&value * probe).norm());
    }
    ZeroTest { is_zero, witness_norm }
}

/// Letters of both classes, as used by [`amitsur_point`].
pub fn combined_letters(mu: usize) -> Vec<Var> {
    (1..=mu)
        .map(|j| Var::new(VarClass::First, j))
        .chain((1..=mu).map(|j| Var::new(VarClass::Second, j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;
    use crate::ncpoly::Mode;
    use nalgebra::DMatrix;

    #[test]
    fn single_letter_depth_two() {
        let t = amitsur_tuple(1, 2);
        assert_eq!(t.matrices[0], real_matrix(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]));
        let cols = word_vector_matrix(&t.matrices, &t.vacuum, 2);
        assert_eq!(cols, real_matrix(3, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]));
        assert!(independence_check(&t.matrices, &t.vacuum, 2));
    }

    #[test]
    fn depth_zero_is_scalar_zero() {
        let t = amitsur_tuple(1, 0);
        assert_eq!(t.matrices[0], real_matrix(1, 1, &[0.0]));
        assert_eq!(t.vacuum.len(), 1);
    }

    #[test]
    fn two_letters_depth_one() {
        let t = amitsur_tuple(2, 1);
        for j in 1..=2 {
            let mut expected = CMatrix::zeros(3, 3);
            expected[(0, j)] = Complex64::new(1.0, 0.0);
            expected[(j, 0)] = Complex64::new(1.0, 0.0);
            assert_eq!(t.matrices[j - 1], expected);
        }
    }

    #[test]
    fn zero_tuple_is_dependent() {
        let a = vec![real_matrix(1, 1, &[0.0])];
        let v = DVector::from_element(1, Complex64::new(1.0, 0.0));
        assert!(!independence_check(&a, &v, 1));
    }

    #[test]
    fn two_letters_depth_two_has_rank_seven() {
        let t = amitsur_tuple(2, 2);
        assert_eq!(word_vector_rank(&t.matrices, &t.vacuum, 2), 7);
        assert!(independence_check(&t.matrices, &t.vacuum, 2));
    }

    fn scalar(words: &[(&str, f64)], mode: Mode) -> FreePolynomial {
        FreePolynomial::from_terms(
            1,
            1,
            2,
            words
                .iter()
                .map(|(w, c)| (Word::parse(w, mode).unwrap(), DMatrix::from_element(1, 1, Complex64::new(*c, 0.0)))),
        )
        .unwrap()
    }

    #[test]
    fn zero_poly_examples() {
        let xy = scalar(&[("x1*y1", 1.0)], Mode::XY);
        let t = is_zero_poly(&xy.sub(&xy).unwrap());
        assert!(t.is_zero && t.witness_norm == 0.0);

        let xax = scalar(&[("x1*a1*x1", 1.0)], Mode::A2);
        let t = is_zero_poly(&xax);
        assert!(!t.is_zero && t.witness_norm > 1e-8);

        let comm = scalar(&[("x1*x2", 1.0), ("x2*x1", -1.0)], Mode::A2);
        let t = is_zero_poly(&comm);
        assert!(!t.is_zero && t.witness_norm > 1e-8);
    }
}
