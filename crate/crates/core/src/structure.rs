//! Degree-structured decompositions of polynomials quadratic in the second
//! class: the border vector / middle matrix form, Hessian extraction and the
//! word-shape checks for biconvexity.

use crate::error::StructureError;
use crate::ncpoly::{EvaluationPoint, FreePolynomial, Var, VarClass, Word};
use crate::CMatrix;

/// All words in first-class letters `1..=mu` of length at most `max_degree`,
/// in graded lexicographic order (so the empty word comes first).
pub fn enumerate_monomials(mu: usize, max_degree: usize) -> Vec<Word> {
    enumerate_words(VarClass::First, mu, max_degree)
}

/// Like [`enumerate_monomials`] for an arbitrary class.
pub fn enumerate_words(class: VarClass, mu: usize, max_degree: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_degree {
        let mut next = Vec::with_capacity(layer.len() * mu);
        for w in &layer {
            for j in 1..=mu {
                next.push(w.concat(&Word::letter(Var::new(class, j))));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `N(mu, m) = sum_{j=0}^m mu^j`.
pub fn monomial_count(mu: usize, max_degree: usize) -> usize {
    (0..=max_degree).map(|j| mu.pow(j as u32)).sum()
}

/// `q(a,x) = V(a)[x]^* Z(a) V(a)[x]` for `q` homogeneous of degree two in `x`.
///
/// `middle[(j-1)·N + r][(k-1)·N + t]` holds the `d × d` first-class polynomial
/// sandwiched between `m_r^* x_j` and `x_k m_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderMiddleForm {
    pub d: usize,
    pub mu: usize,
    pub d_a: usize,
    pub monomials: Vec<Word>,
    pub middle: Vec<Vec<FreePolynomial>>,
}

impl BorderMiddleForm {
    pub fn n_monomials(&self) -> usize {
        self.monomials.len()
    }

    /// Number of block rows/columns, `mu · N`.
    pub fn size(&self) -> usize {
        self.mu * self.monomials.len()
    }

    /// Block index for direction letter `j` (1-based) and monomial `r` (0-based).
    pub fn block_index(&self, j: usize, r: usize) -> usize {
        (j - 1) * self.monomials.len() + r
    }

    /// `(direction letter, monomial)` for a block index.
    pub fn block_label(&self, idx: usize) -> (usize, &Word) {
        let n = self.monomials.len();
        (idx / n + 1, &self.monomials[idx % n])
    }

    /// Largest first-class degree among the entries of the middle matrix.
    pub fn middle_degree(&self) -> Option<usize> {
        self.middle
            .iter()
            .flatten()
            .filter_map(|p| p.degree_in_class(VarClass::First))
            .max()
    }

    /// `true` when `adjoint(Z[i][k]) == Z[k][i]` for every block pair.
    pub fn is_formally_hermitian(&self, tol: f64) -> bool {
        let s = self.size();
        (0..s).all(|i| {
            (0..s).all(|k| match self.middle[i][k].adjoint().sub(&self.middle[k][i]) {
                Ok(diff) => diff.max_coeff_norm() <= tol,
                Err(_) => false,
            })
        })
    }

    /// The middle matrix evaluated at a first-class tuple `alpha` of size `m`:
    /// a `(mu N d m)`-square matrix whose `(i,k)` block is `Z[i][k](alpha)`.
    pub fn evaluate_middle(&self, alpha: &[CMatrix]) -> Result<CMatrix, StructureError> {
        let m = alpha.first().map(|a| a.nrows()).unwrap_or(1);
        let pt = if alpha.is_empty() {
            EvaluationPoint::new(1)
        } else {
            EvaluationPoint::from_tuples(alpha, &[])?
        };
        let blk = self.d * m;
        let s = self.size();
        let mut out = CMatrix::zeros(s * blk, s * blk);
        for i in 0..s {
            for k in 0..s {
                let entry = &self.middle[i][k];
                if entry.is_zero() {
                    continue;
                }
                let v = entry.evaluate(&pt)?;
                out.view_mut((i * blk, k * blk), (blk, blk)).copy_from(&v);
            }
        }
        Ok(out)
    }
}

/// Splits every word of `q` at its first and last second-class letters.
///
/// `d_a` is the actual first-class degree of `q`.
pub fn border_middle_decompose(q: &FreePolynomial) -> Result<BorderMiddleForm, StructureError> {
    if q.rows() != q.cols() {
        return Err(StructureError::SizeMismatch(format!(
            "middle matrix needs a square polynomial, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    for w in q.terms().keys() {
        if w.degree_in(VarClass::Second) != 2 {
            return Err(StructureError::NotQuadratic(w.clone()));
        }
    }
    let mu = q.mu();
    let d = q.rows();
    let d_a = q.degree_in_class(VarClass::First).unwrap_or(0);
    let monomials = enumerate_monomials(mu, d_a);
    let n = monomials.len();
    let size = mu * n;
    let mut middle = vec![vec![FreePolynomial::zero(d, d, mu); size]; size];
    let index_of = |w: &Word| -> usize {
        monomials
            .binary_search(w)
            .expect("monomial of degree <= d_a is enumerated")
    };
    for (w, coeff) in q.terms() {
        let letters = w.letters();
        let first = letters
            .iter()
            .position(|v| v.class == VarClass::Second)
            .expect("two second-class letters");
        let last = letters
            .iter()
            .rposition(|v| v.class == VarClass::Second)
            .expect("two second-class letters");
        let left = Word::new(letters[..first].to_vec()).star();
        let centre = Word::new(letters[first + 1..last].to_vec());
        let right = Word::new(letters[last + 1..].to_vec());
        let j = letters[first].index;
        let k = letters[last].index;
        let row = (j - 1) * n + index_of(&left);
        let col = (k - 1) * n + index_of(&right);
        middle[row][col].add_term(centre, coeff.clone())?;
    }
    Ok(BorderMiddleForm {
        d,
        mu,
        d_a,
        monomials,
        middle,
    })
}

/// Expands `V(a)[x]^* Z(a) V(a)[x]` back into a polynomial.
pub fn reconstruct(form: &BorderMiddleForm) -> Result<FreePolynomial, StructureError> {
    let mut out = FreePolynomial::zero(form.d, form.d, form.mu);
    let s = form.size();
    for i in 0..s {
        let (j, mr) = form.block_label(i);
        let left = mr.star().concat(&Word::letter(Var::second(j)));
        for k in 0..s {
            let (kk, mt) = form.block_label(k);
            let right = Word::letter(Var::second(kk)).concat(mt);
            for (centre, coeff) in form.middle[i][k].terms() {
                out.add_term(left.concat(centre).concat(&right), coeff.clone())?;
            }
        }
    }
    Ok(out)
}

/// The border vector `V(A)[β^*]`, a stacked column of `mu·N` blocks, the
/// `(k,t)` block being `I_d ⊗ β_k^* m_t(A)` of size `(d·m) × (d·n)`.
pub fn evaluate_border_vector(
    form: &BorderMiddleForm,
    a: &[CMatrix],
    beta: &[CMatrix],
) -> Result<CMatrix, StructureError> {
    if beta.len() != form.mu || (!a.is_empty() && a.len() != form.mu) {
        return Err(StructureError::SizeMismatch(format!(
            "expected {} matrices per tuple, got A: {}, beta: {}",
            form.mu,
            a.len(),
            beta.len()
        )));
    }
    let n = beta[0].nrows();
    let m = beta[0].ncols();
    if beta.iter().any(|b| b.nrows() != n || b.ncols() != m) || a.iter().any(|x| x.nrows() != n || x.ncols() != n) {
        return Err(StructureError::SizeMismatch("inconsistent tuple sizes".into()));
    }
    if a.is_empty() && form.d_a > 0 {
        return Err(StructureError::SizeMismatch("first-class tuple is required".into()));
    }
    let pt = if a.is_empty() {
        EvaluationPoint::new(n)
    } else {
        EvaluationPoint::from_tuples(a, &[])?
    };
    let d = form.d;
    let blk_rows = d * m;
    let s = form.size();
    let eye = CMatrix::identity(d, d);
    let mut out = CMatrix::zeros(s * blk_rows, d * n);
    for idx in 0..s {
        let (k, mt) = form.block_label(idx);
        let inner = beta[k - 1].adjoint() * pt.word_value(mt)?;
        out.view_mut((idx * blk_rows, 0), (blk_rows, d * n))
            .copy_from(&eye.kronecker(&inner));
    }
    Ok(out)
}

/// Degree-two part in `class`; equals half the second directional derivative
/// along that class.
pub fn hessian_part(p: &FreePolynomial, class: VarClass) -> Result<FreePolynomial, StructureError> {
    match p.degree_in_class(class) {
        Some(deg) if deg > 2 => Err(StructureError::DegreeTooHigh { degree: deg }),
        _ => Ok(p.homogeneous_part(class, 2)),
    }
}

/// Result of [`exclusion_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionReport {
    pub passes: bool,
    pub offending_words: Vec<Word>,
}

/// `true` for words shaped `s s f f` or `f f s s` (`s`/`f` second/first-class letters).
pub fn is_excluded_shape(w: &Word) -> bool {
    let l = w.letters();
    if l.len() != 4 {
        return false;
    }
    let classes: Vec<VarClass> = l.iter().map(|v| v.class).collect();
    let pattern = |a: VarClass, b: VarClass| classes == [a, a, b, b];
    pattern(VarClass::Second, VarClass::First) || pattern(VarClass::First, VarClass::Second)
}

/// Checks that every word has degree at most two in each class and is not
/// of the excluded `xxaa` / `aaxx` shape.
pub fn exclusion_check(p: &FreePolynomial) -> ExclusionReport {
    let offending_words: Vec<Word> = p
        .terms()
        .keys()
        .filter(|w| {
            w.degree_in(VarClass::First) > 2 || w.degree_in(VarClass::Second) > 2 || is_excluded_shape(w)
        })
        .cloned()
        .collect();
    ExclusionReport {
        passes: offending_words.is_empty(),
        offending_words,
    }
}
