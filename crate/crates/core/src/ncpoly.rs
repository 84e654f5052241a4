//! Matrix-valued polynomials in freely noncommuting hermitian variables.
//!
//! Variables come in two classes of `mu` letters each. A [`FreePolynomial`]
//! is a sparse map from [`Word`]s to complex coefficient matrices, evaluated
//! at a tuple of matrices `T` as `p(T) = sum_w p_w ⊗ T^w`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::PolyError;
use crate::CMatrix;

/// Entries below this magnitude are dropped by [`FreePolynomial::normalized`].
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// The two variable classes. In a²-mode `First` is `a` and `Second` is `x`;
/// in xy-mode `First` is `x` and `Second` is `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarClass {
    First,
    Second,
}

impl VarClass {
    pub fn other(self) -> Self {
        match self {
            VarClass::First => VarClass::Second,
            VarClass::Second => VarClass::First,
        }
    }
}

/// The two settings: convexity in `x` with `a` as parameters (`a`/`x`
/// letters), and xy-convexity (`x`/`y` letters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `a<i>` for the first class, `x<i>` for the second.
    A2,
    /// `x<i>` for the first class, `y<i>` for the second.
    XY,
}

impl Mode {
    pub fn symbol(self, class: VarClass) -> char {
        match (self, class) {
            (Mode::A2, VarClass::First) => 'a',
            (Mode::A2, VarClass::Second) => 'x',
            (Mode::XY, VarClass::First) => 'x',
            (Mode::XY, VarClass::Second) => 'y',
        }
    }

    pub fn class_of(self, symbol: char) -> Option<VarClass> {
        [VarClass::First, VarClass::Second]
            .into_iter()
            .find(|&c| self.symbol(c) == symbol)
    }
}

/// A single hermitian letter. `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub class: VarClass,
    pub index: usize,
}

impl Var {
    pub fn new(class: VarClass, index: usize) -> Self {
        Var { class, index }
    }

    pub fn first(index: usize) -> Self {
        Var::new(VarClass::First, index)
    }

    pub fn second(index: usize) -> Self {
        Var::new(VarClass::Second, index)
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index, self.class).cmp(&(other.index, other.class))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A word in the letters; the empty word is the identity.
///
/// Words are ordered graded-lexicographically: shorter words first, then
/// letter by letter using the [`Var`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Var>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Var>) -> Self {
        Word(letters)
    }

    pub fn letter(v: Var) -> Self {
        Word(vec![v])
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The involution: reverses the word (letters are hermitian).
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn degree_in(&self, class: VarClass) -> usize {
        self.0.iter().filter(|v| v.class == class).count()
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|v| v.index).max().unwrap_or(0)
    }

    /// Renders the word as `*`-joined letters, e.g. `x1*a2*x1`.
    pub fn display(&self, mode: Mode) -> String {
        self.0
            .iter()
            .map(|v| format!("{}{}", mode.symbol(v.class), v.index))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parses `*`-joined letters. A letter without digits has index 1.
    pub fn parse(text: &str, mode: Mode) -> Result<Word, PolyError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for raw in text.split('*') {
            let tok = raw.trim();
            let mut chars = tok.chars();
            let sym = chars
                .next()
                .ok_or_else(|| PolyError::BadWord(text.to_string()))?;
            let class = mode
                .class_of(sym)
                .ok_or_else(|| PolyError::BadWord(text.to_string()))?;
            let digits = chars.as_str();
            let index = if digits.is_empty() {
                1
            } else {
                digits
                    .parse::<usize>()
                    .map_err(|_| PolyError::BadWord(text.to_string()))?
            };
            if index == 0 {
                return Err(PolyError::BadWord(text.to_string()));
            }
            letters.push(Var::new(class, index));
        }
        Ok(Word(letters))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Var> for Word {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A `rows × cols` matrix-valued free polynomial in `mu` letters per class.
///
/// No stored coefficient is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FreePolynomial {
    rows: usize,
    cols: usize,
    mu: usize,
    terms: BTreeMap<Word, CMatrix>,
}

fn is_zero_matrix(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl FreePolynomial {
    pub fn zero(rows: usize, cols: usize, mu: usize) -> Self {
        FreePolynomial {
            rows,
            cols,
            mu,
            terms: BTreeMap::new(),
        }
    }

    /// The constant `d × d` identity.
    pub fn identity(d: usize, mu: usize) -> Self {
        Self::monomial(Word::empty(), CMatrix::identity(d, d), mu)
            .expect("empty word is always valid")
    }

    /// A scalar (`1 × 1`) polynomial with coefficient `coeff` on `word`.
    pub fn scalar_term(word: Word, coeff: f64, mu: usize) -> Result<Self, PolyError> {
        Self::monomial(word, DMatrix::from_element(1, 1, c(coeff)), mu)
    }

    pub fn monomial(word: Word, coeff: CMatrix, mu: usize) -> Result<Self, PolyError> {
        let mut p = Self::zero(coeff.nrows(), coeff.ncols(), mu);
        p.add_term(word, coeff)?;
        Ok(p)
    }

    /// Builds a polynomial from `(word, coefficient)` pairs; repeated words are summed.
    pub fn from_terms<I>(rows: usize, cols: usize, mu: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Word, CMatrix)>,
    {
        let mut p = Self::zero(rows, cols, mu);
        for (w, m) in terms {
            p.add_term(w, m)?;
        }
        Ok(p)
    }

    /// Adds `coeff · word` in place.
    pub fn add_term(&mut self, word: Word, coeff: CMatrix) -> Result<(), PolyError> {
        if coeff.nrows() != self.rows || coeff.ncols() != self.cols {
            return Err(PolyError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (coeff.nrows(), coeff.ncols()),
            });
        }
        if word.max_index() > self.mu {
            return Err(PolyError::VariableOutOfRange {
                index: word.max_index(),
                mu: self.mu,
            });
        }
        match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += coeff;
                if is_zero_matrix(existing) {
                    self.terms.remove(&word);
                }
            }
            None => {
                if !is_zero_matrix(&coeff) {
                    self.terms.insert(word, coeff);
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn terms(&self) -> &BTreeMap<Word, CMatrix> {
        &self.terms
    }

    pub fn coeff(&self, w: &Word) -> Option<&CMatrix> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest Frobenius norm over the coefficients (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// Returns the same polynomial viewed with a larger number of letters per class.
    pub fn with_mu(mut self, mu: usize) -> Result<Self, PolyError> {
        let needed = self.terms.keys().map(Word::max_index).max().unwrap_or(0);
        if needed > mu {
            return Err(PolyError::VariableOutOfRange { index: needed, mu });
        }
        self.mu = mu;
        Ok(self)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), PolyError> {
        if self.rows != other.rows || self.cols != other.cols || self.mu != other.mu {
            return Err(PolyError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.add_term(w.clone(), m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(c(-1.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.rows, self.cols, self.mu);
        if s == Complex64::new(0.0, 0.0) {
            return out;
        }
        for (w, m) in &self.terms {
            out.terms.insert(w.clone(), m * s);
        }
        out
    }

    /// Left multiplication of every coefficient by a constant matrix.
    pub fn left_mul_matrix(&self, m: &CMatrix) -> Result<Self, PolyError> {
        if m.ncols() != self.rows {
            return Err(PolyError::DimensionMismatch {
                expected: (m.nrows(), self.rows),
                found: (m.nrows(), m.ncols()),
            });
        }
        let mut out = Self::zero(m.nrows(), self.cols, self.mu);
        for (w, coeff) in &self.terms {
            out.add_term(w.clone(), m * coeff)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.cols != other.rows || self.mu != other.mu {
            return Err(PolyError::DimensionMismatch {
                expected: (self.cols, self.mu),
                found: (other.rows, other.mu),
            });
        }
        let mut out = Self::zero(self.rows, other.cols, self.mu);
        for (u, pu) in &self.terms {
            for (v, qv) in &other.terms {
                out.add_term(u.concat(v), pu * qv)?;
            }
        }
        Ok(out)
    }

    /// The involution `p* = sum p_w^* w^*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows, self.mu);
        for (w, m) in &self.terms {
            out.terms.insert(w.star(), m.adjoint());
        }
        out
    }

    /// `true` when `rows == cols` and every coefficient matches its mirrored
    /// adjoint to within `tol · (1 + max coefficient norm)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = tol * (1.0 + self.max_coeff_norm());
        match self.sub(&self.adjoint()) {
            Ok(diff) => diff.max_coeff_norm() <= scale,
            Err(_) => false,
        }
    }

    /// Maximum number of letters of `class` over all stored words; `None` for 0.
    pub fn degree_in_class(&self, class: VarClass) -> Option<usize> {
        self.terms.keys().map(|w| w.degree_in(class)).max()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// The sum of the terms whose words contain exactly `k` letters of `class`.
    pub fn homogeneous_part(&self, class: VarClass, k: usize) -> Self {
        self.filter_terms(|w| w.degree_in(class) == k)
    }

    /// Keeps the terms whose word satisfies `keep`.
    pub fn filter_terms<F: Fn(&Word) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::zero(self.rows, self.cols, self.mu);
        for (w, m) in &self.terms {
            if keep(w) {
                out.terms.insert(w.clone(), m.clone());
            }
        }
        out
    }

    /// Zeroes entries with magnitude below [`PRUNE_THRESHOLD`] and drops
    /// coefficients that become zero.
    pub fn normalized(&self) -> Self {
        self.pruned(PRUNE_THRESHOLD)
    }

    pub fn pruned(&self, threshold: f64) -> Self {
        let mut out = Self::zero(self.rows, self.cols, self.mu);
        for (w, m) in &self.terms {
            let cleaned = m.map(|z| {
                Complex64::new(
                    if z.re.abs() < threshold { 0.0 } else { z.re },
                    if z.im.abs() < threshold { 0.0 } else { z.im },
                )
            });
            if !is_zero_matrix(&cleaned) {
                out.terms.insert(w.clone(), cleaned);
            }
        }
        out
    }

    /// Extracts the scalar polynomial in entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(1, 1, self.mu);
        for (w, m) in &self.terms {
            let z = m[(i, j)];
            if z != Complex64::new(0.0, 0.0) {
                out.terms
                    .insert(w.clone(), DMatrix::from_element(1, 1, z));
            }
        }
        out
    }

    /// Assembles a block polynomial from a rectangular grid of blocks.
    /// Blocks in a block-row share their row count, blocks in a block-column
    /// share their column count.
    pub fn block(blocks: &[Vec<FreePolynomial>]) -> Result<Self, PolyError> {
        let nbr = blocks.len();
        if nbr == 0 || blocks[0].is_empty() {
            return Err(PolyError::EmptyBlock);
        }
        let nbc = blocks[0].len();
        let mu = blocks[0][0].mu;
        let row_sizes: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zero(rows, cols, mu);
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            if brow.len() != nbc {
                return Err(PolyError::EmptyBlock);
            }
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                if b.rows != row_sizes[bi] || b.cols != col_sizes[bj] || b.mu != mu {
                    return Err(PolyError::DimensionMismatch {
                        expected: (row_sizes[bi], col_sizes[bj]),
                        found: (b.rows, b.cols),
                    });
                }
                for (w, m) in &b.terms {
                    let mut big = CMatrix::zeros(rows, cols);
                    big.view_mut((r0, c0), (b.rows, b.cols)).copy_from(m);
                    out.add_term(w.clone(), big)?;
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        Ok(out)
    }

    /// `p(T) = sum_w p_w ⊗ T^w`, a `(rows·n) × (cols·n)` matrix.
    pub fn evaluate(&self, pt: &EvaluationPoint) -> Result<CMatrix, PolyError> {
        let n = pt.n;
        let mut out = CMatrix::zeros(self.rows * n, self.cols * n);
        let mut cache: BTreeMap<&Word, CMatrix> = BTreeMap::new();
        for (w, m) in &self.terms {
            let tw = match cache.get(w) {
                Some(t) => t.clone(),
                None => {
                    let t = pt.word_value(w)?;
                    cache.insert(w, t.clone());
                    t
                }
            };
            out += m.kronecker(&tw);
        }
        Ok(out)
    }

    /// Human-readable rendering, mostly for diagnostics.
    pub fn display(&self, mode: Mode) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, m)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.display(mode)
                };
                if m.nrows() == 1 && m.ncols() == 1 {
                    let z = m[(0, 0)];
                    if z.im == 0.0 {
                        format!("{}·{}", z.re, word)
                    } else {
                        format!("({})·{}", z, word)
                    }
                } else {
                    format!("[{}x{} coeff]·{}", m.nrows(), m.ncols(), word)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for FreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(Mode::A2))
    }
}

/// An assignment of `n × n` matrices to letters.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationPoint {
    n: usize,
    assignments: BTreeMap<Var, CMatrix>,
    hermitian_required: [bool; 2],
}

/// Tolerance used when validating hermitian assignments.
pub const HERMITIAN_TOL: f64 = 1e-10;

fn class_slot(c: VarClass) -> usize {
    match c {
        VarClass::First => 0,
        VarClass::Second => 1,
    }
}

pub(crate) fn is_hermitian_matrix(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).norm() <= tol * (1.0 + m.norm())
}

impl EvaluationPoint {
    /// An empty point of size `n` where both classes must be hermitian.
    pub fn new(n: usize) -> Self {
        EvaluationPoint {
            n,
            assignments: BTreeMap::new(),
            hermitian_required: [true, true],
        }
    }

    /// Relaxes (or restores) the hermitian requirement for one class.
    pub fn with_hermitian_required(mut self, class: VarClass, required: bool) -> Self {
        self.hermitian_required[class_slot(class)] = required;
        self
    }

    /// Builds a point from the two tuples; `first[j]` is assigned to letter `j+1`.
    pub fn from_tuples(first: &[CMatrix], second: &[CMatrix]) -> Result<Self, PolyError> {
        let n = first
            .iter()
            .chain(second.iter())
            .map(|m| m.nrows())
            .next()
            .ok_or(PolyError::EmptyPoint)?;
        let mut pt = EvaluationPoint::new(n);
        for (j, m) in first.iter().enumerate() {
            pt.assign(Var::first(j + 1), m.clone())?;
        }
        for (j, m) in second.iter().enumerate() {
            pt.assign(Var::second(j + 1), m.clone())?;
        }
        Ok(pt)
    }

    pub fn assign(&mut self, var: Var, m: CMatrix) -> Result<(), PolyError> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(PolyError::PointSizeMismatch {
                expected: self.n,
                found: (m.nrows(), m.ncols()),
            });
        }
        if self.hermitian_required[class_slot(var.class)] && !is_hermitian_matrix(&m, HERMITIAN_TOL)
        {
            return Err(PolyError::NotHermitianAssignment(var));
        }
        self.assignments.insert(var, m);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, var: &Var) -> Option<&CMatrix> {
        self.assignments.get(var)
    }

    pub fn assignments(&self) -> &BTreeMap<Var, CMatrix> {
        &self.assignments
    }

    pub fn hermitian_required(&self, class: VarClass) -> bool {
        self.hermitian_required[class_slot(class)]
    }

    /// The tuple assigned to `class`, letters `1..=mu`.
    pub fn tuple(&self, class: VarClass, mu: usize) -> Result<Vec<CMatrix>, PolyError> {
        (1..=mu)
            .map(|j| {
                let v = Var::new(class, j);
                self.assignments
                    .get(&v)
                    .cloned()
                    .ok_or(PolyError::MissingAssignment(v))
            })
            .collect()
    }

    /// `T^w` for a word.
    pub fn word_value(&self, w: &Word) -> Result<CMatrix, PolyError> {
        let mut acc = CMatrix::identity(self.n, self.n);
        for v in w.letters() {
            let m = self
                .assignments
                .get(v)
                .ok_or(PolyError::MissingAssignment(*v))?;
            acc *= m;
        }
        Ok(acc)
    }

    /// The adjoint point: every assigned matrix is conjugate-transposed.
    pub fn adjoint(&self) -> Self {
        EvaluationPoint {
            n: self.n,
            assignments: self
                .assignments
                .iter()
                .map(|(v, m)| (*v, m.adjoint()))
                .collect(),
            hermitian_required: self.hermitian_required,
        }
    }

    /// Block-diagonal direct sum over the letters assigned in both points.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut assignments = BTreeMap::new();
        for (v, m1) in &self.assignments {
            if let Some(m2) = other.assignments.get(v) {
                let mut big = CMatrix::zeros(n, n);
                big.view_mut((0, 0), (self.n, self.n)).copy_from(m1);
                big.view_mut((self.n, self.n), (other.n, other.n))
                    .copy_from(m2);
                assignments.insert(*v, big);
            }
        }
        EvaluationPoint {
            n,
            assignments,
            hermitian_required: [
                self.hermitian_required[0] && other.hermitian_required[0],
                self.hermitian_required[1] && other.hermitian_required[1],
            ],
        }
    }
}
