//! JSON file formats: polynomials, evaluation points, certificates and
//! counterexamples.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays of them. Words are `*`-joined letters such as `"x1*a2*x1"`; the
//! empty string is the empty word.

use std::collections::BTreeMap;

use ncconvex_core::certify::{schur_pencil, ConvexityCertificate};
use ncconvex_core::ncpoly::{EvaluationPoint, FreePolynomial, Mode, VarClass, Word};
use ncconvex_core::sampler::{A2Pair, Counterexample, MidpointTest, Witness, XYPair};
use ncconvex_core::{CMatrix, Complex64, PolyError};
use serde::{Deserialize, Serialize};

pub type MatrixFile = Vec<Vec<[f64; 2]>>;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Dimension(String),
    #[error("declared hermitian, but p - p* has a coefficient of norm {0:.3e}")]
    NotHermitian(f64),
    #[error("unknown letter {0:?} for this mode")]
    UnknownLetter(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    A2,
    Xy,
}

impl From<ModeName> for Mode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::A2 => Mode::A2,
            ModeName::Xy => Mode::XY,
        }
    }
}

impl From<Mode> for ModeName {
    fn from(m: Mode) -> Self {
        match m {
            Mode::A2 => ModeName::A2,
            Mode::XY => ModeName::Xy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub word: String,
    pub coeff: MatrixFile,
}

/// A polynomial file. Square polynomials give `d`; rectangular ones (such as
/// the factor `Λ` of a certificate) give `rows` and `cols`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub mu: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
    pub terms: Vec<TermFile>,
}

pub fn matrix_to_file(m: &CMatrix) -> MatrixFile {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_file(rows: &MatrixFile) -> Result<CMatrix, FormatError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(FormatError::Dimension("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

impl PolyFile {
    fn shape(&self) -> Result<(usize, usize), FormatError> {
        match (self.d, self.rows, self.cols) {
            (Some(d), None, None) => Ok((d, d)),
            (None, Some(r), Some(c)) => Ok((r, c)),
            (Some(d), Some(r), Some(c)) if r == d && c == d => Ok((d, d)),
            _ => Err(FormatError::Dimension(
                "give either \"d\" or both \"rows\" and \"cols\"".into(),
            )),
        }
    }

    pub fn to_polynomial(&self) -> Result<FreePolynomial, FormatError> {
        let (rows, cols) = self.shape()?;
        if self.mu == 0 {
            return Err(FormatError::Dimension("mu must be at least 1".into()));
        }
        let mode: Mode = self.mode.into();
        let mut p = FreePolynomial::zero(rows, cols, self.mu);
        for (i, term) in self.terms.iter().enumerate() {
            let word = Word::parse(&term.word, mode)?;
            let coeff = matrix_from_file(&term.coeff)?;
            if coeff.nrows() != rows || coeff.ncols() != cols {
                return Err(FormatError::Dimension(format!(
                    "term {i} ({:?}) has a {}x{} coefficient, expected {rows}x{cols}",
                    term.word,
                    coeff.nrows(),
                    coeff.ncols()
                )));
            }
            p.add_term(word, coeff)?;
        }
        if self.hermitian == Some(true) {
            if rows != cols {
                return Err(FormatError::NotHermitian(f64::INFINITY));
            }
            let asym = p.sub(&p.adjoint())?.max_coeff_norm();
            if asym > 1e-10 * (1.0 + p.max_coeff_norm()) {
                return Err(FormatError::NotHermitian(asym));
            }
        }
        Ok(p)
    }

    pub fn from_polynomial(p: &FreePolynomial, mode: Mode) -> Self {
        let square = p.rows() == p.cols();
        PolyFile {
            mu: p.mu(),
            d: square.then_some(p.rows()),
            rows: (!square).then_some(p.rows()),
            cols: (!square).then_some(p.cols()),
            mode: mode.into(),
            hermitian: None,
            terms: p
                .terms()
                .iter()
                .map(|(w, c)| TermFile {
                    word: w.display(mode),
                    coeff: matrix_to_file(c),
                })
                .collect(),
        }
    }
}

/// Parses a polynomial file; returns the polynomial and its letter mode.
pub fn parse_polynomial(text: &str) -> Result<(FreePolynomial, Mode), FormatError> {
    let file: PolyFile = serde_json::from_str(text)?;
    let p = file.to_polynomial()?;
    Ok((p, file.mode.into()))
}

pub fn serialize_polynomial(p: &FreePolynomial, mode: Mode) -> String {
    serde_json::to_string_pretty(&PolyFile::from_polynomial(p, mode)).expect("plain data serializes")
}

/// An evaluation point keyed by letter symbol: `{"a": [A1, ...], "x": [X1, ...]}`
/// in a2-mode, `{"x": [...], "y": [...]}` in xy-mode.
pub type PointFile = BTreeMap<String, Vec<MatrixFile>>;

pub fn parse_point(text: &str, mode: Mode) -> Result<EvaluationPoint, FormatError> {
    let file: PointFile = serde_json::from_str(text)?;
    let mut tuples: [Vec<CMatrix>; 2] = [Vec::new(), Vec::new()];
    for (key, mats) in &file {
        let class = key
            .chars()
            .next()
            .filter(|_| key.chars().count() == 1)
            .and_then(|c| mode.class_of(c))
            .ok_or_else(|| FormatError::UnknownLetter(key.clone()))?;
        let slot = match class {
            VarClass::First => 0,
            VarClass::Second => 1,
        };
        tuples[slot] = mats.iter().map(matrix_from_file).collect::<Result<_, _>>()?;
    }
    Ok(EvaluationPoint::from_tuples(&tuples[0], &tuples[1])?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub mode: ModeName,
    pub lambda: PolyFile,
    #[serde(rename = "Lambda")]
    pub big_lambda: PolyFile,
    /// The Gram matrix over `gram_basis ⊗ I_d`.
    pub gram: MatrixFile,
    pub gram_basis: Vec<String>,
    pub gram_min_eig: f64,
    pub residual: f64,
    pub sdp_iterations: usize,
    pub schur_pencil: PolyFile,
}

impl CertificateFile {
    pub fn new(cert: &ConvexityCertificate, mode: Mode) -> Self {
        CertificateFile {
            mode: cert.mode.into(),
            lambda: PolyFile::from_polynomial(&cert.lambda, mode),
            big_lambda: PolyFile::from_polynomial(&cert.big_lambda, mode),
            gram: matrix_to_file(&cert.gram),
            gram_basis: cert.gram_basis.iter().map(|w| w.display(mode)).collect(),
            gram_min_eig: cert.gram_min_eig(),
            residual: cert.residual,
            sdp_iterations: cert.sdp_iterations,
            schur_pencil: PolyFile::from_polynomial(&schur_pencil(cert).pencil, mode),
        }
    }

    pub fn to_certificate(&self) -> Result<ConvexityCertificate, FormatError> {
        let mode: Mode = self.mode.into();
        Ok(ConvexityCertificate {
            mode,
            lambda: self.lambda.to_polynomial()?,
            big_lambda: self.big_lambda.to_polynomial()?,
            gram: matrix_from_file(&self.gram)?,
            gram_basis: self
                .gram_basis
                .iter()
                .map(|w| Word::parse(w, mode))
                .collect::<Result<_, _>>()?,
            residual: self.residual,
            sdp_iterations: self.sdp_iterations,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessFile {
    /// `t p(x0) + (1−t) p(x1) − p(t x0 + (1−t) x1)` with the other class fixed.
    Midpoint {
        varying: String,
        fixed: Vec<MatrixFile>,
        x0: Vec<MatrixFile>,
        x1: Vec<MatrixFile>,
        t: f64,
    },
    /// `R_j = A_j ⊕ α_j`, `S_j = [[X_j, β_j], [β_j^*, δ_j]]`, `W = (I_n 0)^*`.
    A2Pair {
        n: usize,
        m: usize,
        #[serde(rename = "R")]
        r: Vec<MatrixFile>,
        #[serde(rename = "S")]
        s: Vec<MatrixFile>,
    },
    /// The xy-pair block form with `V = (I 0 0)^*`.
    XyPair {
        sizes: [usize; 3],
        #[serde(rename = "X")]
        x: Vec<MatrixFile>,
        #[serde(rename = "Y")]
        y: Vec<MatrixFile>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleFile {
    #[serde(flatten)]
    pub witness: WitnessFile,
    pub violation: f64,
    pub seed: u64,
    pub trial: Option<u64>,
}

fn tuple_to_file(t: &[CMatrix]) -> Vec<MatrixFile> {
    t.iter().map(matrix_to_file).collect()
}

fn tuple_from_file(t: &[MatrixFile]) -> Result<Vec<CMatrix>, FormatError> {
    t.iter().map(matrix_from_file).collect()
}

impl CounterexampleFile {
    pub fn new(cx: &Counterexample, mode: Mode) -> Self {
        let witness = match &cx.witness {
            Witness::Midpoint(m) => WitnessFile::Midpoint {
                varying: mode.symbol(m.varying).to_string(),
                fixed: tuple_to_file(&m.fixed),
                x0: tuple_to_file(&m.x0),
                x1: tuple_to_file(&m.x1),
                t: m.t,
            },
            Witness::A2Pair(p) => WitnessFile::A2Pair {
                n: p.n,
                m: p.m,
                r: tuple_to_file(&p.r),
                s: tuple_to_file(&p.s),
            },
            Witness::XYPair(p) => WitnessFile::XyPair {
                sizes: [p.sizes.0, p.sizes.1, p.sizes.2],
                x: tuple_to_file(&p.x),
                y: tuple_to_file(&p.y),
            },
        };
        CounterexampleFile {
            witness,
            violation: cx.violation,
            seed: cx.seed,
            trial: cx.trial,
        }
    }

    pub fn to_counterexample(&self, mode: Mode) -> Result<Counterexample, FormatError> {
        let witness = match &self.witness {
            WitnessFile::Midpoint { varying, fixed, x0, x1, t } => {
                let class = varying
                    .chars()
                    .next()
                    .and_then(|c| mode.class_of(c))
                    .ok_or_else(|| FormatError::UnknownLetter(varying.clone()))?;
                Witness::Midpoint(MidpointTest {
                    varying: class,
                    fixed: tuple_from_file(fixed)?,
                    x0: tuple_from_file(x0)?,
                    x1: tuple_from_file(x1)?,
                    t: *t,
                })
            }
            WitnessFile::A2Pair { n, m, r, s } => Witness::A2Pair(A2Pair {
                n: *n,
                m: *m,
                r: tuple_from_file(r)?,
                s: tuple_from_file(s)?,
            }),
            WitnessFile::XyPair { sizes, x, y } => Witness::XYPair(XYPair {
                sizes: (sizes[0], sizes[1], sizes[2]),
                x: tuple_from_file(x)?,
                y: tuple_from_file(y)?,
            }),
        };
        Ok(Counterexample {
            witness,
            violation: self.violation,
            seed: self.seed,
            trial: self.trial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weighted_square() {
        let text = r#"{"mu":1,"d":1,"mode":"a2","terms":[{"word":"x1*a1*x1","coeff":[[[1,0]]]}]}"#;
        let (p, mode) = parse_polynomial(text).unwrap();
        assert_eq!(mode, Mode::A2);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.display(Mode::A2), "1·x1*a1*x1");
    }

    #[test]
    fn empty_word_is_constant() {
        let text = r#"{"mu":1,"d":1,"mode":"xy","terms":[{"word":"","coeff":[[[2,0]]]}]}"#;
        let (p, _) = parse_polynomial(text).unwrap();
        assert_eq!(p.coeff(&Word::empty()).unwrap()[(0, 0)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn hermitian_declaration_is_checked() {
        let text = r#"{"mu":1,"d":1,"mode":"xy","hermitian":true,
            "terms":[{"word":"x1*y1","coeff":[[[1,0]]]}]}"#;
        assert!(matches!(parse_polynomial(text), Err(FormatError::NotHermitian(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\"mu\":1,\n\"d\":1,\n\"mode\":\"a2\" \"terms\":[]}";
        match parse_polynomial(text) {
            Err(FormatError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 13)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficient_size_is_checked() {
        let text = r#"{"mu":1,"d":2,"mode":"a2","terms":[{"word":"x1","coeff":[[[1,0]]]}]}"#;
        assert!(matches!(parse_polynomial(text), Err(FormatError::Dimension(_))));
    }

    #[test]
    fn point_keys_follow_mode() {
        let pt = parse_point(r#"{"x":[[[[1,0]]]],"y":[[[[2,0]]]]}"#, Mode::XY).unwrap();
        assert_eq!(pt.n(), 1);
        assert!(parse_point(r#"{"a":[[[[1,0]]]]}"#, Mode::XY).is_err());
    }
}
