//! Certificates `p = λ + Λ^*Λ` for convexity in the second variable class
//! (a²-mode) and for xy-convexity, plus symbolic verification and the Schur
//! complement pencil.
//!
//! All three pipelines reduce to Gram systems: for a column of words `W`
//! (each tensored with `I_d`), find `G ⪰ 0` such that the coefficient of
//! every word `u` in `W^* G W` matches `p_u`. Factoring `G = R^*R` gives
//! `Λ = R W`.

use std::collections::BTreeMap;

use crate::error::CertifyError;
use crate::linalg::{hermitian_part, min_eig, psd_complete, psd_factor, psd_project, ChordalBlocks};
use crate::ncpoly::{FreePolynomial, Mode, Var, VarClass, Word, HERMITIAN_TOL};
use crate::sdp::{solve_feasibility, SdpOutcome, SdpProblem, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::structure::{border_middle_decompose, enumerate_words, exclusion_check, hessian_part};
use crate::CMatrix;

/// Relative bound on the symbolic residual of an emitted certificate.
pub const CERT_RESIDUAL_TOL: f64 = 1e-8;

/// Smallest Gram eigenvalue accepted in an emitted certificate.
pub const GRAM_EIG_TOL: f64 = 1e-8;

/// Floor for the tightened SDP tolerance during refinement.
const MIN_SDP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Overrides the first-class degree of the a²-mode Gram basis.
    pub sos_degree: Option<usize>,
    /// How many times a certificate whose residual is too large is re-solved
    /// with a tolerance 1000 times smaller.
    pub refinements: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            sos_degree: None,
            refinements: 3,
        }
    }
}

/// `p = lambda + big_lambda^* big_lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityCertificate {
    pub mode: Mode,
    /// `d × d` hermitian; affine linear in the second class (A2) or of degree
    /// at most one in each class (XY).
    pub lambda: FreePolynomial,
    /// `N × d`; every word has exactly one second-class letter (A2), or is one
    /// of `x_j, y_k, x_j y_k, y_k x_j` (XY).
    pub big_lambda: FreePolynomial,
    /// PSD Gram matrix over `gram_basis ⊗ I_d`.
    pub gram: CMatrix,
    pub gram_basis: Vec<Word>,
    pub residual: f64,
    pub sdp_iterations: usize,
}

impl ConvexityCertificate {
    pub fn gram_min_eig(&self) -> f64 {
        if self.gram.nrows() == 0 {
            0.0
        } else {
            min_eig(&self.gram).unwrap_or(f64::NEG_INFINITY)
        }
    }
}

/// The hermitian block polynomial `[[I_N, Λ], [Λ^*, −λ]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurPencil {
    pub pencil: FreePolynomial,
    /// `N`, the size of the identity corner.
    pub corner: usize,
}

/// `1e-8 · (1 + max_w ‖p_w‖)`.
pub fn residual_bound(p: &FreePolynomial) -> f64 {
    CERT_RESIDUAL_TOL * (1.0 + p.max_coeff_norm())
}

fn is_w1(w: &Word) -> bool {
    w.degree_in(VarClass::First) <= 1 && w.degree_in(VarClass::Second) <= 1
}

/// A Gram feasibility problem over `basis ⊗ I_d`.
struct GramSystem {
    basis: Vec<Word>,
    d: usize,
    problem: SdpProblem,
}

/// Constrains the coefficient of every word `s^* t` with `constrained(s^* t)`
/// to equal the matching coefficient of `target`. Returns the target words
/// that no pair of the basis produces.
fn gram_system(
    basis: Vec<Word>,
    target: &FreePolynomial,
    constrained: impl Fn(&Word) -> bool,
    opts: &CertifyOptions,
) -> Result<GramSystem, Vec<Word>> {
    let d = target.rows();
    let mut pairs: BTreeMap<Word, Vec<(usize, usize)>> = BTreeMap::new();
    for (s, ws) in basis.iter().enumerate() {
        for (t, wt) in basis.iter().enumerate() {
            pairs.entry(ws.star().concat(wt)).or_default().push((s, t));
        }
    }
    let unmatched: Vec<Word> = target
        .terms()
        .keys()
        .filter(|w| constrained(w) && !pairs.contains_key(*w))
        .cloned()
        .collect();
    if !unmatched.is_empty() {
        return Err(unmatched);
    }

    let mut problem = SdpProblem::new(basis.len() * d)
        .with_tol(opts.tol)
        .with_max_iters(opts.max_iters);
    let zero = CMatrix::zeros(d, d);
    for (u, list) in &pairs {
        if !constrained(u) {
            continue;
        }
        // The constraints for u* are the adjoints of those for u.
        let ustar = u.star();
        if ustar < *u {
            continue;
        }
        let self_adjoint = ustar == *u;
        let coeff = target.coeff(u).unwrap_or(&zero);
        for a in 0..d {
            for b in 0..d {
                if self_adjoint && b < a {
                    continue;
                }
                let positions: Vec<(usize, usize)> =
                    list.iter().map(|&(s, t)| (s * d + a, t * d + b)).collect();
                problem
                    .add_entry_sum(&positions, coeff[(a, b)])
                    .expect("Gram positions are in range and hermitian by construction");
            }
        }
    }
    Ok(GramSystem { basis, d, problem })
}

/// `Λ = R (W ⊗ I_d)`; a rank-zero factor becomes a single zero row.
fn factor_polynomial(r: &CMatrix, basis: &[Word], d: usize, mu: usize) -> FreePolynomial {
    let rows = r.nrows().max(1);
    let mut out = FreePolynomial::zero(rows, d, mu);
    if r.nrows() == 0 {
        return out;
    }
    for (s, w) in basis.iter().enumerate() {
        let coeff = r.columns(s * d, d).into_owned();
        out.add_term(w.clone(), coeff)
            .expect("basis words respect mu and the factor has d columns");
    }
    out.pruned(1e-14)
}

fn clean_gram(g: &CMatrix) -> CMatrix {
    psd_project(&hermitian_part(g))
}

fn refinement_tols(opts: &CertifyOptions) -> Vec<f64> {
    let mut tols = vec![opts.tol];
    for _ in 0..opts.refinements {
        let next = (tols.last().copied().unwrap_or(opts.tol) * 1e-3).max(MIN_SDP_TOL);
        tols.push(next);
    }
    tols
}

fn not_certified(outcome: &SdpOutcome) -> CertifyError {
    CertifyError::NotCertified {
        diagnostic: outcome.diagnostic.clone().unwrap_or_else(|| {
            format!(
                "residual {:.3e}, min eigenvalue {:.3e}",
                outcome.constraint_residual, outcome.min_eigenvalue
            )
        }),
    }
}

fn check_hermitian(p: &FreePolynomial) -> Result<(), CertifyError> {
    if p.rows() != p.cols() || !p.is_hermitian(HERMITIAN_TOL * (1.0 + p.max_coeff_norm())) {
        return Err(CertifyError::NotHermitian);
    }
    Ok(())
}

/// Repeatedly solves `systems`, tightening the tolerance, until `assemble`
/// yields a certificate whose residual meets [`residual_bound`].
fn refine<F>(
    p: &FreePolynomial,
    mut systems: Vec<GramSystem>,
    opts: &CertifyOptions,
    mut assemble: F,
) -> Result<ConvexityCertificate, CertifyError>
where
    F: FnMut(&[GramSystem], &[CMatrix]) -> Result<ConvexityCertificate, CertifyError>,
{
    let bound = residual_bound(p);
    let mut last_residual = f64::INFINITY;
    let mut iterations = 0;
    for tol in refinement_tols(opts) {
        let mut grams = Vec::with_capacity(systems.len());
        for sys in systems.iter_mut() {
            sys.problem.tol = tol;
            let outcome = solve_feasibility(&sys.problem);
            iterations += outcome.iterations;
            if !outcome.is_feasible() {
                if last_residual.is_infinite() {
                    return Err(not_certified(&outcome));
                }
                return Err(CertifyError::VerificationFailed {
                    residual: last_residual,
                    reason: format!("refinement at tolerance {tol:.1e} failed: {}", not_certified(&outcome)),
                });
            }
            sys.problem.initial = Some(outcome.q.clone());
            grams.push(clean_gram(&outcome.q));
        }
        let mut cert = assemble(&systems, &grams)?;
        cert.sdp_iterations = iterations;
        if cert.residual <= bound && cert.gram_min_eig() >= -GRAM_EIG_TOL {
            return Ok(cert);
        }
        last_residual = cert.residual;
    }
    Err(CertifyError::VerificationFailed {
        residual: last_residual,
        reason: format!("residual above {bound:.3e} after {} refinements", opts.refinements),
    })
}

/// Searches for `p(a,x) = L(a,x) + Λ(a,x)^*Λ(a,x)` with `L` affine linear in
/// the second class and `Λ` linear in it.
pub fn certify_a2(p: &FreePolynomial, opts: &CertifyOptions) -> Result<ConvexityCertificate, CertifyError> {
    check_hermitian(p)?;
    let degree = p.degree_in_class(VarClass::Second).unwrap_or(0);
    if degree > 2 {
        return Err(CertifyError::DegreeBound { degree });
    }
    let q = hessian_part(p, VarClass::Second)?;
    let linear_part = p.sub(&q)?;
    let (d, mu) = (p.rows(), p.mu());
    if q.is_zero() {
        return Ok(ConvexityCertificate {
            mode: Mode::A2,
            lambda: linear_part,
            big_lambda: FreePolynomial::zero(1, d, mu),
            gram: CMatrix::zeros(0, 0),
            gram_basis: Vec::new(),
            residual: 0.0,
            sdp_iterations: 0,
        });
    }

    let form = border_middle_decompose(&q)?;
    let half = opts
        .sos_degree
        .unwrap_or_else(|| form.middle_degree().unwrap_or(0).div_ceil(2));
    // Blocks of the border vector whose row of the middle matrix vanishes
    // cannot carry a square and are left out of the basis.
    let active: Vec<usize> = (0..form.size())
        .filter(|&i| form.middle[i].iter().any(|z| !z.is_zero()))
        .collect();
    let left_words = enumerate_words(VarClass::First, mu, half);
    let mut basis = Vec::new();
    for &i in &active {
        let (k, m) = form.block_label(i);
        let border = Word::letter(Var::second(k)).concat(m);
        for b in &left_words {
            basis.push(b.concat(&border));
        }
    }
    basis.sort();

    let system = gram_system(basis, &q, |_| true, opts).map_err(|unmatched| CertifyError::NotCertified {
        diagnostic: format!(
            "middle matrix has words beyond the Gram basis of first-class degree {half}: {unmatched:?}"
        ),
    })?;

    refine(p, vec![system], opts, |systems, grams| {
        let sys = &systems[0];
        let gram = grams[0].clone();
        let r = psd_factor(&gram, GRAM_EIG_TOL)?;
        let big_lambda = factor_polynomial(&r, &sys.basis, sys.d, mu);
        let sos = big_lambda.adjoint().mul(&big_lambda)?;
        let lambda = p.sub(&sos)?.filter_terms(|w| w.degree_in(VarClass::Second) <= 1);
        let mut cert = ConvexityCertificate {
            mode: Mode::A2,
            lambda,
            big_lambda,
            gram,
            gram_basis: sys.basis.clone(),
            residual: 0.0,
            sdp_iterations: 0,
        };
        cert.residual = verify_certificate(p, &cert)?;
        Ok(cert)
    })
}

/// Words of degree one in each class, `x_j y_k` then `y_k x_j`.
fn mixed_words(mu: usize) -> Vec<Word> {
    let mut v = Vec::with_capacity(2 * mu * mu);
    for j in 1..=mu {
        for k in 1..=mu {
            v.push(Word::new(vec![Var::first(j), Var::second(k)]));
        }
    }
    for j in 1..=mu {
        for k in 1..=mu {
            v.push(Word::new(vec![Var::second(k), Var::first(j)]));
        }
    }
    v
}

fn letters(class: VarClass, mu: usize) -> Vec<Word> {
    (1..=mu).map(|j| Word::letter(Var::new(class, j))).collect()
}

fn structural_check(p: &FreePolynomial) -> Result<(), CertifyError> {
    let report = exclusion_check(p);
    if !report.passes {
        return Err(CertifyError::Structural {
            offending: report.offending_words,
        });
    }
    Ok(())
}

fn xy_certificate(
    p: &FreePolynomial,
    big_lambda: FreePolynomial,
    gram: CMatrix,
    gram_basis: Vec<Word>,
) -> Result<ConvexityCertificate, CertifyError> {
    let sos = big_lambda.adjoint().mul(&big_lambda)?;
    let lambda = p.sub(&sos)?.filter_terms(is_w1);
    let mut cert = ConvexityCertificate {
        mode: Mode::XY,
        lambda,
        big_lambda,
        gram,
        gram_basis,
        residual: 0.0,
        sdp_iterations: 0,
    };
    cert.residual = verify_certificate(p, &cert)?;
    Ok(cert)
}

/// Searches for `p(x,y) = λ(x,y) + Λ(x,y)^*Λ(x,y)` with `λ`, `Λ` xy-pencils,
/// following the two-Hessian Gram construction and a PSD completion of the
/// `x`–`y` corner.
pub fn certify_xy(p: &FreePolynomial, opts: &CertifyOptions) -> Result<ConvexityCertificate, CertifyError> {
    check_hermitian(p)?;
    structural_check(p)?;
    let (d, mu) = (p.rows(), p.mu());
    let xs = letters(VarClass::First, mu);
    let ys = letters(VarClass::Second, mu);
    let v = mixed_words(mu);
    let (nx, nv) = (xs.len() * d, v.len() * d);

    let basis_x: Vec<Word> = xs.iter().chain(&v).cloned().collect();
    let basis_y: Vec<Word> = v.iter().chain(&ys).cloned().collect();
    let hess_x = p.filter_terms(|w| w.degree_in(VarClass::First) == 2);
    let hess_y = p.filter_terms(|w| w.degree_in(VarClass::Second) == 2);
    let structural = |unmatched: Vec<Word>| CertifyError::Structural { offending: unmatched };
    let sys_x = gram_system(basis_x, &hess_x, |_| true, opts).map_err(structural)?;
    let sys_y = gram_system(basis_y, &hess_y, |_| true, opts).map_err(structural)?;

    let full_basis: Vec<Word> = xs.iter().chain(&v).chain(&ys).cloned().collect();
    refine(p, vec![sys_x, sys_y], opts, |_, grams| {
        let (gx, gy) = (&grams[0], &grams[1]);
        let centre_x = gx.view((nx, nx), (nv, nv));
        let centre_y = gy.view((0, 0), (nv, nv));
        let blocks = ChordalBlocks {
            a: gx.view((0, 0), (nx, nx)).into_owned(),
            b: gx.view((0, nx), (nx, nv)).into_owned(),
            c: (centre_x + centre_y).scale(0.5),
            d: gy.view((0, nv), (nv, nx)).into_owned(),
            e: gy.view((nv, nv), (nx, nx)).into_owned(),
        };
        let corner = psd_complete(&blocks, GRAM_EIG_TOL.max(opts.tol))?;
        let gram = clean_gram(&blocks.assemble(&corner)?);
        let r = psd_factor(&gram, GRAM_EIG_TOL)?;
        let big_lambda = factor_polynomial(&r, &full_basis, d, mu);
        xy_certificate(p, big_lambda, gram, full_basis.clone())
    })
}

/// The single `4d × 4d` Gram program for one `x` and one `y`, over the
/// column `(x, y, yx, xy)`; `Q_{jk}` then pairs with the word `w_j w_k^*` for
/// `(w_1, w_2, w_3, w_4) = (x, y, xy, yx)`. Coefficients of words of degree
/// at most one in each class are left free and absorbed into `λ`.
pub fn certify_xy_sdp_mu1(
    p: &FreePolynomial,
    opts: &CertifyOptions,
) -> Result<ConvexityCertificate, CertifyError> {
    if p.mu() != 1 {
        return Err(CertifyError::UnsupportedMu(p.mu()));
    }
    check_hermitian(p)?;
    structural_check(p)?;
    let (x, y) = (Var::first(1), Var::second(1));
    let basis = vec![
        Word::letter(x),
        Word::letter(y),
        Word::new(vec![y, x]),
        Word::new(vec![x, y]),
    ];
    let d = p.rows();
    let system = gram_system(basis, p, |w| !is_w1(w), opts)
        .map_err(|unmatched| CertifyError::Structural { offending: unmatched })?;
    refine(p, vec![system], opts, |systems, grams| {
        let sys = &systems[0];
        let gram = grams[0].clone();
        let r = psd_factor(&gram, GRAM_EIG_TOL)?;
        let big_lambda = factor_polynomial(&r, &sys.basis, d, 1);
        let remainder = p.sub(&big_lambda.adjoint().mul(&big_lambda)?)?;
        let stray = remainder.filter_terms(|w| !is_w1(w)).max_coeff_norm();
        if stray > residual_bound(p) * 1e3 {
            return Err(CertifyError::VerificationFailed {
                residual: stray,
                reason: "p − Λ*Λ has degree above one in a class".into(),
            });
        }
        xy_certificate(p, big_lambda, gram, sys.basis.clone())
    })
}

fn structure_holds(cert: &ConvexityCertificate) -> bool {
    match cert.mode {
        Mode::A2 => {
            cert.lambda.terms().keys().all(|w| w.degree_in(VarClass::Second) <= 1)
                && cert.big_lambda.terms().keys().all(|w| w.degree_in(VarClass::Second) == 1)
        }
        Mode::XY => {
            cert.lambda.terms().keys().all(is_w1)
                && cert.big_lambda.terms().keys().all(|w| is_w1(w) && !w.is_empty())
        }
    }
}

/// Max coefficient norm of `p − λ − Λ^*Λ`, after checking that `λ` and `Λ`
/// have the degree structure of the certificate's mode.
pub fn verify_certificate(p: &FreePolynomial, cert: &ConvexityCertificate) -> Result<f64, CertifyError> {
    if !structure_holds(cert) {
        return Err(CertifyError::ModeMismatch);
    }
    let sos = cert.big_lambda.adjoint().mul(&cert.big_lambda)?;
    let rhs = cert.lambda.add(&sos)?;
    Ok(p.sub(&rhs)?.max_coeff_norm())
}

pub fn schur_pencil(cert: &ConvexityCertificate) -> SchurPencil {
    let n = cert.big_lambda.rows();
    let mu = cert.big_lambda.mu();
    let pencil = FreePolynomial::block(&[
        vec![FreePolynomial::identity(n, mu), cert.big_lambda.clone()],
        vec![cert.big_lambda.adjoint(), cert.lambda.neg()],
    ])
    .expect("corner sizes agree by construction");
    SchurPencil { pencil, corner: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn poly(words: &[(&str, f64)], mode: Mode, mu: usize) -> FreePolynomial {
        FreePolynomial::from_terms(
            1,
            1,
            mu,
            words
                .iter()
                .map(|(w, c)| (Word::parse(w, mode).unwrap(), DMatrix::from_element(1, 1, Complex64::new(*c, 0.0)))),
        )
        .unwrap()
    }

    fn word(w: &str, mode: Mode) -> Word {
        Word::parse(w, mode).unwrap()
    }

    fn scalar_coeff(p: &FreePolynomial, w: &Word) -> Complex64 {
        p.coeff(w).map(|m| m[(0, 0)]).unwrap_or_default()
    }

    #[test]
    fn a2_square() {
        let p = poly(&[("x1*x1", 1.0)], Mode::A2, 1);
        let cert = certify_a2(&p, &CertifyOptions::default()).unwrap();
        assert!(cert.lambda.is_zero());
        assert_eq!(cert.big_lambda.num_terms(), 1);
        assert!((scalar_coeff(&cert.big_lambda, &word("x1", Mode::A2)).norm() - 1.0).abs() < 1e-10);
        assert!(cert.residual < 1e-12);
    }

    #[test]
    fn a2_weighted_square_plus_linear() {
        let p = poly(&[("x1*a1*a1*x1", 1.0), ("a1", 1.0)], Mode::A2, 1);
        let cert = certify_a2(&p, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.lambda, poly(&[("a1", 1.0)], Mode::A2, 1));
        let coeff = scalar_coeff(&cert.big_lambda, &word("a1*x1", Mode::A2));
        assert!((coeff.norm() - 1.0).abs() < 1e-10);
        assert!(cert.residual <= residual_bound(&p));
    }

    #[test]
    fn a2_indefinite_middle_is_not_certified() {
        let p = poly(&[("x1*a1*x1", 1.0)], Mode::A2, 1);
        let err = certify_a2(&p, &CertifyOptions::default()).unwrap_err();
        assert!(matches!(err, CertifyError::NotCertified { .. }));
        assert!(!err.is_definitive());
    }

    #[test]
    fn a2_degree_bound() {
        let p = poly(&[("x1*x1*x1*x1", 1.0)], Mode::A2, 1);
        assert_eq!(
            certify_a2(&p, &CertifyOptions::default()).unwrap_err(),
            CertifyError::DegreeBound { degree: 4 }
        );
    }

    #[test]
    fn rejects_non_hermitian() {
        let p = poly(&[("x1*y1", 1.0)], Mode::XY, 1);
        assert_eq!(certify_xy(&p, &CertifyOptions::default()).unwrap_err(), CertifyError::NotHermitian);
    }

    #[test]
    fn xy_outer_square() {
        let p = poly(&[("y1*x1*x1*y1", 1.0)], Mode::XY, 1);
        for cert in [
            certify_xy(&p, &CertifyOptions::default()).unwrap(),
            certify_xy_sdp_mu1(&p, &CertifyOptions::default()).unwrap(),
        ] {
            assert!(cert.lambda.is_zero());
            assert_eq!(cert.big_lambda.num_terms(), 1);
            let coeff = scalar_coeff(&cert.big_lambda, &word("x1*y1", Mode::XY));
            assert!((coeff.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn xy_pencil_needs_no_square() {
        let p = poly(&[("x1*y1", 1.0), ("y1*x1", 1.0)], Mode::XY, 1);
        let cert = certify_xy(&p, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.lambda, p);
        assert!(cert.big_lambda.is_zero());
    }

    #[test]
    fn xy_excluded_words_fail_structurally() {
        let p = poly(&[("x1*x1*y1*y1", 1.0), ("y1*y1*x1*x1", 1.0)], Mode::XY, 1);
        match certify_xy(&p, &CertifyOptions::default()).unwrap_err() {
            CertifyError::Structural { offending } => {
                assert_eq!(offending.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn xy_sum_of_squares() {
        let p = poly(&[("x1*x1", 1.0), ("y1*y1", 1.0)], Mode::XY, 1);
        let cert = certify_xy_sdp_mu1(&p, &CertifyOptions::default()).unwrap();
        assert!(cert.lambda.max_coeff_norm() < 1e-8);
        assert!(cert.residual <= residual_bound(&p));
        assert!((cert.gram[(0, 0)].re - 1.0).abs() < 1e-8);
        assert!((cert.gram[(1, 1)].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn xy_sdp_requires_single_pair() {
        let p = poly(&[("x1*x1", 1.0), ("x2*x2", 1.0)], Mode::XY, 2);
        assert_eq!(
            certify_xy_sdp_mu1(&p, &CertifyOptions::default()).unwrap_err(),
            CertifyError::UnsupportedMu(2)
        );
    }

    #[test]
    fn matrix_coefficient_rank_one() {
        let mut e11 = DMatrix::zeros(2, 2);
        e11[(0, 0)] = Complex64::new(1.0, 0.0);
        let p = FreePolynomial::monomial(word("y1*x1*x1*y1", Mode::XY), e11, 1).unwrap();
        let cert = certify_xy_sdp_mu1(&p, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.big_lambda.rows(), 1);
        let coeff = cert.big_lambda.coeff(&word("x1*y1", Mode::XY)).unwrap();
        assert!((coeff[(0, 0)].norm() - 1.0).abs() < 1e-10);
        assert!(coeff[(0, 1)].norm() < 1e-10);
    }

    #[test]
    fn verification_reports_coefficient_error() {
        let p = poly(&[("x1*x1", 1.0)], Mode::A2, 1);
        let mut cert = certify_a2(&p, &CertifyOptions::default()).unwrap();
        assert!(verify_certificate(&p, &cert).unwrap() < 1e-12);
        cert.big_lambda = poly(&[("x1", 2.0)], Mode::A2, 1);
        assert!((verify_certificate(&p, &cert).unwrap() - 3.0).abs() < 1e-12);
        cert.big_lambda = poly(&[("x1*x1", 1.0)], Mode::A2, 1);
        assert_eq!(verify_certificate(&p, &cert).unwrap_err(), CertifyError::ModeMismatch);
    }

    #[test]
    fn schur_pencil_of_square() {
        let p = poly(&[("x1*x1", 1.0)], Mode::A2, 1);
        let cert = certify_a2(&p, &CertifyOptions::default()).unwrap();
        let sp = schur_pencil(&cert);
        assert_eq!(sp.corner, 1);
        assert!(sp.pencil.is_hermitian(1e-12));
        let pt = crate::ncpoly::EvaluationPoint::from_tuples(
            &[DMatrix::zeros(1, 1)],
            &[DMatrix::zeros(1, 1)],
        )
        .unwrap();
        let v = sp.pencil.evaluate(&pt).unwrap();
        assert!((v[(0, 0)].re - 1.0).abs() < 1e-12 && v[(1, 1)].norm() < 1e-12);
    }
}
