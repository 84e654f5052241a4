//! Dense hermitian kernels: spectra, PSD projection and factorization,
//! pseudoinverse and the tridiagonal block PSD completion.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::LinalgError;
use crate::CMatrix;

/// Relative cutoff below which singular values are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Relative cutoff for dropping eigenvalues in [`psd_factor`].
const FACTOR_CUTOFF: f64 = 1e-13;

fn asymmetry(h: &CMatrix) -> f64 {
    (h - h.adjoint()).norm()
}

fn check_hermitian(h: &CMatrix) -> Result<(), LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::Shape(format!(
            "expected square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let asym = asymmetry(h);
    if asym > 1e-10 * h.norm() {
        return Err(LinalgError::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

/// Hermitian part `(H + H*)/2`.
pub fn hermitian_part(h: &CMatrix) -> CMatrix {
    (h + h.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Eigenvalues in ascending order with matching eigenvector columns.
/// The input is symmetrized first.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Smallest eigenvalue of a hermitian matrix.
pub fn min_eig(h: &CMatrix) -> Result<f64, LinalgError> {
    check_hermitian(h)?;
    Ok(hermitian_eigen(h).0.first().copied().unwrap_or(0.0))
}

/// Largest eigenvalue of a hermitian matrix.
pub fn max_eig(h: &CMatrix) -> Result<f64, LinalgError> {
    check_hermitian(h)?;
    Ok(hermitian_eigen(h).0.last().copied().unwrap_or(0.0))
}

fn reassemble(values: &[f64], vectors: &CMatrix) -> CMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(v);
    }
    let out = scaled * vectors.adjoint();
    debug_assert_eq!(out.nrows(), n);
    hermitian_part(&out)
}

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping at zero).
pub fn psd_project(h: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    if values.first().is_none_or(|&v| v >= 0.0) {
        return hermitian_part(h);
    }
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    reassemble(&clipped, &vectors)
}

/// Factors a PSD matrix as `Q ≈ F* F` with `F` having `rank(Q)` rows.
///
/// Eigenvalues in `[-tol, 0)` are clipped; anything more negative is an error.
/// Rows are ordered by decreasing eigenvalue and phase-normalized so their
/// first significant entry is real and positive.
pub fn psd_factor(q: &CMatrix, tol: f64) -> Result<CMatrix, LinalgError> {
    check_hermitian(q)?;
    let n = q.nrows();
    let (values, vectors) = hermitian_eigen(q);
    let min = values.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(LinalgError::Indefinite { min_eig: min, tol });
    }
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = FACTOR_CUTOFF * top;
    let kept: Vec<usize> = (0..n).rev().filter(|&k| values[k] > cutoff).collect();
    let mut f = CMatrix::zeros(kept.len(), n);
    for (row, &k) in kept.iter().enumerate() {
        let s = values[k].sqrt();
        let v = vectors.column(k);
        let norm = v.norm();
        let pivot = v.iter().find(|z| z.norm() > 1e-8 * norm).copied();
        let phase = match pivot {
            Some(z) => z.conj() / z.norm(),
            None => Complex64::new(1.0, 0.0),
        };
        for j in 0..n {
            // row of F is sqrt(λ) v^*, rotated so the pivot entry is real positive
            f[(row, j)] = (v[j] * phase).conj() * s;
        }
    }
    Ok(f)
}

/// Moore–Penrose pseudoinverse with singular values below
/// `RANK_CUTOFF · σ_max` treated as zero.
pub fn pseudo_inverse(m: &CMatrix) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > RANK_CUTOFF * smax && s > 0.0 {
            let vk = vt.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk) * Complex64::new(1.0 / s, 0.0);
        }
    }
    out
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numeric rank: singular values at least `RANK_CUTOFF · σ_max` count.
pub fn numeric_rank(m: &CMatrix) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v >= RANK_CUTOFF * smax).count()
}

/// Stacks a grid of blocks into one matrix.
pub fn block_matrix(blocks: &[Vec<&CMatrix>]) -> Result<CMatrix, LinalgError> {
    let row_sizes: Vec<usize> = blocks.iter().map(|r| r[0].nrows()).collect();
    let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.ncols()).collect();
    let mut out = CMatrix::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            if b.nrows() != row_sizes[i] || b.ncols() != col_sizes[j] {
                return Err(LinalgError::Shape(format!(
                    "block ({i},{j}) is {}x{}, expected {}x{}",
                    b.nrows(),
                    b.ncols(),
                    row_sizes[i],
                    col_sizes[j]
                )));
            }
            out.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(*b);
            c0 += col_sizes[j];
        }
        r0 += row_sizes[i];
    }
    Ok(out)
}

/// Blocks of a partially specified hermitian matrix
/// `[[A, B, ?], [B*, C, D], [?*, D*, E]]`.
#[derive(Debug, Clone)]
pub struct ChordalBlocks {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub e: CMatrix,
}

impl ChordalBlocks {
    /// The full matrix with the unknown corner filled by `q`.
    pub fn assemble(&self, q: &CMatrix) -> Result<CMatrix, LinalgError> {
        let bs = self.b.adjoint();
        let ds = self.d.adjoint();
        let qs = q.adjoint();
        block_matrix(&[
            vec![&self.a, &self.b, q],
            vec![&bs, &self.c, &self.d],
            vec![&qs, &ds, &self.e],
        ])
    }
}

/// PSD completion of the tridiagonal block pattern: `Q = B C⁺ D`.
///
/// Requires both specified principal blocks `[[A,B],[B*,C]]` and
/// `[[C,D],[D*,E]]` to be PSD to within `tol`.
pub fn psd_complete(blocks: &ChordalBlocks, tol: f64) -> Result<CMatrix, LinalgError> {
    let ChordalBlocks { a, b, c, d, e } = blocks;
    if b.nrows() != a.nrows() || b.ncols() != c.nrows() || d.nrows() != c.nrows() || d.ncols() != e.nrows() {
        return Err(LinalgError::Shape("chordal blocks do not line up".into()));
    }
    let bs = b.adjoint();
    let ds = d.adjoint();
    let upper = block_matrix(&[vec![a, b], vec![&bs, c]])?;
    let lower = block_matrix(&[vec![c, d], vec![&ds, e]])?;
    let m1 = min_eig(&upper)?;
    if m1 < -tol {
        return Err(LinalgError::CompletionPrecondition(format!(
            "leading principal block has eigenvalue {m1:.3e}"
        )));
    }
    let m2 = min_eig(&lower)?;
    if m2 < -tol {
        return Err(LinalgError::CompletionPrecondition(format!(
            "trailing principal block has eigenvalue {m2:.3e}"
        )));
    }
    Ok(b * pseudo_inverse(c) * d)
}

/// Converts a real row-major slice into a complex matrix.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    DMatrix::from_row_iterator(rows, cols, data.iter().map(|&v| Complex64::new(v, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn min_eig_examples() {
        assert!((min_eig(&CMatrix::identity(2, 2)).unwrap() - 1.0).abs() < 1e-14);
        assert!((min_eig(&real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap() + 1.0).abs() < 1e-14);
        let d = real_matrix(3, 3, &[3.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 5.0]);
        assert!((min_eig(&d).unwrap() + 2.0).abs() < 1e-14);
        assert!(min_eig(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let h = DMatrix::from_row_slice(2, 2, &[cz(2.0, 0.0), cz(0.0, 1.0), cz(0.0, -1.0), cz(2.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&h);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let back = reassemble(&vals, &vecs);
        assert!((back - h).norm() < 1e-12);
    }

    #[test]
    fn psd_project_examples() {
        let p = psd_project(&real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert!((p - real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0])).norm() < 1e-14);
        let p = psd_project(&real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert!((p - real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5])).norm() < 1e-14);
        let psd = real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!((psd_project(&psd) - &psd).norm() < 1e-12);
    }

    #[test]
    fn psd_factor_examples() {
        let f = psd_factor(&real_matrix(2, 2, &[4.0, 0.0, 0.0, 0.0]), 1e-8).unwrap();
        assert_eq!(f.shape(), (1, 2));
        assert!((f - real_matrix(1, 2, &[2.0, 0.0])).norm() < 1e-12);

        let f = psd_factor(&real_matrix(2, 2, &[1.0; 4]), 1e-8).unwrap();
        assert!((f - real_matrix(1, 2, &[1.0, 1.0])).norm() < 1e-12);

        let err = psd_factor(&real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]), 1e-8).unwrap_err();
        assert!(matches!(err, LinalgError::Indefinite { .. }));

        let zero = psd_factor(&CMatrix::zeros(3, 3), 1e-8).unwrap();
        assert_eq!(zero.nrows(), 0);
    }

    #[test]
    fn completion_examples() {
        let one = real_matrix(1, 1, &[1.0]);
        let blocks = ChordalBlocks { a: one.clone(), b: one.clone(), c: one.clone(), d: one.clone(), e: one.clone() };
        let q = psd_complete(&blocks, 1e-10).unwrap();
        assert!((q[(0, 0)].re - 1.0).abs() < 1e-12);
        let full = blocks.assemble(&q).unwrap();
        assert!(min_eig(&full).unwrap() > -1e-12);

        let i2 = CMatrix::identity(2, 2);
        let z2 = CMatrix::zeros(2, 2);
        let blocks = ChordalBlocks { a: i2.clone(), b: z2.clone(), c: i2.clone(), d: z2.clone(), e: i2.clone() };
        assert!(psd_complete(&blocks, 1e-10).unwrap().norm() == 0.0);

        let half = &i2 * cz(0.5, 0.0);
        let blocks = ChordalBlocks { a: i2.clone(), b: half.clone(), c: i2.clone(), d: half, e: i2.clone() };
        let q = psd_complete(&blocks, 1e-10).unwrap();
        assert!((&q - &i2 * cz(0.25, 0.0)).norm() < 1e-12);
        assert!(min_eig(&blocks.assemble(&q).unwrap()).unwrap() >= -1e-12);

        let bad = ChordalBlocks { a: one.clone(), b: real_matrix(1, 1, &[2.0]), c: one.clone(), d: one.clone(), e: one };
        assert!(matches!(psd_complete(&bad, 1e-10), Err(LinalgError::CompletionPrecondition(_))));
    }

    #[test]
    fn pseudo_inverse_of_singular_matrix() {
        let m = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = pseudo_inverse(&m);
        assert!((p - real_matrix(2, 2, &[0.25; 4])).norm() < 1e-12);
        assert_eq!(numeric_rank(&m), 1);
    }

    fn random_hermitian(n: usize, data: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let k = 2 * (i * n + j);
                m[(i, j)] = cz(data[k % data.len()], data[(k + 1) % data.len()]);
            }
        }
        hermitian_part(&m)
    }

    proptest! {
        #[test]
        fn factor_reproduces_psd_input(n in 1usize..12, rank in 1usize..12, data in prop::collection::vec(-1.0f64..1.0, 64..300)) {
            let r = rank.min(n);
            let mut g = CMatrix::zeros(r, n);
            for i in 0..r { for j in 0..n {
                let k = 2 * (i * n + j);
                g[(i, j)] = cz(data[k % data.len()], data[(k + 1) % data.len()]);
            }}
            let q = g.adjoint() * &g;
            let tol = 1e-9;
            let f = psd_factor(&q, tol).unwrap();
            prop_assert!(f.nrows() <= r);
            prop_assert!((f.adjoint() * &f - &q).norm() <= 10.0 * tol * (1.0 + q.norm()));
        }

        #[test]
        fn projection_is_idempotent_and_nonexpansive(n in 1usize..8, d1 in prop::collection::vec(-2.0f64..2.0, 128), d2 in prop::collection::vec(-2.0f64..2.0, 128)) {
            let a = random_hermitian(n, &d1);
            let b = random_hermitian(n, &d2);
            let pa = psd_project(&a);
            let pb = psd_project(&b);
            prop_assert!((psd_project(&pa) - &pa).norm() < 1e-10);
            prop_assert!((&pa - &pb).norm() <= (&a - &b).norm() + 1e-10);
            prop_assert!(min_eig(&pa).unwrap() >= -1e-12);
        }
    }
}
