//! Dense semidefinite feasibility by Dykstra alternating projections.
//!
//! Finds a hermitian `Q ⪰ 0` with `<A_i, Q> = b_i`, where
//! `<A, Q> = Re tr(A^* Q)`. The solver only ever reports positive results:
//! `NotCertified` means the iteration budget ran out or progress stalled,
//! never that the problem is infeasible.
//!
//! Before iterating, constraints that force a group of diagonal entries to
//! vanish are used to delete the corresponding rows and columns. This keeps
//! rank-deficient Gram systems away from the slow boundary regime of
//! alternating projections.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::{hermitian_eigen, min_eig, psd_project};
use crate::CMatrix;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_STALL_WINDOW: usize = 100;

/// Relative progress below which a stall window counts as stalled.
const STALL_PROGRESS: f64 = 1e-12;

/// How often the affine iterate is tested for positive semidefiniteness.
const AFFINE_CHECK_EVERY: usize = 10;

/// A hermitian coefficient matrix stored as its nonzero entries (both triangles).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseHermitian {
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    /// Merges duplicate positions and drops zeros. Returns `None` when the
    /// entries do not describe a hermitian matrix.
    pub fn from_entries(raw: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Option<Self> {
        let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (i, j, z) in raw {
            *map.entry((i, j)).or_default() += z;
        }
        map.retain(|_, z| z.re != 0.0 || z.im != 0.0);
        for (&(i, j), z) in &map {
            let mirror = map.get(&(j, i)).copied().unwrap_or_default();
            if (mirror - z.conj()).norm() > 1e-14 * (1.0 + z.norm()) {
                return None;
            }
        }
        Some(SparseHermitian {
            entries: map.into_iter().map(|((i, j), z)| (i, j, z)).collect(),
        })
    }

    pub fn from_dense(a: &CMatrix) -> Option<Self> {
        let mut raw = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                raw.push((i, j, a[(i, j)]));
            }
        }
        Self::from_entries(raw)
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Re tr(A^* X)`.
    pub fn inner(&self, x: &CMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, a)| (a.conj() * x[(i, j)]).re)
            .sum()
    }

    pub fn inner_sparse(&self, other: &SparseHermitian) -> f64 {
        let lookup: BTreeMap<(usize, usize), Complex64> =
            other.entries.iter().map(|&(i, j, z)| ((i, j), z)).collect();
        self.entries
            .iter()
            .filter_map(|&(i, j, a)| lookup.get(&(i, j)).map(|b| (a.conj() * b).re))
            .sum()
    }

    fn max_index(&self) -> usize {
        self.entries.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0)
    }

    pub fn to_dense(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for &(i, j, z) in &self.entries {
            m[(i, j)] += z;
        }
        m
    }
}

/// One affine constraint `<A, Q> = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: SparseHermitian,
    pub rhs: f64,
}

/// A feasibility instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
    pub tol: f64,
    pub max_iters: usize,
    pub stall_window: usize,
    /// Optional warm start (full size, hermitian).
    pub initial: Option<CMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Feasible,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpOutcome {
    pub status: SdpStatus,
    /// The last iterate; the certified solution when `Feasible`.
    pub q: CMatrix,
    pub constraint_residual: f64,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    pub diagnostic: Option<String>,
}

impl SdpOutcome {
    pub fn is_feasible(&self) -> bool {
        self.status == SdpStatus::Feasible
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SdpError {
    #[error("constraint {0} has a non-hermitian coefficient matrix")]
    NotHermitian(usize),
    #[error("constraint {index} touches entry {entry} outside a {dim}x{dim} variable")]
    OutOfRange { index: usize, entry: usize, dim: usize },
}

impl SdpProblem {
    pub fn new(dim: usize) -> Self {
        SdpProblem {
            dim,
            constraints: Vec::new(),
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            stall_window: DEFAULT_STALL_WINDOW,
            initial: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    /// Adds `<A, Q> = rhs` for hermitian `A` given by its entries.
    pub fn add_constraint(
        &mut self,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
        rhs: f64,
    ) -> Result<(), SdpError> {
        let index = self.constraints.len();
        let coeffs = SparseHermitian::from_entries(entries).ok_or(SdpError::NotHermitian(index))?;
        if !coeffs.is_empty() && coeffs.max_index() >= self.dim {
            return Err(SdpError::OutOfRange {
                index,
                entry: coeffs.max_index(),
                dim: self.dim,
            });
        }
        self.constraints.push(Constraint { coeffs, rhs });
        Ok(())
    }

    /// Adds the complex linear condition `sum_{(i,j) in positions} Q_ij = target`
    /// as its real and imaginary parts. Positions may include mirrored pairs.
    pub fn add_entry_sum(&mut self, positions: &[(usize, usize)], target: Complex64) -> Result<(), SdpError> {
        let half = Complex64::new(0.5, 0.0);
        let ihalf = Complex64::new(0.0, 0.5);
        let mut re = Vec::new();
        let mut im = Vec::new();
        for &(i, j) in positions {
            // Re Q_ij = <(E_ij + E_ji)/2, Q>,  Im Q_ij = <(i E_ij - i E_ji)/2, Q>
            re.push((i, j, half));
            re.push((j, i, half));
            im.push((i, j, ihalf));
            im.push((j, i, -ihalf));
        }
        self.add_constraint(re, target.re)?;
        let im_coeffs = SparseHermitian::from_entries(im.clone()).ok_or(SdpError::NotHermitian(self.constraints.len()))?;
        if !im_coeffs.is_empty() || target.im.abs() > 0.0 {
            self.add_constraint(im, target.im)?;
        }
        Ok(())
    }

    /// `max_i |<A_i, Q> - b_i|`.
    pub fn residual(&self, q: &CMatrix) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.coeffs.inner(q) - c.rhs).abs())
            .fold(0.0, f64::max)
    }
}

struct Reduced {
    keep: Vec<usize>,
    constraints: Vec<Constraint>,
}

/// Deletes rows/columns forced to zero by constraints of the form
/// `sum_i c_i Q_ii = 0` with all `c_i` of one sign.
fn facial_reduction(prob: &SdpProblem) -> Result<Reduced, String> {
    let mut zeroed = vec![false; prob.dim];
    let scale = 1.0 + prob.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
    let zero_rhs = 1e-14 * scale;
    loop {
        let mut changed = false;
        for (idx, c) in prob.constraints.iter().enumerate() {
            let live: Vec<&(usize, usize, Complex64)> = c
                .coeffs
                .entries()
                .iter()
                .filter(|(i, j, _)| !zeroed[*i] && !zeroed[*j])
                .collect();
            if live.is_empty() {
                if c.rhs.abs() > prob.tol {
                    return Err(format!(
                        "inconsistent affine system: constraint {idx} reduces to 0 = {:.3e}",
                        c.rhs
                    ));
                }
                continue;
            }
            let diagonal = live.iter().all(|(i, j, z)| i == j && z.im == 0.0);
            if !diagonal {
                continue;
            }
            let all_pos = live.iter().all(|(_, _, z)| z.re > 0.0);
            let all_neg = live.iter().all(|(_, _, z)| z.re < 0.0);
            if !(all_pos || all_neg) {
                continue;
            }
            let signed_rhs = if all_pos { c.rhs } else { -c.rhs };
            if signed_rhs < -prob.tol {
                return Err(format!(
                    "constraint {idx} forces a nonnegative diagonal combination to equal {signed_rhs:.3e}"
                ));
            }
            if signed_rhs.abs() <= zero_rhs {
                for (i, _, _) in live {
                    zeroed[*i] = true;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..prob.dim).filter(|&i| !zeroed[i]).collect();
    let mut position = vec![usize::MAX; prob.dim];
    for (new, &old) in keep.iter().enumerate() {
        position[old] = new;
    }
    let constraints = prob
        .constraints
        .iter()
        .filter_map(|c| {
            let entries: Vec<(usize, usize, Complex64)> = c
                .coeffs
                .entries()
                .iter()
                .filter(|(i, j, _)| !zeroed[*i] && !zeroed[*j])
                .map(|&(i, j, z)| (position[i], position[j], z))
                .collect();
            if entries.is_empty() {
                None
            } else {
                Some(Constraint {
                    coeffs: SparseHermitian { entries },
                    rhs: c.rhs,
                })
            }
        })
        .collect();
    Ok(Reduced { keep, constraints })
}

/// Orthogonal projection onto `{X : <A_i, X> = b_i}`, solved per group of
/// constraints that share matrix entries.
struct AffineProjector {
    constraints: Vec<Constraint>,
    groups: Vec<(Vec<usize>, DMatrix<f64>)>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn real_pinv(k: &DMatrix<f64>) -> DMatrix<f64> {
    let n = k.nrows();
    let eig = k.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::zeros(n, n);
    for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 1e-12 * top && lam > 0.0 {
            let v = eig.eigenvectors.column(idx);
            out += (v * v.transpose()) / lam;
        }
    }
    out
}

impl AffineProjector {
    fn new(constraints: Vec<Constraint>) -> Self {
        let m = constraints.len();
        let mut parent: Vec<usize> = (0..m).collect();
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (idx, c) in constraints.iter().enumerate() {
            for &(i, j, _) in c.coeffs.entries() {
                let key = (i.min(j), i.max(j));
                match owner.get(&key) {
                    Some(&other) => {
                        let (ra, rb) = (find(&mut parent, idx), find(&mut parent, other));
                        if ra != rb {
                            parent[ra] = rb;
                        }
                    }
                    None => {
                        owner.insert(key, idx);
                    }
                }
            }
        }
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for idx in 0..m {
            let root = find(&mut parent, idx);
            members.entry(root).or_default().push(idx);
        }
        let groups = members
            .into_values()
            .map(|idxs| {
                let s = idxs.len();
                let mut k = DMatrix::zeros(s, s);
                for a in 0..s {
                    for b in a..s {
                        let v = constraints[idxs[a]].coeffs.inner_sparse(&constraints[idxs[b]].coeffs);
                        k[(a, b)] = v;
                        k[(b, a)] = v;
                    }
                }
                let pinv = real_pinv(&k);
                (idxs, pinv)
            })
            .collect();
        AffineProjector { constraints, groups }
    }

    fn project(&self, x: &CMatrix) -> CMatrix {
        let mut out = x.clone();
        for (idxs, pinv) in &self.groups {
            let r = nalgebra::DVector::from_iterator(
                idxs.len(),
                idxs.iter().map(|&i| self.constraints[i].coeffs.inner(x) - self.constraints[i].rhs),
            );
            let y = pinv * r;
            for (slot, &ci) in idxs.iter().enumerate() {
                if y[slot] == 0.0 {
                    continue;
                }
                for &(i, j, a) in self.constraints[ci].coeffs.entries() {
                    out[(i, j)] -= a * y[slot];
                }
            }
        }
        out
    }

    fn residual(&self, x: &CMatrix) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.coeffs.inner(x) - c.rhs).abs())
            .fold(0.0, f64::max)
    }
}

fn embed(x: &CMatrix, keep: &[usize], dim: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim, dim);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            out[(i, j)] = x[(a, b)];
        }
    }
    out
}

fn restrict(x: &CMatrix, keep: &[usize]) -> CMatrix {
    CMatrix::from_fn(keep.len(), keep.len(), |a, b| x[(keep[a], keep[b])])
}

fn smallest_eigenvalue(x: &CMatrix) -> f64 {
    if x.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(x).0[0]
}

/// Runs Dykstra's alternating projections between the PSD cone and the
/// affine constraint set.
pub fn solve_feasibility(prob: &SdpProblem) -> SdpOutcome {
    let dim = prob.dim;
    let finish = |q: CMatrix, iterations: usize, diagnostic: Option<String>| -> SdpOutcome {
        let constraint_residual = prob.residual(&q);
        let min_eigenvalue = if dim == 0 { 0.0 } else { min_eig(&q).unwrap_or(f64::NEG_INFINITY) };
        let certified = constraint_residual <= prob.tol && min_eigenvalue >= -prob.tol;
        SdpOutcome {
            status: if certified && diagnostic.is_none() {
                SdpStatus::Feasible
            } else {
                SdpStatus::NotCertified
            },
            q,
            constraint_residual,
            min_eigenvalue,
            iterations,
            diagnostic,
        }
    };

    let reduced = match facial_reduction(prob) {
        Ok(r) => r,
        Err(msg) => return finish(CMatrix::zeros(dim, dim), 0, Some(msg)),
    };
    let keep = reduced.keep;
    let n = keep.len();
    let proj = AffineProjector::new(reduced.constraints);

    let start = match &prob.initial {
        Some(init) if init.nrows() == dim && init.ncols() == dim => restrict(init, &keep),
        _ => CMatrix::zeros(n, n),
    };
    let mut x = proj.project(&start);
    if proj.residual(&x) > prob.tol {
        let msg = format!(
            "inconsistent affine system: least-squares residual {:.3e}",
            proj.residual(&x)
        );
        return finish(embed(&x, &keep, dim), 0, Some(msg));
    }
    if n == 0 || smallest_eigenvalue(&x) >= -prob.tol {
        return finish(embed(&x, &keep, dim), 0, None);
    }

    let mut increment = CMatrix::zeros(n, n);
    let mut mark = x.clone();
    for it in 1..=prob.max_iters {
        let z = &x + &increment;
        let y = psd_project(&z);
        increment = z - &y;
        x = proj.project(&y);

        if proj.residual(&y) <= prob.tol {
            return finish(embed(&y, &keep, dim), it, None);
        }
        if it % AFFINE_CHECK_EVERY == 0 && smallest_eigenvalue(&x) >= -prob.tol {
            return finish(embed(&x, &keep, dim), it, None);
        }
        if it % prob.stall_window.max(1) == 0 {
            let progress = (&x - &mark).norm();
            if progress <= STALL_PROGRESS * (1.0 + x.norm()) {
                let msg = format!("stalled after {it} iterations (relative progress {progress:.3e})");
                return finish(embed(&y, &keep, dim), it, Some(msg));
            }
            mark = x.clone();
        }
    }
    let y = psd_project(&x);
    let msg = format!("iteration budget of {} exhausted", prob.max_iters);
    finish(embed(&y, &keep, dim), prob.max_iters, Some(msg))
}
