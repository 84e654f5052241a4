//! Random test objects for the convexity inequalities and a falsifier that
//! searches them for a violation.
//!
//! Every draw comes from a ChaCha8 stream selected by `(seed, trial)`, so a
//! reported counterexample can be regenerated from its seed and trial index
//! alone, and trials can run in parallel without changing the result.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{PolyError, SamplerError};
use crate::linalg::{hermitian_eigen, hermitian_part};
use crate::ncpoly::{EvaluationPoint, FreePolynomial, Mode, VarClass, HERMITIAN_TOL};
use crate::CMatrix;

/// A gap eigenvalue below this counts as a violation.
pub const VIOLATION_THRESHOLD: f64 = -1e-7;

/// Random trials cycle through matrix sizes `1..=MAX_SIZE`.
pub const MAX_SIZE: usize = 4;

/// Enough trials to see every size with both test families.
pub const MIN_TRIALS: usize = 2 * MAX_SIZE;

/// Scalar values tried by the deterministic probe, in order.
const PROBE_VALUES: [f64; 3] = [1.0, -1.0, 0.0];

/// The probe enumerates `3^(3 mu)` points, so it is limited to small `mu`.
const PROBE_MAX_MU: usize = 2;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian: real and imaginary parts of variance ½.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    hermitian_part(&random_matrix(rng, n, n))
}

fn random_tuple<R: Rng + ?Sized>(rng: &mut R, mu: usize, n: usize) -> Vec<CMatrix> {
    (0..mu).map(|_| random_hermitian(rng, n)).collect()
}

/// `(I_d ⊗ V)^* M (I_d ⊗ V)` for `V = (I_n 0)^*` and `M` of size `d·total`.
fn compress(m: &CMatrix, d: usize, total: usize, n: usize) -> CMatrix {
    let idx: Vec<usize> = (0..d).flat_map(|k| (0..n).map(move |i| k * total + i)).collect();
    CMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

fn point(first: &[CMatrix], second: &[CMatrix]) -> Result<EvaluationPoint, PolyError> {
    EvaluationPoint::from_tuples(first, second)
}

/// Smallest eigenvalue of the hermitian part of a gap matrix.
pub fn violation_of(gap: &CMatrix) -> f64 {
    if gap.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(&hermitian_part(gap)).0[0]
}

/// `R_j = A_j ⊕ α_j`, `S_j = [[X_j, β_j], [β_j^*, δ_j]]`, `W = (I_n 0)^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct A2Pair {
    pub n: usize,
    pub m: usize,
    pub r: Vec<CMatrix>,
    pub s: Vec<CMatrix>,
}

impl A2Pair {
    pub fn from_blocks(
        a: &[CMatrix],
        alpha: &[CMatrix],
        x: &[CMatrix],
        beta: &[CMatrix],
        delta: &[CMatrix],
    ) -> Result<Self, SamplerError> {
        let mu = a.len();
        if [alpha.len(), x.len(), beta.len(), delta.len()].iter().any(|&l| l != mu) || mu == 0 {
            return Err(SamplerError::BadSize("every block tuple needs mu entries".into()));
        }
        let n = a[0].nrows();
        let m = alpha[0].nrows();
        if n == 0 || m == 0 {
            return Err(SamplerError::BadSize(format!("n = {n}, m = {m}")));
        }
        let mut r = Vec::with_capacity(mu);
        let mut s = Vec::with_capacity(mu);
        for j in 0..mu {
            let mut rj = CMatrix::zeros(n + m, n + m);
            rj.view_mut((0, 0), (n, n)).copy_from(&a[j]);
            rj.view_mut((n, n), (m, m)).copy_from(&alpha[j]);
            let mut sj = CMatrix::zeros(n + m, n + m);
            sj.view_mut((0, 0), (n, n)).copy_from(&x[j]);
            sj.view_mut((0, n), (n, m)).copy_from(&beta[j]);
            sj.view_mut((n, 0), (m, n)).copy_from(&beta[j].adjoint());
            sj.view_mut((n, n), (m, m)).copy_from(&delta[j]);
            r.push(rj);
            s.push(sj);
        }
        Ok(A2Pair { n, m, r, s })
    }

    /// The isometry `W = (I_n 0)^*`.
    pub fn w(&self) -> CMatrix {
        let mut w = CMatrix::zeros(self.n + self.m, self.n);
        w.view_mut((0, 0), (self.n, self.n)).fill_with_identity();
        w
    }

    /// `(A, X) = W^*(R, S)W`.
    pub fn compressed(&self) -> (Vec<CMatrix>, Vec<CMatrix>) {
        let cut = |t: &Vec<CMatrix>| t.iter().map(|m| m.view((0, 0), (self.n, self.n)).into_owned()).collect();
        (cut(&self.r), cut(&self.s))
    }
}

fn draw_a2_pair<R: Rng + ?Sized>(rng: &mut R, mu: usize, n: usize, m: usize) -> A2Pair {
    let a = random_tuple(rng, mu, n);
    let alpha = random_tuple(rng, mu, m);
    let x = random_tuple(rng, mu, n);
    let beta: Vec<CMatrix> = (0..mu).map(|_| random_matrix(rng, n, m)).collect();
    let delta = random_tuple(rng, mu, m);
    A2Pair::from_blocks(&a, &alpha, &x, &beta, &delta).expect("sizes are positive")
}

pub fn sample_a2_pair(mu: usize, n: usize, m: usize, seed: u64) -> Result<A2Pair, SamplerError> {
    if mu == 0 || n == 0 || m == 0 {
        return Err(SamplerError::BadSize(format!("mu = {mu}, n = {n}, m = {m}")));
    }
    Ok(draw_a2_pair(&mut trial_rng(seed, 0), mu, n, m))
}

/// `(I_d ⊗ W)^* p(R,S) (I_d ⊗ W) − p(W^*(R,S)W)`; PSD for every pair iff
/// `p` is convex in the second class.
pub fn a2_pair_gap(p: &FreePolynomial, pair: &A2Pair) -> Result<CMatrix, PolyError> {
    let total = pair.n + pair.m;
    let big = p.evaluate(&point(&pair.r, &pair.s)?)?;
    let (a, x) = pair.compressed();
    let small = p.evaluate(&point(&a, &x)?)?;
    Ok(compress(&big, p.rows(), total, pair.n) - small)
}

/// Block sizes `(n0, n1, n2)` and tuples in the xy-pair normal form
/// `X_j = [[X0_j, A_j, 0], [A_j^*, *, *], [0, *, *]]`,
/// `Y_k = [[Y0_k, 0, C_k], [0, *, *], [C_k^*, *, *]]`, `V = (I 0 0)^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct XYPair {
    pub sizes: (usize, usize, usize),
    pub x: Vec<CMatrix>,
    pub y: Vec<CMatrix>,
}

impl XYPair {
    pub fn total(&self) -> usize {
        self.sizes.0 + self.sizes.1 + self.sizes.2
    }

    pub fn v(&self) -> CMatrix {
        let n0 = self.sizes.0;
        let mut v = CMatrix::zeros(self.total(), n0);
        v.view_mut((0, 0), (n0, n0)).fill_with_identity();
        v
    }

    /// `V^*(X, Y)V`.
    pub fn compressed(&self) -> (Vec<CMatrix>, Vec<CMatrix>) {
        let n0 = self.sizes.0;
        let cut = |t: &Vec<CMatrix>| t.iter().map(|m| m.view((0, 0), (n0, n0)).into_owned()).collect();
        (cut(&self.x), cut(&self.y))
    }
}

fn draw_xy_pair<R: Rng + ?Sized>(rng: &mut R, mu: usize, sizes: (usize, usize, usize)) -> XYPair {
    let (n0, n1, n2) = sizes;
    let total = n0 + n1 + n2;
    let mut x = random_tuple(rng, mu, total);
    let mut y = random_tuple(rng, mu, total);
    for xj in &mut x {
        xj.view_mut((0, n0 + n1), (n0, n2)).fill(Complex64::default());
        xj.view_mut((n0 + n1, 0), (n2, n0)).fill(Complex64::default());
    }
    for yk in &mut y {
        yk.view_mut((0, n0), (n0, n1)).fill(Complex64::default());
        yk.view_mut((n0, 0), (n1, n0)).fill(Complex64::default());
    }
    XYPair { sizes, x, y }
}

pub fn sample_xy_pair(mu: usize, sizes: (usize, usize, usize), seed: u64) -> Result<XYPair, SamplerError> {
    if mu == 0 || sizes.0 == 0 {
        return Err(SamplerError::BadSize(format!("mu = {mu}, leading block {}", sizes.0)));
    }
    Ok(draw_xy_pair(&mut trial_rng(seed, 0), mu, sizes))
}

/// `(I_d ⊗ V)^* p(X,Y) (I_d ⊗ V) − p(V^*(X,Y)V)`; PSD for every pair iff
/// `p` is xy-convex.
pub fn xy_pair_gap(p: &FreePolynomial, pair: &XYPair) -> Result<CMatrix, PolyError> {
    let big = p.evaluate(&point(&pair.x, &pair.y)?)?;
    let (x0, y0) = pair.compressed();
    let small = p.evaluate(&point(&x0, &y0)?)?;
    Ok(compress(&big, p.rows(), pair.total(), pair.sizes.0) - small)
}

/// Convexity along one class with the other class held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointTest {
    pub varying: VarClass,
    pub fixed: Vec<CMatrix>,
    pub x0: Vec<CMatrix>,
    pub x1: Vec<CMatrix>,
    pub t: f64,
}

impl MidpointTest {
    fn evaluate(&self, p: &FreePolynomial, varying: &[CMatrix]) -> Result<CMatrix, PolyError> {
        let pt = match self.varying {
            VarClass::Second => point(&self.fixed, varying)?,
            VarClass::First => point(varying, &self.fixed)?,
        };
        p.evaluate(&pt)
    }
}

/// `t p(X0) + (1−t) p(X1) − p(t X0 + (1−t) X1)`.
pub fn midpoint_gap(p: &FreePolynomial, test: &MidpointTest) -> Result<CMatrix, PolyError> {
    let t = test.t;
    let mix: Vec<CMatrix> = test
        .x0
        .iter()
        .zip(&test.x1)
        .map(|(a, b)| a.scale(t) + b.scale(1.0 - t))
        .collect();
    let p0 = test.evaluate(p, &test.x0)?;
    let p1 = test.evaluate(p, &test.x1)?;
    let pm = test.evaluate(p, &mix)?;
    Ok(p0.scale(t) + p1.scale(1.0 - t) - pm)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Midpoint(MidpointTest),
    A2Pair(A2Pair),
    XYPair(XYPair),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Midpoint(_) => "midpoint",
            Witness::A2Pair(_) => "a2-pair",
            Witness::XYPair(_) => "xy-pair",
        }
    }

    pub fn gap(&self, p: &FreePolynomial) -> Result<CMatrix, PolyError> {
        match self {
            Witness::Midpoint(t) => midpoint_gap(p, t),
            Witness::A2Pair(pair) => a2_pair_gap(p, pair),
            Witness::XYPair(pair) => xy_pair_gap(p, pair),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub witness: Witness,
    /// Smallest eigenvalue of the gap matrix.
    pub violation: f64,
    pub seed: u64,
    /// `None` for the deterministic scalar probe.
    pub trial: Option<u64>,
}

/// Recomputes the violation stored in a counterexample.
pub fn replay(p: &FreePolynomial, cx: &Counterexample) -> Result<f64, PolyError> {
    Ok(violation_of(&cx.witness.gap(p)?))
}

fn varying_classes(mode: Mode) -> &'static [VarClass] {
    match mode {
        Mode::A2 => &[VarClass::Second],
        Mode::XY => &[VarClass::First, VarClass::Second],
    }
}

fn scalar(v: f64) -> CMatrix {
    CMatrix::from_element(1, 1, Complex64::new(v, 0.0))
}

/// Midpoint tests at `t = ½` with every scalar from [`PROBE_VALUES`] in every
/// slot; returns the most negative one (first found on ties).
fn scalar_probe(p: &FreePolynomial, mode: Mode, seed: u64) -> Result<Option<Counterexample>, PolyError> {
    let mu = p.mu();
    let slots = 3 * mu;
    let count = PROBE_VALUES.len().pow(slots as u32);
    let mut best: Option<Counterexample> = None;
    for &varying in varying_classes(mode) {
        for idx in 0..count {
            let mut digits = vec![0usize; slots];
            let mut rest = idx;
            for slot in (0..slots).rev() {
                digits[slot] = rest % PROBE_VALUES.len();
                rest /= PROBE_VALUES.len();
            }
            let vals: Vec<CMatrix> = digits.iter().map(|&d| scalar(PROBE_VALUES[d])).collect();
            let test = MidpointTest {
                varying,
                fixed: vals[..mu].to_vec(),
                x0: vals[mu..2 * mu].to_vec(),
                x1: vals[2 * mu..].to_vec(),
                t: 0.5,
            };
            let violation = violation_of(&midpoint_gap(p, &test)?);
            if violation < VIOLATION_THRESHOLD && best.as_ref().is_none_or(|b| violation < b.violation) {
                best = Some(Counterexample {
                    witness: Witness::Midpoint(test),
                    violation,
                    seed,
                    trial: None,
                });
            }
        }
    }
    Ok(best)
}

/// Size used by random trial `trial`: cycles through `1..=MAX_SIZE`, each
/// size once per test family.
pub fn trial_size(trial: u64) -> usize {
    1 + (trial as usize / 2) % MAX_SIZE
}

/// Regenerates the witness of random trial `trial`.
pub fn trial_witness(mu: usize, mode: Mode, seed: u64, trial: u64) -> Witness {
    let mut rng = trial_rng(seed, trial);
    let n = trial_size(trial);
    if trial.is_multiple_of(2) {
        let varying = match mode {
            Mode::A2 => VarClass::Second,
            Mode::XY if rng.random::<bool>() => VarClass::First,
            Mode::XY => VarClass::Second,
        };
        let fixed = random_tuple(&mut rng, mu, n);
        let x0 = random_tuple(&mut rng, mu, n);
        let x1 = random_tuple(&mut rng, mu, n);
        let t = rng.random_range(0.05..0.95);
        Witness::Midpoint(MidpointTest { varying, fixed, x0, x1, t })
    } else {
        match mode {
            Mode::A2 => {
                let m = rng.random_range(1..=n);
                Witness::A2Pair(draw_a2_pair(&mut rng, mu, n, m))
            }
            Mode::XY => {
                let n1 = rng.random_range(1..=n);
                let n2 = rng.random_range(1..=n);
                Witness::XYPair(draw_xy_pair(&mut rng, mu, (n, n1, n2)))
            }
        }
    }
}

/// Searches for a violation of convexity in the second class (A2) or of
/// xy-convexity (XY). Returns the scalar-probe result if it finds one,
/// otherwise the lowest-indexed violating random trial. At least
/// [`MIN_TRIALS`] trials run before `None` is returned.
pub fn falsify(
    p: &FreePolynomial,
    mode: Mode,
    trials: usize,
    seed: u64,
) -> Result<Option<Counterexample>, SamplerError> {
    if p.rows() != p.cols() || !p.is_hermitian(HERMITIAN_TOL * (1.0 + p.max_coeff_norm())) {
        return Err(SamplerError::NotHermitian);
    }
    if p.mu() <= PROBE_MAX_MU {
        if let Some(cx) = scalar_probe(p, mode, seed)? {
            return Ok(Some(cx));
        }
    }
    let trials = trials.max(MIN_TRIALS) as u64;
    let mu = p.mu();
    let found = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<Counterexample>, PolyError> {
            let witness = trial_witness(mu, mode, seed, trial);
            let violation = violation_of(&witness.gap(p)?);
            Ok((violation < VIOLATION_THRESHOLD).then_some(Counterexample {
                witness,
                violation,
                seed,
                trial: Some(trial),
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match found {
        Some(Ok(cx)) => Ok(cx),
        Some(Err(e)) => Err(e.into()),
        None => Ok(None),
    }
}
