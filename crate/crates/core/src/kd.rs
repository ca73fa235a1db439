//! Basis pairs, Kirkwood-Dirac distributions, supports and classicality.
//!
//! A state is stored once, by its coefficients ⟨a_i|ψ⟩ in the A basis. The B
//! coefficients are derived from the transition matrix U_ij = ⟨a_i|b_j⟩ on
//! demand, so the two representations cannot drift apart.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{root_of_unity, CycNum};
use crate::linalg::{CMatrix, LinalgError};

pub const DEFAULT_SUPPORT_EPS: f64 = 1e-10;
pub const DEFAULT_CLASSICAL_EPS: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const NORM_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KdError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix entries are not all of modulus 1/sqrt(d) (max deviation {0:.3e})")]
    NotUnbiased(f64),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("tolerance must be nonnegative and finite, got {0}")]
    BadTolerance(f64),
    #[error("support product {product} is below d = {d}; the support threshold is misconfigured")]
    SupportViolation { product: usize, d: usize },
    #[error("operation requires a DFT transition matrix")]
    NotDft,
    #[error("operation requires a mutually unbiased transition matrix")]
    NotUnbiasedKind,
    #[error("criterion does not apply to basis vectors (n_a = {n_a}, n_b = {n_b})")]
    BasisVector { n_a: usize, n_b: usize },
    #[error("malformed state file: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    Dft,
    GeneralMub,
    General,
}

impl BasisKind {
    pub fn is_unbiased(self) -> bool {
        matches!(self, BasisKind::Dft | BasisKind::GeneralMub)
    }
}

/// Unitary U with U_ij = ⟨a_i|b_j⟩.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    d: usize,
    kind: BasisKind,
    /// ω_d^{ij} without the 1/√d prefactor; DFT only.
    exact: Option<CMatrix>,
    numeric: CMatrix,
    values: Vec<Complex64>,
}

impl TransitionMatrix {
    pub fn dft(d: usize) -> Result<Self, KdError> {
        if d == 0 {
            return Err(KdError::ZeroDimension);
        }
        let exact = (0..d * d).map(|k| CycNum::root_power(d, ((k / d) * (k % d)) as i64).expect("d > 0")).collect();
        let exact = CMatrix::exact(d, d, exact)?;
        let scale = 1.0 / (d as f64).sqrt();
        let numeric = CMatrix::from_fn_numeric(d, d, |i, j| root_of_unity(d, (i * j) as i64) * scale);
        Ok(Self::assemble(d, BasisKind::Dft, Some(exact), numeric))
    }

    /// Wraps a numeric unitary, checking unitarity and (for unbiased kinds)
    /// the flat modulus 1/√d.
    pub fn from_numeric(m: CMatrix, kind: BasisKind) -> Result<Self, KdError> {
        if m.rows() != m.cols() {
            return Err(KdError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let d = m.rows();
        if d == 0 {
            return Err(KdError::ZeroDimension);
        }
        let m = m.to_numeric();
        let dev = unitarity_deviation(&m);
        if dev > UNITARY_TOL {
            return Err(KdError::NotUnitary(dev));
        }
        if kind.is_unbiased() {
            let dev = flatness_deviation(&m);
            if dev > UNITARY_TOL {
                return Err(KdError::NotUnbiased(dev));
            }
        }
        Ok(Self::assemble(d, kind, None, m))
    }

    /// A == B; every state is classical and the support bound is 1.
    pub fn identity(d: usize) -> Result<Self, KdError> {
        Self::from_numeric(CMatrix::identity(d), BasisKind::General)
    }

    fn assemble(d: usize, kind: BasisKind, exact: Option<CMatrix>, numeric: CMatrix) -> Self {
        let values = (0..d * d).map(|k| numeric.get(k / d, k % d)).collect();
        TransitionMatrix { d, kind, exact, numeric, values }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn exact_view(&self) -> Option<&CMatrix> {
        self.exact.as_ref()
    }

    pub fn numeric_view(&self) -> &CMatrix {
        &self.numeric
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.d + j]
    }

    /// max |U U† - I| entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.numeric)
    }
}

fn unitarity_deviation(m: &CMatrix) -> f64 {
    let d = m.rows();
    let mut worst = 0.0f64;
    for i in 0..d {
        for k in 0..d {
            let s: Complex64 = (0..d).map(|j| m.get(i, j) * m.get(k, j).conj()).sum();
            let target = if i == k { Complex64::one() } else { Complex64::zero() };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

fn flatness_deviation(m: &CMatrix) -> f64 {
    let d = m.rows();
    let target = 1.0 / (d as f64).sqrt();
    (0..d * d).map(|k| (m.get(k / d, k % d).norm() - target).abs()).fold(0.0, f64::max)
}

/// Pure state given by its A-basis coefficients, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: usize,
    amps_a: Vec<Complex64>,
    /// Norm of the amplitudes as supplied, before normalization.
    norm: f64,
}

impl StateVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, KdError> {
        if amps.is_empty() {
            return Err(KdError::ZeroDimension);
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(KdError::ZeroVector);
        }
        let d = amps.len();
        let amps_a = amps.into_iter().map(|z| z / norm).collect();
        Ok(StateVector { d, amps_a, norm })
    }

    /// |a_i⟩.
    pub fn basis(d: usize, i: usize) -> Result<Self, KdError> {
        if i >= d {
            return Err(KdError::DimensionMismatch { expected: d, got: i + 1 });
        }
        let mut amps = vec![Complex64::zero(); d];
        amps[i] = Complex64::one();
        Self::from_amplitudes(amps)
    }

    /// |b_j⟩ expressed in the A basis: coefficients U_ij.
    pub fn b_basis(u: &TransitionMatrix, j: usize) -> Result<Self, KdError> {
        if j >= u.dim() {
            return Err(KdError::DimensionMismatch { expected: u.dim(), got: j + 1 });
        }
        Self::from_amplitudes((0..u.dim()).map(|i| u.entry(i, j)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps_a
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// ⟨b_j|ψ⟩ = Σ_i conj(U_ij)·⟨a_i|ψ⟩.
    pub fn b_amplitudes(&self, u: &TransitionMatrix) -> Result<Vec<Complex64>, KdError> {
        check_dims(self, u)?;
        let d = self.d;
        Ok((0..d).map(|j| (0..d).map(|i| u.entry(i, j).conj() * self.amps_a[i]).sum()).collect())
    }

    pub fn with_global_phase(&self, phase: Complex64) -> Self {
        let phase = phase / phase.norm();
        StateVector { d: self.d, amps_a: self.amps_a.iter().map(|z| z * phase).collect(), norm: self.norm }
    }

    /// Cyclic shift of the A coefficients: amplitude i moves to i + k.
    pub fn shifted(&self, k: usize) -> Self {
        let d = self.d;
        let mut amps = vec![Complex64::zero(); d];
        for (i, z) in self.amps_a.iter().enumerate() {
            amps[(i + k) % d] = *z;
        }
        StateVector { d, amps_a: amps, norm: self.norm }
    }

    pub fn to_json(&self) -> String {
        let file = StateFile { d: self.d, amps_a: self.amps_a.iter().map(|z| [z.re, z.im]).collect() };
        serde_json::to_string_pretty(&file).expect("state serializes")
    }

    /// Parses the state file format. Returns a warning when the stored
    /// amplitudes were not normalized.
    pub fn from_json(text: &str) -> Result<(Self, Option<String>), KdError> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| KdError::Parse(e.to_string()))?;
        if file.amps_a.len() != file.d {
            return Err(KdError::DimensionMismatch { expected: file.d, got: file.amps_a.len() });
        }
        let amps = file.amps_a.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let psi = Self::from_amplitudes(amps)?;
        let warning = ((psi.norm - 1.0).abs() > NORM_WARN_TOL)
            .then(|| format!("state norm {} deviates from 1; amplitudes were normalized", psi.norm));
        Ok((psi, warning))
    }
}

/// On-disk state format: `{"d": int, "amps_a": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub d: usize,
    pub amps_a: Vec<[f64; 2]>,
}

fn check_dims(psi: &StateVector, u: &TransitionMatrix) -> Result<(), KdError> {
    if psi.dim() != u.dim() {
        return Err(KdError::DimensionMismatch { expected: u.dim(), got: psi.dim() });
    }
    Ok(())
}

/// The d×d quasiprobability table.
#[derive(Debug, Clone, PartialEq)]
pub struct KDDist {
    d: usize,
    q: Vec<Complex64>,
}

impl KDDist {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.q[i * self.d + j]
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.q.iter().enumerate().map(move |(k, &z)| (k / self.d, k % self.d, z))
    }

    pub fn total(&self) -> Complex64 {
        self.q.iter().sum()
    }

    /// Σ_j q_ij for each i.
    pub fn row_marginals(&self) -> Vec<Complex64> {
        self.q.chunks(self.d).map(|row| row.iter().sum()).collect()
    }

    /// Σ_i q_ij for each j.
    pub fn col_marginals(&self) -> Vec<Complex64> {
        (0..self.d).map(|j| (0..self.d).map(|i| self.get(i, j)).sum()).collect()
    }
}

/// Q_ij = ⟨a_i|ψ⟩⟨ψ|b_j⟩⟨b_j|a_i⟩.
pub fn kd_distribution(psi: &StateVector, u: &TransitionMatrix) -> Result<KDDist, KdError> {
    let b = psi.b_amplitudes(u)?;
    let d = psi.dim();
    let q = (0..d * d)
        .map(|k| {
            let (i, j) = (k / d, k % d);
            psi.amps_a[i] * b[j].conj() * u.entry(i, j).conj()
        })
        .collect();
    Ok(KDDist { d, q })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub d: usize,
    pub s_set: Vec<usize>,
    pub t_set: Vec<usize>,
    pub n_a: usize,
    pub n_b: usize,
    pub epsilon: f64,
}

impl SupportProfile {
    pub fn product(&self) -> usize {
        self.n_a * self.n_b
    }
}

/// Indices whose modulus exceeds `eps` times the largest modulus.
pub fn relative_support(v: &[Complex64], eps: f64) -> Vec<usize> {
    let max = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let thr = eps * max;
    v.iter().enumerate().filter(|(_, z)| z.norm() > thr).map(|(i, _)| i).collect()
}

pub fn support_profile(psi: &StateVector, u: &TransitionMatrix, eps: f64) -> Result<SupportProfile, KdError> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(KdError::BadTolerance(eps));
    }
    let b = psi.b_amplitudes(u)?;
    if psi.amps().iter().all(|z| z.norm() == 0.0) {
        return Err(KdError::ZeroVector);
    }
    let s_set = relative_support(psi.amps(), eps);
    let t_set = relative_support(&b, eps);
    Ok(SupportProfile { d: psi.dim(), n_a: s_set.len(), n_b: t_set.len(), s_set, t_set, epsilon: eps })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Classical,
    Nonclassical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessCell {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classicality {
    pub verdict: Verdict,
    /// Cell maximizing max(|Im q|, -Re q); present iff nonclassical.
    pub witness: Option<WitnessCell>,
}

pub fn classify_distribution(q: &KDDist, eps: f64) -> Result<Classicality, KdError> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(KdError::BadTolerance(eps));
    }
    let violation = |z: Complex64| z.im.abs().max(-z.re);
    let worst = q.cells().filter(|&(_, _, z)| z.im.abs() > eps || z.re < -eps).fold(
        None::<(usize, usize, Complex64)>,
        |best, cell| match best {
            Some(b) if violation(b.2) >= violation(cell.2) => Some(b),
            _ => Some(cell),
        },
    );
    Ok(match worst {
        None => Classicality { verdict: Verdict::Classical, witness: None },
        Some((i, j, z)) => {
            Classicality { verdict: Verdict::Nonclassical, witness: Some(WitnessCell { i, j, re: z.re, im: z.im }) }
        }
    })
}

pub fn classify_state(psi: &StateVector, u: &TransitionMatrix, eps: f64) -> Result<Classicality, KdError> {
    classify_distribution(&kd_distribution(psi, u)?, eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportBound {
    Finite(f64),
    /// Some overlap ⟨a_i|b_j⟩ vanishes.
    Unbounded,
}

/// max_ij |U_ij|^{-2}, the lower bound on n_a·n_b.
pub fn support_uncertainty_bound(u: &TransitionMatrix) -> SupportBound {
    let d = u.dim();
    let min_mod = (0..d * d).map(|k| u.entry(k / d, k % d).norm()).fold(f64::INFINITY, f64::min);
    if min_mod == 0.0 {
        SupportBound::Unbounded
    } else {
        SupportBound::Finite(1.0 / (min_mod * min_mod))
    }
}

/// For the DFT pair a state is classical exactly when n_a·n_b = d.
pub fn predict_classicality_dft(profile: &SupportProfile) -> Result<Verdict, KdError> {
    let product = profile.product();
    match product.cmp(&profile.d) {
        std::cmp::Ordering::Less => Err(KdError::SupportViolation { product, d: profile.d }),
        std::cmp::Ordering::Equal => Ok(Verdict::Classical),
        std::cmp::Ordering::Greater => Ok(Verdict::Nonclassical),
    }
}

/// Sufficient nonclassicality test for unbiased pairs: a non-basis state
/// with more than half of either support occupied is nonclassical.
///
/// `false` means the criterion is silent, not that the state is classical.
pub fn half_support_criterion(profile: &SupportProfile, u: &TransitionMatrix) -> Result<bool, KdError> {
    if !u.kind().is_unbiased() {
        return Err(KdError::NotUnbiasedKind);
    }
    if profile.d != u.dim() {
        return Err(KdError::DimensionMismatch { expected: u.dim(), got: profile.d });
    }
    if profile.n_a <= 1 || profile.n_b <= 1 {
        return Err(KdError::BasisVector { n_a: profile.n_a, n_b: profile.n_b });
    }
    Ok(2 * profile.n_a > profile.d || 2 * profile.n_b > profile.d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn three_support_d4() -> StateVector {
        StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn dft_small_cases() {
        let u1 = TransitionMatrix::dft(1).unwrap();
        assert!((u1.entry(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        let u2 = TransitionMatrix::dft(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (i, j, v) in [(0, 0, s), (0, 1, s), (1, 0, s), (1, 1, -s)] {
            assert!((u2.entry(i, j) - c(v, 0.0)).norm() < 1e-15);
        }
        let u4 = TransitionMatrix::dft(4).unwrap();
        assert!((u4.entry(3, 3) - c(0.0, 0.5)).norm() < 1e-12);
        assert_eq!(TransitionMatrix::dft(0).unwrap_err(), KdError::ZeroDimension);
    }

    #[test]
    fn dft_is_unitary_symmetric_and_flat() {
        for d in 1..=12 {
            let u = TransitionMatrix::dft(d).unwrap();
            assert!(u.unitarity_deviation() < 1e-10);
            for i in 0..d {
                for j in 0..d {
                    assert!((u.entry(i, j) - u.entry(j, i)).norm() < 1e-15);
                    assert!((u.entry(i, j).norm() - 1.0 / (d as f64).sqrt()).abs() < 1e-12);
                    let exact = u.exact_view().unwrap().get(i, j) / (d as f64).sqrt();
                    assert!((exact - u.entry(i, j)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn from_numeric_rejects_non_unitary() {
        let m = CMatrix::numeric(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(TransitionMatrix::from_numeric(m, BasisKind::General), Err(KdError::NotUnitary(_))));
        assert!(matches!(
            TransitionMatrix::from_numeric(CMatrix::identity(3), BasisKind::GeneralMub),
            Err(KdError::NotUnbiased(_))
        ));
    }

    #[test]
    fn basis_state_distribution() {
        for d in [1, 3, 6] {
            let u = TransitionMatrix::dft(d).unwrap();
            let q = kd_distribution(&StateVector::basis(d, 0).unwrap(), &u).unwrap();
            for (i, j, z) in q.cells() {
                let want = if i == 0 { u.entry(0, j).norm_sqr() } else { 0.0 };
                assert!((z - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn column_basis_state_distribution() {
        let d = 5;
        let u = TransitionMatrix::dft(d).unwrap();
        let psi = StateVector::b_basis(&u, 0).unwrap();
        let q = kd_distribution(&psi, &u).unwrap();
        for (_, j, z) in q.cells() {
            let want = if j == 0 { 1.0 / d as f64 } else { 0.0 };
            assert!((z - c(want, 0.0)).norm() < 1e-12);
        }
        assert_eq!(classify_state(&psi, &u, 1e-10).unwrap().verdict, Verdict::Classical);
    }

    #[test]
    fn three_support_state_is_nonclassical() {
        let u = TransitionMatrix::dft(4).unwrap();
        let q = kd_distribution(&three_support_d4(), &u).unwrap();
        assert!(q.cells().any(|(_, _, z)| z.re < -1e-10 || z.im.abs() > 1e-10));
        let cls = classify_state(&three_support_d4(), &u, 1e-10).unwrap();
        assert_eq!(cls.verdict, Verdict::Nonclassical);
        let w = cls.witness.unwrap();
        // the witness is the worst cell
        let worst = q.cells().map(|(_, _, z)| z.im.abs().max(-z.re)).fold(f64::MIN, f64::max);
        assert!((w.im.abs().max(-w.re) - worst).abs() < 1e-15);
    }

    #[test]
    fn marginals_and_total() {
        let u = TransitionMatrix::dft(4).unwrap();
        let psi = three_support_d4();
        let q = kd_distribution(&psi, &u).unwrap();
        assert!((q.total() - c(1.0, 0.0)).norm() < 1e-9);
        let b = psi.b_amplitudes(&u).unwrap();
        for (i, m) in q.row_marginals().iter().enumerate() {
            assert!((m - c(psi.amps()[i].norm_sqr(), 0.0)).norm() < 1e-9);
        }
        for (j, m) in q.col_marginals().iter().enumerate() {
            assert!((m - c(b[j].norm_sqr(), 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let u = TransitionMatrix::dft(3).unwrap();
        let psi = StateVector::basis(4, 0).unwrap();
        assert_eq!(kd_distribution(&psi, &u).unwrap_err(), KdError::DimensionMismatch { expected: 3, got: 4 });
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(StateVector::from_amplitudes(vec![c(0.0, 0.0); 3]).unwrap_err(), KdError::ZeroVector);
    }

    #[test]
    fn supports_of_basis_and_comb_states() {
        let u = TransitionMatrix::dft(6).unwrap();
        let p = support_profile(&StateVector::basis(6, 3).unwrap(), &u, 1e-10).unwrap();
        assert_eq!((p.n_a, p.n_b), (1, 6));

        // geometric sum Σ_k ω_6^{-3jk}, k = 0, 1, vanishes unless j is even
        let comb = StateVector::from_amplitudes(vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let p = support_profile(&comb, &u, 1e-10).unwrap();
        assert_eq!((p.n_a, p.n_b), (2, 3));
        assert_eq!(p.t_set, vec![0, 2, 4]);
        assert_eq!(p.s_set, vec![0, 3]);
        let cls = classify_state(&comb, &u, 1e-10).unwrap();
        assert_eq!(cls.verdict, Verdict::Classical);
        assert_eq!(p.product(), 6);

        for d in [1, 4, 7] {
            let u = TransitionMatrix::dft(d).unwrap();
            let p = support_profile(&StateVector::b_basis(&u, 0).unwrap(), &u, 1e-10).unwrap();
            assert_eq!((p.n_a, p.n_b), (d, 1));
        }
    }

    #[test]
    fn negative_eps_rejected() {
        let u = TransitionMatrix::dft(2).unwrap();
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(matches!(support_profile(&psi, &u, -1.0), Err(KdError::BadTolerance(_))));
    }

    #[test]
    fn degenerate_dimension_one() {
        let u = TransitionMatrix::dft(1).unwrap();
        let psi = StateVector::basis(1, 0).unwrap();
        let p = support_profile(&psi, &u, 1e-10).unwrap();
        assert_eq!((p.n_a, p.n_b), (1, 1));
        assert_eq!(classify_state(&psi, &u, 1e-10).unwrap().verdict, Verdict::Classical);
        assert_eq!(predict_classicality_dft(&p).unwrap(), Verdict::Classical);
    }

    #[test]
    fn support_bounds() {
        match support_uncertainty_bound(&TransitionMatrix::dft(8).unwrap()) {
            SupportBound::Finite(b) => assert!((b - 8.0).abs() < 1e-9),
            SupportBound::Unbounded => panic!(),
        }
        // identity has zero off-diagonal overlaps
        assert_eq!(support_uncertainty_bound(&TransitionMatrix::identity(3).unwrap()), SupportBound::Unbounded);
        assert_eq!(support_uncertainty_bound(&TransitionMatrix::identity(1).unwrap()), SupportBound::Finite(1.0));
        // real rotation with |U_00| = 1/2
        let (a, b) = (0.5, (0.75f64).sqrt());
        let m = CMatrix::numeric(2, 2, vec![c(a, 0.0), c(b, 0.0), c(-b, 0.0), c(a, 0.0)]).unwrap();
        let u = TransitionMatrix::from_numeric(m, BasisKind::General).unwrap();
        match support_uncertainty_bound(&u) {
            SupportBound::Finite(v) => assert!(v >= 4.0 - 1e-12),
            SupportBound::Unbounded => panic!(),
        }
    }

    fn profile(d: usize, n_a: usize, n_b: usize) -> SupportProfile {
        SupportProfile { d, s_set: (0..n_a).collect(), t_set: (0..n_b).collect(), n_a, n_b, epsilon: 1e-10 }
    }

    #[test]
    fn hyperbola_prediction() {
        assert_eq!(predict_classicality_dft(&profile(7, 1, 7)).unwrap(), Verdict::Classical);
        assert_eq!(predict_classicality_dft(&profile(6, 2, 3)).unwrap(), Verdict::Classical);
        assert_eq!(predict_classicality_dft(&profile(6, 4, 3)).unwrap(), Verdict::Nonclassical);
        assert_eq!(
            predict_classicality_dft(&profile(6, 2, 2)).unwrap_err(),
            KdError::SupportViolation { product: 4, d: 6 }
        );
    }

    #[test]
    fn half_support_cases() {
        let u4 = TransitionMatrix::dft(4).unwrap();
        assert!(half_support_criterion(&profile(4, 3, 2), &u4).unwrap());
        let u6 = TransitionMatrix::dft(6).unwrap();
        assert!(!half_support_criterion(&profile(6, 3, 3), &u6).unwrap());
        let u5 = TransitionMatrix::dft(5).unwrap();
        assert!(half_support_criterion(&profile(5, 2, 3), &u5).unwrap());
        assert_eq!(
            half_support_criterion(&profile(5, 1, 5), &u5).unwrap_err(),
            KdError::BasisVector { n_a: 1, n_b: 5 }
        );
        let id = TransitionMatrix::identity(4).unwrap();
        assert_eq!(half_support_criterion(&profile(4, 3, 3), &id).unwrap_err(), KdError::NotUnbiasedKind);
    }

    #[test]
    fn state_json_round_trip_and_warning() {
        let (psi, warn) = StateVector::from_json(r#"{"d": 2, "amps_a": [[3.0, 0.0], [0.0, 4.0]]}"#).unwrap();
        assert!(warn.is_some());
        assert!((psi.amps()[1] - c(0.0, 0.8)).norm() < 1e-15);
        let (again, warn) = StateVector::from_json(&psi.to_json()).unwrap();
        assert!(warn.is_none());
        assert!((again.amps()[0] - psi.amps()[0]).norm() < 1e-15);
        assert!(matches!(StateVector::from_json("{\"d\": 2}"), Err(KdError::Parse(_))));
        assert!(matches!(
            StateVector::from_json(r#"{"d": 3, "amps_a": [[1.0, 0.0]]}"#),
            Err(KdError::DimensionMismatch { .. })
        ));
    }
}
