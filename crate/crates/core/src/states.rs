//! State families and basis-pair generators used for verification.
//!
//! All randomness flows through [`rng_from_seed`] (ChaCha8), so every sample
//! is reproducible from its seed.

use num_complex::Complex64;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::cyclotomic::root_of_unity;
use crate::kd::{relative_support, BasisKind, KdError, StateVector, TransitionMatrix};
use crate::linalg::{nullspace_basis, CMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("{p} does not divide {d}")]
    NotDivisor { p: usize, d: usize },
    #[error("shift {shift} out of range for dimension {d}")]
    ShiftOutOfRange { shift: usize, d: usize },
    #[error("index set contains {index}, outside 0..{d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("the constrained subspace is {{0}}")]
    EmptySubspace,
    #[error("dimension must be at least {min}, got {d}")]
    DimensionTooSmall { d: usize, min: usize },
    #[error(transparent)]
    Kd(#[from] KdError),
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Comb state parameters: support size `p` on the A side, offsets on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetSpec {
    pub d: usize,
    pub p: usize,
    pub a_shift: usize,
    pub b_shift: usize,
}

/// ⟨a_i|ψ⟩ = ω^{i·j₀}/√p on the residue class i ≡ i₀ (mod d/p), zero elsewhere.
///
/// Under the DFT pair this state has n_a = p, n_b = d/p and a nonnegative KD
/// table.
pub fn coset_classical_state(spec: CosetSpec) -> Result<StateVector, StateError> {
    let CosetSpec { d, p, a_shift, b_shift } = spec;
    if d == 0 || p == 0 || d % p != 0 {
        return Err(StateError::NotDivisor { p, d });
    }
    for shift in [a_shift, b_shift] {
        if shift >= d {
            return Err(StateError::ShiftOutOfRange { shift, d });
        }
    }
    let step = d / p;
    let scale = 1.0 / (p as f64).sqrt();
    let mut amps = vec![Complex64::zero(); d];
    for i in (0..d).filter(|i| i % step == a_shift % step) {
        amps[i] = root_of_unity(d, (i * b_shift) as i64) * scale;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

/// Precomputed basis of H(S,T), the states supported in S on the A side and
/// in T on the B side, in both coordinate systems.
#[derive(Debug, Clone)]
pub struct SubspaceSampler {
    d: usize,
    /// Basis vectors in A coordinates (length d each).
    a_basis: Vec<Vec<Complex64>>,
    /// Basis vectors in B coordinates (length d each, zero outside T).
    b_basis: Vec<Vec<Complex64>>,
}

impl SubspaceSampler {
    pub fn new(u: &TransitionMatrix, s_set: &[usize], t_set: &[usize]) -> Result<Self, StateError> {
        let d = u.dim();
        for &index in s_set.iter().chain(t_set) {
            if index >= d {
                return Err(StateError::IndexOutOfRange { index, d });
            }
        }
        let mut in_s = vec![false; d];
        s_set.iter().for_each(|&i| in_s[i] = true);
        let rows: Vec<usize> = (0..d).filter(|&i| !in_s[i]).collect();
        let mut cols = t_set.to_vec();
        cols.sort_unstable();
        cols.dedup();
        let constraint = u.numeric_view().submatrix(&rows, &cols).map_err(KdError::from)?;
        let null = nullspace_basis(&constraint);
        if null.is_empty() {
            return Err(StateError::EmptySubspace);
        }
        let mut a_basis = Vec::with_capacity(null.len());
        let mut b_basis = Vec::with_capacity(null.len());
        for beta in null {
            let mut b = vec![Complex64::zero(); d];
            for (&j, z) in cols.iter().zip(&beta) {
                b[j] = *z;
            }
            let a = (0..d).map(|i| cols.iter().zip(&beta).map(|(&j, z)| u.entry(i, j) * z).sum()).collect();
            a_basis.push(a);
            b_basis.push(b);
        }
        Ok(SubspaceSampler { d, a_basis, b_basis })
    }

    pub fn dim(&self) -> usize {
        self.a_basis.len()
    }

    /// Unnormalized random element as (A coordinates, B coordinates).
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut a = vec![Complex64::zero(); self.d];
        let mut b = vec![Complex64::zero(); self.d];
        for (va, vb) in self.a_basis.iter().zip(&self.b_basis) {
            let g = complex_gaussian(rng);
            for k in 0..self.d {
                a[k] += g * va[k];
                b[k] += g * vb[k];
            }
        }
        (a, b)
    }

    /// Supports (n_a, n_b) of a random element under the relative threshold.
    pub fn sample_profile<R: Rng + ?Sized>(&self, rng: &mut R, eps: f64) -> (usize, usize) {
        let (a, b) = self.sample_raw(rng);
        (relative_support(&a, eps).len(), relative_support(&b, eps).len())
    }

    /// Tallies the realized profiles of `n` random elements into
    /// `counts[(n_a - 1) * d + (n_b - 1)]`.
    pub fn tally_profiles<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, eps: f64, counts: &mut [u64]) {
        let d = self.d;
        let mut a = vec![Complex64::zero(); d];
        let mut b = vec![Complex64::zero(); d];
        let support = |v: &[Complex64]| {
            let max = v.iter().map(|z| z.norm_sqr()).fold(0.0f64, f64::max);
            let thr = eps * eps * max;
            v.iter().filter(|z| z.norm_sqr() > thr).count()
        };
        for _ in 0..n {
            a.fill(Complex64::zero());
            b.fill(Complex64::zero());
            for (va, vb) in self.a_basis.iter().zip(&self.b_basis) {
                let g = complex_gaussian(rng);
                for k in 0..d {
                    a[k] += g * va[k];
                    b[k] += g * vb[k];
                }
            }
            let (na, nb) = (support(&a), support(&b));
            if na > 0 && nb > 0 {
                counts[(na - 1) * d + (nb - 1)] += 1;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StateVector, StateError> {
        Ok(StateVector::from_amplitudes(self.sample_raw(rng).0)?)
    }
}

/// Gaussian random unit vector in H(S,T).
pub fn random_state_in_subspace(
    u: &TransitionMatrix,
    s_set: &[usize],
    t_set: &[usize],
    seed: u64,
) -> Result<StateVector, StateError> {
    SubspaceSampler::new(u, s_set, t_set)?.sample(&mut rng_from_seed(seed))
}

/// D₁·F·D₂·P with diagonal unit phases D₁, D₂ and column permutation P.
pub fn mub_pair_from(
    d: usize,
    row_phases: &[f64],
    col_phases: &[f64],
    perm: &[usize],
) -> Result<TransitionMatrix, StateError> {
    if row_phases.len() != d || col_phases.len() != d || perm.len() != d {
        return Err(KdError::DimensionMismatch { expected: d, got: perm.len() }.into());
    }
    let f = TransitionMatrix::dft(d)?;
    // column j of F·D₂·P is column perm[j] of F·D₂
    let m = CMatrix::from_fn_numeric(d, d, |i, j| {
        let k = perm[j];
        Complex64::from_polar(1.0, row_phases[i]) * f.entry(i, k) * Complex64::from_polar(1.0, col_phases[k])
    });
    Ok(TransitionMatrix::from_numeric(m, BasisKind::GeneralMub)?)
}

pub fn random_mub_pair(d: usize, seed: u64) -> Result<TransitionMatrix, StateError> {
    if d < 2 {
        return Err(StateError::DimensionTooSmall { d, min: 2 });
    }
    let mut rng = rng_from_seed(seed);
    let tau = std::f64::consts::TAU;
    let row: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * tau).collect();
    let col: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() * tau).collect();
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(&mut rng);
    mub_pair_from(d, &row, &col, &perm)
}
