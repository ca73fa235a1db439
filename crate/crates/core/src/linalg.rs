//! Dense complex matrices with two rank engines.
//!
//! The exact engine runs division-free elimination over Z\[ω_d\] (rows are
//! scaled to integer residues first), so every pivot decision is an exact
//! zero test. The numeric engine counts singular values above a
//! norm-relative threshold.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{denominator_lcm, CycNum, CyclotomicRing, RingElem};

pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("exact entries must share one cyclotomic order")]
    MixedOrders,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Exact,
    Numeric,
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EngineKind::Exact => "exact",
            EngineKind::Numeric => "numeric",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Exact(Vec<CycNum>),
    Numeric(Vec<Complex64>),
}

/// Row-major dense matrix; the payload kind is uniform across entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl CMatrix {
    pub fn exact(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch { expected: rows * cols, got: entries.len() });
        }
        if let Some(first) = entries.first() {
            if entries.iter().any(|e| e.order() != first.order()) {
                return Err(LinalgError::MixedOrders);
            }
        }
        Ok(CMatrix { rows, cols, entries: Entries::Exact(entries) })
    }

    pub fn numeric(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(CMatrix { rows, cols, entries: Entries::Numeric(entries) })
    }

    pub fn from_fn_numeric(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c));
        CMatrix { rows, cols, entries: Entries::Numeric(entries.collect()) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn_numeric(n, n, |r, c| if r == c { Complex64::one() } else { Complex64::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn engine(&self) -> EngineKind {
        match self.entries {
            Entries::Exact(_) => EngineKind::Exact,
            Entries::Numeric(_) => EngineKind::Numeric,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// Entry value as a complex number (exact entries are evaluated).
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let k = r * self.cols + c;
        match &self.entries {
            Entries::Exact(v) => v[k].to_complex(),
            Entries::Numeric(v) => v[k],
        }
    }

    pub fn get_exact(&self, r: usize, c: usize) -> Option<&CycNum> {
        match &self.entries {
            Entries::Exact(v) => Some(&v[r * self.cols + c]),
            Entries::Numeric(_) => None,
        }
    }

    pub fn to_numeric(&self) -> CMatrix {
        match &self.entries {
            Entries::Numeric(_) => self.clone(),
            Entries::Exact(_) => Self::from_fn_numeric(self.rows, self.cols, |r, c| self.get(r, c)),
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }

    pub fn transpose(&self) -> CMatrix {
        let idx = |k: usize| (k % self.rows) * self.cols + k / self.rows;
        let n = self.rows * self.cols;
        let entries = match &self.entries {
            Entries::Exact(v) => Entries::Exact((0..n).map(|k| v[idx(k)].clone()).collect()),
            Entries::Numeric(v) => Entries::Numeric((0..n).map(|k| v[idx(k)]).collect()),
        };
        CMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Listed rows and columns, in the order given.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<CMatrix, LinalgError> {
        check_indices(row_idx, self.rows)?;
        check_indices(col_idx, self.cols)?;
        let pos = row_idx.iter().flat_map(|&r| col_idx.iter().map(move |&c| r * self.cols + c));
        let entries = match &self.entries {
            Entries::Exact(v) => Entries::Exact(pos.map(|k| v[k].clone()).collect()),
            Entries::Numeric(v) => Entries::Numeric(pos.map(|k| v[k]).collect()),
        };
        Ok(CMatrix { rows: row_idx.len(), cols: col_idx.len(), entries })
    }

    /// `self · v` on the numeric values.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }
}

fn check_indices(idx: &[usize], bound: usize) -> Result<(), LinalgError> {
    let mut seen = vec![false; bound];
    for &i in idx {
        if i >= bound {
            return Err(LinalgError::IndexOutOfRange { index: i, bound });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(LinalgError::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// Audit record of a rank computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub engine: EngineKind,
    /// (row, col) positions of the pivots in the input matrix.
    pub pivots: Vec<(usize, usize)>,
    /// Relative singular-value tolerance; 0 for the exact engine.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOptions {
    pub tol: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { tol: DEFAULT_RANK_TOL }
    }
}

pub fn rank(m: &CMatrix) -> RankCertificate {
    rank_with(m, &RankOptions::default())
}

/// Rank with the engine implied by the matrix payload.
pub fn rank_with(m: &CMatrix, opts: &RankOptions) -> RankCertificate {
    match &m.entries {
        Entries::Exact(v) => {
            let (rank, pivots) = match v.first() {
                None => (0, Vec::new()),
                Some(first) => {
                    let ring = CyclotomicRing::shared(first.order()).expect("order is positive");
                    let rows = exact_rows(&ring, v, m.rows, m.cols);
                    eliminate_exact(&ring, rows, m.cols)
                }
            };
            RankCertificate { rank, engine: EngineKind::Exact, pivots, tolerance: 0.0 }
        }
        Entries::Numeric(_) => {
            let dm = m.to_dmatrix();
            let rank = numeric_rank(&dm, opts.tol);
            let pivots = full_pivot_positions(&dm, rank);
            RankCertificate { rank, engine: EngineKind::Numeric, pivots, tolerance: opts.tol }
        }
    }
}

fn exact_rows(ring: &CyclotomicRing, v: &[CycNum], rows: usize, cols: usize) -> Vec<Vec<RingElem>> {
    (0..rows)
        .map(|r| {
            let row = &v[r * cols..(r + 1) * cols];
            let scale = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(&denominator_lcm(e)));
            row.iter().map(|e| ring.embed_scaled(e, &scale)).collect()
        })
        .collect()
}

/// Threshold below which singular values count as zero.
pub fn singular_threshold(sigma_max: f64, rows: usize, cols: usize, tol: f64) -> f64 {
    tol * sigma_max * rows.max(cols) as f64
}

/// Number of singular values strictly above the relative threshold.
pub fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    let thr = singular_threshold(sigma_max, m.nrows(), m.ncols(), tol);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Complete-pivoting Gaussian elimination, recording the first `count` pivots.
fn full_pivot_positions(m: &DMatrix<Complex64>, count: usize) -> Vec<(usize, usize)> {
    let mut a = m.clone();
    let mut row_of: Vec<usize> = (0..a.nrows()).collect();
    let mut col_of: Vec<usize> = (0..a.ncols()).collect();
    let mut out = Vec::with_capacity(count);
    for k in 0..count.min(a.nrows()).min(a.ncols()) {
        let mut best = (k, k, -1.0);
        for r in k..a.nrows() {
            for c in k..a.ncols() {
                let v = a[(r, c)].norm();
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        let (pr, pc, _) = best;
        a.swap_rows(k, pr);
        a.swap_columns(k, pc);
        row_of.swap(k, pr);
        col_of.swap(k, pc);
        out.push((row_of[k], col_of[k]));
        let p = a[(k, k)];
        if p.norm() == 0.0 {
            break;
        }
        for r in k + 1..a.nrows() {
            let f = a[(r, k)] / p;
            for c in k..a.ncols() {
                let t = a[(k, c)];
                a[(r, c)] -= f * t;
            }
        }
    }
    out
}

/// Division-free elimination over Z\[ω_d\]. Pivots are the first nonzero
/// entry in column order; each updated row is divided by the gcd of its
/// integer coefficients to keep entries small.
pub fn eliminate_exact(
    ring: &CyclotomicRing,
    mut rows: Vec<Vec<RingElem>>,
    ncols: usize,
) -> (usize, Vec<(usize, usize)>) {
    let nrows = rows.len();
    let mut origin: Vec<usize> = (0..nrows).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !ring.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, p);
        origin.swap(rank, p);
        pivots.push((origin[rank], c));
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if ring.is_zero(&row[c]) {
                continue;
            }
            let factor = std::mem::replace(&mut row[c], ring.zero());
            for c2 in c + 1..ncols {
                row[c2] = ring.cross(&pivot_row[c], &row[c2], &factor, &pivot_row[c2]);
            }
            remove_content(&mut row[c + 1..]);
        }
        rank += 1;
    }
    (rank, pivots)
}

fn remove_content(row: &mut [RingElem]) {
    let mut g = BigInt::zero();
    for e in row.iter() {
        for x in e {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    return;
                }
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for e in row.iter_mut() {
        for x in e.iter_mut() {
            if !x.is_zero() {
                *x = &*x / &g;
            }
        }
    }
    debug_assert!(!g.is_negative());
}

pub fn nullspace_basis(m: &CMatrix) -> Vec<Vec<Complex64>> {
    nullspace_basis_with(m, &RankOptions::default())
}

/// Orthonormal basis of the right nullspace, evaluated numerically.
pub fn nullspace_basis_with(m: &CMatrix, opts: &RankOptions) -> Vec<Vec<Complex64>> {
    let n = m.cols;
    if n == 0 {
        return Vec::new();
    }
    if m.rows == 0 {
        return (0..n).map(|k| unit_vector(n, k)).collect();
    }
    // Zero rows leave the nullspace unchanged and make the SVD return a full V.
    let padded = DMatrix::from_fn(m.rows.max(n), n, |r, c| if r < m.rows { m.get(r, c) } else { Complex64::zero() });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0f64, f64::max);
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let rank = if sigma_max == 0.0 {
        0
    } else {
        let thr = singular_threshold(sigma_max, m.rows, m.cols, opts.tol);
        sigma.iter().filter(|&&s| s > thr).count()
    };
    order[rank..].iter().map(|&k| (0..n).map(|c| v_t[(k, c)].conj()).collect()).collect()
}

fn unit_vector(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::zero(); n];
    v[k] = Complex64::one();
    v
}
