//! Support uncertainty diagrams by rank-condition search.
//!
//! A lattice point (n_a, n_b) is achievable iff some choice of d − n_a rows
//! (the A indices a state must avoid) and n_b columns (its B support) of the
//! transition matrix gives a submatrix M with
//!
//! 1. rank(M) < n_b,
//! 2. rank rising by one whenever any further row is appended,
//! 3. rank unchanged whenever any one column is dropped.
//!
//! The null space of such an M is H(S, T) and a generic element of it has
//! exactly the supports S and T. A point is a `Hole` only after every
//! row/column choice has been rejected.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{denominator_lcm, divisors, CyclotomicRing, RingElem};
use crate::kd::{support_profile, BasisKind, StateVector, TransitionMatrix, DEFAULT_SUPPORT_EPS};
use crate::linalg::{eliminate_exact, numeric_rank, rank_with, EngineKind, RankCertificate, RankOptions};
use crate::states::{rng_from_seed, StateError, SubspaceSampler};

pub const DEFAULT_EXACT_LIMIT: usize = 9;
pub const DEFAULT_NUMERIC_LIMIT: usize = 12;
const WITNESS_RETRIES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("point ({n_a}, {n_b}) is outside the lattice 1..={d}")]
    OutOfLattice { n_a: usize, n_b: usize, d: usize },
    #[error("index {index} out of range for dimension {d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("column selection must be nonempty")]
    EmptyColumns,
    #[error("exact engine needs an exact transition matrix (DFT)")]
    NoExactView,
    #[error("dimension {d} exceeds the configured limit {limit} for the {engine} engine")]
    TooLarge { d: usize, limit: usize, engine: Engine },
    #[error("point ({n_a}, {n_b}) has status {status:?}, not present")]
    NotPresent { n_a: usize, n_b: usize, status: PointStatus },
    #[error("stored certificate for ({n_a}, {n_b}) does not re-validate")]
    InvalidCertificate { n_a: usize, n_b: usize },
    #[error("diagram has unknown points; the answer is indeterminate")]
    Indeterminate,
    #[error("witness sampling failed {0} times for a certified point")]
    WitnessRetriesExhausted(usize),
    #[error("malformed diagram file: {0}")]
    Parse(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Rank engine used by the search. `Both` runs exact and numeric side by
/// side, trusts the exact answer, and counts disagreements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Numeric,
    Both,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Numeric => "numeric",
            Engine::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Engine> {
        match s {
            "exact" => Some(Engine::Exact),
            "numeric" => Some(Engine::Numeric),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }

    fn certificate_engine(self) -> EngineKind {
        match self {
            Engine::Numeric => EngineKind::Numeric,
            Engine::Exact | Engine::Both => EngineKind::Exact,
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchMode {
    pub engine: Engine,
    /// Restrict to row and column sets containing index 0 (DFT only).
    pub sym_reduce: bool,
    pub rank_tol: f64,
    /// Rank evaluations allowed per point before giving up with `Unknown`.
    pub max_rank_calls: Option<u64>,
    pub exact_limit: usize,
    pub numeric_limit: usize,
}

impl SearchMode {
    pub fn new(engine: Engine) -> Self {
        SearchMode {
            engine,
            sym_reduce: false,
            rank_tol: crate::linalg::DEFAULT_RANK_TOL,
            max_rank_calls: None,
            exact_limit: DEFAULT_EXACT_LIMIT,
            numeric_limit: DEFAULT_NUMERIC_LIMIT,
        }
    }

    /// Exact up to the exact limit, numeric above.
    pub fn default_for(d: usize) -> Self {
        Self::new(if d <= DEFAULT_EXACT_LIMIT { Engine::Exact } else { Engine::Numeric })
    }

    pub fn with_sym_reduce(mut self, on: bool) -> Self {
        self.sym_reduce = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Present,
    Hole,
    Unknown,
}

/// Ranks behind one evaluation of the three conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub base: RankCertificate,
    /// (appended row, rank after appending).
    pub row_ranks: Vec<(usize, usize)>,
    /// (dropped column, rank after dropping).
    pub col_ranks: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub check: ConditionCheck,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramPoint {
    pub n_a: usize,
    pub n_b: usize,
    pub status: PointStatus,
    pub certificate: Option<Certificate>,
    /// True when every candidate was examined (required for `Hole`).
    pub exhausted: bool,
    pub rank_calls: u64,
}

impl DiagramPoint {
    pub fn on_hyperbola(&self, d: usize) -> bool {
        self.n_a * self.n_b == d
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnumerationStats {
    pub rank_calls: u64,
    /// Exact/numeric rank mismatches (engine `Both` only).
    pub disagreements: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyDiagram {
    pub d: usize,
    pub engine: Engine,
    pub sym_reduce: bool,
    /// Ordered by n_a, then n_b.
    pub points: Vec<DiagramPoint>,
    pub stats: EnumerationStats,
}

impl UncertaintyDiagram {
    pub fn point(&self, n_a: usize, n_b: usize) -> Option<&DiagramPoint> {
        if n_a == 0 || n_b == 0 || n_a > self.d || n_b > self.d {
            return None;
        }
        self.points.get((n_a - 1) * self.d + (n_b - 1))
    }

    pub fn status(&self, n_a: usize, n_b: usize) -> Option<PointStatus> {
        self.point(n_a, n_b).map(|p| p.status)
    }

    pub fn with_status(&self, status: PointStatus) -> BTreeSet<(usize, usize)> {
        self.points.iter().filter(|p| p.status == status).map(|p| (p.n_a, p.n_b)).collect()
    }

    pub fn present(&self) -> BTreeSet<(usize, usize)> {
        self.with_status(PointStatus::Present)
    }

    pub fn holes(&self) -> BTreeSet<(usize, usize)> {
        self.with_status(PointStatus::Hole)
    }

    pub fn has_unknown(&self) -> bool {
        self.points.iter().any(|p| p.status == PointStatus::Unknown)
    }

    /// Points whose mirror image has a different status.
    pub fn asymmetries(&self) -> Vec<(usize, usize)> {
        self.points.iter().filter(|p| self.status(p.n_b, p.n_a) != Some(p.status)).map(|p| (p.n_a, p.n_b)).collect()
    }

    pub fn to_record(&self) -> DiagramRecord {
        DiagramRecord {
            d: self.d,
            engine: self.engine.as_str().to_string(),
            points: self
                .points
                .iter()
                .map(|p| PointRecord {
                    na: p.n_a,
                    nb: p.n_b,
                    status: p.status,
                    rows: p.certificate.as_ref().map(|c| c.rows.clone()).unwrap_or_default(),
                    cols: p.certificate.as_ref().map(|c| c.cols.clone()).unwrap_or_default(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_record().to_json()
    }

    /// Rebuilds a diagram from its file form, re-running the rank conditions
    /// on every stored certificate.
    pub fn from_record(
        record: &DiagramRecord,
        u: &TransitionMatrix,
        sym_reduce: bool,
        rank_tol: f64,
    ) -> Result<Self, DiagramError> {
        let d = record.d;
        if d != u.dim() {
            return Err(DiagramError::Parse(format!("diagram has d = {d}, matrix has d = {}", u.dim())));
        }
        let engine = Engine::parse(&record.engine)
            .ok_or_else(|| DiagramError::Parse(format!("unknown engine {:?}", record.engine)))?;
        if record.points.len() != d * d {
            return Err(DiagramError::Parse(format!("expected {} points, found {}", d * d, record.points.len())));
        }
        let mut points = Vec::with_capacity(d * d);
        for (k, p) in record.points.iter().enumerate() {
            if (p.na, p.nb) != (k / d + 1, k % d + 1) {
                return Err(DiagramError::Parse(format!("point {k} is ({}, {}), out of order", p.na, p.nb)));
            }
            let certificate = match p.status {
                PointStatus::Present => {
                    let check = check_submatrix_conditions(u, &p.rows, &p.cols, engine.certificate_engine(), rank_tol)?;
                    let expect_rows = d - p.na;
                    if !check.holds || p.rows.len() != expect_rows || p.cols.len() != p.nb {
                        return Err(DiagramError::InvalidCertificate { n_a: p.na, n_b: p.nb });
                    }
                    Some(Certificate { rows: p.rows.clone(), cols: p.cols.clone(), check })
                }
                _ => None,
            };
            points.push(DiagramPoint {
                n_a: p.na,
                n_b: p.nb,
                status: p.status,
                certificate,
                exhausted: p.status == PointStatus::Hole,
                rank_calls: 0,
            });
        }
        Ok(UncertaintyDiagram { d, engine, sym_reduce, points, stats: EnumerationStats::default() })
    }

    /// Structural equality of the persisted content.
    pub fn same_content(&self, other: &UncertaintyDiagram) -> bool {
        self.to_record() == other.to_record()
    }
}

/// File form of a diagram; field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub d: usize,
    pub engine: String,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub na: usize,
    pub nb: usize,
    pub status: PointStatus,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl DiagramRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("na,nb,status\n");
        for p in &self.points {
            let status = match p.status {
                PointStatus::Present => "present",
                PointStatus::Hole => "hole",
                PointStatus::Unknown => "unknown",
            };
            out.push_str(&format!("{},{},{}\n", p.na, p.nb, status));
        }
        out
    }
}

/// Integer residues of the exact transition matrix, each row scaled to clear
/// denominators (row scaling does not change any submatrix rank).
struct ExactTable {
    ring: Arc<CyclotomicRing>,
    d: usize,
    cells: Vec<RingElem>,
}

impl ExactTable {
    fn new(u: &TransitionMatrix) -> Option<Self> {
        let m = u.exact_view()?;
        let d = u.dim();
        let ring = CyclotomicRing::shared(m.get_exact(0, 0)?.order()).ok()?;
        let mut cells = Vec::with_capacity(d * d);
        for i in 0..d {
            let row: Vec<_> = (0..d).map(|j| m.get_exact(i, j).unwrap()).collect();
            let scale = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(&denominator_lcm(e)));
            cells.extend(row.iter().map(|e| ring.embed_scaled(e, &scale)));
        }
        Some(ExactTable { ring, d, cells })
    }

    fn rank(&self, rows: &[usize], cols: &[usize]) -> usize {
        let m = rows.iter().map(|&i| cols.iter().map(|&j| self.cells[i * self.d + j].clone()).collect()).collect();
        eliminate_exact(&self.ring, m, cols.len()).0
    }
}

/// Submatrix rank evaluator shared by the search workers.
struct RankOracle<'a> {
    u: &'a TransitionMatrix,
    engine: Engine,
    tol: f64,
    exact: Option<ExactTable>,
    calls: AtomicU64,
    disagreements: AtomicU64,
}

impl<'a> RankOracle<'a> {
    fn new(u: &'a TransitionMatrix, engine: Engine, tol: f64) -> Result<Self, DiagramError> {
        let exact = match engine {
            Engine::Numeric => None,
            Engine::Exact | Engine::Both => Some(ExactTable::new(u).ok_or(DiagramError::NoExactView)?),
        };
        Ok(RankOracle { u, engine, tol, exact, calls: AtomicU64::new(0), disagreements: AtomicU64::new(0) })
    }

    fn numeric(&self, rows: &[usize], cols: &[usize]) -> usize {
        let m = DMatrix::<Complex64>::from_fn(rows.len(), cols.len(), |r, c| self.u.entry(rows[r], cols[c]));
        numeric_rank(&m, self.tol)
    }

    fn rank(&self, rows: &[usize], cols: &[usize]) -> usize {
        self.calls.fetch_add(1, Ordering::Relaxed);
        if rows.is_empty() || cols.is_empty() {
            return 0;
        }
        match self.engine {
            Engine::Numeric => self.numeric(rows, cols),
            Engine::Exact => self.exact.as_ref().unwrap().rank(rows, cols),
            Engine::Both => {
                let e = self.exact.as_ref().unwrap().rank(rows, cols);
                if self.numeric(rows, cols) != e {
                    self.disagreements.fetch_add(1, Ordering::Relaxed);
                }
                e
            }
        }
    }

    /// Early-exit evaluation of the three conditions.
    fn holds(&self, rows: &[usize], cols: &[usize], extended: &mut Vec<usize>, reduced: &mut Vec<usize>) -> bool {
        let r = self.rank(rows, cols);
        if r >= cols.len() {
            return false;
        }
        let d = self.u.dim();
        let mut in_rows = [false; 64];
        rows.iter().for_each(|&i| in_rows[i] = true);
        extended.clear();
        extended.extend_from_slice(rows);
        extended.push(0);
        let last = rows.len();
        for k in (0..d).filter(|&k| !in_rows[k]) {
            extended[last] = k;
            if self.rank(extended, cols) != r + 1 {
                return false;
            }
        }
        for drop in 0..cols.len() {
            reduced.clear();
            reduced.extend(cols.iter().enumerate().filter(|&(c, _)| c != drop).map(|(_, &j)| j));
            if self.rank(rows, reduced) != r {
                return false;
            }
        }
        true
    }
}

fn validate_indices(idx: &[usize], d: usize) -> Result<(), DiagramError> {
    let mut seen = vec![false; d];
    for &i in idx {
        if i >= d {
            return Err(DiagramError::IndexOutOfRange { index: i, d });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(DiagramError::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// Full evaluation of the three rank conditions for a row/column choice,
/// with every intermediate rank recorded.
///
/// An empty row selection is accepted: it is the n_a = d case, where the
/// conditions reduce to every row of U being nonzero somewhere on `cols`.
pub fn check_submatrix_conditions(
    u: &TransitionMatrix,
    rows: &[usize],
    cols: &[usize],
    engine: EngineKind,
    rank_tol: f64,
) -> Result<ConditionCheck, DiagramError> {
    let d = u.dim();
    validate_indices(rows, d)?;
    validate_indices(cols, d)?;
    if cols.is_empty() {
        return Err(DiagramError::EmptyColumns);
    }
    let view = match engine {
        EngineKind::Exact => u.exact_view().ok_or(DiagramError::NoExactView)?,
        EngineKind::Numeric => u.numeric_view(),
    };
    let opts = RankOptions { tol: rank_tol };
    let rank_of = |r: &[usize], c: &[usize]| -> RankCertificate {
        rank_with(&view.submatrix(r, c).expect("indices validated"), &opts)
    };
    let base = rank_of(rows, cols);
    let r = base.rank;
    let row_ranks: Vec<(usize, usize)> = (0..d)
        .filter(|k| !rows.contains(k))
        .map(|k| {
            let mut ext = rows.to_vec();
            ext.push(k);
            (k, rank_of(&ext, cols).rank)
        })
        .collect();
    let col_ranks: Vec<(usize, usize)> = cols
        .iter()
        .map(|&l| {
            let red: Vec<usize> = cols.iter().copied().filter(|&j| j != l).collect();
            (l, rank_of(rows, &red).rank)
        })
        .collect();
    let holds =
        r < cols.len() && row_ranks.iter().all(|&(_, rk)| rk == r + 1) && col_ranks.iter().all(|&(_, rk)| rk == r);
    Ok(ConditionCheck { holds, base, row_ranks, col_ranks })
}

fn check_limit(d: usize, mode: &SearchMode) -> Result<(), DiagramError> {
    let limit = match mode.engine {
        Engine::Numeric => mode.numeric_limit,
        Engine::Exact | Engine::Both => mode.exact_limit,
    };
    if d > limit {
        return Err(DiagramError::TooLarge { d, limit, engine: mode.engine });
    }
    Ok(())
}

/// Lexicographic k-subsets of 0..n, optionally only those containing 0.
fn subsets(n: usize, k: usize, containing_zero: bool) -> Vec<Vec<usize>> {
    if containing_zero && k > 0 {
        (1..n)
            .combinations(k - 1)
            .map(|mut c| {
                c.insert(0, 0);
                c
            })
            .collect()
    } else {
        (0..n).combinations(k).collect()
    }
}

enum Outcome {
    Found(Vec<usize>, Vec<usize>),
    Exhausted,
    Aborted,
}

fn search_point(oracle: &RankOracle, n_a: usize, n_b: usize, mode: &SearchMode) -> Outcome {
    let d = oracle.u.dim();
    let reduce = mode.sym_reduce && oracle.u.kind() == BasisKind::Dft;
    let col_sets = subsets(d, n_b, reduce);
    let row_sets = subsets(d, d - n_a, reduce);
    let start = oracle.calls.load(Ordering::Relaxed);
    let aborted = AtomicBool::new(false);
    let over_budget = || match mode.max_rank_calls {
        Some(max) => oracle.calls.load(Ordering::Relaxed) - start > max,
        None => false,
    };
    // Column sets outer, row sets inner; the first hit in this order wins
    // regardless of how the work is scheduled.
    let found = col_sets.par_iter().find_map_first(|cols| {
        let mut extended = Vec::with_capacity(d);
        let mut reduced = Vec::with_capacity(n_b);
        for rows in &row_sets {
            if aborted.load(Ordering::Relaxed) {
                return None;
            }
            if over_budget() {
                aborted.store(true, Ordering::Relaxed);
                return None;
            }
            if oracle.holds(rows, cols, &mut extended, &mut reduced) {
                return Some((rows.clone(), cols.clone()));
            }
        }
        None
    });
    match found {
        Some((rows, cols)) => Outcome::Found(rows, cols),
        None if aborted.load(Ordering::Relaxed) => Outcome::Aborted,
        None => Outcome::Exhausted,
    }
}

fn check_lattice(d: usize, n_a: usize, n_b: usize) -> Result<(), DiagramError> {
    if n_a == 0 || n_b == 0 || n_a > d || n_b > d {
        return Err(DiagramError::OutOfLattice { n_a, n_b, d });
    }
    Ok(())
}

fn resolve_point(
    u: &TransitionMatrix,
    oracle: &RankOracle,
    n_a: usize,
    n_b: usize,
    mode: &SearchMode,
) -> Result<DiagramPoint, DiagramError> {
    let before = oracle.calls.load(Ordering::Relaxed);
    let outcome = search_point(oracle, n_a, n_b, mode);
    let rank_calls = oracle.calls.load(Ordering::Relaxed) - before;
    let (status, certificate, exhausted) = match outcome {
        Outcome::Found(rows, cols) => {
            let check = check_submatrix_conditions(u, &rows, &cols, mode.engine.certificate_engine(), mode.rank_tol)?;
            debug_assert!(check.holds);
            (PointStatus::Present, Some(Certificate { rows, cols, check }), false)
        }
        Outcome::Exhausted => (PointStatus::Hole, None, true),
        Outcome::Aborted => (PointStatus::Unknown, None, false),
    };
    Ok(DiagramPoint { n_a, n_b, status, certificate, exhausted, rank_calls })
}

/// Decides one lattice point. Running out of budget yields `Unknown`, never `Hole`.
pub fn point_exists(
    u: &TransitionMatrix,
    n_a: usize,
    n_b: usize,
    mode: &SearchMode,
) -> Result<DiagramPoint, DiagramError> {
    let d = u.dim();
    check_lattice(d, n_a, n_b)?;
    let oracle = RankOracle::new(u, mode.engine, mode.rank_tol)?;
    resolve_point(u, &oracle, n_a, n_b, mode)
}

/// Every lattice point for the pair, in (n_a, n_b) order.
pub fn enumerate_diagram(u: &TransitionMatrix, mode: &SearchMode) -> Result<UncertaintyDiagram, DiagramError> {
    let d = u.dim();
    check_limit(d, mode)?;
    let started = Instant::now();
    let oracle = RankOracle::new(u, mode.engine, mode.rank_tol)?;
    let mut points = Vec::with_capacity(d * d);
    for n_a in 1..=d {
        for n_b in 1..=d {
            points.push(resolve_point(u, &oracle, n_a, n_b, mode)?);
        }
    }
    let stats = EnumerationStats {
        rank_calls: oracle.calls.load(Ordering::Relaxed),
        disagreements: oracle.disagreements.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
    };
    Ok(UncertaintyDiagram { d, engine: mode.engine, sym_reduce: mode.sym_reduce, points, stats })
}

/// Whether the diagram is exactly the half-plane n_a + n_b ≥ d + 1.
pub fn is_completely_incompatible(diagram: &UncertaintyDiagram) -> Result<bool, DiagramError> {
    if diagram.has_unknown() {
        return Err(DiagramError::Indeterminate);
    }
    let d = diagram.d;
    Ok(diagram.points.iter().all(|p| (p.status == PointStatus::Present) == (p.n_a + p.n_b > d)))
}

/// Random state realizing a present point, drawn from the null space of its
/// certified submatrix.
pub fn witness_state(
    u: &TransitionMatrix,
    point: &DiagramPoint,
    seed: u64,
    eps: f64,
) -> Result<StateVector, DiagramError> {
    let not_present = || DiagramError::NotPresent { n_a: point.n_a, n_b: point.n_b, status: point.status };
    if point.status != PointStatus::Present {
        return Err(not_present());
    }
    let cert = point.certificate.as_ref().ok_or_else(not_present)?;
    let d = u.dim();
    let s_set: Vec<usize> = (0..d).filter(|i| !cert.rows.contains(i)).collect();
    let sampler = SubspaceSampler::new(u, &s_set, &cert.cols)?;
    let mut rng = rng_from_seed(seed);
    for _ in 0..WITNESS_RETRIES {
        let psi = sampler.sample(&mut rng)?;
        let p = support_profile(&psi, u, eps).map_err(StateError::from)?;
        if (p.n_a, p.n_b) == (point.n_a, point.n_b) {
            return Ok(psi);
        }
    }
    Err(DiagramError::WitnessRetriesExhausted(WITNESS_RETRIES))
}

pub fn witness_state_default(
    u: &TransitionMatrix,
    point: &DiagramPoint,
    seed: u64,
) -> Result<StateVector, DiagramError> {
    witness_state(u, point, seed, DEFAULT_SUPPORT_EPS)
}

/// Profiles realized by random elements of H(S, T) over every pair of
/// nonempty index sets, `samples` draws per pair. Independent of the rank
/// conditions, so it serves as an oracle for small d.
pub fn sampling_diagram(
    u: &TransitionMatrix,
    samples: usize,
    seed: u64,
    eps: f64,
) -> Result<BTreeSet<(usize, usize)>, DiagramError> {
    let d = u.dim();
    let full = 1u64 << d;
    let members = |mask: u64| -> Vec<usize> { (0..d).filter(|&i| mask & (1 << i) != 0).collect() };
    let counts = (1..full)
        .into_par_iter()
        .map(|smask| -> Result<Vec<u64>, DiagramError> {
            let mut counts = vec![0u64; d * d];
            let s_set = members(smask);
            for tmask in 1..full {
                let sampler = match SubspaceSampler::new(u, &s_set, &members(tmask)) {
                    Ok(s) => s,
                    Err(StateError::EmptySubspace) => continue,
                    Err(e) => return Err(e.into()),
                };
                let mut rng = rng_from_seed(seed ^ (smask << 32 | tmask));
                sampler.tally_profiles(&mut rng, samples, eps, &mut counts);
            }
            Ok(counts)
        })
        .try_reduce(
            || vec![0u64; d * d],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                Ok(x)
            },
        )?;
    Ok(counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, _)| (k / d + 1, k % d + 1)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMismatch {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub exact: usize,
    pub numeric: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineAudit {
    pub compared: u64,
    pub mismatches: Vec<RankMismatch>,
}

/// Exact against numeric rank on every nonempty submatrix of `u`.
///
/// Any rank the diagram search can ask for is one of these, so a clean audit
/// means both engines produce the same diagram.
pub fn audit_engines(u: &TransitionMatrix, rank_tol: f64) -> Result<EngineAudit, DiagramError> {
    let d = u.dim();
    let oracle = RankOracle::new(u, Engine::Both, rank_tol)?;
    let members = |mask: u32| -> Vec<usize> { (0..d).filter(|&i| mask & (1 << i) != 0).collect() };
    let full = 1u32 << d;
    let mismatches: Vec<RankMismatch> = (1..full)
        .into_par_iter()
        .flat_map_iter(|rmask| {
            let rows = members(rmask);
            let oracle = &oracle;
            (1..full).filter_map(move |cmask| {
                let cols = members(cmask);
                let exact = oracle.exact.as_ref().unwrap().rank(&rows, &cols);
                let numeric = oracle.numeric(&rows, &cols);
                (exact != numeric).then(|| RankMismatch { rows: rows.clone(), cols, exact, numeric })
            })
        })
        .collect();
    let compared = u64::from(full - 1) * u64::from(full - 1);
    Ok(EngineAudit { compared, mismatches })
}

/// A DFT submatrix on rows i₀, i₀+m, …, i₀+(t−1)m and columns pairwise
/// distinct modulo d/m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionInstance {
    pub d: usize,
    pub step: usize,
    pub start: usize,
    pub len: usize,
    pub cols: Vec<usize>,
    pub rank: usize,
}

impl ProgressionInstance {
    pub fn rows(&self) -> Vec<usize> {
        (0..self.len).map(|k| (self.start + k * self.step) % self.d).collect()
    }

    pub fn expected_rank(&self) -> usize {
        self.len.min(self.cols.len())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProgressionReport {
    pub instances: usize,
    pub failures: Vec<ProgressionInstance>,
}

/// Column sets of 0..d whose members are pairwise distinct modulo `q`.
fn distinct_residue_sets(d: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    // one slot per residue class: absent, or one of its d/q members
    let reps = d / q;
    let total = (reps + 1).pow(q as u32);
    for code in 0..total {
        let mut c = code;
        let mut cols = Vec::new();
        for r in 0..q {
            let pick = c % (reps + 1);
            c /= reps + 1;
            if pick > 0 {
                cols.push(r + (pick - 1) * q);
            }
        }
        if !cols.is_empty() {
            cols.sort_unstable();
            out.push(cols);
        }
    }
    out.sort();
    out
}

/// Exact rank of every progression submatrix of the d-dimensional DFT.
///
/// Starting offsets run over 0..step; every other offset is one of these
/// shifted by a multiple of the step, which leaves the row set unchanged.
pub fn check_progression_ranks(d: usize) -> Result<ProgressionReport, DiagramError> {
    let u = TransitionMatrix::dft(d).map_err(StateError::from)?;
    let table = ExactTable::new(&u).ok_or(DiagramError::NoExactView)?;
    let mut report = ProgressionReport::default();
    for step in divisors(d).into_iter().filter(|&m| m != d) {
        let q = d / step;
        let col_sets = distinct_residue_sets(d, q);
        let jobs: Vec<(usize, usize)> = (0..step).flat_map(|s| (1..=q).map(move |t| (s, t))).collect();
        let found: Vec<(usize, Vec<ProgressionInstance>)> = jobs
            .par_iter()
            .map(|&(start, len)| {
                let rows: Vec<usize> = (0..len).map(|k| (start + k * step) % d).collect();
                let bad = col_sets
                    .iter()
                    .filter_map(|cols| {
                        let rank = table.rank(&rows, cols);
                        (rank != len.min(cols.len())).then(|| ProgressionInstance {
                            d,
                            step,
                            start,
                            len,
                            cols: cols.clone(),
                            rank,
                        })
                    })
                    .collect();
                (col_sets.len(), bad)
            })
            .collect();
        for (n, bad) in found {
            report.instances += n;
            report.failures.extend(bad);
        }
    }
    Ok(report)
}

/// Closed-form claims about the DFT diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Divisor family of achievable points plus the n = d boundary (`T1`).
    DivisorFamily,
    /// Everything on or above n_a + n_b = d + 1 (`C1`).
    AboveLine,
    /// Exact row n_b = 2 (`T2`).
    RowTwo,
    /// Exact row n_b = 3 (`T3`).
    RowThree,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::DivisorFamily => "T1",
            Rule::AboveLine => "C1",
            Rule::RowTwo => "T2",
            Rule::RowThree => "T3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub rule: Rule,
    pub d: usize,
    /// Points claimed present.
    pub present: BTreeSet<(usize, usize)>,
    /// For row rules, the row whose complement is claimed to be holes.
    pub exact_row: Option<usize>,
    /// False when d is outside the hypothesis under which the rule is known.
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMismatch {
    pub n_a: usize,
    pub n_b: usize,
    pub predicted: PointStatus,
    pub actual: Option<PointStatus>,
}

impl Prediction {
    /// Points where the diagram disagrees with the claim.
    pub fn compare(&self, diagram: &UncertaintyDiagram) -> Vec<PredictionMismatch> {
        let mut out = Vec::new();
        let mut push = |n_a, n_b, predicted| {
            let actual = diagram.status(n_a, n_b);
            if actual != Some(predicted) {
                out.push(PredictionMismatch { n_a, n_b, predicted, actual });
            }
        };
        match self.exact_row {
            Some(row) => {
                for n_a in 1..=self.d {
                    let predicted =
                        if self.present.contains(&(n_a, row)) { PointStatus::Present } else { PointStatus::Hole };
                    push(n_a, row, predicted);
                }
            }
            None => {
                for &(n_a, n_b) in &self.present {
                    push(n_a, n_b, PointStatus::Present);
                }
            }
        }
        out
    }
}

fn symmetric_closure(points: BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    points.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
}

/// Points (d − n, n_b) for m | d, m | n, n ≠ 0 and n/m < n_b ≤ d/m, their
/// mirror images, and the boundary rows (d, i), (i, d).
pub fn predict_divisor_family(d: usize) -> Prediction {
    let mut pts = BTreeSet::new();
    for m in divisors(d) {
        for n in (m..d).step_by(m) {
            for n_b in (n / m + 1)..=(d / m) {
                pts.insert((d - n, n_b));
            }
        }
    }
    for i in 1..=d {
        pts.insert((d, i));
        pts.insert((i, d));
    }
    Prediction { rule: Rule::DivisorFamily, d, present: symmetric_closure(pts), exact_row: None, applicable: true }
}

pub fn predict_above_line(d: usize) -> Prediction {
    let present = (1..=d).flat_map(|a| (1..=d).map(move |b| (a, b))).filter(|&(a, b)| a + b > d).collect();
    Prediction { rule: Rule::AboveLine, d, present, exact_row: None, applicable: true }
}

/// Row n_b = 2 is present exactly at n_a = d − n with n = 0 or n a proper divisor of d.
pub fn predict_row_two(d: usize) -> Prediction {
    let present = std::iter::once(0).chain(divisors(d).into_iter().filter(|&n| n != d)).map(|n| (d - n, 2)).collect();
    Prediction { rule: Rule::RowTwo, d, present, exact_row: Some(2), applicable: d >= 2 }
}

/// Row n_b = 3: present at n_a = d and at n_a = d − n with n ∈ {m, 2m} for a
/// divisor m of d with 3m ≤ d.
///
/// The claim is established when every nontrivial divisor of d is prime;
/// for other d the prediction is still emitted with `applicable = false`.
pub fn predict_row_three(d: usize) -> Prediction {
    let mut present = BTreeSet::new();
    if d >= 3 {
        present.insert((d, 3));
        for m in divisors(d).into_iter().filter(|&m| 3 * m <= d) {
            for n in [m, 2 * m] {
                present.insert((d - n, 3));
            }
        }
    }
    let applicable = d >= 3 && divisors(d).into_iter().filter(|&e| e != 1 && e != d).all(is_prime);
    Prediction { rule: Rule::RowThree, d, present, exact_row: Some(3), applicable }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}
