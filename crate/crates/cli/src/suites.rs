//! Verification suites: closed-form predictions against enumerated diagrams,
//! and property checks on sampled states.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use kd_uncd::cyclotomic::divisors;
use kd_uncd::diagram::{
    check_progression_ranks, predict_above_line, predict_divisor_family, predict_row_three, predict_row_two,
    witness_state, DiagramError, PointStatus, Prediction,
};
use kd_uncd::kd::{classify_state, half_support_criterion, support_profile, TransitionMatrix, Verdict};
use kd_uncd::states::{coset_classical_state, random_mub_pair, rng_from_seed, CosetSpec, StateError, SubspaceSampler};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::store::DiagramStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SuiteId {
    T1,
    C1,
    T2,
    T3,
    T4,
    T5,
    L3,
}

impl SuiteId {
    pub const ALL: [SuiteId; 7] =
        [SuiteId::T1, SuiteId::C1, SuiteId::T2, SuiteId::T3, SuiteId::T4, SuiteId::T5, SuiteId::L3];

    pub fn describe(self) -> &'static str {
        match self {
            SuiteId::T1 => "divisor-family points are present",
            SuiteId::C1 => "no holes on or above n_a + n_b = d + 1",
            SuiteId::T2 => "row n_b = 2 matches the divisor rule",
            SuiteId::T3 => "row n_b = 3 matches the divisor rule",
            SuiteId::T4 => "DFT states are classical exactly on the hyperbola",
            SuiteId::T5 => "unbiased pairs: more than half support implies nonclassical",
            SuiteId::L3 => "progression submatrices have full rank",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of T1, C1, T2, T3, T4, T5, L3"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Witness states per dimension for T4.
    pub samples: usize,
    pub coset_states: usize,
    pub mub_pairs: usize,
    pub states_per_pair: usize,
    pub seed: u64,
    pub eps_support: f64,
    pub eps_classical: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 1000,
            coset_states: 20,
            mub_pairs: 100,
            states_per_pair: 100,
            seed: 0,
            eps_support: 1e-10,
            eps_classical: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub d: usize,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub id: SuiteId,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn table(&self) -> String {
        let mut out = format!("{}: {}\n", self.id, self.id.describe());
        out.push_str(&format!("{:>4}  {:<6} {:>8} {:>8}  note\n", "d", "result", "checked", "failed"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4}  {:<6} {:>8} {:>8}  {}\n",
                r.d,
                if r.passed { "pass" } else { "FAIL" },
                r.checked,
                r.failures,
                r.note
            ));
        }
        out
    }
}

#[derive(Debug)]
pub enum SuiteError {
    Diagram(DiagramError),
    State(StateError),
    Unknown { d: usize },
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::Diagram(e) => write!(f, "{e}"),
            SuiteError::State(e) => write!(f, "{e}"),
            SuiteError::Unknown { d } => write!(f, "diagram for d = {d} has unresolved points"),
        }
    }
}

impl std::error::Error for SuiteError {}

impl From<DiagramError> for SuiteError {
    fn from(e: DiagramError) -> Self {
        SuiteError::Diagram(e)
    }
}

impl From<StateError> for SuiteError {
    fn from(e: StateError) -> Self {
        SuiteError::State(e)
    }
}

impl From<kd_uncd::KdError> for SuiteError {
    fn from(e: kd_uncd::KdError) -> Self {
        SuiteError::State(e.into())
    }
}

fn stream_seed(seed: u64, d: usize, tag: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((d as u64) << 40) ^ tag
}

pub fn run_suite(
    id: SuiteId,
    dims: RangeInclusive<usize>,
    cfg: &SuiteConfig,
    store: &mut DiagramStore,
) -> Result<SuiteReport, SuiteError> {
    let mut rows = Vec::new();
    for d in dims {
        let row = match id {
            SuiteId::T1 => prediction_row(d, predict_divisor_family(d), store)?,
            SuiteId::C1 => prediction_row(d, predict_above_line(d), store)?,
            SuiteId::T2 if d >= 2 => prediction_row(d, predict_row_two(d), store)?,
            SuiteId::T3 if d >= 3 => prediction_row(d, predict_row_three(d), store)?,
            SuiteId::T2 | SuiteId::T3 => continue,
            SuiteId::T4 => hyperbola_row(d, cfg, store)?,
            SuiteId::T5 if d >= 2 => half_support_row(d, cfg)?,
            SuiteId::T5 => continue,
            SuiteId::L3 => {
                let r = check_progression_ranks(d)?;
                SuiteRow {
                    d,
                    passed: r.failures.is_empty(),
                    checked: r.instances,
                    failures: r.failures.len(),
                    note: r.failures.first().map(|f| format!("first failure {f:?}")).unwrap_or_default(),
                }
            }
        };
        rows.push(row);
    }
    Ok(SuiteReport { id, rows })
}

fn prediction_row(d: usize, pred: Prediction, store: &mut DiagramStore) -> Result<SuiteRow, SuiteError> {
    let diag = store.dft(d)?;
    if diag.has_unknown() {
        return Err(SuiteError::Unknown { d });
    }
    let mismatches = pred.compare(&diag);
    let checked = match pred.exact_row {
        Some(_) => d,
        None => pred.present.len(),
    };
    let mut note = mismatches
        .iter()
        .map(|m| format!("({},{}) predicted {:?} found {:?}", m.n_a, m.n_b, m.predicted, m.actual))
        .collect::<Vec<_>>()
        .join("; ");
    if !pred.applicable {
        let tag = if mismatches.is_empty() { "agrees" } else { "disagrees" };
        note = format!("outside stated hypothesis, {tag}{}{note}", if note.is_empty() { "" } else { ": " });
    }
    Ok(SuiteRow { d, passed: mismatches.is_empty(), checked, failures: mismatches.len(), note })
}

/// Comb states must be classical with n_a·n_b = d; random witnesses at present
/// points must be classical exactly when the point is on the hyperbola.
fn hyperbola_row(d: usize, cfg: &SuiteConfig, store: &mut DiagramStore) -> Result<SuiteRow, SuiteError> {
    let u = TransitionMatrix::dft(d)?;
    let mut rng = rng_from_seed(stream_seed(cfg.seed, d, 4));
    let divs = divisors(d);
    let mut checked = 0;
    let mut failures = Vec::new();
    for _ in 0..cfg.coset_states {
        let spec = CosetSpec {
            d,
            p: *divs.choose(&mut rng).unwrap(),
            a_shift: rng.gen_range(0..d),
            b_shift: rng.gen_range(0..d),
        };
        let psi = coset_classical_state(spec)?;
        let prof = support_profile(&psi, &u, cfg.eps_support)?;
        let verdict = classify_state(&psi, &u, cfg.eps_classical)?.verdict;
        checked += 1;
        if prof.product() != d || verdict != Verdict::Classical {
            failures.push(format!("comb p={} shifts ({},{})", spec.p, spec.a_shift, spec.b_shift));
        }
    }

    let diag = store.dft(d)?;
    let present: Vec<_> = diag.points.iter().filter(|p| p.status == PointStatus::Present).collect();
    let above: Vec<_> = present.iter().filter(|p| p.n_a * p.n_b > d).collect();
    let on: Vec<_> = present.iter().filter(|p| p.n_a * p.n_b == d).collect();
    let mut check = |p: &kd_uncd::DiagramPoint, k: usize, expect: Verdict| -> Result<(), SuiteError> {
        let psi = witness_state(&u, p, stream_seed(cfg.seed, d, (k as u64) << 8 | 5), cfg.eps_support)?;
        checked += 1;
        if classify_state(&psi, &u, cfg.eps_classical)?.verdict != expect {
            failures.push(format!("witness at ({},{}) sample {k}", p.n_a, p.n_b));
        }
        Ok(())
    };
    if !above.is_empty() {
        for k in 0..cfg.samples {
            check(above[k % above.len()], k, Verdict::Nonclassical)?;
        }
    }
    for (k, p) in on.iter().enumerate() {
        for r in 0..10 {
            check(p, cfg.samples + 10 * k + r, Verdict::Classical)?;
        }
    }
    Ok(SuiteRow {
        d,
        passed: failures.is_empty(),
        checked,
        failures: failures.len(),
        note: failures.first().cloned().unwrap_or_default(),
    })
}

/// Random index set of the given size.
fn random_subset<R: Rng>(rng: &mut R, d: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..d).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

fn half_support_row(d: usize, cfg: &SuiteConfig) -> Result<SuiteRow, SuiteError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut profiles = std::collections::BTreeSet::new();
    for pair in 0..cfg.mub_pairs {
        let u = random_mub_pair(d, stream_seed(cfg.seed, d, (pair as u64) << 16 | 6))?;
        let mut rng = rng_from_seed(stream_seed(cfg.seed, d, (pair as u64) << 16 | 7));
        let mut made = 0;
        let mut attempts = 0;
        while made < cfg.states_per_pair {
            attempts += 1;
            if attempts > 100 * cfg.states_per_pair {
                failures.push(format!("pair {pair}: could not generate qualifying states"));
                break;
            }
            // one side more than half occupied, the other side arbitrary
            let big = rng.gen_range(d / 2 + 1..=d);
            let other = rng.gen_range(1..=d);
            let (s, t) = if rng.gen_bool(0.5) { (big, other) } else { (other, big) };
            let s_set = random_subset(&mut rng, d, s);
            let t_set = random_subset(&mut rng, d, t);
            let sampler = match SubspaceSampler::new(&u, &s_set, &t_set) {
                Ok(sampler) => sampler,
                Err(StateError::EmptySubspace) => continue,
                Err(e) => return Err(e.into()),
            };
            let psi = sampler.sample(&mut rng)?;
            let prof = support_profile(&psi, &u, cfg.eps_support)?;
            if prof.n_a <= 1 || prof.n_b <= 1 || !half_support_criterion(&prof, &u)? {
                continue;
            }
            made += 1;
            checked += 1;
            profiles.insert((prof.n_a, prof.n_b));
            if classify_state(&psi, &u, cfg.eps_classical)?.verdict != Verdict::Nonclassical {
                failures.push(format!("pair {pair}: classical state with profile ({}, {})", prof.n_a, prof.n_b));
            }
        }
    }
    Ok(SuiteRow {
        d,
        passed: failures.is_empty(),
        checked,
        failures: failures.len(),
        note: failures.first().cloned().unwrap_or_else(|| format!("{} distinct support pairs", profiles.len())),
    })
}
