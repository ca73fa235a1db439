//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use kd_uncd::cyclotomic::divisors;
use kd_uncd::diagram::{
    audit_engines, enumerate_diagram, sampling_diagram, Engine, PointStatus, SearchMode, UncertaintyDiagram,
};
use kd_uncd::kd::TransitionMatrix;
use kd_uncd_cli::store::DiagramStore;
use kd_uncd_cli::suites::{run_suite, SuiteConfig, SuiteId, SuiteReport};

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnMut(&mut DiagramStore) -> Outcome>;

fn enumerate(d: usize, engine: Engine) -> (UncertaintyDiagram, Duration) {
    let u = TransitionMatrix::dft(d).unwrap();
    let t = Instant::now();
    let diag = enumerate_diagram(&u, &SearchMode::new(engine)).unwrap();
    (diag, t.elapsed())
}

fn feature_checks(d: usize, diag: &UncertaintyDiagram) -> Vec<String> {
    let mut errs = Vec::new();
    if diag.has_unknown() {
        errs.push("unknown points".into());
    }
    for a in divisors(d) {
        if diag.status(a, d / a) != Some(PointStatus::Present) {
            errs.push(format!("hyperbola point ({a},{}) missing", d / a));
        }
    }
    for &(a, b) in &diag.present() {
        if a * b < d {
            errs.push(format!("({a},{b}) present below the hyperbola"));
        }
    }
    let expected_holes: &[(usize, usize)] = match d {
        8 => &[(5, 2)],
        9 => &[(5, 3), (4, 3)],
        _ => &[],
    };
    for &(a, b) in expected_holes {
        if diag.status(a, b) != Some(PointStatus::Hole) {
            errs.push(format!("({a},{b}) should be a hole"));
        }
    }
    if d == 6 {
        for a in 3..=6 {
            if diag.status(a, 2) != Some(PointStatus::Present) {
                errs.push(format!("unexpected hole ({a},2)"));
            }
        }
    }
    errs
}

fn known_features() -> Outcome {
    let mut notes = Vec::new();
    let mut errs = Vec::new();
    for d in [6, 8, 9, 10] {
        let (num, t_num) = enumerate(d, Engine::Numeric);
        errs.extend(feature_checks(d, &num).into_iter().map(|e| format!("d={d} numeric: {e}")));
        if t_num > Duration::from_secs(60) {
            errs.push(format!("d={d} numeric took {t_num:.1?}"));
        }
        notes.push(format!("d={d} numeric {t_num:.2?}"));
        if d <= 9 {
            let (ex, t_ex) = enumerate(d, Engine::Exact);
            errs.extend(feature_checks(d, &ex).into_iter().map(|e| format!("d={d} exact: {e}")));
            if !ex.same_content(&UncertaintyDiagram { engine: Engine::Exact, ..num.clone() }) {
                errs.push(format!("d={d}: engines produced different diagrams"));
            }
            if t_ex > Duration::from_secs(600) {
                errs.push(format!("d={d} exact took {t_ex:.1?}"));
            }
            notes.push(format!("exact {t_ex:.2?}"));
        }
    }
    if errs.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(errs.join("; "))
    }
}

fn suite(id: SuiteId, dims: std::ops::RangeInclusive<usize>, store: &mut DiagramStore) -> Result<SuiteReport, String> {
    run_suite(id, dims, &SuiteConfig::default(), store).map_err(|e| e.to_string())
}

fn suite_outcome(report: SuiteReport) -> Outcome {
    let checked: usize = report.rows.iter().map(|r| r.checked).sum();
    let failed: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("d={} {} failures {}", r.d, r.failures, r.note))
        .collect();
    if failed.is_empty() {
        Ok(format!("{} dimensions, {checked} checks", report.rows.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn row_three(store: &mut DiagramStore) -> Outcome {
    let report = suite(SuiteId::T3, 3..=12, store)?;
    let flagged: Vec<String> =
        report.rows.iter().filter(|r| !r.note.is_empty()).map(|r| format!("d={} {}", r.d, r.note)).collect();
    let d8 = report.rows.iter().find(|r| r.d == 8).map(|r| r.passed).unwrap_or(false);
    let base = suite_outcome(report)?;
    if !d8 {
        return Err("d=8 row does not agree".into());
    }
    Ok(format!("{base}; flagged: {}", flagged.join(", ")))
}

fn oracle_equivalence() -> Outcome {
    let mut errs = Vec::new();
    for d in 1..=6 {
        let u = TransitionMatrix::dft(d).unwrap();
        let sampled = sampling_diagram(&u, 100_000, 2024 + d as u64, 1e-10).unwrap();
        let (diag, _) = enumerate(d, Engine::Exact);
        let present = diag.present();
        if sampled != present {
            let only_s: BTreeSet<_> = sampled.difference(&present).collect();
            let only_e: BTreeSet<_> = present.difference(&sampled).collect();
            errs.push(format!("d={d}: sampled only {only_s:?}, enumerated only {only_e:?}"));
        }
    }
    if errs.is_empty() {
        Ok("d = 1..6 match".into())
    } else {
        Err(errs.join("; "))
    }
}

fn engine_agreement() -> Outcome {
    let u = TransitionMatrix::dft(8).unwrap();
    let diag = enumerate_diagram(&u, &SearchMode::new(Engine::Both)).unwrap();
    let audit = audit_engines(&u, 1e-10).unwrap();
    let summary = format!(
        "search: {} rank calls, {} disagreements; all submatrices: {} compared, {} mismatches",
        diag.stats.rank_calls,
        diag.stats.disagreements,
        audit.compared,
        audit.mismatches.len()
    );
    if diag.stats.disagreements == 0 && audit.mismatches.is_empty() {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn run_diagram_cli(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let (json, csv, svg) = (dir.join("d9.json"), dir.join("d9.csv"), dir.join("d9.svg"));
    let status = Command::new(env!("CARGO_BIN_EXE_kduncd"))
        .args(["diagram", "--d", "9", "--seed", "7", "--out"])
        .arg(&json)
        .arg("--csv")
        .arg(&csv)
        .arg("--svg")
        .arg(&svg)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("diagram exited with {status}"));
    }
    [json, csv, svg].iter().map(|p| std::fs::read(p).map_err(|e| e.to_string())).collect()
}

fn determinism() -> Outcome {
    let root = std::env::temp_dir().join(format!("kduncd-acceptance-{}", std::process::id()));
    let first = run_diagram_cli(&root.join("a"))?;
    let second = run_diagram_cli(&root.join("b"))?;
    let _ = std::fs::remove_dir_all(&root);
    let sizes: Vec<usize> = first.iter().map(Vec::len).collect();
    if first == second {
        Ok(format!("JSON/CSV/SVG identical ({sizes:?} bytes)"))
    } else {
        Err("outputs differ between runs".into())
    }
}

fn main() {
    let mut store = DiagramStore::new(SearchMode::default_for(1), false, None);
    let mut criteria: Vec<(&str, Criterion)> = vec![
        ("known diagram features, d = 6, 8, 9, 10", Box::new(|_| known_features())),
        ("no holes on or above the line, d <= 12", Box::new(|s| suite_outcome(suite(SuiteId::C1, 1..=12, s)?))),
        ("row n_b = 2 exact, d = 2..12", Box::new(|s| suite_outcome(suite(SuiteId::T2, 2..=12, s)?))),
        ("row n_b = 3 check, d = 3..12", Box::new(row_three)),
        ("classical exactly on the hyperbola, d <= 12", Box::new(|s| suite_outcome(suite(SuiteId::T4, 1..=12, s)?))),
        (
            "half-support nonclassicality for unbiased pairs, d <= 10",
            Box::new(|s| suite_outcome(suite(SuiteId::T5, 2..=10, s)?)),
        ),
        ("progression submatrix ranks, d <= 12", Box::new(|s| suite_outcome(suite(SuiteId::L3, 1..=12, s)?))),
        ("sampling oracle equivalence, d <= 6", Box::new(|_| oracle_equivalence())),
        ("exact and numeric engine agreement, d = 8", Box::new(|_| engine_agreement())),
        ("deterministic diagram output, d = 9 seed 7", Box::new(|_| determinism())),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter_mut().enumerate() {
        let t = Instant::now();
        let outcome = check(&mut store);
        let elapsed = t.elapsed();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} [{elapsed:.1?}] {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.1?}] {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
