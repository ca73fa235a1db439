//! Diagram reuse across commands: an in-memory map, optionally backed by a
//! directory of JSON files keyed by every setting that affects the result.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use kd_uncd::diagram::{enumerate_diagram, DiagramError, DiagramRecord, SearchMode, UncertaintyDiagram};
use kd_uncd::kd::TransitionMatrix;

pub struct DiagramStore {
    base: SearchMode,
    engine_override: bool,
    dir: Option<PathBuf>,
    memory: HashMap<usize, Arc<UncertaintyDiagram>>,
}

impl DiagramStore {
    /// `engine_override` false picks the default engine per dimension and
    /// keeps only the remaining settings of `base`.
    pub fn new(base: SearchMode, engine_override: bool, dir: Option<PathBuf>) -> Self {
        DiagramStore { base, engine_override, dir, memory: HashMap::new() }
    }

    pub fn mode_for(&self, d: usize) -> SearchMode {
        if self.engine_override {
            self.base
        } else {
            SearchMode { engine: SearchMode::default_for(d).engine, ..self.base }
        }
    }

    fn cache_path(&self, d: usize) -> Option<PathBuf> {
        let mode = self.mode_for(d);
        self.dir.as_ref().map(|dir| {
            dir.join(format!(
                "dft-d{d}-{}-sym{}-tol{:e}-v{}.json",
                mode.engine,
                u8::from(mode.sym_reduce),
                mode.rank_tol,
                env!("CARGO_PKG_VERSION")
            ))
        })
    }

    /// DFT diagram for `d`, from memory, disk, or a fresh enumeration.
    pub fn dft(&mut self, d: usize) -> Result<Arc<UncertaintyDiagram>, DiagramError> {
        if let Some(diag) = self.memory.get(&d) {
            return Ok(diag.clone());
        }
        let mode = self.mode_for(d);
        let u = TransitionMatrix::dft(d).map_err(kd_uncd::StateError::from)?;
        let path = self.cache_path(d);
        let cached = path
            .as_ref()
            .and_then(|p| std::fs::read_to_string(p).ok())
            .and_then(|text| DiagramRecord::from_json(&text).ok())
            .and_then(|rec| UncertaintyDiagram::from_record(&rec, &u, mode.sym_reduce, mode.rank_tol).ok());
        let diag = match cached {
            Some(diag) if !diag.has_unknown() => diag,
            _ => {
                let diag = enumerate_diagram(&u, &mode)?;
                if let Some(p) = &path {
                    if !diag.has_unknown() {
                        // a failed cache write only costs a recomputation later
                        let _ = std::fs::create_dir_all(p.parent().unwrap())
                            .and_then(|_| std::fs::write(p, diag.to_json()));
                    }
                }
                diag
            }
        };
        let diag = Arc::new(diag);
        self.memory.insert(d, diag.clone());
        Ok(diag)
    }
}
