//! On-disk store of swarm optima, one JSON file per scenario key.
//!
//! The key hashes everything that changes the fitness landscape or the swarm
//! itself: the link model, the search solver, the span count and the swarm
//! settings including bounds and seed. Management power is absent because
//! it does not enter the fitness.

use std::path::{Path, PathBuf};

use hybrid_link_core::{LinkModel, SolverConfig, SwarmConfig, SwarmResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::tsv::write_atomic;

const KEY_VERSION: &str = "hybrid-link-pso v1";

pub fn optimum_key(model: &LinkModel, search: &SolverConfig, n_span: u32, swarm: &SwarmConfig) -> String {
    let description = format!("{KEY_VERSION}\n{model:?}\n{search:?}\nspans={n_span}\n{swarm:?}");
    format!("{:x}", Sha256::digest(description.as_bytes()))
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    key: String,
    best: Vec<f64>,
    best_fitness: f64,
    trace: Vec<f64>,
    best_history: Vec<Vec<f64>>,
    evaluations: usize,
}

#[derive(Debug, Clone, Default)]
pub struct OptimumCache {
    dir: Option<PathBuf>,
}

impl OptimumCache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// A stored optimum, or `None` when absent, unreadable or filed under another key.
    pub fn get(&self, key: &str) -> Option<SwarmResult> {
        let path = self.path(key)?;
        let text = std::fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<Record>(&text) {
            Ok(r) if r.key == key => Some(SwarmResult {
                best: r.best,
                best_fitness: r.best_fitness,
                trace: r.trace,
                best_history: r.best_history,
                evaluations: r.evaluations,
            }),
            Ok(_) => {
                log::warn!("{}: key mismatch, ignoring cached optimum", path.display());
                None
            }
            Err(e) => {
                log::warn!("{}: unreadable cache entry ({e}), recomputing", path.display());
                None
            }
        }
    }

    pub fn put(&self, key: &str, result: &SwarmResult) -> Result<()> {
        let Some(path) = self.path(key) else {
            return Ok(());
        };
        let record = Record {
            key: key.to_string(),
            best: result.best.clone(),
            best_fitness: result.best_fitness,
            trace: result.trace.clone(),
            best_history: result.best_history.clone(),
            evaluations: result.evaluations,
        };
        let text = serde_json::to_string(&record).expect("plain numeric record");
        write_atomic(&path, &text)
    }
}
