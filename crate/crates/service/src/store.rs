//! In-memory versioned scenario store.
//!
//! Each scenario lives in a slot holding an immutable snapshot behind an
//! `Arc`. Readers clone the `Arc` and never wait on writers for longer than
//! the pointer swap. Writers to the same slot are serialized by a per-slot
//! mutex and must name the version they started from.

use std::collections::HashMap;
use std::io;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sourcing_core::Scenario;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioHandle {
    pub id: String,
    pub version: u64,
    pub scenario: Scenario,
}

#[derive(Debug, Error)]
pub enum UpdateError<E> {
    #[error("unknown scenario {0:?}")]
    NotFound(String),
    #[error("expected version {expected}, current version is {current}")]
    StaleVersion { expected: u64, current: u64 },
    #[error(transparent)]
    Rejected(E),
}

struct Slot {
    current: RwLock<Arc<ScenarioHandle>>,
    writer: Mutex<()>,
}

impl Slot {
    fn new(handle: ScenarioHandle) -> Self {
        Slot {
            current: RwLock::new(Arc::new(handle)),
            writer: Mutex::new(()),
        }
    }

    fn snapshot(&self) -> Arc<ScenarioHandle> {
        self.current.read().expect("slot lock poisoned").clone()
    }
}

#[derive(Default)]
pub struct Store {
    slots: RwLock<HashMap<String, Arc<Slot>>>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a scenario under a fresh id at version 1.
    pub fn insert(&self, scenario: Scenario) -> Arc<ScenarioHandle> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let handle = ScenarioHandle {
            id: id.clone(),
            version: 1,
            scenario,
        };
        let slot = Arc::new(Slot::new(handle));
        let snapshot = slot.snapshot();
        self.slots.write().expect("store lock poisoned").insert(id, slot);
        snapshot
    }

    pub fn get(&self, id: &str) -> Option<Arc<ScenarioHandle>> {
        self.slot(id).map(|s| s.snapshot())
    }

    fn slot(&self, id: &str) -> Option<Arc<Slot>> {
        self.slots.read().expect("store lock poisoned").get(id).cloned()
    }

    /// Replaces a scenario with `edit(current)` and bumps its version by one.
    ///
    /// With `expected = Some(v)` the edit only runs if the current version is
    /// `v`. A rejected edit leaves the stored snapshot untouched.
    pub fn update<E>(
        &self,
        id: &str,
        expected: Option<u64>,
        edit: impl FnOnce(&Scenario) -> Result<Scenario, E>,
    ) -> Result<Arc<ScenarioHandle>, UpdateError<E>> {
        let slot = self.slot(id).ok_or_else(|| UpdateError::NotFound(id.to_string()))?;
        let _writer = slot.writer.lock().expect("slot lock poisoned");
        let current = slot.snapshot();
        if let Some(expected) = expected {
            if expected != current.version {
                return Err(UpdateError::StaleVersion {
                    expected,
                    current: current.version,
                });
            }
        }
        let scenario = edit(&current.scenario).map_err(UpdateError::Rejected)?;
        let next = Arc::new(ScenarioHandle {
            id: current.id.clone(),
            version: current.version + 1,
            scenario,
        });
        *slot.current.write().expect("slot lock poisoned") = next.clone();
        Ok(next)
    }

    pub fn len(&self) -> usize {
        self.slots.read().expect("store lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All current snapshots, ordered by id.
    pub fn handles(&self) -> Vec<Arc<ScenarioHandle>> {
        let mut all: Vec<_> = self
            .slots
            .read()
            .expect("store lock poisoned")
            .values()
            .map(|s| s.snapshot())
            .collect();
        all.sort_by(|a, b| a.id.cmp(&b.id));
        all
    }

    /// Writes every scenario to one JSON file (an array of handles).
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let handles: Vec<ScenarioHandle> = self.handles().iter().map(|h| (**h).clone()).collect();
        let text = serde_json::to_string_pretty(&handles)?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(tmp, path)
    }

    /// Loads a file written by [`Store::save`]. Ids and versions are kept.
    pub fn load(path: &Path) -> io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let handles: Vec<ScenarioHandle> = serde_json::from_str(&text)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        let store = Store::new();
        {
            let mut slots = store.slots.write().expect("store lock poisoned");
            for handle in handles {
                slots.insert(handle.id.clone(), Arc::new(Slot::new(handle)));
            }
        }
        Ok(store)
    }
}
