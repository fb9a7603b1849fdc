//! The live store: one [`Hrm`] behind a mutex, the audit trail, and an
//! optional snapshot file rewritten atomically after every mutating call.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard};

use chrono::{DateTime, Utc};
use hrm_core::expiry::ExpiryNotification;
use hrm_core::people::{Employee, Person};
use hrm_core::registry::RegistryApplication;
use hrm_core::triage::Requirement;
use hrm_core::vault::AttachedDocument;
use hrm_core::workflow::AppointmentProcedure;
use hrm_core::{Clock, HrState, Hrm, Policy};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub actor: String,
    pub timestamp: DateTime<Utc>,
    pub operation: String,
    pub entity: String,
    /// `ok` or the error code.
    pub outcome: String,
}

impl AuditEntry {
    pub fn is_ok(&self) -> bool {
        self.outcome == "ok"
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct Snapshot {
    state: HrState,
    audit: Vec<AuditEntry>,
}

#[derive(Serialize)]
struct SnapshotRef<'a> {
    state: &'a HrState,
    audit: &'a [AuditEntry],
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("cannot read store {path}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corrupt store {path}")]
    Corrupt {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Domain(#[from] hrm_core::Error),
}

/// Entity reference recorded in the audit trail for a successful call.
pub trait Audited {
    fn entity(&self) -> Option<String> {
        None
    }
}

impl Audited for () {}
impl Audited for hrm_core::bibliography::SyncReport {}
impl Audited for hrm_core::bibliography::PublicationRecord {}
impl Audited for Vec<ExpiryNotification> {}
impl Audited for Vec<Requirement> {}

impl Audited for Person {
    fn entity(&self) -> Option<String> {
        Some(self.person_id.to_string())
    }
}

impl Audited for Employee {
    fn entity(&self) -> Option<String> {
        Some(self.person_id.to_string())
    }
}

impl Audited for AppointmentProcedure {
    fn entity(&self) -> Option<String> {
        Some(self.procedure_id.to_string())
    }
}

impl Audited for RegistryApplication {
    fn entity(&self) -> Option<String> {
        Some(self.application_id.to_string())
    }
}

impl Audited for AttachedDocument {
    fn entity(&self) -> Option<String> {
        Some(self.document_id.to_string())
    }
}

impl Audited for Requirement {
    fn entity(&self) -> Option<String> {
        Some(self.requirement_id.to_string())
    }
}

struct Inner {
    hrm: Hrm,
    audit: Vec<AuditEntry>,
}

pub struct Store {
    inner: Mutex<Inner>,
    path: Option<PathBuf>,
}

impl Store {
    pub fn in_memory(policy: Policy, clock: Arc<dyn Clock>) -> Result<Self, StoreError> {
        Ok(Self {
            inner: Mutex::new(Inner {
                hrm: Hrm::new(policy, clock)?,
                audit: Vec::new(),
            }),
            path: None,
        })
    }

    /// Loads the snapshot at `path` or starts empty if there is none yet.
    pub fn open(path: &Path, policy: Policy, clock: Arc<dyn Clock>) -> Result<Self, StoreError> {
        let snapshot = match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map_err(|source| StoreError::Corrupt {
                path: path.into(),
                source,
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Snapshot::default(),
            Err(source) => {
                return Err(StoreError::Read {
                    path: path.into(),
                    source,
                })
            }
        };
        let store = Self {
            inner: Mutex::new(Inner {
                hrm: Hrm::from_state(snapshot.state, policy, clock)?,
                audit: snapshot.audit,
            }),
            path: Some(path.into()),
        };
        store.persist(&store.lock()).map_err(|e| StoreError::Read {
            path: path.into(),
            source: std::io::Error::other(e.to_string()),
        })?;
        Ok(store)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        self.inner
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn read<T>(&self, f: impl FnOnce(&Hrm) -> T) -> T {
        f(&self.lock().hrm)
    }

    /// One step of a multi-step call. The caller must finish with
    /// [`Store::record`].
    pub fn write<T>(&self, f: impl FnOnce(&mut Hrm) -> hrm_core::Result<T>) -> hrm_core::Result<T> {
        f(&mut self.lock().hrm)
    }

    /// Single-step mutating call: apply, audit, persist.
    pub fn mutate<T: Audited>(
        &self,
        actor: &str,
        operation: &str,
        target: &str,
        f: impl FnOnce(&mut Hrm) -> hrm_core::Result<T>,
    ) -> Result<T, ApiError> {
        let mut inner = self.lock();
        let result = f(&mut inner.hrm);
        let entry = entry(&inner.hrm, actor, operation, target, &result);
        inner.audit.push(entry);
        self.persist(&inner)?;
        result.map_err(ApiError::from)
    }

    /// Closes a multi-step call with its audit entry and persists.
    pub fn record<T: Audited>(
        &self,
        actor: &str,
        operation: &str,
        target: &str,
        result: hrm_core::Result<T>,
    ) -> Result<T, ApiError> {
        let mut inner = self.lock();
        let entry = entry(&inner.hrm, actor, operation, target, &result);
        inner.audit.push(entry);
        self.persist(&inner)?;
        result.map_err(ApiError::from)
    }

    pub fn audit(&self) -> Vec<AuditEntry> {
        self.lock().audit.clone()
    }

    pub fn state(&self) -> HrState {
        self.lock().hrm.state().clone()
    }

    fn persist(&self, inner: &Inner) -> Result<(), ApiError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let storage =
            |e: &dyn std::fmt::Display| ApiError::Storage(format!("{}: {e}", path.display()));
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let mut file = tempfile::NamedTempFile::new_in(dir).map_err(|e| storage(&e))?;
        let snapshot = SnapshotRef {
            state: inner.hrm.state(),
            audit: &inner.audit,
        };
        serde_json::to_writer(&mut file, &snapshot).map_err(|e| storage(&e))?;
        file.flush().map_err(|e| storage(&e))?;
        file.as_file().sync_all().map_err(|e| storage(&e))?;
        file.persist(path).map_err(|e| storage(&e))?;
        Ok(())
    }
}

fn entry<T: Audited>(
    hrm: &Hrm,
    actor: &str,
    operation: &str,
    target: &str,
    result: &hrm_core::Result<T>,
) -> AuditEntry {
    let (entity, outcome) = match result {
        Ok(value) => (
            value.entity().unwrap_or_else(|| target.to_string()),
            "ok".to_string(),
        ),
        Err(e) => (target.to_string(), e.code().to_string()),
    };
    AuditEntry {
        actor: actor.into(),
        timestamp: hrm.clock().now(),
        operation: operation.into(),
        entity,
        outcome,
    }
}

/// Async mutexes keyed by name, for calls that must not interleave while
/// they wait on an external service.
#[derive(Default)]
pub struct KeyedLocks {
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl KeyedLocks {
    pub async fn lock(&self, key: String) -> tokio::sync::OwnedMutexGuard<()> {
        let lock = Arc::clone(
            self.locks
                .lock()
                .unwrap_or_else(|p| p.into_inner())
                .entry(key)
                .or_default(),
        );
        lock.lock_owned().await
    }
}
