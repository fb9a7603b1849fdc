//! Published-paper records pulled from the national bibliography.
//!
//! Each person is mapped explicitly to an author identifier in the external
//! archive. A sync fetches that author's records and reconciles them by
//! `source_key`: new keys are inserted and changed records are updated.
//! Records that vanished remotely are kept.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::sync::RwLock;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::PersonId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub source_key: String,
    pub title: String,
    pub type_of_work: String,
    pub publishing_date: NaiveDate,
    pub url: String,
}

impl PublicationRecord {
    fn validate(&self) -> Result<()> {
        if self.source_key.trim().is_empty() {
            return Err(Error::Protocol("record without source_key".into()));
        }
        if self.title.trim().is_empty() {
            return Err(Error::Protocol(format!(
                "record {} has an empty title",
                self.source_key
            )));
        }
        url::Url::parse(&self.url).map_err(|e| {
            Error::Protocol(format!(
                "record {} has a malformed url: {e}",
                self.source_key
            ))
        })?;
        Ok(())
    }
}

/// Response body of `GET /authors/{author_id}/records`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecords {
    pub author_id: String,
    pub records: Vec<PublicationRecord>,
}

pub trait BibliographySource: Send + Sync {
    fn fetch(&self, author_id: &str) -> Result<Vec<PublicationRecord>>;
}

/// Serves records from memory, optionally loaded from a directory of
/// `<author_id>.json` fixture files in the [`AuthorRecords`] format.
#[derive(Debug, Default)]
pub struct FixtureBibliography {
    authors: RwLock<HashMap<String, Vec<PublicationRecord>>>,
    unavailable: RwLock<bool>,
}

impl FixtureBibliography {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let source = Self::new();
        let entries =
            fs::read_dir(dir).map_err(|e| Error::Validation(format!("{}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry.map_err(|e| Error::Validation(e.to_string()))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            let fixture: AuthorRecords = serde_json::from_str(&text)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            source.set_records(&fixture.author_id, fixture.records);
        }
        Ok(source)
    }

    pub fn set_records(&self, author_id: &str, records: Vec<PublicationRecord>) {
        self.authors
            .write()
            .unwrap()
            .insert(author_id.to_string(), records);
    }

    pub fn records(&self, author_id: &str) -> Option<Vec<PublicationRecord>> {
        self.authors.read().unwrap().get(author_id).cloned()
    }

    pub fn set_unavailable(&self, down: bool) {
        *self.unavailable.write().unwrap() = down;
    }
}

impl BibliographySource for FixtureBibliography {
    fn fetch(&self, author_id: &str) -> Result<Vec<PublicationRecord>> {
        if *self.unavailable.read().unwrap() {
            return Err(Error::Transport("bibliography service unavailable".into()));
        }
        self.records(author_id)
            .ok_or_else(|| Error::Protocol(format!("unknown author {author_id}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncReport {
    pub added: usize,
    pub updated: usize,
    pub unchanged: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Library {
    authors: BTreeMap<PersonId, String>,
    records: BTreeMap<PersonId, BTreeMap<String, PublicationRecord>>,
}

impl Library {
    pub fn map_author(&mut self, person: PersonId, author_id: &str) -> Result<()> {
        let author_id = author_id.trim();
        if author_id.is_empty() {
            return Err(Error::Validation("author_id must not be empty".into()));
        }
        self.authors.insert(person, author_id.to_string());
        Ok(())
    }

    pub fn author_of(&self, person: PersonId) -> Result<&str> {
        self.authors
            .get(&person)
            .map(String::as_str)
            .ok_or(Error::NoAuthorMapping(person))
    }

    /// Reconciles a remote snapshot. The snapshot is validated as a whole
    /// first; nothing changes if any record is malformed.
    pub fn reconcile(
        &mut self,
        person: PersonId,
        remote: Vec<PublicationRecord>,
    ) -> Result<SyncReport> {
        let mut seen = BTreeSet::new();
        for record in &remote {
            record.validate()?;
            if !seen.insert(record.source_key.as_str()) {
                return Err(Error::Protocol(format!(
                    "duplicate source_key {}",
                    record.source_key
                )));
            }
        }
        let local = self.records.entry(person).or_default();
        let mut report = SyncReport::default();
        for record in remote {
            match local.get(&record.source_key) {
                None => report.added += 1,
                Some(existing) if *existing == record => {
                    report.unchanged += 1;
                    continue;
                }
                Some(_) => report.updated += 1,
            }
            local.insert(record.source_key.clone(), record);
        }
        Ok(report)
    }

    /// Newest first; same-day records by title.
    pub fn list(&self, person: PersonId, type_of_work: Option<&str>) -> Vec<PublicationRecord> {
        let mut out: Vec<PublicationRecord> = self
            .records
            .get(&person)
            .into_iter()
            .flat_map(|m| m.values())
            .filter(|r| type_of_work.is_none_or(|t| r.type_of_work == t))
            .cloned()
            .collect();
        out.sort_by(|a, b| {
            b.publishing_date
                .cmp(&a.publishing_date)
                .then_with(|| a.title.cmp(&b.title))
                .then_with(|| a.source_key.cmp(&b.source_key))
        });
        out
    }

    pub fn remove(&mut self, person: PersonId, source_key: &str) -> Result<PublicationRecord> {
        self.records
            .get_mut(&person)
            .and_then(|m| m.remove(source_key))
            .ok_or_else(|| Error::not_found("publication", format!("{person}/{source_key}")))
    }
}
