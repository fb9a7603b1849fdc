//! Attached document records. Only references into the external repository
//! are stored; contents are never read.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ApplicationId, DocumentId, PersonId, ProcedureId, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum OwnerRef {
    Procedure(ProcedureId),
    RegistryApplication(ApplicationId),
    Employee(PersonId),
}

impl fmt::Display for OwnerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OwnerRef::Procedure(id) => write!(f, "procedure {id}"),
            OwnerRef::RegistryApplication(id) => write!(f, "registry application {id}"),
            OwnerRef::Employee(id) => write!(f, "employee {id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachedDocument {
    pub document_id: DocumentId,
    pub owner: OwnerRef,
    pub path: String,
    pub declared_format: String,
    pub attached_at: DateTime<Utc>,
    pub description: String,
    #[serde(default)]
    pub detached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedDocument {
    pub path: String,
    pub declared_format: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Vault {
    documents: BTreeMap<DocumentId, AttachedDocument>,
    seq: Sequence,
}

impl Vault {
    /// The caller has already checked that `owner` exists.
    pub fn attach(
        &mut self,
        owner: OwnerRef,
        path: &str,
        declared_format: &str,
        description: &str,
        now: DateTime<Utc>,
    ) -> Result<AttachedDocument> {
        if path.trim().is_empty() {
            return Err(Error::EmptyPath);
        }
        let doc = AttachedDocument {
            document_id: DocumentId(self.seq.next()),
            owner,
            path: path.to_string(),
            declared_format: declared_format.to_string(),
            attached_at: now,
            description: description.to_string(),
            detached: false,
        };
        self.documents.insert(doc.document_id, doc.clone());
        Ok(doc)
    }

    /// Live attachments of one owner, oldest first.
    pub fn list(&self, owner: OwnerRef) -> Vec<AttachedDocument> {
        let mut docs: Vec<_> = self
            .documents
            .values()
            .filter(|d| d.owner == owner && !d.detached)
            .cloned()
            .collect();
        docs.sort_by_key(|d| (d.attached_at, d.document_id));
        docs
    }

    /// Every record, detached ones included.
    pub fn all(&self) -> impl Iterator<Item = &AttachedDocument> {
        self.documents.values()
    }

    fn live(&self, id: DocumentId) -> Result<&AttachedDocument> {
        self.documents
            .get(&id)
            .filter(|d| !d.detached)
            .ok_or_else(|| Error::not_found("document", id))
    }

    pub fn get(&self, id: DocumentId) -> Result<&AttachedDocument> {
        self.live(id)
    }

    pub fn resolve(&self, id: DocumentId) -> Result<ResolvedDocument> {
        let doc = self.live(id)?;
        Ok(ResolvedDocument {
            path: doc.path.clone(),
            declared_format: doc.declared_format.clone(),
        })
    }

    /// Soft delete: the record stays but is no longer listed or resolvable.
    pub fn detach(&mut self, id: DocumentId) -> Result<AttachedDocument> {
        self.live(id)?;
        let doc = self.documents.get_mut(&id).expect("checked above");
        doc.detached = true;
        Ok(doc.clone())
    }
}

/// CSV manifest with columns
/// `document_id,path,declared_format,attached_at,description`.
pub fn write_manifest<W: io::Write>(docs: &[AttachedDocument], out: W) -> Result<()> {
    let err = |e: csv::Error| Error::Validation(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "document_id",
        "path",
        "declared_format",
        "attached_at",
        "description",
    ])
    .map_err(err)?;
    for d in docs {
        w.write_record([
            d.document_id.0.to_string(),
            d.path.clone(),
            d.declared_format.clone(),
            d.attached_at.to_rfc3339(),
            d.description.clone(),
        ])
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::Validation(format!("csv output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{Duration, TimeZone};

    fn t0() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2020, 1, 1, 8, 0, 0).unwrap()
    }

    #[test]
    fn attach_and_resolve_round_trip() {
        let mut vault = Vault::default();
        let owner = OwnerRef::Procedure(ProcedureId(1));
        let doc = vault
            .attach(
                owner,
                "repo://promotions/2020/report.pdf",
                "pdf",
                "committee report",
                t0(),
            )
            .unwrap();
        let resolved = vault.resolve(doc.document_id).unwrap();
        assert_eq!(resolved.path, "repo://promotions/2020/report.pdf");
        assert_eq!(resolved.declared_format, "pdf");
    }

    #[test]
    fn unusual_format_labels_pass_through() {
        let mut vault = Vault::default();
        let doc = vault
            .attach(
                OwnerRef::Employee(PersonId(1)),
                "/nowhere/x",
                "  Weird.FMT v2 ",
                "",
                t0(),
            )
            .unwrap();
        assert_eq!(
            vault.resolve(doc.document_id).unwrap().declared_format,
            "  Weird.FMT v2 "
        );
    }

    #[test]
    fn empty_path_rejected() {
        let mut vault = Vault::default();
        assert_eq!(
            vault.attach(OwnerRef::Procedure(ProcedureId(1)), " ", "pdf", "", t0()),
            Err(Error::EmptyPath)
        );
    }

    #[test]
    fn listing_is_chronological_and_isolated() {
        let mut vault = Vault::default();
        let p = OwnerRef::Procedure(ProcedureId(1));
        let other = OwnerRef::Procedure(ProcedureId(2));
        assert!(vault.list(p).is_empty());
        vault
            .attach(p, "c", "pdf", "", t0() + Duration::hours(2))
            .unwrap();
        vault.attach(p, "a", "pdf", "", t0()).unwrap();
        vault.attach(other, "x", "pdf", "", t0()).unwrap();
        vault
            .attach(p, "b", "doc", "", t0() + Duration::hours(1))
            .unwrap();
        let paths: Vec<_> = vault.list(p).into_iter().map(|d| d.path).collect();
        assert_eq!(paths, vec!["a", "b", "c"]);
    }

    #[test]
    fn detached_documents_disappear() {
        let mut vault = Vault::default();
        let p = OwnerRef::Procedure(ProcedureId(1));
        let doc = vault.attach(p, "a", "pdf", "", t0()).unwrap();
        vault.detach(doc.document_id).unwrap();
        assert!(vault.list(p).is_empty());
        assert!(matches!(
            vault.resolve(doc.document_id),
            Err(Error::NotFound { .. })
        ));
        assert!(vault.detach(doc.document_id).is_err());
        assert!(matches!(
            vault.resolve(DocumentId(42)),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn owner_wire_shape() {
        let json = serde_json::to_string(&OwnerRef::RegistryApplication(ApplicationId(3))).unwrap();
        assert_eq!(json, r#"{"kind":"registry_application","id":3}"#);
    }

    #[test]
    fn manifest_csv() {
        let mut vault = Vault::default();
        let p = OwnerRef::Procedure(ProcedureId(1));
        vault
            .attach(p, "repo://a, b.pdf", "pdf", "report", t0())
            .unwrap();
        let mut buf = Vec::new();
        write_manifest(&vault.list(p), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "document_id,path,declared_format,attached_at,description\n1,\"repo://a, b.pdf\",pdf,2020-01-01T08:00:00+00:00,report\n"
        );
    }
}
