use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::bibliography::{BibliographySource, Library, PublicationRecord, SyncReport};
use crate::clock::Clock;
use crate::error::{Error, Result};
use crate::expiry::{self, ExpiryNotification, NotificationLedger, ReviewRow};
use crate::ids::{ApplicationId, DocumentId, PersonId, ProcedureId};
use crate::ministry::{MinistryClient, MinistrySubmission};
use crate::people::{Directory, Employee, Person, StaffGroup};
use crate::policy::Policy;
use crate::registry::{MinistryDecision, Register, RegistryApplication};
use crate::taxonomy::AcademicGrade;
use crate::triage::{Requirement, RequirementLedger};
use crate::vault::{AttachedDocument, OwnerRef, ResolvedDocument, Vault};
use crate::workflow::{
    self, AppointmentBook, AppointmentProcedure, GradeAppointment, ProcedureBook, ProcedureEvent,
    RecordedEvent,
};

/// The complete persistent state. Two stores are equal exactly when their
/// `HrState`s are.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HrState {
    pub directory: Directory,
    pub procedures: ProcedureBook,
    pub appointments: AppointmentBook,
    pub notifications: NotificationLedger,
    pub register: Register,
    pub library: Library,
    pub vault: Vault,
    pub requirements: RequirementLedger,
}

/// Entry point for every operation on the HR store.
#[derive(Debug)]
pub struct Hrm {
    state: HrState,
    policy: Policy,
    clock: Arc<dyn Clock>,
}

impl Hrm {
    pub fn new(policy: Policy, clock: Arc<dyn Clock>) -> Result<Self> {
        Self::from_state(HrState::default(), policy, clock)
    }

    pub fn from_state(state: HrState, policy: Policy, clock: Arc<dyn Clock>) -> Result<Self> {
        policy.validate()?;
        Ok(Self {
            state,
            policy,
            clock,
        })
    }

    pub fn state(&self) -> &HrState {
        &self.state
    }

    pub fn into_state(self) -> HrState {
        self.state
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn clock(&self) -> &Arc<dyn Clock> {
        &self.clock
    }

    // --- people ---

    pub fn register_person(
        &mut self,
        full_name: &str,
        date_of_birth: NaiveDate,
        doctoral_degree: bool,
    ) -> Result<Person> {
        let today = self.clock.today();
        self.state
            .directory
            .register_person(full_name, date_of_birth, doctoral_degree, today)
    }

    pub fn hire(
        &mut self,
        person: PersonId,
        staff_group: StaffGroup,
        employment_start: NaiveDate,
    ) -> Result<Employee> {
        let today = self.clock.today();
        self.state
            .directory
            .hire(person, staff_group, employment_start, today)
    }

    pub fn person(&self, id: PersonId) -> Result<&Person> {
        self.state.directory.person(id)
    }

    // --- appointment procedures ---

    pub fn open_procedure(
        &mut self,
        target_grade: AcademicGrade,
        council_ref: &str,
        actor: &str,
    ) -> Result<AppointmentProcedure> {
        let now = self.clock.now();
        self.state
            .procedures
            .open(target_grade, council_ref, now, actor)
    }

    pub fn procedure(&self, id: ProcedureId) -> Result<&AppointmentProcedure> {
        let procedure = self.state.procedures.get(id)?;
        debug_assert_eq!(
            workflow::replay(&procedure.events(), &self.policy),
            Ok(procedure.state()),
            "stored state of {id} disagrees with its history"
        );
        Ok(procedure)
    }

    /// Applies one event under optimistic concurrency. Recognition creates
    /// the appointments in the same step.
    pub fn advance(
        &mut self,
        id: ProcedureId,
        event: ProcedureEvent,
        expected_version: u64,
        actor: &str,
    ) -> Result<AppointmentProcedure> {
        let procedure =
            self.state
                .procedures
                .prepare(id, &event, expected_version, &self.policy)?;
        for person in event.referenced_persons() {
            self.state.directory.person(person)?;
        }
        let drafts = match &event {
            ProcedureEvent::RecognizeAppointments { effective_date } => {
                let drafts = workflow::recognize(procedure, *effective_date, &self.policy)?;
                self.state.appointments.check(&drafts)?;
                drafts
            }
            _ => Vec::new(),
        };
        let record = RecordedEvent {
            at: self.clock.now(),
            actor: actor.to_string(),
            event,
        };
        let updated = self.state.procedures.commit(id, record, &self.policy)?;
        if !drafts.is_empty() {
            self.state.appointments.insert(id, drafts)?;
        }
        Ok(updated)
    }

    pub fn appointments(&self) -> impl Iterator<Item = &GradeAppointment> {
        self.state.appointments.all()
    }

    // --- expiry ---

    pub fn expiry_review(&self, as_of: NaiveDate) -> Vec<ReviewRow> {
        expiry::review(
            self.state.appointments.all(),
            as_of,
            self.policy.warning_months,
        )
    }

    pub fn generate_review(&mut self, as_of: NaiveDate) -> Vec<ExpiryNotification> {
        let now = self.clock.now();
        let HrState {
            appointments,
            notifications,
            ..
        } = &mut self.state;
        notifications.generate(appointments.all(), as_of, self.policy.warning_months, now)
    }

    // --- registry ---

    pub fn submit_registration(
        &mut self,
        person: PersonId,
        category: &str,
        documents: Vec<String>,
    ) -> Result<RegistryApplication> {
        let now = self.clock.now();
        let person = self.state.directory.person(person)?;
        self.state.register.submit(person, category, documents, now)
    }

    pub fn ministry_submission(&self, application: ApplicationId) -> Result<MinistrySubmission> {
        let app = self.state.register.application(application)?;
        let person = self.state.directory.person(app.person_id)?;
        Ok(MinistrySubmission::new(app, person))
    }

    pub fn record_forwarding(
        &mut self,
        application: ApplicationId,
        ack: String,
    ) -> Result<RegistryApplication> {
        self.state.register.mark_forwarded(application, ack)
    }

    /// Sends an application that has not been acknowledged yet. Already
    /// acknowledged applications are returned untouched, so a submission
    /// reaches the ministry at most once.
    pub fn forward(
        &mut self,
        application: ApplicationId,
        client: &dyn MinistryClient,
    ) -> Result<RegistryApplication> {
        let app = self.state.register.application(application)?;
        if app.ministry_ack.is_some() {
            return Ok(app.clone());
        }
        let submission = self.ministry_submission(application)?;
        let ack = client.submit(&submission)?;
        self.record_forwarding(application, ack.ack)
    }

    /// Submission plus forwarding. On a transport failure the application
    /// stays stored as submitted but unforwarded and the error is returned.
    pub fn submit_and_forward(
        &mut self,
        person: PersonId,
        category: &str,
        documents: Vec<String>,
        client: &dyn MinistryClient,
    ) -> Result<RegistryApplication> {
        let app = self.submit_registration(person, category, documents)?;
        self.forward(app.application_id, client)
    }

    pub fn record_ministry_decision(
        &mut self,
        application: ApplicationId,
        decision: MinistryDecision,
    ) -> Result<RegistryApplication> {
        let today = self.clock.today();
        self.state
            .register
            .record_decision(application, decision, today)
    }

    /// Asks the ministry for a decision and records it if there is one.
    pub fn poll_ministry(
        &mut self,
        application: ApplicationId,
        client: &dyn MinistryClient,
    ) -> Result<RegistryApplication> {
        self.state.register.application(application)?;
        match client.poll_decision(application)?.into_decision() {
            Some(decision) => self.record_ministry_decision(application, decision),
            None => Ok(self.state.register.application(application)?.clone()),
        }
    }

    // --- bibliography ---

    pub fn map_author(&mut self, person: PersonId, author_id: &str) -> Result<()> {
        self.state.directory.person(person)?;
        self.state.library.map_author(person, author_id)
    }

    pub fn author_of(&self, person: PersonId) -> Result<String> {
        self.state.directory.person(person)?;
        self.state.library.author_of(person).map(str::to_string)
    }

    pub fn apply_sync(
        &mut self,
        person: PersonId,
        remote: Vec<PublicationRecord>,
    ) -> Result<SyncReport> {
        self.state.directory.person(person)?;
        self.state.library.reconcile(person, remote)
    }

    pub fn sync_publications(
        &mut self,
        person: PersonId,
        source: &dyn BibliographySource,
    ) -> Result<SyncReport> {
        let author = self.author_of(person)?;
        let remote = source.fetch(&author)?;
        self.apply_sync(person, remote)
    }

    pub fn list_publications(
        &self,
        person: PersonId,
        type_of_work: Option<&str>,
    ) -> Vec<PublicationRecord> {
        self.state.library.list(person, type_of_work)
    }

    pub fn remove_publication(
        &mut self,
        person: PersonId,
        source_key: &str,
    ) -> Result<PublicationRecord> {
        self.state.library.remove(person, source_key)
    }

    // --- documents ---

    pub fn owner_exists(&self, owner: OwnerRef) -> bool {
        match owner {
            OwnerRef::Procedure(id) => self.state.procedures.get(id).is_ok(),
            OwnerRef::RegistryApplication(id) => self.state.register.application(id).is_ok(),
            OwnerRef::Employee(id) => self.state.directory.employee(id).is_ok(),
        }
    }

    pub fn attach(
        &mut self,
        owner: OwnerRef,
        path: &str,
        declared_format: &str,
        description: &str,
    ) -> Result<AttachedDocument> {
        if !self.owner_exists(owner) {
            return Err(Error::OwnerNotFound(owner));
        }
        let now = self.clock.now();
        self.state
            .vault
            .attach(owner, path, declared_format, description, now)
    }

    pub fn list_attachments(&self, owner: OwnerRef) -> Vec<AttachedDocument> {
        self.state.vault.list(owner)
    }

    pub fn resolve(&self, document: DocumentId) -> Result<ResolvedDocument> {
        self.state.vault.resolve(document)
    }

    pub fn detach(&mut self, document: DocumentId) -> Result<AttachedDocument> {
        self.state.vault.detach(document)
    }

    /// CSV manifest of a procedure's live attachments.
    pub fn procedure_manifest(&self, procedure: ProcedureId) -> Result<String> {
        self.state.procedures.get(procedure)?;
        let mut buf = Vec::new();
        crate::vault::write_manifest(
            &self.list_attachments(OwnerRef::Procedure(procedure)),
            &mut buf,
        )?;
        Ok(String::from_utf8(buf).expect("csv writer emits utf-8"))
    }

    // --- requirements ---

    pub fn add_requirement(
        &mut self,
        text: &str,
        category: &str,
        priority: &str,
    ) -> Result<Requirement> {
        let now = self.clock.now();
        self.state.requirements.add(text, category, priority, now)
    }

    pub fn backlog(&self) -> Vec<Requirement> {
        self.state.requirements.backlog()
    }

    /// Imports `id,category,priority,text` rows with fresh ids.
    pub fn import_requirements(&mut self, csv: &str) -> Result<Vec<Requirement>> {
        let now = self.clock.now();
        // All or nothing: a bad row leaves the ledger untouched.
        let mut staged = self.state.requirements.clone();
        let added = staged.import_csv(csv.as_bytes(), now)?;
        self.state.requirements = staged;
        Ok(added)
    }
}
