//! Administrative commands. Everything except `replay` talks to a running
//! service over its HTTP API, like any other client.

use std::path::Path;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use chrono::NaiveDate;
use hrm_core::workflow::{parse_log, replay as replay_log};
use hrm_core::Policy;
use ureq::Agent;

use crate::error::ErrorBody;
use crate::import::ImportReport;
use crate::seed::SeedSummary;

pub struct Remote {
    agent: Agent,
    base: String,
    token: String,
}

impl Remote {
    pub fn new(base: &str, token: &str) -> Self {
        let agent = Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            agent,
            base: base.trim_end_matches('/').to_string(),
            token: token.to_string(),
        }
    }

    fn finish(
        &self,
        what: &str,
        response: Result<ureq::http::Response<ureq::Body>, ureq::Error>,
    ) -> anyhow::Result<String> {
        let mut response =
            response.with_context(|| format!("cannot reach the service at {}", self.base))?;
        let status = response.status();
        let body = response
            .body_mut()
            .read_to_string()
            .context("unreadable response")?;
        if status.is_success() {
            return Ok(body);
        }
        match serde_json::from_str::<ErrorBody>(&body) {
            Ok(err) => Err(anyhow!("{what}: {status} {}: {}", err.error, err.message)),
            Err(_) => Err(anyhow!("{what}: {status} {body}")),
        }
    }

    pub fn get(&self, path: &str) -> anyhow::Result<String> {
        let request = self
            .agent
            .get(format!("{}{path}", self.base))
            .header("Authorization", format!("Bearer {}", self.token));
        self.finish(&format!("GET {path}"), request.call())
    }

    pub fn post(&self, path: &str, content_type: &str, body: &[u8]) -> anyhow::Result<String> {
        let request = self
            .agent
            .post(format!("{}{path}", self.base))
            .header("Authorization", format!("Bearer {}", self.token))
            .header("Content-Type", content_type);
        self.finish(&format!("POST {path}"), request.send(body))
    }
}

fn read(file: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))
}

pub fn import_employees(remote: &Remote, file: &Path) -> anyhow::Result<ImportReport> {
    let csv = read(file)?;
    let body = remote.post("/employees/import", "text/csv", csv.as_bytes())?;
    serde_json::from_str(&body).context("unexpected import report")
}

pub fn render_import(report: &ImportReport) -> String {
    let mut out = format!(
        "created {}, skipped {}, errors {}\n",
        report.created,
        report.skipped.len(),
        report.errors.len()
    );
    for issue in &report.skipped {
        out.push_str(&format!("line {}: skipped: {}\n", issue.line, issue.reason));
    }
    for issue in &report.errors {
        out.push_str(&format!("line {}: error: {}\n", issue.line, issue.reason));
    }
    out
}

pub fn expiry_review(remote: &Remote, as_of: Option<NaiveDate>) -> anyhow::Result<String> {
    let query = as_of.map_or(String::new(), |d| format!("&as_of={d}"));
    remote.get(&format!("/expiry-review?format=csv{query}"))
}

pub fn backlog(remote: &Remote, import: Option<&Path>) -> anyhow::Result<String> {
    if let Some(file) = import {
        remote.post("/requirements/import", "text/csv", read(file)?.as_bytes())?;
    }
    remote.get("/requirements/backlog?format=text")
}

pub fn export_procedure(remote: &Remote, id: u64) -> anyhow::Result<String> {
    remote.get(&format!("/procedures/{id}/log"))
}

pub fn seed_demo(remote: &Remote) -> anyhow::Result<SeedSummary> {
    let body = remote.post("/admin/seed-demo", "application/json", b"")?;
    serde_json::from_str(&body).context("unexpected seed summary")
}

/// Replays an exported event log offline and reports the state it reaches.
pub fn replay(file: &Path, policy: &Policy) -> anyhow::Result<String> {
    let events = parse_log(&read(file)?)?;
    if events.is_empty() {
        bail!("{} contains no events", file.display());
    }
    let state = replay_log(&events, policy)?;
    Ok(format!(
        "{} events replayed, final state {state}\n",
        events.len()
    ))
}
