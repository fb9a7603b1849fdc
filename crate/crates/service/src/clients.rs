//! HTTP clients for the ministry registry and the bibliography archive.
//!
//! Connection failures, timeouts and 5xx answers are transport errors and
//! leave local state alone. Anything that arrives but does not parse, and
//! any unexpected 4xx, is a protocol error. Connections are never pooled,
//! so a request is never silently resent on a stale socket.

use std::time::Duration;

use hrm_core::bibliography::{AuthorRecords, BibliographySource, PublicationRecord};
use hrm_core::ministry::{Acknowledgment, DecisionPoll, MinistryClient, MinistrySubmission};
use hrm_core::{ApplicationId, Error, Result};
use serde::de::DeserializeOwned;
use ureq::http::Response;
use ureq::{Agent, Body};
use url::Url;

fn agent(timeout: Duration) -> Agent {
    Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .max_idle_connections(0)
        .max_idle_connections_per_host(0)
        .build()
        .into()
}

fn base_url(raw: &str) -> Result<Url> {
    let mut url =
        Url::parse(raw).map_err(|e| Error::Validation(format!("endpoint {raw:?}: {e}")))?;
    if url.cannot_be_a_base() {
        return Err(Error::Validation(format!(
            "endpoint {raw:?} cannot be a base url"
        )));
    }
    if !url.path().ends_with('/') {
        let path = format!("{}/", url.path());
        url.set_path(&path);
    }
    Ok(url)
}

fn endpoint(base: &Url, segments: &[&str]) -> String {
    let mut url = base.clone();
    url.path_segments_mut()
        .expect("checked base url")
        .pop_if_empty()
        .extend(segments);
    url.into()
}

fn transport(service: &str, e: ureq::Error) -> Error {
    Error::Transport(format!("{service}: {e}"))
}

fn decode<T: DeserializeOwned>(
    service: &str,
    response: std::result::Result<Response<Body>, ureq::Error>,
) -> Result<T> {
    let mut response = response.map_err(|e| transport(service, e))?;
    let status = response.status();
    let text = response
        .body_mut()
        .read_to_string()
        .map_err(|e| transport(service, e))?;
    if status.is_server_error() {
        return Err(Error::Transport(format!("{service} answered {status}")));
    }
    if !status.is_success() {
        return Err(Error::Protocol(format!(
            "{service} answered {status}: {text}"
        )));
    }
    serde_json::from_str(&text)
        .map_err(|e| Error::Protocol(format!("{service} sent an unreadable body: {e}")))
}

pub struct HttpMinistry {
    agent: Agent,
    base: Url,
}

impl HttpMinistry {
    pub fn new(base: &str, timeout: Duration) -> Result<Self> {
        Ok(Self {
            agent: agent(timeout),
            base: base_url(base)?,
        })
    }
}

impl MinistryClient for HttpMinistry {
    fn submit(&self, submission: &MinistrySubmission) -> Result<Acknowledgment> {
        let url = endpoint(&self.base, &["applications"]);
        let ack: Acknowledgment = decode("ministry", self.agent.post(&url).send_json(submission))?;
        if ack.ack.is_empty() {
            return Err(Error::Protocol(
                "ministry sent an empty acknowledgment".into(),
            ));
        }
        Ok(ack)
    }

    fn poll_decision(&self, application: ApplicationId) -> Result<DecisionPoll> {
        let url = endpoint(
            &self.base,
            &["applications", &application.0.to_string(), "decision"],
        );
        decode("ministry", self.agent.get(&url).call())
    }
}

pub struct HttpBibliography {
    agent: Agent,
    base: Url,
}

impl HttpBibliography {
    pub fn new(base: &str, timeout: Duration) -> Result<Self> {
        Ok(Self {
            agent: agent(timeout),
            base: base_url(base)?,
        })
    }
}

impl BibliographySource for HttpBibliography {
    fn fetch(&self, author_id: &str) -> Result<Vec<PublicationRecord>> {
        let url = endpoint(&self.base, &["authors", author_id, "records"]);
        let body: AuthorRecords = decode("bibliography", self.agent.get(&url).call())?;
        if body.author_id != author_id {
            return Err(Error::Protocol(format!(
                "asked for author {author_id}, got {}",
                body.author_id
            )));
        }
        Ok(body.records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_joined_and_escaped() {
        let base = base_url("http://h:1/api").unwrap();
        assert_eq!(
            endpoint(&base, &["authors", "a b/c", "records"]),
            "http://h:1/api/authors/a%20b%2Fc/records"
        );
        let base = base_url("http://h:1/").unwrap();
        assert_eq!(
            endpoint(&base, &["applications"]),
            "http://h:1/applications"
        );
        assert!(base_url("not a url").is_err());
    }

    #[test]
    fn unreachable_endpoint_is_a_transport_error() {
        let port = std::net::TcpListener::bind("127.0.0.1:0")
            .unwrap()
            .local_addr()
            .unwrap()
            .port();
        let client =
            HttpBibliography::new(&format!("http://127.0.0.1:{port}"), Duration::from_secs(2))
                .unwrap();
        assert!(matches!(client.fetch("A-1"), Err(Error::Transport(_))));
    }
}
