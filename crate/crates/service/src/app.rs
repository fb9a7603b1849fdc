use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use hrm_core::bibliography::{BibliographySource, FixtureBibliography};
use hrm_core::ministry::{MinistryClient, StubMinistry};
use hrm_core::taxonomy::{load_seed, SEED_FILE};
use hrm_core::Clock;

use crate::clients::{HttpBibliography, HttpMinistry};
use crate::config::{ExternalMode, ServiceConfig};
use crate::store::{KeyedLocks, Store, StoreError};

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("grade catalog: {0}")]
    Catalog(hrm_core::Error),
    #[error("external endpoint: {0}")]
    External(hrm_core::Error),
}

/// Everything a request handler needs.
pub struct App {
    pub store: Store,
    pub tokens: BTreeMap<String, String>,
    pub ministry: Arc<dyn MinistryClient>,
    pub bibliography: Arc<dyn BibliographySource>,
    pub locks: KeyedLocks,
    pub grades_loaded: usize,
}

impl App {
    pub fn new(
        store: Store,
        tokens: BTreeMap<String, String>,
        ministry: Arc<dyn MinistryClient>,
        bibliography: Arc<dyn BibliographySource>,
    ) -> Self {
        let grades_loaded = load_seed(SEED_FILE).map_or(0, |g| g.len());
        Self {
            store,
            tokens,
            ministry,
            bibliography,
            locks: KeyedLocks::default(),
            grades_loaded,
        }
    }

    pub fn from_config(
        config: &ServiceConfig,
        clock: Arc<dyn Clock>,
    ) -> Result<Self, StartupError> {
        load_seed(SEED_FILE).map_err(StartupError::Catalog)?;
        let store = match &config.store_path {
            Some(path) => Store::open(path, config.policy.clone(), clock)?,
            None => Store::in_memory(config.policy.clone(), clock)?,
        };
        let external = &config.external;
        let (ministry, bibliography): (Arc<dyn MinistryClient>, Arc<dyn BibliographySource>) =
            match external.mode {
                ExternalMode::Stub => {
                    let fixtures = match &external.bibliography_fixtures {
                        Some(dir) => {
                            FixtureBibliography::from_dir(dir).map_err(StartupError::External)?
                        }
                        None => FixtureBibliography::new(),
                    };
                    (Arc::new(StubMinistry::new()), Arc::new(fixtures))
                }
                ExternalMode::Remote => {
                    let timeout = Duration::from_secs(external.timeout_secs);
                    let url = |u: &Option<String>| u.clone().unwrap_or_default();
                    (
                        Arc::new(
                            HttpMinistry::new(&url(&external.ministry_url), timeout)
                                .map_err(StartupError::External)?,
                        ),
                        Arc::new(
                            HttpBibliography::new(&url(&external.bibliography_url), timeout)
                                .map_err(StartupError::External)?,
                        ),
                    )
                }
            };
        Ok(Self::new(
            store,
            config.tokens.clone(),
            ministry,
            bibliography,
        ))
    }

    pub fn actor_for(&self, token: &str) -> Option<&str> {
        self.tokens.get(token).map(String::as_str)
    }
}
