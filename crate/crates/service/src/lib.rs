//! HTTP service, persistence and administration for the academic HR store.

pub mod api;
pub mod app;
pub mod cli;
pub mod clients;
pub mod config;
pub mod error;
pub mod import;
pub mod seed;
pub mod server;
pub mod store;
pub mod stubs;

pub use app::App;
pub use config::ServiceConfig;
