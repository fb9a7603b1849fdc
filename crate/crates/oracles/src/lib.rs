//! Brute-force reference implementations used as test oracles.
//!
//! Nothing here depends on `hrm-core`. Dates are plain `(year, month, day)`
//! triples, workflow states and events are plain strings, so the oracles
//! can be compared against the production code without sharing any of its
//! logic.

pub mod calendar;
pub mod sort;
pub mod transitions;
