//! Geometric entanglement of translation-invariant pure states.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod optimize;
pub mod overlap;
pub mod qstate;

pub use error::{Error, Result};
