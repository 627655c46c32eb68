//! Experiment runner behind the `holonorm` binary.
//!
//! A run reads an [`ExperimentConfig`], dispatches to the library and
//! returns a [`Report`]. The `results` block of a report depends only on the
//! config, so it can be compared byte for byte against golden files.

pub mod config;
pub mod plot;
pub mod report;
pub mod run;

pub use config::{DomainConfig, ExperimentConfig, Task};
pub use plot::{emit_plot, PlotKind};
pub use report::Report;
pub use run::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{task}: {source}")]
    Task {
        task: &'static str,
        #[source]
        source: holonorm::Error,
    },
    #[error("plot {kind}: report has no {what}")]
    MissingData { kind: &'static str, what: &'static str },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// Process exit code: 2 for config problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
