//! Consistency checking of UI design artifacts against BDD stories.
//!
//! Stories written with the shared behavior vocabulary are matched against
//! three kinds of artifacts: scenarios extracted from task models, wireframe
//! GUI prototypes, and final GUIs represented as static HTML documents.
//! Every step receives a verdict, failures are classified, and results are
//! aggregated into console logs and JSON reports.

pub mod cli;
pub mod guicheck;
pub mod ontology;
pub mod protocheck;
pub mod report;
pub mod story;
pub mod taskcheck;
pub mod text;

use thiserror::Error;

/// Execution strategy: stop a scenario at its first failure, or assess
/// every step regardless.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    #[default]
    FailFast,
    Continue,
}

/// Top-level error type uniting the per-module failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Story(#[from] story::StoryError),
    #[error(transparent)]
    Catalog(#[from] ontology::CatalogError),
    #[error(transparent)]
    Match(#[from] ontology::MatchError),
    #[error(transparent)]
    TaskModel(#[from] taskcheck::TaskModelError),
    #[error(transparent)]
    Prototype(#[from] protocheck::PrototypeError),
    #[error(transparent)]
    PageMap(#[from] guicheck::ConfigError),
    #[error("{0}")]
    Config(String),
}
