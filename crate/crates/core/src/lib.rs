//! Natural-logic NLI dataset synthesis and monotonicity probing.
//!
//! The crate covers the whole offline pipeline:
//!
//! - [`natlog`]: monotonicity, concept relations and their composition into
//!   entailment labels.
//! - [`corpus`]: context templates and insertion pairs.
//! - [`synthesis`]: source-disjoint train/dev/test partitioning and
//!   permutation of pairs through contexts into NLI-XY examples.
//! - [`embedstore`]: the `.embstore` binary format for classification-token
//!   embeddings and model predictions.
//! - [`probing`]: nuclear-norm controlled linear probes, control tasks and
//!   selectivity sweeps.
//! - [`analysis`]: decomposed error grids, accuracy breakdowns and PCA
//!   projections.
//! - [`cli`]: the `nlixy` command line and run manifests.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod embedstore;
pub mod natlog;
pub mod probing;
pub mod synthesis;

use std::path::PathBuf;

use thiserror::Error;

pub use natlog::{compose, flip, ConceptRelation, EntailmentLabel, Monotonicity};

/// Any error surfaced by a pipeline run, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Synthesis(#[from] synthesis::SynthesisError),
    #[error("{source} (store: {})", path.display())]
    Store { path: PathBuf, source: embedstore::StoreError },
    #[error(transparent)]
    Probe(#[from] probing::ProbeError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Module-qualified error code such as `embedstore::CorruptStore`.
    pub fn code(&self) -> String {
        let (module, code) = match self {
            Error::Corpus(e) => ("corpus", e.code()),
            Error::Synthesis(synthesis::SynthesisError::Corpus(e)) => ("corpus", e.code()),
            Error::Synthesis(e) => ("synthesis", e.code()),
            Error::Store { source, .. } => ("embedstore", source.code()),
            Error::Probe(e) => ("probing", e.code()),
            Error::Analysis(e) => ("analysis", e.code()),
            Error::Io { .. } => ("cli", "IoError"),
            Error::Usage(_) => ("cli", "UsageError"),
        };
        format!("{module}::{code}")
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
