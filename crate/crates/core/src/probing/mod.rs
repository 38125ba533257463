//! Complexity-controlled linear probing with control tasks.
//!
//! Probes are softmax-linear classifiers whose complexity is the nuclear
//! norm of their weight matrix. A sweep trains probes across a log-spaced
//! grid of nuclear-norm penalties; at each point a second probe with the
//! same penalty is trained on control labels, and selectivity is task
//! accuracy minus control accuracy on the test split.

mod control;
mod nuclear;
mod sweep;
mod train;

pub use control::make_control_labels;
pub use nuclear::{nuclear_norm, singular_value_threshold, singular_values};
pub use sweep::{penalty_grid, run_sweep, run_sweep_on, ProbeResult, SweepConfig, SweepReport};
pub use train::{predict, train_probe, Probe, ProbeData, Standardizer, TrainConfig};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::natlog::{ConceptRelation, Monotonicity};
use crate::synthesis::{NliXyExample, Split};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("probe training needs at least two classes, found {classes}")]
    DegenerateData { classes: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{features} feature rows but {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("non-finite value in input")]
    NonFiniteInput,
    #[error("no aligned examples in the {0} split")]
    EmptySplit(Split),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl ProbeError {
    pub fn code(&self) -> &'static str {
        match self {
            ProbeError::DegenerateData { .. } => "DegenerateData",
            ProbeError::DimensionMismatch { .. } => "DimensionMismatch",
            ProbeError::LengthMismatch { .. } => "LengthMismatch",
            ProbeError::NonFiniteInput => "NonFiniteInput",
            ProbeError::EmptySplit(_) => "EmptySplit",
            ProbeError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    ContextMonotonicity,
    LexicalRelation,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::ContextMonotonicity => "monotonicity",
            TaskKind::LexicalRelation => "relation",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = ProbeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monotonicity" => Ok(TaskKind::ContextMonotonicity),
            "relation" => Ok(TaskKind::LexicalRelation),
            other => Err(ProbeError::InvalidConfig(format!("unknown task {other:?}"))),
        }
    }
}

/// A probing target and its ordered label space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTask {
    pub kind: TaskKind,
    pub label_space: Vec<String>,
}

impl ProbeTask {
    /// Monotonicity always uses `[up, down]`; the relation task uses the
    /// relations that occur in `examples`, in declaration order.
    pub fn new(kind: TaskKind, examples: &[NliXyExample]) -> Self {
        let label_space = match kind {
            TaskKind::ContextMonotonicity => Monotonicity::ALL.iter().map(|m| m.to_string()).collect(),
            TaskKind::LexicalRelation => ConceptRelation::ALL
                .iter()
                .filter(|r| examples.iter().any(|e| e.relation == **r))
                .map(|r| r.to_string())
                .collect(),
        };
        ProbeTask { kind, label_space }
    }

    pub fn num_classes(&self) -> usize {
        self.label_space.len()
    }

    /// Gold class index of `example` for this task.
    pub fn label_of(&self, example: &NliXyExample) -> Option<usize> {
        let name = match self.kind {
            TaskKind::ContextMonotonicity => example.monotonicity.as_str(),
            TaskKind::LexicalRelation => example.relation.as_str(),
        };
        self.label_space.iter().position(|l| l == name)
    }
}
