//! Error breakdowns, challenge-set scoring and 2-D projections.

mod eval;
mod grid;
mod projection;

pub use eval::{evaluate, CellScore, Evaluation};
pub use grid::{error_grid, ErrorGrid};
pub use projection::{project_2d, Projection, ProjectionPoint};

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::natlog::EntailmentLabel;
use crate::synthesis::NliXyExample;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("no examples match monotonicity {mon} and relation {rel}")]
    EmptySelection { mon: String, rel: String },
    #[error("{predictions} predictions for {gold} gold examples")]
    LengthMismatch { predictions: usize, gold: usize },
    #[error("no prediction for example {0:?}")]
    MissingPrediction(String),
    #[error("duplicate prediction for example {0:?}")]
    DuplicatePrediction(String),
    #[error("projection needs at least 3 records, found {0}")]
    TooFewRecords(usize),
    #[error("projection needs vectors of dimension at least 2, found {0}")]
    TooFewDimensions(usize),
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::EmptySelection { .. } => "EmptySelection",
            AnalysisError::LengthMismatch { .. } => "LengthMismatch",
            AnalysisError::MissingPrediction(_) => "MissingPrediction",
            AnalysisError::DuplicatePrediction(_) => "DuplicatePrediction",
            AnalysisError::TooFewRecords(_) => "TooFewRecords",
            AnalysisError::TooFewDimensions(_) => "TooFewDimensions",
            AnalysisError::Csv { .. } => "MalformedCsv",
            AnalysisError::Io { .. } => "IoError",
        }
    }
}

/// Model predictions keyed by example id.
pub type Predictions = BTreeMap<String, EntailmentLabel>;

#[derive(Debug, Serialize, Deserialize)]
struct PredictionRow {
    example_id: String,
    predicted_label: EntailmentLabel,
}

/// Reads a predictions CSV with columns `example_id,predicted_label`.
pub fn read_predictions(path: impl AsRef<Path>) -> Result<Predictions, AnalysisError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| AnalysisError::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::Reader::from_reader(file);
    let mut out = Predictions::new();
    for row in reader.deserialize::<PredictionRow>() {
        let row = row.map_err(|source| AnalysisError::Csv { path: path.to_path_buf(), source })?;
        if out.insert(row.example_id.clone(), row.predicted_label).is_some() {
            return Err(AnalysisError::DuplicatePrediction(row.example_id));
        }
    }
    Ok(out)
}

pub fn write_predictions(predictions: &Predictions, path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    let path = path.as_ref();
    let csv_err = |source| AnalysisError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for (id, label) in predictions {
        w.serialize(PredictionRow { example_id: id.clone(), predicted_label: *label }).map_err(csv_err)?;
    }
    w.flush().map_err(|source| AnalysisError::Io { path: path.to_path_buf(), source })
}

/// Predictions for `examples`, in example order.
pub fn aligned_predictions(
    examples: &[NliXyExample],
    predictions: &Predictions,
) -> Result<Vec<EntailmentLabel>, AnalysisError> {
    examples
        .iter()
        .map(|e| {
            predictions
                .get(&e.example_id)
                .copied()
                .ok_or_else(|| AnalysisError::MissingPrediction(e.example_id.clone()))
        })
        .collect()
}
