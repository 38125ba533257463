use std::collections::{BTreeMap, BTreeSet};

use super::{AnalysisError, Predictions};
use crate::natlog::{ConceptRelation, Monotonicity};
use crate::synthesis::NliXyExample;

/// Correctness of each (context, pair) example in a filtered slice of the
/// dataset. `None` marks combinations that do not exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorGrid {
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    pub cells: Vec<Vec<Option<u8>>>,
}

impl ErrorGrid {
    pub fn present(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn correct(&self) -> usize {
        self.cells.iter().flatten().filter(|c| **c == Some(1)).count()
    }

    pub fn cell(&self, context_id: &str, pair_id: &str) -> Option<u8> {
        let r = self.row_ids.iter().position(|id| id == context_id)?;
        let c = self.col_ids.iter().position(|id| id == pair_id)?;
        self.cells[r][c]
    }

    /// Matrix CSV: a `context_id` header followed by pair ids, one row per
    /// context, `1` correct, `0` incorrect, empty when absent.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("context_id");
        for c in &self.col_ids {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for (id, row) in self.row_ids.iter().zip(&self.cells) {
            s.push_str(id);
            for cell in row {
                s.push(',');
                if let Some(v) = cell {
                    s.push_str(&v.to_string());
                }
            }
            s.push('\n');
        }
        s
    }
}

pub fn error_grid(
    examples: &[NliXyExample],
    predictions: &Predictions,
    mon: Monotonicity,
    rel: ConceptRelation,
) -> Result<ErrorGrid, AnalysisError> {
    let mut hits: BTreeMap<(&str, &str), u8> = BTreeMap::new();
    for ex in examples.iter().filter(|e| e.monotonicity == mon && e.relation == rel) {
        let pred =
            predictions.get(&ex.example_id).ok_or_else(|| AnalysisError::MissingPrediction(ex.example_id.clone()))?;
        hits.insert((ex.context_id.as_str(), ex.pair_id.as_str()), u8::from(*pred == ex.gold_label));
    }
    if hits.is_empty() {
        return Err(AnalysisError::EmptySelection { mon: mon.to_string(), rel: rel.to_string() });
    }
    let rows: BTreeSet<&str> = hits.keys().map(|k| k.0).collect();
    let cols: BTreeSet<&str> = hits.keys().map(|k| k.1).collect();
    let cells = rows.iter().map(|r| cols.iter().map(|c| hits.get(&(*r, *c)).copied()).collect()).collect();
    Ok(ErrorGrid {
        row_ids: rows.into_iter().map(String::from).collect(),
        col_ids: cols.into_iter().map(String::from).collect(),
        cells,
    })
}
