use std::collections::BTreeMap;

use serde::Serialize;

use super::AnalysisError;
use crate::natlog::{ConceptRelation, EntailmentLabel, Monotonicity};
use crate::synthesis::NliXyExample;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CellScore {
    pub correct: usize,
    pub total: usize,
}

impl CellScore {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evaluation {
    pub overall: CellScore,
    pub breakdown: BTreeMap<(Monotonicity, ConceptRelation), CellScore>,
}

impl Evaluation {
    pub fn accuracy(&self) -> f64 {
        self.overall.accuracy()
    }

    /// Human-readable summary, one line per (monotonicity, relation) cell.
    pub fn summary(&self) -> String {
        let mut s =
            format!("accuracy {:.2}% ({}/{})\n", 100.0 * self.accuracy(), self.overall.correct, self.overall.total);
        for ((mon, rel), score) in &self.breakdown {
            s.push_str(&format!(
                "  {mon:<4} {rel:<4} {:>7.2}% ({}/{})\n",
                100.0 * score.accuracy(),
                score.correct,
                score.total
            ));
        }
        s
    }
}

/// Scores `predictions` against aligned `gold` examples.
pub fn evaluate(predictions: &[EntailmentLabel], gold: &[NliXyExample]) -> Result<Evaluation, AnalysisError> {
    if predictions.len() != gold.len() {
        return Err(AnalysisError::LengthMismatch { predictions: predictions.len(), gold: gold.len() });
    }
    let mut eval = Evaluation::default();
    for (pred, ex) in predictions.iter().zip(gold) {
        let hit = usize::from(*pred == ex.gold_label);
        let cell = eval.breakdown.entry((ex.monotonicity, ex.relation)).or_default();
        cell.correct += hit;
        cell.total += 1;
        eval.overall.correct += hit;
        eval.overall.total += 1;
    }
    Ok(eval)
}
