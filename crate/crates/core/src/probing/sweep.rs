use nalgebra::DMatrix;
use rayon::prelude::*;

use super::control::make_control_labels;
use super::train::{train_probe, ProbeData, Standardizer, TrainConfig};
use super::{ProbeError, ProbeTask, TaskKind};
use crate::embedstore::Aligned;
use crate::synthesis::Split;

/// Salt mixed into the sweep seed for control-label generation.
const CONTROL_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_probes: usize,
    pub penalty_min: f64,
    pub penalty_max: f64,
    pub train: TrainConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { n_probes: 50, penalty_min: 1e-4, penalty_max: 1e2, train: TrainConfig::default() }
    }
}

/// `n` penalty weights, log-spaced from `min` to `max` inclusive.
pub fn penalty_grid(n: usize, min: f64, max: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let (lo, hi) = (min.log10(), max.log10());
            (0..n).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub penalty_weight: f64,
    pub nuclear_norm: f64,
    pub task_accuracy: f64,
    pub control_accuracy: f64,
    pub selectivity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub results: Vec<ProbeResult>,
    /// Index into `results` of the most selective probe.
    pub best_index: usize,
    pub accuracy_at_max_selectivity: f64,
}

impl SweepReport {
    /// Picks the result with maximal selectivity; ties go to the probe with
    /// the smaller nuclear norm.
    pub fn from_results(results: Vec<ProbeResult>) -> Self {
        let mut best = 0;
        for (i, r) in results.iter().enumerate().skip(1) {
            let b = &results[best];
            if r.selectivity > b.selectivity || (r.selectivity == b.selectivity && r.nuclear_norm < b.nuclear_norm) {
                best = i;
            }
        }
        let accuracy_at_max_selectivity = results.get(best).map_or(0.0, |r| r.task_accuracy);
        SweepReport { results, best_index: best, accuracy_at_max_selectivity }
    }

    pub fn best(&self) -> Option<&ProbeResult> {
        self.results.get(self.best_index)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("penalty_weight,nuclear_norm,task_accuracy,control_accuracy,selectivity\n");
        for r in &self.results {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.penalty_weight, r.nuclear_norm, r.task_accuracy, r.control_accuracy, r.selectivity
            ));
        }
        s.push_str(&format!("accuracy_at_max_selectivity,{}\n", self.accuracy_at_max_selectivity));
        s
    }
}

/// Sweeps over prepared data. `train_control` and `test_control` hold the
/// same feature rows as `train` and `test` with control labels.
pub fn run_sweep_on(
    train: &ProbeData,
    test: &ProbeData,
    train_control: &ProbeData,
    test_control: &ProbeData,
    config: &SweepConfig,
    seed: u64,
) -> Result<SweepReport, ProbeError> {
    if config.n_probes == 0 {
        return Err(ProbeError::InvalidConfig("n_probes must be at least 1".into()));
    }
    if !(config.penalty_min > 0.0 && config.penalty_max >= config.penalty_min) {
        return Err(ProbeError::InvalidConfig(format!(
            "penalty range [{}, {}] must be positive and ordered",
            config.penalty_min, config.penalty_max
        )));
    }
    if train.dimension() != test.dimension() {
        return Err(ProbeError::DimensionMismatch { expected: train.dimension(), found: test.dimension() });
    }
    let grid = penalty_grid(config.n_probes, config.penalty_min, config.penalty_max);
    let results = grid
        .par_iter()
        .map(|&penalty| {
            let task_probe = train_probe(train, penalty, &config.train, seed)?;
            let control_probe = train_probe(train_control, penalty, &config.train, seed)?;
            let task_accuracy = task_probe.accuracy(test)?;
            let control_accuracy = control_probe.accuracy(test_control)?;
            Ok(ProbeResult {
                penalty_weight: penalty,
                nuclear_norm: task_probe.nuclear_norm(),
                task_accuracy,
                control_accuracy,
                selectivity: task_accuracy - control_accuracy,
            })
        })
        .collect::<Result<Vec<_>, ProbeError>>()?;
    Ok(SweepReport::from_results(results))
}

fn to_matrix(rows: &[&[f32]], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j] as f64)
}

/// Vectors, task labels and control labels of one partition.
type Part<'a> = (Vec<&'a [f32]>, Vec<usize>, Vec<usize>);

/// Trains on the aligned Train split and evaluates on the Test split.
/// Inputs are standardized with Train statistics.
pub fn run_sweep(
    aligned: &Aligned,
    kind: TaskKind,
    config: &SweepConfig,
    seed: u64,
) -> Result<SweepReport, ProbeError> {
    let examples: Vec<_> = aligned.rows.iter().map(|(e, _)| e.clone()).collect();
    let task = ProbeTask::new(kind, &examples);
    let control = make_control_labels(&task, &examples, seed ^ CONTROL_SEED_SALT);
    let dim = aligned.dimension;

    let mut parts: [Part; 2] = Default::default();
    for (((ex, rec), ctrl), gold) in aligned.rows.iter().zip(&control).zip(&examples) {
        let slot = match ex.split {
            Split::Train => 0,
            Split::Test => 1,
            Split::Dev => continue,
        };
        if rec.vector.len() != dim {
            return Err(ProbeError::DimensionMismatch { expected: dim, found: rec.vector.len() });
        }
        let label = task.label_of(gold).expect("label space covers every example");
        parts[slot].0.push(&rec.vector);
        parts[slot].1.push(label);
        parts[slot].2.push(*ctrl);
    }
    let [(train_rows, train_labels, train_ctrl), (test_rows, test_labels, test_ctrl)] = parts;
    if train_rows.is_empty() {
        return Err(ProbeError::EmptySplit(Split::Train));
    }
    if test_rows.is_empty() {
        return Err(ProbeError::EmptySplit(Split::Test));
    }

    let train_x = to_matrix(&train_rows, dim);
    let scaler = Standardizer::fit(&train_x);
    let train_x = scaler.apply(&train_x)?;
    let test_x = scaler.apply(&to_matrix(&test_rows, dim))?;

    let k = task.num_classes();
    let train = ProbeData::new(train_x, train_labels, k)?;
    let test = ProbeData::new(test_x, test_labels, k)?;
    let train_control = train.relabel(train_ctrl, k)?;
    let test_control = test.relabel(test_ctrl, k)?;
    run_sweep_on(&train, &test, &train_control, &test_control, config, seed)
}
