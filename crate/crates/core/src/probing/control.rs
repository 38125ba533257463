//! Control tasks: balanced random relabellings of the probing targets.
//!
//! Monotonicity controls are drawn per example. Relation controls are
//! drawn per distinct insertion pair, so every example built from the same
//! pair shares its control label whatever the context.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ProbeTask, TaskKind};
use crate::synthesis::NliXyExample;

/// `n` labels cycling through `k` classes, then shuffled; every class count
/// is within one of every other.
fn balanced(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|i| i % k.max(1)).collect();
    for i in (1..labels.len()).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        labels.swap(i, j);
    }
    labels
}

/// One control class index per example, in the order of `examples`.
pub fn make_control_labels(task: &ProbeTask, examples: &[NliXyExample], seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = task.num_classes();
    match task.kind {
        TaskKind::ContextMonotonicity => balanced(examples.len(), k, &mut rng),
        TaskKind::LexicalRelation => {
            let pair_ids: Vec<&str> = {
                let mut ids: Vec<&str> = examples.iter().map(|e| e.pair_id.as_str()).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            };
            let per_pair: BTreeMap<&str, usize> =
                pair_ids.iter().copied().zip(balanced(pair_ids.len(), k, &mut rng)).collect();
            examples.iter().map(|e| per_pair[e.pair_id.as_str()]).collect()
        }
    }
}
