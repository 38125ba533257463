//! Sweeps nuclear-norm penalties over a synthetic store in which context
//! monotonicity is planted in two coordinates, and prints the report.

use nlixy::embedstore::{align, EmbeddingRecord, EmbeddingStore};
use nlixy::probing::{run_sweep, SweepConfig, TaskKind};
use nlixy::synthesis::{NliXyExample, Split};
use nlixy::{compose, ConceptRelation, EntailmentLabel, Monotonicity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn examples(per_split: usize) -> Vec<NliXyExample> {
    let rels = [ConceptRelation::ForwardInclusion, ConceptRelation::ReverseInclusion, ConceptRelation::NoRelation];
    let mut out = Vec::new();
    for split in [Split::Train, Split::Test] {
        for i in 0..per_split {
            let (ctx, pair) = (format!("{split}-c{}", i % 40), format!("{split}-p{}", i % 30));
            let mon = if i % 40 % 2 == 0 { Monotonicity::Up } else { Monotonicity::Down };
            let rel = rels[i % 30 % 3];
            out.push(NliXyExample {
                example_id: format!("{ctx}:{pair}:{i}"),
                context_id: ctx,
                pair_id: pair,
                premise: String::new(),
                hypothesis: String::new(),
                monotonicity: mon,
                relation: rel,
                gold_label: compose(mon, rel),
                split,
            });
        }
    }
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let examples = examples(500);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(0.0f32, 0.5)?;
    let records = examples
        .iter()
        .map(|e| {
            let mut v: Vec<f32> = (0..32).map(|_| noise.sample(&mut rng)).collect();
            let shift = if e.monotonicity == Monotonicity::Up { 1.0 } else { -1.0 };
            v[3] += shift;
            v[17] += shift;
            EmbeddingRecord {
                example_id: e.example_id.clone(),
                vector: v,
                predicted_label: EntailmentLabel::Entailment,
            }
        })
        .collect();
    let store = EmbeddingStore::new("planted", 32, records)?;
    let aligned = align(&store, &examples)?;

    let config = SweepConfig { n_probes: 12, ..SweepConfig::default() };
    for kind in [TaskKind::ContextMonotonicity, TaskKind::LexicalRelation] {
        let report = run_sweep(&aligned, kind, &config, 0)?;
        println!("== {kind}");
        print!("{}", report.to_csv());
    }
    Ok(())
}
