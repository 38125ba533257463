//! Projects a two-cluster store onto its top principal components and
//! prints the mean position of each monotonicity class.

use nlixy::analysis::project_2d;
use nlixy::embedstore::{align, EmbeddingRecord, EmbeddingStore};
use nlixy::synthesis::{NliXyExample, Split};
use nlixy::{compose, ConceptRelation, EntailmentLabel, Monotonicity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut examples = Vec::new();
    let mut records = Vec::new();
    for i in 0..200 {
        let mon = if i % 2 == 0 { Monotonicity::Up } else { Monotonicity::Down };
        let rel = ConceptRelation::ALL[i % 4];
        let (ctx, pair) = (format!("c{}", i % 20), format!("p{}", i / 20));
        let id = format!("{ctx}:{pair}");
        let centre = if mon == Monotonicity::Up { 1.5 } else { -1.5 };
        let vector = (0..16).map(|j| rng.random_range(-0.5..0.5) + if j < 4 { centre } else { 0.0 }).collect();
        records.push(EmbeddingRecord {
            example_id: id.clone(),
            vector,
            predicted_label: EntailmentLabel::NonEntailment,
        });
        examples.push(NliXyExample {
            example_id: id,
            context_id: ctx,
            pair_id: pair,
            premise: String::new(),
            hypothesis: String::new(),
            monotonicity: mon,
            relation: rel,
            gold_label: compose(mon, rel),
            split: Split::Test,
        });
    }
    let store = EmbeddingStore::new("clusters", 16, records)?;
    let proj = project_2d(&align(&store, &examples)?)?;

    let share = (proj.component_variance[0] + proj.component_variance[1]) / proj.total_variance;
    println!("{} points, {:.1}% of variance in two components", proj.points.len(), 100.0 * share);
    for mon in Monotonicity::ALL {
        let pts: Vec<_> = proj.points.iter().filter(|p| p.monotonicity == mon).collect();
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.x).sum::<f64>() / n, pts.iter().map(|p| p.y).sum::<f64>() / n);
        println!("{:<5} centroid ({mx:+.3}, {my:+.3})", mon.as_str());
    }
    print!("{}", proj.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
