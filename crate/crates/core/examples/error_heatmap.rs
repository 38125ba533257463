//! Scores a predictor that ignores monotonicity and draws its error grids
//! as text: `#` correct, `.` incorrect, blank where no example exists.

use std::path::PathBuf;

use nlixy::analysis::{error_grid, evaluate, Predictions};
use nlixy::corpus::{read_contexts, read_pairs};
use nlixy::synthesis::{generate, SplitRatios};
use nlixy::{compose, ConceptRelation, Monotonicity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let contexts = read_contexts(fixtures.join("contexts.jsonl"))?;
    let pairs = read_pairs(fixtures.join("pairs.jsonl"))?;
    let examples = generate(&contexts, &pairs, &SplitRatios::default(), 0)?;

    let labels: Vec<_> = examples.iter().map(|e| compose(Monotonicity::Up, e.relation)).collect();
    let preds: Predictions = examples.iter().zip(&labels).map(|(e, l)| (e.example_id.clone(), *l)).collect();
    print!("{}", evaluate(&labels, &examples)?.summary());

    for (mon, rel) in [
        (Monotonicity::Up, ConceptRelation::ForwardInclusion),
        (Monotonicity::Down, ConceptRelation::ForwardInclusion),
        (Monotonicity::Down, ConceptRelation::ReverseInclusion),
    ] {
        let grid = error_grid(&examples, &preds, mon, rel)?;
        println!("\n{mon}/{rel}: {}/{} correct", grid.correct(), grid.present());
        println!("      {}", grid.col_ids.join(" "));
        for (row, cells) in grid.row_ids.iter().zip(&grid.cells) {
            let marks: Vec<String> = cells
                .iter()
                .zip(&grid.col_ids)
                .map(|(c, id)| {
                    let m = match c {
                        Some(1) => "#",
                        Some(_) => ".",
                        None => " ",
                    };
                    format!("{m:^w$}", w = id.len())
                })
                .collect();
            println!("{row:<5} {}", marks.join(" "));
        }
    }
    Ok(())
}
