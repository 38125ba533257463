//! Builds the fixture dataset, prints its statistics and exports it.
//!
//! cargo run --example synthesize_dataset -- [out_dir] [seed]

use std::path::PathBuf;

use nlixy::corpus::{read_contexts, read_pairs};
use nlixy::synthesis::{export, generate, statistics, SplitRatios};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("nlixy-dataset"));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);

    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let contexts = read_contexts(fixtures.join("contexts.jsonl"))?;
    let pairs = read_pairs(fixtures.join("pairs.jsonl"))?;
    let examples = generate(&contexts, &pairs, &SplitRatios::default(), seed)?;

    for ex in examples.iter().take(4) {
        println!("[{}] {} => {} : {}", ex.split, ex.premise, ex.hypothesis, ex.gold_label);
    }
    print!("{}", statistics(&examples).to_csv());
    for path in export(&examples, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
