use std::collections::BTreeSet;
use std::path::PathBuf;

use nlixy::corpus::{read_contexts, read_pairs, Context, InsertionPair};
use nlixy::synthesis::*;
use nlixy::{compose, EntailmentLabel};

fn fixtures() -> (Vec<Context>, Vec<InsertionPair>) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    (read_contexts(dir.join("contexts.jsonl")).unwrap(), read_pairs(dir.join("pairs.jsonl")).unwrap())
}

#[test]
fn fixture_dataset_is_consistent_across_seeds() {
    let (contexts, pairs) = fixtures();
    for seed in 0..20 {
        let examples = generate(&contexts, &pairs, &SplitRatios::default(), seed).unwrap();
        assert!(!examples.is_empty());
        let ids: BTreeSet<_> = examples.iter().map(|e| &e.example_id).collect();
        assert_eq!(ids.len(), examples.len());
        for e in &examples {
            assert_eq!(e.gold_label, compose(e.monotonicity, e.relation));
            assert!(!e.premise.contains(" x ") && e.premise != e.hypothesis);
        }
        let train_ctx: BTreeSet<_> =
            examples.iter().filter(|e| e.split == Split::Train).map(|e| &e.context_id).collect();
        let test_ctx: BTreeSet<_> = examples.iter().filter(|e| e.split == Split::Test).map(|e| &e.context_id).collect();
        assert!(train_ctx.is_disjoint(&test_ctx));
    }
}

#[test]
fn different_seeds_give_different_partitions() {
    let (contexts, pairs) = fixtures();
    let a = split_sources(&contexts, &pairs, &SplitRatios::default(), 1).unwrap();
    let b = split_sources(&contexts, &pairs, &SplitRatios::default(), 2).unwrap();
    assert_ne!(a.contexts, b.contexts);
}

#[test]
fn export_round_trips_and_is_deterministic() {
    let (contexts, pairs) = fixtures();
    let examples = generate(&contexts, &pairs, &SplitRatios::default(), 9).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = export(&examples, a.path()).unwrap();
    let fb = export(&examples, b.path()).unwrap();
    assert_eq!(fa.len(), 5);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let mut back = read_dataset(a.path()).unwrap();
    back.sort_by(|x, y| x.example_id.cmp(&y.example_id));
    let mut want = examples.clone();
    want.sort_by(|x, y| x.example_id.cmp(&y.example_id));
    assert_eq!(back, want);

    let stats = std::fs::read_to_string(a.path().join(STATS_FILE)).unwrap();
    assert!(stats.starts_with("partition,relation,up,down,total\n"));
    let tsv = std::fs::read_to_string(a.path().join(TSV_FILE)).unwrap();
    assert_eq!(tsv.lines().count(), examples.len() + 1);
}

#[test]
fn four_examples_fill_two_split_files() {
    let (contexts, pairs) = fixtures();
    let ex = |c: usize, p: usize, split| build_example(&contexts[c], &pairs[p], split).unwrap();
    // c01 (down) and c02 (up) accept plural and mass nouns; p01 and p03 are sub pairs
    let examples = vec![ex(0, 0, Split::Train), ex(1, 0, Split::Train), ex(0, 2, Split::Test), ex(1, 2, Split::Test)];
    assert_eq!(examples[0].gold_label, EntailmentLabel::NonEntailment);
    assert_eq!(examples[1].gold_label, EntailmentLabel::Entailment);
    let dir = tempfile::tempdir().unwrap();
    export(&examples, dir.path()).unwrap();
    let sizes: Vec<u64> =
        Split::ALL.iter().map(|s| std::fs::metadata(dir.path().join(split_file(*s))).unwrap().len()).collect();
    assert_eq!(sizes.iter().filter(|n| **n > 0).count(), 2);
    assert_eq!(sizes[1], 0);
}

#[test]
fn unwritable_destination_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    std::fs::write(&file, "not a directory").unwrap();
    let (contexts, pairs) = fixtures();
    let examples = generate(&contexts, &pairs, &SplitRatios::default(), 0).unwrap();
    let err = export(&examples, file.join("out")).unwrap_err();
    assert_eq!(err.code(), "IoError");
}

#[test]
fn too_few_sources_are_rejected() {
    let (contexts, pairs) = fixtures();
    let err = generate(&contexts[..2], &pairs, &SplitRatios::default(), 0).unwrap_err();
    assert_eq!(err.code(), "TooFewSources");
}

#[test]
fn stats_table_sums_to_dataset_size() {
    let (contexts, pairs) = fixtures();
    let examples = generate(&contexts, &pairs, &SplitRatios::default(), 4).unwrap();
    let stats = statistics(&examples);
    assert_eq!(stats.total(), examples.len());
    let by_split: usize = Split::ALL.iter().map(|s| stats.split_total(*s)).sum();
    assert_eq!(by_split, examples.len());
}
