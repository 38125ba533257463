//! Permutation of insertion pairs through contexts into labelled NLI-XY
//! examples.
//!
//! Contexts and pairs are partitioned into train/dev/test *before* they are
//! combined, so no context and no pair is ever shared between partitions.
//! Partitioning uses a ChaCha8 stream seeded from the caller's seed and a
//! plain Fisher-Yates shuffle over the id-sorted sources, which makes the
//! assignment reproducible across platforms.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{compatible, instantiate, Context, CorpusError, InsertionPair};
use crate::natlog::{compose, ConceptRelation, EntailmentLabel, Monotonicity};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("need at least 3 {kind} to fill three partitions, found {found}")]
    TooFewSources { kind: &'static str, found: usize },
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {source}")]
    Json { path: PathBuf, line: usize, source: serde_json::Error },
}

impl SynthesisError {
    pub fn code(&self) -> &'static str {
        match self {
            SynthesisError::TooFewSources { .. } => "TooFewSources",
            SynthesisError::InvalidRatios(_) => "InvalidRatios",
            SynthesisError::Corpus(e) => e.code(),
            SynthesisError::Io { .. } => "IoError",
            SynthesisError::Json { .. } => "MalformedJson",
        }
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> SynthesisError + '_ {
        move |source| SynthesisError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Train/dev/test fractions; each in (0, 1), summing to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    train: f64,
    dev: f64,
    test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, dev: f64, test: f64) -> Result<Self, SynthesisError> {
        for (name, v) in [("train", train), ("dev", dev), ("test", test)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(SynthesisError::InvalidRatios(format!("{name} fraction {v} is not in (0, 1)")));
            }
        }
        let sum = train + dev + test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(SynthesisError::InvalidRatios(format!("fractions sum to {sum}, not 1")));
        }
        Ok(SplitRatios { train, dev, test })
    }

    pub fn train(&self) -> f64 {
        self.train
    }

    pub fn dev(&self) -> f64 {
        self.dev
    }

    pub fn test(&self) -> f64 {
        self.test
    }

    /// Group sizes for `n` sources: train and dev rounded to nearest,
    /// remainder to test.
    pub fn group_sizes(&self, n: usize) -> [usize; 3] {
        let train = ((n as f64) * self.train).round() as usize;
        let train = train.min(n);
        let dev = (((n as f64) * self.dev).round() as usize).min(n - train);
        [train, dev, n - train - dev]
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios { train: 0.3, dev: 0.2, test: 0.5 }
    }
}

impl FromStr for SplitRatios {
    type Err = SynthesisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| SynthesisError::InvalidRatios(format!("{s:?}: {e}")))?;
        match parts[..] {
            [a, b, c] => SplitRatios::new(a, b, c),
            _ => Err(SynthesisError::InvalidRatios(format!("{s:?}: expected three comma-separated fractions"))),
        }
    }
}

/// Partition of context and pair ids into splits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceAssignment {
    pub contexts: BTreeMap<String, Split>,
    pub pairs: BTreeMap<String, Split>,
}

impl SourceAssignment {
    pub fn count(&self, split: Split) -> (usize, usize) {
        (self.contexts.values().filter(|s| **s == split).count(), self.pairs.values().filter(|s| **s == split).count())
    }
}

fn fisher_yates<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        items.swap(i, j);
    }
}

fn assign(mut ids: Vec<String>, ratios: &SplitRatios, rng: &mut ChaCha8Rng) -> BTreeMap<String, Split> {
    ids.sort();
    fisher_yates(&mut ids, rng);
    let [train, dev, _] = ratios.group_sizes(ids.len());
    ids.into_iter()
        .enumerate()
        .map(|(i, id)| {
            let split = if i < train {
                Split::Train
            } else if i < train + dev {
                Split::Dev
            } else {
                Split::Test
            };
            (id, split)
        })
        .collect()
}

/// Assigns every context and every pair to exactly one split.
pub fn split_sources(
    contexts: &[Context],
    pairs: &[InsertionPair],
    ratios: &SplitRatios,
    seed: u64,
) -> Result<SourceAssignment, SynthesisError> {
    if contexts.len() < 3 {
        return Err(SynthesisError::TooFewSources { kind: "contexts", found: contexts.len() });
    }
    if pairs.len() < 3 {
        return Err(SynthesisError::TooFewSources { kind: "pairs", found: pairs.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let contexts = assign(contexts.iter().map(|c| c.id().to_string()).collect(), ratios, &mut rng);
    rng.set_stream(1);
    rng.set_word_pos(0);
    let pairs = assign(pairs.iter().map(|p| p.id().to_string()).collect(), ratios, &mut rng);
    Ok(SourceAssignment { contexts, pairs })
}

/// A premise/hypothesis pair with its gold and auxiliary labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NliXyExample {
    pub example_id: String,
    pub context_id: String,
    pub pair_id: String,
    pub premise: String,
    pub hypothesis: String,
    pub monotonicity: Monotonicity,
    pub relation: ConceptRelation,
    pub gold_label: EntailmentLabel,
    pub split: Split,
}

pub fn example_id(context_id: &str, pair_id: &str) -> String {
    format!("{context_id}:{pair_id}")
}

/// Builds one example from a context and a compatible pair.
pub fn build_example(context: &Context, pair: &InsertionPair, split: Split) -> Result<NliXyExample, CorpusError> {
    Ok(NliXyExample {
        example_id: example_id(context.id(), pair.id()),
        context_id: context.id().to_string(),
        pair_id: pair.id().to_string(),
        premise: instantiate(context, pair.x())?,
        hypothesis: instantiate(context, pair.y())?,
        monotonicity: context.monotonicity(),
        relation: pair.relation(),
        gold_label: compose(context.monotonicity(), pair.relation()),
        split,
    })
}

/// All compatible same-split (context, pair) combinations.
pub fn generate(
    contexts: &[Context],
    pairs: &[InsertionPair],
    ratios: &SplitRatios,
    seed: u64,
) -> Result<Vec<NliXyExample>, SynthesisError> {
    let assignment = split_sources(contexts, pairs, ratios, seed)?;
    let mut contexts: Vec<&Context> = contexts.iter().collect();
    contexts.sort_by(|a, b| a.id().cmp(b.id()));
    let mut pairs: Vec<&InsertionPair> = pairs.iter().collect();
    pairs.sort_by(|a, b| a.id().cmp(b.id()));

    let mut out = Vec::new();
    for ctx in contexts {
        let split = assignment.contexts[ctx.id()];
        for pair in &pairs {
            if assignment.pairs[pair.id()] == split && compatible(ctx, pair) {
                out.push(build_example(ctx, pair, split)?);
            }
        }
    }
    Ok(out)
}

/// Example counts per (split, relation, monotonicity).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatsTable {
    cells: BTreeMap<(Split, ConceptRelation, Monotonicity), usize>,
}

impl StatsTable {
    pub fn count(&self, split: Split, rel: ConceptRelation, mon: Monotonicity) -> usize {
        self.cells.get(&(split, rel, mon)).copied().unwrap_or(0)
    }

    pub fn relation_total(&self, split: Split, rel: ConceptRelation) -> usize {
        Monotonicity::ALL.iter().map(|&m| self.count(split, rel, m)).sum()
    }

    pub fn monotonicity_total(&self, split: Split, mon: Monotonicity) -> usize {
        ConceptRelation::ALL.iter().map(|&r| self.count(split, r, mon)).sum()
    }

    pub fn split_total(&self, split: Split) -> usize {
        Monotonicity::ALL.iter().map(|&m| self.monotonicity_total(split, m)).sum()
    }

    pub fn total(&self) -> usize {
        self.cells.values().sum()
    }

    /// CSV laid out like the usual dataset statistics table: one row per
    /// (partition, relation) plus a Total row per partition.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("partition,relation,up,down,total\n");
        for split in Split::ALL {
            for rel in ConceptRelation::ALL {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    split,
                    rel,
                    self.count(split, rel, Monotonicity::Up),
                    self.count(split, rel, Monotonicity::Down),
                    self.relation_total(split, rel)
                ));
            }
            s.push_str(&format!(
                "{},total,{},{},{}\n",
                split,
                self.monotonicity_total(split, Monotonicity::Up),
                self.monotonicity_total(split, Monotonicity::Down),
                self.split_total(split)
            ));
        }
        s
    }
}

pub fn statistics(examples: &[NliXyExample]) -> StatsTable {
    let mut table = StatsTable::default();
    for ex in examples {
        *table.cells.entry((ex.split, ex.relation, ex.monotonicity)).or_default() += 1;
    }
    table
}

pub const TSV_FILE: &str = "examples.tsv";
pub const STATS_FILE: &str = "stats.csv";

pub fn split_file(split: Split) -> String {
    format!("{split}.jsonl")
}

/// Writes `train.jsonl`, `dev.jsonl`, `test.jsonl`, `examples.tsv` and
/// `stats.csv` into `dir`, returning the paths written.
pub fn export(examples: &[NliXyExample], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, SynthesisError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(SynthesisError::io(dir))?;
    let mut written = Vec::new();

    for split in Split::ALL {
        let path = dir.join(split_file(split));
        let file = File::create(&path).map_err(SynthesisError::io(&path))?;
        let mut w = BufWriter::new(file);
        for ex in examples.iter().filter(|e| e.split == split) {
            let line = serde_json::to_string(ex).expect("example serializes");
            writeln!(w, "{line}").map_err(SynthesisError::io(&path))?;
        }
        w.flush().map_err(SynthesisError::io(&path))?;
        written.push(path);
    }

    let path = dir.join(TSV_FILE);
    let mut tsv = String::from("premise\thypothesis\tgold_label\n");
    for split in Split::ALL {
        for ex in examples.iter().filter(|e| e.split == split) {
            tsv.push_str(&format!("{}\t{}\t{}\n", ex.premise, ex.hypothesis, ex.gold_label));
        }
    }
    fs::write(&path, tsv).map_err(SynthesisError::io(&path))?;
    written.push(path);

    let path = dir.join(STATS_FILE);
    fs::write(&path, statistics(examples).to_csv()).map_err(SynthesisError::io(&path))?;
    written.push(path);

    Ok(written)
}

/// Reads the per-split JSONL files of a dataset directory written by
/// [`export`]. Missing split files are treated as empty.
pub fn read_dataset(dir: impl AsRef<Path>) -> Result<Vec<NliXyExample>, SynthesisError> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(SynthesisError::Io {
            path: dir.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "dataset directory not found"),
        });
    }
    let mut out = Vec::new();
    for split in Split::ALL {
        let path = dir.join(split_file(split));
        if !path.exists() {
            continue;
        }
        let file = File::open(&path).map_err(SynthesisError::io(&path))?;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(SynthesisError::io(&path))?;
            if line.trim().is_empty() {
                continue;
            }
            let ex: NliXyExample = serde_json::from_str(&line).map_err(|source| SynthesisError::Json {
                path: path.clone(),
                line: idx + 1,
                source,
            })?;
            out.push(ex);
        }
    }
    Ok(out)
}
