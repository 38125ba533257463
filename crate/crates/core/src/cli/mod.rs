//! The `nlixy` command line.
//!
//! Exit status is 0 on success, 1 on runtime errors and 2 on usage errors.
//! Every command that writes files also writes a JSON [`RunManifest`] with
//! SHA-256 digests of its inputs and outputs: `<dir>/manifest.json` for
//! directory outputs and `<file>.manifest.json` for single-file outputs.

mod manifest;

pub use manifest::{FileDigest, RunManifest};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{self, aligned_predictions, error_grid, evaluate, project_2d, read_predictions};
use crate::corpus::{read_contexts, read_pairs};
use crate::embedstore::{align, read_store, EmbeddingStore, StoreError};
use crate::natlog::{ConceptRelation, Monotonicity};
use crate::probing::{run_sweep, SweepConfig, TaskKind};
use crate::synthesis::{self, export, generate, read_dataset, statistics, Split, SplitRatios};
use crate::{sha256_hex, Error};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "nlixy", version, about = "Natural-logic NLI dataset synthesis and monotonicity probing")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Permute insertion pairs through contexts into a split NLI-XY dataset.
    Synth {
        #[arg(long)]
        contexts: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value = "0.3,0.2,0.5")]
        ratios: String,
    },
    /// Run a probe sweep over a store and report selectivity per penalty.
    Probe {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "monotonicity", value_parser = ["monotonicity", "relation"])]
        task: String,
        #[arg(long, default_value_t = 50)]
        n_probes: usize,
        /// Expected embedding dimension; checked against the store header.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Error grids, accuracy breakdowns and projections.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Check an .embstore file and print its header and checksum.
    ValidateStore {
        #[arg(long)]
        store: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Correct/incorrect grid over contexts x pairs for one label subclass.
    Heatmap {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long, value_parser = parse_mon)]
        mon: Monotonicity,
        #[arg(long, value_parser = parse_rel)]
        rel: ConceptRelation,
    },
    /// Accuracy overall and per (monotonicity, relation) cell.
    Eval {
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        /// Restrict scoring to one partition.
        #[arg(long, value_parser = parse_split)]
        split: Option<Split>,
    },
    /// PCA projection of the stored vectors with gold auxiliary labels.
    Project {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
    },
}

fn parse_mon(s: &str) -> Result<Monotonicity, String> {
    s.parse().map_err(|e: crate::natlog::ParseLabelError| e.to_string())
}

fn parse_rel(s: &str) -> Result<ConceptRelation, String> {
    s.parse().map_err(|e: crate::natlog::ParseLabelError| e.to_string())
}

fn parse_split(s: &str) -> Result<Split, String> {
    Split::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown split {s:?}"))
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status. Errors are printed to stderr as
/// `error[module::Code]: message`.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command_line = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, command_line) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            match e {
                Error::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

fn require_out(out: Option<PathBuf>, command: &str) -> Result<PathBuf, Error> {
    out.ok_or_else(|| Error::Usage(format!("`{command}` requires --out")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io { path: parent.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn sidecar_manifest(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Files of a dataset directory that exist, for manifest digests.
fn dataset_inputs(dir: &Path) -> Vec<PathBuf> {
    Split::ALL.iter().map(|s| dir.join(synthesis::split_file(*s))).filter(|p| p.exists()).collect()
}

fn load_store(path: &Path) -> Result<EmbeddingStore, Error> {
    read_store(path).map_err(|source| Error::Store { path: path.to_path_buf(), source })
}

fn execute(cli: Cli, command_line: Vec<String>) -> Result<(), Error> {
    let seed = cli.seed;
    match cli.command {
        Command::Synth { contexts, pairs, ratios } => {
            let out = require_out(cli.out, "synth")?;
            let ratios: SplitRatios = ratios.parse()?;
            let ctxs = read_contexts(&contexts)?;
            let prs = read_pairs(&pairs)?;
            let examples = generate(&ctxs, &prs, &ratios, seed)?;
            let outputs = export(&examples, &out)?;
            let manifest = RunManifest::new(command_line, Some(seed), &[contexts, pairs], &outputs)?;
            manifest.write(&out.join(MANIFEST_FILE))?;
            let stats = statistics(&examples);
            println!(
                "{} examples from {} contexts and {} pairs (train {}, dev {}, test {}) -> {}",
                examples.len(),
                ctxs.len(),
                prs.len(),
                stats.split_total(Split::Train),
                stats.split_total(Split::Dev),
                stats.split_total(Split::Test),
                out.display()
            );
        }
        Command::Probe { store, dataset, task, n_probes, dim } => {
            let out = require_out(cli.out, "probe")?;
            let kind: TaskKind = task.parse()?;
            let emb = load_store(&store)?;
            if let Some(expected) = dim {
                if emb.dimension() != expected {
                    return Err(Error::Store {
                        path: store,
                        source: StoreError::DimensionMismatch {
                            what: "store header".into(),
                            expected,
                            found: emb.dimension(),
                        },
                    });
                }
            }
            let examples = read_dataset(&dataset)?;
            let aligned = align(&emb, &examples).map_err(|source| Error::Store { path: store.clone(), source })?;
            if !aligned.unmatched_examples.is_empty() || !aligned.unmatched_records.is_empty() {
                eprintln!(
                    "warning: {} examples without embeddings, {} records without examples",
                    aligned.unmatched_examples.len(),
                    aligned.unmatched_records.len()
                );
            }
            let config = SweepConfig { n_probes, ..SweepConfig::default() };
            let report = run_sweep(&aligned, kind, &config, seed)?;
            write_file(&out, &report.to_csv())?;
            let mut inputs = vec![store];
            inputs.extend(dataset_inputs(&dataset));
            RunManifest::new(command_line, Some(seed), &inputs, std::slice::from_ref(&out))?
                .write(&sidecar_manifest(&out))?;
            println!(
                "{kind}: accuracy at max selectivity {:.4} ({} probes) -> {}",
                report.accuracy_at_max_selectivity,
                report.results.len(),
                out.display()
            );
        }
        Command::Analyze(AnalyzeCommand::Heatmap { dataset, predictions, mon, rel }) => {
            let out = require_out(cli.out, "analyze heatmap")?;
            let examples = read_dataset(&dataset)?;
            let preds = read_predictions(&predictions)?;
            let grid = error_grid(&examples, &preds, mon, rel)?;
            write_file(&out, &grid.to_csv())?;
            let mut inputs = dataset_inputs(&dataset);
            inputs.push(predictions);
            RunManifest::new(command_line, None, &inputs, std::slice::from_ref(&out))?
                .write(&sidecar_manifest(&out))?;
            println!(
                "{mon}/{rel}: {}/{} correct over {} contexts x {} pairs -> {}",
                grid.correct(),
                grid.present(),
                grid.row_ids.len(),
                grid.col_ids.len(),
                out.display()
            );
        }
        Command::Analyze(AnalyzeCommand::Eval { predictions, dataset, split }) => {
            let mut examples = read_dataset(&dataset)?;
            if let Some(split) = split {
                examples.retain(|e| e.split == split);
            }
            let preds = read_predictions(&predictions)?;
            let labels = aligned_predictions(&examples, &preds)?;
            let eval = evaluate(&labels, &examples)?;
            print!("{}", eval.summary());
            if let Some(out) = cli.out {
                write_file(&out, &evaluation_json(&eval))?;
                let mut inputs = dataset_inputs(&dataset);
                inputs.push(predictions);
                RunManifest::new(command_line, None, &inputs, std::slice::from_ref(&out))?
                    .write(&sidecar_manifest(&out))?;
            }
        }
        Command::Analyze(AnalyzeCommand::Project { store, dataset }) => {
            let out = require_out(cli.out, "analyze project")?;
            let emb = load_store(&store)?;
            let examples = read_dataset(&dataset)?;
            let aligned = align(&emb, &examples).map_err(|source| Error::Store { path: store.clone(), source })?;
            let projection = project_2d(&aligned)?;
            write_file(&out, &projection.to_csv())?;
            let mut inputs = vec![store];
            inputs.extend(dataset_inputs(&dataset));
            RunManifest::new(command_line, None, &inputs, std::slice::from_ref(&out))?
                .write(&sidecar_manifest(&out))?;
            println!(
                "{} points, {:.1}% of variance in 2 components -> {}",
                projection.points.len(),
                100.0 * (projection.component_variance[0] + projection.component_variance[1])
                    / projection.total_variance.max(f64::MIN_POSITIVE),
                out.display()
            );
        }
        Command::ValidateStore { store } => {
            let bytes = fs::read(&store).map_err(|source| Error::Io { path: store.clone(), source })?;
            let emb =
                crate::embedstore::decode(&bytes).map_err(|source| Error::Store { path: store.clone(), source })?;
            let h = &emb.header;
            println!("path:           {}", store.display());
            println!("magic:          {}", String::from_utf8_lossy(&h.magic));
            println!("format_version: {}", h.format_version);
            println!("model_name:     {}", h.model_name);
            println!("dimension:      {}", h.dimension);
            println!("record_count:   {}", h.record_count);
            println!("sha256:         {}", sha256_hex(&bytes));
        }
    }
    Ok(())
}

fn evaluation_json(eval: &analysis::Evaluation) -> String {
    let cells: Vec<_> = eval
        .breakdown
        .iter()
        .map(|((mon, rel), score)| {
            serde_json::json!({
                "monotonicity": mon,
                "relation": rel,
                "correct": score.correct,
                "total": score.total,
                "accuracy": score.accuracy(),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "accuracy": eval.accuracy(),
        "correct": eval.overall.correct,
        "total": eval.overall.total,
        "breakdown": cells,
    });
    serde_json::to_string_pretty(&doc).expect("evaluation serializes") + "\n"
}
