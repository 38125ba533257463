use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nlixy::cli::RunManifest;
use nlixy::embedstore::{EmbeddingRecord, EmbeddingStore};
use nlixy::synthesis::read_dataset;
use nlixy::{EntailmentLabel, Monotonicity};

fn nlixy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlixy")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn synth(out: &Path, seed: &str) -> Output {
    let out = out.display().to_string();
    nlixy(&[
        "--seed",
        seed,
        "--out",
        &out,
        "synth",
        "--contexts",
        &fixture("contexts.jsonl"),
        "--pairs",
        &fixture("pairs.jsonl"),
    ])
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Store whose first coordinate encodes monotonicity.
fn write_store(dataset: &Path, path: &Path, dim: usize) {
    let examples = read_dataset(dataset).unwrap();
    let records = examples
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut v: Vec<f32> = (0..dim).map(|j| ((i * 31 + j * 17) % 13) as f32 / 13.0 - 0.5).collect();
            v[0] += if e.monotonicity == Monotonicity::Up { 3.0 } else { -3.0 };
            EmbeddingRecord {
                example_id: e.example_id.clone(),
                vector: v,
                predicted_label: EntailmentLabel::Entailment,
            }
        })
        .collect();
    EmbeddingStore::new("fixture-model", dim, records).unwrap().write(path).unwrap();
}

#[test]
fn synth_is_reproducible_and_manifested() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(synth(&a, "7").status.success());
    assert!(synth(&b, "7").status.success());
    let ma = RunManifest::read(&a.join("manifest.json")).unwrap();
    let mb = RunManifest::read(&b.join("manifest.json")).unwrap();
    assert_eq!(ma.seed, Some(7));
    assert_eq!(ma.inputs, mb.inputs);
    let digests = |m: &RunManifest| m.outputs.iter().map(|d| d.sha256.clone()).collect::<Vec<_>>();
    assert_eq!(digests(&ma), digests(&mb));
    assert!(ma.stale_outputs().unwrap().is_empty());
    std::fs::write(a.join("stats.csv"), "tampered\n").unwrap();
    assert_eq!(ma.stale_outputs().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nlixy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nlixy(&["synth", "--contexts", "a", "--pairs", "b"]).status.code(), Some(2));
    assert_eq!(nlixy(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_one_with_a_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o").display().to_string();
    let o = nlixy(&["--out", &out, "synth", "--contexts", "/nonexistent.jsonl", "--pairs", &fixture("pairs.jsonl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[corpus::IoError]"), "{}", stderr(&o));
}

#[test]
fn store_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert!(synth(&data, "3").status.success());
    let store = tmp.path().join("fixture.embstore");
    write_store(&data, &store, 8);
    let (store_s, data_s) = (store.display().to_string(), data.display().to_string());

    let o = nlixy(&["validate-store", "--store", &store_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("NLIXYEMB") && text.contains("fixture-model") && text.contains("dimension:      8"));

    let report = tmp.path().join("probe.csv").display().to_string();
    let o =
        nlixy(&["--out", &report, "probe", "--store", &store_s, "--dataset", &data_s, "--n-probes", "6", "--dim", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("embedstore::DimensionMismatch") && err.contains(&store_s), "{err}");

    let o =
        nlixy(&["--out", &report, "probe", "--store", &store_s, "--dataset", &data_s, "--n-probes", "6", "--dim", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), 6 + 2);
    assert!(csv.lines().last().unwrap().starts_with("accuracy_at_max_selectivity,"));
    assert!(RunManifest::read(Path::new(&format!("{report}.manifest.json")))
        .unwrap()
        .stale_outputs()
        .unwrap()
        .is_empty());

    let proj = tmp.path().join("proj.csv").display().to_string();
    let o = nlixy(&["--out", &proj, "analyze", "project", "--store", &store_s, "--dataset", &data_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    let n = read_dataset(&data).unwrap().len();
    assert_eq!(std::fs::read_to_string(&proj).unwrap().lines().count(), n + 1);

    let mut bytes = std::fs::read(&store).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&store, bytes).unwrap();
    let o = nlixy(&["validate-store", "--store", &store_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("embedstore::CorruptStore"));
}

#[test]
fn analyze_heatmap_and_eval() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    assert!(synth(&data, "5").status.success());
    let examples = read_dataset(&data).unwrap();
    let preds: nlixy::analysis::Predictions =
        examples.iter().map(|e| (e.example_id.clone(), nlixy::compose(Monotonicity::Up, e.relation))).collect();
    let pred_path = tmp.path().join("preds.csv");
    nlixy::analysis::write_predictions(&preds, &pred_path).unwrap();
    let (data_s, pred_s) = (data.display().to_string(), pred_path.display().to_string());

    let grid = tmp.path().join("grid.csv").display().to_string();
    let o = nlixy(&[
        "--out",
        &grid,
        "analyze",
        "heatmap",
        "--dataset",
        &data_s,
        "--predictions",
        &pred_s,
        "--mon",
        "down",
        "--rel",
        "sup",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&grid).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').skip(1).all(|c| c.is_empty() || c == "0")));

    let o = nlixy(&[
        "--out",
        &grid,
        "analyze",
        "heatmap",
        "--dataset",
        &data_s,
        "--predictions",
        &pred_s,
        "--mon",
        "up",
        "--rel",
        "=",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("analysis::EmptySelection"));

    let json = tmp.path().join("eval.json");
    let o = nlixy(&[
        "--out",
        &json.display().to_string(),
        "analyze",
        "eval",
        "--predictions",
        &pred_s,
        "--dataset",
        &data_s,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["total"].as_u64().unwrap() as usize, examples.len());
    let upward = examples.iter().filter(|e| e.monotonicity == Monotonicity::Up).count();
    assert_eq!(
        doc["correct"].as_u64().unwrap() as usize,
        upward
            + examples
                .iter()
                .filter(|e| e.monotonicity == Monotonicity::Down
                    && e.gold_label == nlixy::compose(Monotonicity::Up, e.relation))
                .count()
    );

    let o = nlixy(&["analyze", "eval", "--predictions", &pred_s, "--dataset", &data_s, "--split", "test"]);
    assert!(o.status.success(), "{}", stderr(&o));
}
