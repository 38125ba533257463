//! Writes a small .embstore file, reads it back and shows its header.

use nlixy::embedstore::{read_store, EmbeddingRecord, EmbeddingStore, FIXED_HEADER_LEN};
use nlixy::EntailmentLabel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let records = (0..5)
        .map(|i| EmbeddingRecord {
            example_id: format!("c{i:02}:p01"),
            vector: (0..4).map(|j| (i * 4 + j) as f32 * 0.25).collect(),
            predicted_label: if i % 2 == 0 { EntailmentLabel::Entailment } else { EntailmentLabel::NonEntailment },
        })
        .collect();
    let store = EmbeddingStore::new("demo-encoder", 4, records)?;

    let dir = std::env::temp_dir().join("nlixy-store-demo");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("demo.embstore");
    store.write(&path)?;
    let size = std::fs::metadata(&path)?.len();

    let back = read_store(&path)?;
    assert_eq!(back, store);
    let h = &back.header;
    println!("{}: {size} bytes (fixed header {FIXED_HEADER_LEN})", path.display());
    println!("model {:?}, dimension {}, {} records", h.model_name, h.dimension, h.record_count);
    for r in &back.records {
        println!("  {} {:?} {}", r.example_id, r.vector, r.predicted_label);
    }

    let mut bytes = std::fs::read(&path)?;
    bytes.truncate(bytes.len() - 1);
    match nlixy::embedstore::decode(&bytes) {
        Err(e) => println!("truncated copy rejected: {} ({e})", e.code()),
        Ok(_) => unreachable!("truncated stores never decode"),
    }
    Ok(())
}
