//! `.embstore`: per-example classification-token embeddings and model
//! predictions in a small self-describing binary file.
//!
//! All integers are little-endian.
//!
//! ```text
//! header
//!   magic           8 bytes   b"NLIXYEMB"
//!   format_version  u32       1
//!   dimension       u32       > 0
//!   record_count    u64
//!   model_name_len  u32
//!   model_name      model_name_len bytes, UTF-8
//! record (repeated record_count times)
//!   id_len          u32
//!   id              id_len bytes, UTF-8
//!   vector          dimension x f32
//!   predicted_label u8        0 = entailment, 1 = non-entailment
//! ```
//!
//! Nothing may follow the last record.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::natlog::EntailmentLabel;
use crate::synthesis::NliXyExample;

pub const MAGIC: [u8; 8] = *b"NLIXYEMB";
pub const FORMAT_VERSION: u32 = 1;
pub const EXTENSION: &str = "embstore";

/// Bytes of the fixed part of the header (everything before the model name).
pub const FIXED_HEADER_LEN: usize = 8 + 4 + 4 + 8 + 4;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{what} has dimension {found}, expected {expected}")]
    DimensionMismatch { what: String, expected: usize, found: usize },
    #[error("header declares {declared} records but {actual} were supplied")]
    RecordCountMismatch { declared: u64, actual: usize },
    #[error("store dimension must be positive")]
    ZeroDimension,
    #[error("corrupt store: {0}")]
    CorruptStore(String),
    #[error("no example id matches a store record ({examples} examples, {records} records)")]
    EmptyJoin { examples: usize, records: usize },
    #[error("store holds more than one record for id {0:?}")]
    DuplicateRecord(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl StoreError {
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::DimensionMismatch { .. } => "DimensionMismatch",
            StoreError::RecordCountMismatch { .. } => "RecordCountMismatch",
            StoreError::ZeroDimension => "ZeroDimension",
            StoreError::CorruptStore(_) => "CorruptStore",
            StoreError::EmptyJoin { .. } => "EmptyJoin",
            StoreError::DuplicateRecord(_) => "DuplicateRecord",
            StoreError::Io { .. } => "IoError",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreHeader {
    pub magic: [u8; 8],
    pub format_version: u32,
    pub model_name: String,
    pub dimension: usize,
    pub record_count: u64,
}

impl StoreHeader {
    pub fn new(model_name: impl Into<String>, dimension: usize, record_count: u64) -> Self {
        StoreHeader {
            magic: MAGIC,
            format_version: FORMAT_VERSION,
            model_name: model_name.into(),
            dimension,
            record_count,
        }
    }

    pub fn encoded_len(&self) -> usize {
        FIXED_HEADER_LEN + self.model_name.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub example_id: String,
    pub vector: Vec<f32>,
    pub predicted_label: EntailmentLabel,
}

impl EmbeddingRecord {
    pub fn encoded_len(&self) -> usize {
        4 + self.example_id.len() + 4 * self.vector.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    pub header: StoreHeader,
    pub records: Vec<EmbeddingRecord>,
}

impl EmbeddingStore {
    /// Builds a store, checking every record against `dimension`.
    pub fn new(
        model_name: impl Into<String>,
        dimension: usize,
        records: Vec<EmbeddingRecord>,
    ) -> Result<Self, StoreError> {
        let header = StoreHeader::new(model_name, dimension, records.len() as u64);
        check(&header, &records)?;
        Ok(EmbeddingStore { header, records })
    }

    pub fn dimension(&self) -> usize {
        self.header.dimension
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        write_store(&self.header, &self.records, path)
    }
}

fn label_byte(label: EntailmentLabel) -> u8 {
    match label {
        EntailmentLabel::Entailment => 0,
        EntailmentLabel::NonEntailment => 1,
    }
}

fn check(header: &StoreHeader, records: &[EmbeddingRecord]) -> Result<(), StoreError> {
    if header.dimension == 0 {
        return Err(StoreError::ZeroDimension);
    }
    if header.record_count != records.len() as u64 {
        return Err(StoreError::RecordCountMismatch { declared: header.record_count, actual: records.len() });
    }
    if let Some(r) = records.iter().find(|r| r.vector.len() != header.dimension) {
        return Err(StoreError::DimensionMismatch {
            what: format!("record {:?}", r.example_id),
            expected: header.dimension,
            found: r.vector.len(),
        });
    }
    Ok(())
}

/// Serializes a store into its byte layout.
pub fn encode(header: &StoreHeader, records: &[EmbeddingRecord]) -> Result<Vec<u8>, StoreError> {
    check(header, records)?;
    let body: usize = records.iter().map(EmbeddingRecord::encoded_len).sum();
    let mut buf = Vec::with_capacity(header.encoded_len() + body);
    buf.extend_from_slice(&header.magic);
    buf.extend_from_slice(&header.format_version.to_le_bytes());
    buf.extend_from_slice(&(header.dimension as u32).to_le_bytes());
    buf.extend_from_slice(&header.record_count.to_le_bytes());
    buf.extend_from_slice(&(header.model_name.len() as u32).to_le_bytes());
    buf.extend_from_slice(header.model_name.as_bytes());
    for r in records {
        buf.extend_from_slice(&(r.example_id.len() as u32).to_le_bytes());
        buf.extend_from_slice(r.example_id.as_bytes());
        for v in &r.vector {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        buf.push(label_byte(r.predicted_label));
    }
    Ok(buf)
}

pub fn write_store(
    header: &StoreHeader,
    records: &[EmbeddingRecord],
    path: impl AsRef<Path>,
) -> Result<(), StoreError> {
    let path = path.as_ref();
    let bytes = encode(header, records)?;
    fs::write(path, bytes).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], StoreError> {
        if self.remaining() < n {
            return Err(StoreError::CorruptStore(format!(
                "truncated while reading {what} at byte {} (need {n}, have {})",
                self.pos,
                self.remaining()
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, StoreError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, StoreError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn string(&mut self, what: &str) -> Result<String, StoreError> {
        let len = self.u32(what)? as usize;
        let bytes = self.take(len, what)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| StoreError::CorruptStore(format!("{what} is not valid UTF-8")))
    }
}

/// Parses the byte layout; the exact inverse of [`encode`].
pub fn decode(bytes: &[u8]) -> Result<EmbeddingStore, StoreError> {
    let mut cur = Cursor { buf: bytes, pos: 0 };
    let magic: [u8; 8] = cur.take(8, "magic")?.try_into().unwrap();
    if magic != MAGIC {
        return Err(StoreError::CorruptStore(format!("bad magic {magic:02x?}")));
    }
    let format_version = cur.u32("format version")?;
    if format_version != FORMAT_VERSION {
        return Err(StoreError::CorruptStore(format!("unsupported format version {format_version}")));
    }
    let dimension = cur.u32("dimension")? as usize;
    if dimension == 0 {
        return Err(StoreError::CorruptStore("dimension is zero".into()));
    }
    let record_count = cur.u64("record count")?;
    let model_name = cur.string("model name")?;

    let min_record = 4 + 4 * dimension as u64 + 1;
    if record_count.saturating_mul(min_record) > cur.remaining() as u64 {
        return Err(StoreError::CorruptStore(format!(
            "header declares {record_count} records of dimension {dimension}, but only {} body bytes follow",
            cur.remaining()
        )));
    }

    let mut records = Vec::with_capacity(record_count as usize);
    for i in 0..record_count {
        let example_id = cur.string("record id")?;
        let raw = cur.take(4 * dimension, "record vector")?;
        let vector = raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
        let predicted_label = match cur.take(1, "record label")?[0] {
            0 => EntailmentLabel::Entailment,
            1 => EntailmentLabel::NonEntailment,
            b => return Err(StoreError::CorruptStore(format!("record {i}: invalid label byte {b}"))),
        };
        records.push(EmbeddingRecord { example_id, vector, predicted_label });
    }
    if cur.remaining() != 0 {
        return Err(StoreError::CorruptStore(format!("{} trailing bytes after last record", cur.remaining())));
    }
    Ok(EmbeddingStore { header: StoreHeader { magic, format_version, model_name, dimension, record_count }, records })
}

pub fn read_store(path: impl AsRef<Path>) -> Result<EmbeddingStore, StoreError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
    decode(&bytes)
}

/// Inner join of dataset examples and store records on `example_id`.
#[derive(Debug, Clone)]
pub struct Aligned {
    /// Joined rows, in example order.
    pub rows: Vec<(NliXyExample, EmbeddingRecord)>,
    pub unmatched_examples: Vec<String>,
    pub unmatched_records: Vec<String>,
    pub dimension: usize,
}

impl Aligned {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn align(store: &EmbeddingStore, examples: &[NliXyExample]) -> Result<Aligned, StoreError> {
    let mut by_id: HashMap<&str, &EmbeddingRecord> = HashMap::with_capacity(store.records.len());
    for r in &store.records {
        if by_id.insert(r.example_id.as_str(), r).is_some() {
            return Err(StoreError::DuplicateRecord(r.example_id.clone()));
        }
    }
    let mut rows = Vec::new();
    let mut unmatched_examples = Vec::new();
    let mut matched = std::collections::HashSet::new();
    for ex in examples {
        match by_id.get(ex.example_id.as_str()) {
            Some(r) => {
                matched.insert(ex.example_id.as_str());
                rows.push((ex.clone(), (*r).clone()));
            }
            None => unmatched_examples.push(ex.example_id.clone()),
        }
    }
    if rows.is_empty() {
        return Err(StoreError::EmptyJoin { examples: examples.len(), records: store.records.len() });
    }
    let unmatched_records = store
        .records
        .iter()
        .filter(|r| !matched.contains(r.example_id.as_str()))
        .map(|r| r.example_id.clone())
        .collect();
    Ok(Aligned { rows, unmatched_examples, unmatched_records, dimension: store.dimension() })
}
