//! Context templates and insertion pairs.
//!
//! A context is a sentence template with exactly one blank, written as the
//! standalone token `x` (trailing sentence punctuation such as `x.` is
//! allowed). Determiners and quantifiers belong to the template, never to
//! the insertions. Grammaticality is controlled only through noun types:
//! every context lists the noun types its blank accepts and every insertion
//! carries the noun type of its head noun.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::natlog::{ConceptRelation, Monotonicity};

pub const BLANK: &str = "x";

const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?'];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("template {template:?} must contain exactly one blank `x`, found {blanks}")]
    MalformedTemplate { template: String, blanks: usize },
    #[error("unknown monotonicity {0:?} (expected \"up\" or \"down\")")]
    UnknownMonotonicity(String),
    #[error("unknown noun type {0:?} (expected singular, plural or mass)")]
    UnknownNounType(String),
    #[error("unknown relation {0:?} (expected =, sub, sup or none)")]
    UnknownRelation(String),
    #[error("context {0:?} allows no noun types")]
    EmptyAllowedTypes(String),
    #[error("empty id")]
    EmptyId,
    #[error("empty insertion phrase")]
    EmptyPhrase,
    #[error("insertion phrase {0:?} contains the blank marker")]
    BlankInPhrase(String),
    #[error("pair {0:?} has identical insertions but is not labelled as equivalence")]
    IdenticalInsertions(String),
    #[error("context {context:?} does not accept a {noun_type} noun")]
    IncompatibleNounType { context: String, noun_type: NounType },
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("{path}:{line}: {source}")]
    Json { path: PathBuf, line: usize, source: serde_json::Error },
    #[error("{path}:{line}: {source}")]
    Record { path: PathBuf, line: usize, source: Box<CorpusError> },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CorpusError {
    pub fn code(&self) -> &'static str {
        match self {
            CorpusError::MalformedTemplate { .. } => "MalformedTemplate",
            CorpusError::UnknownMonotonicity(_) => "UnknownMonotonicity",
            CorpusError::UnknownNounType(_) => "UnknownNounType",
            CorpusError::UnknownRelation(_) => "UnknownRelation",
            CorpusError::EmptyAllowedTypes(_) => "EmptyAllowedTypes",
            CorpusError::EmptyId => "EmptyId",
            CorpusError::EmptyPhrase => "EmptyPhrase",
            CorpusError::BlankInPhrase(_) => "BlankInPhrase",
            CorpusError::IdenticalInsertions(_) => "IdenticalInsertions",
            CorpusError::IncompatibleNounType { .. } => "IncompatibleNounType",
            CorpusError::DuplicateId { .. } => "DuplicateId",
            CorpusError::Json { .. } => "MalformedJson",
            CorpusError::Record { source, .. } => source.code(),
            CorpusError::Io { .. } => "IoError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NounType {
    Singular,
    Plural,
    Mass,
}

impl NounType {
    pub const ALL: [NounType; 3] = [NounType::Singular, NounType::Plural, NounType::Mass];

    pub fn as_str(self) -> &'static str {
        match self {
            NounType::Singular => "singular",
            NounType::Plural => "plural",
            NounType::Mass => "mass",
        }
    }
}

impl fmt::Display for NounType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for NounType {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NounType::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| CorpusError::UnknownNounType(s.to_string()))
    }
}

/// Returns the punctuation suffix if `token` is the blank marker.
fn blank_suffix(token: &str) -> Option<&str> {
    let rest = token.strip_prefix(BLANK)?;
    rest.chars().all(|c| TRAILING_PUNCT.contains(&c)).then_some(rest)
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A word or phrase insertion tagged with the noun type of its head.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NounPhrase {
    text: String,
    noun_type: NounType,
}

impl NounPhrase {
    pub fn new(text: &str, noun_type: NounType) -> Result<Self, CorpusError> {
        let text = normalize_ws(text);
        if text.is_empty() {
            return Err(CorpusError::EmptyPhrase);
        }
        if text.split(' ').any(|t| blank_suffix(t).is_some()) {
            return Err(CorpusError::BlankInPhrase(text));
        }
        Ok(NounPhrase { text, noun_type })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn noun_type(&self) -> NounType {
        self.noun_type
    }
}

/// One line of a contexts file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawContext {
    pub id: String,
    pub template: String,
    pub monotonicity: String,
    pub allowed_types: Vec<String>,
}

/// One line of an insertion-pairs file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPair {
    pub id: String,
    pub x_text: String,
    pub x_type: String,
    pub y_text: String,
    pub y_type: String,
    pub relation: String,
}

/// A validated sentence template with one blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    id: String,
    template: String,
    monotonicity: Monotonicity,
    allowed_types: BTreeSet<NounType>,
}

impl Context {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Whitespace-normalized template text.
    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn allowed_types(&self) -> &BTreeSet<NounType> {
        &self.allowed_types
    }

    pub fn accepts(&self, noun_type: NounType) -> bool {
        self.allowed_types.contains(&noun_type)
    }

    pub fn to_raw(&self) -> RawContext {
        RawContext {
            id: self.id.clone(),
            template: self.template.clone(),
            monotonicity: self.monotonicity.as_str().to_string(),
            allowed_types: self.allowed_types.iter().map(|t| t.as_str().to_string()).collect(),
        }
    }
}

/// An `(X, Y)` insertion pair with its concept relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionPair {
    id: String,
    x: NounPhrase,
    y: NounPhrase,
    relation: ConceptRelation,
}

impl InsertionPair {
    pub fn new(id: &str, x: NounPhrase, y: NounPhrase, relation: ConceptRelation) -> Result<Self, CorpusError> {
        let id = id.trim();
        if id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if relation != ConceptRelation::Equivalence && x.text == y.text {
            return Err(CorpusError::IdenticalInsertions(id.to_string()));
        }
        Ok(InsertionPair { id: id.to_string(), x, y, relation })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn x(&self) -> &NounPhrase {
        &self.x
    }

    pub fn y(&self) -> &NounPhrase {
        &self.y
    }

    pub fn relation(&self) -> ConceptRelation {
        self.relation
    }

    pub fn to_raw(&self) -> RawPair {
        RawPair {
            id: self.id.clone(),
            x_text: self.x.text.clone(),
            x_type: self.x.noun_type.as_str().to_string(),
            y_text: self.y.text.clone(),
            y_type: self.y.noun_type.as_str().to_string(),
            relation: self.relation.as_str().to_string(),
        }
    }
}

pub fn parse_context(raw: &RawContext) -> Result<Context, CorpusError> {
    let id = raw.id.trim();
    if id.is_empty() {
        return Err(CorpusError::EmptyId);
    }
    let template = normalize_ws(&raw.template);
    let blanks = template.split(' ').filter(|t| blank_suffix(t).is_some()).count();
    if blanks != 1 {
        return Err(CorpusError::MalformedTemplate { template, blanks });
    }
    let monotonicity =
        raw.monotonicity.parse::<Monotonicity>().map_err(|e| CorpusError::UnknownMonotonicity(e.value))?;
    let allowed_types = raw.allowed_types.iter().map(|t| t.parse::<NounType>()).collect::<Result<BTreeSet<_>, _>>()?;
    if allowed_types.is_empty() {
        return Err(CorpusError::EmptyAllowedTypes(id.to_string()));
    }
    Ok(Context { id: id.to_string(), template, monotonicity, allowed_types })
}

pub fn parse_pair(raw: &RawPair) -> Result<InsertionPair, CorpusError> {
    let x = NounPhrase::new(&raw.x_text, raw.x_type.parse()?)?;
    let y = NounPhrase::new(&raw.y_text, raw.y_type.parse()?)?;
    let relation = raw.relation.parse::<ConceptRelation>().map_err(|e| CorpusError::UnknownRelation(e.value))?;
    InsertionPair::new(&raw.id, x, y, relation)
}

/// Fills the blank of `context` with `phrase`.
pub fn instantiate(context: &Context, phrase: &NounPhrase) -> Result<String, CorpusError> {
    if !context.accepts(phrase.noun_type) {
        return Err(CorpusError::IncompatibleNounType { context: context.id.clone(), noun_type: phrase.noun_type });
    }
    let words: Vec<String> = context
        .template
        .split(' ')
        .map(|tok| match blank_suffix(tok) {
            Some(suffix) => format!("{}{}", phrase.text, suffix),
            None => tok.to_string(),
        })
        .collect();
    Ok(words.join(" "))
}

/// Both insertions of `pair` fit the blank of `context`.
pub fn compatible(context: &Context, pair: &InsertionPair) -> bool {
    context.accepts(pair.x.noun_type) && context.accepts(pair.y.noun_type)
}

fn read_jsonl<R, T, U, F>(path: &Path, reader: R, kind: &'static str, parse: F) -> Result<Vec<U>, CorpusError>
where
    R: Read,
    T: for<'de> Deserialize<'de>,
    F: Fn(&T) -> Result<U, CorpusError>,
    U: HasId,
{
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: T = serde_json::from_str(&line).map_err(|source| CorpusError::Json {
            path: path.to_path_buf(),
            line: idx + 1,
            source,
        })?;
        let item = parse(&raw).map_err(|e| CorpusError::Record {
            path: path.to_path_buf(),
            line: idx + 1,
            source: Box::new(e),
        })?;
        if !seen.insert(item.id().to_string()) {
            return Err(CorpusError::DuplicateId { kind, id: item.id().to_string() });
        }
        out.push(item);
    }
    Ok(out)
}

trait HasId {
    fn id(&self) -> &str;
}

impl HasId for Context {
    fn id(&self) -> &str {
        &self.id
    }
}

impl HasId for InsertionPair {
    fn id(&self) -> &str {
        &self.id
    }
}

fn open(path: &Path) -> Result<File, CorpusError> {
    File::open(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Reads a contexts JSONL file (keys: id, template, monotonicity, allowed_types).
pub fn read_contexts(path: impl AsRef<Path>) -> Result<Vec<Context>, CorpusError> {
    let path = path.as_ref();
    read_jsonl(path, open(path)?, "context", parse_context)
}

/// Reads an insertion-pairs JSONL file (keys: id, x_text, x_type, y_text, y_type, relation).
pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<InsertionPair>, CorpusError> {
    let path = path.as_ref();
    read_jsonl(path, open(path)?, "pair", parse_pair)
}

pub fn contexts_from_reader(reader: impl Read) -> Result<Vec<Context>, CorpusError> {
    read_jsonl(Path::new("<reader>"), reader, "context", parse_context)
}

pub fn pairs_from_reader(reader: impl Read) -> Result<Vec<InsertionPair>, CorpusError> {
    read_jsonl(Path::new("<reader>"), reader, "pair", parse_pair)
}
