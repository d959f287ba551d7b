//! Corpus loading.
//!
//! A corpus is described by a tab-separated manifest with one document per
//! line and a header row:
//!
//! ```text
//! id  author  language  year  path
//! dickens-01  Dickens  en  1850  texts/david_copperfield.txt
//! defoe-01  Defoe  en    texts/robinson_crusoe.txt
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. `year` may be left
//! empty. Relative paths are resolved against the manifest's directory.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const HEADER: [&str; 5] = ["id", "author", "language", "year", "path"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentMeta {
    pub id: String,
    pub author: String,
    pub language: String,
    pub year: Option<i32>,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub meta: DocumentMeta,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    /// Builds a corpus from documents already in memory, applying the same
    /// validation as [`load_corpus`].
    pub fn from_documents(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if !seen.insert(doc.meta.id.as_str()) {
                return Err(Error::DuplicateId(doc.meta.id.clone()));
            }
            if doc.meta.author.trim().is_empty() {
                return Err(Error::Config(format!(
                    "document {} has an empty author label",
                    doc.meta.id
                )));
            }
            if doc.text.trim().is_empty() {
                return Err(Error::EmptyDocument(doc.meta.id.clone()));
            }
        }
        Ok(Self { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Distinct author labels in lexicographic order.
    pub fn authors(&self) -> BTreeSet<&str> {
        self.documents.iter().map(|d| d.meta.author.as_str()).collect()
    }

    pub fn languages(&self) -> BTreeSet<&str> {
        self.documents.iter().map(|d| d.meta.language.as_str()).collect()
    }

    /// Keeps only the documents written in `language`.
    pub fn filter_language(&self, language: &str) -> Corpus {
        Corpus {
            documents: self
                .documents
                .iter()
                .filter(|d| d.meta.language == language)
                .cloned()
                .collect(),
        }
    }

    /// Fails with a message naming the author if any author has fewer than
    /// `min_docs` documents.
    pub fn require_docs_per_author(&self, min_docs: usize) -> Result<()> {
        for author in self.authors() {
            let count = self.documents.iter().filter(|d| d.meta.author == author).count();
            if count < min_docs {
                return Err(Error::ClassTooSmall {
                    class: author.to_string(),
                    rows: count,
                    train_per_class: min_docs.saturating_sub(1),
                });
            }
        }
        Ok(())
    }
}

pub fn load_corpus(manifest_path: impl AsRef<Path>) -> Result<Corpus> {
    let manifest_path = manifest_path.as_ref();
    let raw = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let metas = parse_manifest(&raw, manifest_path)?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));

    let mut documents = Vec::with_capacity(metas.len());
    for mut meta in metas {
        if meta.path.is_relative() {
            meta.path = base.join(&meta.path);
        }
        let bytes = fs::read(&meta.path).map_err(|e| Error::io(&meta.path, e))?;
        let text = String::from_utf8(bytes).map_err(|_| Error::NotUtf8 {
            id: meta.id.clone(),
            path: meta.path.clone(),
        })?;
        documents.push(Document { meta, text });
    }
    Corpus::from_documents(documents)
}

/// Parses manifest text without touching the referenced files. Paths are
/// returned as written.
pub fn parse_manifest(raw: &str, origin: &Path) -> Result<Vec<DocumentMeta>> {
    let manifest_err = |line: u64, message: String| Error::Manifest {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .comment(Some(b'#'))
        .flexible(true)
        .has_headers(true)
        .from_reader(raw.as_bytes());

    let headers = reader.headers().map_err(|e| manifest_err(1, e.to_string()))?.clone();
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != HEADER {
        return Err(manifest_err(
            1,
            format!("expected header {:?}, found {:?}", HEADER, found),
        ));
    }

    let mut metas: Vec<DocumentMeta> = Vec::new();
    let mut ids = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            manifest_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != HEADER.len() {
            return Err(manifest_err(
                line,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            ));
        }
        let field = |i: usize| record[i].trim();
        let id = field(0);
        let author = field(1);
        if id.is_empty() {
            return Err(manifest_err(line, "empty id".into()));
        }
        if author.is_empty() {
            return Err(manifest_err(line, format!("empty author for {id}")));
        }
        let year = match field(3) {
            "" | "-" => None,
            y => Some(
                y.parse::<i32>()
                    .map_err(|_| manifest_err(line, format!("bad year {y:?}")))?,
            ),
        };
        if !ids.insert(id.to_string()) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        metas.push(DocumentMeta {
            id: id.to_string(),
            author: author.to_string(),
            language: field(2).to_string(),
            year,
            path: PathBuf::from(field(4)),
        });
    }
    Ok(metas)
}
