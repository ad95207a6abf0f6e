//! The on-disk corpus of metric documents the suite runs over.
//!
//! A corpus directory holds four subdirectories of `.qe` files:
//! `qe/` (quasi-Einstein structures), `nonqe/` (documents with a potential
//! that is not a solution), `metrics/` (bare metrics) and `profiles/`
//! (pp-wave profiles for the equivalence sweep). Other files are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::metricdsl::{DslError, MetricDocument};
use crate::report::sha256_hex;

/// File extension of metric documents.
pub const DOCUMENT_EXTENSION: &str = "qe";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {error}")]
    Parse { path: PathBuf, error: DslError },
    #[error("no metric documents found under {0}")]
    Empty(PathBuf),
}

/// Role of a corpus document, given by its subdirectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorpusKind {
    Qe,
    NonQe,
    Metric,
    Profile,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 4] = [CorpusKind::Qe, CorpusKind::NonQe, CorpusKind::Metric, CorpusKind::Profile];

    pub fn dir_name(self) -> &'static str {
        match self {
            CorpusKind::Qe => "qe",
            CorpusKind::NonQe => "nonqe",
            CorpusKind::Metric => "metrics",
            CorpusKind::Profile => "profiles",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub kind: CorpusKind,
    /// `<subdirectory>/<file stem>`, used in check ids.
    pub name: String,
    pub path: PathBuf,
    pub source: String,
    pub doc: MetricDocument,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    /// Sorted by kind, then name.
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// The corpus shipped with this crate.
    pub fn default_dir() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
    }

    pub fn load(dir: &Path) -> Result<Corpus, CorpusError> {
        let io = |path: &Path, e: std::io::Error| CorpusError::Io { path: path.to_path_buf(), message: e.to_string() };
        if !dir.is_dir() {
            return Err(CorpusError::Io { path: dir.to_path_buf(), message: "not a directory".into() });
        }
        let mut entries = Vec::new();
        for kind in CorpusKind::ALL {
            let sub = dir.join(kind.dir_name());
            if !sub.is_dir() {
                continue;
            }
            let mut paths: Vec<PathBuf> = fs::read_dir(&sub)
                .map_err(|e| io(&sub, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == DOCUMENT_EXTENSION))
                .collect();
            paths.sort();
            for path in paths {
                let source = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
                let doc = MetricDocument::parse(&source).map_err(|error| CorpusError::Parse { path: path.clone(), error })?;
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                entries.push(CorpusEntry { kind, name: format!("{}/{stem}", kind.dir_name()), path, source, doc });
            }
        }
        if entries.is_empty() {
            return Err(CorpusError::Empty(dir.to_path_buf()));
        }
        Ok(Corpus { entries })
    }

    pub fn of_kind(&self, kind: CorpusKind) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// SHA-256 over the names and contents, independent of the directory's
    /// location on disk.
    pub fn hash(&self) -> String {
        let mut bytes = Vec::new();
        for e in &self.entries {
            bytes.extend_from_slice(e.name.as_bytes());
            bytes.push(0);
            bytes.extend_from_slice(e.source.as_bytes());
            bytes.push(0);
        }
        sha256_hex(&bytes)
    }
}
