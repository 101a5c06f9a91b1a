//! Transliteration engine mapping Voynich-script tokens onto Middle Persian
//! (Pahlavi) readings.
//!
//! The pipeline has four stages. A corpus written in the native glyph
//! notation is parsed and segmented into units ([`ingest`]); each unit is
//! expanded into a set of weighted reading options, forming an ambiguity
//! lattice ([`lattice`]); candidate readings are enumerated in cost order and
//! matched vowel-insensitively against a Pahlavi lexicon ([`lexicon`]); and
//! ranked results are rendered as reports ([`report`]).
//!
//! The crate bundles a default script model, lexicon, golden-case file and a
//! small sample corpus; see [`data`].

pub mod ingest;
pub mod lattice;
pub mod lexicon;
pub mod model;
pub mod report;
mod text;

/// Errors produced while loading data files or processing tokens.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A data file (model, lexicon, corpus, golden cases, EVA mapping) is
    /// malformed. `path` is the file path or a `builtin:` label.
    #[error("{path}:{line}: {msg}")]
    Data {
        path: String,
        line: usize,
        msg: String,
    },
    /// A token cannot be normalized or segmented.
    #[error("token {token:?}: {msg}")]
    Token { token: String, msg: String },
    /// A glyph is not part of the script model.
    #[error("unknown glyph {glyph:?}")]
    UnknownGlyph { glyph: char },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Raw contents of the bundled data files.
pub mod data {
    /// Default glyph-to-value correspondence model.
    pub const SCRIPT_MODEL: &str = include_str!("../data/script_model.tsv");
    /// Default Middle Persian lexicon.
    pub const LEXICON: &str = include_str!("../data/lexicon.tsv");
    /// Golden transliteration cases used for evaluation.
    pub const GOLDEN_CASES: &str = include_str!("../data/golden.tsv");
    /// Small corpus in native notation exercising the notation features.
    pub const SAMPLE_CORPUS: &str = include_str!("../data/sample_corpus.txt");
    /// Example EVA-to-native mapping (unvalidated).
    pub const EVA_MAPPING: &str = include_str!("../data/eva_mapping.tsv");
}
