//! Corpus ingestion: native-notation parsing, token normalization and
//! segmentation, round-trip serialization, and EVA import.
//!
//! Native notation, one manuscript line per physical line:
//!
//! ```text
//! # f31r:1
//! BccNcy šcoN
//! ```
//!
//! `# folio:line` headers locate the tokens that follow. A trailing `-` joins
//! the next physical line into the same manuscript line (the hyphen marks a
//! drawing intrusion, not a morpheme boundary). Inside tokens, `{..}` forces
//! a ligature group, `[..]` marks inserted glyphs that are kept, and `(..)`
//! marks glyphs that normalization removes. All other `#` lines are comments.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::model::{Diagnostic, ScriptModel};
use crate::text::compose_nfc;
use crate::{data, Error, Result};

/// One segmented unit of a token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unit {
    /// A single letter.
    Glyph(char),
    /// A multi-glyph surface read as one unit.
    Ligature(String),
    /// A character with no reading (e.g. unmapped EVA input).
    Opaque(char),
}

impl Unit {
    /// The written surface of the unit.
    pub fn surface(&self) -> String {
        match self {
            Unit::Glyph(c) | Unit::Opaque(c) => c.to_string(),
            Unit::Ligature(s) => s.clone(),
        }
    }
}

/// A normalized, segmented token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Canonical surface text (markup resolved, unit surfaces concatenated).
    pub text: String,
    pub units: Vec<Unit>,
}

/// One manuscript line with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusLine {
    pub folio: String,
    pub number: u32,
    pub tokens: Vec<Token>,
}

/// A parsed corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub lines: Vec<CorpusLine>,
}

impl Corpus {
    /// Iterates `(line, token)` pairs in corpus order.
    pub fn tokens(&self) -> impl Iterator<Item = (&CorpusLine, &Token)> {
        self.lines
            .iter()
            .flat_map(|l| l.tokens.iter().map(move |t| (l, t)))
    }

    pub fn token_count(&self) -> usize {
        self.lines.iter().map(|l| l.tokens.len()).sum()
    }
}

/// Longest-match segmenter over a model's letters and ligature surfaces.
pub struct Segmenter {
    letters: HashSet<char>,
    surfaces: HashSet<String>,
    max_surface: usize,
}

impl Segmenter {
    pub fn from_model(model: &ScriptModel) -> Segmenter {
        let letters = model.letters().iter().map(|l| l.glyph).collect();
        let surfaces: HashSet<String> = model
            .ligatures()
            .iter()
            .map(|l| l.surface.clone())
            .collect();
        let max_surface = surfaces
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0);
        Segmenter {
            letters,
            surfaces,
            max_surface,
        }
    }

    /// Segmenter for the bundled model.
    pub fn default_segmenter() -> &'static Segmenter {
        static SEG: OnceLock<Segmenter> = OnceLock::new();
        SEG.get_or_init(|| Segmenter::from_model(ScriptModel::bundled()))
    }

    pub fn is_letter(&self, c: char) -> bool {
        self.letters.contains(&c)
    }

    /// Greedy longest-match segmentation of a markup-free glyph run.
    fn segment_into(
        &self,
        chars: &[char],
        units: &mut Vec<Unit>,
    ) -> std::result::Result<(), String> {
        let mut i = 0;
        while i < chars.len() {
            let mut matched = false;
            let longest = self.max_surface.min(chars.len() - i);
            for len in (2..=longest).rev() {
                let piece: String = chars[i..i + len].iter().collect();
                if self.surfaces.contains(&piece) {
                    units.push(Unit::Ligature(piece));
                    i += len;
                    matched = true;
                    break;
                }
            }
            if matched {
                continue;
            }
            if self.letters.contains(&chars[i]) {
                units.push(Unit::Glyph(chars[i]));
                i += 1;
            } else {
                return Err(format!("unknown glyph {:?}", chars[i]));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MarkupKind {
    Plain,
    /// `[..]`: inserted by the transcriber, kept.
    Inserted,
    /// `{..}`: forced ligature group.
    Forced,
    /// `(..)`: present in the manuscript but read as nothing; removed.
    Ignored,
}

/// Splits a raw token into markup runs. Errors are plain messages; callers
/// attach the token.
fn scan_markup(raw: &str) -> std::result::Result<Vec<(MarkupKind, String)>, String> {
    let mut runs: Vec<(MarkupKind, String)> = Vec::new();
    let mut current = String::new();
    let mut kind = MarkupKind::Plain;
    for c in raw.chars() {
        match c {
            '(' | '[' | '{' => {
                if kind != MarkupKind::Plain {
                    return Err(format!("nested markup at {c:?}"));
                }
                if !current.is_empty() {
                    runs.push((MarkupKind::Plain, std::mem::take(&mut current)));
                }
                kind = match c {
                    '(' => MarkupKind::Ignored,
                    '[' => MarkupKind::Inserted,
                    _ => MarkupKind::Forced,
                };
            }
            ')' | ']' | '}' => {
                let expected = match c {
                    ')' => MarkupKind::Ignored,
                    ']' => MarkupKind::Inserted,
                    _ => MarkupKind::Forced,
                };
                if kind != expected {
                    return Err(format!("unbalanced {c:?}"));
                }
                if current.is_empty() {
                    return Err("empty markup group".into());
                }
                runs.push((kind, std::mem::take(&mut current)));
                kind = MarkupKind::Plain;
            }
            _ => current.push(c),
        }
    }
    if kind != MarkupKind::Plain {
        return Err("unclosed markup group".into());
    }
    if !current.is_empty() {
        runs.push((MarkupKind::Plain, current));
    }
    Ok(runs)
}

/// Resolves markup in a raw token: `(..)` content is removed, `[..]` and
/// `{..}` content is kept, brackets themselves are dropped.
pub fn normalize_token(raw: &str) -> Result<String> {
    let runs = scan_markup(raw).map_err(|msg| Error::Token {
        token: raw.to_string(),
        msg,
    })?;
    let mut out = String::new();
    for (kind, text) in runs {
        if kind != MarkupKind::Ignored {
            out.push_str(&text);
        }
    }
    Ok(out)
}

/// Normalizes and segments one raw token. Markup brackets are segmentation
/// barriers: a ligature surface never spans a bracket edge.
pub fn parse_token(raw: &str, seg: &Segmenter) -> Result<Token> {
    let token_err = |msg: String| Error::Token {
        token: raw.to_string(),
        msg,
    };
    let composed = compose_nfc(raw).map_err(token_err)?;
    let runs = scan_markup(&composed).map_err(token_err)?;
    let mut units = Vec::new();
    for (kind, text) in &runs {
        let chars: Vec<char> = text.chars().collect();
        match kind {
            MarkupKind::Plain | MarkupKind::Inserted => {
                seg.segment_into(&chars, &mut units).map_err(token_err)?;
            }
            MarkupKind::Forced => {
                units.push(Unit::Ligature(text.clone()));
            }
            MarkupKind::Ignored => {
                for &c in &chars {
                    if !seg.is_letter(c) {
                        return Err(token_err(format!("unknown glyph {c:?} in ignored group")));
                    }
                }
            }
        }
    }
    if units.is_empty() {
        return Err(token_err(
            "token reads as nothing after normalization".into(),
        ));
    }
    let text = units.iter().map(|u| u.surface()).collect();
    Ok(Token { text, units })
}

/// Parses a native-notation corpus with the bundled model's segmenter.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    parse_corpus_with(text, Segmenter::default_segmenter())
}

/// Parses a native-notation corpus with an explicit segmenter.
pub fn parse_corpus_with(text: &str, seg: &Segmenter) -> Result<Corpus> {
    let label = "corpus";
    let err = |line: usize, msg: String| Error::Data {
        path: label.to_string(),
        line,
        msg,
    };
    let lines: Vec<String> = {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            out.push(compose_nfc(raw).map_err(|msg| err(i + 1, msg))?);
        }
        out
    };
    let mut corpus = Corpus::default();
    let mut current: Option<CorpusLine> = None;
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let trimmed = lines[i].trim();
        if trimmed.is_empty() {
            i += 1;
            continue;
        }
        if let Some((folio, number)) = parse_header(trimmed) {
            if let Some(done) = current.take() {
                corpus.lines.push(done);
            }
            current = Some(CorpusLine {
                folio,
                number,
                tokens: Vec::new(),
            });
            i += 1;
            continue;
        }
        if trimmed.starts_with('#') {
            i += 1;
            continue;
        }
        // Token line, possibly continued over several physical lines.
        let mut buf = trimmed.to_string();
        while buf.ends_with('-') {
            buf.pop();
            i += 1;
            let next = lines
                .get(i)
                .map(|l| l.trim())
                .ok_or_else(|| err(lineno, "trailing '-' with no continuation line".into()))?;
            if next.is_empty() || next.starts_with('#') {
                return Err(err(
                    i + 1,
                    "trailing '-' must be continued by a token line".into(),
                ));
            }
            buf.push_str(next);
        }
        let line_ref = current
            .as_mut()
            .ok_or_else(|| err(lineno, "token line before any '# folio:line' header".into()))?;
        for raw in buf.split_whitespace() {
            let token = parse_token(raw, seg).map_err(|e| match e {
                Error::Token { token, msg } => err(lineno, format!("token {token:?}: {msg}")),
                other => other,
            })?;
            line_ref.tokens.push(token);
        }
        i += 1;
    }
    if let Some(done) = current.take() {
        corpus.lines.push(done);
    }
    Ok(corpus)
}

/// Loads and parses a native-notation corpus file.
pub fn load_corpus(path: &Path, seg: &Segmenter) -> Result<Corpus> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus_with(&text, seg).map_err(|e| match e {
        Error::Data { line, msg, .. } => Error::Data {
            path: path.display().to_string(),
            line,
            msg,
        },
        other => other,
    })
}

fn parse_header(trimmed: &str) -> Option<(String, u32)> {
    let rest = trimmed.strip_prefix('#')?.trim();
    let (folio, number) = rest.split_once(':')?;
    if folio.is_empty() || folio.contains(char::is_whitespace) {
        return None;
    }
    if number.is_empty() || !number.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((folio.to_string(), number.parse().ok()?))
}

/// Renders a corpus back to native notation in canonical form: one header
/// per manuscript line, ligature units written with forcing braces, no
/// comments or line continuations.
///
/// Parsing the result with the same segmenter reproduces the corpus. Glyph
/// runs that the segmenter would regroup into a ligature are kept apart
/// with insertion brackets (`na[t]` parses to three glyphs and renders as
/// `n[a]t`). Opaque units serialize to their raw characters, which the
/// native parser may reject; corpora that came from EVA import are
/// therefore not guaranteed to round-trip.
pub fn serialize_corpus(corpus: &Corpus) -> String {
    serialize_corpus_with(corpus, Segmenter::default_segmenter())
}

/// [`serialize_corpus`] with an explicit segmenter.
pub fn serialize_corpus_with(corpus: &Corpus, seg: &Segmenter) -> String {
    let mut out = String::new();
    for line in &corpus.lines {
        out.push_str(&format!("# {}:{}\n", line.folio, line.number));
        if line.tokens.is_empty() {
            continue;
        }
        let rendered: Vec<String> = line.tokens.iter().map(|t| render_token(t, seg)).collect();
        out.push_str(&rendered.join(" "));
        out.push('\n');
    }
    out
}

/// Renders a glyph run so that re-segmentation yields one unit per glyph:
/// plain when the run already segments that way, otherwise with every
/// second glyph bracketed so no ligature surface can span two glyphs.
fn render_glyph_run(seg: &Segmenter, run: &[char], out: &mut String) {
    let mut units = Vec::new();
    let splits_cleanly = seg.segment_into(run, &mut units).is_ok() && units.len() == run.len();
    for (i, &c) in run.iter().enumerate() {
        if splits_cleanly || i % 2 == 0 {
            out.push(c);
        } else {
            out.push('[');
            out.push(c);
            out.push(']');
        }
    }
}

fn render_token(token: &Token, seg: &Segmenter) -> String {
    let mut out = String::new();
    let mut run: Vec<char> = Vec::new();
    for unit in &token.units {
        if let Unit::Glyph(c) = unit {
            run.push(*c);
            continue;
        }
        render_glyph_run(seg, &run, &mut out);
        run.clear();
        match unit {
            Unit::Glyph(_) => unreachable!(),
            Unit::Opaque(c) => out.push(*c),
            Unit::Ligature(s) => {
                out.push('{');
                out.push_str(s);
                out.push('}');
            }
        }
    }
    render_glyph_run(seg, &run, &mut out);
    out
}

/// Splits a token at medial separator-flagged glyphs (dropping them).
/// Returns the token unchanged if no split applies.
pub fn split_token(token: &Token, model: &ScriptModel) -> Vec<Token> {
    let len = token.units.len();
    let mut pieces: Vec<Vec<Unit>> = Vec::new();
    let mut cur: Vec<Unit> = Vec::new();
    for (i, unit) in token.units.iter().enumerate() {
        let medial = i > 0 && i + 1 < len;
        let is_sep = medial
            && matches!(unit, Unit::Glyph(g)
                if model.letter(*g).is_some_and(|l| l.flags.separator));
        if is_sep {
            if !cur.is_empty() {
                pieces.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(unit.clone());
        }
    }
    if !cur.is_empty() {
        pieces.push(cur);
    }
    if pieces.len() <= 1 {
        return vec![token.clone()];
    }
    pieces
        .into_iter()
        .map(|units| Token {
            text: units.iter().map(|u| u.surface()).collect(),
            units,
        })
        .collect()
}

/// An EVA-to-native transliteration mapping.
pub struct EvaMapping {
    rules: HashMap<String, String>,
    max_len: usize,
}

impl EvaMapping {
    pub fn parse(text: &str, label: &str) -> Result<EvaMapping> {
        let err = |line: usize, msg: String| Error::Data {
            path: label.to_string(),
            line,
            msg,
        };
        let mut rules = HashMap::new();
        let mut max_len = 0;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = compose_nfc(raw).map_err(|msg| err(lineno, msg))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            if let Some(pos) = fields.iter().position(|f| f.starts_with('#')) {
                fields.truncate(pos);
            }
            fields.retain(|f| !f.is_empty());
            if fields.len() != 2 {
                return Err(err(lineno, "expected 2 columns: eva, native".into()));
            }
            let eva = fields[0].to_string();
            if rules.contains_key(&eva) {
                return Err(err(lineno, format!("duplicate EVA unit {eva:?}")));
            }
            max_len = max_len.max(eva.chars().count());
            rules.insert(eva, fields[1].to_string());
        }
        if rules.is_empty() {
            return Err(err(0, "mapping defines no rules".into()));
        }
        Ok(EvaMapping { rules, max_len })
    }

    pub fn load(path: &Path) -> Result<EvaMapping> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        EvaMapping::parse(&text, &path.display().to_string())
    }

    /// The bundled example mapping.
    pub fn bundled() -> &'static EvaMapping {
        static MAPPING: OnceLock<EvaMapping> = OnceLock::new();
        MAPPING.get_or_init(|| {
            EvaMapping::parse(data::EVA_MAPPING, "builtin:eva_mapping.tsv")
                .expect("bundled EVA mapping must parse")
        })
    }
}

/// Imports an EVA transcription. Uses the same `# folio:line` headers as the
/// native notation; within lines, words are separated by whitespace, `.` or
/// `,`. EVA units are matched longest-first; characters with no mapping
/// become opaque glyphs and are reported as diagnostics.
pub fn import_eva(
    text: &str,
    mapping: &EvaMapping,
    seg: &Segmenter,
) -> Result<(Corpus, Vec<Diagnostic>)> {
    let err = |line: usize, msg: String| Error::Data {
        path: "eva corpus".to_string(),
        line,
        msg,
    };
    let mut corpus = Corpus::default();
    let mut diagnostics = Vec::new();
    let mut current: Option<CorpusLine> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some((folio, number)) = parse_header(trimmed) {
            if let Some(done) = current.take() {
                corpus.lines.push(done);
            }
            current = Some(CorpusLine {
                folio,
                number,
                tokens: Vec::new(),
            });
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let line_ref = current
            .as_mut()
            .ok_or_else(|| err(lineno, "token line before any '# folio:line' header".into()))?;
        for word in trimmed.split(|c: char| c.is_whitespace() || c == '.' || c == ',') {
            if word.is_empty() {
                continue;
            }
            let token = eva_token(word, mapping, seg, lineno, &mut diagnostics)
                .map_err(|msg| err(lineno, format!("token {word:?}: {msg}")))?;
            line_ref.tokens.push(token);
        }
    }
    if let Some(done) = current.take() {
        corpus.lines.push(done);
    }
    Ok((corpus, diagnostics))
}

fn eva_token(
    word: &str,
    mapping: &EvaMapping,
    seg: &Segmenter,
    lineno: usize,
    diagnostics: &mut Vec<Diagnostic>,
) -> std::result::Result<Token, String> {
    let chars: Vec<char> = word.chars().collect();
    let mut units = Vec::new();
    let mut native = String::new();
    let flush = |native: &mut String, units: &mut Vec<Unit>| {
        if native.is_empty() {
            return Ok(());
        }
        let glyphs: Vec<char> = native.chars().collect();
        native.clear();
        seg.segment_into(&glyphs, units)
    };
    let mut i = 0;
    while i < chars.len() {
        let longest = mapping.max_len.min(chars.len() - i);
        let mut matched = false;
        for len in (1..=longest).rev() {
            let piece: String = chars[i..i + len].iter().collect();
            if let Some(target) = mapping.rules.get(&piece) {
                native.push_str(target);
                i += len;
                matched = true;
                break;
            }
        }
        if !matched {
            flush(&mut native, &mut units)?;
            units.push(Unit::Opaque(chars[i]));
            diagnostics.push(Diagnostic {
                line: Some(lineno),
                message: format!("EVA character {:?} has no mapping in {word:?}", chars[i]),
            });
            i += 1;
        }
    }
    flush(&mut native, &mut units)?;
    if units.is_empty() {
        return Err("empty token".into());
    }
    let text = units.iter().map(|u| u.surface()).collect();
    Ok(Token { text, units })
}
