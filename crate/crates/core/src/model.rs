//! Script model: the glyph inventory with its reading values, ligature and
//! corruption rules, and the cost weights that price how far a candidate
//! reading strays from the primary correspondences.
//!
//! The model is an abjad-style table: each glyph carries an ordered list of
//! Pahlavi values, the first being the primary one. Values may be single
//! segments, digraphs carrying an unwritten vowel (`wa`), or the length
//! operator `¯`, which lengthens a neighbouring vowel instead of adding a
//! segment of its own.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::text::compose_nfc;
use crate::{data, Error, Result};

/// Cost charged for a lattice position holding an opaque glyph (one imported
/// from EVA without a mapping, or otherwise outside the model).
pub const UNKNOWN_GLYPH_COST: u32 = 5;

/// The length operator character used in value strings.
pub const LENGTH_MARK: char = '¯';

/// Whether a model row comes straight from the letter-shape correspondence
/// (`Attested`) or was calibrated against transliterated manuscript words
/// (`Derived`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Attested,
    Derived,
}

impl Provenance {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "attested" => Some(Provenance::Attested),
            "derived" => Some(Provenance::Derived),
            _ => None,
        }
    }
}

/// Positions a letter is allowed to occupy within a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionClass {
    Any,
    Initial,
    Medial,
    Final,
}

impl PositionClass {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "any" => Some(PositionClass::Any),
            "initial" => Some(PositionClass::Initial),
            "medial" => Some(PositionClass::Medial),
            "final" => Some(PositionClass::Final),
            _ => None,
        }
    }

    /// Whether a letter of this class may stand at `pos`.
    pub fn admits(self, pos: GlyphPosition) -> bool {
        match self {
            PositionClass::Any => true,
            PositionClass::Initial => pos.is_initial(),
            PositionClass::Medial => pos == GlyphPosition::Medial,
            PositionClass::Final => pos.is_final(),
        }
    }
}

/// Where a unit sits inside its token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphPosition {
    Initial,
    Medial,
    Final,
    /// The token consists of this single unit.
    Only,
}

impl GlyphPosition {
    /// Position of unit `index` in a token of `len` units.
    pub fn of(index: usize, len: usize) -> GlyphPosition {
        match (index == 0, index + 1 == len) {
            (true, true) => GlyphPosition::Only,
            (true, false) => GlyphPosition::Initial,
            (false, true) => GlyphPosition::Final,
            (false, false) => GlyphPosition::Medial,
        }
    }

    pub fn is_initial(self) -> bool {
        matches!(self, GlyphPosition::Initial | GlyphPosition::Only)
    }

    pub fn is_final(self) -> bool {
        matches!(self, GlyphPosition::Final | GlyphPosition::Only)
    }
}

/// Behavioural flags a letter can carry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LetterFlags {
    /// The letter can act as the vowel-length operator.
    pub length_mark: bool,
    /// The letter doubles as a word separator in running text.
    pub separator: bool,
    /// Word-initially the letter may be otiose (read as nothing).
    pub otiose_initial: bool,
    /// Word-finally the letter may be otiose.
    pub otiose_final: bool,
    /// The letter marks a paragraph head.
    pub paragraph_marker: bool,
}

impl LetterFlags {
    fn parse(s: &str) -> Option<LetterFlags> {
        let mut flags = LetterFlags::default();
        if s == "-" {
            return Some(flags);
        }
        for name in s.split(',') {
            match name {
                "length_mark" => flags.length_mark = true,
                "separator" => flags.separator = true,
                "otiose_initial" => flags.otiose_initial = true,
                "otiose_final" => flags.otiose_final = true,
                "paragraph_marker" => flags.paragraph_marker = true,
                _ => return None,
            }
        }
        Some(flags)
    }
}

/// One reading value of a letter, optionally restricted to a position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSpec {
    pub text: String,
    /// Positions where this value is available (`Any` unless the data file
    /// narrows it with an `@position` suffix).
    pub position: PositionClass,
}

impl ValueSpec {
    fn parse(s: &str) -> Option<ValueSpec> {
        match s.split_once('@') {
            None => Some(ValueSpec {
                text: s.to_string(),
                position: PositionClass::Any,
            }),
            Some((text, pos)) => Some(ValueSpec {
                text: text.to_string(),
                position: PositionClass::parse(pos)?,
            }),
        }
    }
}

/// One glyph of the script with its ordered reading values.
#[derive(Debug, Clone)]
pub struct LetterSpec {
    pub glyph: char,
    /// Ordered values; the first costs `base_value`, the rest
    /// `alternate_value` each (cost follows the position in this list even
    /// when position restrictions hide earlier values).
    pub values: Vec<ValueSpec>,
    pub position: PositionClass,
    pub flags: LetterFlags,
    pub provenance: Provenance,
}

/// A multi-glyph surface that reads as a unit.
#[derive(Debug, Clone)]
pub struct LigatureRule {
    /// Glyph sequence as written.
    pub surface: String,
    /// Expansion values. A literal string is one reading of the whole
    /// surface; a `+`-prefixed string names component glyphs whose primary
    /// values are concatenated.
    pub expansions: Vec<String>,
    /// Cost of reading the surface through this rule.
    pub cost: u32,
    pub provenance: Provenance,
}

/// A scribal confusion: `from` may be read as if it were `to`.
#[derive(Debug, Clone)]
pub struct CorruptionRule {
    pub from: char,
    pub to: char,
    pub cost: u32,
    pub provenance: Provenance,
}

/// Cost weights used when building lattices and scoring matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostWeights {
    pub base_value: u32,
    pub alternate_value: u32,
    pub corruption: u32,
    pub otiose_drop: u32,
    pub ligature_alt: u32,
    /// Cost per unit of skeleton edit distance when scoring lexicon matches.
    pub edit: u32,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            base_value: 0,
            alternate_value: 1,
            corruption: 2,
            otiose_drop: 1,
            ligature_alt: 1,
            edit: 2,
        }
    }
}

/// How a lattice option was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTag {
    /// Primary value of a letter.
    Base,
    /// Non-primary value of a letter.
    Alt,
    /// Edge glyph read as nothing.
    Otiose,
    /// Value borrowed through a corruption rule.
    Corruption,
    /// Ligature surface read through an expansion.
    Ligature,
    /// Ligature surface read letter by letter.
    LigatureAlt,
    /// Placeholder for a glyph outside the model.
    Opaque,
    /// A length mark that found no vowel and was dropped.
    MarkDrop,
}

impl RuleTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleTag::Base => "base",
            RuleTag::Alt => "alt",
            RuleTag::Otiose => "otiose",
            RuleTag::Corruption => "corruption",
            RuleTag::Ligature => "ligature",
            RuleTag::LigatureAlt => "ligature_alt",
            RuleTag::Opaque => "opaque",
            RuleTag::MarkDrop => "mark_drop",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One weighted reading option for a lattice position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphOption {
    /// Value string; empty means the glyph reads as nothing.
    pub value: String,
    pub cost: u32,
    pub rule: RuleTag,
}

/// A non-fatal finding from validation or import.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line in the originating file, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// The full correspondence model.
#[derive(Debug, Clone)]
pub struct ScriptModel {
    letters: Vec<LetterSpec>,
    letter_index: HashMap<char, usize>,
    ligatures: Vec<LigatureRule>,
    ligature_index: HashMap<String, usize>,
    corruptions: Vec<CorruptionRule>,
    pub weights: CostWeights,
}

impl ScriptModel {
    /// Parses a model from its TSV text. `label` is used in error messages
    /// (a path, or a `builtin:` marker for the bundled model).
    pub fn parse(text: &str, label: &str) -> Result<ScriptModel> {
        let err = |line: usize, msg: String| Error::Data {
            path: label.to_string(),
            line,
            msg,
        };
        let mut model = ScriptModel {
            letters: Vec::new(),
            letter_index: HashMap::new(),
            ligatures: Vec::new(),
            ligature_index: HashMap::new(),
            corruptions: Vec::new(),
            weights: CostWeights::default(),
        };
        let mut section: Option<&str> = None;
        for (i, raw_line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = compose_nfc(raw_line).map_err(|msg| err(lineno, msg))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = match name {
                    "letters" => Some("letters"),
                    "ligatures" => Some("ligatures"),
                    "corruptions" => Some("corruptions"),
                    "weights" => Some("weights"),
                    _ => return Err(err(lineno, format!("unknown section [{name}]"))),
                };
                continue;
            }
            let fields = split_fields(trimmed);
            match section {
                None => return Err(err(lineno, "data before a section header".into())),
                Some("letters") => {
                    if fields.len() != 5 {
                        return Err(err(lineno, "expected 5 columns in [letters]".into()));
                    }
                    let mut glyphs = fields[0].chars();
                    let glyph = match (glyphs.next(), glyphs.next()) {
                        (Some(g), None) => g,
                        _ => return Err(err(lineno, "glyph must be a single character".into())),
                    };
                    let values = fields[1]
                        .split(',')
                        .map(ValueSpec::parse)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| err(lineno, format!("bad value list {:?}", fields[1])))?;
                    if values.iter().any(|v| v.text.is_empty()) {
                        return Err(err(lineno, "empty value in value list".into()));
                    }
                    let position = PositionClass::parse(fields[2])
                        .ok_or_else(|| err(lineno, format!("bad position {:?}", fields[2])))?;
                    let flags = LetterFlags::parse(fields[3])
                        .ok_or_else(|| err(lineno, format!("bad flags {:?}", fields[3])))?;
                    let provenance = Provenance::parse(fields[4])
                        .ok_or_else(|| err(lineno, format!("bad provenance {:?}", fields[4])))?;
                    if model.letter_index.contains_key(&glyph) {
                        return Err(err(lineno, format!("duplicate glyph {glyph:?}")));
                    }
                    model.letter_index.insert(glyph, model.letters.len());
                    model.letters.push(LetterSpec {
                        glyph,
                        values,
                        position,
                        flags,
                        provenance,
                    });
                }
                Some("ligatures") => {
                    if fields.len() != 4 {
                        return Err(err(lineno, "expected 4 columns in [ligatures]".into()));
                    }
                    let surface = fields[0].to_string();
                    if surface.chars().count() < 2 {
                        return Err(err(lineno, "ligature surface needs >= 2 glyphs".into()));
                    }
                    let expansions: Vec<String> =
                        fields[1].split(',').map(str::to_string).collect();
                    if expansions.iter().any(String::is_empty) {
                        return Err(err(lineno, "empty expansion".into()));
                    }
                    let cost = parse_u32(fields[2])
                        .ok_or_else(|| err(lineno, format!("bad ligature cost {:?}", fields[2])))?;
                    let provenance = Provenance::parse(fields[3])
                        .ok_or_else(|| err(lineno, format!("bad provenance {:?}", fields[3])))?;
                    if model.ligature_index.contains_key(&surface) {
                        return Err(err(lineno, format!("duplicate ligature {surface:?}")));
                    }
                    model
                        .ligature_index
                        .insert(surface.clone(), model.ligatures.len());
                    model.ligatures.push(LigatureRule {
                        surface,
                        expansions,
                        cost,
                        provenance,
                    });
                }
                Some("corruptions") => {
                    if fields.len() != 4 {
                        return Err(err(lineno, "expected 4 columns in [corruptions]".into()));
                    }
                    let single = |s: &str| {
                        let mut it = s.chars();
                        match (it.next(), it.next()) {
                            (Some(c), None) => Some(c),
                            _ => None,
                        }
                    };
                    let from = single(fields[0])
                        .ok_or_else(|| err(lineno, "corruption source must be one glyph".into()))?;
                    let to = single(fields[1])
                        .ok_or_else(|| err(lineno, "corruption target must be one glyph".into()))?;
                    let cost = parse_u32(fields[2]).ok_or_else(|| {
                        err(lineno, format!("bad corruption cost {:?}", fields[2]))
                    })?;
                    let provenance = Provenance::parse(fields[3])
                        .ok_or_else(|| err(lineno, format!("bad provenance {:?}", fields[3])))?;
                    model.corruptions.push(CorruptionRule {
                        from,
                        to,
                        cost,
                        provenance,
                    });
                }
                Some("weights") => {
                    if fields.len() != 2 {
                        return Err(err(lineno, "expected 2 columns in [weights]".into()));
                    }
                    let value = parse_u32(fields[1])
                        .ok_or_else(|| err(lineno, format!("bad weight {:?}", fields[1])))?;
                    let w = &mut model.weights;
                    match fields[0] {
                        "base_value" => w.base_value = value,
                        "alternate_value" => w.alternate_value = value,
                        "corruption" => w.corruption = value,
                        "otiose_drop" => w.otiose_drop = value,
                        "ligature_alt" => w.ligature_alt = value,
                        "edit" => w.edit = value,
                        other => return Err(err(lineno, format!("unknown weight {other:?}"))),
                    }
                }
                Some(_) => unreachable!(),
            }
        }
        if model.letters.is_empty() {
            return Err(err(0, "model defines no letters".into()));
        }
        Ok(model)
    }

    /// Loads a model from a file.
    pub fn load(path: &Path) -> Result<ScriptModel> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        ScriptModel::parse(&text, &path.display().to_string())
    }

    /// The bundled default model.
    pub fn bundled() -> &'static ScriptModel {
        static MODEL: OnceLock<ScriptModel> = OnceLock::new();
        MODEL.get_or_init(|| {
            ScriptModel::parse(data::SCRIPT_MODEL, "builtin:script_model.tsv")
                .expect("bundled script model must parse")
        })
    }

    pub fn letters(&self) -> &[LetterSpec] {
        &self.letters
    }

    pub fn letter(&self, glyph: char) -> Option<&LetterSpec> {
        self.letter_index.get(&glyph).map(|&i| &self.letters[i])
    }

    pub fn ligatures(&self) -> &[LigatureRule] {
        &self.ligatures
    }

    pub fn ligature(&self, surface: &str) -> Option<&LigatureRule> {
        self.ligature_index
            .get(surface)
            .map(|&i| &self.ligatures[i])
    }

    pub fn corruptions(&self) -> &[CorruptionRule] {
        &self.corruptions
    }

    /// Expands one glyph at a token position into its reading options,
    /// ordered by cost (ties keep model order: letter values first, then the
    /// otiose reading, then corruption borrowings).
    ///
    /// Errors if the glyph is not in the model; returns an empty list if the
    /// glyph is not admitted at `pos`.
    pub fn expand_glyph(&self, glyph: char, pos: GlyphPosition) -> Result<Vec<GlyphOption>> {
        let spec = self.letter(glyph).ok_or(Error::UnknownGlyph { glyph })?;
        if !spec.position.admits(pos) {
            return Ok(Vec::new());
        }
        let w = &self.weights;
        let mut options = Vec::with_capacity(spec.values.len() + 2);
        for (i, value) in spec.values.iter().enumerate() {
            if !value.position.admits(pos) {
                continue;
            }
            let (cost, rule) = if i == 0 {
                (w.base_value, RuleTag::Base)
            } else {
                (w.alternate_value, RuleTag::Alt)
            };
            options.push(GlyphOption {
                value: value.text.clone(),
                cost,
                rule,
            });
        }
        if (spec.flags.otiose_initial && pos.is_initial())
            || (spec.flags.otiose_final && pos.is_final())
        {
            options.push(GlyphOption {
                value: String::new(),
                cost: w.otiose_drop,
                rule: RuleTag::Otiose,
            });
        }
        for corr in &self.corruptions {
            if corr.from != glyph {
                continue;
            }
            if let Some(target) = self.letter(corr.to) {
                options.push(GlyphOption {
                    value: target.values[0].text.clone(),
                    cost: corr.cost,
                    rule: RuleTag::Corruption,
                });
            }
        }
        options.sort_by_key(|o| o.cost);
        Ok(options)
    }

    /// Referential checks that a parsed model is internally consistent.
    ///
    /// Ligature surfaces are allowed to contain characters that are not
    /// stand-alone letters (they only exist inside the ligature); such
    /// surfaces simply get no letter-by-letter reading.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |message: String| {
            out.push(Diagnostic {
                line: None,
                message,
            })
        };
        for rule in &self.ligatures {
            for exp in &rule.expansions {
                if let Some(components) = exp.strip_prefix('+') {
                    for c in components.chars() {
                        if self.letter(c).is_none() {
                            push(format!(
                                "ligature {:?}: expansion component {c:?} is not a letter",
                                rule.surface
                            ));
                        }
                    }
                }
            }
        }
        for corr in &self.corruptions {
            if self.letter(corr.from).is_none() {
                push(format!("corruption source {:?} is not a letter", corr.from));
            }
            if self.letter(corr.to).is_none() {
                push(format!("corruption target {:?} is not a letter", corr.to));
            }
        }
        for spec in &self.letters {
            let has_mark = spec.values.iter().any(|v| v.text.contains(LENGTH_MARK));
            if has_mark && !spec.flags.length_mark {
                push(format!(
                    "letter {:?} has a length-mark value but no length_mark flag",
                    spec.glyph
                ));
            }
            if spec.flags.length_mark && !has_mark {
                push(format!(
                    "letter {:?} is flagged length_mark but has no ¯ value",
                    spec.glyph
                ));
            }
        }
        out
    }
}

/// Splits a data row into fields, dropping a trailing comment field (one
/// starting with `#`).
fn split_fields(line: &str) -> Vec<&str> {
    let mut fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if let Some(pos) = fields.iter().position(|f| f.starts_with('#')) {
        fields.truncate(pos);
    }
    fields.retain(|f| !f.is_empty());
    fields
}

fn parse_u32(s: &str) -> Option<u32> {
    s.parse().ok()
}
