//! Pahlavi lexicon: consonant skeletons, vowel-insensitive matching, and
//! ranking of candidate readings against the matched entries.
//!
//! Matching works on consonant skeletons because the script drops most
//! vowels: `skeletonize` lowercases a word (heterograms, written fully
//! uppercase, stay as they are) and strips vowels, length marks and hyphens.
//! A candidate matches an entry when the skeletons are within a small edit
//! distance; matched readings are scored by candidate cost plus a weighted
//! edit distance.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::lattice::Candidate;
use crate::model::CostWeights;
use crate::text::compose_nfc;
use crate::{data, Error, Result};

/// Kind of lexicon entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    /// An ordinary Pahlavi word.
    Pahlavi,
    /// An Aramaic heterogram, conventionally written in capitals.
    Heterogram,
}

impl WordKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "pahlavi" => Some(WordKind::Pahlavi),
            "heterogram" => Some(WordKind::Heterogram),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WordKind::Pahlavi => "pahlavi",
            WordKind::Heterogram => "heterogram",
        }
    }
}

/// Where an entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconSource {
    /// A standard dictionary form.
    Dictionary,
    /// The Bundahesh (calendar and cosmology vocabulary).
    Bundahesh,
    /// A form posited by the transliteration hypothesis itself.
    Hypothesis,
}

impl LexiconSource {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "dictionary" => Some(LexiconSource::Dictionary),
            "bundahesh" => Some(LexiconSource::Bundahesh),
            "hypothesis" => Some(LexiconSource::Hypothesis),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LexiconSource::Dictionary => "dictionary",
            LexiconSource::Bundahesh => "bundahesh",
            LexiconSource::Hypothesis => "hypothesis",
        }
    }
}

/// Identification confidence: `A` firm, `B` hedged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Confidence {
    A,
    B,
}

impl Confidence {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(Confidence::A),
            "B" => Some(Confidence::B),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Confidence::A => "A",
            Confidence::B => "B",
        }
    }
}

/// One lexicon entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub headword: String,
    /// Consonant skeleton; always equals `skeletonize(headword)`.
    pub skeleton: String,
    pub gloss: String,
    pub kind: WordKind,
    pub source: LexiconSource,
    pub confidence: Confidence,
}

/// The lexicon, in file order.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

/// Characters removed when building a consonant skeleton.
fn is_stripped(c: char) -> bool {
    matches!(
        c,
        'a' | 'e' | 'i' | 'o' | 'u' | 'ā' | 'ē' | 'ī' | 'ō' | 'ū' | '¯' | '-'
    )
}

/// Reduces a word to its consonant skeleton: lowercase it and strip vowels,
/// length marks and hyphens. Fully uppercase words are heterogram spellings
/// and are returned unchanged. Idempotent.
pub fn skeletonize(word: &str) -> String {
    let has_upper = word.chars().any(char::is_uppercase);
    let has_lower = word.chars().any(char::is_lowercase);
    if has_upper && !has_lower {
        return word.to_string();
    }
    word.to_lowercase()
        .chars()
        .filter(|&c| !is_stripped(c))
        .collect()
}

/// Levenshtein distance over characters.
pub fn edit_distance(a: &str, b: &str) -> u32 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len() as u32;
    }
    if b.is_empty() {
        return a.len() as u32;
    }
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    let mut cur = vec![0u32; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + u32::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// A lexicon hit: entry index plus skeleton edit distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchHit {
    pub entry: usize,
    pub distance: u32,
}

impl Lexicon {
    pub fn parse(text: &str, label: &str) -> Result<Lexicon> {
        let err = |line: usize, msg: String| Error::Data {
            path: label.to_string(),
            line,
            msg,
        };
        let mut entries = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
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
            if fields.len() != 6 {
                return Err(err(
                    lineno,
                    "expected 6 columns: headword, skeleton, gloss, kind, source, confidence"
                        .into(),
                ));
            }
            let headword = fields[0].to_string();
            let skeleton = fields[1].to_string();
            let expected = skeletonize(&headword);
            if skeleton != expected {
                return Err(err(
                    lineno,
                    format!(
                        "skeleton {skeleton:?} does not match skeletonize({headword:?}) = {expected:?}"
                    ),
                ));
            }
            let kind = WordKind::parse(fields[3])
                .ok_or_else(|| err(lineno, format!("bad kind {:?}", fields[3])))?;
            let source = LexiconSource::parse(fields[4])
                .ok_or_else(|| err(lineno, format!("bad source {:?}", fields[4])))?;
            let confidence = Confidence::parse(fields[5])
                .ok_or_else(|| err(lineno, format!("bad confidence {:?}", fields[5])))?;
            if !seen.insert(headword.clone()) {
                return Err(err(lineno, format!("duplicate headword {headword:?}")));
            }
            entries.push(LexiconEntry {
                headword,
                skeleton,
                gloss: fields[2].to_string(),
                kind,
                source,
                confidence,
            });
        }
        if entries.is_empty() {
            return Err(err(0, "lexicon defines no entries".into()));
        }
        Ok(Lexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Lexicon> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Lexicon::parse(&text, &path.display().to_string())
    }

    /// The bundled default lexicon.
    pub fn bundled() -> &'static Lexicon {
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            Lexicon::parse(data::LEXICON, "builtin:lexicon.tsv")
                .expect("bundled lexicon must parse")
        })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> &LexiconEntry {
        &self.entries[index]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matches a candidate value against the lexicon, returning hits sorted
    /// by `(distance, headword)`.
    ///
    /// Ordinary entries match on skeleton edit distance up to `max_edit`.
    /// Heterogram entries additionally match at distance 0 when the
    /// candidate's skeleton equals the skeleton of the heterogram read as an
    /// ordinary (lowercased) word, so a lattice reading like `batr` can hit
    /// the entry `BATR`.
    pub fn match_candidate(&self, value: &str, max_edit: u32) -> Vec<MatchHit> {
        self.match_skeleton(&skeletonize(value), max_edit)
    }

    /// [`match_candidate`](Self::match_candidate) for an already-folded
    /// skeleton. Hits depend only on the skeleton, so callers matching many
    /// vowel variants of the same consonant frame can fold once and reuse.
    pub fn match_skeleton(&self, skel: &str, max_edit: u32) -> Vec<MatchHit> {
        let mut hits = Vec::new();
        for (i, entry) in self.entries.iter().enumerate() {
            let direct = edit_distance(skel, &entry.skeleton);
            let mut best = if direct <= max_edit {
                Some(direct)
            } else {
                None
            };
            if entry.kind == WordKind::Heterogram {
                let folded = skeletonize(&entry.headword.to_lowercase());
                if skel == folded {
                    best = Some(0);
                }
            }
            if let Some(distance) = best {
                hits.push(MatchHit { entry: i, distance });
            }
        }
        hits.sort_by(|a, b| {
            (a.distance, &self.entries[a.entry].headword)
                .cmp(&(b.distance, &self.entries[b.entry].headword))
        });
        hits
    }
}

/// A candidate together with its lexicon hits and combined score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reading {
    pub candidate: Candidate,
    /// Hits sorted by `(distance, headword)`; never empty.
    pub hits: Vec<MatchHit>,
    /// `candidate.cost + edit_weight * hits[0].distance`.
    pub score: u32,
}

/// Ranked output for one token.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ranked {
    /// Matched readings sorted by `(score, value)`.
    pub matched: Vec<Reading>,
    /// Cheapest candidate with no lexicon hit, if any. Reported after the
    /// matched readings.
    pub unmatched: Option<Candidate>,
}

/// Matches and ranks enumerated candidates.
///
/// Candidates are first deduplicated by value, keeping the cheapest (the
/// input is already in cost order). Each surviving candidate is matched
/// against the lexicon; readings with at least one hit are ranked by score.
pub fn rank_readings(
    candidates: &[Candidate],
    lexicon: &Lexicon,
    max_edit: u32,
    weights: &CostWeights,
) -> Ranked {
    let mut seen: HashSet<&str> = HashSet::new();
    // Vowel variants of one consonant frame share their hits; fold once.
    let mut by_skeleton: HashMap<String, Vec<MatchHit>> = HashMap::new();
    let mut ranked = Ranked::default();
    for cand in candidates {
        if !seen.insert(cand.value.as_str()) {
            continue;
        }
        let hits = by_skeleton
            .entry(skeletonize(&cand.value))
            .or_insert_with_key(|skel| lexicon.match_skeleton(skel, max_edit))
            .clone();
        if hits.is_empty() {
            if ranked.unmatched.is_none() {
                ranked.unmatched = Some(cand.clone());
            }
            continue;
        }
        let score = cand.cost + weights.edit * hits[0].distance;
        ranked.matched.push(Reading {
            candidate: cand.clone(),
            hits,
            score,
        });
    }
    ranked
        .matched
        .sort_by(|a, b| (a.score, &a.candidate.value).cmp(&(b.score, &b.candidate.value)));
    ranked
}

/// A headword with the best score any reading gives it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadwordRank {
    pub entry: usize,
    pub score: u32,
}

/// Collapses matched readings to distinct headwords, each scored by its best
/// hit (`candidate.cost + edit_weight * hit.distance`), sorted by
/// `(score, headword)`.
pub fn rank_headwords(
    matched: &[Reading],
    lexicon: &Lexicon,
    weights: &CostWeights,
) -> Vec<HeadwordRank> {
    let mut best: BTreeMap<usize, u32> = BTreeMap::new();
    for reading in matched {
        for hit in &reading.hits {
            let score = reading.candidate.cost + weights.edit * hit.distance;
            best.entry(hit.entry)
                .and_modify(|s| *s = (*s).min(score))
                .or_insert(score);
        }
    }
    let mut out: Vec<HeadwordRank> = best
        .into_iter()
        .map(|(entry, score)| HeadwordRank { entry, score })
        .collect();
    out.sort_by(|a, b| {
        (a.score, &lexicon.get(a.entry).headword).cmp(&(b.score, &lexicon.get(b.entry).headword))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skeletonize_strips_vowels_and_marks() {
        assert_eq!(skeletonize("bang"), "bng");
        assert_eq!(skeletonize("šān"), "šn");
        assert_eq!(skeletonize("wad-baxt"), "wdbxt");
        assert_eq!(skeletonize("rēšinad"), "ršnd");
        assert_eq!(skeletonize(""), "");
    }

    #[test]
    fn skeletonize_keeps_heterograms() {
        assert_eq!(skeletonize("BATR"), "BATR");
        // Mixed case is an ordinary word and folds.
        assert_eq!(skeletonize("šPīg"), "špg");
        assert_eq!(skeletonize("Wahman"), "whmn");
    }

    #[test]
    fn skeletonize_is_idempotent_on_fixtures() {
        for w in ["bang", "šān", "BATR", "šPīg", "wad-baxt", "muγ", ""] {
            let once = skeletonize(w);
            assert_eq!(skeletonize(&once), once);
        }
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("", ""), 0);
        assert_eq!(edit_distance("abc", "abc"), 0);
        assert_eq!(edit_distance("abc", "abd"), 1);
        assert_eq!(edit_distance("abc", "ab"), 1);
        assert_eq!(edit_distance("", "xyz"), 3);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
    }

    #[test]
    fn bundled_lexicon_parses_with_verified_skeletons() {
        let lex = Lexicon::bundled();
        assert!(lex.len() > 40);
        for entry in lex.entries() {
            assert_eq!(entry.skeleton, skeletonize(&entry.headword));
        }
    }

    #[test]
    fn skeleton_mismatch_is_rejected() {
        let text = "bang\tbg\thenbane\tpahlavi\tdictionary\tA\n";
        assert!(Lexicon::parse(text, "test").is_err());
    }

    #[test]
    fn match_is_vowel_insensitive() {
        let lex = Lexicon::bundled();
        let hits = lex.match_candidate("zoar", 2);
        assert_eq!(lex.get(hits[0].entry).headword, "zōr");
        assert_eq!(hits[0].distance, 0);
    }

    #[test]
    fn heterograms_match_through_folding() {
        let lex = Lexicon::bundled();
        let hits = lex.match_candidate("batr", 2);
        let batr = hits
            .iter()
            .find(|h| lex.get(h.entry).headword == "BATR")
            .expect("BATR hit");
        assert_eq!(batr.distance, 0);
    }

    #[test]
    fn hits_sort_by_distance_then_headword() {
        let lex = Lexicon::bundled();
        let hits = lex.match_candidate("bn", 2);
        let heads: Vec<&str> = hits
            .iter()
            .take(3)
            .map(|h| lex.get(h.entry).headword.as_str())
            .collect();
        // All three are at distance 1; alphabetical order breaks the tie.
        assert_eq!(heads, vec!["band", "bang", "bīm"]);
    }

    #[test]
    fn match_count_grows_with_max_edit() {
        let lex = Lexicon::bundled();
        let mut last = 0;
        for max_edit in 0..=3 {
            let n = lex.match_candidate("zr", max_edit).len();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn ranking_dedupes_values_and_reports_unmatched_last() {
        use crate::model::RuleTag;
        let lex = Lexicon::bundled();
        let weights = crate::model::ScriptModel::bundled().weights.clone();
        let mk = |value: &str, cost: u32| Candidate {
            value: value.into(),
            cost,
            choices: vec![0],
            rules: vec![RuleTag::Base],
        };
        let cands = vec![mk("qqq", 0), mk("zōr", 1), mk("zōr", 2), mk("qqq", 3)];
        let ranked = rank_readings(&cands, lex, 2, &weights);
        assert_eq!(ranked.matched.len(), 1);
        assert_eq!(ranked.matched[0].candidate.cost, 1);
        assert_eq!(ranked.unmatched.as_ref().unwrap().cost, 0);
    }
}
