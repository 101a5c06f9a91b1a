//! Report commands behind the CLI: transliteration, lexicon matching,
//! corpus statistics, and golden-case evaluation.
//!
//! All commands render to a string in either TSV (with a leading `#` header
//! line) or JSONL. Output is deterministic: identical inputs produce
//! byte-identical output. Warnings (budget truncation, import diagnostics)
//! are returned separately so they can go to stderr without disturbing the
//! payload.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde_json::json;

use crate::ingest::{parse_token, split_token, Corpus, Segmenter, Token};
use crate::lattice::{
    build_lattice, enumerate_candidates, find_candidate, Candidate, EnumerationResult,
};
use crate::lexicon::{rank_headwords, rank_readings, Confidence, Lexicon, Ranked};
use crate::model::ScriptModel;
use crate::text::compose_nfc;
use crate::{data, Error, Result};

/// Payload output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Jsonl,
}

/// Knobs shared by the report commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Cap on choice vectors drawn per token lattice.
    pub budget: usize,
    /// Maximum skeleton edit distance for lexicon matches.
    pub max_edit: u32,
    /// Matched readings reported per token by `cmd_match`.
    pub top: usize,
    pub format: OutputFormat,
    /// Split tokens at medial separator glyphs before reading them.
    pub split_on_separator: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: 100_000,
            max_edit: 2,
            top: 5,
            format: OutputFormat::Tsv,
            split_on_separator: false,
        }
    }
}

/// Rendered payload plus warnings destined for stderr.
#[derive(Debug, Clone, Default)]
pub struct CommandOutput {
    pub stdout: String,
    pub warnings: Vec<String>,
}

/// Pass gate for a golden case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// The expected headword must rank first.
    Top1,
    /// The expected headword must rank within the best three.
    Top3,
}

impl Gate {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "top1" => Some(Gate::Top1),
            "top3" => Some(Gate::Top3),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gate::Top1 => "top1",
            Gate::Top3 => "top3",
        }
    }

    fn limit(self) -> usize {
        match self {
            Gate::Top1 => 1,
            Gate::Top3 => 3,
        }
    }
}

/// One golden transliteration case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCase {
    /// Folio or section the token comes from.
    pub source: String,
    /// Token in native notation.
    pub token: String,
    /// Expected headword; `|` separates accepted alternatives.
    pub expected: String,
    pub gloss: String,
    pub confidence: Confidence,
    pub gate: Gate,
    /// 1-based line in the golden file.
    pub line: usize,
}

impl GoldenCase {
    pub fn alternatives(&self) -> impl Iterator<Item = &str> {
        self.expected.split('|')
    }
}

/// Parses a golden-case file.
pub fn parse_golden(text: &str, label: &str) -> Result<Vec<GoldenCase>> {
    let err = |line: usize, msg: String| Error::Data {
        path: label.to_string(),
        line,
        msg,
    };
    let mut cases = Vec::new();
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
                "expected 6 columns: source, token, expected, gloss, confidence, gate".into(),
            ));
        }
        let confidence = Confidence::parse(fields[4])
            .ok_or_else(|| err(lineno, format!("bad confidence {:?}", fields[4])))?;
        let gate = Gate::parse(fields[5])
            .ok_or_else(|| err(lineno, format!("bad gate {:?}", fields[5])))?;
        cases.push(GoldenCase {
            source: fields[0].to_string(),
            token: fields[1].to_string(),
            expected: fields[2].to_string(),
            gloss: fields[3].to_string(),
            confidence,
            gate,
            line: lineno,
        });
    }
    if cases.is_empty() {
        return Err(err(0, "golden file defines no cases".into()));
    }
    Ok(cases)
}

pub fn load_golden(path: &Path) -> Result<Vec<GoldenCase>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_golden(&text, &path.display().to_string())
}

/// The bundled golden cases.
pub fn bundled_golden() -> &'static [GoldenCase] {
    static CASES: OnceLock<Vec<GoldenCase>> = OnceLock::new();
    CASES.get_or_init(|| {
        parse_golden(data::GOLDEN_CASES, "builtin:golden.tsv")
            .expect("bundled golden cases must parse")
    })
}

/// Folds a value for exact-reachability comparison: hyphens are dropped
/// (lattices never emit them) and fully uppercase heterogram spellings are
/// lowercased (lattice values are lowercase).
fn fold_target(s: &str) -> String {
    let stripped: String = s.chars().filter(|&c| c != '-').collect();
    let has_upper = stripped.chars().any(char::is_uppercase);
    let has_lower = stripped.chars().any(char::is_lowercase);
    if has_upper && !has_lower {
        stripped.to_lowercase()
    } else {
        stripped
    }
}

/// Checks whether some alternative of a golden case is exactly derivable
/// from its token at final cost `max_cost` or less. Returns the witnessing
/// candidate.
pub fn reachable(
    case: &GoldenCase,
    model: &ScriptModel,
    budget: usize,
    max_cost: u32,
) -> Result<Option<Candidate>> {
    let seg = Segmenter::from_model(model);
    let token = parse_token(&case.token, &seg)?;
    let lattice = build_lattice(&token, model)?;
    for alt in case.alternatives() {
        let target = fold_target(alt);
        let hit = find_candidate(&lattice, &model.weights, budget, max_cost, |v| {
            fold_target(v) == target
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Outcome of evaluating one golden case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenEval {
    pub pass: bool,
    /// Best-ranked headword and its score, when anything matched.
    pub best: Option<(String, u32)>,
    pub truncated: bool,
}

/// Evaluates golden cases: enumerate, match, collapse to headwords, and
/// check the gate. Token or lattice failures are reported as golden-file
/// data errors carrying the case's line number.
pub fn evaluate_golden(
    cases: &[GoldenCase],
    model: &ScriptModel,
    lexicon: &Lexicon,
    cfg: &RunConfig,
) -> Result<Vec<GoldenEval>> {
    let seg = Segmenter::from_model(model);
    let mut out = Vec::with_capacity(cases.len());
    for case in cases {
        let token = parse_token(&case.token, &seg).map_err(|e| Error::Data {
            path: "golden".to_string(),
            line: case.line,
            msg: e.to_string(),
        })?;
        let lattice = build_lattice(&token, model).map_err(|e| Error::Data {
            path: "golden".to_string(),
            line: case.line,
            msg: e.to_string(),
        })?;
        let res = enumerate_candidates(&lattice, &model.weights, cfg.budget);
        let ranked = rank_readings(&res.candidates, lexicon, cfg.max_edit, &model.weights);
        let heads = rank_headwords(&ranked.matched, lexicon, &model.weights);
        let alts: Vec<&str> = case.alternatives().collect();
        let pass = heads
            .iter()
            .take(case.gate.limit())
            .any(|h| alts.contains(&lexicon.get(h.entry).headword.as_str()));
        let best = heads
            .first()
            .map(|h| (lexicon.get(h.entry).headword.clone(), h.score));
        out.push(GoldenEval {
            pass,
            best,
            truncated: res.truncated,
        });
    }
    Ok(out)
}

/// Golden command result: rendered report plus pass counters per tier.
#[derive(Debug, Clone)]
pub struct GoldenOutcome {
    pub output: CommandOutput,
    /// (passed, total) over confidence-A cases.
    pub tier_a: (usize, usize),
    /// (passed, total) over confidence-B cases.
    pub tier_b: (usize, usize),
}

impl GoldenOutcome {
    /// True when every confidence-A case passed.
    pub fn tier_a_ok(&self) -> bool {
        self.tier_a.0 == self.tier_a.1
    }
}

/// Evaluates golden cases and renders the report. The last stdout line is
/// always the summary `tierA: p/n, tierB: p/m`.
pub fn cmd_golden(
    cases: &[GoldenCase],
    model: &ScriptModel,
    lexicon: &Lexicon,
    cfg: &RunConfig,
) -> Result<GoldenOutcome> {
    let evals = evaluate_golden(cases, model, lexicon, cfg)?;
    let mut output = CommandOutput::default();
    let mut tier_a = (0, 0);
    let mut tier_b = (0, 0);
    if cfg.format == OutputFormat::Tsv {
        output.stdout.push_str(
            "#source\ttoken\texpected\tconfidence\tgate\tresult\tbest_headword\tbest_score\n",
        );
    }
    for (case, eval) in cases.iter().zip(&evals) {
        let tier = match case.confidence {
            Confidence::A => &mut tier_a,
            Confidence::B => &mut tier_b,
        };
        tier.1 += 1;
        if eval.pass {
            tier.0 += 1;
        }
        if eval.truncated {
            output.warnings.push(format!(
                "{} token {:?}: enumeration truncated at budget {}",
                case.source, case.token, cfg.budget
            ));
        }
        let result = if eval.pass { "PASS" } else { "FAIL" };
        match cfg.format {
            OutputFormat::Tsv => {
                let (head, score) = match &eval.best {
                    Some((h, s)) => (h.clone(), s.to_string()),
                    None => ("-".to_string(), "-".to_string()),
                };
                output.stdout.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    case.source,
                    case.token,
                    case.expected,
                    case.confidence.as_str(),
                    case.gate.as_str(),
                    result,
                    head,
                    score
                ));
            }
            OutputFormat::Jsonl => {
                let row = json!({
                    "source": case.source,
                    "token": case.token,
                    "expected": case.expected,
                    "confidence": case.confidence.as_str(),
                    "gate": case.gate.as_str(),
                    "result": result,
                    "best_headword": eval.best.as_ref().map(|(h, _)| h.clone()),
                    "best_score": eval.best.as_ref().map(|(_, s)| *s),
                });
                output.stdout.push_str(&row.to_string());
                output.stdout.push('\n');
            }
        }
    }
    output.stdout.push_str(&format!(
        "tierA: {}/{}, tierB: {}/{}\n",
        tier_a.0, tier_a.1, tier_b.0, tier_b.1
    ));
    Ok(GoldenOutcome {
        output,
        tier_a,
        tier_b,
    })
}

/// Tokens of a corpus with split-on-separator applied when configured.
fn effective_tokens<'a>(
    corpus: &'a Corpus,
    model: &ScriptModel,
    cfg: &RunConfig,
) -> Vec<(&'a str, u32, Token)> {
    let mut out = Vec::new();
    for (line, token) in corpus.tokens() {
        if cfg.split_on_separator {
            for piece in split_token(token, model) {
                out.push((line.folio.as_str(), line.number, piece));
            }
        } else {
            out.push((line.folio.as_str(), line.number, token.clone()));
        }
    }
    out
}

fn enumerate_token(
    token: &Token,
    folio: &str,
    number: u32,
    model: &ScriptModel,
    cfg: &RunConfig,
    warnings: &mut Vec<String>,
) -> Result<EnumerationResult> {
    let lattice = build_lattice(token, model)?;
    let res = enumerate_candidates(&lattice, &model.weights, cfg.budget);
    if res.truncated {
        warnings.push(format!(
            "{}:{} token {:?}: enumeration truncated at budget {}",
            folio, number, token.text, cfg.budget
        ));
    }
    Ok(res)
}

/// Best reading per token.
pub fn cmd_translit(
    corpus: &Corpus,
    model: &ScriptModel,
    cfg: &RunConfig,
) -> Result<CommandOutput> {
    let mut output = CommandOutput::default();
    if cfg.format == OutputFormat::Tsv {
        output
            .stdout
            .push_str("#folio\tline\ttoken\treading\tcost\trules\n");
    }
    for (folio, number, token) in effective_tokens(corpus, model, cfg) {
        let res = enumerate_token(&token, folio, number, model, cfg, &mut output.warnings)?;
        let best = match res.candidates.first() {
            Some(c) => c,
            None => continue,
        };
        match cfg.format {
            OutputFormat::Tsv => {
                let rules: Vec<&str> = best.rules.iter().map(|r| r.as_str()).collect();
                output.stdout.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    folio,
                    number,
                    token.text,
                    best.value,
                    best.cost,
                    rules.join("+")
                ));
            }
            OutputFormat::Jsonl => {
                let row = json!({
                    "folio": folio,
                    "line": number,
                    "token": token.text,
                    "reading": best.value,
                    "cost": best.cost,
                    "rules": best.rules.iter().map(|r| r.as_str()).collect::<Vec<_>>(),
                });
                output.stdout.push_str(&row.to_string());
                output.stdout.push('\n');
            }
        }
    }
    Ok(output)
}

fn ranked_for_token(
    token: &Token,
    folio: &str,
    number: u32,
    model: &ScriptModel,
    lexicon: &Lexicon,
    cfg: &RunConfig,
    warnings: &mut Vec<String>,
) -> Result<Ranked> {
    let res = enumerate_token(token, folio, number, model, cfg, warnings)?;
    Ok(rank_readings(
        &res.candidates,
        lexicon,
        cfg.max_edit,
        &model.weights,
    ))
}

/// Ranked lexicon matches per token: up to `cfg.top` matched readings, then
/// the cheapest unmatched reading flagged `unmatched`.
pub fn cmd_match(
    corpus: &Corpus,
    model: &ScriptModel,
    lexicon: &Lexicon,
    cfg: &RunConfig,
) -> Result<CommandOutput> {
    let mut output = CommandOutput::default();
    if cfg.format == OutputFormat::Tsv {
        output.stdout.push_str(
            "#folio\tline\ttoken\trank\treading\tcost\tdistance\tscore\theadword\tgloss\tstatus\n",
        );
    }
    for (folio, number, token) in effective_tokens(corpus, model, cfg) {
        let ranked = ranked_for_token(
            &token,
            folio,
            number,
            model,
            lexicon,
            cfg,
            &mut output.warnings,
        )?;
        let mut rank = 0usize;
        for reading in ranked.matched.iter().take(cfg.top) {
            rank += 1;
            let best_hit = reading.hits[0];
            let entry = lexicon.get(best_hit.entry);
            match cfg.format {
                OutputFormat::Tsv => {
                    output.stdout.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\tmatched\n",
                        folio,
                        number,
                        token.text,
                        rank,
                        reading.candidate.value,
                        reading.candidate.cost,
                        best_hit.distance,
                        reading.score,
                        entry.headword,
                        entry.gloss
                    ));
                }
                OutputFormat::Jsonl => {
                    let matches: Vec<serde_json::Value> = reading
                        .hits
                        .iter()
                        .map(|h| {
                            let e = lexicon.get(h.entry);
                            json!({
                                "headword": e.headword,
                                "distance": h.distance,
                                "gloss": e.gloss,
                            })
                        })
                        .collect();
                    let row = json!({
                        "folio": folio,
                        "line": number,
                        "token": token.text,
                        "rank": rank,
                        "reading": reading.candidate.value,
                        "cost": reading.candidate.cost,
                        "distance": best_hit.distance,
                        "score": reading.score,
                        "headword": entry.headword,
                        "gloss": entry.gloss,
                        "status": "matched",
                        "matches": matches,
                    });
                    output.stdout.push_str(&row.to_string());
                    output.stdout.push('\n');
                }
            }
        }
        if let Some(unmatched) = &ranked.unmatched {
            rank += 1;
            match cfg.format {
                OutputFormat::Tsv => {
                    output.stdout.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t-\t{}\t-\t-\tunmatched\n",
                        folio,
                        number,
                        token.text,
                        rank,
                        unmatched.value,
                        unmatched.cost,
                        unmatched.cost
                    ));
                }
                OutputFormat::Jsonl => {
                    let row = json!({
                        "folio": folio,
                        "line": number,
                        "token": token.text,
                        "rank": rank,
                        "reading": unmatched.value,
                        "cost": unmatched.cost,
                        "distance": serde_json::Value::Null,
                        "score": unmatched.cost,
                        "headword": serde_json::Value::Null,
                        "gloss": serde_json::Value::Null,
                        "status": "unmatched",
                        "matches": [],
                    });
                    output.stdout.push_str(&row.to_string());
                    output.stdout.push('\n');
                }
            }
        }
    }
    Ok(output)
}

/// Corpus counts used by `cmd_stats`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub lines: u64,
    pub tokens: u64,
    pub units: u64,
    pub ligature_units: u64,
    pub opaque_units: u64,
    /// Medial glyphs carrying the separator flag.
    pub medial_separators: u64,
    /// Per-letter counts over unit surfaces (opaque characters excluded).
    pub glyphs: BTreeMap<char, u64>,
}

/// Counts a corpus against a model.
pub fn corpus_stats(corpus: &Corpus, model: &ScriptModel) -> CorpusStats {
    use crate::ingest::Unit;
    let mut stats = CorpusStats {
        lines: corpus.lines.len() as u64,
        ..CorpusStats::default()
    };
    for (_, token) in corpus.tokens() {
        stats.tokens += 1;
        let len = token.units.len();
        for (i, unit) in token.units.iter().enumerate() {
            stats.units += 1;
            match unit {
                Unit::Glyph(g) => {
                    *stats.glyphs.entry(*g).or_insert(0) += 1;
                    let medial = i > 0 && i + 1 < len;
                    if medial && model.letter(*g).is_some_and(|l| l.flags.separator) {
                        stats.medial_separators += 1;
                    }
                }
                Unit::Ligature(s) => {
                    stats.ligature_units += 1;
                    for c in s.chars() {
                        *stats.glyphs.entry(c).or_insert(0) += 1;
                    }
                }
                Unit::Opaque(_) => {
                    stats.opaque_units += 1;
                }
            }
        }
    }
    stats
}

/// Renders corpus statistics.
pub fn cmd_stats(corpus: &Corpus, model: &ScriptModel, cfg: &RunConfig) -> Result<CommandOutput> {
    let stats = corpus_stats(corpus, model);
    let mut output = CommandOutput::default();
    match cfg.format {
        OutputFormat::Tsv => {
            output.stdout.push_str("#stat\tvalue\n");
            let scalars = [
                ("lines", stats.lines),
                ("tokens", stats.tokens),
                ("units", stats.units),
                ("ligature_units", stats.ligature_units),
                ("opaque_units", stats.opaque_units),
                ("medial_separators", stats.medial_separators),
            ];
            for (name, value) in scalars {
                output.stdout.push_str(&format!("{name}\t{value}\n"));
            }
            for (glyph, count) in &stats.glyphs {
                output.stdout.push_str(&format!("glyph:{glyph}\t{count}\n"));
            }
        }
        OutputFormat::Jsonl => {
            let glyphs: BTreeMap<String, u64> = stats
                .glyphs
                .iter()
                .map(|(g, c)| (g.to_string(), *c))
                .collect();
            let row = json!({
                "lines": stats.lines,
                "tokens": stats.tokens,
                "units": stats.units,
                "ligature_units": stats.ligature_units,
                "opaque_units": stats.opaque_units,
                "medial_separators": stats.medial_separators,
                "glyphs": glyphs,
            });
            output.stdout.push_str(&row.to_string());
            output.stdout.push('\n');
        }
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_corpus;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn bundled_golden_file_parses() {
        let cases = bundled_golden();
        assert_eq!(cases.len(), 41);
        let tier_a = cases
            .iter()
            .filter(|c| c.confidence == Confidence::A)
            .count();
        assert_eq!(tier_a, 20);
        // Flagship cases gate on top1.
        let top1: Vec<&str> = cases
            .iter()
            .filter(|c| c.gate == Gate::Top1)
            .map(|c| c.expected.as_str())
            .collect();
        assert_eq!(top1, vec!["bang", "šān", "xwar", "day"]);
    }

    #[test]
    fn malformed_golden_is_rejected() {
        assert!(parse_golden("f1r\tBccNcy\tbang\n", "test").is_err());
        assert!(parse_golden("f1r\tBccNcy\tbang\thenbane\tC\ttop1\n", "test").is_err());
        assert!(parse_golden("f1r\tBccNcy\tbang\thenbane\tA\ttop9\n", "test").is_err());
    }

    #[test]
    fn alternation_splits_on_pipe() {
        let cases = parse_golden("f1\tMht\tmih|mahist\tg\tA\ttop3\n", "test").unwrap();
        let alts: Vec<&str> = cases[0].alternatives().collect();
        assert_eq!(alts, vec!["mih", "mahist"]);
    }

    #[test]
    fn fold_target_strips_hyphens_and_case_folds_heterograms() {
        assert_eq!(fold_target("wad-baxt"), "wadbaxt");
        assert_eq!(fold_target("BATR"), "batr");
        assert_eq!(fold_target("Spandarmad"), "Spandarmad");
    }

    #[test]
    fn summary_line_format() {
        let model = ScriptModel::bundled();
        let lexicon = Lexicon::bundled();
        let cases = parse_golden("f31r\tBccNcy\tbang\thenbane\tA\ttop1\n", "test").unwrap();
        let outcome = cmd_golden(&cases, model, lexicon, &cfg()).unwrap();
        let last = outcome.output.stdout.lines().last().unwrap();
        assert_eq!(last, "tierA: 1/1, tierB: 0/0");
        assert!(outcome.tier_a_ok());
    }

    #[test]
    fn stats_count_the_sample_corpus() {
        let corpus = parse_corpus(crate::data::SAMPLE_CORPUS).unwrap();
        let stats = corpus_stats(&corpus, ScriptModel::bundled());
        assert_eq!(stats.lines, 18);
        assert_eq!(stats.tokens, 43);
        assert_eq!(stats.opaque_units, 0);
        assert!(stats.ligature_units > 0);
        let total_glyphs: u64 = stats.glyphs.values().sum();
        assert!(total_glyphs > stats.units);
    }

    #[test]
    fn translit_reports_one_row_per_token() {
        let corpus = parse_corpus("# f31r:1\nBccNcy šcoN\n").unwrap();
        let out = cmd_translit(&corpus, ScriptModel::bundled(), &cfg()).unwrap();
        let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].contains("šān"));
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn match_reports_ranked_readings_and_unmatched_tail() {
        let corpus = parse_corpus("# f16r:1\nšcoN\n").unwrap();
        let out = cmd_match(&corpus, ScriptModel::bundled(), Lexicon::bundled(), &cfg()).unwrap();
        let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
        assert!(rows[0].contains("šān") && rows[0].contains("matched"));
        // Every unmatched row comes after all matched rows for the token.
        let statuses: Vec<&str> = rows
            .iter()
            .map(|r| *r.split('\t').collect::<Vec<_>>().last().unwrap())
            .collect();
        if let Some(first_unmatched) = statuses.iter().position(|s| *s == "unmatched") {
            assert!(statuses[first_unmatched..]
                .iter()
                .all(|s| *s == "unmatched"));
        }
    }

    #[test]
    fn jsonl_rows_parse_and_mirror_tsv_fields() {
        let corpus = parse_corpus("# f16r:1\nšcoN\n").unwrap();
        let mut jcfg = cfg();
        jcfg.format = OutputFormat::Jsonl;
        let out = cmd_match(&corpus, ScriptModel::bundled(), Lexicon::bundled(), &jcfg).unwrap();
        let first: serde_json::Value =
            serde_json::from_str(out.stdout.lines().next().unwrap()).unwrap();
        assert_eq!(first["folio"], "f16r");
        assert_eq!(first["rank"], 1);
        assert_eq!(first["status"], "matched");
    }

    #[test]
    fn golden_case_token_errors_carry_the_case_line() {
        let model = ScriptModel::bundled();
        let lexicon = Lexicon::bundled();
        let cases = parse_golden("fx\tqqq\tbang\tg\tA\ttop1\n", "test").unwrap();
        let e = evaluate_golden(&cases, model, lexicon, &cfg()).unwrap_err();
        assert!(matches!(e, Error::Data { line: 1, .. }));
    }
}
