//! Ambiguity lattices and cost-ordered candidate enumeration.
//!
//! A lattice has one option set per token unit. A candidate picks one option
//! per set; its value is the concatenation of the chosen values with length
//! marks applied, and its cost is the sum of the chosen option costs plus
//! one `otiose_drop` per length mark that never found a vowel.
//!
//! Candidates are enumerated lazily in increasing `(cost, value, choices)`
//! order under a draw budget, so deep lattices stay affordable and output
//! order is a deterministic total order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::ingest::{Token, Unit};
use crate::model::{
    CostWeights, GlyphOption, GlyphPosition, RuleTag, ScriptModel, LENGTH_MARK, UNKNOWN_GLYPH_COST,
};
use crate::{Error, Result};

/// The weighted reading options of one token unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionSet {
    pub options: Vec<GlyphOption>,
}

/// One option set per unit of a token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub sets: Vec<OptionSet>,
}

impl Lattice {
    /// Number of distinct choice vectors.
    pub fn combinations(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.options.len() as u128))
    }
}

/// One assembled reading of a whole token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    /// Concatenated value with length marks applied.
    pub value: String,
    /// Sum of option costs plus any dropped-mark penalties.
    pub cost: u32,
    /// Option index chosen at each position.
    pub choices: Vec<usize>,
    /// Rule tag per position, plus one `mark_drop` per dropped length mark.
    pub rules: Vec<RuleTag>,
}

/// Result of a budgeted enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Candidates in increasing `(cost, value, choices)` order. When
    /// truncated, this is a prefix of what a larger budget would return.
    pub candidates: Vec<Candidate>,
    /// True when the budget ran out before the lattice was exhausted.
    pub truncated: bool,
}

/// Builds the ambiguity lattice for a token.
///
/// Unknown glyphs and opaque units expand to a single `?` option at
/// [`UNKNOWN_GLYPH_COST`]; forced ligature groups must name a surface known
/// to the model.
pub fn build_lattice(token: &Token, model: &ScriptModel) -> Result<Lattice> {
    let len = token.units.len();
    let mut sets = Vec::with_capacity(len);
    for (i, unit) in token.units.iter().enumerate() {
        let pos = GlyphPosition::of(i, len);
        let options = match unit {
            Unit::Glyph(g) => match model.expand_glyph(*g, pos) {
                Ok(opts) if !opts.is_empty() => opts,
                Ok(_) => {
                    return Err(Error::Token {
                        token: token.text.clone(),
                        msg: format!("glyph {g:?} is not admitted at this position"),
                    })
                }
                Err(Error::UnknownGlyph { .. }) => vec![opaque_option()],
                Err(e) => return Err(e),
            },
            Unit::Ligature(surface) => {
                ligature_options(model, surface, pos).map_err(|msg| Error::Token {
                    token: token.text.clone(),
                    msg,
                })?
            }
            Unit::Opaque(_) => vec![opaque_option()],
        };
        sets.push(OptionSet { options });
    }
    Ok(Lattice { sets })
}

fn opaque_option() -> GlyphOption {
    GlyphOption {
        value: "?".to_string(),
        cost: UNKNOWN_GLYPH_COST,
        rule: RuleTag::Opaque,
    }
}

/// Options for a ligature surface: each rule expansion at the rule cost,
/// then the letter-by-letter readings at `ligature_alt` plus the component
/// costs (only when every surface character is itself a letter).
fn ligature_options(
    model: &ScriptModel,
    surface: &str,
    pos: GlyphPosition,
) -> std::result::Result<Vec<GlyphOption>, String> {
    let rule = model
        .ligature(surface)
        .ok_or_else(|| format!("unknown ligature group {{{surface}}}"))?;
    let mut options = Vec::new();
    for exp in &rule.expansions {
        let value = match exp.strip_prefix('+') {
            None => exp.clone(),
            Some(components) => {
                let mut v = String::new();
                for c in components.chars() {
                    let spec = model.letter(c).ok_or_else(|| {
                        format!("ligature {{{surface}}}: unknown component {c:?}")
                    })?;
                    v.push_str(&spec.values[0].text);
                }
                v
            }
        };
        options.push(GlyphOption {
            value,
            cost: rule.cost,
            rule: RuleTag::Ligature,
        });
    }
    let chars: Vec<char> = surface.chars().collect();
    if chars.iter().all(|&c| model.letter(c).is_some()) {
        let per_component: Vec<Vec<GlyphOption>> = chars
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let comp_pos = component_position(pos, j, chars.len());
                model
                    .expand_glyph(c, comp_pos)
                    .expect("component checked to be a letter")
            })
            .collect();
        if per_component.iter().all(|opts| !opts.is_empty()) {
            let mut stack = vec![(String::new(), 0u32)];
            for opts in &per_component {
                let mut next = Vec::with_capacity(stack.len() * opts.len());
                for (value, cost) in &stack {
                    for opt in opts {
                        next.push((format!("{value}{}", opt.value), cost + opt.cost));
                    }
                }
                stack = next;
            }
            let w = &model.weights;
            for (value, cost) in stack {
                if value.is_empty() && !(pos.is_initial() || pos.is_final()) {
                    continue;
                }
                options.push(GlyphOption {
                    value,
                    cost: w.ligature_alt + cost,
                    rule: RuleTag::LigatureAlt,
                });
            }
        }
    }
    options.sort_by_key(|o| o.cost);
    Ok(options)
}

/// Position of component `j` inside a group standing at `pos`.
fn component_position(pos: GlyphPosition, j: usize, len: usize) -> GlyphPosition {
    let first = j == 0 && pos.is_initial();
    let last = j + 1 == len && pos.is_final();
    match (first, last) {
        (true, true) => GlyphPosition::Only,
        (true, false) => GlyphPosition::Initial,
        (false, true) => GlyphPosition::Final,
        (false, false) => GlyphPosition::Medial,
    }
}

fn is_short_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn is_long_vowel(c: char) -> bool {
    matches!(c, 'ā' | 'ē' | 'ī' | 'ō' | 'ū')
}

fn lengthen(c: char) -> char {
    match c {
        'a' => 'ā',
        'e' => 'ē',
        'i' => 'ī',
        'o' => 'ō',
        'u' => 'ū',
        other => other,
    }
}

/// Assembles the candidate for one choice vector.
///
/// Length marks (`¯`) lengthen the nearest vowel to their left; a mark with
/// no vowel yet waits for the next vowel appended to its right; a mark that
/// never finds a vowel is dropped at `otiose_drop` cost. Lengthening an
/// already-long vowel is absorbed silently.
pub fn assemble(sets: &[OptionSet], choices: &[usize], weights: &CostWeights) -> Candidate {
    let mut out: Vec<char> = Vec::new();
    let mut pending: u32 = 0;
    let mut cost: u32 = 0;
    let mut rules = Vec::with_capacity(choices.len());
    for (set, &choice) in sets.iter().zip(choices) {
        let opt = &set.options[choice];
        cost += opt.cost;
        rules.push(opt.rule);
        for ch in opt.value.chars() {
            if ch == LENGTH_MARK {
                if !lengthen_leftward(&mut out) {
                    pending += 1;
                }
            } else if pending > 0 && (is_short_vowel(ch) || is_long_vowel(ch)) {
                out.push(lengthen(ch));
                pending = 0;
            } else {
                out.push(ch);
            }
        }
    }
    for _ in 0..pending {
        cost += weights.otiose_drop;
        rules.push(RuleTag::MarkDrop);
    }
    Candidate {
        value: out.into_iter().collect(),
        cost,
        choices: choices.to_vec(),
        rules,
    }
}

/// Applies a length mark to the nearest vowel on the left, in place.
/// Returns false when the buffer holds no vowel.
fn lengthen_leftward(out: &mut [char]) -> bool {
    for c in out.iter_mut().rev() {
        if is_short_vowel(*c) {
            *c = lengthen(*c);
            return true;
        }
        if is_long_vowel(*c) {
            return true; // absorbed
        }
    }
    false
}

/// Search node: base cost (sum of option costs, before mark adjustments),
/// choices, and the leftmost position successors may increment. Heap order
/// is `(cost, seq)`: the insertion sequence breaks cost ties in O(1), which
/// is sound because emission order is settled downstream — the reorder
/// buffer sorts by final `(cost, value, choices)` and only the base cost of
/// the heap frontier gates emission.
struct Node {
    cost: u32,
    seq: u64,
    choices: Box<[u16]>,
    frontier: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.seq == other.seq
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.cost, self.seq).cmp(&(other.cost, other.seq))
    }
}

/// Guards the `u16` choice indices used inside search nodes.
fn assert_indexable(sets: &[OptionSet]) {
    assert!(
        sets.iter().all(|s| s.options.len() <= 1 << 16),
        "option set exceeds enumerator index width"
    );
}

/// Enumerates candidates in increasing `(cost, value, choices)` order.
///
/// Expects each option set sorted by cost, as [`build_lattice`] produces.
/// `budget` caps the number of choice vectors drawn from the lattice. The
/// result is always a correctly ordered prefix: enlarging the budget only
/// appends candidates, never reorders or removes them.
pub fn enumerate_candidates(
    lattice: &Lattice,
    weights: &CostWeights,
    budget: usize,
) -> EnumerationResult {
    let sets = &lattice.sets;
    let mut result = EnumerationResult {
        candidates: Vec::new(),
        truncated: false,
    };
    if sets.is_empty() || sets.iter().any(|s| s.options.is_empty()) {
        return result;
    }
    assert_indexable(sets);
    let root_cost: u32 = sets.iter().map(|s| s.options[0].cost).sum();
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Reverse(Node {
        cost: root_cost,
        seq,
        choices: vec![0u16; sets.len()].into_boxed_slice(),
        frontier: 0,
    }));
    // Assembled candidates wait here until no unexplored vector can have a
    // smaller final cost; mark drops can raise a candidate's cost above its
    // base cost, so emission order is only settled up to the heap frontier.
    let mut buffer: BTreeMap<(u32, String, Vec<usize>), Vec<RuleTag>> = BTreeMap::new();
    let mut drawn = 0usize;
    let mut scratch = vec![0usize; sets.len()];
    while let Some(Reverse(node)) = heap.pop() {
        if drawn == budget {
            result.truncated = true;
            break;
        }
        drawn += 1;
        for (s, &c) in scratch.iter_mut().zip(node.choices.iter()) {
            *s = c as usize;
        }
        let cand = assemble(sets, &scratch, weights);
        buffer.insert((cand.cost, cand.value, cand.choices), cand.rules);
        for j in node.frontier..sets.len() {
            let cur = node.choices[j] as usize;
            let next = cur + 1;
            if next < sets[j].options.len() {
                let mut child = node.choices.clone();
                child[j] = next as u16;
                seq += 1;
                heap.push(Reverse(Node {
                    cost: node.cost - sets[j].options[cur].cost + sets[j].options[next].cost,
                    seq,
                    choices: child,
                    frontier: j,
                }));
            }
        }
        let bar = heap.peek().map(|Reverse(n)| n.cost);
        while let Some(entry) = buffer.first_entry() {
            match bar {
                Some(b) if entry.key().0 >= b => break,
                _ => {
                    let ((cost, value, choices), rules) = entry.remove_entry();
                    result.candidates.push(Candidate {
                        value,
                        cost,
                        choices,
                        rules,
                    });
                }
            }
        }
    }
    if !result.truncated {
        for ((cost, value, choices), rules) in buffer {
            result.candidates.push(Candidate {
                value,
                cost,
                choices,
                rules,
            });
        }
    }
    result
}

/// Lazily searches for a candidate with final cost at most `max_cost` whose
/// value satisfies `pred`. Exploration stops once every remaining vector is
/// over the cap or the budget is spent.
pub fn find_candidate(
    lattice: &Lattice,
    weights: &CostWeights,
    budget: usize,
    max_cost: u32,
    mut pred: impl FnMut(&str) -> bool,
) -> Option<Candidate> {
    let sets = &lattice.sets;
    if sets.is_empty() || sets.iter().any(|s| s.options.is_empty()) {
        return None;
    }
    assert_indexable(sets);
    let root_cost: u32 = sets.iter().map(|s| s.options[0].cost).sum();
    if root_cost > max_cost {
        return None;
    }
    let mut heap: BinaryHeap<Reverse<Node>> = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Reverse(Node {
        cost: root_cost,
        seq,
        choices: vec![0u16; sets.len()].into_boxed_slice(),
        frontier: 0,
    }));
    let mut drawn = 0usize;
    let mut scratch = vec![0usize; sets.len()];
    while let Some(Reverse(node)) = heap.pop() {
        if node.cost > max_cost || drawn == budget {
            return None;
        }
        drawn += 1;
        for (s, &c) in scratch.iter_mut().zip(node.choices.iter()) {
            *s = c as usize;
        }
        let cand = assemble(sets, &scratch, weights);
        if cand.cost <= max_cost && pred(&cand.value) {
            return Some(cand);
        }
        for j in node.frontier..sets.len() {
            let cur = node.choices[j] as usize;
            let next = cur + 1;
            if next < sets[j].options.len() {
                let child_cost = node.cost - sets[j].options[cur].cost + sets[j].options[next].cost;
                if child_cost > max_cost {
                    continue;
                }
                let mut child = node.choices.clone();
                child[j] = next as u16;
                seq += 1;
                heap.push(Reverse(Node {
                    cost: child_cost,
                    seq,
                    choices: child,
                    frontier: j,
                }));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_token, Segmenter};

    fn set(options: &[(&str, u32)]) -> OptionSet {
        OptionSet {
            options: options
                .iter()
                .map(|(v, c)| GlyphOption {
                    value: v.to_string(),
                    cost: *c,
                    rule: RuleTag::Base,
                })
                .collect(),
        }
    }

    fn enumerate_all(lattice: &Lattice) -> Vec<Candidate> {
        let res = enumerate_candidates(lattice, &CostWeights::default(), 1_000_000);
        assert!(!res.truncated);
        res.candidates
    }

    /// Exhaustive cartesian-product enumeration, sorted the same way.
    fn brute_force(lattice: &Lattice, weights: &CostWeights) -> Vec<Candidate> {
        let sizes: Vec<usize> = lattice.sets.iter().map(|s| s.options.len()).collect();
        let mut choices = vec![0usize; sizes.len()];
        let mut out = Vec::new();
        loop {
            out.push(assemble(&lattice.sets, &choices, weights));
            let mut j = sizes.len();
            loop {
                if j == 0 {
                    out.sort_by(|a, b| {
                        (a.cost, &a.value, &a.choices).cmp(&(b.cost, &b.value, &b.choices))
                    });
                    return out;
                }
                j -= 1;
                choices[j] += 1;
                if choices[j] < sizes[j] {
                    break;
                }
                choices[j] = 0;
            }
        }
    }

    #[test]
    fn two_by_three_gives_six_candidates() {
        let lattice = Lattice {
            sets: vec![
                set(&[("b", 0), ("p", 1)]),
                set(&[("a", 0), ("ā", 1), ("e", 2)]),
            ],
        };
        let all = enumerate_all(&lattice);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].value, "ba");
        assert_eq!(all[0].cost, 0);
        assert_eq!(brute_force(&lattice, &CostWeights::default()), all);
    }

    #[test]
    fn order_is_cost_then_value_then_choices() {
        let lattice = Lattice {
            sets: vec![set(&[("z", 0), ("a", 0)]), set(&[("z", 0)])],
        };
        let all = enumerate_all(&lattice);
        let values: Vec<&str> = all.iter().map(|c| c.value.as_str()).collect();
        assert_eq!(values, vec!["az", "zz"]);
    }

    #[test]
    fn marks_lengthen_leftward() {
        let lattice = Lattice {
            sets: vec![set(&[("za", 0)]), set(&[("¯", 0)]), set(&[("d", 0)])],
        };
        let all = enumerate_all(&lattice);
        assert_eq!(all[0].value, "zād");
        assert_eq!(all[0].cost, 0);
    }

    #[test]
    fn marks_wait_for_the_next_vowel() {
        let lattice = Lattice {
            sets: vec![
                set(&[("n", 0)]),
                set(&[("¯", 0)]),
                set(&[("m", 0)]),
                set(&[("a", 0)]),
            ],
        };
        assert_eq!(enumerate_all(&lattice)[0].value, "nmā");
    }

    #[test]
    fn long_vowels_absorb_marks() {
        let lattice = Lattice {
            sets: vec![set(&[("zā", 0)]), set(&[("¯", 0)])],
        };
        let all = enumerate_all(&lattice);
        assert_eq!(all[0].value, "zā");
        assert_eq!(all[0].cost, 0);
    }

    #[test]
    fn unplaceable_marks_cost_otiose_drop() {
        let lattice = Lattice {
            sets: vec![set(&[("m", 0)]), set(&[("¯", 0)]), set(&[("t", 0)])],
        };
        let all = enumerate_all(&lattice);
        assert_eq!(all[0].value, "mt");
        assert_eq!(all[0].cost, 1);
        assert!(all[0].rules.contains(&RuleTag::MarkDrop));
    }

    #[test]
    fn mark_adjustment_does_not_break_output_order() {
        // The mark-dropping vector has base cost 0 but final cost 1, so it
        // must be emitted after the base-cost-1 markless vector "mat".
        let lattice = Lattice {
            sets: vec![
                set(&[("m", 0)]),
                set(&[("¯", 0), ("a", 1)]),
                set(&[("t", 0)]),
            ],
        };
        let all = enumerate_all(&lattice);
        let view: Vec<(&str, u32)> = all.iter().map(|c| (c.value.as_str(), c.cost)).collect();
        assert_eq!(view, vec![("mat", 1), ("mt", 1)]);
    }

    #[test]
    fn budget_yields_ordered_prefix() {
        let lattice = Lattice {
            sets: vec![
                set(&[("a", 0), ("b", 1), ("c", 2)]),
                set(&[("d", 0), ("e", 1), ("f", 2)]),
                set(&[("g", 0), ("h", 1)]),
            ],
        };
        let full = enumerate_all(&lattice);
        for budget in 0..=18 {
            let res = enumerate_candidates(&lattice, &CostWeights::default(), budget);
            assert_eq!(res.truncated, budget < 18);
            assert_eq!(res.candidates[..], full[..res.candidates.len()]);
        }
    }

    #[test]
    fn bundled_token_lattice_shape() {
        let model = crate::model::ScriptModel::bundled();
        let token = parse_token("BccNcy", Segmenter::default_segmenter()).unwrap();
        let lattice = build_lattice(&token, model).unwrap();
        assert_eq!(lattice.sets.len(), 4);
        // B: its letter value plus one corruption borrowing.
        assert_eq!(lattice.sets[0].options.len(), 2);
        let best = enumerate_candidates(&lattice, &model.weights, 10_000);
        assert!(!best.truncated);
        assert_eq!(best.candidates[0].value, "bang");
        assert_eq!(best.candidates[0].cost, 0);
    }

    #[test]
    fn ligature_groups_fold_expansions_and_splits() {
        let model = crate::model::ScriptModel::bundled();
        let token = parse_token("yHat", Segmenter::default_segmenter()).unwrap();
        let lattice = build_lattice(&token, model).unwrap();
        assert_eq!(lattice.sets.len(), 3);
        let at = &lattice.sets[2];
        assert!(at
            .options
            .iter()
            .any(|o| o.value == "d" && o.cost == 1 && o.rule == RuleTag::Ligature));
        // Split alternative: a->x plus t->t at ligature_alt + 1.
        assert!(at
            .options
            .iter()
            .any(|o| o.value == "xt" && o.cost == 2 && o.rule == RuleTag::LigatureAlt));
    }

    #[test]
    fn opaque_units_expand_to_placeholder() {
        let token = Token {
            text: "x".into(),
            units: vec![Unit::Opaque('x')],
        };
        let model = crate::model::ScriptModel::bundled();
        let lattice = build_lattice(&token, model).unwrap();
        assert_eq!(
            lattice.sets[0].options,
            vec![GlyphOption {
                value: "?".into(),
                cost: UNKNOWN_GLYPH_COST,
                rule: RuleTag::Opaque,
            }]
        );
    }

    #[test]
    fn find_candidate_respects_cost_cap() {
        let model = crate::model::ScriptModel::bundled();
        let token = parse_token("šcoN", Segmenter::default_segmenter()).unwrap();
        let lattice = build_lattice(&token, model).unwrap();
        let hit = find_candidate(&lattice, &model.weights, 100_000, 6, |v| v == "šān");
        assert_eq!(hit.unwrap().cost, 0);
        let miss = find_candidate(&lattice, &model.weights, 100_000, 6, |v| v == "zzz");
        assert!(miss.is_none());
    }
}
