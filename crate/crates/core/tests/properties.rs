//! Randomized invariants for the reading pipeline: the lazy enumerator
//! against a brute-force oracle, budget monotonicity, skeleton folding,
//! lexicon matching, and corpus serialization.

use proptest::prelude::*;

use voypah_core::ingest::{parse_corpus, serialize_corpus};
use voypah_core::lattice::{
    assemble, enumerate_candidates, find_candidate, Candidate, Lattice, OptionSet,
};
use voypah_core::lexicon::{edit_distance, skeletonize, Lexicon};
use voypah_core::model::{CostWeights, GlyphOption, RuleTag};

/// Exhaustive cartesian-product enumeration in `(cost, value, choices)`
/// order; the reference the lazy enumerator must reproduce.
fn brute_force(lattice: &Lattice, weights: &CostWeights) -> Vec<Candidate> {
    let sizes: Vec<usize> = lattice.sets.iter().map(|s| s.options.len()).collect();
    if sizes.is_empty() || sizes.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choices = vec![0usize; sizes.len()];
    loop {
        out.push(assemble(&lattice.sets, &choices, weights));
        let mut i = sizes.len();
        let rolled_over = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            choices[i] += 1;
            if choices[i] < sizes[i] {
                break false;
            }
            choices[i] = 0;
        };
        if rolled_over {
            break;
        }
    }
    out.sort_by(|a, b| (a.cost, &a.value, &a.choices).cmp(&(b.cost, &b.value, &b.choices)));
    out
}

fn arb_value() -> impl Strategy<Value = String> {
    prop_oneof![
        6 => prop::sample::select(vec!["a", "b", "k", "z", "š", "i", "u", "ā", "ab", "ka"])
            .prop_map(str::to_string),
        1 => Just(String::new()),
        1 => Just("¯".to_string()),
    ]
}

fn arb_set() -> impl Strategy<Value = OptionSet> {
    prop::collection::vec((arb_value(), 0u32..4), 1..=3).prop_map(|mut opts| {
        // Option sets come out of lattice construction sorted by cost.
        opts.sort_by_key(|&(_, cost)| cost);
        OptionSet {
            options: opts
                .into_iter()
                .map(|(value, cost)| GlyphOption {
                    value,
                    cost,
                    rule: RuleTag::Base,
                })
                .collect(),
        }
    })
}

fn arb_lattice() -> impl Strategy<Value = Lattice> {
    prop::collection::vec(arb_set(), 1..=4).prop_map(|sets| Lattice { sets })
}

fn arb_letter() -> impl Strategy<Value = char> {
    prop::sample::select("aBcdghHīKmMnNoPrsSštTyz".chars().collect::<Vec<char>>())
}

/// A raw token in native notation: always opens with a plain letter so the
/// token cannot reduce to nothing, then a mix of letters, forced groups,
/// insertions and ignored glyphs.
fn arb_token() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        6 => arb_letter().prop_map(|c| c.to_string()),
        1 => prop::sample::select(vec!["cc", "co", "cy", "ko", "sP", "sT", "at", "hd", "rao"])
            .prop_map(|s| format!("{{{s}}}")),
        1 => prop::collection::vec(arb_letter(), 1..=2)
            .prop_map(|cs| format!("[{}]", cs.into_iter().collect::<String>())),
        1 => arb_letter().prop_map(|c| format!("({c})")),
    ];
    (arb_letter(), prop::collection::vec(piece, 0..5)).prop_map(|(first, rest)| {
        let mut s = first.to_string();
        for p in rest {
            s.push_str(&p);
        }
        s
    })
}

fn arb_corpus_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        (
            "[a-z][a-z0-9]{0,3}",
            1u32..999,
            prop::collection::vec(arb_token(), 1..=5),
        ),
        1..=4,
    )
    .prop_map(|lines| {
        let mut out = String::new();
        for (folio, number, tokens) in lines {
            out.push_str(&format!("# {folio}:{number}\n"));
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn skeletonize_is_idempotent(word in "[a-zA-Zāēīōū¯-]{0,12}") {
        let once = skeletonize(&word);
        prop_assert_eq!(skeletonize(&once), once);
    }

    #[test]
    fn skeletons_ignore_inserted_vowels(
        stem in "[bcdfgkmnprštwxz]{1,6}",
        vowels in prop::collection::vec(
            (0usize..8, prop::sample::select(vec!['a', 'e', 'i', 'o', 'u', 'ā', 'ē', 'ī', 'ō', 'ū'])),
            0..4,
        ),
    ) {
        let mut chars: Vec<char> = stem.chars().collect();
        for (pos, v) in vowels {
            let at = pos.min(chars.len());
            chars.insert(at, v);
        }
        let vocalized: String = chars.into_iter().collect();
        prop_assert_eq!(skeletonize(&vocalized), skeletonize(&stem));
    }

    #[test]
    fn uppercase_words_are_skeleton_fixed_points(word in "[A-Z]{1,8}") {
        prop_assert_eq!(skeletonize(&word), word);
    }

    #[test]
    fn edit_distance_is_a_metric(
        a in "[a-zšāē]{0,6}",
        b in "[a-zšāē]{0,6}",
        c in "[a-zšāē]{0,6}",
    ) {
        prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
        prop_assert_eq!(edit_distance(&a, &a), 0);
        prop_assert!(edit_distance(&a, &c) <= edit_distance(&a, &b) + edit_distance(&b, &c));
        if a != b {
            prop_assert!(edit_distance(&a, &b) > 0);
        }
    }
}

proptest! {
    #[test]
    fn enumeration_matches_brute_force(lattice in arb_lattice()) {
        let weights = CostWeights::default();
        let res = enumerate_candidates(&lattice, &weights, usize::MAX);
        prop_assert!(!res.truncated);
        prop_assert_eq!(res.candidates, brute_force(&lattice, &weights));
    }

    #[test]
    fn smaller_budgets_yield_prefixes(
        lattice in arb_lattice(),
        b1 in 0usize..40,
        extra in 0usize..40,
    ) {
        let weights = CostWeights::default();
        let r1 = enumerate_candidates(&lattice, &weights, b1);
        let r2 = enumerate_candidates(&lattice, &weights, b1 + extra);
        prop_assert!(r1.candidates.len() <= r2.candidates.len());
        prop_assert_eq!(&r2.candidates[..r1.candidates.len()], &r1.candidates[..]);
    }

    #[test]
    fn find_agrees_with_brute_force_on_reachability(
        lattice in arb_lattice(),
        max_cost in 0u32..8,
        needle in prop::sample::select(vec!["a", "k", "ā", "b"]),
    ) {
        let weights = CostWeights::default();
        let found = find_candidate(&lattice, &weights, usize::MAX, max_cost, |v| {
            v.contains(needle)
        });
        let oracle = brute_force(&lattice, &weights);
        let reachable = oracle
            .iter()
            .any(|c| c.cost <= max_cost && c.value.contains(needle));
        prop_assert_eq!(found.is_some(), reachable);
        if let Some(f) = found {
            prop_assert!(f.cost <= max_cost);
            prop_assert!(f.value.contains(needle));
            prop_assert!(oracle.contains(&f));
        }
    }

    #[test]
    fn match_hits_grow_with_edit_allowance(
        value in "[a-zāēīōūš]{0,8}",
        e1 in 0u32..3,
        extra in 0u32..3,
    ) {
        let lexicon = Lexicon::bundled();
        let h1 = lexicon.match_candidate(&value, e1);
        let h2 = lexicon.match_candidate(&value, e1 + extra);
        prop_assert!(h1.len() <= h2.len());
        for hit in &h1 {
            prop_assert!(hit.distance <= e1);
            prop_assert!(h2.contains(hit));
        }
        for w in h2.windows(2) {
            let a = (w[0].distance, &lexicon.get(w[0].entry).headword);
            let b = (w[1].distance, &lexicon.get(w[1].entry).headword);
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn corpus_serialization_round_trips(text in arb_corpus_text()) {
        let corpus = parse_corpus(&text).unwrap();
        let canonical = serialize_corpus(&corpus);
        let reparsed = parse_corpus(&canonical).unwrap();
        prop_assert_eq!(reparsed, corpus);
    }
}
