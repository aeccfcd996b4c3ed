use std::collections::BTreeSet;

use genericity::numeric::ln_biguint;
use genericity::threesat::{
    algorithm_three, all_eight_density_series, brute_force_sat, build_all_present_dfa, build_counting_dfa,
    core_clauses, core_mask, growth_rate, parse_instance, word_count, Clause, Cnf3Instance, DensityRoute, Literal, Sym,
    DEFAULT_ITERATIONS, DEFAULT_TOLERANCE,
};
use genericity::Answer;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Every `[x v y v z]^` of rendered length at most `max`, from the grammar.
fn clause_words(max: usize) -> Vec<String> {
    // `[`, two `v`, `]` and `^` leave this much for the three literals
    let budget = max.saturating_sub(5);
    let mut literals = Vec::new();
    for extra in 0..budget.saturating_sub(2) {
        for bits in 0..1u32 << extra {
            let var: String = std::iter::once('1')
                .chain((0..extra).rev().map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }))
                .collect();
            literals.push(var.clone());
            literals.push(format!("{var}'"));
        }
    }
    let mut out = Vec::new();
    for a in &literals {
        for b in literals.iter().filter(|b| a.len() + b.len() < budget) {
            for c in literals.iter().filter(|c| a.len() + b.len() + c.len() <= budget) {
                out.push(format!("[{a}v{b}v{c}]^"));
            }
        }
    }
    out
}

/// Words of (R∧)* of length exactly `len`, built clause by clause.
fn grammar_words(len: usize, clauses: &[String]) -> BTreeSet<String> {
    let mut by_len: Vec<BTreeSet<String>> = vec![BTreeSet::new(); len + 1];
    by_len[0].insert(String::new());
    for l in 1..=len {
        let mut here = BTreeSet::new();
        for c in clauses.iter().filter(|c| c.len() <= l) {
            for rest in &by_len[l - c.len()] {
                here.insert(format!("{c}{rest}"));
            }
        }
        by_len[l] = here;
    }
    by_len.swap_remove(len)
}

fn text(word: &[Sym]) -> String {
    word.iter().map(|s| s.ascii()).collect()
}

#[test]
fn counts_match_grammar_generation_to_length_14() {
    let clauses = clause_words(14);
    let dfa = build_counting_dfa(&[]);
    for len in 0..=14 {
        let expected = grammar_words(len, &clauses);
        let walked: BTreeSet<String> = dfa.words_of_length(len).iter().map(|w| text(w)).collect();
        assert_eq!(walked, expected, "length {len}");
        assert_eq!(word_count(&dfa, len), BigUint::from(expected.len()), "length {len}");
    }
}

#[test]
fn counts_match_grammar_generation_past_one_clause() {
    // two-clause words first appear at 16
    let clauses = clause_words(18);
    let dfa = build_counting_dfa(&core_clauses()[..3]);
    let omitted: Vec<String> = core_clauses()[..3].iter().map(|c| Cnf3Instance::new(vec![c.clone()]).render()).collect();
    for len in [16, 17, 18] {
        let expected: BTreeSet<String> = grammar_words(len, &clauses)
            .into_iter()
            .filter(|w| {
                let inst = parse_instance(w).unwrap();
                inst.clauses.iter().all(|c| !omitted.contains(&Cnf3Instance::new(vec![c.clone()]).render()))
            })
            .collect();
        let walked: BTreeSet<String> = dfa.words_of_length(len).iter().map(|w| text(w)).collect();
        assert_eq!(walked, expected, "length {len}");
    }
}

#[test]
fn routes_agree_at_longer_lengths() {
    let lengths = [92, 150, 200, 256];
    assert_eq!(
        all_eight_density_series(&lengths, DensityRoute::MaskProduct).unwrap(),
        all_eight_density_series(&lengths, DensityRoute::InclusionExclusion).unwrap()
    );
}

#[test]
fn omission_ratio_tracks_growth_rates() {
    let full = build_counting_dfa(&[]);
    let lf = growth_rate(&full, DEFAULT_ITERATIONS, DEFAULT_TOLERANCE).unwrap().lambda;
    for clause in core_clauses() {
        let omit = build_counting_dfa(std::slice::from_ref(&clause));
        let lo = growth_rate(&omit, DEFAULT_ITERATIONS, DEFAULT_TOLERANCE).unwrap().lambda;
        assert!(lo < lf);
        let (a, b) = (omit.word_counts(800), full.word_counts(800));
        let ln_ratio = |l: usize| ln_biguint(&a[l]) - ln_biguint(&b[l]);
        // count_omit / count_full shrinks, and by about λ_omit/λ_full per symbol
        assert!(ln_ratio(800) < ln_ratio(400) && ln_ratio(400) < ln_ratio(200));
        let per_symbol = ((ln_ratio(800) - ln_ratio(400)) / 400.0).exp();
        assert!((per_symbol - lo / lf).abs() < 1e-7, "{per_symbol} vs {}", lo / lf);
    }
}

fn literal() -> impl Strategy<Value = Literal> {
    (proptest::collection::vec(any::<bool>(), 0..3), any::<bool>()).prop_map(|(bits, neg)| {
        let var: String = std::iter::once('1').chain(bits.iter().map(|&b| if b { '1' } else { '0' })).collect();
        Literal::new(var, neg).unwrap()
    })
}

fn clause() -> impl Strategy<Value = Clause> {
    prop_oneof![
        (literal(), literal(), literal()).prop_map(|(a, b, c)| Clause::new([a, b, c])),
        (0usize..8).prop_map(|i| core_clauses()[i].clone()),
    ]
}

fn instance() -> impl Strategy<Value = Cnf3Instance> {
    proptest::collection::vec(clause(), 0..6).prop_map(Cnf3Instance::new)
}

proptest! {
    #[test]
    fn render_parse_round_trip(inst in instance()) {
        let ascii = inst.render();
        prop_assert_eq!(parse_instance(&ascii).unwrap(), inst.clone());
        prop_assert_eq!(parse_instance(&inst.render_unicode()).unwrap(), inst.clone());
        prop_assert_eq!(parse_instance(&ascii).unwrap().render(), ascii.clone());
        prop_assert_eq!(inst.size() as usize, ascii.chars().count());
    }

    #[test]
    fn automata_agree_with_clause_scan(inst in instance(), subset in 0u8..=255) {
        let core = core_clauses();
        let omitted: Vec<Clause> = (0..8).filter(|i| subset >> i & 1 == 1).map(|i| core[i].clone()).collect();
        let word = inst.symbols();
        let avoids = inst.clauses.iter().all(|c| !omitted.contains(c));
        prop_assert_eq!(build_counting_dfa(&omitted).accepts(&word), avoids);
        prop_assert_eq!(build_all_present_dfa(&core).accepts(&word), core_mask(&inst) == u8::MAX);
    }

    #[test]
    fn core_plus_extras_is_unsatisfiable(extras in proptest::collection::vec(clause(), 0..=2), seed in any::<u64>()) {
        let mut clauses = core_clauses();
        clauses.extend(extras);
        // deterministic shuffle
        let mut state = seed | 1;
        for i in (1..clauses.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            clauses.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let inst = Cnf3Instance::new(clauses);
        let v = algorithm_three(&inst);
        prop_assert_eq!(v.answer, Answer::No);
        prop_assert!(v.steps <= inst.size());
        prop_assert!(!brute_force_sat(&inst, 20).unwrap());
    }

    #[test]
    fn no_verdicts_are_sound(inst in instance()) {
        if algorithm_three(&inst).answer == Answer::No {
            prop_assert!(!brute_force_sat(&inst, 20).unwrap());
        }
    }

    #[test]
    fn garbage_is_rejected_with_position(s in "[01v'\\[\\]^x]{1,20}") {
        match parse_instance(&s) {
            Ok(inst) => prop_assert_eq!(inst.render(), s),
            Err(e) => prop_assert!(e.to_string().contains("symbol")),
        }
    }
}

#[test]
fn spec_parse_examples() {
    assert!(!brute_force_sat(&parse_instance("[1∨1∨1]∧[1'∨1'∨1']∧").unwrap(), 20).unwrap());
    assert!(brute_force_sat(&parse_instance("[1∨10∨11]∧").unwrap(), 20).unwrap());
}
