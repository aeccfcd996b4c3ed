use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::clause::{Clause, Sym};
use super::ThreeSatError;

pub const DEAD: usize = 0;
const SYMS: usize = Sym::COUNT;

/// Deterministic automaton over the seven symbols. State 0 is the dead
/// state; the transition table is total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingDfa {
    start: usize,
    transitions: Vec<[usize; SYMS]>,
    accepting: Vec<bool>,
}

/// Adjacency view for inspection: one edge per (from, to) with the symbols
/// labelling it.
#[derive(Clone, Debug, Serialize)]
pub struct DfaExport {
    pub states: usize,
    pub start: usize,
    pub dead: usize,
    pub accepting: Vec<usize>,
    pub edges: Vec<DfaEdge>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DfaEdge {
    pub from: usize,
    pub to: usize,
    pub symbols: String,
}

impl CountingDfa {
    /// Build from raw parts. Row 0 must be the dead state (self-looping on
    /// every symbol, rejecting).
    pub fn from_parts(start: usize, transitions: Vec<[usize; SYMS]>, accepting: Vec<bool>) -> Result<Self, ThreeSatError> {
        let n = transitions.len();
        let invalid = |msg: &str| Err(ThreeSatError::InvalidDfa(msg.to_string()));
        if n == 0 || accepting.len() != n {
            return invalid("table and accepting set differ in size");
        }
        if start >= n || transitions.iter().flatten().any(|&t| t >= n) {
            return invalid("transition out of range");
        }
        if transitions[DEAD] != [DEAD; SYMS] || accepting[DEAD] {
            return invalid("state 0 must be a rejecting sink");
        }
        Ok(Self { start, transitions, accepting })
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn next(&self, state: usize, sym: Sym) -> usize {
        self.transitions[state][sym.index()]
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        self.accepting[word.iter().fold(self.start, |s, &c| self.next(s, c))]
    }

    /// `m[i][j]` = number of symbols taking state `i` to state `j`.
    pub fn transfer_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.states();
        let mut m = vec![vec![0u64; n]; n];
        for (i, row) in self.transitions.iter().enumerate() {
            for &j in row {
                m[i][j] += 1;
            }
        }
        m
    }

    pub fn export(&self) -> DfaExport {
        let mut edges = Vec::new();
        for (from, row) in self.transitions.iter().enumerate() {
            let mut by_target: Vec<(usize, String)> = Vec::new();
            for sym in Sym::ALL {
                let to = row[sym.index()];
                match by_target.iter_mut().find(|(t, _)| *t == to) {
                    Some((_, label)) => label.push(sym.unicode()),
                    None => by_target.push((to, sym.unicode().to_string())),
                }
            }
            edges.extend(by_target.into_iter().map(|(to, symbols)| DfaEdge { from, to, symbols }));
        }
        DfaExport {
            states: self.states(),
            start: self.start,
            dead: DEAD,
            accepting: (0..self.states()).filter(|&s| self.accepting[s]).collect(),
            edges,
        }
    }

    /// Accepted-word counts for every length `0..=max_len`.
    pub fn word_counts(&self, max_len: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.states()];
        v[self.start] = BigUint::from(1u32);
        let mut out = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            out.push(self.accepted_mass(&v));
            if len < max_len {
                v = self.step(&v);
            }
        }
        out
    }

    fn accepted_mass(&self, v: &[BigUint]) -> BigUint {
        v.iter().zip(&self.accepting).filter(|(_, &a)| a).map(|(c, _)| c).sum()
    }

    fn step(&self, v: &[BigUint]) -> Vec<BigUint> {
        let mut next = vec![BigUint::zero(); self.states()];
        for (s, count) in v.iter().enumerate() {
            if s == DEAD || count.is_zero() {
                continue;
            }
            for &t in &self.transitions[s] {
                if t != DEAD {
                    next[t] += count;
                }
            }
        }
        next
    }

    /// `table[r][s]`: accepted words of length `r` read from state `s`.
    pub fn suffix_counts(&self, max_len: usize) -> Vec<Vec<BigUint>> {
        let n = self.states();
        let mut table = Vec::with_capacity(max_len + 1);
        table.push((0..n).map(|s| BigUint::from(self.accepting[s] as u32)).collect::<Vec<_>>());
        for r in 1..=max_len {
            let prev: &Vec<BigUint> = &table[r - 1];
            let row = (0..n)
                .map(|s| {
                    if s == DEAD {
                        return BigUint::zero();
                    }
                    self.transitions[s].iter().map(|&t| &prev[t]).sum()
                })
                .collect();
            table.push(row);
        }
        table
    }

    /// Accepted words of length `len` in lexicographic symbol order, by a
    /// depth-first walk that prunes states with no accepted continuation.
    pub fn words_of_length(&self, len: usize) -> Vec<Vec<Sym>> {
        let live = self.suffix_counts(len);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(len);
        self.walk(self.start, len, &live, &mut word, &mut out);
        out
    }

    fn walk(&self, state: usize, left: usize, live: &[Vec<BigUint>], word: &mut Vec<Sym>, out: &mut Vec<Vec<Sym>>) {
        if left == 0 {
            out.push(word.clone());
            return;
        }
        for sym in Sym::ALL {
            let next = self.next(state, sym);
            if !live[left - 1][next].is_zero() {
                word.push(sym);
                self.walk(next, left - 1, live, word, out);
                word.pop();
            }
        }
    }
}

/// Exact count of accepted words of length `len`.
pub fn word_count(dfa: &CountingDfa, len: usize) -> BigUint {
    dfa.word_counts(len).pop().expect("at least one length")
}

// Recognizer for (R∧)*: one clause is [ v ∨ v ∨ v ] with each v = 1(0|1)*('?).
const G_START: u8 = 0;
const G_OPEN: u8 = 1;

fn grammar_next(g: u8, sym: Sym) -> Option<u8> {
    use Sym::*;
    // literals: (1, 3, 4), (5, 6, 7), (8, 9, 10) as
    // (expects `1`, reading digits, after `'`)
    const END: u8 = 11;
    Some(match (g, sym) {
        (G_START, Open) => G_OPEN,
        (G_OPEN, One) => 3,
        (3 | 6 | 9, Zero | One) => g,
        (3 | 6 | 9, Neg) => g + 1,
        (3 | 4, Or) => 5,
        (6 | 7, Or) => 8,
        (9 | 10, Close) => END,
        (5 | 8, One) => g + 1,
        (END, And) => G_START,
        _ => return None,
    })
}

struct Trie {
    children: Vec<[Option<usize>; SYMS]>,
    terminal: Vec<u32>,
}

impl Trie {
    fn new(patterns: &[Vec<Sym>]) -> Self {
        let mut trie = Trie { children: vec![[None; SYMS]], terminal: vec![0] };
        for (i, pattern) in patterns.iter().enumerate() {
            let mut node = 0;
            for &sym in pattern {
                node = match trie.children[node][sym.index()] {
                    Some(next) => next,
                    None => {
                        trie.children.push([None; SYMS]);
                        trie.terminal.push(0);
                        let id = trie.children.len() - 1;
                        trie.children[node][sym.index()] = Some(id);
                        id
                    }
                };
            }
            trie.terminal[node] |= 1 << i;
        }
        trie
    }
}

#[derive(Clone, Copy)]
enum Tracking {
    /// Any occurrence of a pattern rejects.
    Forbid,
    /// Accept only once every pattern has occurred.
    RequireAll,
}

/// Recognizer for the words of (R∧)* in which none of `required_absent`
/// occurs as a complete clause token. Empty set: all of (R∧)*.
pub fn build_counting_dfa(required_absent: &[Clause]) -> CountingDfa {
    build(required_absent, Tracking::Forbid)
}

/// Recognizer for the words of (R∧)* in which every clause of
/// `required_present` occurs; product of the grammar with an occurrence mask.
pub fn build_all_present_dfa(required_present: &[Clause]) -> CountingDfa {
    assert!(required_present.len() <= 16, "occurrence mask limited to 16 clauses");
    build(required_present, Tracking::RequireAll)
}

fn build(clauses: &[Clause], tracking: Tracking) -> CountingDfa {
    let patterns: Vec<Vec<Sym>> = clauses.iter().map(Clause::symbols).collect();
    let trie = Trie::new(&patterns);
    let full: u32 = clauses.iter().enumerate().fold(0, |m, (i, _)| m | 1 << i);
    // Trie node `usize::MAX` means the current clause already diverged
    // from every pattern.
    const LOST: usize = usize::MAX;
    type Key = (u8, usize, u32);

    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = vec![(u8::MAX, LOST, 0)];
    let mut transitions: Vec<[usize; SYMS]> = vec![[DEAD; SYMS]];
    let start: Key = (G_START, LOST, 0);
    index.insert(start, 1);
    keys.push(start);
    transitions.push([DEAD; SYMS]);

    let mut cursor = 1;
    while cursor < keys.len() {
        let (g, node, mask) = keys[cursor];
        for sym in Sym::ALL {
            let Some(g2) = grammar_next(g, sym) else { continue };
            let mut node2 = match (g, node) {
                (G_START, _) => trie.children[0][sym.index()].unwrap_or(LOST),
                (_, LOST) => LOST,
                (_, n) => trie.children[n][sym.index()].unwrap_or(LOST),
            };
            let mut mask2 = mask;
            if node2 != LOST && trie.terminal[node2] != 0 {
                match tracking {
                    Tracking::Forbid => continue,
                    Tracking::RequireAll => mask2 |= trie.terminal[node2],
                }
            }
            if g2 == G_START {
                node2 = LOST;
            }
            let key = (g2, node2, mask2);
            let id = *index.entry(key).or_insert_with(|| {
                keys.push(key);
                transitions.push([DEAD; SYMS]);
                keys.len() - 1
            });
            transitions[cursor][sym.index()] = id;
        }
        cursor += 1;
    }

    let accepting = keys
        .iter()
        .enumerate()
        .map(|(i, &(g, _, mask))| {
            i != DEAD
                && g == G_START
                && match tracking {
                    Tracking::Forbid => true,
                    Tracking::RequireAll => mask == full,
                }
        })
        .collect();
    CountingDfa { start: 1, transitions, accepting }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threesat::{core_clauses, parse_instance};

    fn syms(text: &str) -> Vec<Sym> {
        text.chars().map(|c| Sym::from_char(c).unwrap()).collect()
    }

    #[test]
    fn full_language_small_lengths() {
        let dfa = build_counting_dfa(&[]);
        let counts = dfa.word_counts(9);
        assert_eq!(counts[0], BigUint::from(1u32));
        assert!(counts[1..8].iter().all(Zero::is_zero));
        assert_eq!(counts[8], BigUint::from(1u32));
        // one extra symbol: a negation (3 places) or a digit (3 places, 2 digits)
        assert_eq!(counts[9], BigUint::from(9u32));
    }

    #[test]
    fn forbid_single_clause() {
        let clause = parse_instance("[1v1v1]^").unwrap().clauses.remove(0);
        let dfa = build_counting_dfa(&[clause]);
        assert!(!dfa.accepts(&syms("[1v1v1]^")));
        assert!(dfa.accepts(&syms("[1v1v10]^")));
        assert!(dfa.accepts(&syms("[1v1v10]^[1'v1v1]^")));
        assert!(!dfa.accepts(&syms("[1v1v10]^[1v1v1]^")));
        assert!(word_count(&dfa, 8).is_zero());
        assert_eq!(word_count(&dfa, 9), BigUint::from(9u32));
        assert!(word_count(&dfa, 7).is_zero());
    }

    #[test]
    fn prefix_of_a_pattern_is_not_an_occurrence() {
        let clause = parse_instance("[1v1v1]^").unwrap().clauses.remove(0);
        let dfa = build_counting_dfa(&[clause]);
        assert!(dfa.accepts(&syms("[1v1v11]^")));
        assert!(dfa.accepts(&syms("[1v1v1']^")));
    }

    #[test]
    fn require_all_core() {
        let core = core_clauses();
        let dfa = build_all_present_dfa(&core);
        let word = parse_instance(&crate::threesat::core_instance().render()).unwrap().symbols();
        assert!(dfa.accepts(&word));
        assert!(!dfa.accepts(&word[..word.len() - 12]));
        assert!(word_count(&dfa, 91).is_zero());
        assert!(!word_count(&dfa, 92).is_zero());
    }

    #[test]
    fn walk_matches_counts() {
        let dfa = build_counting_dfa(&core_clauses()[..2]);
        let counts = dfa.word_counts(12);
        for (len, count) in counts.iter().enumerate() {
            let words = dfa.words_of_length(len);
            assert_eq!(BigUint::from(words.len()), *count);
            assert!(words.iter().all(|w| dfa.accepts(w)));
        }
    }

    #[test]
    fn rejects_malformed_parts() {
        assert!(CountingDfa::from_parts(0, vec![[1; SYMS], [1; SYMS]], vec![false, true]).is_err());
        assert!(CountingDfa::from_parts(1, vec![[0; SYMS]], vec![false]).is_err());
    }

    #[test]
    fn export_lists_every_transition() {
        let dfa = build_counting_dfa(&[]);
        let export = dfa.export();
        let labelled: usize = export.edges.iter().map(|e| e.symbols.chars().count()).sum();
        assert_eq!(labelled, dfa.states() * SYMS);
        assert_eq!(export.accepting, vec![1]);
    }
}
