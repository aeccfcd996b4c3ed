use std::collections::BTreeMap;

use super::clause::{core_clauses, Clause, Cnf3Instance};
use super::ThreeSatError;
use crate::density::PartialVerdict;

/// Index into [`core_clauses`] of a clause, if it is one of them. Matching
/// is syntactic: literals must appear in the core order `1, 10, 11`.
pub fn core_index(clause: &Clause) -> Option<usize> {
    let lits = clause.literals();
    if lits[0].var() != "1" || lits[1].var() != "10" || lits[2].var() != "11" {
        return None;
    }
    Some(lits.iter().fold(0, |acc, l| acc << 1 | l.negated() as usize))
}

/// Bitmask of the core clauses occurring in `instance`.
pub fn core_mask(instance: &Cnf3Instance) -> u8 {
    instance.clauses.iter().filter_map(core_index).fold(0, |m, i| m | 1 << i)
}

/// Reads the instance left to right, one step per symbol, and answers
/// `No` as soon as all eight core clauses have appeared. Otherwise
/// `DontKnow`. Never answers `Yes`.
pub fn algorithm_three(instance: &Cnf3Instance) -> PartialVerdict {
    let fuel = instance.size();
    let mut steps = 0;
    let mut mask = 0u8;
    for clause in &instance.clauses {
        steps += clause.symbols().len() as u64 + 1;
        if let Some(i) = core_index(clause) {
            mask |= 1 << i;
            if mask == u8::MAX {
                return PartialVerdict::no(steps, fuel);
            }
        }
    }
    PartialVerdict::dont_know(steps, fuel)
}

/// Exhaustive satisfiability over the distinct variables. Errors when more
/// than `var_cap` variables occur.
pub fn brute_force_sat(instance: &Cnf3Instance, var_cap: usize) -> Result<bool, ThreeSatError> {
    let mut vars: BTreeMap<&str, usize> = BTreeMap::new();
    for clause in &instance.clauses {
        for lit in clause.literals() {
            let next = vars.len();
            vars.entry(lit.var()).or_insert(next);
        }
    }
    if vars.len() > var_cap || vars.len() >= 64 {
        return Err(ThreeSatError::TooManyVariables { vars: vars.len(), cap: var_cap });
    }
    let clauses: Vec<[(usize, bool); 3]> = instance
        .clauses
        .iter()
        .map(|c| {
            let l = c.literals();
            [0, 1, 2].map(|i| (vars[l[i].var()], l[i].negated()))
        })
        .collect();
    let sat = (0..1u64 << vars.len()).any(|assignment| {
        clauses.iter().all(|c| c.iter().any(|&(v, neg)| (assignment >> v & 1 == 1) != neg))
    });
    Ok(sat)
}

/// The core clauses as one instance; unsatisfiable.
pub fn core_instance() -> Cnf3Instance {
    Cnf3Instance::new(core_clauses())
}
