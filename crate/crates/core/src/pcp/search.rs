use std::collections::{HashSet, VecDeque};

use super::instance::PcpInstance;
use super::PcpError;

/// Default bound on distinct prefix-difference states.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Which concatenation is ahead, and by which suffix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Overhang {
    top_ahead: bool,
    suffix: Vec<u8>,
}

/// Extend `state` by one pair. `None` when the two sides disagree.
fn extend(state: &Overhang, u: &[u8], v: &[u8]) -> Option<Overhang> {
    let (ahead, behind): (Vec<u8>, &[u8]) = if state.top_ahead {
        ([state.suffix.as_slice(), u].concat(), v)
    } else {
        ([state.suffix.as_slice(), v].concat(), u)
    };
    // `ahead` is the side that was ahead, now extended; compare with the other.
    let common = ahead.len().min(behind.len());
    if ahead[..common] != behind[..common] {
        return None;
    }
    if ahead.len() >= behind.len() {
        Some(Overhang { top_ahead: state.top_ahead, suffix: ahead[common..].to_vec() })
    } else {
        Some(Overhang { top_ahead: !state.top_ahead, suffix: behind[common..].to_vec() })
    }
}

/// Shortest index sequence (1-based) of length at most `max_len` with
/// `u_{i1}..u_{im} = v_{i1}..v_{im}`, by breadth-first search over
/// overhang states.
pub fn search_solution(instance: &PcpInstance, max_len: usize) -> Result<Option<Vec<usize>>, PcpError> {
    search_solution_capped(instance, max_len, DEFAULT_STATE_CAP)
}

/// [`search_solution`] with an explicit state cap; exceeding it is
/// [`PcpError::SearchExhausted`], distinct from `Ok(None)`.
pub fn search_solution_capped(
    instance: &PcpInstance,
    max_len: usize,
    state_cap: usize,
) -> Result<Option<Vec<usize>>, PcpError> {
    // parent links: (parent node, pair index)
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut visited: HashSet<Overhang> = HashSet::new();
    let mut queue: VecDeque<(Overhang, usize, Option<usize>)> = VecDeque::new();
    queue.push_back((Overhang { top_ahead: true, suffix: Vec::new() }, 0, None));

    let path = |nodes: &Vec<(usize, usize)>, mut at: usize| {
        let mut seq = Vec::new();
        loop {
            let (parent, pair) = nodes[at];
            seq.push(pair + 1);
            if parent == usize::MAX {
                break;
            }
            at = parent;
        }
        seq.reverse();
        seq
    };

    while let Some((state, depth, node)) = queue.pop_front() {
        if depth == max_len {
            continue;
        }
        for (i, (u, v)) in instance.pairs().iter().enumerate() {
            let Some(next) = extend(&state, u, v) else { continue };
            let id = nodes.len();
            nodes.push((node.unwrap_or(usize::MAX), i));
            if next.suffix.is_empty() {
                return Ok(Some(path(&nodes, id)));
            }
            if visited.insert(next.clone()) {
                if visited.len() > state_cap {
                    return Err(PcpError::SearchExhausted { states: visited.len(), depth: depth + 1 });
                }
                queue.push_back((next, depth + 1, Some(id)));
            }
        }
    }
    Ok(None)
}
