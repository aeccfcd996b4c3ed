use serde::{Deserialize, Serialize};

use super::dfa::{CountingDfa, DEAD};
use super::ThreeSatError;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_ITERATIONS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub lambda: f64,
    pub iterations: usize,
    /// States kept after removing those not both reachable and co-reachable.
    pub trimmed_states: usize,
}

/// States reachable from the start that can also reach acceptance.
pub fn trim(dfa: &CountingDfa) -> Vec<usize> {
    let n = dfa.states();
    let m = dfa.transfer_matrix();
    let mut forward = vec![false; n];
    let mut stack = vec![dfa.start()];
    forward[dfa.start()] = true;
    while let Some(s) = stack.pop() {
        for t in 0..n {
            if m[s][t] > 0 && !forward[t] && t != DEAD {
                forward[t] = true;
                stack.push(t);
            }
        }
    }
    let mut backward: Vec<bool> = (0..n).map(|s| dfa.is_accepting(s)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&s| backward[s]).collect();
    while let Some(t) = stack.pop() {
        for s in 0..n {
            if m[s][t] > 0 && !backward[s] {
                backward[s] = true;
                stack.push(s);
            }
        }
    }
    (0..n).filter(|&s| s != DEAD && forward[s] && backward[s]).collect()
}

/// Dominant eigenvalue of the trimmed transfer matrix by power iteration
/// from the all-ones vector. Stops when successive Rayleigh quotients differ
/// by less than `tol`.
pub fn growth_rate(dfa: &CountingDfa, iterations: usize, tol: f64) -> Result<GrowthEstimate, ThreeSatError> {
    assert!(iterations >= 1 && tol > 0.0);
    let keep = trim(dfa);
    let full = dfa.transfer_matrix();
    let size = keep.len();
    if size == 0 {
        return Ok(GrowthEstimate { lambda: 0.0, iterations: 0, trimmed_states: 0 });
    }
    // sparse rows of the restricted matrix
    let rows: Vec<Vec<(usize, f64)>> = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .enumerate()
                .filter(|(_, &j)| full[i][j] > 0)
                .map(|(jj, &j)| (jj, full[i][j] as f64))
                .collect()
        })
        .collect();

    let mut x = vec![1.0 / (size as f64).sqrt(); size];
    let mut previous = f64::NAN;
    for iter in 1..=iterations {
        let y: Vec<f64> = rows.iter().map(|r| r.iter().map(|&(j, a)| a * x[j]).sum()).collect();
        let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // nilpotent: finitely many accepted words
            return Ok(GrowthEstimate { lambda: 0.0, iterations: iter, trimmed_states: size });
        }
        if (rayleigh - previous).abs() < tol {
            return Ok(GrowthEstimate { lambda: rayleigh, iterations: iter, trimmed_states: size });
        }
        previous = rayleigh;
        x = y.into_iter().map(|v| v / norm).collect();
        if iter == iterations {
            let last = rows
                .iter()
                .zip(&x)
                .map(|(r, xi)| xi * r.iter().map(|&(j, a)| a * x[j]).sum::<f64>())
                .sum();
            return Err(ThreeSatError::NotConverged { previous, last });
        }
    }
    unreachable!("loop returns on its last iteration")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ln_biguint;
    use crate::threesat::{build_counting_dfa, core_clauses, Sym};

    #[test]
    fn two_symbol_loop() {
        let mut row = [DEAD; Sym::COUNT];
        row[Sym::Zero.index()] = 1;
        row[Sym::One.index()] = 1;
        let dfa = CountingDfa::from_parts(1, vec![[DEAD; Sym::COUNT], row], vec![false, true]).unwrap();
        let g = growth_rate(&dfa, 100, 1e-12).unwrap();
        assert!((g.lambda - 2.0).abs() < 1e-12);
        assert_eq!(g.trimmed_states, 1);
    }

    #[test]
    fn finite_language_has_zero_growth() {
        let mut open = [DEAD; Sym::COUNT];
        open[Sym::Open.index()] = 2;
        let dfa = CountingDfa::from_parts(1, vec![[DEAD; Sym::COUNT], open, [DEAD; Sym::COUNT]], vec![false, false, true])
            .unwrap();
        assert_eq!(growth_rate(&dfa, 10, 1e-10).unwrap().lambda, 0.0);
    }

    #[test]
    fn omission_lowers_growth() {
        let full = growth_rate(&build_counting_dfa(&[]), DEFAULT_ITERATIONS, DEFAULT_TOLERANCE).unwrap();
        assert!(full.lambda > 1.0);
        let core = core_clauses();
        let omit = growth_rate(&build_counting_dfa(&core[..1]), DEFAULT_ITERATIONS, DEFAULT_TOLERANCE).unwrap();
        assert!(omit.lambda < full.lambda, "{} vs {}", omit.lambda, full.lambda);
    }

    #[test]
    fn agrees_with_count_ratio() {
        let dfa = build_counting_dfa(&[]);
        let counts = dfa.word_counts(400);
        let ratio = (ln_biguint(&counts[400]) - ln_biguint(&counts[399])).exp();
        let g = growth_rate(&dfa, DEFAULT_ITERATIONS, DEFAULT_TOLERANCE).unwrap();
        assert!((ratio - g.lambda).abs() < 1e-6, "{ratio} vs {}", g.lambda);
    }

    #[test]
    fn reports_non_convergence() {
        let dfa = build_counting_dfa(&[]);
        assert!(matches!(growth_rate(&dfa, 2, 1e-15), Err(ThreeSatError::NotConverged { .. })));
    }
}
