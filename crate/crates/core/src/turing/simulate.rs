use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::program::{Direction, Symbol, TmProgram};
use crate::density::{Answer, PartialVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Halted,
    /// Attempted a left move from square 0.
    Crashed,
    /// Entered some non-halting state for the second time.
    StateRepeated,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub kind: RunKind,
    /// Transitions attempted, including a crashing one.
    pub steps: u64,
    /// States entered, starting with state 1.
    pub visited_states: BTreeSet<u32>,
}

/// Run `program` from state 1 on a blank tape, head on square 0, until it
/// halts, crashes, repeats a state, or uses `fuel` transitions.
///
/// A crashing left move consumes a step but leaves tape and state as they
/// were.
pub fn simulate(program: &TmProgram, fuel: u64) -> RunOutcome {
    run(program, fuel, true)
}

/// Like [`simulate`] but ignores repeated states, so the run ends only by
/// halting, crashing, or running out of fuel.
pub fn run_until_stop(program: &TmProgram, fuel: u64) -> RunOutcome {
    run(program, fuel, false)
}

fn run(program: &TmProgram, fuel: u64, stop_on_repeat: bool) -> RunOutcome {
    let mut tape: Vec<Symbol> = vec![Symbol::A0];
    let mut head = 0usize;
    let mut state = 1u32;
    let mut visited = BTreeSet::from([1u32]);
    let mut steps = 0u64;
    while steps < fuel {
        let ins = program.instruction(state, tape[head]);
        steps += 1;
        if ins.dir == Direction::L && head == 0 {
            return RunOutcome { kind: RunKind::Crashed, steps, visited_states: visited };
        }
        tape[head] = ins.write;
        match ins.dir {
            Direction::L => head -= 1,
            Direction::R => {
                head += 1;
                if head == tape.len() {
                    tape.push(Symbol::A0);
                }
            }
        }
        if ins.next == 0 {
            visited.insert(0);
            return RunOutcome { kind: RunKind::Halted, steps, visited_states: visited };
        }
        if !visited.insert(ins.next) && stop_on_repeat {
            return RunOutcome { kind: RunKind::StateRepeated, steps, visited_states: visited };
        }
        state = ins.next;
    }
    RunOutcome { kind: RunKind::FuelExhausted, steps, visited_states: visited }
}

/// Fuel that suffices for [`algorithm_one`]: without repeating a state a
/// program makes at most `n + 1` transitions.
pub fn algorithm_one_fuel(program: &TmProgram) -> u64 {
    program.states() as u64 + 2
}

/// Run until the first repeated state; `Yes` if the program halted first,
/// `No` if it crashed first, otherwise `DontKnow`.
pub fn algorithm_one(program: &TmProgram) -> PartialVerdict {
    let fuel = algorithm_one_fuel(program);
    let outcome = simulate(program, fuel);
    match outcome.kind {
        RunKind::Halted => PartialVerdict::yes(outcome.steps, fuel),
        RunKind::Crashed => PartialVerdict::no(outcome.steps, fuel),
        RunKind::StateRepeated | RunKind::FuelExhausted => PartialVerdict::dont_know(outcome.steps, fuel),
    }
}

/// Whether a decided verdict agrees with an unrestricted run: `Yes` must
/// halt and `No` must crash within the verdict's step count. `DontKnow` is
/// always sound.
pub fn verdict_is_sound(program: &TmProgram, verdict: &PartialVerdict) -> bool {
    let kind = run_until_stop(program, verdict.steps).kind;
    match verdict.answer {
        Answer::Yes => kind == RunKind::Halted,
        Answer::No => kind == RunKind::Crashed,
        Answer::DontKnow => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turing::program::Instruction;

    fn one_state(first: Instruction) -> TmProgram {
        TmProgram::new(1, vec![first, Instruction { next: 0, write: Symbol::A0, dir: Direction::R }]).unwrap()
    }

    #[test]
    fn immediate_halt() {
        let p = one_state(Instruction { next: 0, write: Symbol::A0, dir: Direction::R });
        let out = simulate(&p, 10);
        assert_eq!((out.kind, out.steps), (RunKind::Halted, 1));
        assert_eq!(algorithm_one(&p), PartialVerdict::yes(1, 3));
    }

    #[test]
    fn left_move_crashes() {
        let p = one_state(Instruction { next: 0, write: Symbol::A0, dir: Direction::L });
        let out = simulate(&p, 10);
        assert_eq!((out.kind, out.steps), (RunKind::Crashed, 1));
        assert_eq!(algorithm_one(&p).answer, Answer::No);
    }

    #[test]
    fn reentering_start_state_repeats() {
        let p = one_state(Instruction { next: 1, write: Symbol::A1, dir: Direction::R });
        let out = simulate(&p, 10);
        assert_eq!((out.kind, out.steps), (RunKind::StateRepeated, 1));
        assert_eq!(algorithm_one(&p).answer, Answer::DontKnow);
    }

    #[test]
    fn crash_after_walking_right_then_left() {
        // 1 -R-> 2 -L-> 3 -L-> crash at square 0
        let codes = |next: u64, dir_r: bool| next * 4 + dir_r as u64;
        let p = TmProgram::from_codes(3, &[codes(2, true), 0, codes(3, false), 0, codes(2, false), 0]).unwrap();
        let out = simulate(&p, 100);
        assert_eq!(out.kind, RunKind::Crashed);
        assert_eq!(out.steps, 3);
        assert_eq!(out.visited_states, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn fuel_exhaustion() {
        let p = TmProgram::from_codes(3, &[2 * 4 + 1, 0, 3 * 4 + 1, 0, 4 + 1, 0]).unwrap();
        let out = simulate(&p, 2);
        assert_eq!((out.kind, out.steps), (RunKind::FuelExhausted, 2));
        assert_eq!(simulate(&p, 3).kind, RunKind::StateRepeated);
    }

    #[test]
    fn unrestricted_run_passes_repeats() {
        // 1 -R-> 1 forever on blanks
        let p = one_state(Instruction { next: 1, write: Symbol::A0, dir: Direction::R });
        assert_eq!(run_until_stop(&p, 50).kind, RunKind::FuelExhausted);
        let p = one_state(Instruction { next: 1, write: Symbol::A1, dir: Direction::L });
        assert_eq!(run_until_stop(&p, 50).kind, RunKind::Crashed);
    }

    #[test]
    fn soundness_of_verdicts() {
        let halt = one_state(Instruction { next: 0, write: Symbol::A0, dir: Direction::R });
        assert!(verdict_is_sound(&halt, &algorithm_one(&halt)));
        assert!(!verdict_is_sound(&halt, &PartialVerdict::no(1, 3)));
        let crash = one_state(Instruction { next: 0, write: Symbol::A0, dir: Direction::L });
        assert!(verdict_is_sound(&crash, &algorithm_one(&crash)));
        assert!(!verdict_is_sound(&crash, &PartialVerdict::yes(1, 3)));
    }
}
