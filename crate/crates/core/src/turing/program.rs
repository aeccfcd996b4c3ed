use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TuringError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "a0")]
    A0,
    #[serde(rename = "a1")]
    A1,
}

impl Symbol {
    pub const ALL: [Symbol; 2] = [Symbol::A0, Symbol::A1];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

/// Right-hand side of a table entry: `(state', symbol', direction)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub next: u32,
    pub write: Symbol,
    pub dir: Direction,
}

impl Instruction {
    /// Targets per table entry for a program with `states` non-halting states.
    pub fn target_count(states: u32) -> u64 {
        4 * (states as u64 + 1)
    }

    /// Position in the lexicographic order `(next, write, dir)`.
    pub fn encode(self) -> u64 {
        self.next as u64 * 4 + self.write.index() as u64 * 2 + (self.dir == Direction::R) as u64
    }

    pub fn decode(code: u64) -> Self {
        Self {
            next: (code / 4) as u32,
            write: if (code / 2) % 2 == 0 { Symbol::A0 } else { Symbol::A1 },
            dir: if code % 2 == 0 { Direction::L } else { Direction::R },
        }
    }
}

/// A program `p: {1..n} × {a0,a1} → {0..n} × {a0,a1} × {L,R}`.
///
/// State 1 starts, state 0 halts. Size is `n`, the number of non-halting
/// states. Entries are stored in `(state, symbol)` order with `a0` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TmProgram {
    states: u32,
    table: Vec<Instruction>,
}

impl TmProgram {
    pub fn new(states: u32, table: Vec<Instruction>) -> Result<Self, TuringError> {
        if states == 0 {
            return Err(TuringError::InvalidProgram("at least one non-halting state is required".into()));
        }
        if table.len() != 2 * states as usize {
            return Err(TuringError::InvalidProgram(format!(
                "expected {} table entries, found {}",
                2 * states,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|i| i.next > states) {
            return Err(TuringError::InvalidProgram(format!("target state {} out of range 0..={states}", bad.next)));
        }
        Ok(Self { states, table })
    }

    /// Program whose entries are the given target codes (see [`Instruction::encode`]).
    pub fn from_codes(states: u32, codes: &[u64]) -> Result<Self, TuringError> {
        let limit = Instruction::target_count(states);
        if let Some(bad) = codes.iter().find(|&&c| c >= limit) {
            return Err(TuringError::InvalidProgram(format!("target code {bad} out of range")));
        }
        Self::new(states, codes.iter().map(|&c| Instruction::decode(c)).collect())
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn instruction(&self, state: u32, symbol: Symbol) -> Instruction {
        debug_assert!((1..=self.states).contains(&state));
        self.table[2 * (state as usize - 1) + symbol.index()]
    }

    pub fn table(&self) -> &[Instruction] {
        &self.table
    }

    /// Every `(state, symbol, instruction)` triple in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, Symbol, Instruction)> + '_ {
        self.table.iter().enumerate().map(|(i, &ins)| (i as u32 / 2 + 1, Symbol::ALL[i % 2], ins))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::A0 => "a0",
            Symbol::A1 => "a1",
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L => "L",
            Direction::R => "R",
        })
    }
}

/// Text format: the state count on the first line, then one line
/// `state symbol -> state' symbol' dir` per entry in canonical order.
impl fmt::Display for TmProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.states)?;
        for (state, symbol, ins) in self.entries() {
            writeln!(f, "{state} {symbol} -> {} {} {}", ins.next, ins.write, ins.dir)?;
        }
        Ok(())
    }
}

fn parse_symbol(s: &str, line: usize) -> Result<Symbol, TuringError> {
    match s {
        "a0" => Ok(Symbol::A0),
        "a1" => Ok(Symbol::A1),
        other => Err(TuringError::Parse { line, message: format!("unknown symbol `{other}`") }),
    }
}

fn parse_number(s: &str, line: usize) -> Result<u32, TuringError> {
    s.parse().map_err(|_| TuringError::Parse { line, message: format!("expected a state number, found `{s}`") })
}

impl FromStr for TmProgram {
    type Err = TuringError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (first_no, first) = lines.next().ok_or(TuringError::Parse { line: 1, message: "empty input".into() })?;
        let states = parse_number(first.trim(), first_no + 1)?;
        let mut table = Vec::with_capacity(2 * states as usize);
        for (expected, (idx, line)) in lines.enumerate() {
            let line_no = idx + 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let [state, symbol, arrow, next, write, dir] = tokens[..] else {
                return Err(TuringError::Parse { line: line_no, message: "expected `state symbol -> state' symbol' dir`".into() });
            };
            if arrow != "->" {
                return Err(TuringError::Parse { line: line_no, message: format!("expected `->`, found `{arrow}`") });
            }
            let state = parse_number(state, line_no)?;
            let symbol = parse_symbol(symbol, line_no)?;
            let want_state = expected as u32 / 2 + 1;
            let want_symbol = Symbol::ALL[expected % 2];
            if state != want_state || symbol != want_symbol {
                return Err(TuringError::Parse {
                    line: line_no,
                    message: format!("entries out of order: expected `{want_state} {want_symbol}`"),
                });
            }
            let dir = match dir {
                "L" => Direction::L,
                "R" => Direction::R,
                other => return Err(TuringError::Parse { line: line_no, message: format!("unknown direction `{other}`") }),
            };
            table.push(Instruction { next: parse_number(next, line_no)?, write: parse_symbol(write, line_no)?, dir });
        }
        TmProgram::new(states, table)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    state: u32,
    symbol: Symbol,
    next: u32,
    write: Symbol,
    dir: Direction,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramRepr {
    n: u32,
    table: Vec<EntryRepr>,
}

impl Serialize for TmProgram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProgramRepr {
            n: self.states,
            table: self
                .entries()
                .map(|(state, symbol, ins)| EntryRepr { state, symbol, next: ins.next, write: ins.write, dir: ins.dir })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TmProgram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ProgramRepr::deserialize(d)?;
        for (i, e) in repr.table.iter().enumerate() {
            if e.state != i as u32 / 2 + 1 || e.symbol != Symbol::ALL[i % 2] {
                return Err(serde::de::Error::custom(format!("table entry {i} out of canonical order")));
            }
        }
        let table = repr.table.iter().map(|e| Instruction { next: e.next, write: e.write, dir: e.dir }).collect();
        TmProgram::new(repr.n, table).map_err(serde::de::Error::custom)
    }
}
