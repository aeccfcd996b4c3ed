use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ThreeSatError;

/// The seven-letter instance alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sym {
    Zero,
    One,
    Or,
    Neg,
    Open,
    Close,
    And,
}

impl Sym {
    pub const ALL: [Sym; 7] = [Sym::Zero, Sym::One, Sym::Or, Sym::Neg, Sym::Open, Sym::Close, Sym::And];
    pub const COUNT: usize = 7;

    pub fn index(self) -> usize {
        self as usize
    }

    /// Canonical ASCII spelling (`v` for ∨, `^` for ∧).
    pub fn ascii(self) -> char {
        match self {
            Sym::Zero => '0',
            Sym::One => '1',
            Sym::Or => 'v',
            Sym::Neg => '\'',
            Sym::Open => '[',
            Sym::Close => ']',
            Sym::And => '^',
        }
    }

    pub fn unicode(self) -> char {
        match self {
            Sym::Or => '∨',
            Sym::And => '∧',
            other => other.ascii(),
        }
    }

    /// Accepts both spellings of the connectives.
    pub fn from_char(c: char) -> Option<Sym> {
        Some(match c {
            '0' => Sym::Zero,
            '1' => Sym::One,
            'v' | '∨' => Sym::Or,
            '\'' => Sym::Neg,
            '[' => Sym::Open,
            ']' => Sym::Close,
            '^' | '∧' => Sym::And,
            _ => return None,
        })
    }
}

/// A variable written in binary (`1(0|1)*`), possibly negated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: String,
    negated: bool,
}

impl Literal {
    pub fn new(var: impl Into<String>, negated: bool) -> Result<Self, ThreeSatError> {
        let var = var.into();
        let valid = var.starts_with('1') && var.chars().all(|c| c == '0' || c == '1');
        if !valid {
            return Err(ThreeSatError::InvalidVariable(var));
        }
        Ok(Self { var, negated })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn negated(&self) -> bool {
        self.negated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    pub fn new(literals: [Literal; 3]) -> Self {
        Self { literals }
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    /// `[x∨y∨z]` without the trailing conjunction.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut out = vec![Sym::Open];
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                out.push(Sym::Or);
            }
            out.extend(lit.var.chars().map(|c| if c == '0' { Sym::Zero } else { Sym::One }));
            if lit.negated {
                out.push(Sym::Neg);
            }
        }
        out.push(Sym::Close);
        out
    }
}

/// The eight clauses over variables `1, 10, 11` (in that order), one per
/// sign pattern, first literal most significant. No assignment satisfies
/// all of them.
pub fn core_clauses() -> Vec<Clause> {
    (0..8u8)
        .map(|mask| {
            let lit = |i: u8, var: &str| Literal::new(var, mask >> (2 - i) & 1 == 1).expect("core variable");
            Clause::new([lit(0, "1"), lit(1, "10"), lit(2, "11")])
        })
        .collect()
}

/// A word of `(R∧)*`: clauses, each followed by a conjunction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cnf3Instance {
    pub clauses: Vec<Clause>,
}

impl Cnf3Instance {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Self { clauses }
    }

    pub fn symbols(&self) -> Vec<Sym> {
        self.clauses
            .iter()
            .flat_map(|c| {
                let mut s = c.symbols();
                s.push(Sym::And);
                s
            })
            .collect()
    }

    /// Number of symbols in the rendered word.
    pub fn size(&self) -> u64 {
        self.clauses.iter().map(|c| c.symbols().len() as u64 + 1).sum()
    }

    /// Canonical ASCII rendering.
    pub fn render(&self) -> String {
        self.symbols().into_iter().map(Sym::ascii).collect()
    }

    pub fn render_unicode(&self) -> String {
        self.symbols().into_iter().map(Sym::unicode).collect()
    }
}

impl fmt::Display for Cnf3Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Cnf3Instance {
    type Err = ThreeSatError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_instance(text)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Sym> {
        self.chars.get(self.pos).and_then(|&c| Sym::from_char(c))
    }

    fn error(&self, expected: &str) -> ThreeSatError {
        ThreeSatError::Syntax { position: self.pos, expected: expected.into(), found: self.chars.get(self.pos).copied() }
    }

    fn expect(&mut self, sym: Sym, expected: &str) -> Result<(), ThreeSatError> {
        if self.peek() == Some(sym) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn literal(&mut self, separator: Sym, separator_name: &str) -> Result<Literal, ThreeSatError> {
        self.expect(Sym::One, "variable starting with `1`")?;
        let mut var = String::from("1");
        while let Some(s @ (Sym::Zero | Sym::One)) = self.peek() {
            var.push(s.ascii());
            self.pos += 1;
        }
        let negated = self.peek() == Some(Sym::Neg);
        if negated {
            self.pos += 1;
        }
        if self.peek() != Some(separator) {
            let expected = if negated {
                separator_name.to_string()
            } else {
                format!("binary digit, `'` or {separator_name}")
            };
            return Err(self.error(&expected));
        }
        self.pos += 1;
        Literal::new(var, negated)
    }

    fn clause(&mut self) -> Result<Clause, ThreeSatError> {
        self.expect(Sym::Open, "`[`")?;
        let a = self.literal(Sym::Or, "`v`")?;
        let b = self.literal(Sym::Or, "`v`")?;
        let c = self.literal(Sym::Close, "`]`")?;
        self.expect(Sym::And, "`^` after `]`")?;
        Ok(Clause::new([a, b, c]))
    }
}

/// Parse a word of `(R∧)*`. Positions in errors count symbols (characters),
/// so `∨` and `v` both occupy one position.
pub fn parse_instance(text: &str) -> Result<Cnf3Instance, ThreeSatError> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0 };
    let mut clauses = Vec::new();
    while parser.pos < parser.chars.len() {
        clauses.push(parser.clause()?);
    }
    Ok(Cnf3Instance { clauses })
}

#[derive(Serialize)]
struct LiteralRepr {
    var: String,
    negated: bool,
}

impl Serialize for Cnf3Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Cnf3Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_instance(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Clause {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.literals
            .iter()
            .map(|l| LiteralRepr { var: l.var.clone(), negated: l.negated })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_positive_clause() {
        let inst = parse_instance("[1∨10∨11]∧").unwrap();
        assert_eq!(inst.clauses.len(), 1);
        let lits = inst.clauses[0].literals();
        assert_eq!((lits[0].var(), lits[0].negated()), ("1", false));
        assert_eq!((lits[1].var(), lits[1].negated()), ("10", false));
        assert_eq!((lits[2].var(), lits[2].negated()), ("11", false));
        assert_eq!(inst.render(), "[1v10v11]^");
        assert_eq!(inst.render_unicode(), "[1∨10∨11]∧");
    }

    #[test]
    fn empty_word_is_empty_instance() {
        assert_eq!(parse_instance("").unwrap(), Cnf3Instance::default());
    }

    #[test]
    fn negated_first_literal() {
        let inst = parse_instance("[10'∨101∨1]∧").unwrap();
        let lits = inst.clauses[0].literals();
        assert!(lits[0].negated() && !lits[1].negated() && !lits[2].negated());
        assert_eq!(lits[0].var(), "10");
        assert_eq!(inst.size(), 12);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("[1v10v11]", 9),
            ("[1v10v11^", 8),
            ("[0v1v1]^", 1),
            ("[1v1v1]^x", 8),
            ("[1''v1v1]^", 3),
            ("[1v1]^", 4),
            ("1v1v1]^", 0),
        ];
        for (text, pos) in cases {
            match parse_instance(text) {
                Err(ThreeSatError::Syntax { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn core_clause_lengths() {
        let core = core_clauses();
        assert_eq!(core.len(), 8);
        let lens: Vec<usize> = core.iter().map(|c| c.symbols().len() + 1).collect();
        assert_eq!(lens.iter().sum::<usize>(), 92);
        assert_eq!(Cnf3Instance::new(core.clone()).size(), 92);
        assert_eq!(Cnf3Instance::new(vec![core[0].clone()]).render(), "[1v10v11]^");
        assert_eq!(Cnf3Instance::new(vec![core[7].clone()]).render(), "[1'v10'v11']^");
    }

    #[test]
    fn rejects_bad_variables() {
        assert!(Literal::new("01", false).is_err());
        assert!(Literal::new("", false).is_err());
        assert!(Literal::new("12", false).is_err());
    }
}
