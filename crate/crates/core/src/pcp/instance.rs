use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PcpError;
use crate::density::PartialVerdict;

/// A word over the alphabet `{0, .., k-1}`.
pub type Word = Vec<u8>;

/// A Post correspondence instance `(u_1, v_1) .. (u_n, v_n)` over `k` letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcpInstance {
    k: u8,
    pairs: Vec<(Word, Word)>,
}

impl PcpInstance {
    pub fn new(k: u8, pairs: Vec<(Word, Word)>) -> Result<Self, PcpError> {
        if k < 2 {
            return Err(PcpError::Invalid(format!("alphabet size {k} < 2")));
        }
        for (i, (u, v)) in pairs.iter().enumerate() {
            if u.is_empty() || v.is_empty() {
                return Err(PcpError::Invalid(format!("pair {} has an empty word", i + 1)));
            }
            if u.iter().chain(v).any(|&c| c >= k) {
                return Err(PcpError::Invalid(format!("pair {} uses a letter outside 0..{k}", i + 1)));
            }
        }
        Ok(Self { k, pairs })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    /// Number of pairs; the instance lies in the sphere of this radius when
    /// [`Self::in_sphere`] holds.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.pairs.iter().map(|(u, v)| u.len().max(v.len())).max().unwrap_or(0)
    }

    /// `n` pairs, every word of length between 1 and `n`.
    pub fn in_sphere(&self, n: usize) -> bool {
        self.len() == n && self.max_word_len() <= n
    }

    pub fn total_len(&self) -> u64 {
        self.pairs.iter().map(|(u, v)| (u.len() + v.len()) as u64).sum()
    }
}

fn is_prefix_related(u: &[u8], v: &[u8]) -> (bool, u64) {
    let common = u.len().min(v.len());
    for i in 0..common {
        if u[i] != v[i] {
            return (false, i as u64 + 1);
        }
    }
    (true, common as u64 + 1)
}

/// Whether some pair has `u_i` a prefix of `v_i` or vice versa.
pub fn has_prefix_pair(instance: &PcpInstance) -> bool {
    instance.pairs.iter().any(|(u, v)| is_prefix_related(u, v).0)
}

/// `No` when no pair is prefix-related (every solution must start with
/// such a pair); `DontKnow` otherwise. Steps count letter comparisons.
pub fn algorithm_two(instance: &PcpInstance) -> PartialVerdict {
    let fuel = instance.total_len() + instance.len() as u64;
    let mut steps = 0;
    for (u, v) in &instance.pairs {
        let (related, cost) = is_prefix_related(u, v);
        steps += cost;
        if related {
            return PartialVerdict::dont_know(steps, fuel);
        }
    }
    PartialVerdict::no(steps, fuel)
}

fn word_text(w: &[u8]) -> String {
    w.iter().map(|&c| char::from(b'0' + c)).collect()
}

/// Text format `k; u1,v1; u2,v2; ...` with letters as digits.
impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k)?;
        for (u, v) in &self.pairs {
            write!(f, "; {},{}", word_text(u), word_text(v))?;
        }
        Ok(())
    }
}

fn parse_word(text: &str, k: u8) -> Result<Word, PcpError> {
    text.trim()
        .chars()
        .map(|c| match c.to_digit(10) {
            Some(d) if (d as u8) < k => Ok(d as u8),
            _ => Err(PcpError::Parse(format!("`{c}` is not a letter of the {k}-letter alphabet"))),
        })
        .collect()
}

impl FromStr for PcpInstance {
    type Err = PcpError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut fields = text.trim().split(';');
        let k: u8 = fields
            .next()
            .and_then(|f| f.trim().parse().ok())
            .ok_or_else(|| PcpError::Parse("expected the alphabet size first".into()))?;
        if !(2..=10).contains(&k) {
            return Err(PcpError::Parse(format!("alphabet size {k} outside 2..=10 for digit letters")));
        }
        let pairs = fields
            .filter(|f| !f.trim().is_empty())
            .map(|f| {
                let (u, v) = f.split_once(',').ok_or_else(|| PcpError::Parse(format!("pair `{}` lacks a comma", f.trim())))?;
                Ok((parse_word(u, k)?, parse_word(v, k)?))
            })
            .collect::<Result<Vec<_>, PcpError>>()?;
        PcpInstance::new(k, pairs)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRepr {
    k: u8,
    pairs: Vec<(String, String)>,
}

impl Serialize for PcpInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InstanceRepr { k: self.k, pairs: self.pairs.iter().map(|(u, v)| (word_text(u), word_text(v))).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PcpInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = InstanceRepr::deserialize(d)?;
        let pairs = repr
            .pairs
            .iter()
            .map(|(u, v)| Ok((parse_word(u, repr.k)?, parse_word(v, repr.k)?)))
            .collect::<Result<Vec<_>, PcpError>>()
            .map_err(serde::de::Error::custom)?;
        PcpInstance::new(repr.k, pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Answer;

    fn inst(text: &str) -> PcpInstance {
        text.parse().unwrap()
    }

    #[test]
    fn prefix_pairs() {
        assert!(has_prefix_pair(&inst("2; 0,0")));
        assert!(!has_prefix_pair(&inst("2; 0,1")));
        assert!(has_prefix_pair(&inst("2; 01,0")));
    }

    #[test]
    fn algorithm_two_verdicts() {
        let no = algorithm_two(&inst("2; 0,1; 10,11"));
        assert_eq!(no.answer, Answer::No);
        assert!(no.steps <= no.fuel);
        assert_eq!(algorithm_two(&inst("2; 0,0")).answer, Answer::DontKnow);
        assert_eq!(algorithm_two(&inst("2; 01,0; 1,11")).answer, Answer::DontKnow);
    }

    #[test]
    fn text_and_json_round_trip() {
        let i = inst("3; 012,2; 1,10");
        assert_eq!(i.to_string(), "3; 012,2; 1,10");
        assert_eq!(inst(&i.to_string()), i);
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"k":3,"pairs":[["012","2"],["1","10"]]}"#);
        assert_eq!(serde_json::from_str::<PcpInstance>(&json).unwrap(), i);
    }

    #[test]
    fn rejects_invalid_text() {
        assert!("1; 0,0".parse::<PcpInstance>().is_err());
        assert!("2; 0,2".parse::<PcpInstance>().is_err());
        assert!("2; ,1".parse::<PcpInstance>().is_err());
        assert!("2; 01".parse::<PcpInstance>().is_err());
    }

    #[test]
    fn sphere_membership() {
        assert!(inst("2; 01,1; 1,1").in_sphere(2));
        assert!(!inst("2; 011,1; 1,1").in_sphere(2));
        assert!(!inst("2; 0,1").in_sphere(2));
    }
}
