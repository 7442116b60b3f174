use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonempty word over `{0, 1}`.
///
/// Ordering is length first, then lexicographic, so that sorted collections
/// list shorter words before their extensions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Domain("binary word must be nonempty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Domain("binary word digits must be 0 or 1".into()));
        }
        Ok(BinaryWord(bits))
    }

    /// Word with the bits of `value`, most significant first, padded to `len`.
    pub fn from_index(value: u64, len: usize) -> Self {
        assert!((1..=64).contains(&len));
        BinaryWord((0..len).rev().map(|i| ((value >> i) & 1) as u8).collect())
    }

    pub fn index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn zeros(len: usize) -> Self {
        BinaryWord(vec![0; len.max(1)])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> u8 {
        *self.0.last().expect("nonempty")
    }

    /// The first `len` bits, if `len >= 1`.
    pub fn prefix(&self, len: usize) -> Option<BinaryWord> {
        (len >= 1 && len <= self.len()).then(|| BinaryWord(self.0[..len].to_vec()))
    }

    pub fn push(&self, bit: u8) -> BinaryWord {
        let mut v = self.0.clone();
        v.push(bit);
        BinaryWord(v)
    }

    pub fn reversed(&self) -> BinaryWord {
        BinaryWord(self.0.iter().rev().copied().collect())
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Every word of length exactly `len`, in index order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BinaryWord> {
        (0..1u64 << len).map(move |i| BinaryWord::from_index(i, len))
    }

    /// Every word of length `1..=max_len`, shorter first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BinaryWord> {
        (1..=max_len).flat_map(BinaryWord::all_of_length)
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad word {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryWord::new(bits)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
