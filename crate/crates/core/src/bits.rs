//! Fixed-length bit strings.
//!
//! Index 0 is the leftmost bit. When a bit string is read as an integer it is
//! big-endian: the leftmost bit is the most significant. The text form is
//! ASCII `0`/`1`, leftmost first, and that is also the serde form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub const fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            bits: Vec::with_capacity(cap),
        }
    }

    /// The `len`-bit big-endian representation of `value`.
    ///
    /// Bits of `value` above position `len` are dropped.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| {
                let shift = len - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    /// Panics when `index` is out of range, like slice indexing.
    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.bits.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        self.iter().map(|b| !b).collect()
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// Big-endian integer value. Fails for strings longer than 64 bits.
    pub fn to_u64(&self) -> Result<u64> {
        if self.len() > 64 {
            return Err(Error::domain(format!(
                "a {}-bit string does not fit in 64 bits",
                self.len()
            )));
        }
        Ok(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    /// Integer value of the bits found at `indices`, read in the order given,
    /// big-endian. Callers pass ascending indices to get the canonical
    /// restriction `s_I`.
    pub fn restricted_value(&self, indices: &[usize]) -> u64 {
        debug_assert!(indices.len() <= 64);
        indices
            .iter()
            .fold(0u64, |acc, &i| (acc << 1) | self.bits[i] as u64)
    }

    pub fn restrict(&self, indices: &[usize]) -> Self {
        indices.iter().map(|&i| self.bits[i]).collect()
    }

    /// All strings of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "refusing to enumerate 2^{len} strings");
        (0..1u64 << len).map(move |v| BitString::from_u64(v, len))
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Decode(format!(
                    "bit strings use only '0' and '1', found {other:?}"
                ))),
            })
            .collect()
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout the tests: `bits("0110")`.
///
/// Panics on characters other than `0` and `1`.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let b = bits("0110");
        assert_eq!(b.len(), 4);
        assert_eq!(b.to_string(), "0110");
        assert!("01a".parse::<BitString>().is_err());
        assert_eq!(bits(""), BitString::new());
    }

    #[test]
    fn big_endian_value() {
        assert_eq!(bits("10").to_u64().unwrap(), 2);
        assert_eq!(bits("0001").to_u64().unwrap(), 1);
        assert_eq!(BitString::from_u64(5, 4), bits("0101"));
        assert_eq!(BitString::from_u64(0, 0), BitString::new());
    }

    #[test]
    fn restriction_reads_given_indices_big_endian() {
        let s = bits("101");
        assert_eq!(s.restricted_value(&[0, 1]), 2);
        assert_eq!(s.restricted_value(&[1, 2]), 1);
        assert_eq!(s.restrict(&[0, 2]), bits("11"));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<String> = BitString::all(2).map(|b| b.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(BitString::all(0).count(), 1);
    }

    #[test]
    fn serde_uses_text_form() {
        let json = serde_json::to_string(&bits("1001")).unwrap();
        assert_eq!(json, "\"1001\"");
        let back: BitString = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bits("1001"));
    }
}
