//! Words over valued alphabets and the sum / prefix-sum / height / area
//! machinery built on top of them.
//!
//! Letters are lowercase ASCII bytes. An [`Alphabet`] assigns every letter a
//! distinct exact rational value; all arithmetic is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Value = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter '{0}' is not a lowercase ASCII letter")]
    InvalidLetter(char),
    #[error("letter '{0}' has no value in the alphabet")]
    UnknownLetter(char),
    #[error("letter '{0}' is valued twice")]
    DuplicateLetter(char),
    #[error("letters '{0}' and '{1}' share the value {2}")]
    DuplicateValue(char, char, Value),
    #[error("malformed valuation entry '{0}'")]
    MalformedValuation(String),
    #[error("word is not zero-sum (sum = {0})")]
    NotZeroSum(Value),
    #[error("operation requires a nonempty word")]
    EmptyWord,
}

/// A finite word over lowercase ASCII letters. The empty word is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw bytes without validation. Callers guarantee
    /// lowercase ASCII.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        debug_assert!(bytes.iter().all(u8::is_ascii_lowercase));
        Word(bytes)
    }

    pub fn parse(s: &str) -> Result<Self, WordError> {
        s.parse()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bytes = Vec::with_capacity(self.len() + other.len());
        bytes.extend_from_slice(&self.0);
        bytes.extend_from_slice(&other.0);
        Word(bytes)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.len() - len..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// `self⁻¹ · other`, if `self` is a prefix of `other`.
    pub fn left_quotient(&self, other: &Word) -> Option<Word> {
        other.0.strip_prefix(self.0.as_slice()).map(|rest| Word(rest.to_vec()))
    }

    pub fn letters(&self) -> BTreeSet<u8> {
        self.0.iter().copied().collect()
    }

    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&c| c == letter).count()
    }

    /// Shortest `r` with `r^k = self`, together with the maximal `k`.
    /// Returns `None` for the empty word.
    pub fn primitive_root(&self) -> Option<(Word, usize)> {
        let n = self.len();
        if n == 0 {
            return None;
        }
        let period = n - border_len(&self.0);
        if n.is_multiple_of(period) {
            Some((self.prefix(period), n / period))
        } else {
            Some((self.clone(), 1))
        }
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.primitive_root(), Some((_, 1)))
    }

    /// Whether the two words have identical letter multiplicities.
    pub fn is_abelian_equivalent(&self, other: &Word) -> bool {
        let mut counts = [0i64; 26];
        for &c in &self.0 {
            counts[(c - b'a') as usize] += 1;
        }
        for &c in &other.0 {
            counts[(c - b'a') as usize] -= 1;
        }
        counts.iter().all(|&c| c == 0)
    }

    /// Ordering by length first, then lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Length of the longest proper border (KMP failure value of the full word).
fn border_len(s: &[u8]) -> usize {
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail.last().copied().unwrap_or(0)
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| if c.is_ascii_lowercase() { Ok(c as u8) } else { Err(WordError::InvalidLetter(c)) })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            // Letters are ASCII by construction.
            f.write_str(std::str::from_utf8(&self.0).unwrap_or_default())
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(std::str::from_utf8(&self.0).unwrap_or_default())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<&str> for Word {
    /// Panics on non-lowercase input; intended for literals.
    fn from(s: &str) -> Self {
        s.parse().expect("word literal must be lowercase ASCII")
    }
}

/// Height of a word: the maximal prefix sum over nonempty prefixes, with a
/// bottom element for the empty word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    NegInfinity,
    Finite(Value),
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::NegInfinity => f.write_str("-inf"),
            Height::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Serializes a rational as a string such as `"3"` or `"-1/2"`.
pub(crate) fn serialize_value<S: Serializer>(v: &Value, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn serialize_values<S: Serializer>(vs: &[Value], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(Value::to_string))
}

/// Running sums of a word, optionally shifted by an offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixSumWord(pub Vec<Value>);

impl PrefixSumWord {
    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<Value> {
        self.0.iter().copied().max()
    }

    pub fn min(&self) -> Option<Value> {
        self.0.iter().copied().min()
    }

    pub fn count(&self, value: Value) -> usize {
        self.0.iter().filter(|&&v| v == value).count()
    }
}

/// A set of letters with pairwise distinct rational values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    values: BTreeMap<u8, Value>,
}

impl Alphabet {
    pub fn new(entries: impl IntoIterator<Item = (u8, Value)>) -> Result<Self, WordError> {
        let mut values = BTreeMap::new();
        for (letter, value) in entries {
            if !letter.is_ascii_lowercase() {
                return Err(WordError::InvalidLetter(letter as char));
            }
            if values.insert(letter, value).is_some() {
                return Err(WordError::DuplicateLetter(letter as char));
            }
        }
        let alphabet = Alphabet { values };
        alphabet.check_distinct()?;
        Ok(alphabet)
    }

    /// Integer-valued convenience constructor.
    pub fn from_ints(entries: &[(char, i64)]) -> Result<Self, WordError> {
        Alphabet::new(entries.iter().map(|&(c, v)| (c as u8, Value::from_integer(v))))
    }

    /// Default valuation: the i-th letter (in alphabetical order, 1-based)
    /// gets value i.
    pub fn default_for(letters: impl IntoIterator<Item = u8>) -> Self {
        let letters: BTreeSet<u8> = letters.into_iter().collect();
        Alphabet { values: letters.into_iter().zip(1..).map(|(c, i)| (c, Value::from_integer(i))).collect() }
    }

    fn check_distinct(&self) -> Result<(), WordError> {
        let mut seen: BTreeMap<Value, u8> = BTreeMap::new();
        for (&c, &v) in &self.values {
            if let Some(prev) = seen.insert(v, c) {
                return Err(WordError::DuplicateValue(prev as char, c as char, v));
            }
        }
        Ok(())
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        self.values.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u8, Value)> + '_ {
        self.values.iter().map(|(&c, &v)| (c, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, letter: u8) -> Result<Value, WordError> {
        self.values.get(&letter).copied().ok_or(WordError::UnknownLetter(letter as char))
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.as_bytes().iter().all(|c| self.values.contains_key(c))
    }

    /// Adds any missing letters with fresh distinct values (larger than every
    /// existing value).
    pub fn extended_with(&self, letters: impl IntoIterator<Item = u8>) -> Alphabet {
        let mut values = self.values.clone();
        let mut next = values
            .values()
            .copied()
            .max()
            .map(|m| m.floor() + Value::from_integer(1))
            .unwrap_or_else(|| Value::from_integer(1));
        let letters: BTreeSet<u8> = letters.into_iter().collect();
        for c in letters {
            values.entry(c).or_insert_with(|| {
                let v = next;
                next += Value::from_integer(1);
                v
            });
        }
        Alphabet { values }
    }

    /// Every value multiplied by -1. Zero-sum words stay zero-sum.
    pub fn negated(&self) -> Alphabet {
        Alphabet { values: self.values.iter().map(|(&c, &v)| (c, -v)).collect() }
    }

    pub fn sum(&self, w: &Word) -> Result<Value, WordError> {
        w.as_bytes().iter().try_fold(Value::zero(), |acc, &c| Ok(acc + self.value(c)?))
    }

    pub fn is_zero_sum(&self, w: &Word) -> Result<bool, WordError> {
        Ok(self.sum(w)?.is_zero())
    }

    /// Prefix sum word shifted by `offset`: the i-th entry is
    /// `offset + sum(first i letters)`.
    pub fn psw(&self, w: &Word, offset: Value) -> Result<PrefixSumWord, WordError> {
        let mut acc = offset;
        let mut out = Vec::with_capacity(w.len());
        for &c in w.as_bytes() {
            acc += self.value(c)?;
            out.push(acc);
        }
        Ok(PrefixSumWord(out))
    }

    pub fn height(&self, w: &Word) -> Result<Height, WordError> {
        Ok(match self.psw(w, Value::zero())?.max() {
            Some(m) => Height::Finite(m),
            None => Height::NegInfinity,
        })
    }

    pub fn area(&self, w: &Word) -> Result<Value, WordError> {
        Ok(self.psw(w, Value::zero())?.0.into_iter().sum())
    }

    /// Shortest prefix of `w` whose height equals the height of `w`.
    pub fn highest_prefix(&self, w: &Word) -> Result<Word, WordError> {
        let psw = self.psw(w, Value::zero())?;
        Ok(match psw.max() {
            None => Word::empty(),
            Some(m) => {
                let pos = psw.0.iter().position(|&v| v == m).unwrap_or(0);
                w.prefix(pos + 1)
            }
        })
    }

    /// Shortest prefix of `w` whose height is at least `threshold`, if any.
    pub fn first_reaching(&self, w: &Word, threshold: Value) -> Result<Option<Word>, WordError> {
        let psw = self.psw(w, Value::zero())?;
        Ok(psw.0.iter().position(|&v| v >= threshold).map(|pos| w.prefix(pos + 1)))
    }

    /// Unique factorization of a zero-sum word into minimal zero-sum factors.
    pub fn zero_sum_factorize(&self, w: &Word) -> Result<Vec<Word>, WordError> {
        let total = self.sum(w)?;
        if !total.is_zero() {
            return Err(WordError::NotZeroSum(total));
        }
        let mut factors = Vec::new();
        let mut start = 0;
        let mut acc = Value::zero();
        for (i, &c) in w.as_bytes().iter().enumerate() {
            acc += self.value(c)?;
            if acc.is_zero() {
                factors.push(Word(w.as_bytes()[start..=i].to_vec()));
                start = i + 1;
            }
        }
        Ok(factors)
    }

    /// Parses `"a=1,b=-2"`; values may be integers or fractions `p/q`.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        s.parse()
    }
}

impl FromStr for Alphabet {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let malformed = || WordError::MalformedValuation(part.to_string());
            let (letter, value) = part.split_once('=').ok_or_else(malformed)?;
            let mut chars = letter.trim().chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => c as u8,
                _ => return Err(malformed()),
            };
            let value: Value = value.trim().parse().map_err(|_| malformed())?;
            entries.push((c, value));
        }
        Alphabet::new(entries)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(&c, v)| format!("{}={}", c as char, v)).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Re-values the letters of `current` (plus those of `w`) so that `w` becomes
/// zero-sum while all values stay distinct.
///
/// If `w` is already zero-sum under `current`, `current` is returned as is.
/// Otherwise the least frequent letter of `w` (ties broken towards the
/// alphabetically last letter) absorbs the imbalance: every other letter of
/// `w` gets 1, 2, 3, ... in alphabetical order, the remaining alphabet letters
/// continue that sequence, and everything is scaled to integers.
pub fn normalize_alphabet(w: &Word, current: &Alphabet) -> Result<Alphabet, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    if current.contains_word(w) && current.is_zero_sum(w)? {
        return Ok(current.clone());
    }
    let in_word = w.letters();
    let adjusted =
        *in_word.iter().min_by(|&&a, &&b| w.count(a).cmp(&w.count(b)).then(b.cmp(&a))).ok_or(WordError::EmptyWord)?;

    let mut values: BTreeMap<u8, i64> = BTreeMap::new();
    let mut next = 1i64;
    for &c in in_word.iter().filter(|&&c| c != adjusted) {
        values.insert(c, next);
        next += 1;
    }
    let rest: BTreeSet<u8> = current.letters().filter(|c| !in_word.contains(c)).collect();
    for c in rest {
        values.insert(c, next);
        next += 1;
    }
    let weighted: i64 = values.iter().filter(|(c, _)| in_word.contains(c)).map(|(&c, &v)| v * w.count(c) as i64).sum();
    let adjusted_count = w.count(adjusted) as i64;
    // v_adjusted = -weighted / adjusted_count; scale everything to integers.
    let scale = adjusted_count / weighted.gcd(&adjusted_count).max(1);
    let entries = values
        .into_iter()
        .map(|(c, v)| (c, Value::from_integer(v * scale)))
        .chain(std::iter::once((adjusted, Value::from_integer(-weighted * scale / adjusted_count))));
    let alphabet = Alphabet::new(entries)?;
    debug_assert!(alphabet.sum(w).map(|s| s.is_zero()).unwrap_or(false));
    Ok(alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> Value {
        Value::from_integer(n)
    }

    fn abc() -> Alphabet {
        Alphabet::from_ints(&[('a', 1), ('b', 2), ('c', -3)]).unwrap()
    }

    fn fig1() -> Alphabet {
        Alphabet::from_ints(&[('a', 1), ('b', -2)]).unwrap()
    }

    #[test]
    fn sums_from_the_worked_examples() {
        assert_eq!(abc().sum(&"bbcaac".into()).unwrap(), v(0));
        assert_eq!(abc().sum(&Word::empty()).unwrap(), v(0));
        assert_eq!(fig1().sum(&"aaabbaa".into()).unwrap(), v(1));
    }

    #[test]
    fn prefix_sum_words() {
        let w: Word = "bbcaac".into();
        let psw = abc().psw(&w, v(0)).unwrap();
        assert_eq!(psw.values(), &[v(2), v(4), v(1), v(2), v(3), v(0)]);
        assert_eq!(psw.max(), Some(v(4)));
        assert_eq!(psw.min(), Some(v(0)));
        let shifted = abc().psw(&w, v(2)).unwrap();
        assert_eq!(shifted.values(), &[v(4), v(6), v(3), v(4), v(5), v(2)]);
        assert!(abc().psw(&Word::empty(), v(7)).unwrap().is_empty());
    }

    #[test]
    fn height_and_area() {
        let w: Word = "aaabbaa".into();
        assert_eq!(w.len(), 7);
        assert_eq!(fig1().height(&w).unwrap(), Height::Finite(v(3)));
        assert_eq!(fig1().area(&w).unwrap(), v(7));
        assert_eq!(fig1().height(&Word::empty()).unwrap(), Height::NegInfinity);
        assert_eq!(fig1().area(&Word::empty()).unwrap(), v(0));
        assert_eq!(abc().height(&"bbcaac".into()).unwrap(), Height::Finite(v(4)));
        let pm = Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap();
        assert_eq!(pm.area(&"ab".into()).unwrap(), v(1));
    }

    #[test]
    fn bottom_height_is_below_everything() {
        assert!(Height::NegInfinity < Height::Finite(v(-1_000_000)));
    }

    #[test]
    fn unknown_letters_are_reported() {
        assert_eq!(fig1().sum(&"abz".into()), Err(WordError::UnknownLetter('z')));
    }

    #[test]
    fn normalization_examples() {
        let start = Alphabet::default_for(*b"ab");
        let aab = normalize_alphabet(&"aab".into(), &start).unwrap();
        assert_eq!(aab, fig1());
        let ab = normalize_alphabet(&"ab".into(), &start).unwrap();
        assert_eq!(ab, Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap());
        let pm = Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap();
        assert_eq!(normalize_alphabet(&"aabb".into(), &pm).unwrap(), pm);
        assert_eq!(normalize_alphabet(&Word::empty(), &pm), Err(WordError::EmptyWord));
    }

    #[test]
    fn normalization_single_letter_and_extra_letters() {
        let start = Alphabet::default_for(*b"abc");
        let alpha = normalize_alphabet(&"aaa".into(), &start).unwrap();
        assert_eq!(alpha.value(b'a').unwrap(), v(0));
        assert_eq!(alpha.len(), 3);
        let alpha = normalize_alphabet(&"abcab".into(), &start).unwrap();
        assert!(alpha.is_zero_sum(&"abcab".into()).unwrap());
    }

    #[test]
    fn zero_sum_factorization() {
        let pm = Alphabet::from_ints(&[('a', 1), ('b', -1)]).unwrap();
        assert_eq!(pm.zero_sum_factorize(&"abab".into()).unwrap(), vec![Word::from("ab"), Word::from("ab")]);
        assert_eq!(pm.zero_sum_factorize(&"aabb".into()).unwrap(), vec![Word::from("aabb")]);
        assert!(pm.zero_sum_factorize(&Word::empty()).unwrap().is_empty());
        assert_eq!(pm.zero_sum_factorize(&"aab".into()), Err(WordError::NotZeroSum(v(1))));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(Word::from("abab").primitive_root(), Some(("ab".into(), 2)));
        assert_eq!(Word::from("ab").primitive_root(), Some(("ab".into(), 1)));
        assert_eq!(Word::from("aaa").primitive_root(), Some(("a".into(), 3)));
        assert_eq!(Word::from("aba").primitive_root(), Some(("aba".into(), 1)));
        assert_eq!(Word::empty().primitive_root(), None);
    }

    #[test]
    fn valuation_round_trip() {
        let alpha: Alphabet = "a=1,b=-2,c=1/2".parse().unwrap();
        assert_eq!(alpha.value(b'c').unwrap(), Value::new(1, 2));
        assert_eq!(alpha.to_string().parse::<Alphabet>().unwrap(), alpha);
        assert!(matches!("a=1,b=1".parse::<Alphabet>(), Err(WordError::DuplicateValue('a', 'b', _))));
        assert!(matches!("a=1,a=2".parse::<Alphabet>(), Err(WordError::DuplicateLetter('a'))));
        assert!("a:1".parse::<Alphabet>().is_err());
    }
}
