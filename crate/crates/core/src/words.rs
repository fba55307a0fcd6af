//! Finite words over a `d`-letter alphabet, substitutions acting on them, and
//! the integer word vectors that count letters.
//!
//! Letters are small integers `0..d`. The textual form of a word is its digit
//! string (`"0102010"`), which limits text input to `d <= 10`; larger alphabets
//! go through JSON arrays.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default cap on materialized word length.
pub const DEFAULT_MAX_WORD_LEN: usize = 100_000_000;

/// Exact integer vector in `Z^d`. Word vectors, b-points, s-vectors and layer
/// points all live here; every set comparison in the crate keys on this type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePoint(SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn new(coords: impl IntoIterator<Item = i64>) -> Self {
        LatticePoint(coords.into_iter().collect())
    }

    pub fn zero(d: usize) -> Self {
        LatticePoint(smallvec::smallvec![0; d])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut p = Self::zero(d);
        p.0[i] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Sum of the entries. For a prefix word vector this is the prefix length.
    pub fn length(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<SmallVec<_>>>()
            .map(LatticePoint)
    }

    pub fn increment(&mut self, letter: usize) {
        self.0[letter] += 1;
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&c| c as f64).collect()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;

    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;

    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(a: [i64; N]) -> Self {
        LatticePoint::new(a)
    }
}

/// A finite word on `d` letters. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    d: usize,
}

impl Word {
    pub fn new(letters: Vec<u8>, d: usize) -> Result<Self> {
        if d == 0 || d > u8::MAX as usize + 1 {
            return Err(Error::InvalidWord(format!("unsupported alphabet size {d}")));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= d) {
            return Err(Error::LetterOutOfRange {
                letter: bad as usize,
                d,
            });
        }
        Ok(Word { letters, d })
    }

    pub fn empty(d: usize) -> Self {
        Word {
            letters: Vec::new(),
            d,
        }
    }

    /// Parses a digit string such as `"0102010"`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let letters = text
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::InvalidWord(format!("non-digit character {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, d)
    }

    /// Parses a digit string using the smallest alphabet that holds it (at least 3).
    pub fn parse_auto(text: &str) -> Result<Self> {
        let max = text
            .trim()
            .chars()
            .filter_map(|c| c.to_digit(10))
            .max()
            .unwrap_or(0) as usize;
        Word::parse(text, (max + 1).max(3))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> usize {
        self.letters[i] as usize
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.d != other.d {
            return Err(Error::AlphabetMismatch {
                left: self.d,
                right: other.d,
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word { letters, d: self.d })
    }

    /// The first `len` characters.
    pub fn prefix(&self, len: usize) -> Result<Word> {
        if len > self.len() {
            return Err(Error::PrefixOutOfRange {
                len,
                word_len: self.len(),
            });
        }
        Ok(Word {
            letters: self.letters[..len].to_vec(),
            d: self.d,
        })
    }

    /// Letter counts.
    pub fn word_vector(&self) -> LatticePoint {
        let mut v = LatticePoint::zero(self.d);
        for &l in &self.letters {
            v.increment(l as usize);
        }
        v
    }

    /// Word vectors of every prefix, lengths `0..=len()`, built incrementally.
    pub fn prefix_vectors(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut v = LatticePoint::zero(self.d);
        out.push(v.clone());
        for &l in &self.letters {
            v.increment(l as usize);
            out.push(v.clone());
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d <= 10 {
            for &l in &self.letters {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.letters)
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Concatenates any number of words on the same alphabet.
pub fn concat_all<'a>(words: impl IntoIterator<Item = &'a Word>, d: usize) -> Result<Word> {
    let mut out = Word::empty(d);
    for w in words {
        if w.d != d {
            return Err(Error::AlphabetMismatch { left: d, right: w.d });
        }
        out.letters.extend_from_slice(&w.letters);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SubstitutionJson {
    d: usize,
    rules: Vec<Vec<u8>>,
}

/// A substitution on `d` letters: rule `i` is the image of the word `[i]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    rules: Vec<Word>,
}

impl Substitution {
    pub fn new(rules: Vec<Word>) -> Result<Self> {
        let d = rules.len();
        if d == 0 {
            return Err(Error::InvalidSubstitution("no rules".into()));
        }
        for (i, r) in rules.iter().enumerate() {
            if r.d != d {
                return Err(Error::InvalidSubstitution(format!(
                    "rule {i} is on {} letters, expected {d}",
                    r.d
                )));
            }
            if r.is_empty() {
                return Err(Error::InvalidSubstitution(format!("rule {i} is empty")));
            }
        }
        Ok(Substitution { rules })
    }

    /// Builds from digit-string rules, e.g. `["01", "02", "0"]`.
    pub fn from_digits(rules: &[&str]) -> Result<Self> {
        let d = rules.len();
        let rules = rules
            .iter()
            .map(|r| Word::parse(r, d))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(rules)
    }

    /// `{"d": 3, "rules": [[0,1],[0,2],[0]]}`
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SubstitutionJson = serde_json::from_str(text)?;
        if raw.rules.len() != raw.d {
            return Err(Error::InvalidSubstitution(format!(
                "expected {} rules, found {}",
                raw.d,
                raw.rules.len()
            )));
        }
        let rules = raw
            .rules
            .into_iter()
            .map(|r| Word::new(r, raw.d))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(rules)
    }

    pub fn to_json(&self) -> String {
        let raw = SubstitutionJson {
            d: self.d(),
            rules: self.rules.iter().map(|r| r.letters.clone()).collect(),
        };
        serde_json::to_string(&raw).expect("substitution serializes")
    }

    /// The Rauzy substitution `0 -> 01, 1 -> 02, 2 -> 0`.
    pub fn rauzy() -> Self {
        Self::preset(0).expect("preset 0 exists")
    }

    /// The four built-in three-letter Pisot substitutions, indexed 0..=3.
    pub fn preset(index: usize) -> Option<Self> {
        let rules: &[&str] = match index {
            0 => &["01", "02", "0"],
            1 => &["12", "2", "0"],
            2 => &["0102", "2", "0"],
            3 => &["01", "2", "0"],
            _ => return None,
        };
        Some(Self::from_digits(rules).expect("preset rules are valid"))
    }

    /// Accepts `s0`..`s3`, `sigma0`..`sigma3` and `σ0`..`σ3`.
    pub fn preset_by_name(name: &str) -> Option<Self> {
        let idx = name
            .trim()
            .trim_start_matches("sigma")
            .trim_start_matches('σ')
            .trim_start_matches('s');
        idx.parse::<usize>().ok().and_then(Self::preset)
    }

    /// The identity substitution on `d` letters.
    pub fn identity(d: usize) -> Self {
        let rules = (0..d)
            .map(|i| Word::new(vec![i as u8], d).expect("letter in range"))
            .collect();
        Substitution { rules }
    }

    pub fn d(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn rule(&self, letter: usize) -> &Word {
        &self.rules[letter]
    }

    /// Applies the substitution character by character.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.d != self.d() {
            return Err(Error::AlphabetMismatch {
                left: self.d(),
                right: w.d,
            });
        }
        let len = w
            .letters
            .iter()
            .map(|&l| self.rules[l as usize].len())
            .sum();
        let mut letters = Vec::with_capacity(len);
        for &l in &w.letters {
            letters.extend_from_slice(&self.rules[l as usize].letters);
        }
        Ok(Word { letters, d: w.d })
    }

    /// `[w_n]` with `[w_0] = [0]`, capped at [`DEFAULT_MAX_WORD_LEN`].
    pub fn iterate(&self, n: usize) -> Result<Word> {
        self.iterate_capped(n, DEFAULT_MAX_WORD_LEN)
    }

    /// `[w_n]`, failing before materializing any word longer than `cap`.
    pub fn iterate_capped(&self, n: usize, cap: usize) -> Result<Word> {
        let d = self.d();
        let mut w = Word::new(vec![0], d)?;
        for _ in 0..n {
            let next_len: u128 = w
                .word_vector()
                .coords()
                .iter()
                .zip(&self.rules)
                .map(|(&c, r)| c as u128 * r.len() as u128)
                .sum();
            if next_len > cap as u128 {
                return Err(Error::ResourceCap {
                    what: "word length",
                    requested: next_len,
                    limit: cap as u128,
                });
            }
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    /// Word lengths `L(w_0), ..., L(w_n)` without materializing the words.
    pub fn iterate_lengths(&self, n: usize) -> Vec<u128> {
        let d = self.d();
        let mut v: Vec<u128> = (0..d).map(|i| u128::from(i == 0)).collect();
        let mut out = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            out.push(v.iter().sum());
            let mut next = vec![0u128; d];
            for (letter, &count) in v.iter().enumerate() {
                for &l in &self.rules[letter].letters {
                    next[l as usize] = next[l as usize].saturating_add(count);
                }
            }
            v = next;
        }
        out
    }
}

/// The tribonacci word `[a_n]`.
pub fn tribonacci(n: usize) -> Result<Word> {
    Substitution::rauzy().iterate(n)
}
