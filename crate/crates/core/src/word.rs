//! Words over the alphabet `a_1^{±1}, …, a_m^{±1}`.
//!
//! A letter is a nonzero signed integer: `+i` is the generator `a_i` and
//! `-i` its inverse, so inversion is negation. Text form uses the i-th
//! lowercase ASCII letter for `a_i` and the uppercase one for its inverse.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest generator count representable in the text encoding.
pub const MAX_GENERATORS: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(i8);

impl Letter {
    /// Generator `a_index` (1-based) raised to `+1` or `-1`.
    pub fn new(index: usize, positive: bool) -> Result<Self> {
        if index == 0 || index > MAX_GENERATORS {
            return Err(Error::InvalidLetter(format!("generator index {index} out of range")));
        }
        let v = index as i8;
        Ok(Letter(if positive { v } else { -v }))
    }

    pub fn from_signed(v: i8) -> Result<Self> {
        if v == 0 || v.unsigned_abs() as usize > MAX_GENERATORS {
            return Err(Error::InvalidLetter(format!("signed letter {v} out of range")));
        }
        Ok(Letter(v))
    }

    /// Generator index in `1..=m`.
    #[inline]
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn signed(self) -> i8 {
        self.0
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the fixed letter order `a, A, b, B, …`; ranges over `0..2m`.
    #[inline]
    pub fn slot(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.0 < 0)
    }

    #[inline]
    pub fn from_slot(slot: usize) -> Self {
        let index = (slot / 2 + 1) as i8;
        Letter(if slot % 2 == 0 { index } else { -index })
    }

    /// All `2m` letters in slot order.
    pub fn alphabet(m: usize) -> impl Iterator<Item = Letter> {
        (0..2 * m).map(Letter::from_slot)
    }

    pub fn to_char(self) -> char {
        let c = b'a' + (self.index() as u8 - 1);
        if self.is_positive() {
            c as char
        } else {
            c.to_ascii_uppercase() as char
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Letter::new((c as u8 - b'a') as usize + 1, true)
        } else if c.is_ascii_uppercase() {
            Letter::new((c as u8 - b'A') as usize + 1, false)
        } else {
            Err(Error::InvalidLetter(format!("character {c:?} is not a letter")))
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite sequence of letters. No reduction is implied by the type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed integers, e.g. `[1, -2]` is `aB`.
    pub fn from_signed(values: &[i8]) -> Result<Self> {
        values.iter().map(|&v| Letter::from_signed(v)).collect::<Result<Vec<_>>>().map(Word)
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.index()).max().unwrap_or(0)
    }

    /// The reverse-inverse `w^{-1}`.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Cyclic rotation starting at `offset` (taken modulo the length).
    pub fn rotate(&self, offset: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = offset % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Free reduction by a single stack pass.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &x in &self.0 {
            if out.last() == Some(&x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.first(), self.last()) {
                (Some(a), Some(b)) if self.len() > 1 => a != b.inverse(),
                _ => true,
            }
    }

    /// Splits `w` as `conjugator · core · conjugator^{-1}` with a cyclically
    /// reduced core. Mutually inverse end letters are peeled from the raw word
    /// before any interior reduction, so `aA` yields core `[]`, conjugator `a`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core: Vec<Letter> = self.0.clone();
        let mut conjugator: Vec<Letter> = Vec::new();
        loop {
            let n = core.len();
            if n >= 2 && core[0] == core[n - 1].inverse() {
                conjugator.push(core[0]);
                core = core[1..n - 1].to_vec();
                continue;
            }
            let reduced = Word(core.clone()).reduce();
            if reduced.len() == core.len() {
                break;
            }
            core = reduced.0;
        }
        (Word(core), Word(conjugator).reduce())
    }

    /// Exponent sum of each generator `a_1..a_m`.
    pub fn exponent_sums(&self, m: usize) -> Vec<i64> {
        let mut sums = vec![0i64; m];
        for x in &self.0 {
            if x.index() <= m {
                sums[x.index() - 1] += if x.is_positive() { 1 } else { -1 };
            }
        }
        sums
    }

    /// Lexicographically least rotation; a canonical key for a cyclic word.
    pub fn least_rotation(&self) -> Word {
        (0..self.len().max(1)).map(|k| self.rotate(k)).min().unwrap_or_default()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the `a`/`A` encoding. Whitespace is ignored; `1` or `e` denotes
    /// the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "1" || t == "e" {
            return Ok(Word::empty());
        }
        t.chars().map(Letter::from_char).collect::<Result<Vec<_>>>().map(Word)
    }
}

/// Uniform word among all `(2m)^len` words of length `len`.
pub fn sample_plain_word<R: Rng + ?Sized>(m: usize, len: usize, rng: &mut R) -> Word {
    assert!((1..=MAX_GENERATORS).contains(&m), "generator count out of range");
    Word((0..len).map(|_| Letter::from_slot(rng.gen_range(0..2 * m))).collect())
}

/// Uniform word among the `2m(2m-1)^{len-1}` reduced words of length `len`.
pub fn sample_reduced_word<R: Rng + ?Sized>(m: usize, len: usize, rng: &mut R) -> Word {
    assert!((2..=MAX_GENERATORS).contains(&m), "reduced sampling needs 2 <= m <= 26");
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    if len == 0 {
        return Word(out);
    }
    out.push(Letter::from_slot(rng.gen_range(0..2 * m)));
    while out.len() < len {
        // Draw among the 2m - 1 slots that do not cancel the previous letter.
        let forbidden = out[out.len() - 1].inverse().slot();
        let mut s = rng.gen_range(0..2 * m - 1);
        if s >= forbidden {
            s += 1;
        }
        out.push(Letter::from_slot(s));
    }
    Word(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("aAb").reduce(), w("b"));
        assert_eq!(Word::empty().reduce(), Word::empty());
        assert_eq!(w("abBa").reduce(), w("aa"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("abA").cyclic_reduce(), (w("b"), w("a")));
        assert_eq!(w("ab").cyclic_reduce(), (w("ab"), Word::empty()));
        assert_eq!(w("aA").cyclic_reduce(), (Word::empty(), w("a")));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        assert_eq!(w("aBcC").to_string(), "aBcC");
        assert_eq!(w("1"), Word::empty());
        assert!("a1".parse::<Word>().is_err());
        assert_eq!(Letter::from_char('B').unwrap().signed(), -2);
    }

    #[test]
    fn slot_order_is_a_then_inverse() {
        let letters: Vec<String> = Letter::alphabet(2).map(|x| x.to_string()).collect();
        assert_eq!(letters, ["a", "A", "b", "B"]);
        for s in 0..8 {
            assert_eq!(Letter::from_slot(s).slot(), s);
        }
    }

    #[test]
    fn plain_sampling_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(sample_plain_word(2, 0, &mut rng).is_empty());
        let seen: HashSet<Word> = (0..20_000).map(|_| sample_plain_word(2, 3, &mut rng)).collect();
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn reduced_sampling_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let one: HashSet<Word> = (0..2_000).map(|_| sample_reduced_word(2, 1, &mut rng)).collect();
        assert_eq!(one.len(), 4);
        let three: HashSet<Word> = (0..20_000).map(|_| sample_reduced_word(2, 3, &mut rng)).collect();
        assert_eq!(three.len(), 36);
        assert!(three.iter().all(|x| x.is_reduced()));
        for _ in 0..100_000 {
            assert!(sample_reduced_word(2, 2, &mut rng).is_reduced());
        }
    }

    /// Chi-square over the 16 joint (position, letter) cells of 10^6 words of
    /// length 4; each cell is Binomial(10^6, 1/4) and the bound is 4 sigma.
    #[test]
    fn plain_sampling_letter_frequencies_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000usize;
        let mut counts = [[0usize; 4]; 4];
        for _ in 0..n {
            let word = sample_plain_word(2, 4, &mut rng);
            for (pos, x) in word.letters().iter().enumerate() {
                counts[pos][x.slot()] += 1;
            }
        }
        let expected = n as f64 / 4.0;
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        for row in &counts {
            for &c in row {
                assert!((c as f64 - expected).abs() < 4.0 * sigma, "count {c}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Word> {
            proptest::collection::vec((1i8..=3, any::<bool>()), 0..24)
                .prop_map(|v| Word::from_letters(v.into_iter().map(|(i, s)| Letter(if s { i } else { -i })).collect()))
        }

        proptest! {
            #[test]
            fn reduce_is_idempotent(x in word_strategy()) {
                let r = x.reduce();
                prop_assert_eq!(r.reduce(), r.clone());
                prop_assert!(r.is_reduced());
                prop_assert_eq!(r.len() % 2, x.len() % 2);
            }

            #[test]
            fn word_times_inverse_is_trivial(x in word_strategy()) {
                prop_assert!(x.concat(&x.inverse()).reduce().is_empty());
            }

            #[test]
            fn cyclic_reduce_recomposes(x in word_strategy()) {
                let (core, conj) = x.cyclic_reduce();
                prop_assert!(core.is_cyclically_reduced());
                let back = conj.concat(&core).concat(&conj.inverse()).reduce();
                prop_assert_eq!(back, x.reduce());
            }
        }
    }
}
