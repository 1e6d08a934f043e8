//! Triviality oracles: exact fixtures for free and free abelian groups, and
//! Dehn's algorithm for presentations satisfying C'(1/6).

mod dehn;
mod lattice;

pub use dehn::{dehn_is_trivial, DehnOracle, DehnStep};
pub use lattice::Lattice;

use crate::word::Word;

/// Decides whether a word is trivial in a fixed group.
///
/// Besides `is_trivial`, an oracle may expose shortcuts that ball construction
/// uses to avoid pairwise comparisons. `canonical_form` must be injective on
/// group elements when it returns `Some`; `invariant_key` must agree on equal
/// elements; `shorten` must return a word for the same element with no more
/// letters.
pub trait TrivialityOracle: Send + Sync {
    fn name(&self) -> &str;
    /// Presentations on which the answers are sound.
    fn domain(&self) -> &str;
    fn generators(&self) -> usize;
    fn is_trivial(&self, w: &Word) -> bool;

    fn canonical_form(&self, _w: &Word) -> Option<Vec<i64>> {
        None
    }

    fn invariant_key(&self, _w: &Word) -> Vec<i64> {
        Vec::new()
    }

    fn shorten(&self, w: &Word) -> Word {
        w.reduce()
    }
}

/// `u = v` in the group iff `u·v⁻¹` is trivial.
pub fn are_equal(oracle: &dyn TrivialityOracle, u: &Word, v: &Word) -> bool {
    oracle.is_trivial(&u.concat(&v.inverse()))
}

/// The free group `F_m`: trivial iff freely trivial.
#[derive(Debug, Clone)]
pub struct FreeOracle {
    m: usize,
}

impl FreeOracle {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        FreeOracle { m }
    }
}

impl TrivialityOracle for FreeOracle {
    fn name(&self) -> &str {
        "free"
    }

    fn domain(&self) -> &str {
        "free group on m generators"
    }

    fn generators(&self) -> usize {
        self.m
    }

    fn is_trivial(&self, w: &Word) -> bool {
        w.reduce().is_empty()
    }

    fn canonical_form(&self, w: &Word) -> Option<Vec<i64>> {
        Some(w.reduce().letters().iter().map(|x| i64::from(x.signed())).collect())
    }
}

/// The free abelian group `Z^m`: trivial iff every exponent sum vanishes.
#[derive(Debug, Clone)]
pub struct AbelianOracle {
    m: usize,
}

impl AbelianOracle {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        AbelianOracle { m }
    }
}

impl TrivialityOracle for AbelianOracle {
    fn name(&self) -> &str {
        "abelian"
    }

    fn domain(&self) -> &str {
        "free abelian group Z^m"
    }

    fn generators(&self) -> usize {
        self.m
    }

    fn is_trivial(&self, w: &Word) -> bool {
        w.exponent_sums(self.m).iter().all(|&e| e == 0)
    }

    fn canonical_form(&self, w: &Word) -> Option<Vec<i64>> {
        Some(w.exponent_sums(self.m))
    }

    fn invariant_key(&self, w: &Word) -> Vec<i64> {
        w.exponent_sums(self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn fixtures() {
        let free = FreeOracle::new(2);
        let ab = AbelianOracle::new(2);
        assert!(free.is_trivial(&w("aA")));
        assert!(free.is_trivial(&Word::empty()));
        assert!(!free.is_trivial(&w("abAB")));
        assert!(ab.is_trivial(&w("abAB")));
        assert!(!are_equal(&free, &w("ab"), &w("ba")));
        assert!(are_equal(&ab, &w("ab"), &w("ba")));
        assert!(are_equal(&free, &w("ab"), &w("ab")));
    }
}
