use std::collections::HashMap;
use std::fmt;

use aho_corasick::{AhoCorasick, MatchKind};
use num_rational::Ratio;

use super::{Lattice, TrivialityOracle};
use crate::error::{Error, Result};
use crate::pieces::check_small_cancellation;
use crate::presentation::{Occurrence, Presentation};
use crate::word::{Letter, Word};

/// One rewrite: a prefix of `occurrence` longer than half of it was replaced
/// by the inverse of the remaining suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DehnStep {
    pub len_before: usize,
    pub relator: usize,
    pub offset: usize,
    pub inverted: bool,
    pub len_after: usize,
}

impl fmt::Display for DehnStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}, {}", self.len_before, self.relator, self.offset, self.len_after)
    }
}

struct Rule {
    replacement: Vec<u8>,
    occurrence: Occurrence,
}

/// Dehn's algorithm over a presentation verified to satisfy C'(1/6).
pub struct DehnOracle {
    generators: usize,
    relator_count: usize,
    matcher: Option<AhoCorasick>,
    rules: Vec<Rule>,
    lattice: Lattice,
}

fn encode(w: &[Letter]) -> Vec<u8> {
    w.iter().map(|x| x.slot() as u8).collect()
}

/// Stack-based free reduction on slot bytes (`slot ^ 1` is the inverse).
fn free_reduce(bytes: &mut Vec<u8>) {
    let mut out: Vec<u8> = Vec::with_capacity(bytes.len());
    for &b in bytes.iter() {
        if out.last() == Some(&(b ^ 1)) {
            out.pop();
        } else {
            out.push(b);
        }
    }
    *bytes = out;
}

impl DehnOracle {
    /// Refuses presentations that fail C'(1/6): Dehn's algorithm is only
    /// guaranteed complete there.
    pub fn new(p: &Presentation) -> Result<Self> {
        let (ok, report) = check_small_cancellation(p, Ratio::new(1, 6));
        if !ok {
            return Err(Error::UnsupportedPresentation(format!(
                "C'(1/6) fails (max piece {} with shortest relator {})",
                report.max_piece_length,
                p.min_relator_len()
            )));
        }
        let mut best: HashMap<Vec<u8>, Rule> = HashMap::new();
        for entry in p.symmetrized_entries() {
            let letters = entry.word.letters();
            let n = letters.len();
            for t in n / 2 + 1..=n {
                let pattern = encode(&letters[..t]);
                let replacement = encode(Word::from_letters(letters[t..].to_vec()).inverse().letters());
                let rule = Rule { replacement, occurrence: entry.occurrence };
                match best.get(&pattern) {
                    Some(old) if old.replacement.len() <= rule.replacement.len() => {}
                    _ => {
                        best.insert(pattern, rule);
                    }
                }
            }
        }
        let mut entries: Vec<(Vec<u8>, Rule)> = best.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let (patterns, rules): (Vec<Vec<u8>>, Vec<Rule>) = entries.into_iter().unzip();
        let matcher = if patterns.is_empty() {
            None
        } else {
            Some(
                AhoCorasick::builder()
                    .match_kind(MatchKind::LeftmostLongest)
                    .build(&patterns)
                    .map_err(|e| Error::UnsupportedPresentation(e.to_string()))?,
            )
        };
        let m = p.generators();
        let lattice = Lattice::new(m, p.relators().iter().map(|r| r.exponent_sums(m)));
        Ok(DehnOracle { generators: m, relator_count: p.relators().len(), matcher, rules, lattice })
    }

    pub fn relator_count(&self) -> usize {
        self.relator_count
    }

    fn run(&self, w: &Word, mut trace: Option<&mut Vec<DehnStep>>) -> Word {
        let mut bytes = encode(w.letters());
        free_reduce(&mut bytes);
        if let Some(matcher) = &self.matcher {
            while let Some(mat) = matcher.find(&bytes[..]) {
                let rule = &self.rules[mat.pattern().as_usize()];
                let len_before = bytes.len();
                let mut next = Vec::with_capacity(len_before);
                next.extend_from_slice(&bytes[..mat.start()]);
                next.extend_from_slice(&rule.replacement);
                next.extend_from_slice(&bytes[mat.end()..]);
                free_reduce(&mut next);
                bytes = next;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(DehnStep {
                        len_before,
                        relator: rule.occurrence.relator,
                        offset: rule.occurrence.offset,
                        inverted: rule.occurrence.inverted,
                        len_after: bytes.len(),
                    });
                }
            }
        }
        Word::from_letters(bytes.into_iter().map(|b| Letter::from_slot(b as usize)).collect())
    }

    /// The Dehn-reduced form together with every rewrite applied.
    pub fn reduce_with_trace(&self, w: &Word) -> (Word, Vec<DehnStep>) {
        let mut trace = Vec::new();
        let out = self.run(w, Some(&mut trace));
        (out, trace)
    }

    /// Image in the abelianization, as a canonical coset representative.
    pub fn abelianization(&self, w: &Word) -> Vec<i64> {
        self.lattice.reduce(&w.exponent_sums(self.generators))
    }
}

impl TrivialityOracle for DehnOracle {
    fn name(&self) -> &str {
        "dehn"
    }

    fn domain(&self) -> &str {
        "presentations satisfying C'(1/6)"
    }

    fn generators(&self) -> usize {
        self.generators
    }

    fn is_trivial(&self, w: &Word) -> bool {
        self.run(w, None).is_empty()
    }

    fn invariant_key(&self, w: &Word) -> Vec<i64> {
        self.abelianization(w)
    }

    fn shorten(&self, w: &Word) -> Word {
        self.run(w, None)
    }
}

/// Builds a Dehn oracle for `p` and decides `w`.
pub fn dehn_is_trivial(p: &Presentation, w: &Word) -> Result<bool> {
    Ok(DehnOracle::new(p)?.is_trivial(w))
}
