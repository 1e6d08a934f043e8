//! Pieces of a symmetrized relator set and the C'(α) condition.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::presentation::{Occurrence, Presentation, SymmetrizedEntry};
use crate::error::{Error, Result};
use crate::word::{sample_reduced_word, Word};

/// Two symmetrized occurrences sharing a prefix of `length` letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWitness {
    pub first: Occurrence,
    pub second: Occurrence,
    pub length: usize,
}

impl PieceWitness {
    pub fn piece(&self, p: &Presentation) -> Word {
        let w = self.first.word(p);
        w.slice(0, self.length)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    pub max_piece_length: usize,
    pub witness: Option<PieceWitness>,
    /// Maximal piece length starting at each symmetrized entry, tallied.
    pub histogram: BTreeMap<usize, usize>,
    /// Per entry: `(occurrence, |entry|, longest piece starting there)`.
    #[serde(skip)]
    pub per_entry: Vec<(Occurrence, usize, usize)>,
}

fn lcp(a: &Word, b: &Word) -> usize {
    a.letters().iter().zip(b.letters()).take_while(|(x, y)| x == y).count()
}

/// Two entries may share a piece unless they are the same word from the same relator.
fn distinct(a: &SymmetrizedEntry, b: &SymmetrizedEntry) -> bool {
    a.occurrence.relator != b.occurrence.relator || a.word != b.word
}

/// Every piece is a common prefix of two distinct symmetrized entries, and the
/// longest common prefix of an entry with any other is attained at a sorted
/// neighbour. Equal words from the same relator were merged upstream, so
/// adjacent entries are always distinct.
pub fn max_piece(p: &Presentation) -> PieceReport {
    let mut entries = p.symmetrized_entries();
    entries.sort_by(|a, b| a.word.cmp(&b.word).then(a.occurrence.cmp(&b.occurrence)));
    let n = entries.len();
    let adj: Vec<usize> = (1..n)
        .map(|i| if distinct(&entries[i - 1], &entries[i]) { lcp(&entries[i - 1].word, &entries[i].word) } else { 0 })
        .collect();
    let mut best: Option<PieceWitness> = None;
    let mut histogram = BTreeMap::new();
    let mut per_entry = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i > 0 { adj[i - 1] } else { 0 };
        let right = if i + 1 < n { adj[i] } else { 0 };
        let longest = left.max(right);
        *histogram.entry(longest).or_insert(0) += 1;
        per_entry.push((entries[i].occurrence, entries[i].word.len(), longest));
        if i + 1 < n && adj[i] > 0 && best.map_or(true, |b| adj[i] > b.length) {
            best = Some(PieceWitness { first: entries[i].occurrence, second: entries[i + 1].occurrence, length: adj[i] });
        }
    }
    PieceReport { max_piece_length: best.map_or(0, |b| b.length), witness: best, histogram, per_entry }
}

/// `C'(α)`: every piece starting an entry `r` is strictly shorter than `α·|r|`.
pub fn check_small_cancellation(p: &Presentation, alpha: Ratio<u64>) -> (bool, PieceReport) {
    let report = max_piece(p);
    let ok = satisfies(&report, alpha);
    (ok, report)
}

pub fn satisfies(report: &PieceReport, alpha: Ratio<u64>) -> bool {
    let (num, den) = (*alpha.numer(), *alpha.denom());
    report.per_entry.iter().all(|&(_, len, piece)| (piece as u64) * den < num * len as u64)
}

/// Rejection sampler: uniform cyclically reduced relators of the given lengths,
/// redrawn until the presentation satisfies C'(α).
pub fn sample_small_cancellation<R: Rng + ?Sized>(
    m: usize,
    lengths: &[usize],
    alpha: Ratio<u64>,
    max_tries: usize,
    rng: &mut R,
) -> Result<Presentation> {
    for _ in 0..max_tries {
        let relators = lengths
            .iter()
            .map(|&n| loop {
                let w = sample_reduced_word(m, n, rng);
                if w.is_cyclically_reduced() {
                    break w;
                }
            })
            .collect();
        let p = Presentation::new(m, relators)?;
        if check_small_cancellation(&p, alpha).0 {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument(format!("no C'({alpha}) presentation with lengths {lengths:?} in {max_tries} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(m: usize, rels: &[&str]) -> Presentation {
        Presentation::new(m, rels.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    /// Quadratic scan over all pairs of tagged entries.
    fn brute_max_piece(p: &Presentation) -> usize {
        let e = p.symmetrized_entries();
        let mut best = 0;
        for i in 0..e.len() {
            for j in 0..e.len() {
                if i != j && distinct(&e[i], &e[j]) {
                    best = best.max(lcp(&e[i].word, &e[j].word));
                }
            }
        }
        best
    }

    #[test]
    fn examples() {
        let comm = p(2, &["abAB"]);
        assert_eq!(max_piece(&comm).max_piece_length, 1);
        assert_eq!(brute_max_piece(&comm), 1);
        let surface = p(4, &["abABcdCD"]);
        assert_eq!(max_piece(&surface).max_piece_length, 1);
        assert_eq!(brute_max_piece(&surface), 1);
        let twice = p(2, &["aabab", "aabab"]);
        assert_eq!(max_piece(&twice).max_piece_length, 5);
    }

    #[test]
    fn witness_is_a_real_piece() {
        let q = p(2, &["aabaB", "abbab"]);
        let r = max_piece(&q);
        let w = r.witness.unwrap();
        assert_ne!(w.first, w.second);
        let piece = w.piece(&q);
        assert_eq!(piece.len(), r.max_piece_length);
        assert_eq!(w.second.word(&q).slice(0, w.length), piece);
    }

    #[test]
    fn small_cancellation_examples() {
        let sixth = Ratio::new(1, 6);
        assert!(check_small_cancellation(&p(4, &["abABcdCD"]), sixth).0);
        assert!(!check_small_cancellation(&p(2, &["abAB"]), Ratio::new(1, 4)).0);
        assert!(check_small_cancellation(&Presentation::free(2).unwrap(), sixth).0);
        assert!(check_small_cancellation(&p(2, &["abAB"]), Ratio::new(1, 3)).0);
    }

    #[test]
    fn self_overlap_counts() {
        // a^3 b a^3 B: the block a^3 occurs twice in one relator.
        let q = p(2, &["aaabaaaB"]);
        assert_eq!(max_piece(&q).max_piece_length, brute_max_piece(&q));
        assert!(max_piece(&q).max_piece_length >= 3);
    }

    #[test]
    fn rejection_sampler() {
        let mut rng = crate::rng::seeded(1);
        let q = sample_small_cancellation(3, &[7, 8], Ratio::new(1, 6), 100_000, &mut rng).unwrap();
        assert!(check_small_cancellation(&q, Ratio::new(1, 6)).0);
        assert_eq!(q.relators().iter().map(Word::len).collect::<Vec<_>>(), [7, 8]);
        assert!(sample_small_cancellation(3, &[7], Ratio::new(1, 6), 0, &mut rng).is_err());
        // Proper powers have no pieces at all.
        assert_eq!(max_piece(&p(2, &["aaaa"])).max_piece_length, 0);
    }

    fn rel_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 1..9)
            .prop_map(|v| Word::from_signed(&v).unwrap().cyclic_reduce().0)
            .prop_filter("nonempty", |w| !w.is_empty())
    }

    proptest! {
        #[test]
        fn sorted_scan_matches_brute_force(rels in proptest::collection::vec(rel_strategy(), 1..4)) {
            let q = Presentation::new(2, rels).unwrap();
            prop_assert_eq!(max_piece(&q).max_piece_length, brute_max_piece(&q));
        }

        #[test]
        fn invariant_under_rotation_inversion_permutation(
            rels in proptest::collection::vec(rel_strategy(), 1..4), k in 0usize..8, inv in any::<bool>()
        ) {
            let base = max_piece(&Presentation::new(2, rels.clone()).unwrap()).max_piece_length;
            let mut moved = rels.clone();
            let r0 = moved[0].rotate(k % moved[0].len());
            moved[0] = if inv { r0.inverse() } else { r0 };
            moved.reverse();
            prop_assert_eq!(max_piece(&Presentation::new(2, moved).unwrap()).max_piece_length, base);
        }
    }
}
