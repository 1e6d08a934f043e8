//! Exact counts of trivial words by closed-walk dynamic programming.
//!
//! With `N_t(g)` the number of length-`t` walks from the identity to `g`, a
//! closed walk of length `a + b` splits at time `a`, and reversing the tail
//! gives a walk from the identity to the same `g`; hence
//! `|W_{a+b}| = Σ_g N_a(g) N_b(g)`. Walks of length `t <= R` never leave the
//! ball of radius `R`, so one forward pass gives every `|W_ℓ|` with `ℓ <= 2R`.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cayley::{CayleyBall, OUTSIDE};
use crate::error::{Error, Result};
use crate::presentation::WordKind;

fn dot(a: &[BigUint], b: &[BigUint]) -> BigUint {
    a.par_iter().zip(b).map(|(x, y)| x * y).reduce(BigUint::zero, |x, y| x + y)
}

/// One step of the plain walk: `next[j] = Σ_{i ~ j} cur[i]`.
fn step_plain(ball: &CayleyBall, cur: &[BigUint]) -> Vec<BigUint> {
    (0..ball.len())
        .into_par_iter()
        .map(|j| {
            let mut acc = BigUint::zero();
            for &i in ball.row(j) {
                if i != OUTSIDE {
                    acc += &cur[i as usize];
                }
            }
            acc
        })
        .collect()
}

/// Plain counts `|W_ℓ|` for `ℓ = 0..=2R`.
fn plain_counts(ball: &CayleyBall) -> Vec<BigUint> {
    let r = ball.radius();
    let mut cur = vec![BigUint::zero(); ball.len()];
    cur[0] = BigUint::one();
    let mut out = vec![BigUint::one()];
    for _ in 0..r {
        let next = step_plain(ball, &cur);
        out.push(dot(&cur, &next));
        out.push(dot(&next, &next));
        cur = next;
    }
    out
}

/// Reduced walk state: `cur[g * 2m + x]` counts reduced words reaching `g` with last letter slot `x`.
fn step_reduced(ball: &CayleyBall, cur: &[BigUint]) -> Vec<BigUint> {
    let w = 2 * ball.generators();
    let mut next = vec![BigUint::zero(); cur.len()];
    next.par_chunks_mut(w).enumerate().for_each(|(j, slots)| {
        for (x, acc) in slots.iter_mut().enumerate() {
            // Arrive at j by letter x from i = j·x⁻¹, whose last letter is not x⁻¹.
            let i = ball.row(j)[x ^ 1];
            if i == OUTSIDE {
                continue;
            }
            let base = i as usize * w;
            for y in 0..w {
                if y != (x ^ 1) {
                    *acc += &cur[base + y];
                }
            }
        }
    });
    next
}

/// `Σ_g [(Σ_x a(g,x))(Σ_z b(g,z)) − Σ_x a(g,x) b(g,x)]`: pairs whose junction does not cancel.
fn reduced_join(w: usize, a: &[BigUint], b: &[BigUint]) -> BigUint {
    a.par_chunks(w)
        .zip(b.par_chunks(w))
        .map(|(ga, gb)| {
            let sa: BigUint = ga.iter().sum();
            let sb: BigUint = gb.iter().sum();
            let diag: BigUint = ga.iter().zip(gb).map(|(x, y)| x * y).sum();
            sa * sb - diag
        })
        .reduce(BigUint::zero, |x, y| x + y)
}

/// Reduced counts `|W'_ℓ|` for `ℓ = 0..=2R`.
fn reduced_counts(ball: &CayleyBall) -> Vec<BigUint> {
    let w = 2 * ball.generators();
    let r = ball.radius();
    let mut out = vec![BigUint::one()];
    if r == 0 {
        return out;
    }
    // Length-1 words.
    let mut cur = vec![BigUint::zero(); ball.len() * w];
    for x in 0..w {
        let j = ball.row(0)[x];
        if j != OUTSIDE {
            cur[j as usize * w + x] += 1u32;
        }
    }
    out.push(cur[..w].iter().sum());
    for t in 1..=r {
        // cur holds length t; next holds length t + 1 (needed only when t < r).
        out.push(reduced_join(w, &cur, &cur));
        if t < r {
            let next = step_reduced(ball, &cur);
            out.push(reduced_join(w, &cur, &next));
            cur = next;
        }
    }
    out
}

/// Exact `|W_ℓ|`, the number of length-`ℓ` words trivial in the group.
pub fn count_trivial_words(ball: &CayleyBall, len: usize) -> Result<BigUint> {
    require(ball, len)?;
    Ok(CountTable::from_ball(ball, WordKind::Plain).entries.remove(&len).unwrap_or_default())
}

/// Exact `|W'_ℓ|`, the number of trivial reduced words of length `ℓ`.
pub fn count_trivial_reduced_words(ball: &CayleyBall, len: usize) -> Result<BigUint> {
    require(ball, len)?;
    Ok(CountTable::from_ball(ball, WordKind::Reduced).entries.remove(&len).unwrap_or_default())
}

fn require(ball: &CayleyBall, len: usize) -> Result<()> {
    let needed = len.div_ceil(2);
    if ball.radius() < needed {
        return Err(Error::InsufficientRadius { radius: ball.radius(), length: len, needed });
    }
    Ok(())
}

/// Exact counts of trivial plain or reduced words, by length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub kind: WordKind,
    pub generators: usize,
    /// `2m` for plain counts, `2m − 1` for reduced ones.
    pub base: usize,
    pub entries: BTreeMap<usize, BigUint>,
    pub exact_up_to: usize,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    kind: WordKind,
    base: usize,
    length: usize,
    count: String,
}

impl CountTable {
    /// Every length up to `2R`.
    pub fn from_ball(ball: &CayleyBall, kind: WordKind) -> Self {
        let counts = match kind {
            WordKind::Plain => plain_counts(ball),
            WordKind::Reduced => reduced_counts(ball),
        };
        let m = ball.generators();
        CountTable {
            kind,
            generators: m,
            base: kind.base(m),
            exact_up_to: 2 * ball.radius(),
            entries: counts.into_iter().enumerate().collect(),
        }
    }

    pub fn new(kind: WordKind, generators: usize, entries: BTreeMap<usize, BigUint>) -> Self {
        let exact_up_to = entries.keys().next_back().copied().unwrap_or(0);
        CountTable { kind, generators, base: kind.base(generators), entries, exact_up_to }
    }

    pub fn get(&self, len: usize) -> Option<&BigUint> {
        self.entries.get(&len)
    }

    /// SHA-256 over the CSV rendering.
    pub fn hash(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        hex::encode(Sha256::digest(&buf))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for (&length, count) in &self.entries {
            w.serialize(CsvRow { kind: self.kind, base: self.base, length, count: count.to_string() })?;
        }
        w.flush().map_err(|e| Error::Serde(e.to_string()))?;
        Ok(())
    }

    /// Reads rows written by [`CountTable::write_csv`]; the table is taken to
    /// be exact up to its largest length.
    pub fn read_csv<R: Read>(input: R, generators: usize) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let mut kind = None;
        let mut entries = BTreeMap::new();
        for row in rd.deserialize() {
            let row: CsvRow = row?;
            if *kind.get_or_insert(row.kind) != row.kind {
                return Err(Error::Serde("mixed kinds in one count table".into()));
            }
            if row.base != row.kind.base(generators) {
                return Err(Error::Serde(format!("base {} does not match m = {generators}", row.base)));
            }
            let count = row.count.parse::<BigUint>().map_err(|e| Error::Serde(e.to_string()))?;
            entries.insert(row.length, count);
        }
        let kind = kind.ok_or_else(|| Error::Serde("empty count table".into()))?;
        Ok(CountTable::new(kind, generators, entries))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(f)
    }

    pub fn load(path: &Path, generators: usize) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        CountTable::read_csv(f, generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;
    use crate::pieces::sample_small_cancellation;
    use crate::presentation::Presentation;
    use num_rational::Ratio;
    use crate::word::Word;
    use crate::word_problem::{AbelianOracle, DehnOracle, FreeOracle, TrivialityOracle};

    /// Enumerates all `(2m)^ℓ` words and asks the oracle.
    fn brute(o: &dyn TrivialityOracle, len: usize, reduced: bool) -> u64 {
        let w = 2 * o.generators();
        let total = (w as u64).pow(len as u32);
        let mut count = 0;
        for mut code in 0..total {
            let mut signed = Vec::with_capacity(len);
            for _ in 0..len {
                let s = (code % w as u64) as usize;
                code /= w as u64;
                let x = crate::word::Letter::from_slot(s);
                signed.push(x.signed());
            }
            let word = Word::from_signed(&signed).unwrap();
            if reduced && !word.is_reduced() {
                continue;
            }
            if o.is_trivial(&word) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn free_examples() {
        let ball = build_ball(&FreeOracle::new(2), 5, 1 << 20).unwrap();
        assert_eq!(count_trivial_words(&ball, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(count_trivial_words(&ball, 4).unwrap(), BigUint::from(28u32));
        for l in 1..=10 {
            assert!(count_trivial_reduced_words(&ball, l).unwrap().is_zero());
        }
        assert!(matches!(count_trivial_words(&ball, 11), Err(Error::InsufficientRadius { needed: 6, .. })));
    }

    #[test]
    fn abelian_examples() {
        let ball = build_ball(&AbelianOracle::new(2), 4, 1 << 20).unwrap();
        assert_eq!(count_trivial_words(&ball, 4).unwrap(), BigUint::from(36u32));
        assert_eq!(count_trivial_reduced_words(&ball, 4).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn brute_force_agreement() {
        let free = FreeOracle::new(2);
        let ab = AbelianOracle::new(2);
        let mut rng = crate::rng::seeded(4);
        let p = sample_small_cancellation(3, &[7], Ratio::new(1, 6), 100_000, &mut rng).unwrap();
        let dehn = DehnOracle::new(&p).unwrap();
        for (o, max_len) in [(&free as &dyn TrivialityOracle, 8), (&ab, 8), (&dehn, 7)] {
            let ball = build_ball(o, 4, 1 << 20).unwrap();
            let plain = CountTable::from_ball(&ball, WordKind::Plain);
            let red = CountTable::from_ball(&ball, WordKind::Reduced);
            for l in 0..=max_len {
                assert_eq!(plain.get(l).unwrap(), &BigUint::from(brute(o, l, false)), "{} plain {l}", o.name());
                assert_eq!(red.get(l).unwrap(), &BigUint::from(brute(o, l, true)), "{} reduced {l}", o.name());
            }
        }
    }

    #[test]
    fn surface_has_no_short_relations() {
        let p: Presentation = "m=4\nabABcdCD\n".parse().unwrap();
        let ball = build_ball(&DehnOracle::new(&p).unwrap(), 4, 1 << 22).unwrap();
        let red = CountTable::from_ball(&ball, WordKind::Reduced);
        for l in 1..8 {
            assert!(red.get(l).unwrap().is_zero());
        }
        // Sixteen cyclic conjugates of the relator and its inverse.
        assert_eq!(red.get(8).unwrap(), &BigUint::from(16u32));
    }

    #[test]
    fn csv_round_trip() {
        let ball = build_ball(&AbelianOracle::new(2), 3, 1 << 20).unwrap();
        let t = CountTable::from_ball(&ball, WordKind::Plain);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("kind,base,length,count\nplain,4,0,1\n"));
        assert_eq!(CountTable::read_csv(&buf[..], 2).unwrap(), t);
        assert_eq!(t.hash().len(), 64);
    }
}
