//! Finite balls in Cayley graphs, built breadth-first over a triviality oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use crate::word_problem::TrivialityOracle;

/// Adjacency entry for a move leaving the ball.
pub const OUTSIDE: u32 = u32::MAX;

/// Ball of radius `radius` around the identity.
///
/// Element 0 is the identity. Every element's normal form is the shortlex-least
/// geodesic under the letter order `a < A < b < B < …`; it is stored as a
/// parent pointer plus a last letter. `adjacency[i * 2m + slot]` is the element
/// reached from `i` by the letter with that slot, or [`OUTSIDE`].
#[derive(Debug, Clone)]
pub struct CayleyBall {
    m: usize,
    radius: usize,
    parent: Vec<u32>,
    last: Vec<u8>,
    depth: Vec<u16>,
    adjacency: Vec<u32>,
    /// `layer_start[k]..layer_start[k + 1]` is the sphere of radius `k`.
    layer_start: Vec<usize>,
}

fn zigzag_bytes(key: &[i64]) -> Box<[u8]> {
    let mut out = Vec::with_capacity(key.len());
    for &v in key {
        let mut z = ((v << 1) ^ (v >> 63)) as u64;
        loop {
            let b = (z & 0x7f) as u8;
            z >>= 7;
            if z == 0 {
                out.push(b);
                break;
            }
            out.push(b | 0x80);
        }
    }
    out.into_boxed_slice()
}

fn word_bytes(w: &Word) -> Box<[u8]> {
    w.letters().iter().map(|x| x.slot() as u8).collect()
}

struct Builder<'a> {
    oracle: &'a dyn TrivialityOracle,
    ball: CayleyBall,
    canonical: HashMap<Box<[u8]>, u32>,
    aliases: HashMap<Box<[u8]>, u32>,
    buckets: HashMap<Box<[u8]>, Vec<u32>>,
    /// Inverse word of every element, kept only without exact canonical forms.
    inverses: Vec<Word>,
    exact_canonical: bool,
}

/// Bucket segments shorter than this are scanned on the calling thread.
const PARALLEL_SCAN: usize = 1024;

impl Builder<'_> {
    fn register(&mut self, idx: u32, w: &Word) {
        if let Some(key) = self.oracle.canonical_form(w) {
            self.canonical.insert(zigzag_bytes(&key), idx);
        }
        if !self.exact_canonical {
            self.aliases.insert(word_bytes(w), idx);
            debug_assert_eq!(self.inverses.len(), idx as usize);
            self.inverses.push(w.inverse());
            let key = zigzag_bytes(&self.oracle.invariant_key(w));
            self.buckets.entry(key).or_default().push(idx);
        }
    }

    /// Element equal to `u` among layers `>= min_layer`, given that layers
    /// `< k = |u|` are complete.
    fn find(&mut self, u: &Word, min_layer: usize) -> Option<u32> {
        if self.exact_canonical {
            let key = self.oracle.canonical_form(u).expect("oracle advertised canonical forms");
            return self.canonical.get(&zigzag_bytes(&key)).copied();
        }
        let s = self.oracle.shorten(u);
        if s.len() < u.len() {
            if let Some(i) = self.ball.evaluate(&s) {
                return Some(i as u32);
            }
        }
        if let Some(&i) = self.aliases.get(&word_bytes(&s)) {
            return Some(i);
        }
        let key = zigzag_bytes(&self.oracle.invariant_key(u));
        let bucket = self.buckets.get(&key)?;
        let lo = self.ball.layer_start.get(min_layer).copied().unwrap_or(usize::MAX) as u32;
        let (oracle, inverses) = (self.oracle, &self.inverses);
        let start = bucket.partition_point(|&j| j < lo);
        let equal = |&j: &u32| oracle.is_trivial(&u.concat(&inverses[j as usize]));
        let segment = &bucket[start..];
        let hit = if segment.len() < PARALLEL_SCAN {
            segment.iter().position(equal)
        } else {
            segment.par_iter().position_first(equal)
        };
        let found = hit.map(|p| bucket[start + p]);
        if let Some(j) = found {
            self.aliases.insert(word_bytes(&s), j);
        }
        found
    }

    fn link(&mut self, from: usize, slot: usize, to: u32) {
        let w = 2 * self.ball.m;
        self.ball.adjacency[from * w + slot] = to;
        let back = to as usize * w + (slot ^ 1);
        debug_assert!(self.ball.adjacency[back] == OUTSIDE || self.ball.adjacency[back] == from as u32);
        self.ball.adjacency[back] = from as u32;
    }
}

/// Breadth-first ball of radius `radius`, refusing to hold more than `budget` elements.
pub fn build_ball(oracle: &dyn TrivialityOracle, radius: usize, budget: usize) -> Result<CayleyBall> {
    let m = oracle.generators();
    let w = 2 * m;
    let identity_key = oracle.canonical_form(&Word::empty());
    let mut b = Builder {
        oracle,
        ball: CayleyBall {
            m,
            radius,
            parent: vec![0],
            last: vec![0],
            depth: vec![0],
            adjacency: vec![OUTSIDE; w],
            layer_start: vec![0, 1],
        },
        canonical: HashMap::new(),
        aliases: HashMap::new(),
        buckets: HashMap::new(),
        inverses: Vec::new(),
        exact_canonical: identity_key.is_some(),
    };
    b.register(0, &Word::empty());
    if budget < 1 {
        return Err(Error::BallBudget { budget, completed_radius: 0 });
    }
    for k in 1..=radius + 1 {
        let (lo, hi) = (b.ball.layer_start[k - 1], b.ball.layer_start[k]);
        let grow = k <= radius;
        for e in lo..hi {
            let base = b.ball.word(e);
            for slot in 0..w {
                if b.ball.adjacency[e * w + slot] != OUTSIDE {
                    continue;
                }
                let mut u = base.clone();
                u.push(Letter::from_slot(slot));
                match b.find(&u, k.saturating_sub(2)) {
                    Some(j) => b.link(e, slot, j),
                    None if grow => {
                        let idx = b.ball.parent.len();
                        if idx >= budget {
                            return Err(Error::BallBudget { budget, completed_radius: k - 1 });
                        }
                        b.ball.parent.push(e as u32);
                        b.ball.last.push(slot as u8);
                        b.ball.depth.push(k as u16);
                        b.ball.adjacency.extend(std::iter::repeat(OUTSIDE).take(w));
                        b.link(e, slot, idx as u32);
                        b.register(idx as u32, &u);
                    }
                    None => {}
                }
            }
        }
        if grow {
            let n = b.ball.parent.len();
            b.ball.layer_start.push(n);
        }
    }
    Ok(b.ball)
}

impl CayleyBall {
    #[inline]
    pub fn generators(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Distance of element `i` from the identity.
    #[inline]
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i] as usize
    }

    /// Number of elements at each distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.layer_start.windows(2).map(|p| p[1] - p[0]).collect()
    }

    #[inline]
    pub fn neighbor(&self, i: usize, x: Letter) -> Option<usize> {
        let j = self.adjacency[i * 2 * self.m + x.slot()];
        (j != OUTSIDE).then_some(j as usize)
    }

    /// Raw adjacency row of element `i`, indexed by letter slot.
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        let w = 2 * self.m;
        &self.adjacency[i * w..(i + 1) * w]
    }

    /// Normal form of element `i`.
    pub fn word(&self, mut i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.depth(i));
        while i != 0 {
            letters.push(Letter::from_slot(self.last[i] as usize));
            i = self.parent[i] as usize;
        }
        letters.reverse();
        Word::from_letters(letters)
    }

    /// Follows `w` from the identity; `None` once a move leaves the ball.
    pub fn evaluate(&self, w: &Word) -> Option<usize> {
        let mut i = 0usize;
        for x in w.letters() {
            i = self.neighbor(i, *x)?;
        }
        Some(i)
    }

    /// Triviality read off the ball. A trivial word of length at most `2R`
    /// never leaves the ball of radius `R`, so leaving it proves nontriviality.
    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        if w.len() > 2 * self.radius {
            return Err(Error::InsufficientRadius { radius: self.radius, length: w.len(), needed: w.len().div_ceil(2) });
        }
        Ok(self.evaluate(w) == Some(0))
    }

    /// Text dump: index, normal form, then the `2m` neighbours (`-` for outside).
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for i in 0..self.len() {
            let nf = self.word(i);
            s.push_str(&format!("{i}\t{}", if nf.is_empty() { "1".to_string() } else { nf.to_string() }));
            for &j in self.row(i) {
                if j == OUTSIDE {
                    s.push_str("\t-");
                } else {
                    s.push_str(&format!("\t{j}"));
                }
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;
    use crate::word_problem::{AbelianOracle, DehnOracle, FreeOracle};

    fn check_involutive(ball: &CayleyBall) {
        for i in 0..ball.len() {
            for x in Letter::alphabet(ball.generators()) {
                if let Some(j) = ball.neighbor(i, x) {
                    assert_eq!(ball.neighbor(j, x.inverse()), Some(i));
                    assert!(ball.depth(j).abs_diff(ball.depth(i)) <= 1);
                }
            }
        }
    }

    #[test]
    fn sizes() {
        let free = build_ball(&FreeOracle::new(2), 2, 1000).unwrap();
        assert_eq!(free.len(), 17);
        assert_eq!(free.sphere_sizes(), vec![1, 4, 12]);
        let ab = build_ball(&AbelianOracle::new(2), 2, 1000).unwrap();
        assert_eq!(ab.len(), 13);
        check_involutive(&free);
        check_involutive(&ab);
        let zero = build_ball(&FreeOracle::new(2), 0, 10).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero.row(0).iter().all(|&j| j == OUTSIDE));
    }

    #[test]
    fn abelian_final_layer_is_closed() {
        let ab = build_ball(&AbelianOracle::new(2), 3, 1000).unwrap();
        // (1,2) and (2,1) are both at distance 3, but not adjacent; (3,0) has
        // an outside move in direction a.
        let a3 = ab.evaluate(&"aaa".parse().unwrap()).unwrap();
        assert_eq!(ab.neighbor(a3, Letter::from_char('a').unwrap()), None);
        check_involutive(&ab);
        for r in 0..=4 {
            let sizes = build_ball(&AbelianOracle::new(2), r, 1000).unwrap().sphere_sizes();
            let expect: Vec<usize> = (0..=r).map(|k| if k == 0 { 1 } else { 4 * k }).collect();
            assert_eq!(sizes, expect);
        }
    }

    #[test]
    fn normal_forms_are_shortlex() {
        let ab = build_ball(&AbelianOracle::new(2), 2, 1000).unwrap();
        let forms: Vec<String> = (0..ab.len()).map(|i| ab.word(i).to_string()).collect();
        assert!(forms.contains(&"ab".to_string()));
        assert!(!forms.contains(&"ba".to_string()));
    }

    #[test]
    fn budget_reports_completed_radius() {
        match build_ball(&FreeOracle::new(2), 3, 20) {
            Err(Error::BallBudget { completed_radius, .. }) => assert_eq!(completed_radius, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dehn_ball_matches_group() {
        // Genus-two surface group: spheres grow like the free group until the relator length.
        let p: Presentation = "m=4\nabABcdCD\n".parse().unwrap();
        let o = DehnOracle::new(&p).unwrap();
        let ball = build_ball(&o, 4, 1_000_000).unwrap();
        let free = build_ball(&FreeOracle::new(4), 4, 1_000_000).unwrap();
        assert_eq!(ball.sphere_sizes()[..4], free.sphere_sizes()[..4]);
        // The two halves of the relator meet at distance 4.
        assert_eq!(ball.sphere_sizes()[4], free.sphere_sizes()[4] - 8);
        check_involutive(&ball);
        assert!(ball.is_trivial(&"abABcdCD".parse().unwrap()).unwrap());
        assert!(!ball.is_trivial(&"abAB".parse().unwrap()).unwrap());
        assert!(ball.is_trivial(&"abABcdCDa".parse().unwrap()).is_err());
    }
}
