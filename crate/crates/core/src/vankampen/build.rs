//! Diagram surgery: wedging a face or a path at the basepoint, folding
//! adjacent inverse boundary edges, moving the basepoint.

use super::{Diagram, FaceTag, HalfEdge};
use crate::presentation::{Occurrence, Presentation};
use crate::word::{Letter, Word};

/// Folding two boundary edges with a common far endpoint would pinch off a
/// sphere; such folds are refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereFold;

struct Work {
    he: Vec<HalfEdge>,
    alive: Vec<bool>,
    tags: Vec<FaceTag>,
    base: Option<u32>,
}

impl Work {
    fn from(d: &Diagram) -> Self {
        Work { he: d.half_edges.clone(), alive: vec![true; d.half_edges.len()], tags: d.face_tags.clone(), base: d.outer }
    }

    fn mate(&self, h: u32) -> u32 {
        self.he[h as usize].mate
    }

    fn next(&self, h: u32) -> u32 {
        self.he[h as usize].next
    }

    fn set_next(&mut self, h: u32, x: u32) {
        self.he[h as usize].next = x;
    }

    fn face_next(&self, h: u32) -> u32 {
        self.next(self.mate(h))
    }

    fn face_prev(&self, h: u32) -> u32 {
        let mut x = h;
        loop {
            let y = self.face_next(x);
            if y == h {
                return x;
            }
            x = y;
        }
    }

    fn rotation_prev(&self, h: u32) -> u32 {
        let mut x = h;
        while self.next(x) != h {
            x = self.next(x);
        }
        x
    }

    fn same_vertex(&self, a: u32, b: u32) -> bool {
        let mut x = a;
        loop {
            if x == b {
                return true;
            }
            x = self.next(x);
            if x == a {
                return false;
            }
        }
    }

    fn new_edge(&mut self, label: Letter) -> (u32, u32) {
        let h = self.he.len() as u32;
        self.he.push(HalfEdge { mate: h + 1, next: h, label });
        self.he.push(HalfEdge { mate: h, next: h + 1, label: label.inverse() });
        self.alive.extend([true, true]);
        (h, h + 1)
    }

    /// Inserts `first` then `last` into the rotation at the basepoint, in the
    /// outer corner just before `base`.
    fn insert_at_corner(&mut self, first: u32, last: u32) {
        match self.base {
            None => self.set_next(last, first),
            Some(b) => {
                let p = self.mate(self.face_prev(b));
                self.set_next(p, first);
                self.set_next(last, b);
            }
        }
        if first != last {
            self.set_next(first, last);
        }
    }

    /// New boundary from the far endpoint: `x⁻¹ · W · x`.
    fn spike(&mut self, x: Letter) {
        let (h, m) = self.new_edge(x);
        self.insert_at_corner(h, h);
        self.set_next(m, m);
        self.base = Some(m);
    }

    /// Wedges a polygon reading `s` at the basepoint; the boundary becomes
    /// `s · W`. The inner face reads `s⁻¹`, tagged by `inner`.
    fn wedge_face(&mut self, s: &Word, inner: Occurrence) {
        let n = s.len();
        let edges: Vec<(u32, u32)> = s.letters().iter().map(|&x| self.new_edge(x)).collect();
        for i in 1..n {
            let (a, _) = edges[i];
            let (_, back) = edges[i - 1];
            self.set_next(back, a);
            self.set_next(a, back);
        }
        self.insert_at_corner(edges[0].0, edges[n - 1].1);
        self.tags.push(FaceTag { start: edges[n - 1].1, occurrence: inner });
        self.base = Some(edges[0].0);
    }

    /// Identifies boundary edges `h1` and its outer successor `h2`, whose
    /// labels are mutually inverse. Returns the half-edge standing in for
    /// `mate(h2)` if it survives.
    fn zip(&mut self, h1: u32, h2: u32) -> Result<Option<(u32, u32)>, SphereFold> {
        let m1 = self.mate(h1);
        let h0 = self.face_prev(h1);
        let pu = self.mate(h0);
        if h2 == m1 {
            // Pendant edge: delete it.
            if h0 == h2 {
                self.alive[h1 as usize] = false;
                self.alive[h2 as usize] = false;
                return Ok(None);
            }
            let after = self.next(h1);
            self.set_next(pu, after);
            self.alive[h1 as usize] = false;
            self.alive[h2 as usize] = false;
            return Ok(None);
        }
        let m2 = self.mate(h2);
        if self.same_vertex(h1, m2) {
            return Err(SphereFold);
        }
        let h3 = self.next(m2);
        if h3 != m2 {
            let pw = self.rotation_prev(m2);
            self.set_next(pu, h3);
            self.set_next(pw, h1);
        }
        let x = self.next(h2);
        self.set_next(m1, x);
        for t in &mut self.tags {
            if t.start == m2 {
                t.start = h1;
            }
        }
        self.alive[h2 as usize] = false;
        self.alive[m2 as usize] = false;
        Ok(Some((m2, h1)))
    }

    /// Stack reduction of the boundary word read from the basepoint, each
    /// cancellation realized by a zip.
    fn fold(&mut self) -> Result<(), SphereFold> {
        let Some(b) = self.base else { return Ok(()) };
        let mut boundary = vec![b];
        let mut x = self.face_next(b);
        while x != b {
            boundary.push(x);
            x = self.face_next(x);
        }
        let mut repl: Vec<u32> = (0..self.he.len() as u32).collect();
        let resolve = |repl: &Vec<u32>, mut h: u32| {
            while repl[h as usize] != h {
                h = repl[h as usize];
            }
            h
        };
        let mut stack: Vec<u32> = Vec::new();
        for e in boundary {
            let e = resolve(&repl, e);
            match stack.last().map(|&t| resolve(&repl, t)) {
                Some(t) if self.he[t as usize].label == self.he[e as usize].label.inverse() => {
                    debug_assert_eq!(self.face_next(t), e);
                    stack.pop();
                    if let Some((from, to)) = self.zip(t, e)? {
                        repl[from as usize] = to;
                    }
                }
                _ => stack.push(e),
            }
        }
        self.base = stack.first().map(|&h| resolve(&repl, h));
        Ok(())
    }

    fn finish(self) -> Diagram {
        let mut index = vec![u32::MAX; self.he.len()];
        let mut k = 0u32;
        for (h, &a) in self.alive.iter().enumerate() {
            if a {
                index[h] = k;
                k += 1;
            }
        }
        let half_edges = self
            .he
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(e, _)| HalfEdge { mate: index[e.mate as usize], next: index[e.next as usize], label: e.label })
            .collect();
        let face_tags = self.tags.iter().map(|t| FaceTag { start: index[t.start as usize], occurrence: t.occurrence }).collect();
        Diagram { half_edges, face_tags, outer: self.base.map(|h| index[h as usize]) }
    }
}

/// Occurrence of `s⁻¹` given the occurrence of `s`.
pub fn inverse_occurrence(occ: Occurrence, len: usize) -> Occurrence {
    Occurrence { relator: occ.relator, offset: (len - occ.offset % len) % len, inverted: !occ.inverted }
}

impl Diagram {
    /// One face on relator `relator`, boundary reading the relator.
    pub fn single_face(p: &Presentation, relator: usize) -> Diagram {
        let occ = Occurrence { relator, offset: 0, inverted: false };
        Diagram::empty().with_face(&occ.word(p), occ)
    }

    /// Attaches a path at the basepoint and moves the basepoint to its far
    /// end: the boundary `W` becomes `g · W · g⁻¹`.
    pub fn with_path(&self, g: &Word) -> Diagram {
        let mut w = Work::from(self);
        for &x in g.letters().iter().rev() {
            w.spike(x.inverse());
        }
        w.finish()
    }

    /// Wedges a face reading `s` (the word of `occ`) at the basepoint: the
    /// boundary `W` becomes `s · W`.
    pub fn with_face(&self, s: &Word, occ: Occurrence) -> Diagram {
        assert!(!s.is_empty(), "faces need a nonempty boundary");
        let mut w = Work::from(self);
        w.wedge_face(s, inverse_occurrence(occ, s.len()));
        w.finish()
    }

    /// Zips adjacent inverse boundary edges until the boundary word read from
    /// the basepoint is freely reduced.
    pub fn folded(&self) -> Result<Diagram, SphereFold> {
        let mut w = Work::from(self);
        w.fold()?;
        Ok(w.finish())
    }

    /// Moves the basepoint `k` steps along the boundary.
    pub fn rebased(&self, k: usize) -> Diagram {
        let mut d = self.clone();
        if let Some(mut h) = d.outer {
            for _ in 0..k {
                h = d.face_next(h);
            }
            d.outer = Some(h);
        }
        d
    }
}
