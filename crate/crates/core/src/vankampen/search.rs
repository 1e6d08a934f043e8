//! Exhaustive search for diagrams with few faces.
//!
//! A reduced diagram with nonempty cyclically reduced boundary has a face
//! sharing an arc with the boundary. Removing it leaves a diagram with one
//! face fewer whose boundary is `s[t..]⁻¹ · w[t..]` for some rotation `w` of
//! the boundary and some symmetrized relator `s` with `s[..t] = w[..t]`.
//! Taking `t` maximal loses nothing, since shorter arcs freely reduce to the
//! same word. The search enumerates these removals; the diagram is rebuilt
//! from the removal sequence by wedging faces and folding.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::Diagram;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, SymmetrizedEntry};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A verified diagram whose boundary reads the input word.
    Found(Diagram),
    /// No diagram with at most the given number of faces exists.
    NotFound,
    /// The node budget ran out, or a fold would have closed a sphere.
    Indeterminate,
}

impl SearchOutcome {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            SearchOutcome::Found(_) => Some(true),
            SearchOutcome::NotFound => Some(false),
            SearchOutcome::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Step {
    rotation: usize,
    entry: usize,
    matched: usize,
}

struct Exhausted;

struct Ctx<'a> {
    entries: &'a [SymmetrizedEntry],
    by_first: Vec<Vec<usize>>,
    nodes: AtomicU64,
    budget: u64,
}

impl Ctx<'_> {
    fn children(&self, w: &Word) -> Vec<(Step, Word)> {
        let n = w.len();
        let mut out = Vec::new();
        for o in 0..n {
            let rot = w.rotate(o);
            for &e in &self.by_first[rot.letters()[0].slot()] {
                let s = &self.entries[e].word;
                let t = s.letters().iter().zip(rot.letters()).take_while(|(a, b)| a == b).count();
                let rest = s.slice(t, s.len()).inverse().concat(&rot.slice(t, n));
                let (core, _) = rest.reduce().cyclic_reduce();
                out.push((Step { rotation: o, entry: e, matched: t }, core));
            }
        }
        out
    }

    fn find(&self, w: &Word, faces: usize, failed: &mut HashSet<(Word, usize)>) -> std::result::Result<Option<Vec<Step>>, Exhausted> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Exhausted);
        }
        if w.is_empty() {
            return Ok(Some(Vec::new()));
        }
        if faces == 0 {
            return Ok(None);
        }
        let key = (w.least_rotation(), faces);
        if failed.contains(&key) {
            return Ok(None);
        }
        for (step, child) in self.children(w) {
            if let Some(mut rest) = self.find(&child, faces - 1, failed)? {
                rest.insert(0, step);
                return Ok(Some(rest));
            }
        }
        failed.insert(key);
        Ok(None)
    }
}

/// Searches for a diagram with at most `max_faces` faces whose boundary reads
/// the reduced word `w`, visiting at most `budget` search nodes. Top-level
/// branches run in parallel; the first success in branch order is returned.
pub fn search_diagram(p: &Presentation, w: &Word, max_faces: usize, budget: u64) -> Result<SearchOutcome> {
    if !w.is_reduced() {
        return Err(Error::InvalidWord(format!("{w} is not freely reduced")));
    }
    if w.max_generator() > p.generators() {
        return Err(Error::InvalidWord(format!("{w} uses letters beyond {} generators", p.generators())));
    }
    let mut seen = HashSet::new();
    let entries: Vec<SymmetrizedEntry> = p.symmetrized_entries().into_iter().filter(|e| seen.insert(e.word.clone())).collect();
    let mut by_first = vec![Vec::new(); 2 * p.generators()];
    for (i, e) in entries.iter().enumerate() {
        by_first[e.word.letters()[0].slot()].push(i);
    }
    let ctx = Ctx { entries: &entries, by_first, nodes: AtomicU64::new(0), budget };
    let (core, conj) = w.cyclic_reduce();

    let steps = if core.is_empty() {
        Some(Vec::new())
    } else if max_faces == 0 {
        None
    } else {
        let exhausted = AtomicBool::new(false);
        let found = ctx.children(&core).into_par_iter().find_map_first(|(step, child)| {
            let mut failed = HashSet::new();
            match ctx.find(&child, max_faces - 1, &mut failed) {
                Ok(Some(mut rest)) => {
                    rest.insert(0, step);
                    Some(rest)
                }
                Ok(None) => None,
                Err(Exhausted) => {
                    exhausted.store(true, Ordering::Relaxed);
                    None
                }
            }
        });
        if found.is_none() && exhausted.load(Ordering::Relaxed) {
            return Ok(SearchOutcome::Indeterminate);
        }
        found
    };
    let Some(steps) = steps else { return Ok(SearchOutcome::NotFound) };

    // Boundary words level by level.
    let mut levels = vec![core.clone()];
    for st in &steps {
        let cur = levels.last().unwrap();
        let s = &entries[st.entry].word;
        let rot = cur.rotate(st.rotation);
        let rest = s.slice(st.matched, s.len()).inverse().concat(&rot.slice(st.matched, rot.len()));
        levels.push(rest.reduce().cyclic_reduce().0);
    }
    let mut d = Diagram::empty();
    for (i, st) in steps.iter().enumerate().rev() {
        let cur = &levels[i];
        let s = &entries[st.entry].word;
        let rot = cur.rotate(st.rotation);
        let rest = s.slice(st.matched, s.len()).inverse().concat(&rot.slice(st.matched, rot.len()));
        let (inner, g) = rest.reduce().cyclic_reduce();
        debug_assert_eq!(inner, levels[i + 1]);
        d = match d.with_path(&g).with_face(s, entries[st.entry].occurrence).folded() {
            Ok(d) => d,
            Err(_) => return Ok(SearchOutcome::Indeterminate),
        };
        d = d.rebased((cur.len() - st.rotation) % cur.len());
    }
    let d = d.with_path(&conj);
    let report = d.verify(p)?;
    if !report.ok || d.boundary_word() != *w {
        return Err(Error::MalformedDiagram(format!("rebuilt diagram for {w} reads {}", d.boundary_word())));
    }
    Ok(SearchOutcome::Found(d))
}
