//! Van Kampen diagrams as combinatorial maps.
//!
//! Half-edge `h` runs from its origin vertex to the origin of `mate[h]` and
//! carries `label[h]`; `label[mate[h]]` is its inverse. `next[h]` is the
//! following half-edge in the cyclic order around the origin of `h`. Faces
//! are the orbits of `h ↦ next[mate[h]]`. One face, the one through
//! `outer`, is the outside; every other face carries a tag naming the
//! relator occurrence read from a start half-edge.

mod build;
mod search;

pub use search::{search_diagram, SearchOutcome};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{Occurrence, Presentation};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceTag {
    pub start: u32,
    pub occurrence: Occurrence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdge {
    pub mate: u32,
    pub next: u32,
    pub label: Letter,
}

/// A planar diagram; see the module docs for conventions. With no half-edges
/// the diagram is a single vertex and `outer` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub half_edges: Vec<HalfEdge>,
    pub face_tags: Vec<FaceTag>,
    pub outer: Option<u32>,
}

/// A face whose boundary does not spell its tagged relator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceViolation {
    pub tag: usize,
    pub expected: Word,
    pub found: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<FaceViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub faces: usize,
    pub area: usize,
    pub boundary_length: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramMetrics {
    pub boundary_length: usize,
    pub face_count: usize,
    /// Sum of the boundary lengths of the internal faces.
    pub area: usize,
    pub filament_edge_count: usize,
    /// Edges with exactly one side on the outer face.
    pub external_edge_count: usize,
    /// Edges with no side on the outer face.
    pub internal_edge_count: usize,
    pub components: Vec<ComponentSummary>,
}

impl DiagramMetrics {
    /// `|∂D| >= C₁|D|` implies `|∂D| >= (C₁/λ)·A(D)`, and `|∂D| >= C₂·A(D)`
    /// implies `|∂D| >= C₂|D|`. Checked with the sharpest constants the
    /// diagram itself admits; faces have length at most `λ` and at least 1.
    pub fn isoperimetry_implications(&self, lambda: usize) -> (bool, bool) {
        let (b, n, a) = (self.boundary_length as f64, self.face_count as f64, self.area as f64);
        if n == 0.0 {
            return (true, true);
        }
        let c1 = b / n;
        let c2 = b / a;
        let eps = 1e-12 * b.max(1.0);
        (b + eps >= c1 / lambda as f64 * a, b + eps >= c2 * n)
    }
}

impl Diagram {
    /// The one-vertex diagram with empty boundary.
    pub fn empty() -> Self {
        Diagram { half_edges: Vec::new(), face_tags: Vec::new(), outer: None }
    }

    #[inline]
    pub fn mate(&self, h: u32) -> u32 {
        self.half_edges[h as usize].mate
    }

    #[inline]
    pub fn next(&self, h: u32) -> u32 {
        self.half_edges[h as usize].next
    }

    #[inline]
    pub fn label(&self, h: u32) -> Letter {
        self.half_edges[h as usize].label
    }

    /// Successor of `h` along its face.
    #[inline]
    pub fn face_next(&self, h: u32) -> u32 {
        self.next(self.mate(h))
    }

    pub fn half_edge_count(&self) -> usize {
        self.half_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    /// Half-edges of the face through `h`, starting at `h`.
    pub fn face_orbit(&self, h: u32) -> Vec<u32> {
        let mut out = vec![h];
        let mut x = self.face_next(h);
        while x != h {
            out.push(x);
            x = self.face_next(x);
        }
        out
    }

    fn read(&self, orbit: &[u32]) -> Word {
        Word::from_letters(orbit.iter().map(|&h| self.label(h)).collect())
    }

    /// Outer boundary word read from `outer` (empty for a single vertex).
    pub fn boundary_word(&self) -> Word {
        match self.outer {
            Some(h) => self.read(&self.face_orbit(h)),
            None => Word::empty(),
        }
    }

    /// Face index of every half-edge and the number of faces.
    fn faces(&self) -> (Vec<u32>, usize) {
        let n = self.half_edges.len();
        let mut face = vec![u32::MAX; n];
        let mut count = 0u32;
        for h in 0..n as u32 {
            if face[h as usize] != u32::MAX {
                continue;
            }
            let mut x = h;
            loop {
                face[x as usize] = count;
                x = self.face_next(x);
                if x == h {
                    break;
                }
            }
            count += 1;
        }
        (face, count as usize)
    }

    fn vertex_count(&self) -> usize {
        let n = self.half_edges.len();
        if n == 0 {
            return 1;
        }
        let mut seen = vec![false; n];
        let mut count = 0;
        for h in 0..n {
            if seen[h] {
                continue;
            }
            count += 1;
            let mut x = h as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                x = self.next(x);
            }
        }
        count
    }

    /// Structural invariants: mates form a fixed-point-free involution with
    /// inverse labels, `next` is a permutation, the map is connected, Euler's
    /// formula holds, and every internal face carries exactly one tag.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.half_edges.len();
        let bad = |m: String| Err(Error::MalformedDiagram(m));
        if n % 2 != 0 {
            return bad(format!("odd half-edge count {n}"));
        }
        if n == 0 {
            if self.outer.is_some() || !self.face_tags.is_empty() {
                return bad("empty diagram with an outer half-edge or face tags".into());
            }
            return Ok(());
        }
        let mut hit = vec![false; n];
        for (h, e) in self.half_edges.iter().enumerate() {
            let (m, x) = (e.mate as usize, e.next as usize);
            if m >= n || x >= n {
                return bad(format!("half-edge {h} points outside the map"));
            }
            if m == h || self.half_edges[m].mate as usize != h {
                return bad(format!("mate of half-edge {h} is not an involution"));
            }
            if self.half_edges[m].label != e.label.inverse() {
                return bad(format!("half-edge {h} and its mate carry non-inverse labels"));
            }
            if hit[x] {
                return bad(format!("next is not a permutation at half-edge {x}"));
            }
            hit[x] = true;
        }
        // Connectivity over mate and next.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(h) = stack.pop() {
            for y in [self.half_edges[h].mate as usize, self.half_edges[h].next as usize] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("diagram is not connected".into());
        }
        let (face, faces) = self.faces();
        let (v, e) = (self.vertex_count() as i64, (n / 2) as i64);
        if v - e + faces as i64 != 2 {
            return bad(format!("Euler characteristic V - E + F = {} - {} + {} is not 2", v, e, faces));
        }
        let outer = match self.outer {
            Some(h) if (h as usize) < n => face[h as usize],
            _ => return bad("missing outer half-edge".into()),
        };
        let mut tagged = vec![false; faces];
        for (i, t) in self.face_tags.iter().enumerate() {
            let f = *face.get(t.start as usize).ok_or_else(|| Error::MalformedDiagram(format!("tag {i} start out of range")))?;
            if f == outer {
                return bad(format!("tag {i} lies on the outer face"));
            }
            if std::mem::replace(&mut tagged[f as usize], true) {
                return bad(format!("face of tag {i} is tagged twice"));
            }
        }
        if let Some(f) = (0..faces).find(|&f| f as u32 != outer && !tagged[f]) {
            return bad(format!("internal face {f} has no tag"));
        }
        Ok(())
    }

    /// Checks structure, then that each face spells its tagged relator.
    pub fn verify(&self, p: &Presentation) -> Result<VerifyReport> {
        self.check_structure()?;
        let mut violations = Vec::new();
        for (i, t) in self.face_tags.iter().enumerate() {
            if t.occurrence.relator >= p.relators().len() {
                return Err(Error::MalformedDiagram(format!("tag {i} names relator {} of {}", t.occurrence.relator, p.relators().len())));
            }
            let expected = t.occurrence.word(p);
            let found = self.read(&self.face_orbit(t.start));
            if found != expected {
                violations.push(FaceViolation { tag: i, expected, found });
            }
        }
        Ok(VerifyReport { ok: violations.is_empty(), violations })
    }

    /// Per half-edge: does it lie on the outer face.
    fn on_outer(&self) -> Vec<bool> {
        let mut out = vec![false; self.half_edges.len()];
        if let Some(h) = self.outer {
            for x in self.face_orbit(h) {
                out[x as usize] = true;
            }
        }
        out
    }

    /// Edge classes: filament (both sides outside), external (one side),
    /// internal (none). Returned as lists of representative half-edges.
    fn edge_classes(&self) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let outer = self.on_outer();
        let (mut fil, mut ext, mut int) = (Vec::new(), Vec::new(), Vec::new());
        for h in 0..self.half_edges.len() as u32 {
            let m = self.mate(h);
            if h > m {
                continue;
            }
            match (outer[h as usize], outer[m as usize]) {
                (true, true) => fil.push(h),
                (false, false) => int.push(h),
                (true, false) => ext.push(h),
                (false, true) => ext.push(m),
            }
        }
        (fil, ext, int)
    }

    /// Groups the non-filament edges into connected pieces sharing vertices.
    fn component_edges(&self) -> Vec<Vec<u32>> {
        let (fil, _, _) = self.edge_classes();
        let filament: BTreeSet<u32> = fil.iter().flat_map(|&h| [h, self.mate(h)]).collect();
        let n = self.half_edges.len();
        // Vertex id of each half-edge's origin.
        let mut vertex = vec![u32::MAX; n];
        let mut nv = 0;
        for h in 0..n {
            if vertex[h] != u32::MAX {
                continue;
            }
            let mut x = h as u32;
            while vertex[x as usize] == u32::MAX {
                vertex[x as usize] = nv;
                x = self.next(x);
            }
            nv += 1;
        }
        let mut parent: Vec<u32> = (0..nv).collect();
        fn root(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for h in 0..n as u32 {
            if !filament.contains(&h) {
                let (a, b) = (root(&mut parent, vertex[h as usize]), root(&mut parent, vertex[self.mate(h) as usize]));
                parent[a as usize] = b;
            }
        }
        let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for h in 0..n as u32 {
            if !filament.contains(&h) {
                let r = root(&mut parent, vertex[h as usize]);
                groups.entry(r).or_default().push(h);
            }
        }
        groups.into_values().collect()
    }

    pub fn metrics(&self) -> DiagramMetrics {
        let (fil, ext, int) = self.edge_classes();
        let area: usize = self.face_tags.iter().map(|t| self.face_orbit(t.start).len()).sum();
        debug_assert_eq!(area, ext.len() + 2 * int.len());
        let outer = self.on_outer();
        let components = self
            .component_edges()
            .into_iter()
            .map(|hs| {
                let set: BTreeSet<u32> = hs.iter().copied().collect();
                let tags: Vec<&FaceTag> = self.face_tags.iter().filter(|t| set.contains(&t.start)).collect();
                ComponentSummary {
                    faces: tags.len(),
                    area: tags.iter().map(|t| self.face_orbit(t.start).len()).sum(),
                    boundary_length: hs.iter().filter(|&&h| outer[h as usize]).count(),
                    edges: hs.len() / 2,
                }
            })
            .collect();
        DiagramMetrics {
            boundary_length: self.outer.map_or(0, |h| self.face_orbit(h).len()),
            face_count: self.face_tags.len(),
            area,
            filament_edge_count: fil.len(),
            external_edge_count: ext.len(),
            internal_edge_count: int.len(),
            components,
        }
    }

    /// Restriction to a set of half-edges closed under `mate`, with rotations
    /// skipping the removed half-edges.
    fn restrict(&self, keep: &[u32], outer_hint: &[bool]) -> Diagram {
        let index: BTreeMap<u32, u32> = keep.iter().enumerate().map(|(i, &h)| (h, i as u32)).collect();
        let half_edges = keep
            .iter()
            .map(|&h| {
                let mut x = self.next(h);
                while !index.contains_key(&x) {
                    x = self.next(x);
                }
                HalfEdge { mate: index[&self.mate(h)], next: index[&x], label: self.label(h) }
            })
            .collect();
        let face_tags = self
            .face_tags
            .iter()
            .filter_map(|t| index.get(&t.start).map(|&s| FaceTag { start: s, occurrence: t.occurrence }))
            .collect();
        let outer = keep.iter().position(|&h| outer_hint[h as usize]).map(|i| i as u32);
        Diagram { half_edges, face_tags, outer }
    }

    /// Splits into maximal non-filamenteous components and the filament
    /// edges between them. Filaments are returned as connected groups of
    /// edges, each edge given by one of its half-edges.
    pub fn filament_decomposition(&self) -> (Vec<Diagram>, Vec<Vec<u32>>) {
        let outer = self.on_outer();
        let components = self.component_edges().iter().map(|hs| self.restrict(hs, &outer)).collect();
        let (fil, _, _) = self.edge_classes();
        // Group filament edges by shared vertices.
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let vertex_of = |h: u32| -> BTreeSet<u32> {
            let mut s = BTreeSet::new();
            let mut x = h;
            loop {
                s.insert(x);
                x = self.next(x);
                if x == h {
                    break;
                }
            }
            s
        };
        let mut group_vertices: Vec<BTreeSet<u32>> = Vec::new();
        for &h in &fil {
            let ends = [vertex_of(h), vertex_of(self.mate(h))];
            let mut hits: Vec<usize> = (0..groups.len())
                .filter(|&g| ends.iter().any(|v| v.iter().any(|x| group_vertices[g].contains(x))))
                .collect();
            let mut edges = vec![h];
            let mut verts: BTreeSet<u32> = ends.into_iter().flatten().collect();
            hits.sort_unstable_by(|a, b| b.cmp(a));
            for g in hits {
                edges.extend(groups.remove(g));
                verts.extend(group_vertices.remove(g));
            }
            groups.push(edges);
            group_vertices.push(verts);
        }
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort();
        (components, groups)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Graph description text: one node per vertex, one edge per edge, with
    /// the label read from the lower-numbered endpoint.
    pub fn render_dot(&self) -> String {
        let n = self.half_edges.len();
        let mut vertex = vec![u32::MAX; n];
        let mut nv = 0u32;
        for h in 0..n {
            if vertex[h] != u32::MAX {
                continue;
            }
            let mut x = h as u32;
            while vertex[x as usize] == u32::MAX {
                vertex[x as usize] = nv;
                x = self.next(x);
            }
            nv += 1;
        }
        let outer = self.on_outer();
        let mut s = String::from("graph diagram {\n  node [shape=point];\n");
        for v in 0..nv.max(1) {
            let _ = writeln!(s, "  v{v};");
        }
        for h in 0..n as u32 {
            let m = self.mate(h);
            if h > m {
                continue;
            }
            let style = if outer[h as usize] && outer[m as usize] { ", style=dashed" } else { "" };
            let _ = writeln!(
                s,
                "  v{} -- v{} [label=\"{}\"{}];",
                vertex[h as usize],
                vertex[m as usize],
                self.label(h),
                style
            );
        }
        s.push_str("}\n");
        s
    }
}
