//! Finite simplicial defining graphs and the derived vertex-set data
//! (stars, links, complements, induced subgraphs, diameter).
//!
//! The vertex order fixed at load time is the canonical total order used by
//! every normal form downstream, so a graph is immutable once built.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap so vertex subsets fit in a `u64` bitmask.
pub const MAX_VERTICES: usize = 64;

/// A subset of the vertices of a fixed defining graph, as a bitmask over
/// vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet {
    bits: u64,
}

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet { bits: 0 };

    pub fn from_bits(bits: u64) -> Self {
        VertexSet { bits }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet { bits: 1 << v }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.bits & (1 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        self.bits |= 1 << v;
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits | other.bits }
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits & other.bits }
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet { bits: self.bits & !other.bits }
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

/// A finite simplicial graph: named vertices in a fixed total order, plus an
/// edge set with no loops and no multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    vertices: Vec<String>,
    adj: Vec<u64>,
    edges: BTreeSet<(usize, usize)>,
}

/// Graph diameter; disconnected graphs report `Infinite` rather than an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn as_finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "infinite"),
        }
    }
}

fn valid_vertex_name(name: &str) -> bool {
    // "1" is reserved for the identity element in word syntax.
    !name.is_empty()
        && name != "1"
        && !name.contains(|c: char| c.is_whitespace() || c == '^' || c == '#')
}

impl DefiningGraph {
    /// Builds a graph from named vertices (order becomes canonical) and edges.
    pub fn from_parts<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_owned()).collect();
        if names.len() > MAX_VERTICES {
            return Err(Error::Budget(format!(
                "graph has {} vertices, at most {MAX_VERTICES} supported",
                names.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !valid_vertex_name(name) {
                return Err(Error::GraphParse {
                    line: 0,
                    msg: format!("invalid vertex name `{name}`"),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(Error::GraphParse {
                    line: 0,
                    msg: format!("duplicate vertex `{name}`"),
                });
            }
        }
        let mut graph = DefiningGraph {
            adj: vec![0; names.len()],
            edges: BTreeSet::new(),
            vertices: names,
        };
        for (a, b) in edges {
            let i = graph
                .vertex_index(a.as_ref())
                .ok_or_else(|| Error::UnknownVertex(a.as_ref().to_owned()))?;
            let j = graph
                .vertex_index(b.as_ref())
                .ok_or_else(|| Error::UnknownVertex(b.as_ref().to_owned()))?;
            if i == j {
                return Err(Error::GraphParse {
                    line: 0,
                    msg: format!("loop at vertex `{}`", a.as_ref()),
                });
            }
            graph.add_edge(i, j);
        }
        Ok(graph)
    }

    /// Parses the graph text format:
    ///
    /// ```text
    /// # comment
    /// vertices: v1 v2 v3
    /// edge: v1 v3
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices: Option<Vec<String>> = None;
        let mut edges: Vec<(String, String, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                if vertices.is_some() {
                    return Err(Error::GraphParse {
                        line: lineno,
                        msg: "second `vertices:` line".into(),
                    });
                }
                vertices = Some(rest.split_whitespace().map(str::to_owned).collect());
            } else if let Some(rest) = line.strip_prefix("edge:") {
                let mut it = rest.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => edges.push((a.to_owned(), b.to_owned(), lineno)),
                    _ => {
                        return Err(Error::GraphParse {
                            line: lineno,
                            msg: "expected `edge: <name> <name>`".into(),
                        })
                    }
                }
            } else {
                return Err(Error::GraphParse {
                    line: lineno,
                    msg: format!("unrecognized line `{line}`"),
                });
            }
        }
        let vertices = vertices.ok_or(Error::GraphParse {
            line: 0,
            msg: "missing `vertices:` line".into(),
        })?;
        let mut graph = Self::from_parts::<String>(&vertices, &[])?;
        for (a, b, lineno) in edges {
            let i = graph.vertex_index(&a).ok_or(Error::GraphParse {
                line: lineno,
                msg: format!("unknown endpoint `{a}`"),
            })?;
            let j = graph.vertex_index(&b).ok_or(Error::GraphParse {
                line: lineno,
                msg: format!("unknown endpoint `{b}`"),
            })?;
            if i == j {
                return Err(Error::GraphParse {
                    line: lineno,
                    msg: format!("loop at vertex `{a}`"),
                });
            }
            graph.add_edge(i, j);
        }
        Ok(graph)
    }

    fn add_edge(&mut self, i: usize, j: usize) {
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
        self.edges.insert((i.min(j), i.max(j)));
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u] & (1 << v) != 0
    }

    /// Bitmask of vertices adjacent to `v` (excludes `v` itself).
    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn full_mask(&self) -> u64 {
        let n = self.vertices.len();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::from_bits(self.full_mask())
    }

    /// St(v) = {v} ∪ Lk(v).
    pub fn star(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v] | (1 << v))
    }

    pub fn star_mask(&self, v: usize) -> u64 {
        self.adj[v] | (1 << v)
    }

    pub fn link(&self, v: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[v])
    }

    /// St(X) = ∪_{v∈X} St(v).
    pub fn star_of_set(&self, set: VertexSet) -> Result<VertexSet> {
        self.check_subset(set)?;
        let mut bits = 0;
        for v in set.iter() {
            bits |= self.star_mask(v);
        }
        Ok(VertexSet::from_bits(bits))
    }

    pub fn star_by_name(&self, name: &str) -> Result<VertexSet> {
        let v = self
            .vertex_index(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))?;
        Ok(self.star(v))
    }

    pub fn link_by_name(&self, name: &str) -> Result<VertexSet> {
        let v = self
            .vertex_index(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))?;
        Ok(self.link(v))
    }

    fn check_subset(&self, set: VertexSet) -> Result<()> {
        if set.bits() & !self.full_mask() != 0 {
            return Err(Error::UnknownVertex(format!(
                "vertex index {} out of range",
                VertexSet::from_bits(set.bits() & !self.full_mask())
                    .iter()
                    .next()
                    .unwrap()
            )));
        }
        Ok(())
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut set = VertexSet::EMPTY;
        for name in names {
            let v = self
                .vertex_index(name.as_ref())
                .ok_or_else(|| Error::UnknownVertex(name.as_ref().to_owned()))?;
            set.insert(v);
        }
        Ok(set)
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.vertex_name(v)).collect()
    }

    /// Complement graph on the same ordered vertex set.
    pub fn complement(&self) -> DefiningGraph {
        let n = self.vertices.len();
        let mut out = DefiningGraph {
            vertices: self.vertices.clone(),
            adj: vec![0; n],
            edges: BTreeSet::new(),
        };
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge(i, j) {
                    out.add_edge(i, j);
                }
            }
        }
        out
    }

    /// Subgraph induced by `set`; vertices keep their relative order.
    pub fn induced_subgraph(&self, set: VertexSet) -> Result<DefiningGraph> {
        self.check_subset(set)?;
        let kept: Vec<usize> = (0..self.vertices.len()).filter(|&v| set.contains(v)).collect();
        let mut out = DefiningGraph {
            vertices: kept.iter().map(|&v| self.vertices[v].clone()).collect(),
            adj: vec![0; kept.len()],
            edges: BTreeSet::new(),
        };
        for (i, &u) in kept.iter().enumerate() {
            for (j, &v) in kept.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    out.add_edge(i, j);
                }
            }
        }
        Ok(out)
    }

    /// Breadth-first distances from `v` within the vertex mask `within`.
    /// Unreachable vertices get `usize::MAX`.
    fn bfs(&self, v: usize, within: u64) -> Vec<usize> {
        let n = self.vertices.len();
        let mut dist = vec![usize::MAX; n];
        dist[v] = 0;
        let mut frontier = vec![v];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &u in &frontier {
                let mut nbrs = self.adj[u] & within;
                while nbrs != 0 {
                    let w = nbrs.trailing_zeros() as usize;
                    nbrs &= nbrs - 1;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let dist = self.bfs(0, self.full_mask());
        dist.iter().all(|&d| d != usize::MAX)
    }

    pub fn diameter(&self) -> Diameter {
        let n = self.vertices.len();
        if n == 0 {
            return Diameter::Finite(0);
        }
        let mut best = 0;
        for v in 0..n {
            let dist = self.bfs(v, self.full_mask());
            for &d in &dist {
                if d == usize::MAX {
                    return Diameter::Infinite;
                }
                best = best.max(d);
            }
        }
        Diameter::Finite(best)
    }

    /// A graph is a join iff it has at least two vertices and its complement
    /// is disconnected.
    pub fn is_join(&self) -> bool {
        self.vertices.len() >= 2 && !self.complement().is_connected()
    }

    /// Connected components of the subgraph induced by `within`, as vertex sets.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut remaining = within.bits();
        let mut out = Vec::new();
        while remaining != 0 {
            let v = remaining.trailing_zeros() as usize;
            let dist = self.bfs(v, remaining);
            let mut comp = 0u64;
            for (u, &d) in dist.iter().enumerate() {
                if d != usize::MAX {
                    comp |= 1 << u;
                }
            }
            out.push(VertexSet::from_bits(comp));
            remaining &= !comp;
        }
        out
    }

    /// FNV-1a hash of the canonical description, echoed into CLI reports.
    pub fn hash_hex(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for name in &self.vertices {
            eat(name.as_bytes());
            eat(b"\n");
        }
        for &(i, j) in &self.edges {
            eat(&(i as u32).to_le_bytes());
            eat(&(j as u32).to_le_bytes());
        }
        format!("{h:016x}")
    }

    /// Canonical text form, re-parseable by [`DefiningGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices: {}\n", self.vertices.join(" "));
        for &(i, j) in &self.edges {
            s.push_str(&format!("edge: {} {}\n", self.vertices[i], self.vertices[j]));
        }
        s
    }
}

/// Complement of the path graph on the given vertices, in path order.
pub fn complement_of_path<S: AsRef<str>>(names: &[S]) -> DefiningGraph {
    let mut edges = Vec::new();
    for i in 0..names.len() {
        for j in i + 2..names.len() {
            edges.push((names[i].as_ref(), names[j].as_ref()));
        }
    }
    let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
    DefiningGraph::from_parts(&names, &edges).expect("path complement is always valid")
}

/// Cycle graph on the given vertices, in cyclic order.
pub fn cycle<S: AsRef<str>>(names: &[S]) -> DefiningGraph {
    let n = names.len();
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((names[i].as_ref(), names[(i + 1) % n].as_ref()));
    }
    let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
    DefiningGraph::from_parts(&names, &edges).expect("cycle is always valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{pbar4, pbar5, pbar6};

    #[test]
    fn complement_is_involution() {
        let g = pbar4();
        assert_eq!(g.complement().complement(), *g);
    }

    #[test]
    fn pbar4_is_complement_of_path() {
        let g = pbar4();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 2), (0, 3), (1, 3)]);
        // The complement of the complement of P4 is P4 itself.
        let comp = g.complement();
        assert_eq!(comp.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn complete_graph_complement_is_edgeless() {
        let g = DefiningGraph::from_parts(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")])
            .unwrap();
        assert_eq!(g.complement().edge_count(), 0);
    }

    #[test]
    fn stars_and_links() {
        let g = pbar4();
        assert_eq!(g.set_names(g.star_by_name("v1").unwrap()), vec!["v1", "v3", "v4"]);
        assert_eq!(g.set_names(g.link_by_name("v2").unwrap()), vec!["v4"]);
        assert_eq!(g.star_of_set(VertexSet::EMPTY).unwrap(), VertexSet::EMPTY);
        for v in 0..g.vertex_count() {
            assert!(g.star(v).contains(v));
            assert_eq!(g.link(v), g.star(v).difference(VertexSet::singleton(v)));
        }
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = pbar6();
        let x = g.vertex_set(&["v1", "v2", "v3", "v4"]).unwrap();
        let sub = g.induced_subgraph(x).unwrap();
        // The complement of the induced subgraph is the path v1-v2-v3-v4.
        let comp = sub.complement();
        assert_eq!(comp.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(comp.diameter(), Diameter::Finite(3));

        assert_eq!(g.induced_subgraph(g.full_set()).unwrap(), *g);
        assert_eq!(g.induced_subgraph(VertexSet::EMPTY).unwrap().vertex_count(), 0);
    }

    #[test]
    fn diameters() {
        assert_eq!(pbar4().diameter(), Diameter::Finite(3));
        assert_eq!(pbar5().diameter(), Diameter::Finite(2));
        let disconnected = DefiningGraph::from_parts(&["a", "b"], &[]).unwrap();
        assert_eq!(disconnected.diameter(), Diameter::Infinite);
    }

    #[test]
    fn join_detection() {
        // K2 is the join of two single vertices.
        let k2 = DefiningGraph::from_parts(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(k2.is_join());
        assert!(!pbar4().is_join());
        assert_eq!(pbar4().is_join(), !pbar4().complement().is_connected());
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(DefiningGraph::parse("vertices: a a\n").is_err());
        assert!(DefiningGraph::parse("vertices: a b\nedge: a c\n").is_err());
        assert!(DefiningGraph::parse("vertices: a b\nedge: a a\n").is_err());
        assert!(DefiningGraph::parse("edge: a b\n").is_err());
        assert!(DefiningGraph::parse("vertices: 1 b\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = pbar5();
        let reparsed = DefiningGraph::parse(&g.to_text()).unwrap();
        assert_eq!(*g, reparsed);
        assert_eq!(g.hash_hex(), reparsed.hash_hex());
    }
}
