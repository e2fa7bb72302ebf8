//! Finite truncations of the extension graph: vertices are conjugates of
//! generators with conjugator word length up to a cap, edges are commuting
//! pairs. The full graph is usually infinite and locally infinite, so every
//! distance taken in a truncation is only an upper bound for the true
//! distance; growing the cap can only shorten paths.

use std::collections::VecDeque;
use std::io::Write;
use std::sync::Arc;

use num_rational::Rational64;
use rustc_hash::FxHashMap;

use rand::Rng;

use crate::conjugation::cyclic_reduce;
use crate::element::{enumerate_elements, random_reduced, Element, Letter};
use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, Diameter};
use crate::star::{is_loxodromic, StarMetric};

/// A vertex of the extension graph: a conjugate base^conjugator, identified
/// by the canonical form of the conjugated generator.
#[derive(Debug, Clone)]
pub struct EVertex {
    pub base: usize,
    pub conjugator: Element,
    /// Canonical form of conjugator⁻¹ · base · conjugator; vertex identity.
    pub key: Element,
}

impl EVertex {
    pub fn new(graph: &Arc<DefiningGraph>, base: usize, conjugator: &Element) -> Result<EVertex> {
        let gen = Element::generator(graph, base, crate::element::Sign::Plus)?;
        let key = conjugator.inverse().mul(&gen).mul(conjugator);
        Ok(EVertex { base, conjugator: conjugator.clone(), key })
    }
}

impl PartialEq for EVertex {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for EVertex {}

/// Right action by conjugation: (v^h)·g = v^{hg}.
pub fn action(ev: &EVertex, g: &Element) -> EVertex {
    EVertex {
        base: ev.base,
        conjugator: ev.conjugator.mul(g),
        key: g.inverse().mul(&ev.key).mul(g),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BallOptions {
    /// Skip the standing graph assumptions (≥ 4 vertices, graph and
    /// complement connected). Distances remain valid upper bounds.
    pub force: bool,
    /// Abort instead of building more vertices than this.
    pub vertex_ceiling: usize,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { force: false, vertex_ceiling: 200_000 }
    }
}

/// Truncated extension graph over conjugators of word length ≤ the cap.
pub struct EBall {
    pub radius_param: usize,
    /// Sorted by canonical key; indices are stable across rebuilds.
    pub vertices: Vec<EVertex>,
    index: FxHashMap<Vec<Letter>, usize>,
    adjacency: Vec<Vec<usize>>,
    pub edge_count: usize,
}

pub fn build_ball(graph: &Arc<DefiningGraph>, cap: usize, opts: BallOptions) -> Result<EBall> {
    if !opts.force
        && (graph.vertex_count() < 4
            || !graph.is_connected()
            || !graph.complement().is_connected())
    {
        return Err(Error::Precondition(
            "extension graph truncation expects ≥ 4 vertices with graph and complement connected \
             (set force to override)"
                .into(),
        ));
    }
    let mut vertices: Vec<EVertex> = Vec::new();
    let mut index: FxHashMap<Vec<Letter>, usize> = FxHashMap::default();
    for conjugator in enumerate_elements(graph, cap) {
        for base in 0..graph.vertex_count() {
            let ev = EVertex::new(graph, base, &conjugator)?;
            let key = ev.key.canonical_letters().to_vec();
            if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(key) {
                if vertices.len() >= opts.vertex_ceiling {
                    return Err(Error::Budget(format!(
                        "extension graph truncation exceeds {} vertices",
                        opts.vertex_ceiling
                    )));
                }
                slot.insert(vertices.len());
                vertices.push(ev);
            }
        }
    }
    vertices.sort_by(|a, b| a.key.cmp(&b.key));
    let mut index = FxHashMap::default();
    for (i, v) in vertices.iter().enumerate() {
        index.insert(v.key.canonical_letters().to_vec(), i);
    }
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut edge_count = 0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let a = &vertices[i].key;
            let b = &vertices[j].key;
            let commute = if a.disjointly_commutes(b)? {
                true
            } else {
                a.mul(b) == b.mul(a)
            };
            if commute {
                adjacency[i].push(j);
                adjacency[j].push(i);
                edge_count += 1;
            }
        }
    }
    Ok(EBall { radius_param: cap, vertices, index, adjacency, edge_count })
}

impl EBall {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, ev: &EVertex) -> Option<usize> {
        self.index.get(ev.key.canonical_letters()).copied()
    }

    /// Shortest-path length inside the truncation, an upper bound for the
    /// true extension-graph distance. `None` when no path stays inside.
    pub fn distance(&self, p: &EVertex, q: &EVertex) -> Result<Option<usize>> {
        let start = self
            .index_of(p)
            .ok_or_else(|| Error::Precondition("source vertex outside the ball".into()))?;
        let goal = self
            .index_of(q)
            .ok_or_else(|| Error::Precondition("target vertex outside the ball".into()))?;
        if start == goal {
            return Ok(Some(0));
        }
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[start] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    if w == goal {
                        return Ok(Some(dist[w]));
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// Export format: `v<i> := <canonical word>` lines, then `e: <i> <j>`
    /// lines, with indices in canonical-key order.
    pub fn export(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "v{} := {}", i, v.key)?;
        }
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    writeln!(out, "e: {i} {j}")?;
                }
            }
        }
        Ok(())
    }
}

/// Outcome of sampling the comparison between truncated extension-graph
/// distances and star lengths.
#[derive(Debug, Clone)]
pub struct QiReport {
    pub samples: usize,
    /// d(v^g, v) < ‖g‖* − 1 never happens; any such sample is counted here.
    pub lower_violations: usize,
    /// Samples with d(v^g, v) ≤ D(‖g‖* + 1); may fail at small caps.
    pub upper_holds: usize,
    pub unreachable: usize,
}

impl QiReport {
    pub fn upper_rate(&self) -> f64 {
        if self.samples == 0 {
            return 1.0;
        }
        self.upper_holds as f64 / self.samples as f64
    }
}

/// Samples random g with ‖g‖ ≤ cap and checks both sides of the
/// quasi-isometry inequality on the truncation.
pub fn check_quasi_isometry<R: Rng>(
    graph: &Arc<DefiningGraph>,
    cap: usize,
    samples: usize,
    rng: &mut R,
) -> Result<QiReport> {
    let ball = build_ball(graph, cap, BallOptions::default())?;
    let diameter = match graph.diameter() {
        Diameter::Finite(d) => d,
        Diameter::Infinite => unreachable!("ball construction checked connectivity"),
    };
    let mut metric = StarMetric::new(graph);
    let mut report = QiReport { samples, lower_violations: 0, upper_holds: 0, unreachable: 0 };
    let identity = Element::identity(graph);
    for _ in 0..samples {
        let g = random_reduced(graph, rng, cap);
        let base = rng.random_range(0..graph.vertex_count());
        let from = EVertex::new(graph, base, &g)?;
        let to = EVertex::new(graph, base, &identity)?;
        let s = metric.star_length(&g);
        match ball.distance(&from, &to)? {
            None => report.unreachable += 1,
            Some(d) => {
                if d + 1 < s {
                    report.lower_violations += 1;
                }
                if d <= diameter * (s + 1) {
                    report.upper_holds += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Certified translation-length interval transferred to the extension
/// graph: the star interval's lower end and D times its upper end. For a
/// loxodromic element under the standing assumptions the interval must be
/// consistent with the floor 1/(V−2).
pub fn egraph_translation_bounds(
    g: &Element,
    max_power: usize,
) -> Result<(Rational64, Rational64)> {
    let graph = g.graph();
    if !graph.is_connected() {
        return Err(Error::Precondition("translation transfer needs a connected graph".into()));
    }
    let diameter = match graph.diameter() {
        Diameter::Finite(d) => d as i64,
        Diameter::Infinite => unreachable!("connected graph"),
    };
    let core = cyclic_reduce(g).core;
    let (lo, hi) = crate::star::translation_length_bounds(&core, max_power)?;
    let vcount = graph.vertex_count();
    if vcount >= 4 && graph.complement().is_connected() && is_loxodromic(&core)? {
        let floor = Rational64::new(1, vcount as i64 - 2);
        if hi < floor {
            return Err(Error::Internal(
                "certified star interval lies below the loxodromic floor".into(),
            ));
        }
    }
    Ok((lo, hi * diameter))
}
