//! Star words, exact star length, the induced metric, splitness
//! classification, loxodromy, and certified translation-length bounds.
//!
//! No closed-form algorithm for star length exists, so the metric is
//! computed by the maximal-prefix recursion
//!
//! ```text
//! ‖1‖* = 0,    ‖g‖* = 1 + min { ‖p_v⁻¹ g‖* : v ∈ V, p_v ≠ 1 }
//! ```
//!
//! where p_v is the maximal prefix of g supported in St(v). This is exact:
//! (a) a minimal star decomposition can always be made geodesic, because a
//! cancellation between two factors exhibits a letter that commutes with
//! everything in between and can be deleted from both factors, shortening
//! the total length while each factor stays a star word; (b) in a geodesic
//! minimal decomposition the first factor w₁ lies in St(v) for some v, hence
//! w₁ ≤_L p_v, and replacing w₁ by p_v cannot increase the count since star
//! length is monotone under removing a middle factor of a geodesic product.
//! The recursion therefore reaches some optimal first factor, and the
//! brute-force oracle cross-checks it on small instances.

use num_rational::Rational64;
use rustc_hash::FxHashMap;

use crate::conjugation::cyclic_reduce;
use crate::element::{lex_canonicalize, Element, Letter};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::lattice::max_prefix_split_word;

/// True iff supp(g) lies in the star of a single vertex.
pub fn is_star_word(g: &Element) -> bool {
    if g.is_identity() {
        return true;
    }
    let supp = g.support().bits();
    let graph = g.graph();
    (0..graph.vertex_count()).any(|v| supp & !graph.star_mask(v) == 0)
}

fn star_word_witness(g: &Element) -> Option<usize> {
    let supp = g.support().bits();
    let graph = g.graph();
    (0..graph.vertex_count()).find(|&v| supp & !graph.star_mask(v) == 0)
}

/// Star-length metric with a memo table keyed on canonical words.
///
/// A table is confined to the instance that owns it; concurrent use means
/// one instance per thread, and all instances return identical values.
pub struct StarMetric {
    graph: std::sync::Arc<crate::graph::DefiningGraph>,
    memo: FxHashMap<Box<[Letter]>, u32>,
}

impl StarMetric {
    pub fn new(graph: &std::sync::Arc<crate::graph::DefiningGraph>) -> StarMetric {
        StarMetric { graph: std::sync::Arc::clone(graph), memo: FxHashMap::default() }
    }

    pub fn star_length(&mut self, g: &Element) -> usize {
        assert!(
            std::sync::Arc::ptr_eq(&self.graph, g.graph()) || *self.graph == **g.graph(),
            "element over a different graph"
        );
        self.rec(g.canonical_letters()) as usize
    }

    pub fn d_star(&mut self, a: &Element, b: &Element) -> Result<usize> {
        a.check_same_graph(b)?;
        Ok(self.star_length(&a.mul(&b.inverse())))
    }

    fn rec(&mut self, word: &[Letter]) -> u32 {
        if word.is_empty() {
            return 0;
        }
        let graph = std::sync::Arc::clone(&self.graph);
        let graph = &*graph;
        let supp = crate::element::support_of(word).bits();
        let n = graph.vertex_count();
        if (0..n).any(|v| supp & !graph.star_mask(v) == 0) {
            return 1;
        }
        if let Some(&v) = self.memo.get(word) {
            return v;
        }
        let mut best = u32::MAX;
        for v in 0..n {
            let (taken, rest) = max_prefix_split_word(graph, word, graph.star_mask(v));
            if taken.is_empty() {
                continue;
            }
            debug_assert!(!rest.is_empty());
            let rest = lex_canonicalize(graph, rest);
            let sub = self.rec(&rest);
            if sub + 1 < best {
                best = sub + 1;
            }
        }
        debug_assert_ne!(best, u32::MAX);
        self.memo.insert(word.into(), best);
        best
    }
}

/// Star length with a fresh memo table.
pub fn star_length(g: &Element) -> usize {
    StarMetric::new(g.graph()).star_length(g)
}

/// d*(a, b) = ‖a·b⁻¹‖*.
pub fn d_star(a: &Element, b: &Element) -> Result<usize> {
    StarMetric::new(a.graph()).d_star(a, b)
}

/// A witnessed geodesic factorization of g into ‖g‖* star words.
#[derive(Debug, Clone)]
pub struct StarDecomposition {
    /// Factors in product order together with a star vertex containing each
    /// factor's support.
    pub factors: Vec<(Element, usize)>,
}

pub fn star_decompose(g: &Element) -> StarDecomposition {
    let graph = g.graph();
    let mut metric = StarMetric::new(graph);
    let target = metric.star_length(g);
    let mut factors = Vec::with_capacity(target);
    let mut rest = g.clone();
    for step in (1..=target).rev() {
        if step == 1 {
            let v = star_word_witness(&rest).expect("last factor is a star word");
            factors.push((rest.clone(), v));
            rest = Element::identity(graph);
            break;
        }
        let mut chosen = None;
        for v in 0..graph.vertex_count() {
            let (taken, remainder) =
                max_prefix_split_word(graph, rest.canonical_letters(), graph.star_mask(v));
            if taken.is_empty() {
                continue;
            }
            let remainder = Element::from_reduced(graph, remainder);
            if metric.star_length(&remainder) == step - 1 {
                chosen = Some((Element::from_reduced(graph, taken), v, remainder));
                break;
            }
        }
        let (factor, v, remainder) = chosen.expect("recursion admits an optimal first factor");
        factors.push((factor, v));
        rest = remainder;
    }
    debug_assert!(rest.is_identity());
    StarDecomposition { factors }
}

/// Splitness of a nontrivial element, decided on the complement graph
/// restricted to the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitClass {
    /// The support splits into ≥ 2 mutually commuting parts.
    Split { components: Vec<VertexSet> },
    /// Non-split, but some vertex outside the support commutes with all of it.
    NonSplit { commuting_vertex: usize },
    /// Non-split and the complement-star of the support covers every vertex.
    StronglyNonSplit,
}

pub fn classify(g: &Element) -> Result<SplitClass> {
    if g.is_identity() {
        return Err(Error::Precondition("classify expects a nontrivial element".into()));
    }
    let graph = g.graph();
    let supp = g.support();
    let comp = graph.complement();
    let components = comp.components_within(supp);
    if components.len() >= 2 {
        return Ok(SplitClass::Split { components });
    }
    // St in the complement graph, over the whole vertex set.
    let mut covered = supp.bits();
    for v in supp.iter() {
        covered |= comp.neighbors_mask(v);
    }
    if covered == graph.full_mask() {
        Ok(SplitClass::StronglyNonSplit)
    } else {
        let witness = (!covered & graph.full_mask()).trailing_zeros() as usize;
        Ok(SplitClass::NonSplit { commuting_vertex: witness })
    }
}

/// A cyclically reduced core is loxodromic for the star metric iff it is
/// strongly non-split with at least two support vertices.
pub fn is_loxodromic(g: &Element) -> Result<bool> {
    let graph = g.graph();
    if graph.vertex_count() < 2 || !graph.complement().is_connected() {
        return Err(Error::Precondition(
            "loxodromy needs ≥ 2 vertices and a connected complement".into(),
        ));
    }
    let core = cyclic_reduce(g).core;
    if core.support().len() < 2 {
        return Ok(false);
    }
    Ok(matches!(classify(&core)?, SplitClass::StronglyNonSplit))
}

/// Certified interval for the asymptotic translation length of a cyclically
/// reduced element on the star metric, from powers up to `max_power`.
///
/// The upper bound min ‖gⁿ‖*/n is valid because ‖g^{n+m}‖* ≤ ‖gⁿ‖* + ‖gᵐ‖*.
/// The lower bound max (‖gⁿ‖* − 2)/n is valid because a geodesic product
/// satisfies ‖g^{n+m}‖* ≥ ‖gⁿ‖* + ‖gᵐ‖* − 2, so ‖gⁿ‖* − 2 is superadditive.
pub fn translation_length_bounds(
    g: &Element,
    max_power: usize,
) -> Result<(Rational64, Rational64)> {
    if !crate::conjugation::is_cyclically_reduced(g) {
        return Err(Error::NotCyclicallyReduced);
    }
    if max_power == 0 {
        return Err(Error::Precondition("max_power must be ≥ 1".into()));
    }
    let mut metric = StarMetric::new(g.graph());
    let mut lower = Rational64::new(0, 1);
    let mut upper = None;
    let mut power = Element::identity(g.graph());
    for n in 1..=max_power {
        power = power.mul(g);
        let s = metric.star_length(&power) as i64;
        let up = Rational64::new(s, n as i64);
        let lo = Rational64::new((s - 2).max(0), n as i64);
        upper = Some(match upper {
            None => up,
            Some(u) if up < u => up,
            Some(u) => u,
        });
        if lo > lower {
            lower = lo;
        }
    }
    let upper = upper.expect("max_power ≥ 1");
    if lower > upper {
        return Err(Error::Internal("translation bounds crossed".into()));
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{el, pbar4, pbar5, pbar6};

    #[test]
    fn star_word_examples() {
        let g5 = pbar5();
        assert!(is_star_word(&el(&g5, "1")));
        assert!(is_star_word(&el(&g5, "v1 v3 v5")));
        assert!(!is_star_word(&el(&g5, "v1 v3 v5 v2 v4")));
    }

    #[test]
    fn star_length_worked_values() {
        let g5 = pbar5();
        assert_eq!(star_length(&el(&g5, "1")), 0);
        assert_eq!(star_length(&el(&g5, "v1 v3 v5 v2 v4")), 2);

        let g6 = pbar6();
        let e = el(&g6, "v1 v2 v3 v4");
        assert_eq!(star_length(&e), 2);
        assert_eq!(star_length(&e.pow(3).unwrap()), 2);
    }

    #[test]
    fn decomposition_witnesses() {
        let g5 = pbar5();
        let e = el(&g5, "v1 v3 v5 v2 v4");
        let d = star_decompose(&e);
        assert_eq!(d.factors.len(), 2);
        let mut product = el(&g5, "1");
        let mut total = 0;
        for (f, v) in &d.factors {
            assert!(f.support().bits() & !g5.star_mask(*v) == 0);
            total += f.word_length();
            product = product.mul(f);
        }
        assert_eq!(product, e);
        assert_eq!(total, e.word_length());
    }

    #[test]
    fn classify_examples() {
        let g4 = pbar4();
        match classify(&el(&g4, "v1 v3")).unwrap() {
            SplitClass::Split { components } => assert_eq!(components.len(), 2),
            other => panic!("expected split, got {other:?}"),
        }
        let g6 = pbar6();
        assert_eq!(
            classify(&el(&g6, "v1 v2 v3 v4")).unwrap(),
            SplitClass::StronglyNonSplit
        );
        // A single generator with a vertex commuting with it from outside.
        match classify(&el(&g6, "v0")).unwrap() {
            SplitClass::NonSplit { commuting_vertex } => {
                assert!(g6.complement().neighbors_mask(0) & (1 << commuting_vertex) == 0);
                assert_ne!(commuting_vertex, 0);
            }
            other => panic!("expected non-split, got {other:?}"),
        }
        assert!(classify(&el(&g6, "1")).is_err());
    }

    #[test]
    fn loxodromy_examples() {
        let g6 = pbar6();
        assert!(!is_loxodromic(&el(&g6, "1")).unwrap());
        assert!(is_loxodromic(&el(&g6, "v1 v2 v3 v4")).unwrap());
        let g4 = pbar4();
        assert!(!is_loxodromic(&el(&g4, "v1 v3")).unwrap());
        // Conjugates of loxodromics stay loxodromic.
        assert!(is_loxodromic(&el(&g6, "v5^-1 v1 v2 v3 v4 v5")).unwrap());
    }

    #[test]
    fn translation_bounds_basics() {
        let g5 = pbar5();
        let one_star = el(&g5, "v1 v3");
        let (lo, hi) = translation_length_bounds(&one_star, 1).unwrap();
        assert_eq!(lo, Rational64::new(0, 1));
        assert_eq!(hi, Rational64::new(1, 1));
        let (_, hi8) = translation_length_bounds(&one_star, 8).unwrap();
        assert!(hi8 <= Rational64::new(1, 1));

        let g6 = pbar6();
        let e = el(&g6, "v1 v2 v3 v4");
        let mut widths = Vec::new();
        for n in 1..=12 {
            let (lo, hi) = translation_length_bounds(&e, n).unwrap();
            assert!(lo <= hi);
            widths.push(hi - lo);
        }
        for w in widths.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        let g4 = pbar4();
        assert!(translation_length_bounds(&el(&g4, "v2^-1 v1 v2"), 4).is_err());
    }
}
