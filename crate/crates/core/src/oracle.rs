//! Independent brute-force reference implementations used by the test
//! suite to certify the main modules on tiny instances.
//!
//! Nothing here shares logic with the main modules: equality, reduction,
//! prefixes and star length are all decided by exhaustive search over the
//! rewriting moves (swap adjacent commuting letters, delete an adjacent
//! inverse pair). Moves never lengthen a word, so the search space from a
//! word is finite, its minimum-length layer is the full set of reduced
//! words of the element, and the lexicographically least of them is an
//! implementation-free canonical form.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::element::{Element, Letter, Sign};
use crate::error::{Error, Result};
use crate::graph::DefiningGraph;

/// Search budgets. Enumeration outputs are complete within budget;
/// exceeding a budget is an error, never a silent truncation.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationBudget {
    pub max_word_length: usize,
    pub max_vertex_count: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_word_length: 12, max_vertex_count: 8 }
    }
}

impl EnumerationBudget {
    fn admit(&self, graph: &DefiningGraph, word_len: usize) -> Result<()> {
        if graph.vertex_count() > self.max_vertex_count {
            return Err(Error::Budget(format!(
                "oracle budget allows at most {} vertices",
                self.max_vertex_count
            )));
        }
        if word_len > self.max_word_length {
            return Err(Error::Budget(format!(
                "oracle budget allows words up to length {}",
                self.max_word_length
            )));
        }
        Ok(())
    }
}

fn pack(word: &[Letter]) -> u128 {
    debug_assert!(word.len() <= 16);
    let mut key = 0u128;
    for &l in word {
        key = key << 8 | (l.code() as u128 + 1);
    }
    key
}

/// All words reachable by commuting swaps and adjacent cancellations.
/// Returns the minimum length and every word of that length (sorted).
fn reachable_minimum(graph: &DefiningGraph, word: &[Letter]) -> (usize, Vec<Vec<Letter>>) {
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    seen.insert(pack(word));
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    queue.push_back(word.to_vec());
    let mut best = word.len();
    let mut minimal: Vec<Vec<Letter>> = vec![word.to_vec()];
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.len().saturating_sub(1) {
            let (a, b) = (cur[i], cur[i + 1]);
            if a.vertex() == b.vertex() && a.sign() != b.sign() {
                let mut next = cur.clone();
                next.drain(i..=i + 1);
                if seen.insert(pack(&next)) {
                    if next.len() < best {
                        best = next.len();
                        minimal.clear();
                    }
                    if next.len() == best {
                        minimal.push(next.clone());
                    }
                    queue.push_back(next);
                }
            } else if a.vertex() != b.vertex() && graph.has_edge(a.vertex(), b.vertex()) {
                let mut next = cur.clone();
                next.swap(i, i + 1);
                if seen.insert(pack(&next)) {
                    if next.len() == best {
                        minimal.push(next.clone());
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    minimal.sort_unstable();
    (best, minimal)
}

/// Minimum length over all words reachable from `word`, together with the
/// lexicographically least reduced word.
pub fn oracle_reduce(
    graph: &DefiningGraph,
    word: &[Letter],
    budget: &EnumerationBudget,
) -> Result<(usize, Vec<Letter>)> {
    budget.admit(graph, word.len())?;
    let (len, minimal) = reachable_minimum(graph, word);
    Ok((len, minimal.into_iter().next().expect("at least the input")))
}

pub fn oracle_word_length(
    graph: &DefiningGraph,
    word: &[Letter],
    budget: &EnumerationBudget,
) -> Result<usize> {
    Ok(oracle_reduce(graph, word, budget)?.0)
}

/// All distinct elements of length ≤ n as oracle-canonical words, built by
/// extending reduced words letter by letter.
pub fn enumerate_elements(
    graph: &DefiningGraph,
    n: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<Letter>>> {
    budget.admit(graph, n)?;
    let letters: Vec<Letter> = (0..graph.vertex_count())
        .flat_map(|v| [Letter::new(v, Sign::Plus), Letter::new(v, Sign::Minus)])
        .collect();
    let mut all: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    seen.insert(pack(&[]));
    for k in 1..=n {
        let mut next = Vec::new();
        for word in &level {
            for &x in &letters {
                let mut candidate = word.clone();
                candidate.push(x);
                let (len, canon) = reachable_minimum(graph, &candidate);
                if len != k {
                    continue;
                }
                let canon = canon.into_iter().next().expect("nonempty");
                if seen.insert(pack(&canon)) {
                    next.push(canon);
                }
            }
        }
        next.sort_unstable();
        all.extend(next.iter().cloned());
        level = next;
    }
    Ok(all)
}

/// Oracle-canonical words of every prefix of the element represented by the
/// reduced word: literal prefixes of every reduced word in the swap orbit.
pub fn oracle_prefix_words(
    graph: &DefiningGraph,
    reduced: &[Letter],
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<Letter>>> {
    budget.admit(graph, reduced.len())?;
    let (len, orbit) = reachable_minimum(graph, reduced);
    debug_assert_eq!(len, reduced.len(), "input word must be reduced");
    let mut out: FxHashSet<u128> = FxHashSet::default();
    let mut words = Vec::new();
    for word in orbit {
        for k in 0..=word.len() {
            let (_, canon) = reachable_minimum(graph, &word[..k]);
            let canon = canon.into_iter().next().expect("nonempty");
            if out.insert(pack(&canon)) {
                words.push(canon);
            }
        }
    }
    words.sort_unstable();
    Ok(words)
}

/// Maximal common prefix by enumerating all prefixes of both sides. There
/// must be exactly one maximal common prefix and every common prefix must
/// divide it; anything else is reported as an internal error.
pub fn oracle_gcd_prefixes(
    a: &Element,
    b: &Element,
    budget: &EnumerationBudget,
) -> Result<Element> {
    a.check_same_graph(b)?;
    let graph = a.graph();
    let pa = oracle_prefix_words(graph, a.canonical_letters(), budget)?;
    let pb: FxHashSet<u128> = oracle_prefix_words(graph, b.canonical_letters(), budget)?
        .iter()
        .map(|w| pack(w))
        .collect();
    let common: Vec<&Vec<Letter>> = pa.iter().filter(|w| pb.contains(&pack(w))).collect();
    let best_len = common.iter().map(|w| w.len()).max().unwrap_or(0);
    let maximal: Vec<_> = common.iter().filter(|w| w.len() == best_len).collect();
    if maximal.len() != 1 {
        return Err(Error::Internal("oracle gcd: maximal common prefix not unique".into()));
    }
    let gcd_word = maximal[0].as_slice();
    // Every common prefix must be a prefix of the maximum.
    let gcd_prefixes: FxHashSet<u128> = oracle_prefix_words(graph, gcd_word, budget)?
        .iter()
        .map(|w| pack(w))
        .collect();
    for w in &common {
        if !gcd_prefixes.contains(&pack(w)) {
            return Err(Error::Internal("oracle gcd: common prefix outside the maximum".into()));
        }
    }
    Element::from_word(graph, &crate::element::Word(gcd_word.to_vec()))
}

fn is_star_word_letters(graph: &DefiningGraph, word: &[Letter]) -> bool {
    let supp = crate::element::support_of(word).bits();
    (0..graph.vertex_count()).any(|v| supp & !graph.star_mask(v) == 0)
}

/// Star length by breadth-first search over geodesic star-word prefixes:
/// from each remainder, divide by every nontrivial prefix that is a star
/// word. Geodesic decompositions suffice because any minimal star
/// decomposition can be made geodesic by transferring cancelled letters.
pub fn oracle_star_length(g: &Element, budget: &EnumerationBudget) -> Result<usize> {
    let graph = g.graph();
    budget.admit(graph, g.word_length())?;
    let (_, start_orbit) = reachable_minimum(graph, g.canonical_letters());
    let start = start_orbit.into_iter().next().expect("nonempty");
    if start.is_empty() {
        return Ok(0);
    }
    let mut dist: FxHashMap<u128, usize> = FxHashMap::default();
    dist.insert(pack(&start), 0);
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&pack(&cur)];
        let (_, orbit) = reachable_minimum(graph, &cur);
        // Collect remainders after dividing by a star-word literal prefix.
        let mut remainders: FxHashSet<u128> = FxHashSet::default();
        let mut rem_words = Vec::new();
        for word in orbit {
            for k in 1..=word.len() {
                if is_star_word_letters(graph, &word[..k]) {
                    let (_, canon) = reachable_minimum(graph, &word[k..]);
                    let canon = canon.into_iter().next().expect("nonempty");
                    if remainders.insert(pack(&canon)) {
                        rem_words.push(canon);
                    }
                }
            }
        }
        for rem in rem_words {
            if rem.is_empty() {
                return Ok(d + 1);
            }
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(pack(&rem)) {
                slot.insert(d + 1);
                queue.push_back(rem);
            }
        }
    }
    Err(Error::Internal("oracle star length: search exhausted".into()))
}

/// One-sided conjugacy verdict from enumerating conjugators up to a cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleConjugacy {
    ConjugateBy(Vec<Letter>),
    /// Not conjugate by any element within the cap; inconclusive beyond it.
    InconclusiveAtCap,
}

pub fn oracle_conjugate(
    a: &Element,
    b: &Element,
    cap: usize,
    budget: &EnumerationBudget,
) -> Result<OracleConjugacy> {
    a.check_same_graph(b)?;
    let graph = a.graph();
    budget.admit(graph, a.word_length().max(b.word_length()))?;
    let (_, b_canon) = reachable_minimum(graph, b.canonical_letters());
    let b_key = pack(&b_canon[0]);
    for c in enumerate_elements(graph, cap, budget)? {
        let mut conjugated: Vec<Letter> = c.iter().rev().map(|l| l.inverse()).collect();
        conjugated.extend_from_slice(a.canonical_letters());
        conjugated.extend_from_slice(&c);
        if conjugated.len() > 16 {
            return Err(Error::Budget("oracle conjugation word exceeds packing width".into()));
        }
        let (_, reduced) = reachable_minimum(graph, &conjugated);
        if pack(&reduced[0]) == b_key {
            return Ok(OracleConjugacy::ConjugateBy(c));
        }
    }
    Ok(OracleConjugacy::InconclusiveAtCap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Word;
    use crate::testutil::{el, pbar4, pbar5};

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    #[test]
    fn reduce_examples() {
        let g4 = pbar4();
        let w = Word::parse(&g4, "v1 v3 v1^-1").unwrap();
        assert_eq!(oracle_word_length(&g4, &w.0, &budget()).unwrap(), 1);
        let reduced = Word::parse(&g4, "v1 v2 v3").unwrap();
        assert_eq!(oracle_word_length(&g4, &reduced.0, &budget()).unwrap(), 3);
        // The canonical word agrees with the main reduction.
        let messy = Word::parse(&g4, "v3 v1 v4 v4^-1 v3^-1 v2").unwrap();
        let (len, canon) = oracle_reduce(&g4, &messy.0, &budget()).unwrap();
        let main = Element::from_word(&g4, &messy).unwrap();
        assert_eq!(len, main.word_length());
        assert_eq!(canon, main.canonical_letters());
    }

    #[test]
    fn enumeration_matches_main() {
        let g4 = pbar4();
        let oracle = enumerate_elements(&g4, 1, &budget()).unwrap();
        assert_eq!(oracle.len(), 9);
        for n in 0..=3 {
            let oracle = enumerate_elements(&g4, n, &budget()).unwrap();
            let main = crate::element::enumerate_elements(&g4, n);
            assert_eq!(oracle.len(), main.len());
        }
    }

    #[test]
    fn gcd_on_small_pairs() {
        let g4 = pbar4();
        let a = el(&g4, "v1 v2");
        let b = el(&g4, "v1 v3");
        assert_eq!(oracle_gcd_prefixes(&a, &b, &budget()).unwrap(), el(&g4, "v1"));
        assert_eq!(oracle_gcd_prefixes(&a, &a, &budget()).unwrap(), a);
    }

    #[test]
    fn star_length_worked_value() {
        let g5 = pbar5();
        let g = el(&g5, "v1 v3 v5 v2 v4");
        assert_eq!(oracle_star_length(&g, &budget()).unwrap(), 2);
        assert_eq!(oracle_star_length(&el(&g5, "1"), &budget()).unwrap(), 0);
        assert_eq!(oracle_star_length(&el(&g5, "v1 v3"), &budget()).unwrap(), 1);
    }

    #[test]
    fn conjugacy_oracle() {
        let g4 = pbar4();
        let a = el(&g4, "v1 v2");
        let c = el(&g4, "v3");
        let b = c.inverse().mul(&a).mul(&c);
        match oracle_conjugate(&a, &b, 1, &budget()).unwrap() {
            OracleConjugacy::ConjugateBy(w) => {
                assert_eq!(w, c.canonical_letters());
            }
            OracleConjugacy::InconclusiveAtCap => panic!("should find the conjugator"),
        }
        assert_eq!(
            oracle_conjugate(&el(&g4, "v1"), &el(&g4, "v2"), 2, &budget()).unwrap(),
            OracleConjugacy::InconclusiveAtCap
        );
    }

    #[test]
    fn budget_guards() {
        let g4 = pbar4();
        let long = Word(vec![Letter::new(0, Sign::Plus); 13]);
        assert!(matches!(
            oracle_word_length(&g4, &long.0, &budget()),
            Err(Error::Budget(_))
        ));
    }
}
