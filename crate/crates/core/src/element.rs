//! Letters, words, and group elements in canonical reduced form.
//!
//! An element is stored as the lexicographically least reduced word over the
//! letter order (vertex order first, positive before negative at the same
//! vertex). Two elements are equal iff their canonical words coincide.
//!
//! Reduction runs in two stages. A stack scan deletes cancelling pairs: an
//! incoming letter searches backwards past commuting letters for its inverse.
//! The result is some reduced word. Canonicalization then repeatedly emits
//! the least letter of the current starting set and left-divides by it; the
//! starting set is exactly the set of possible first letters of reduced
//! words, so the greedy emission is well defined and order-canonical.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexSet};

/// Sign of a letter. `Plus` sorts before `Minus`, which fixes the canonical
/// letter order together with the vertex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A generator or inverse generator, identified by vertex index and sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    vertex: u8,
    sign: Sign,
}

impl Letter {
    pub fn new(vertex: usize, sign: Sign) -> Letter {
        debug_assert!(vertex < crate::graph::MAX_VERTICES);
        Letter { vertex: vertex as u8, sign }
    }

    pub fn vertex(self) -> usize {
        self.vertex as usize
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn inverse(self) -> Letter {
        Letter { vertex: self.vertex, sign: self.sign.flip() }
    }

    /// Identifier usable as a bit index in a letter bitset.
    pub fn code(self) -> usize {
        (self.vertex as usize) << 1 | (self.sign == Sign::Minus) as usize
    }

    pub fn display(self, graph: &DefiningGraph) -> String {
        match self.sign {
            Sign::Plus => graph.vertex_name(self.vertex()).to_owned(),
            Sign::Minus => format!("{}^-1", graph.vertex_name(self.vertex())),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}", self.vertex),
            Sign::Minus => write!(f, "{}'", self.vertex),
        }
    }
}

/// A finite, possibly non-reduced sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    /// Parses whitespace-separated tokens `<name>` or `<name>^-1`.
    /// The token `1` stands for the identity and contributes no letter.
    pub fn parse(graph: &DefiningGraph, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for (index, token) in text.split_whitespace().enumerate() {
            if token == "1" {
                continue;
            }
            let (name, sign) = match token.strip_suffix("^-1") {
                Some(base) => (base, Sign::Minus),
                None => (token, Sign::Plus),
            };
            let v = graph.vertex_index(name).ok_or_else(|| Error::WordParse {
                index,
                msg: format!("unknown vertex `{name}`"),
            })?;
            letters.push(Letter::new(v, sign));
        }
        Ok(Word(letters))
    }

    pub fn display(&self, graph: &DefiningGraph) -> String {
        if self.0.is_empty() {
            return "1".to_owned();
        }
        self.0
            .iter()
            .map(|l| l.display(graph))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Deletes cancelling pairs with a backwards stack scan. Output is reduced.
pub(crate) fn stack_reduce(graph: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    'next: for &x in letters {
        let mut j = out.len();
        while j > 0 {
            j -= 1;
            let y = out[j];
            if y.vertex == x.vertex {
                if y.sign != x.sign {
                    out.remove(j);
                } else {
                    out.push(x);
                }
                continue 'next;
            }
            if !graph.has_edge(y.vertex(), x.vertex()) {
                out.push(x);
                continue 'next;
            }
        }
        out.push(x);
    }
    out
}

/// Starting letters of a reduced word: the first occurrence of a vertex
/// qualifies iff every earlier letter commutes with it. Sorted.
pub(crate) fn starting_letters_word(graph: &DefiningGraph, word: &[Letter]) -> Vec<Letter> {
    let mut alive = graph.full_mask();
    let mut seen = 0u64;
    let mut out = Vec::new();
    for &l in word {
        let bit = 1u64 << l.vertex;
        if alive & bit != 0 && seen & bit == 0 {
            out.push(l);
        }
        seen |= bit;
        alive &= graph.neighbors_mask(l.vertex());
        if alive == 0 {
            break;
        }
    }
    out.sort_unstable();
    out
}

/// Removes the first visible occurrence of starting letter `x`. Returns
/// `None` when `x` is not a starting letter.
pub(crate) fn left_divide_word(
    graph: &DefiningGraph,
    word: &[Letter],
    x: Letter,
) -> Option<Vec<Letter>> {
    for (i, &l) in word.iter().enumerate() {
        if l == x {
            let mut out = Vec::with_capacity(word.len() - 1);
            out.extend_from_slice(&word[..i]);
            out.extend_from_slice(&word[i + 1..]);
            return Some(out);
        }
        if l.vertex == x.vertex || !graph.has_edge(l.vertex(), x.vertex()) {
            return None;
        }
    }
    None
}

/// Lexicographically least reduced word equivalent to the reduced input.
pub(crate) fn lex_canonicalize(graph: &DefiningGraph, mut rest: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut alive = graph.full_mask();
        let mut seen = 0u64;
        let mut best: Option<(Letter, usize)> = None;
        for (i, &l) in rest.iter().enumerate() {
            let bit = 1u64 << l.vertex;
            if alive & bit != 0 && seen & bit == 0 && best.is_none_or(|(b, _)| l < b) {
                best = Some((l, i));
            }
            seen |= bit;
            alive &= graph.neighbors_mask(l.vertex());
            if alive == 0 {
                break;
            }
        }
        let (_, idx) = best.expect("nonempty reduced word has a starting letter");
        out.push(rest.remove(idx));
    }
    out
}

pub(crate) fn support_of(word: &[Letter]) -> VertexSet {
    let mut bits = 0u64;
    for l in word {
        bits |= 1 << l.vertex;
    }
    VertexSet::from_bits(bits)
}

/// Reduced (not canonicalized) word of the concatenation. Cheaper than a
/// full multiplication when only lengths or prefix tests are needed.
pub(crate) fn reduce_concat(graph: &DefiningGraph, parts: &[&[Letter]]) -> Vec<Letter> {
    let total = parts.iter().map(|p| p.len()).sum();
    let mut out: Vec<Letter> = Vec::with_capacity(total);
    for part in parts {
        'next: for &x in part.iter() {
            let mut j = out.len();
            while j > 0 {
                j -= 1;
                let y = out[j];
                if y.vertex == x.vertex {
                    if y.sign != x.sign {
                        out.remove(j);
                    } else {
                        out.push(x);
                    }
                    continue 'next;
                }
                if !graph.has_edge(y.vertex(), x.vertex()) {
                    out.push(x);
                    continue 'next;
                }
            }
            out.push(x);
        }
    }
    out
}

pub(crate) fn inverse_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Prefix test on raw reduced words: p ≤_L e iff ‖p⁻¹e‖ = ‖e‖ − ‖p‖.
pub(crate) fn is_prefix_word(graph: &DefiningGraph, p: &[Letter], e: &[Letter]) -> bool {
    if p.len() > e.len() {
        return false;
    }
    let inv = inverse_word(p);
    reduce_concat(graph, &[&inv, e]).len() == e.len() - p.len()
}

/// A group element held in canonical reduced form over a shared graph.
#[derive(Clone)]
pub struct Element {
    graph: Arc<DefiningGraph>,
    canon: Vec<Letter>,
}

impl Element {
    pub fn identity(graph: &Arc<DefiningGraph>) -> Element {
        Element { graph: Arc::clone(graph), canon: Vec::new() }
    }

    pub fn generator(graph: &Arc<DefiningGraph>, vertex: usize, sign: Sign) -> Result<Element> {
        if vertex >= graph.vertex_count() {
            return Err(Error::UnknownVertex(format!("index {vertex}")));
        }
        Ok(Element {
            graph: Arc::clone(graph),
            canon: vec![Letter::new(vertex, sign)],
        })
    }

    /// Reduces and canonicalizes an arbitrary word.
    pub fn from_word(graph: &Arc<DefiningGraph>, word: &Word) -> Result<Element> {
        for l in &word.0 {
            if l.vertex() >= graph.vertex_count() {
                return Err(Error::UnknownVertex(format!("letter over index {}", l.vertex())));
            }
        }
        let reduced = stack_reduce(graph, &word.0);
        Ok(Element {
            graph: Arc::clone(graph),
            canon: lex_canonicalize(graph, reduced),
        })
    }

    pub fn parse(graph: &Arc<DefiningGraph>, text: &str) -> Result<Element> {
        Self::from_word(graph, &Word::parse(graph, text)?)
    }

    /// Wraps a word already known to be reduced (still canonicalizes).
    pub(crate) fn from_reduced(graph: &Arc<DefiningGraph>, reduced: Vec<Letter>) -> Element {
        Element {
            graph: Arc::clone(graph),
            canon: lex_canonicalize(graph, reduced),
        }
    }

    pub(crate) fn from_canonical(graph: &Arc<DefiningGraph>, canon: Vec<Letter>) -> Element {
        Element { graph: Arc::clone(graph), canon }
    }

    pub fn graph(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn canonical_letters(&self) -> &[Letter] {
        &self.canon
    }

    pub fn word_length(&self) -> usize {
        self.canon.len()
    }

    pub fn is_identity(&self) -> bool {
        self.canon.is_empty()
    }

    pub fn support(&self) -> VertexSet {
        support_of(&self.canon)
    }

    pub fn same_graph(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    pub(crate) fn check_same_graph(&self, other: &Element) -> Result<()> {
        if self.same_graph(other) {
            Ok(())
        } else {
            Err(Error::MixedGraphs)
        }
    }

    /// Letters x with x ≤_L self, sorted by the canonical letter order.
    pub fn starting_letters(&self) -> Vec<Letter> {
        starting_letters_word(&self.graph, &self.canon)
    }

    /// Letters x with x ≤_R self.
    pub fn ending_letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = self
            .inverse()
            .starting_letters()
            .into_iter()
            .map(Letter::inverse)
            .collect();
        out.sort_unstable();
        out
    }

    /// Group product. Panics on mixed graphs; see [`Element::multiply`] for
    /// the checked variant.
    pub fn mul(&self, other: &Element) -> Element {
        assert!(self.same_graph(other), "elements over different graphs");
        let mut joined = Vec::with_capacity(self.canon.len() + other.canon.len());
        joined.extend_from_slice(&self.canon);
        joined.extend_from_slice(&other.canon);
        let reduced = stack_reduce(&self.graph, &joined);
        Element::from_reduced(&self.graph, reduced)
    }

    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_same_graph(other)?;
        Ok(self.mul(other))
    }

    pub fn inverse(&self) -> Element {
        let reversed: Vec<Letter> = self.canon.iter().rev().map(|l| l.inverse()).collect();
        Element::from_reduced(&self.graph, reversed)
    }

    /// Integer power by iterated multiplication; exponent overflow on
    /// negation is reported rather than wrapped.
    pub fn pow(&self, n: i64) -> Result<Element> {
        if n == 0 {
            return Ok(Element::identity(&self.graph));
        }
        let (base, count) = if n < 0 {
            let count = n.checked_neg().ok_or_else(|| {
                Error::Precondition("exponent overflow".into())
            })?;
            (self.inverse(), count)
        } else {
            (self.clone(), n)
        };
        let mut acc = base.clone();
        for _ in 1..count {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn disjointly_commutes(&self, other: &Element) -> Result<bool> {
        self.check_same_graph(other)?;
        let sa = self.support();
        let sb = other.support();
        if !sa.intersection(sb).is_empty() {
            return Ok(false);
        }
        for v in sa.iter() {
            if sb.bits() & !self.graph.neighbors_mask(v) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn left_divide_by_letter(&self, x: Letter) -> Option<Element> {
        left_divide_word(&self.graph, &self.canon, x)
            .map(|rest| Element::from_reduced(&self.graph, rest))
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon && self.same_graph(other)
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

/// Length-lexicographic order on canonical words. Only meaningful between
/// elements of the same graph.
impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canon
            .len()
            .cmp(&other.canon.len())
            .then_with(|| self.canon.cmp(&other.canon))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.canon.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for l in &self.canon {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", l.display(&self.graph))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

impl std::ops::Mul for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        Element::mul(self, rhs)
    }
}

/// True iff the product of `parts` has word length equal to the sum of the
/// parts' word lengths.
pub fn is_geodesic(parts: &[Element]) -> Result<bool> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("is_geodesic needs a nonempty list".into()))?;
    let mut product = first.clone();
    let mut total = first.word_length();
    for p in &parts[1..] {
        first.check_same_graph(p)?;
        product = product.mul(p);
        total += p.word_length();
    }
    Ok(product.word_length() == total)
}

fn pack16(word: &[Letter]) -> Option<u128> {
    if word.len() > 16 {
        return None;
    }
    let mut key = 0u128;
    for &l in word {
        key = key << 8 | (l.code() as u128 + 1);
    }
    Some(key)
}

/// All distinct elements of word length ≤ `max_len`, in length-lex order.
pub fn enumerate_elements(graph: &Arc<DefiningGraph>, max_len: usize) -> Vec<Element> {
    let n = graph.vertex_count();
    let letters: Vec<Letter> = (0..n)
        .flat_map(|v| [Letter::new(v, Sign::Plus), Letter::new(v, Sign::Minus)])
        .collect();
    let mut all = vec![Element::identity(graph)];
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut seen_packed: FxHashSet<u128> = FxHashSet::default();
    let mut seen_long: FxHashSet<Vec<Letter>> = FxHashSet::default();
    seen_packed.insert(pack16(&[]).unwrap());
    for _k in 1..=max_len {
        let mut next = Vec::new();
        for word in &level {
            // A canonical word extended by one letter stays reduced iff the
            // backwards scan finds no cancelling partner.
            for &x in &letters {
                let mut cancels = false;
                let mut j = word.len();
                while j > 0 {
                    j -= 1;
                    let y = word[j];
                    if y.vertex() == x.vertex() {
                        cancels = y.sign() != x.sign();
                        break;
                    }
                    if !graph.has_edge(y.vertex(), x.vertex()) {
                        break;
                    }
                }
                if cancels {
                    continue;
                }
                let mut extended = word.clone();
                extended.push(x);
                let canon = lex_canonicalize(graph, extended);
                let fresh = match pack16(&canon) {
                    Some(key) => seen_packed.insert(key),
                    None => seen_long.insert(canon.clone()),
                };
                if fresh {
                    next.push(canon);
                }
            }
        }
        next.sort_unstable();
        all.extend(next.iter().map(|w| Element::from_canonical(graph, w.clone())));
        level = next;
    }
    all
}

/// All prefixes of `e` in the ≤_L order, including 1 and `e` itself.
pub fn prefixes(e: &Element) -> Vec<Element> {
    let graph = e.graph();
    let mut seen: FxHashSet<Vec<Letter>> = FxHashSet::default();
    seen.insert(Vec::new());
    let mut out = Vec::new();
    let mut queue = vec![(Element::identity(graph), e.clone())];
    while let Some((prefix, rest)) = queue.pop() {
        out.push(prefix.clone());
        for x in rest.starting_letters() {
            let mut word = prefix.canonical_letters().to_vec();
            word.push(x);
            let canon = lex_canonicalize(graph, word);
            if seen.insert(canon.clone()) {
                let next_rest = rest
                    .left_divide_by_letter(x)
                    .expect("starting letter divides");
                queue.push((Element::from_canonical(graph, canon), next_rest));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Random element obtained by reducing a uniform random word of the given
/// length. The result may be shorter than `len`.
pub fn random_reduced<R: Rng>(graph: &Arc<DefiningGraph>, rng: &mut R, len: usize) -> Element {
    let n = graph.vertex_count();
    let word: Vec<Letter> = (0..len)
        .map(|_| {
            let v = rng.random_range(0..n);
            let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
            Letter::new(v, sign)
        })
        .collect();
    Element::from_word(graph, &Word(word)).expect("letters are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{el, pbar4, pbar5};

    #[test]
    fn empty_word_is_identity() {
        let g = pbar4();
        let e = Element::parse(&g, "").unwrap();
        assert!(e.is_identity());
        assert_eq!(e.word_length(), 0);
        assert_eq!(e.to_string(), "1");
        assert_eq!(Element::parse(&g, "1").unwrap(), e);
    }

    #[test]
    fn commuting_cancellation_fires() {
        let g = pbar4();
        assert_eq!(el(&g, "v1 v3 v1^-1"), el(&g, "v3"));
    }

    #[test]
    fn paper_square_identity() {
        let g = pbar5();
        assert_eq!(el(&g, "v2 v3 v4 v2 v3 v4"), el(&g, "v2 v3 v2 v4 v3 v4"));
    }

    #[test]
    fn multiply_and_inverse() {
        let g = pbar4();
        let a = el(&g, "v1 v2 v3^-1");
        assert!(a.mul(&a.inverse()).is_identity());
        assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn power_of_cyclically_reduced_is_geodesic() {
        let g = pbar4();
        let a = el(&g, "v1 v1 v2 v3 v4");
        assert_eq!(a.pow(3).unwrap().word_length(), 15);
        assert!(a.pow(0).unwrap().is_identity());
        assert_eq!(a.pow(-2).unwrap(), a.inverse().pow(2).unwrap());
    }

    #[test]
    fn starting_letter_examples() {
        let g = pbar4();
        let s = el(&g, "v1 v2").starting_letters();
        assert_eq!(s, vec![Letter::new(0, Sign::Plus)]);
        let s = el(&g, "v1 v3").starting_letters();
        assert_eq!(s, vec![Letter::new(0, Sign::Plus), Letter::new(2, Sign::Plus)]);
        assert!(el(&g, "1").starting_letters().is_empty());
    }

    #[test]
    fn ending_letters_flip() {
        let g = pbar4();
        let e = el(&g, "v1 v2");
        assert_eq!(e.ending_letters(), vec![Letter::new(1, Sign::Plus)]);
        let e = el(&g, "v2 v1^-1");
        assert_eq!(e.ending_letters(), vec![Letter::new(0, Sign::Minus)]);
    }

    #[test]
    fn disjoint_commutation() {
        let g = pbar4();
        let one = el(&g, "1");
        let v1 = el(&g, "v1");
        let v2 = el(&g, "v2");
        let v3 = el(&g, "v3");
        assert!(one.disjointly_commutes(&v1).unwrap());
        assert!(v1.disjointly_commutes(&v3).unwrap());
        assert!(!v1.disjointly_commutes(&v2).unwrap());
        assert!(!v1.disjointly_commutes(&v1).unwrap());
    }

    #[test]
    fn geodesic_tests() {
        let g = pbar4();
        let id = el(&g, "1");
        let a = el(&g, "v1 v2");
        let b = el(&g, "v2^-1");
        assert!(!is_geodesic(&[a.clone(), b]).unwrap());
        assert!(is_geodesic(&[a.clone(), id.clone(), el(&g, "v3")]).unwrap());
        assert!(is_geodesic(&[
            el(&g, "v1 v1 v2 v3"),
            el(&g, "v1 v1 v2"),
            el(&g, "v1")
        ])
        .unwrap());
        assert!(is_geodesic(&[]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let g = pbar4();
        assert_eq!(enumerate_elements(&g, 0).len(), 1);
        assert_eq!(enumerate_elements(&g, 1).len(), 9);
        let n2 = enumerate_elements(&g, 2).len();
        let n3 = enumerate_elements(&g, 3).len();
        assert!(n2 < n3);
    }

    #[test]
    fn prefix_enumeration() {
        let g = pbar4();
        let e = el(&g, "v1 v2");
        let ps = prefixes(&e);
        assert_eq!(ps, vec![el(&g, "1"), el(&g, "v1"), el(&g, "v1 v2")]);
        let e = el(&g, "v1 v3");
        assert_eq!(ps.len(), 3);
        assert_eq!(prefixes(&e).len(), 4);
    }

    #[test]
    fn display_round_trip() {
        let g = pbar5();
        let e = el(&g, "v2 v3 v4 v2^-1 v3 v4^-1");
        let back = Element::parse(&g, &e.to_string()).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn mixed_graph_rejected() {
        let g1 = pbar4();
        let g2 = pbar5();
        let a = el(&g1, "v1");
        let b = el(&g2, "v1");
        assert!(a.multiply(&b).is_err());
    }
}
