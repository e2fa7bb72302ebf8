//! Prefix and suffix partial orders and their gcd/lcm operations.
//!
//! The gcd of two elements always exists and is computed by peeling common
//! starting letters. The lcm exists iff after dividing out the gcd the two
//! remainders disjointly commute, in which case it is their product over the
//! gcd. Constrained maximal prefixes (support inside a vertex set, or
//! disjointly commuting with a fixed element) are computed by a single
//! forward scan; both candidate families are prefix-closed and closed under
//! the two-letter extension rule, hence lcm-closed with a unique maximum
//! that greedy peeling reaches.

use crate::element::{Element, Letter};
use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexSet};

/// g1 ≤_L g, tested via the length identity ‖g1⁻¹g‖ = ‖g‖ − ‖g1‖.
pub fn is_prefix(a: &Element, g: &Element) -> Result<bool> {
    a.check_same_graph(g)?;
    if a.word_length() > g.word_length() {
        return Ok(false);
    }
    Ok(a.inverse().mul(g).word_length() == g.word_length() - a.word_length())
}

/// g1 ≤_R g.
pub fn is_suffix(a: &Element, g: &Element) -> Result<bool> {
    a.check_same_graph(g)?;
    if a.word_length() > g.word_length() {
        return Ok(false);
    }
    Ok(g.mul(&a.inverse()).word_length() == g.word_length() - a.word_length())
}

fn starting_code_set(e: &Element) -> u128 {
    let mut bits = 0u128;
    for l in e.starting_letters() {
        bits |= 1 << l.code();
    }
    bits
}

/// Maximal common prefix, by peeling common starting letters.
pub fn gcd_left(a: &Element, b: &Element) -> Result<Element> {
    a.check_same_graph(b)?;
    let graph = a.graph();
    let mut x = a.clone();
    let mut y = b.clone();
    let mut acc: Vec<Letter> = Vec::new();
    loop {
        let common = starting_code_set(&x) & starting_code_set(&y);
        if common == 0 {
            break;
        }
        let code = common.trailing_zeros() as usize;
        let l = Letter::new(code >> 1, if code & 1 == 0 { crate::element::Sign::Plus } else { crate::element::Sign::Minus });
        acc.push(l);
        x = x.left_divide_by_letter(l).expect("common starting letter divides");
        y = y.left_divide_by_letter(l).expect("common starting letter divides");
    }
    Ok(Element::from_reduced(graph, acc))
}

/// Maximal common suffix.
pub fn gcd_right(a: &Element, b: &Element) -> Result<Element> {
    Ok(gcd_left(&a.inverse(), &b.inverse())?.inverse())
}

/// Least common right multiple, or `None` when no common right multiple
/// exists. When it exists its support is the union of the supports.
pub fn lcm_left(a: &Element, b: &Element) -> Result<Option<Element>> {
    let g0 = gcd_left(a, b)?;
    let ap = g0.inverse().mul(a);
    let bp = g0.inverse().mul(b);
    if ap.disjointly_commutes(&bp)? {
        Ok(Some(g0.mul(&ap).mul(&bp)))
    } else {
        Ok(None)
    }
}

/// Least common left multiple, or `None`.
pub fn lcm_right(a: &Element, b: &Element) -> Result<Option<Element>> {
    let g0 = gcd_right(a, b)?;
    let ap = a.mul(&g0.inverse());
    let bp = b.mul(&g0.inverse());
    if ap.disjointly_commutes(&bp)? {
        Ok(Some(ap.mul(&bp).mul(&g0)))
    } else {
        Ok(None)
    }
}

/// One forward scan splitting a reduced word into the maximal prefix with
/// vertices inside `allowed` and the complementary remainder. A position is
/// taken iff its vertex is allowed and every earlier non-taken letter
/// commutes with it.
pub(crate) fn max_prefix_split_word(
    graph: &DefiningGraph,
    word: &[Letter],
    allowed: u64,
) -> (Vec<Letter>, Vec<Letter>) {
    let mut taken = Vec::new();
    let mut rest = Vec::new();
    let mut blocked = 0u64;
    for &l in word {
        let bit = 1u64 << l.vertex();
        if allowed & bit != 0 && blocked & bit == 0 {
            taken.push(l);
        } else {
            rest.push(l);
            blocked |= !graph.neighbors_mask(l.vertex());
        }
    }
    (taken, rest)
}

/// The unique maximal p ≤_L g with supp(p) ⊆ X.
pub fn max_prefix_supported_in(g: &Element, x: VertexSet) -> Result<Element> {
    let graph = g.graph();
    if x.bits() & !graph.full_mask() != 0 {
        return Err(Error::UnknownVertex("vertex index out of range".into()));
    }
    let (taken, _) = max_prefix_split_word(graph, g.canonical_letters(), x.bits());
    Ok(Element::from_reduced(graph, taken))
}

/// The unique maximal p ≤_L g with p ⟂ h.
pub fn max_prefix_disjointly_commuting(g: &Element, h: &Element) -> Result<Element> {
    g.check_same_graph(h)?;
    let graph = g.graph();
    let hs = h.support();
    // Vertices that individually disjointly commute with h.
    let mut allowed = 0u64;
    for v in 0..graph.vertex_count() {
        if !hs.contains(v) && hs.bits() & !graph.neighbors_mask(v) == 0 {
            allowed |= 1 << v;
        }
    }
    let (taken, _) = max_prefix_split_word(graph, g.canonical_letters(), allowed);
    Ok(Element::from_reduced(graph, taken))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::prefixes;
    use crate::testutil::{el, pbar4};

    #[test]
    fn prefix_basics() {
        let g = pbar4();
        let id = el(&g, "1");
        let e = el(&g, "v1 v2 v3");
        assert!(is_prefix(&id, &e).unwrap());
        assert!(is_prefix(&e, &e).unwrap());
        assert!(is_prefix(&el(&g, "v1"), &e).unwrap());
        assert!(!is_prefix(&el(&g, "v2"), &e).unwrap());
        assert!(is_suffix(&el(&g, "v3"), &e).unwrap());
        assert!(!is_suffix(&el(&g, "v1"), &e).unwrap());
    }

    #[test]
    fn worked_prefix_example() {
        let g = pbar4();
        let gg = el(&g, "v1 v1 v2 v3 v4");
        let u = el(&g, "v1 v1 v2 v3 v1 v1 v2 v1");
        assert!(is_prefix(&u, &gg.pow(3).unwrap()).unwrap());
        assert!(!is_prefix(&u, &gg.pow(2).unwrap()).unwrap());
        assert!(!is_prefix(&gg, &u).unwrap());
    }

    #[test]
    fn gcd_examples() {
        let g = pbar4();
        let id = el(&g, "1");
        let a = el(&g, "v1 v2");
        let b = el(&g, "v1 v3");
        assert_eq!(gcd_left(&a, &id).unwrap(), id);
        assert_eq!(gcd_left(&a, &b).unwrap(), el(&g, "v1"));
        assert_eq!(gcd_left(&a, &a).unwrap(), a);
        // gcd_left(a,b)⁻¹ = gcd_right(a⁻¹, b⁻¹)
        assert_eq!(
            gcd_left(&a, &b).unwrap().inverse(),
            gcd_right(&a.inverse(), &b.inverse()).unwrap()
        );
    }

    #[test]
    fn lcm_examples() {
        let g = pbar4();
        let v1 = el(&g, "v1");
        let v2 = el(&g, "v2");
        let v3 = el(&g, "v3");
        assert_eq!(lcm_left(&v1, &v3).unwrap(), Some(el(&g, "v1 v3")));
        assert_eq!(lcm_left(&v1, &v2).unwrap(), None);
        assert_eq!(lcm_left(&v1, &v1).unwrap(), Some(v1.clone()));
        let l = lcm_left(&v1, &v3).unwrap().unwrap();
        assert_eq!(l.support(), v1.support().union(v3.support()));
    }

    #[test]
    fn max_prefix_supported() {
        let g = pbar4();
        let e = el(&g, "v1 v2 v3 v4");
        let st4 = g.star_by_name("v4").unwrap();
        assert_eq!(max_prefix_supported_in(&e, st4).unwrap(), el(&g, "v1 v2"));
        assert_eq!(max_prefix_supported_in(&e, g.full_set()).unwrap(), e);
        assert_eq!(max_prefix_supported_in(&e, VertexSet::EMPTY).unwrap(), el(&g, "1"));
    }

    #[test]
    fn max_prefix_supported_is_maximal_among_all_prefixes() {
        let g = pbar4();
        let e = el(&g, "v1 v2 v3 v4");
        let x = g.star_by_name("v4").unwrap();
        let p = max_prefix_supported_in(&e, x).unwrap();
        for q in prefixes(&e) {
            if q.support().is_subset(x) {
                assert!(is_prefix(&q, &p).unwrap());
            }
        }
    }

    #[test]
    fn max_prefix_disjointly_commuting_examples() {
        let g = pbar4();
        let id = el(&g, "1");
        let e = el(&g, "v3 v2");
        assert_eq!(max_prefix_disjointly_commuting(&e, &id).unwrap(), e);
        assert_eq!(
            max_prefix_disjointly_commuting(&e, &el(&g, "v1")).unwrap(),
            el(&g, "v3")
        );
        assert_eq!(
            max_prefix_disjointly_commuting(&el(&g, "v2 v1"), &el(&g, "v1 v2")).unwrap(),
            id
        );
    }
}
