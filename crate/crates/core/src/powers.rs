//! Structure of prefixes of powers of cyclically reduced elements: the
//! prefix ladder against successive powers, the interlocking decomposition
//! it induces for a proper power prefix, normalization of such a prefix as
//! gᵏ·a with small star length, and the star-length growth report.

use crate::conjugation::is_cyclically_reduced;
use crate::element::{is_geodesic, Element};
use crate::error::{Error, Result};
use crate::lattice::{gcd_left, is_prefix, is_suffix};
use crate::star::{classify, star_length, SplitClass, StarMetric};

/// Rungs a_k, b_k with g = a_k·b_k geodesic and u ∧_L gᵏ = a_1⋯a_k.
/// The a-chain descends in ≤_L, the b-chain ascends in ≤_R, and
/// a_{k+1} ⟂ b_j for j ≤ k.
#[derive(Debug, Clone)]
pub struct PrefixLadder {
    pub a: Vec<Element>,
    pub b: Vec<Element>,
}

pub fn prefix_ladder(g: &Element, u: &Element, m: usize) -> Result<PrefixLadder> {
    if !is_cyclically_reduced(g) {
        return Err(Error::NotCyclicallyReduced);
    }
    g.check_same_graph(u)?;
    if m == 0 {
        return Err(Error::Precondition("ladder length must be ≥ 1".into()));
    }
    let internal = |msg: &str| Error::Internal(format!("prefix ladder: {msg}"));
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut power = Element::identity(g.graph());
    let mut prev = Element::identity(g.graph());
    for _ in 1..=m {
        power = power.mul(g);
        let acc = gcd_left(u, &power)?;
        let ak = prev.inverse().mul(&acc);
        if prev.word_length() + ak.word_length() != acc.word_length() {
            return Err(internal("gcd chain is not ascending"));
        }
        let bk = ak.inverse().mul(g);
        if ak.word_length() + bk.word_length() != g.word_length() {
            return Err(internal("rung is not geodesic"));
        }
        a.push(ak);
        b.push(bk);
        prev = acc;
    }
    for (low, high) in a.iter().zip(a.iter().skip(1)) {
        if !is_prefix(high, low)? {
            return Err(internal("a-chain not descending"));
        }
    }
    for (low, high) in b.iter().zip(b.iter().skip(1)) {
        if !is_suffix(low, high)? {
            return Err(internal("b-chain not ascending"));
        }
    }
    for (k, ak) in a.iter().enumerate().skip(1) {
        for bj in &b[..k] {
            if !ak.disjointly_commutes(bj)? {
                return Err(internal("a_{k+1} does not commute with b_k"));
            }
        }
    }
    Ok(PrefixLadder { a, b })
}

/// Geodesic factorization g = g_m ⋯ g_1 g_0 induced by a proper prefix u of
/// gᵐ. Parts are stored from g_m down to g_0; parts two or more apart
/// disjointly commute, and u is reconstructed as
/// (g_m⋯g_1)(g_m⋯g_2)⋯(g_m).
#[derive(Debug, Clone)]
pub struct PowerPrefixDecomposition {
    /// g_m, g_{m−1}, …, g_0.
    pub parts: Vec<Element>,
    /// The minimal exponent with u ≤_L gᵐ.
    pub m: usize,
    /// The complementary factor with gᵐ = u·complement geodesic.
    pub complement: Element,
}

impl PowerPrefixDecomposition {
    /// g_k, indexed as in the factorization g = g_m ⋯ g_0.
    pub fn part(&self, k: usize) -> &Element {
        &self.parts[self.m - k]
    }
}

/// Decomposes g along a prefix u of gᵐ with g ≰_L u. The exponent is
/// recomputed internally as the minimal m with u ≤_L gᵐ; the caller's `m`
/// only bounds the search.
pub fn power_prefix_decompose(
    g: &Element,
    u: &Element,
    m: usize,
) -> Result<PowerPrefixDecomposition> {
    if !is_cyclically_reduced(g) {
        return Err(Error::NotCyclicallyReduced);
    }
    g.check_same_graph(u)?;
    if g.is_identity() {
        return Err(Error::Precondition("base element must be nontrivial".into()));
    }
    if matches!(classify(g)?, SplitClass::Split { .. }) {
        return Err(Error::Precondition("base element must be non-split".into()));
    }
    if m < 2 {
        return Err(Error::Precondition("exponent bound must be ≥ 2".into()));
    }
    if is_prefix(g, u)? {
        return Err(Error::Precondition("g must not be a prefix of u".into()));
    }
    let mut power = Element::identity(g.graph());
    let mut minimal = None;
    for k in 1..=m {
        power = power.mul(g);
        if is_prefix(u, &power)? {
            minimal = Some(k);
            break;
        }
    }
    let mm = match minimal {
        None => return Err(Error::Precondition(format!("u is not a prefix of g^{m}"))),
        Some(1) => {
            return Err(Error::Precondition(
                "u is a prefix of g itself; the minimal exponent must be ≥ 2".into(),
            ))
        }
        Some(k) => k,
    };

    let ladder = prefix_ladder(g, u, mm)?;
    let internal = |msg: &str| Error::Internal(format!("power prefix decomposition: {msg}"));
    // g_0 = b_1 and g_k = a_{k+1}⁻¹ a_k with a_{m+1} = 1.
    let mut parts_desc = Vec::with_capacity(mm + 1);
    parts_desc.push(ladder.a[mm - 1].clone());
    for k in (1..mm).rev() {
        parts_desc.push(ladder.a[k].inverse().mul(&ladder.a[k - 1]));
    }
    parts_desc.push(ladder.b[0].clone());

    for part in &parts_desc {
        if part.is_identity() {
            return Err(internal("trivial part"));
        }
    }
    if !is_geodesic(&parts_desc)? || parts_desc.iter().fold(Element::identity(g.graph()), |p, q| p.mul(q)) != *g {
        return Err(internal("parts do not factor g geodesically"));
    }
    let mm_local = mm;
    for i in 0..=mm_local {
        for j in 0..=mm_local {
            // parts_desc[idx] holds g_{m−idx}.
            let gi = mm_local - i;
            let gj = mm_local - j;
            if gi > gj && gi - gj >= 2 && !parts_desc[i].disjointly_commutes(&parts_desc[j])? {
                return Err(internal("distant parts do not disjointly commute"));
            }
        }
    }
    // Reconstruction u = (g_m⋯g_1)(g_m⋯g_2)⋯(g_m).
    let mut rebuilt = Element::identity(g.graph());
    let mut total = 0usize;
    for k in 1..=mm_local {
        let chunk = parts_desc[..=(mm_local - k)]
            .iter()
            .fold(Element::identity(g.graph()), |p, q| p.mul(q));
        total += chunk.word_length();
        rebuilt = rebuilt.mul(&chunk);
    }
    if rebuilt != *u || total != u.word_length() {
        return Err(internal("prefix reconstruction failed"));
    }
    // Complement u' = (g_0)(g_1 g_0)⋯(g_{m−1}⋯g_0) with gᵐ = u·u' geodesic.
    let mut complement = Element::identity(g.graph());
    for k in 0..mm_local {
        let chunk = parts_desc[(mm_local - k)..]
            .iter()
            .fold(Element::identity(g.graph()), |p, q| p.mul(q));
        complement = complement.mul(&chunk);
    }
    let gm = g.pow(mm_local as i64)?;
    if u.mul(&complement) != gm
        || u.word_length() + complement.word_length() != gm.word_length()
    {
        return Err(internal("complement is not geodesic"));
    }
    // Exponent bounds from the supports.
    let comp_diam = g
        .graph()
        .complement()
        .induced_subgraph(g.support())?
        .diameter();
    match comp_diam {
        crate::graph::Diameter::Finite(d) if mm_local <= d => {}
        _ => return Err(internal("exponent exceeds complement diameter")),
    }
    if mm_local > g.graph().vertex_count().saturating_sub(1) {
        return Err(internal("exponent exceeds vertex bound"));
    }
    Ok(PowerPrefixDecomposition { parts: parts_desc, m: mm_local, complement })
}

/// Writes a prefix u of gᵐ as gᵏ·a geodesically with k maximal; then
/// ‖a‖* ≤ ‖g‖* + 1.
pub fn power_prefix_normalize(g: &Element, u: &Element, m: usize) -> Result<(usize, Element)> {
    if !is_cyclically_reduced(g) {
        return Err(Error::NotCyclicallyReduced);
    }
    g.check_same_graph(u)?;
    if g.is_identity() {
        return Err(Error::Precondition("base element must be nontrivial".into()));
    }
    if matches!(classify(g)?, SplitClass::Split { .. }) {
        return Err(Error::Precondition("base element must be non-split".into()));
    }
    if !is_prefix(u, &g.pow(m as i64)?)? {
        return Err(Error::Precondition(format!("u is not a prefix of g^{m}")));
    }
    let mut k = 0usize;
    let mut power = Element::identity(g.graph());
    while k < m {
        let next = power.mul(g);
        if is_prefix(&next, u)? {
            power = next;
            k += 1;
        } else {
            break;
        }
    }
    let a = power.inverse().mul(u);
    if power.word_length() + a.word_length() != u.word_length() {
        return Err(Error::Internal("power prefix normalization not geodesic".into()));
    }
    if star_length(&a) > star_length(g) + 1 {
        return Err(Error::Internal("normalized remainder exceeds star bound".into()));
    }
    Ok((k, a))
}

/// Observed star lengths of powers of a star-length-2 base, with the bounds
/// that must hold whenever a power still has star length 2.
#[derive(Debug, Clone)]
pub struct StarGrowthReport {
    /// (exponent, star length) rows for exponents 2..=max.
    pub rows: Vec<(usize, usize)>,
    pub violations: Vec<String>,
}

impl StarGrowthReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_star_growth(g: &Element, max_power: usize) -> Result<StarGrowthReport> {
    if !is_cyclically_reduced(g) {
        return Err(Error::NotCyclicallyReduced);
    }
    if g.is_identity() {
        return Err(Error::Precondition("base element must be nontrivial".into()));
    }
    if matches!(classify(g)?, SplitClass::Split { .. }) {
        return Err(Error::Precondition("base element must be non-split".into()));
    }
    let mut metric = StarMetric::new(g.graph());
    if metric.star_length(g) != 2 {
        return Err(Error::Precondition("base element must have star length 2".into()));
    }
    let vcount = g.graph().vertex_count();
    let diam = g
        .graph()
        .complement()
        .induced_subgraph(g.support())?
        .diameter()
        .as_finite()
        .expect("non-split support has connected complement");
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut power = g.clone();
    for m in 2..=max_power {
        power = power.mul(g);
        let s = metric.star_length(&power);
        rows.push((m, s));
        if s == 2 {
            if m + 3 > vcount {
                violations.push(format!("star length 2 at exponent {m} > |V|-3"));
            }
            if m > diam {
                violations.push(format!("star length 2 at exponent {m} > complement diameter"));
            }
        }
        if vcount <= 4 && m == 2 && s < 3 {
            violations.push("square keeps star length 2 on ≤ 4 vertices".into());
        }
    }
    Ok(StarGrowthReport { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{el, pbar4, pbar6};

    #[test]
    fn ladder_trivial_cases() {
        let g4 = pbar4();
        let g = el(&g4, "v1 v1 v2 v3 v4");
        let id = el(&g4, "1");
        let ladder = prefix_ladder(&g, &id, 3).unwrap();
        for k in 0..3 {
            assert!(ladder.a[k].is_identity());
            assert_eq!(ladder.b[k], g);
        }
        let ladder = prefix_ladder(&g, &g.pow(3).unwrap(), 3).unwrap();
        for k in 0..3 {
            assert_eq!(ladder.a[k], g);
            assert!(ladder.b[k].is_identity());
        }
    }

    #[test]
    fn ladder_worked_example() {
        let g4 = pbar4();
        let g = el(&g4, "v1 v1 v2 v3 v4");
        let u = el(&g4, "v1 v1 v2 v3 v1 v1 v2 v1");
        let ladder = prefix_ladder(&g, &u, 3).unwrap();
        assert_eq!(ladder.a[0], el(&g4, "v1 v1 v2 v3"));
        assert_eq!(ladder.a[1], el(&g4, "v1 v1 v2"));
        assert_eq!(ladder.a[2], el(&g4, "v1"));
    }

    #[test]
    fn decomposition_worked_example() {
        let g4 = pbar4();
        let g = el(&g4, "v1 v1 v2 v3 v4");
        let u = el(&g4, "v1 v1 v2 v3 v1 v1 v2 v1");
        let d = power_prefix_decompose(&g, &u, 3).unwrap();
        assert_eq!(d.m, 3);
        assert_eq!(d.parts, vec![el(&g4, "v1"), el(&g4, "v1 v2"), el(&g4, "v3"), el(&g4, "v4")]);
        assert_eq!(d.part(0), &el(&g4, "v4"));
        assert_eq!(d.part(3), &el(&g4, "v1"));
        assert_eq!(u.mul(&d.complement), g.pow(3).unwrap());
        // Sharpness: m = diam of the support complement = |V| − 1.
        assert_eq!(d.m, g4.vertex_count() - 1);
        assert!(star_length(&u) <= star_length(&g) + 1);
    }

    #[test]
    fn decompose_rejects_bad_inputs() {
        let g4 = pbar4();
        let g = el(&g4, "v1 v1 v2 v3 v4");
        assert!(power_prefix_decompose(&g, &el(&g4, "v1"), 1).is_err());
        assert!(power_prefix_decompose(&g, &el(&g4, "v2"), 3).is_err());
        assert!(power_prefix_decompose(&g, &g, 3).is_err());
        assert!(power_prefix_decompose(&el(&g4, "v1 v3"), &el(&g4, "v1"), 3).is_err());
        assert!(power_prefix_decompose(&el(&g4, "v2^-1 v1 v2"), &el(&g4, "v1"), 3).is_err());
    }

    #[test]
    fn normalize_cases() {
        let g4 = pbar4();
        let g = el(&g4, "v1 v1 v2 v3 v4");
        let (k, a) = power_prefix_normalize(&g, &g.pow(3).unwrap(), 3).unwrap();
        assert_eq!(k, 3);
        assert!(a.is_identity());
        let (k, a) = power_prefix_normalize(&g, &el(&g4, "1"), 3).unwrap();
        assert_eq!(k, 0);
        assert!(a.is_identity());
        let u = el(&g4, "v1 v1 v2 v3 v1 v1 v2 v1");
        let (k, a) = power_prefix_normalize(&g, &u, 3).unwrap();
        assert_eq!(k, 0);
        assert_eq!(a, u);
    }

    #[test]
    fn star_growth_sharp_example() {
        let g6 = pbar6();
        let g = el(&g6, "v1 v2 v3 v4");
        let report = check_star_growth(&g, 4).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.rows[0], (2, 2));
        assert_eq!(report.rows[1], (3, 2));
        assert!(report.rows[2].1 >= 3);
    }
}
