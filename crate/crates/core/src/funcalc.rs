//! Exact step functions on the free group.
//!
//! A [`StepFunction`] is a finitely-valued function `F_n → ℚ` whose
//! level sets are regular. It is stored as a list of (value, support)
//! pieces with pairwise disjoint supports, no zero values, and equal
//! values merged, ordered by value — a canonical form, so equality is
//! structural.
//!
//! "Mod finite" comparisons (the quotient by the ideal of finitely
//! supported functions) are a comparison mode, not a separate type:
//! functions are always stored exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freegroup::{FreeGroup, Word};
use crate::regset::RegSet;

/// Whether a predicate looks at the function exactly or up to finitely
/// many points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Exact,
    ModFinite,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepFunction {
    group: FreeGroup,
    /// Sorted by value; values distinct and nonzero; supports
    /// pairwise disjoint and nonempty.
    pieces: Vec<(BigRational, RegSet)>,
}

impl StepFunction {
    pub fn zero(group: FreeGroup) -> StepFunction {
        StepFunction { group, pieces: Vec::new() }
    }

    pub fn constant(group: FreeGroup, value: BigRational) -> StepFunction {
        StepFunction::from_pieces(group, vec![(value, RegSet::universe(group))])
    }

    pub fn one(group: FreeGroup) -> StepFunction {
        StepFunction::constant(group, BigRational::one())
    }

    pub fn indicator(support: &RegSet) -> StepFunction {
        StepFunction::from_pieces(
            support.group(),
            vec![(BigRational::one(), support.clone())],
        )
    }

    /// Builds from arbitrary (value, set) pairs; the sets need not be
    /// disjoint — later pairs overwrite earlier ones on overlaps.
    pub fn from_layers(group: FreeGroup, layers: &[(BigRational, RegSet)]) -> StepFunction {
        let mut covered = RegSet::empty(group);
        let mut pieces = Vec::new();
        for (v, s) in layers.iter().rev() {
            let fresh = s.difference(&covered);
            covered = covered.union(s);
            pieces.push((v.clone(), fresh));
        }
        StepFunction::from_pieces(group, pieces)
    }

    /// A ℤ-linear combination of indicators.
    pub fn combination(group: FreeGroup, terms: &[(BigInt, RegSet)]) -> StepFunction {
        let mut acc = StepFunction::zero(group);
        for (c, s) in terms {
            acc = acc.add(&StepFunction::indicator(s).scale_int(c));
        }
        acc
    }

    /// Builds from (value, region) pairs with pairwise disjoint
    /// regions (checked in debug builds); equal values merge.
    pub fn from_value_regions(group: FreeGroup, pieces: Vec<(BigRational, RegSet)>) -> StepFunction {
        #[cfg(debug_assertions)]
        for (i, (_, a)) in pieces.iter().enumerate() {
            for (_, b) in pieces.iter().take(i) {
                debug_assert!(a.is_disjoint(b), "from_value_regions: overlapping regions");
            }
        }
        StepFunction::from_pieces(group, pieces)
    }

    fn from_pieces(group: FreeGroup, raw: Vec<(BigRational, RegSet)>) -> StepFunction {
        let mut merged: BTreeMap<BigRational, RegSet> = BTreeMap::new();
        for (v, s) in raw {
            if v.is_zero() || s.is_empty() {
                continue;
            }
            merged
                .entry(v)
                .and_modify(|acc| *acc = acc.union(&s))
                .or_insert(s);
        }
        StepFunction { group, pieces: merged.into_iter().collect() }
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn pieces(&self) -> &[(BigRational, RegSet)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The set where the function is nonzero.
    pub fn support(&self) -> RegSet {
        self.pieces
            .iter()
            .fold(RegSet::empty(self.group), |acc, (_, s)| acc.union(s))
    }

    pub fn eval(&self, w: &Word) -> BigRational {
        for (v, s) in &self.pieces {
            if s.contains(w) {
                return v.clone();
            }
        }
        BigRational::zero()
    }

    fn check_group(&self, other: &StepFunction) {
        assert_eq!(self.group, other.group, "rank mismatch between step functions");
    }

    /// Pointwise combination through `op`, with `op(0, 0) = 0`
    /// assumed (holds for addition; multiplication is special-cased).
    fn combine(&self, other: &StepFunction, op: impl Fn(&BigRational, &BigRational) -> BigRational) -> StepFunction {
        self.check_group(other);
        let zero = BigRational::zero();
        let mut raw = Vec::new();
        let other_support = other.support();
        let self_support = self.support();
        for (v, a) in &self.pieces {
            for (w, b) in &other.pieces {
                raw.push((op(v, w), a.intersect(b)));
            }
            raw.push((op(v, &zero), a.difference(&other_support)));
        }
        for (w, b) in &other.pieces {
            raw.push((op(&zero, w), b.difference(&self_support)));
        }
        StepFunction::from_pieces(self.group, raw)
    }

    pub fn add(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, |a, b| a - b)
    }

    pub fn neg(&self) -> StepFunction {
        StepFunction {
            group: self.group,
            pieces: self.pieces.iter().rev().map(|(v, s)| (-v, s.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> StepFunction {
        if c.is_zero() {
            return StepFunction::zero(self.group);
        }
        StepFunction::from_pieces(
            self.group,
            self.pieces.iter().map(|(v, s)| (v * c, s.clone())).collect(),
        )
    }

    pub fn scale_int(&self, c: &BigInt) -> StepFunction {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Pointwise product; zero off the common support.
    pub fn mul(&self, other: &StepFunction) -> StepFunction {
        self.check_group(other);
        let mut raw = Vec::new();
        for (v, a) in &self.pieces {
            for (w, b) in &other.pieces {
                raw.push((v * w, a.intersect(b)));
            }
        }
        StepFunction::from_pieces(self.group, raw)
    }

    /// The left translation action: `(g.f)(x) = f(g⁻¹ x)`, i.e. the
    /// supports move forward by `g`.
    pub fn translate(&self, g: &Word) -> StepFunction {
        StepFunction {
            group: self.group,
            pieces: self
                .pieces
                .iter()
                .map(|(v, s)| (v.clone(), s.translate(g)))
                .collect(),
        }
    }

    /// All values are 0 or 1.
    pub fn is_projection(&self) -> bool {
        self.pieces.iter().all(|(v, _)| v.is_one())
    }

    pub fn is_integer_valued(&self) -> bool {
        self.pieces.iter().all(|(v, _)| v.is_integer())
    }

    /// Zero up to a finitely supported correction.
    pub fn is_zero_mod_finite(&self) -> bool {
        self.pieces.iter().all(|(_, s)| s.is_finite())
    }

    pub fn equal(&self, other: &StepFunction, mode: Comparison) -> bool {
        match mode {
            Comparison::Exact => self == other,
            Comparison::ModFinite => self.sub(other).is_zero_mod_finite(),
        }
    }

    /// Max of `|value|` over pieces; in `ModFinite` mode only pieces
    /// with infinite support count.
    pub fn sup_norm(&self, mode: Comparison) -> BigRational {
        self.pieces
            .iter()
            .filter(|(_, s)| match mode {
                Comparison::Exact => true,
                Comparison::ModFinite => !s.is_finite(),
            })
            .map(|(v, _)| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Pointwise `self ≤ other` everywhere (exact).
    pub fn le(&self, other: &StepFunction) -> bool {
        self.sub(other)
            .pieces
            .iter()
            .all(|(v, _)| !v.is_positive())
    }
}

impl std::fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(v, s)| format!("{v}·1_{s:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoordsError {
    #[error("function is not integer-valued")]
    NotInteger,
    #[error("not cylinder-finitary at depth {depth}")]
    NotCylinderFinitary { depth: usize },
    #[error("no cylinder-finitary depth up to the search bound {bound}")]
    NoFinitaryDepth { bound: usize },
}

/// Common refinement of the piece supports of a family of integer
/// step functions: disjoint regular blocks covering every support,
/// plus the value of each function on each block.
pub struct Refinement {
    pub blocks: Vec<RegSet>,
    /// `coords[i][j]` = value of `fs[i]` on `blocks[j]`.
    pub coords: Vec<Vec<BigInt>>,
}

pub fn common_refinement(fs: &[StepFunction], mode: Comparison) -> Result<Refinement, CoordsError> {
    assert!(!fs.is_empty(), "refinement of an empty family");
    let group = fs[0].group();
    if !fs.iter().all(|f| f.is_integer_valued()) {
        return Err(CoordsError::NotInteger);
    }
    let mut supports: Vec<RegSet> = Vec::new();
    for f in fs {
        for (_, s) in f.pieces() {
            if !supports.contains(s) {
                supports.push(s.clone());
            }
        }
    }
    let mut blocks = vec![RegSet::universe(group)];
    for s in &supports {
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for b in blocks {
            if b.is_disjoint(s) {
                next.push(b);
                continue;
            }
            if b.is_subset(s) {
                next.push(b);
                continue;
            }
            let inside = b.intersect(s);
            let outside = b.difference(s);
            if !inside.is_empty() {
                next.push(inside);
            }
            if !outside.is_empty() {
                next.push(outside);
            }
        }
        blocks = next;
    }
    // drop the region outside every support, and in mod-finite mode
    // the finite blocks as well
    blocks.retain(|b| supports.iter().any(|s| !b.is_disjoint(s)));
    if mode == Comparison::ModFinite {
        blocks.retain(|b| !b.is_finite());
    }
    blocks.sort();
    let coords = fs
        .iter()
        .map(|f| {
            blocks
                .iter()
                .map(|b| {
                    for (v, s) in f.pieces() {
                        if b.is_subset(s) {
                            return v.to_integer();
                        }
                    }
                    BigInt::zero()
                })
                .collect()
        })
        .collect();
    Ok(Refinement { blocks, coords })
}

/// The eventual value of `f` on each depth-`k` cylinder, indexed by
/// `sphere(k)` in shortlex order. Fails if some cylinder sees more
/// than one value infinitely often.
pub fn coords_at_depth(f: &StepFunction, k: usize) -> Result<Vec<BigInt>, CoordsError> {
    if !f.is_integer_valued() {
        return Err(CoordsError::NotInteger);
    }
    let group = f.group();
    let mut out = Vec::new();
    for t in group.sphere(k) {
        let cyl = RegSet::cylinder_unchecked(group, &t);
        let mut candidates: Vec<BigInt> = Vec::new();
        let mut covered = RegSet::empty(group);
        for (v, s) in f.pieces() {
            let meet = cyl.intersect(s);
            covered = covered.union(&meet);
            if !meet.is_finite() {
                candidates.push(v.to_integer());
            }
        }
        if !cyl.difference(&covered).is_finite() {
            candidates.push(BigInt::zero());
        }
        match candidates.len() {
            1 => out.push(candidates.pop().unwrap()),
            _ => return Err(CoordsError::NotCylinderFinitary { depth: k }),
        }
    }
    Ok(out)
}

/// Reassembles depth-`k` coordinates into the step function
/// `Σ_t v_t · 1_{𝓑(t)}`.
pub fn from_depth_coords(group: FreeGroup, k: usize, coords: &[BigInt]) -> StepFunction {
    let sphere = group.sphere(k);
    assert_eq!(sphere.len(), coords.len());
    let terms: Vec<(BigInt, RegSet)> = sphere
        .iter()
        .zip(coords)
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| (c.clone(), RegSet::cylinder_unchecked(group, t)))
        .collect();
    StepFunction::combination(group, &terms)
}

/// The least depth at which `f` is cylinder-finitary mod finite. The
/// search is bounded by the supports' automaton sizes: a function
/// that is eventually cylindrical stabilizes within that many levels.
pub fn depth_of(f: &StepFunction) -> Result<usize, CoordsError> {
    if !f.is_integer_valued() {
        return Err(CoordsError::NotInteger);
    }
    if f.is_zero() {
        return Ok(0);
    }
    let bound = f
        .pieces()
        .iter()
        .map(|(_, s)| s.state_count())
        .max()
        .unwrap_or(1)
        + 1;
    for k in 0..=bound {
        if coords_at_depth(f, k).is_ok() {
            return Ok(k);
        }
    }
    Err(CoordsError::NoFinitaryDepth { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regset::Pattern;
    use num_traits::FromPrimitive;

    fn g() -> FreeGroup {
        FreeGroup::new(2)
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cyl(s: &str) -> RegSet {
        RegSet::cylinder(g(), &w(s)).unwrap()
    }

    fn ind(s: &RegSet) -> StepFunction {
        StepFunction::indicator(s)
    }

    fn pat(head: &str, tail: &str, last: &str) -> RegSet {
        RegSet::pattern(g(), &Pattern::parse(head, tail, last, 2).unwrap())
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    #[test]
    fn indicator_and_constants() {
        assert!(ind(&RegSet::empty(g())).is_zero());
        assert!(ind(&cyl("a")).is_projection());

        // 1 = Σ_{|t|=1} 1_{𝓑(t)} + 1_{{e}}
        let mut sum = ind(&RegSet::singleton(g(), &Word::identity()));
        for c in ["a", "b", "A", "B"] {
            sum = sum.add(&ind(&cyl(c)));
        }
        assert_eq!(sum, StepFunction::one(g()));

        // equal-value pieces merge into one canonical piece
        let s = ind(&cyl("a")).add(&ind(&cyl("b")));
        assert!(s.is_projection());
        assert_eq!(s.pieces().len(), 1);
        assert_eq!(s.support(), cyl("a").union(&cyl("b")));
    }

    #[test]
    fn pointwise_products() {
        assert!(ind(&cyl("a")).mul(&ind(&cyl("b"))).is_zero());

        // the pattern 𝓑(a^ℕb) sits inside 𝓑(a)
        let p = ind(&pat("", "a", "b"));
        assert_eq!(p.mul(&ind(&cyl("a"))), p);

        // (1 − 1_{𝓑(a)})(1 − 1_{𝓑(b)}) = 1_{{e} ∪ 𝓑(a⁻¹) ∪ 𝓑(b⁻¹)}
        let one = StepFunction::one(g());
        let lhs = one.sub(&ind(&cyl("a"))).mul(&one.sub(&ind(&cyl("b"))));
        let rhs = ind(&RegSet::singleton(g(), &Word::identity())
            .union(&cyl("A"))
            .union(&cyl("B")));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn translation() {
        let lhs = ind(&cyl("A")).translate(&w("a"));
        let rhs = ind(&cyl("b")
            .union(&cyl("B"))
            .union(&cyl("A"))
            .union(&RegSet::singleton(g(), &Word::identity())));
        assert_eq!(lhs, rhs);

        assert_eq!(StepFunction::one(g()).translate(&w("Bab")), StepFunction::one(g()));

        let e = ind(&pat("", "b", "a"));
        assert_eq!(e.translate(&w("B")), e.add(&ind(&cyl("a"))));
    }

    #[test]
    fn translate_is_ring_automorphism() {
        let f = ind(&cyl("a")).scale(&q(2)).add(&ind(&cyl("Ba")));
        let h = ind(&pat("", "a", "b")).sub(&StepFunction::one(g()));
        for gw in ["a", "Ab", "bb"] {
            let gw = w(gw);
            assert_eq!(
                f.add(&h).translate(&gw),
                f.translate(&gw).add(&h.translate(&gw))
            );
            assert_eq!(
                f.mul(&h).translate(&gw),
                f.translate(&gw).mul(&h.translate(&gw))
            );
        }
    }

    #[test]
    fn predicates() {
        let fin = ind(&RegSet::finite(g(), &[w("a"), w("ab")]));
        assert!(fin.is_zero_mod_finite());
        assert!(!fin.is_zero());

        let f = ind(&cyl("a")).scale(&q(2));
        assert_eq!(f.sup_norm(Comparison::Exact), q(2));
        assert!(!f.is_projection());

        // mod-finite sup norm ignores finite pieces
        let h = f.add(&ind(&RegSet::singleton(g(), &w("b"))).scale(&q(7)));
        assert_eq!(h.sup_norm(Comparison::Exact), q(7));
        assert_eq!(h.sup_norm(Comparison::ModFinite), q(2));
    }

    #[test]
    fn projections_add_on_disjoint_supports() {
        let p = ind(&cyl("a"));
        let r = ind(&cyl("b").union(&cyl("B")));
        assert!(p.add(&r).is_projection());
    }

    #[test]
    fn refinement_example() {
        let f1 = ind(&cyl("a"));
        let f2 = ind(&cyl("a").union(&cyl("b")));
        let r = common_refinement(&[f1, f2], Comparison::Exact).unwrap();
        assert_eq!(r.blocks.len(), 2);
        assert!(r.blocks.contains(&cyl("a")) && r.blocks.contains(&cyl("b")));
        let ia = r.blocks.iter().position(|b| *b == cyl("a")).unwrap();
        let ib = 1 - ia;
        assert_eq!(r.coords[0][ia], BigInt::from(1));
        assert_eq!(r.coords[0][ib], BigInt::from(0));
        assert_eq!(r.coords[1][ia], BigInt::from(1));
        assert_eq!(r.coords[1][ib], BigInt::from(1));
    }

    #[test]
    fn refinement_reconstructs() {
        let fs = vec![
            ind(&cyl("a")).scale(&q(3)),
            ind(&cyl("a").union(&cyl("bA"))),
            ind(&pat("", "a", "b")).sub(&StepFunction::one(g())),
            ind(&cyl("B")).sub(&ind(&cyl("Ba")).scale(&q(2))),
        ];
        let r = common_refinement(&fs, Comparison::Exact).unwrap();
        for (i, f) in fs.iter().enumerate() {
            let rebuilt: Vec<(BigInt, RegSet)> = r
                .blocks
                .iter()
                .zip(&r.coords[i])
                .map(|(b, c)| (c.clone(), b.clone()))
                .collect();
            assert_eq!(&StepFunction::combination(g(), &rebuilt), f);
        }
        // blocks pairwise disjoint
        for i in 0..r.blocks.len() {
            for j in 0..i {
                assert!(r.blocks[i].is_disjoint(&r.blocks[j]));
            }
        }
    }

    #[test]
    fn orthogonal_refinement_of_projections() {
        // refining projections yields pairwise orthogonal blocks with
        // the same union of supports
        let ps = vec![
            ind(&cyl("a")),
            ind(&cyl("a").union(&cyl("b"))),
            ind(&pat("", "a", "b")),
        ];
        let r = common_refinement(&ps, Comparison::Exact).unwrap();
        let union_blocks = r
            .blocks
            .iter()
            .fold(RegSet::empty(g()), |acc, b| acc.union(b));
        let union_supports = ps
            .iter()
            .fold(RegSet::empty(g()), |acc, p| acc.union(&p.support()));
        assert_eq!(union_blocks, union_supports);
    }

    #[test]
    fn depth_coordinates() {
        // 1_{𝓑(a)} at depth 2: value 1 on 𝓑(aa), 𝓑(ab), 𝓑(aB)
        let coords = coords_at_depth(&ind(&cyl("a")), 2).unwrap();
        assert_eq!(coords.len(), 12);
        let sphere = g().sphere(2);
        for (t, c) in sphere.iter().zip(&coords) {
            let expected = i64::from(t.first() == Some(w("a").first().unwrap()));
            assert_eq!(c, &BigInt::from(expected), "at {t}");
        }
        assert_eq!(coords.iter().filter(|c| !c.is_zero()).count(), 3);

        assert_eq!(
            coords_at_depth(&StepFunction::one(g()), 1).unwrap(),
            vec![BigInt::from(1); 4]
        );

        assert_eq!(
            coords_at_depth(&ind(&pat("", "a", "b")), 3),
            Err(CoordsError::NotCylinderFinitary { depth: 3 })
        );
        assert!(matches!(
            depth_of(&ind(&pat("", "a", "b"))),
            Err(CoordsError::NoFinitaryDepth { .. })
        ));
    }

    #[test]
    fn depth_roundtrip_and_split() {
        let f = ind(&cyl("a"))
            .scale(&q(2))
            .sub(&ind(&cyl("bA")))
            .add(&StepFunction::one(g()));
        let k = depth_of(&f).unwrap();
        let coords = coords_at_depth(&f, k).unwrap();
        let back = from_depth_coords(g(), k, &coords);
        assert!(f.sub(&back).is_zero_mod_finite());

        // the depth-(k+1) expansion triples each cylinder coordinate
        let fine = coords_at_depth(&f, k + 1).unwrap();
        let sphere = g().sphere(k);
        let fine_sphere = g().sphere(k + 1);
        for (t, c) in sphere.iter().zip(&coords) {
            for (u, d) in fine_sphere.iter().zip(&fine) {
                if t.is_prefix_of(u) {
                    assert_eq!(c, d);
                }
            }
        }
    }

    #[test]
    fn zero_one_functions_are_cylinder_sums_mod_finite() {
        // any {0,1}-valued combination of cylinder indicators is, mod
        // finite, a disjoint sum of distinct cylinder indicators
        let f = ind(&cyl("a").union(&cyl("bA")).union(&cyl("B")));
        assert!(f.is_projection());
        let k = depth_of(&f).unwrap();
        let coords = coords_at_depth(&f, k).unwrap();
        assert!(coords.iter().all(|c| c.is_zero() || c == &BigInt::from(1)));
        let cylinders: Vec<Word> = g()
            .sphere(k)
            .into_iter()
            .zip(&coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, _)| t)
            .collect();
        let mut sum = StepFunction::zero(g());
        for t in &cylinders {
            sum = sum.add(&ind(&RegSet::cylinder(g(), t).unwrap()));
        }
        assert!(f.sub(&sum).is_zero_mod_finite());
        assert!(sum.is_projection());
    }
}
