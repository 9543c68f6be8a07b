//! Symbolic calculus in the ℤ-span of the pattern-algebra generators.
//!
//! The generators are the whole-group indicator, cylinder indicators,
//! and pattern-set indicators. The span is closed (mod finite) under
//! left translation and under pointwise products, and both operations
//! are implemented symbolically: translation by rewriting heads and
//! exponent blocks, products by intersecting supports and recognizing
//! the result as a generator again.
//!
//! For linear algebra over the span, functions are coordinatized by
//! germs: fix a level `L`, and under each root cylinder `𝓑(u)`,
//! `|u| = L`, record the decomposition of the function into the
//! finitely many tail behaviours (whole cylinder, one-letter
//! sub-cylinder, or a pattern rooted at `u`). The germ indicators are
//! linearly independent mod finite — checked, not assumed — so the
//! coordinates are faithful on the span.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::freegroup::{FreeGroup, Letter, Word};
use crate::funcalc::{self, Comparison, StepFunction};
use crate::regset::{Pattern, RegSet};
use crate::sexpr::{self, FunExpr, SetExpr};

#[derive(Debug, Error)]
pub enum SpanError {
    #[error("not in the generator span: {0}")]
    NotInSpan(String),
    #[error("bounds too small: need head length {needed_head}, tail length {needed_tail}")]
    Bounds { needed_head: usize, needed_tail: usize },
    #[error("expression error: {0}")]
    Sexpr(#[from] sexpr::SexprError),
}

/// A generator of the pattern algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BGen {
    Universe,
    Cylinder(Word),
    Pattern(Pattern),
}

impl BGen {
    pub fn to_set(&self, group: FreeGroup) -> RegSet {
        match self {
            BGen::Universe => RegSet::universe(group),
            BGen::Cylinder(t) => RegSet::cylinder_unchecked(group, t),
            BGen::Pattern(p) => RegSet::pattern(group, p),
        }
    }

    pub fn to_set_expr(&self) -> SetExpr {
        match self {
            BGen::Universe => SetExpr::All,
            BGen::Cylinder(t) => SetExpr::Cyl(t.to_string()),
            BGen::Pattern(p) => SetExpr::Pat(
                p.head().to_string(),
                p.tail().iter().map(|c| c.to_string()).collect(),
                p.final_letter().to_string(),
            ),
        }
    }

    fn head_len(&self) -> usize {
        match self {
            BGen::Universe => 0,
            BGen::Cylinder(t) => t.len(),
            BGen::Pattern(p) => p.head().len(),
        }
    }

    fn tail_len(&self) -> usize {
        match self {
            BGen::Pattern(p) => p.tail().len(),
            _ => 0,
        }
    }
}

fn pattern(head: Word, tail: Vec<Letter>, last: Letter) -> Pattern {
    Pattern::new(head, tail, last).expect("rewriting preserves pattern invariants")
}

/// Left translation of a single generator by a single letter, as a
/// generator combination valid mod finite. Every case is an exact set
/// identity except `x.𝓑(x⁻¹)`, which drops the identity point.
fn translate_letter_gen(x: Letter, gen: &BGen) -> Vec<(BigInt, BGen)> {
    let one = BigInt::one;
    match gen {
        BGen::Universe => vec![(one(), BGen::Universe)],
        BGen::Cylinder(t) => {
            if t.first() == Some(x.inverse()) {
                let rest = t.suffix_from(1);
                if rest.is_identity() {
                    vec![
                        (one(), BGen::Universe),
                        (-one(), BGen::Cylinder(Word::single(x))),
                    ]
                } else {
                    vec![(one(), BGen::Cylinder(rest))]
                }
            } else {
                vec![(one(), BGen::Cylinder(Word::single(x).multiply(t)))]
            }
        }
        BGen::Pattern(p) => {
            let (head, tail, z) = (p.head(), p.tail(), p.final_letter());
            if !head.is_identity() {
                let moved = if head.first() == Some(x.inverse()) {
                    head.suffix_from(1)
                } else {
                    Word::single(x).multiply(head)
                };
                return vec![(one(), BGen::Pattern(pattern(moved, tail.to_vec(), z)))];
            }
            let c1 = tail[0];
            if x == c1 {
                // the first exponent climbs; the exponent-1 layer leaves
                let peeled = if tail.len() >= 2 {
                    BGen::Pattern(pattern(Word::single(c1), tail[1..].to_vec(), z))
                } else {
                    BGen::Cylinder(Word::single(c1).push_reduced(z))
                };
                vec![(one(), gen.clone()), (-one(), peeled)]
            } else if x == c1.inverse() {
                // the first exponent drops; the exponent-1 layer lands
                let landed = if tail.len() >= 2 {
                    BGen::Pattern(pattern(Word::identity(), tail[1..].to_vec(), z))
                } else {
                    BGen::Cylinder(Word::single(z))
                };
                vec![(one(), gen.clone()), (one(), landed)]
            } else {
                vec![(one(), BGen::Pattern(pattern(Word::single(x), tail.to_vec(), z)))]
            }
        }
    }
}

/// Recognizes a regular set as a single generator, if it is one.
/// Returns `None` for the empty set.
pub fn recognize(group: FreeGroup, set: &RegSet) -> Result<Option<BGen>, SpanError> {
    if set.is_empty() {
        return Ok(None);
    }
    if set.is_universe() {
        return Ok(Some(BGen::Universe));
    }
    let base = set.shortest().expect("nonempty set has a shortest word");
    if base.is_identity() {
        return Err(SpanError::NotInSpan(
            "contains the identity but is not the whole group".into(),
        ));
    }
    if *set == RegSet::cylinder_unchecked(group, &base) {
        return Ok(Some(BGen::Cylinder(base)));
    }
    // a pattern's shortest member is head·c₁…c_m·z, so try every split
    let letters = base.letters();
    let n = letters.len();
    for head_len in (0..n.saturating_sub(1)).rev() {
        let head = base.prefix(head_len);
        let tail = letters[head_len..n - 1].to_vec();
        let z = letters[n - 1];
        let Ok(p) = Pattern::new(head, tail, z) else { continue };
        if *set == RegSet::pattern(group, &p) {
            return Ok(Some(BGen::Pattern(p)));
        }
    }
    Err(SpanError::NotInSpan(format!(
        "no generator matches the set with least word {base}"
    )))
}

/// A finite ℤ-combination of generator indicators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BCombo {
    terms: BTreeMap<BGen, BigInt>,
}

impl BCombo {
    pub fn zero() -> BCombo {
        BCombo::default()
    }

    pub fn gen(gen: BGen) -> BCombo {
        let mut c = BCombo::zero();
        c.add_term(&BigInt::one(), gen);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BGen, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, coefficient: &BigInt, gen: BGen) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(gen.clone()).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&gen);
        }
    }

    pub fn add_scaled(&mut self, other: &BCombo, scale: &BigInt) {
        for (gen, c) in &other.terms {
            self.add_term(&(c * scale), gen.clone());
        }
    }

    pub fn translate_letter(&self, x: Letter) -> BCombo {
        let mut out = BCombo::zero();
        for (gen, c) in &self.terms {
            for (d, g) in translate_letter_gen(x, gen) {
                out.add_term(&(c * d), g);
            }
        }
        out
    }

    /// Left translation, valid mod finite.
    pub fn translate(&self, g: &Word) -> BCombo {
        let mut cur = self.clone();
        for &x in g.letters().iter().rev() {
            cur = cur.translate_letter(x);
        }
        cur
    }

    /// Pointwise product: supports intersect and must be recognized
    /// as generators again.
    pub fn mul(&self, other: &BCombo, group: FreeGroup) -> Result<BCombo, SpanError> {
        let mut out = BCombo::zero();
        for (g1, c1) in &self.terms {
            for (g2, c2) in &other.terms {
                let coefficient = c1 * c2;
                let product = match (g1, g2) {
                    (BGen::Universe, g) | (g, BGen::Universe) => Some(g.clone()),
                    _ => recognize(group, &g1.to_set(group).intersect(&g2.to_set(group)))?,
                };
                if let Some(g) = product {
                    out.add_term(&coefficient, g);
                }
            }
        }
        Ok(out)
    }

    pub fn materialize(&self, group: FreeGroup) -> StepFunction {
        let mut acc = StepFunction::zero(group);
        for (gen, c) in &self.terms {
            acc = acc.add(&StepFunction::indicator(&gen.to_set(group)).scale_int(c));
        }
        acc
    }

    pub fn max_head_len(&self) -> usize {
        self.terms.keys().map(|g| g.head_len()).max().unwrap_or(0)
    }

    pub fn max_tail_len(&self) -> usize {
        self.terms.keys().map(|g| g.tail_len()).max().unwrap_or(0)
    }

    /// Interprets a function expression inside the span.
    pub fn from_fun_expr(group: FreeGroup, expr: &FunExpr) -> Result<BCombo, SpanError> {
        match expr {
            FunExpr::Ind(set_expr) => match set_expr {
                SetExpr::All => Ok(BCombo::gen(BGen::Universe)),
                SetExpr::None_ => Ok(BCombo::zero()),
                SetExpr::Cyl(t) => {
                    let t = group
                        .parse(t)
                        .map_err(|e| SpanError::NotInSpan(e.to_string()))?;
                    if t.is_identity() {
                        return Err(SpanError::NotInSpan("empty cylinder prefix".into()));
                    }
                    Ok(BCombo::gen(BGen::Cylinder(t)))
                }
                SetExpr::Pat(y, tail, z) => {
                    let p = Pattern::parse(y, tail, z, group.rank())
                        .map_err(SpanError::NotInSpan)?;
                    Ok(BCombo::gen(BGen::Pattern(p)))
                }
                other => {
                    let set = sexpr::eval_set(group, other)?;
                    match recognize(group, &set)? {
                        Some(gen) => Ok(BCombo::gen(gen)),
                        None => Ok(BCombo::zero()),
                    }
                }
            },
            FunExpr::One => Ok(BCombo::gen(BGen::Universe)),
            FunExpr::Zero => Ok(BCombo::zero()),
            FunExpr::Add(parts) => {
                let mut acc = BCombo::zero();
                for p in parts {
                    acc.add_scaled(&BCombo::from_fun_expr(group, p)?, &BigInt::one());
                }
                Ok(acc)
            }
            FunExpr::Sub(x, y) => {
                let mut acc = BCombo::from_fun_expr(group, x)?;
                acc.add_scaled(&BCombo::from_fun_expr(group, y)?, &-BigInt::one());
                Ok(acc)
            }
            FunExpr::Scl(c, x) => {
                if !c.is_integer() {
                    return Err(SpanError::NotInSpan(format!(
                        "non-integer coefficient {c} outside the ℤ-span"
                    )));
                }
                let mut acc = BCombo::zero();
                acc.add_scaled(&BCombo::from_fun_expr(group, x)?, &c.to_integer());
                Ok(acc)
            }
            FunExpr::Mul(parts) => {
                let mut acc = BCombo::gen(BGen::Universe);
                for p in parts {
                    acc = acc.mul(&BCombo::from_fun_expr(group, p)?, group)?;
                }
                Ok(acc)
            }
            FunExpr::Trf(w, x) => {
                let w = group
                    .parse(w)
                    .map_err(|e| SpanError::NotInSpan(e.to_string()))?;
                Ok(BCombo::from_fun_expr(group, x)?.translate(&w))
            }
        }
    }

    pub fn to_fun_expr(&self) -> FunExpr {
        let mut parts = Vec::new();
        for (gen, c) in &self.terms {
            let mut e = FunExpr::Ind(gen.to_set_expr());
            if *c != BigInt::one() {
                e = FunExpr::Scl(
                    num_rational::BigRational::from_integer(c.clone()),
                    Box::new(e),
                );
            }
            parts.push(e);
        }
        match parts.len() {
            0 => FunExpr::Zero,
            1 => parts.pop().unwrap(),
            _ => FunExpr::Add(parts),
        }
    }
}

/// One tail behaviour under a root cylinder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Germ {
    /// The whole root cylinder.
    Full,
    /// The one-letter sub-cylinder `𝓑(root·z)`.
    Cyl(Letter),
    /// The pattern `P(root, tail, z)`.
    Pat(Vec<Letter>, Letter),
}

pub(crate) fn germ_set(group: FreeGroup, root: &Word, germ: &Germ) -> RegSet {
    match germ {
        Germ::Full => RegSet::cylinder_unchecked(group, root),
        Germ::Cyl(z) => RegSet::cylinder_unchecked(group, &root.push_reduced(*z)),
        Germ::Pat(tail, z) => {
            RegSet::pattern(group, &pattern(root.clone(), tail.clone(), *z))
        }
    }
}

/// The sign-consistent alternating tail of the generator system:
/// starting from `c1`, the two generators alternate with the sign of
/// `c1`, and the final letter continues the alternation one step.
pub(crate) fn standard_tail(group: FreeGroup, c1: Letter, len: usize) -> (Vec<Letter>, Letter) {
    assert!(len >= 1);
    let mut tail = Vec::with_capacity(len);
    let mut cur = c1;
    for _ in 0..len {
        tail.push(cur);
        cur = opposite_generator(group, cur);
    }
    (tail, cur)
}

/// All basis germs compatible with a root ending in `last`, tails up
/// to `m_max`, in a fixed order. `Full` is not a basis germ (the
/// whole root cylinder is the sum of its one-letter sub-cylinders mod
/// finite, so traces expand it), and pattern germs range over the
/// sign-consistent tails of the generator system only.
pub(crate) fn germ_basis(group: FreeGroup, last: Letter, m_max: usize) -> Vec<Germ> {
    let mut out = Vec::new();
    for z in group.letters() {
        if z != last.inverse() {
            out.push(Germ::Cyl(z));
        }
    }
    for len in 1..=m_max {
        for c1 in group.letters() {
            if c1 == last.inverse() {
                continue;
            }
            let (tail, z) = standard_tail(group, c1, len);
            out.push(Germ::Pat(tail, z));
        }
    }
    out
}

/// Decomposes `gen ∩ 𝓑(root)` into germs at the root. The empty
/// vector means the intersection is empty.
fn trace(gen: &BGen, root: &Word) -> Result<Vec<Germ>, SpanError> {
    match gen {
        BGen::Universe => Ok(vec![Germ::Full]),
        BGen::Cylinder(t) => {
            if t.len() > root.len() {
                return Err(SpanError::Bounds {
                    needed_head: t.len(),
                    needed_tail: 0,
                });
            }
            if t.is_prefix_of(root) {
                Ok(vec![Germ::Full])
            } else {
                Ok(vec![])
            }
        }
        BGen::Pattern(p) => {
            let (head, tail, z) = (p.head(), p.tail(), p.final_letter());
            if head.len() > root.len() {
                return Err(SpanError::Bounds {
                    needed_head: head.len(),
                    needed_tail: tail.len(),
                });
            }
            if !head.is_prefix_of(root) {
                return Ok(vec![]);
            }
            // walk the exponent blocks along the rest of the root
            let mut block = 0usize; // index into tail
            let mut seen = false; // read ≥ 1 letter of the current block
            for &l in &root.letters()[head.len()..] {
                if l == tail[block] {
                    seen = true;
                } else if seen && block + 1 < tail.len() && l == tail[block + 1] {
                    block += 1;
                } else if seen && block + 1 == tail.len() && l == z {
                    return Ok(vec![Germ::Full]);
                } else {
                    return Ok(vec![]);
                }
            }
            if !seen {
                // root is exactly the head
                return Ok(vec![Germ::Pat(tail.to_vec(), z)]);
            }
            // the root stops inside block `block`: either the block
            // keeps going, or it is finished here
            let continuing = Germ::Pat(tail[block..].to_vec(), z);
            let finished = if block + 1 < tail.len() {
                Germ::Pat(tail[block + 1..].to_vec(), z)
            } else {
                Germ::Cyl(z)
            };
            Ok(vec![continuing, finished])
        }
    }
}

/// A germ coordinatization of the span at a fixed level.
pub(crate) struct GermCoords {
    group: FreeGroup,
    pub level: usize,
    pub m_max: usize,
    roots: Vec<Word>,
    bases: Vec<Vec<Germ>>,
    germ_index: Vec<HashMap<Germ, usize>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl GermCoords {
    pub fn new(group: FreeGroup, level: usize, m_max: usize) -> GermCoords {
        assert!(level >= 1);
        let roots = group.sphere(level);
        let bases: Vec<Vec<Germ>> = group
            .letters()
            .map(|l| germ_basis(group, l, m_max))
            .collect();
        let germ_index = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect())
            .collect();
        let mut offsets = Vec::with_capacity(roots.len());
        let mut dim = 0usize;
        for r in &roots {
            offsets.push(dim);
            dim += bases[r.last().unwrap().index()].len();
        }
        GermCoords { group, level, m_max, roots, bases, germ_index, offsets, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self, combo: &BCombo) -> Result<Vec<BigInt>, SpanError> {
        let mut out = vec![BigInt::zero(); self.dim];
        for (gen, c) in combo.terms() {
            if gen.tail_len() > self.m_max {
                return Err(SpanError::Bounds {
                    needed_head: gen.head_len(),
                    needed_tail: gen.tail_len(),
                });
            }
            for (ri, root) in self.roots.iter().enumerate() {
                let letter = root.last().unwrap().index();
                let mut bump = |germ: &Germ, out: &mut Vec<BigInt>| -> Result<(), SpanError> {
                    let gi = self.germ_index[letter].get(germ).ok_or_else(|| {
                        SpanError::NotInSpan(format!(
                            "germ {germ:?} outside the sign-consistent system"
                        ))
                    })?;
                    out[self.offsets[ri] + gi] += c;
                    Ok(())
                };
                for germ in trace(gen, root)? {
                    match germ {
                        // the whole root cylinder is the sum of its
                        // one-letter sub-cylinders mod finite
                        Germ::Full => {
                            for z in self.group.letters() {
                                if z != root.last().unwrap().inverse() {
                                    bump(&Germ::Cyl(z), &mut out)?;
                                }
                            }
                        }
                        g => bump(&g, &mut out)?,
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks that the germ indicators at each root class are
    /// linearly independent mod finite, which makes coordinates
    /// faithful; the check is a refinement plus an integer rank.
    pub fn verify_independence(&self) -> bool {
        for l in self.group.letters() {
            let root = Word::single(l);
            let basis = &self.bases[l.index()];
            let fns: Vec<StepFunction> = basis
                .iter()
                .map(|g| StepFunction::indicator(&germ_set(self.group, &root, g)))
                .collect();
            let Ok(refinement) = funcalc::common_refinement(&fns, Comparison::ModFinite) else {
                return false;
            };
            let m = crate::intlinalg::IntMatrix::from_rows(refinement.coords);
            if crate::intlinalg::rank(&m) != basis.len() {
                return false;
            }
        }
        true
    }

    /// Semantic cross-check: the coordinates of a combo reconstruct
    /// it mod finite.
    #[cfg(test)]
    pub fn verify_reconstruction(&self, combo: &BCombo) -> bool {
        let coords = match self.coords(combo) {
            Ok(c) => c,
            Err(_) => return false,
        };
        let mut rebuilt = StepFunction::zero(self.group);
        for (ri, root) in self.roots.iter().enumerate() {
            let letter = root.last().unwrap().index();
            for (gi, germ) in self.bases[letter].iter().enumerate() {
                let c = &coords[self.offsets[ri] + gi];
                if !c.is_zero() {
                    rebuilt = rebuilt.add(
                        &StepFunction::indicator(&germ_set(self.group, root, germ)).scale_int(c),
                    );
                }
            }
        }
        combo.materialize(self.group).sub(&rebuilt).is_zero_mod_finite()
    }
}

/// The σ-triviality witness for one generator: a symbolic preimage
/// with `σ(witness) ≡ 1_gen` mod finite (exact except where noted).
///
/// Last-letter cylinders use an absorbing pattern one letter up
/// (e.g. `b⁻¹.1_{𝓑(b^ℕa)} = 1_{𝓑(b^ℕa)} + 1_{𝓑(a)}` exactly); longer
/// cylinders and headed patterns first walk their prefix off with
/// one-letter moves; head-less patterns prepend a fresh exponent
/// block and absorb the same way.
pub fn trivialize_gen(group: FreeGroup, gen: &BGen) -> super::SigmaWitness {
    use super::{lift_shift, SigmaWitness};
    let one = BigInt::one();
    let mut wit = SigmaWitness::zero();
    match gen {
        BGen::Universe => {
            // 1 ≡ Σ_{|c|=1} 1_{𝓑(c)} mod finite
            for l in group.letters() {
                wit.add_scaled(&trivialize_gen(group, &BGen::Cylinder(Word::single(l))), &one);
            }
        }
        BGen::Cylinder(t) => {
            let c = t.last().expect("cylinder prefixes are nonempty");
            let prefix = t.prefix(t.len() - 1);
            wit.add_scaled(&lift_shift(&prefix, &BGen::Cylinder(Word::single(c))), &one);
            // the level-1 absorber: d⁻¹.e = e + 1_{𝓑(c)} with
            // e = P(e, [d], c) for the opposite-generator letter d
            let d = opposite_generator(group, c);
            let absorber = BGen::Pattern(pattern(Word::identity(), vec![d], c));
            absorb_into(&mut wit, &one, d, &absorber);
        }
        BGen::Pattern(p) => {
            let base = BGen::Pattern(pattern(
                Word::identity(),
                p.tail().to_vec(),
                p.final_letter(),
            ));
            wit.add_scaled(&lift_shift(p.head(), &base), &one);
            let d = opposite_generator(group, p.tail()[0]);
            let mut tail = vec![d];
            tail.extend_from_slice(p.tail());
            let absorber = BGen::Pattern(pattern(Word::identity(), tail, p.final_letter()));
            absorb_into(&mut wit, &one, d, &absorber);
        }
    }
    wit
}

/// The letter of the other generator with the same sign as `c`, so
/// prepended blocks stay inside the sign-consistent generator system.
pub(crate) fn opposite_generator(group: FreeGroup, c: Letter) -> Letter {
    assert!(group.rank() >= 2, "absorbing needs a second generator");
    let other = 1 - c.generator().min(1);
    let _ = group;
    Letter::new(other, c.is_inverse())
}

/// Appends the witness of `1_target = σ(…)` from the absorber
/// relation `d⁻¹.e = e + 1_target`: for a positive letter `d` the
/// slot gains `d⁻¹.e`, for an inverse letter it gains `−e`.
fn absorb_into(wit: &mut super::SigmaWitness, coefficient: &BigInt, d: Letter, absorber: &BGen) {
    if d.is_inverse() {
        wit.slots[d.generator()].add_term(&-coefficient, Word::identity(), absorber.clone());
    } else {
        wit.slots[d.generator()].add_term(
            coefficient,
            Word::single(d.inverse()),
            absorber.clone(),
        );
    }
}
