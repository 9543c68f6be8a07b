//! Finitely supported crossed-product elements `Σ_t a_t u_t` with
//! step-function coefficients: twisted convolution, adjoints, inner
//! products, and the averaging elements used by the amenability
//! checks.
//!
//! The algebra relations are `(a u_s)(b u_t) = a·(s.b) u_{st}` and
//! `(a u_s)* = (s⁻¹.a) u_{s⁻¹}`. All arithmetic is exact; the square
//! roots that appear in the literature are avoided by working with
//! the integer-scaled averages `scaled_average(i) = √i · T_i` and
//! comparing squared quantities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::freegroup::{FreeGroup, Word};
use crate::funcalc::{Comparison, StepFunction};
use crate::regset::RegSet;

/// An element of the algebraic crossed product: a finite formal sum
/// `Σ_t a_t u_t` with `a_t` a step function.
#[derive(Clone, PartialEq, Eq)]
pub struct CcElement {
    group: FreeGroup,
    terms: BTreeMap<Word, StepFunction>,
}

impl CcElement {
    pub fn zero(group: FreeGroup) -> CcElement {
        CcElement { group, terms: BTreeMap::new() }
    }

    /// The canonical unitary `u_g`.
    pub fn unitary(group: FreeGroup, g: &Word) -> CcElement {
        CcElement::term(StepFunction::one(group), g)
    }

    pub fn one(group: FreeGroup) -> CcElement {
        CcElement::unitary(group, &Word::identity())
    }

    /// `a · u_e` for a coefficient function `a`.
    pub fn scalar(a: StepFunction) -> CcElement {
        CcElement::term(a, &Word::identity())
    }

    /// The single term `a u_g`.
    pub fn term(a: StepFunction, g: &Word) -> CcElement {
        let group = a.group();
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(g.clone(), a);
        }
        CcElement { group, terms }
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &StepFunction)> {
        self.terms.iter()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `u_g` (zero if absent).
    pub fn coefficient(&self, g: &Word) -> StepFunction {
        self.terms
            .get(g)
            .cloned()
            .unwrap_or_else(|| StepFunction::zero(self.group))
    }

    /// If the element is `a u_e`, returns `a`.
    pub fn as_scalar(&self) -> Option<StepFunction> {
        match self.terms.len() {
            0 => Some(StepFunction::zero(self.group)),
            1 => self.terms.get(&Word::identity()).cloned(),
            _ => None,
        }
    }

    fn insert(terms: &mut BTreeMap<Word, StepFunction>, g: Word, a: StepFunction) {
        if a.is_zero() {
            return;
        }
        match terms.remove(&g) {
            None => {
                terms.insert(g, a);
            }
            Some(prev) => {
                let sum = prev.add(&a);
                if !sum.is_zero() {
                    terms.insert(g, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &CcElement) -> CcElement {
        let mut terms = self.terms.clone();
        for (g, a) in &other.terms {
            CcElement::insert(&mut terms, g.clone(), a.clone());
        }
        CcElement { group: self.group, terms }
    }

    pub fn neg(&self) -> CcElement {
        CcElement {
            group: self.group,
            terms: self.terms.iter().map(|(g, a)| (g.clone(), a.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &CcElement) -> CcElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> CcElement {
        let mut terms = BTreeMap::new();
        for (g, a) in &self.terms {
            CcElement::insert(&mut terms, g.clone(), a.scale(c));
        }
        CcElement { group: self.group, terms }
    }

    pub fn scale_int(&self, c: &BigInt) -> CcElement {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Twisted convolution.
    pub fn mul(&self, other: &CcElement) -> CcElement {
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let coeff = a.mul(&b.translate(s));
                CcElement::insert(&mut terms, s.multiply(t), coeff);
            }
        }
        CcElement { group: self.group, terms }
    }

    pub fn adjoint(&self) -> CcElement {
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            let sinv = s.inverse();
            CcElement::insert(&mut terms, sinv.clone(), a.translate(&sinv));
        }
        CcElement { group: self.group, terms }
    }

    /// `⟨S, T⟩ = Σ_s a_s · b_s`, a step function.
    pub fn inner(&self, other: &CcElement) -> StepFunction {
        let mut acc = StepFunction::zero(self.group);
        for (s, a) in &self.terms {
            if let Some(b) = other.terms.get(s) {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }

    /// Squared 2-norm `‖⟨S,S⟩‖` with the norm taken mod finite.
    pub fn norm2_sq(&self) -> BigRational {
        self.inner(self).sup_norm(Comparison::ModFinite)
    }
}

impl std::fmt::Debug for CcElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, a)| format!("({a:?})u[{g}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The integer-scaled averaging element `Σ_{|t| < i} 1_{𝓑(t)} u_t`
/// (with `𝓑(e)` read as the whole group); dividing by `√i` recovers
/// the usual almost-invariant vectors.
pub fn scaled_average(group: FreeGroup, i: usize) -> CcElement {
    assert!(i >= 1, "averaging index must be positive");
    let mut acc = CcElement::zero(group);
    for k in 0..i {
        for t in group.sphere(k) {
            let support = if t.is_identity() {
                RegSet::universe(group)
            } else {
                RegSet::cylinder_unchecked(group, &t)
            };
            acc = acc.add(&CcElement::term(StepFunction::indicator(&support), &t));
        }
    }
    acc
}

/// Coefficient of `u_s` in `T·T*` for the scaled average `T`; the
/// quantity whose distance from `i` controls the almost invariance.
///
/// Computed in closed form instead of convolving: at a point `x` the
/// coefficient counts the prefixes `t` of `x` with `|t| < i` such
/// that `s⁻¹t` is also a prefix of `s⁻¹x` with `|s⁻¹t| < i`. Writing
/// `c` for the length of the common prefix of `x` and `s`, only
/// `t = x[..c]` survives among the short prefixes, and every prefix
/// `x[..j]` with `c < j < i - |s| + 2c` survives among the long ones.
/// The count therefore depends only on `c` and `min(|x|, i-1)`, both
/// of which cut `G` into finitely many regular classes.
pub fn average_correlation(group: FreeGroup, i: usize, s: &Word) -> StepFunction {
    assert!(i >= 1);
    use num_traits::FromPrimitive;
    let value = |c: usize, m: usize| -> i64 {
        let mut v = i64::from(c <= i - 1 && s.len() <= i - 1 + c);
        let bound = (i + 2 * c) as i64 - s.len() as i64 - 1;
        let reach = (m as i64).min(bound);
        if reach > c as i64 {
            v += reach - c as i64;
        }
        v
    };
    let mut pieces = Vec::new();
    for c in 0..=s.len() {
        let in_c = if c == 0 {
            RegSet::universe(group)
        } else {
            RegSet::cylinder_unchecked(group, &s.prefix(c))
        };
        let class_c = if c < s.len() {
            in_c.difference(&RegSet::cylinder_unchecked(group, &s.prefix(c + 1)))
        } else {
            in_c
        };
        for m in 0..=i - 1 {
            let length_class = if m + 1 == i {
                RegSet::min_length(group, m)
            } else {
                RegSet::length_exactly(group, m)
            };
            let region = class_c.intersect(&length_class);
            if !region.is_empty() {
                pieces.push((
                    BigRational::from_i64(value(c, m)).unwrap(),
                    region,
                ));
            }
        }
    }
    StepFunction::from_value_regions(group, pieces)
}

/// `⟨T̂_i, T̂_i⟩ = Σ_{|t|<i} 1_{𝓑(t)}`, in closed form: the value at
/// `x` is `1 + min(|x|, i-1)`, which equals `i` off a finite ball.
pub fn scaled_self_inner(group: FreeGroup, i: usize) -> StepFunction {
    average_correlation(group, i, &Word::identity())
}

/// `⟨u_s T̂_i − T̂_i, u_s T̂_i − T̂_i⟩ = s.f + f − 2·T̂_iT̂_i*(s)` where
/// `f = ⟨T̂_i, T̂_i⟩`; its mod-finite sup norm is the squared 2-norm
/// of the almost-invariance defect (scaled by `i`).
pub fn almost_invariance_defect(group: FreeGroup, i: usize, s: &Word) -> StepFunction {
    let f = scaled_self_inner(group, i);
    let two = BigInt::from(2);
    f.translate(s)
        .add(&f)
        .sub(&average_correlation(group, i, s).scale_int(&two))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{FromPrimitive, One};

    fn g() -> FreeGroup {
        FreeGroup::new(2)
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cyl(s: &str) -> RegSet {
        RegSet::cylinder(g(), &w(s)).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    #[test]
    fn product_and_adjoint_unfold() {
        let a = CcElement::term(StepFunction::indicator(&cyl("a")), &Word::identity());
        let ua = CcElement::unitary(g(), &w("a"));
        let prod = a.mul(&ua);
        assert_eq!(prod.support_size(), 1);
        assert_eq!(
            prod.coefficient(&w("a")),
            StepFunction::indicator(&cyl("a"))
        );
        let adj = prod.adjoint();
        assert_eq!(
            adj.coefficient(&w("A")),
            StepFunction::indicator(&cyl("a")).translate(&w("A"))
        );
    }

    #[test]
    fn unitaries_invert() {
        for s in ["a", "ab", "BaB"] {
            let s = w(s);
            let u = CcElement::unitary(g(), &s);
            assert_eq!(u.mul(&u.adjoint()), CcElement::one(g()));
            assert_eq!(
                u.mul(&CcElement::unitary(g(), &s.inverse())),
                CcElement::one(g())
            );
        }
    }

    #[test]
    fn mul_is_associative() {
        let xs = [
            CcElement::term(StepFunction::indicator(&cyl("a")), &w("b")),
            CcElement::term(StepFunction::indicator(&cyl("B")), &w("Ab")).add(
                &CcElement::scalar(StepFunction::one(g()).scale(&q(2))),
            ),
            CcElement::unitary(g(), &w("aB")).sub(&CcElement::term(
                StepFunction::indicator(&cyl("ba")),
                &w("A"),
            )),
        ];
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }

    #[test]
    fn adjoint_is_involutive_antihomomorphism() {
        let x = CcElement::term(StepFunction::indicator(&cyl("a")), &w("bA"));
        let y = CcElement::term(StepFunction::indicator(&cyl("Ba")), &w("ab"))
            .add(&CcElement::unitary(g(), &w("B")));
        assert_eq!(x.adjoint().adjoint(), x);
        assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
    }

    #[test]
    fn averaging_element_shape() {
        let t1 = scaled_average(g(), 1);
        assert_eq!(t1, CcElement::one(g()));

        let t2 = scaled_average(g(), 2);
        assert_eq!(t2.support_size(), 5);
        assert_eq!(t2.coefficient(&Word::identity()), StepFunction::one(g()));
        assert_eq!(
            t2.coefficient(&w("a")),
            StepFunction::indicator(&cyl("a"))
        );
    }

    #[test]
    fn average_self_inner_is_index_mod_finite() {
        for i in 1..=4usize {
            let t = scaled_average(g(), i);
            let inner = t.inner(&t);
            let expected = StepFunction::one(g()).scale(&q(i as i64));
            assert!(
                inner.sub(&expected).is_zero_mod_finite(),
                "⟨T,T⟩ ≠ {i} mod finite"
            );
        }
    }

    #[test]
    fn translation_is_inner_isometry() {
        let t = scaled_average(g(), 3);
        for s in ["a", "ab", "Ba"] {
            let s = w(s);
            let us = CcElement::unitary(g(), &s);
            let ust = us.mul(&t);
            // exactly, the self-inner moves with the translation; mod
            // finite it is unchanged
            assert_eq!(ust.inner(&ust), t.inner(&t).translate(&s));
            assert!(ust.inner(&ust).sub(&t.inner(&t)).is_zero_mod_finite());
        }
    }

    #[test]
    fn correlation_matches_inner_with_translate() {
        // two routes: ⟨T, u_s·T⟩ by convolution vs the closed form
        for i in [1usize, 2, 3, 4] {
            let t = scaled_average(g(), i);
            for s in ["a", "b", "aB", "bab"] {
                let s = w(s);
                let us = CcElement::unitary(g(), &s);
                let lhs = t.inner(&us.mul(&t));
                assert_eq!(lhs, average_correlation(g(), i, &s), "i={i} s={s}");
                // and against the full product coefficient
                let coeff = t.mul(&t.adjoint()).coefficient(&s);
                assert_eq!(lhs, coeff, "product route, i={i} s={s}");
            }
        }
    }

    #[test]
    fn self_inner_closed_form_matches_convolution() {
        for i in 1..=4usize {
            let t = scaled_average(g(), i);
            assert_eq!(t.inner(&t), scaled_self_inner(g(), i));
        }
    }

    #[test]
    fn defect_closed_form_matches_convolution() {
        for i in [2usize, 3] {
            let t = scaled_average(g(), i);
            for s in ["a", "ab"] {
                let s = w(s);
                let diff = CcElement::unitary(g(), &s).mul(&t).sub(&t);
                assert_eq!(
                    diff.inner(&diff),
                    almost_invariance_defect(g(), i, &s),
                    "i={i} s={s}"
                );
            }
        }
    }

    #[test]
    fn correlation_recursion() {
        // scaled form of the averaging recursion: the correlation at
        // stage n+1 exceeds the one at stage n by exactly 1 mod finite
        for n in 1..=4usize {
            for s in ["a", "b", "AB", "bab"] {
                let s = w(s);
                if s.len() > n {
                    continue;
                }
                let diff = average_correlation(g(), n + 1, &s)
                    .sub(&average_correlation(g(), n, &s));
                assert!(
                    diff.sub(&StepFunction::one(g())).is_zero_mod_finite(),
                    "recursion fails at n={n}, s={s}"
                );
            }
        }
    }

    #[test]
    fn correlation_between_zero_and_index() {
        // 0 ≤ T_{|s|}·T*_{|s|}(s) ≤ |s| mod finite, scaled by |s|
        for s in ["a", "ab", "aBa"] {
            let s = w(s);
            let i = s.len();
            let corr = average_correlation(g(), i, &s);
            for (v, supp) in corr.pieces() {
                if !supp.is_finite() {
                    assert!(*v >= q(0) && *v <= q(i as i64));
                }
            }
        }
    }

    #[test]
    fn almost_invariance_bound() {
        // ‖u_s T̂_i − T̂_i‖₂² ≤ 2|s| exactly (divide by i for the
        // unscaled bound 2|s|/i); closed form up to i = 12
        for i in 1..=12usize {
            for s in ["a", "ab", "aba"] {
                let s = w(s);
                if s.len() > i {
                    continue;
                }
                let lhs = almost_invariance_defect(g(), i, &s).sup_norm(Comparison::ModFinite);
                assert!(
                    lhs <= q(2 * s.len() as i64),
                    "bound violated at i={i} s={s}: {lhs}"
                );
                // and the defect identity: ‖u_sT−T‖₂² = 2‖i − T·T*(s)‖
                let gap = StepFunction::one(g())
                    .scale(&q(i as i64))
                    .sub(&average_correlation(g(), i, &s));
                assert_eq!(lhs, q(2) * gap.sup_norm(Comparison::ModFinite));
            }
        }
    }

    #[test]
    fn trivial_difference_at_index_one() {
        let t = scaled_average(g(), 1);
        let ue = CcElement::unitary(g(), &Word::identity());
        assert!(ue.mul(&t).sub(&t).inner(&ue.mul(&t).sub(&t)).is_zero());
        assert_eq!(t.norm2_sq(), BigRational::one());
    }
}
