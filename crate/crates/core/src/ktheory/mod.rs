//! The induction map on K-class data and the K-group computations
//! for the two worked crossed products.
//!
//! The central object is the map
//! `σ(h₁, …, h_n) = Σ_i (h_i − g_i.h_i)` acting on tuples of integer
//! step functions, with `g_1 = a, g_2 = b`. Its kernel classifies the
//! odd K-group of the crossed product and the quotient by its image
//! classifies the even one; everything here computes with finite
//! truncations of that data and emits replayable certificates.
//!
//! Example 1 is the algebra generated by cylinder indicators; Example
//! 2 adds the pattern-set indicators. The Example 2 machinery lives
//! in [`bspan`] (the symbolic generator calculus) and [`example2`].

mod bspan;
mod example2;

pub use bspan::{BCombo, BGen, SpanError};
pub use example2::{balance_coefficient_table, k0_reduce_example2, k1_example2, BalanceTable};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::freegroup::{FreeGroup, Letter, Word};
use crate::funcalc::{self, StepFunction};
use crate::intlinalg::{self, IntMatrix};
use crate::regset::RegSet;
use crate::sexpr::{self, FunExpr, SetExpr};

/// A tuple of integer step functions, one per generator: the domain
/// of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaInput {
    pub components: Vec<StepFunction>,
}

impl SigmaInput {
    pub fn new(components: Vec<StepFunction>) -> SigmaInput {
        SigmaInput { components }
    }

    pub fn pair(h1: StepFunction, h2: StepFunction) -> SigmaInput {
        SigmaInput { components: vec![h1, h2] }
    }
}

/// `σ(h₁, …, h_n) = Σ_i (h_i − g_i.h_i)`.
pub fn sigma(group: FreeGroup, input: &SigmaInput) -> StepFunction {
    assert_eq!(input.components.len(), group.rank(), "one component per generator");
    let mut acc = StepFunction::zero(group);
    for (i, h) in input.components.iter().enumerate() {
        let g = Word::single(group.generator(i));
        acc = acc.add(h).sub(&h.translate(&g));
    }
    acc
}

/// One verified statement inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl Claim {
    pub fn new(name: &str, pass: bool, details: String) -> Claim {
        Claim { name: name.to_string(), pass, details }
    }
}

/// Outcome of a K-group computation, with every asserted fact listed
/// as a claim.
#[derive(Clone, Debug, Serialize)]
pub struct KGroupReport {
    pub example: u8,
    pub which: String,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_rank: Option<usize>,
    pub generators: Vec<String>,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

impl KGroupReport {
    pub fn seal(mut self) -> KGroupReport {
        self.pass = self.claims.iter().all(|c| c.pass);
        self
    }
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("input is not integer-valued")]
    NotInteger,
    #[error("input is not cylinder-finitary mod finite: {0}")]
    NotCylinderFinitary(String),
    #[error("input is not in the generator span: {0}")]
    NotInSpan(String),
    #[error("expression error: {0}")]
    Sexpr(#[from] sexpr::SexprError),
    #[error("certificate replay failed after construction")]
    ReplayFailed,
}

/// A ℤ-combination of shifted generator indicators `Σ c·(g.1_S)`,
/// the symbolic currency of witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenCombo {
    terms: std::collections::BTreeMap<(Word, BGen), BigInt>,
}

impl GenCombo {
    pub fn zero() -> GenCombo {
        GenCombo::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: &BigInt, shift: Word, gen: BGen) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry((shift, gen)).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GenCombo, scale: &BigInt) {
        for ((shift, gen), c) in &other.terms {
            self.add_term(&(c * scale), shift.clone(), gen.clone());
        }
    }

    pub fn materialize(&self, group: FreeGroup) -> StepFunction {
        let mut acc = StepFunction::zero(group);
        for ((shift, gen), c) in &self.terms {
            let f = StepFunction::indicator(&gen.to_set(group))
                .translate(shift)
                .scale_int(c);
            acc = acc.add(&f);
        }
        acc
    }

    pub fn to_fun_expr(&self) -> FunExpr {
        let mut parts = Vec::new();
        for ((shift, gen), c) in &self.terms {
            let mut e = FunExpr::Ind(gen.to_set_expr());
            if !shift.is_identity() {
                e = FunExpr::Trf(shift.to_string(), Box::new(e));
            }
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

/// A symbolic σ-preimage: one [`GenCombo`] per generator slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaWitness {
    pub slots: [GenCombo; 2],
}

impl SigmaWitness {
    pub fn zero() -> SigmaWitness {
        SigmaWitness::default()
    }

    pub fn add_scaled(&mut self, other: &SigmaWitness, scale: &BigInt) {
        for (mine, theirs) in self.slots.iter_mut().zip(&other.slots) {
            mine.add_scaled(theirs, scale);
        }
    }

    pub fn materialize(&self, group: FreeGroup) -> SigmaInput {
        SigmaInput::new(self.slots.iter().map(|s| s.materialize(group)).collect())
    }
}

/// Witness for the one-letter moves: `x.h = h + σ(step)` where the
/// step references `h` symbolically as a shifted generator.
fn step_witness(wit: &mut SigmaWitness, coefficient: &BigInt, x: Letter, shift: &Word, gen: &BGen) {
    let slot = x.generator();
    debug_assert!(slot < 2);
    if x.is_inverse() {
        // x⁻¹-form: x.h = h + σ(… slot gets +x.h …)
        let moved = Word::single(x).multiply(shift);
        wit.slots[slot].add_term(coefficient, moved, gen.clone());
    } else {
        // generator form: x.h = h + σ(… slot gets −h …)
        wit.slots[slot].add_term(&-coefficient, shift.clone(), gen.clone());
    }
}

/// Builds the witness of `w.1_gen = 1_gen + σ(W)`, one letter at a
/// time from the innermost shift outwards.
pub fn lift_shift(w: &Word, gen: &BGen) -> SigmaWitness {
    let mut wit = SigmaWitness::zero();
    let one = BigInt::one();
    for l in (0..w.len()).rev() {
        let x = w.letters()[l];
        let suffix = w.suffix_from(l + 1);
        step_witness(&mut wit, &one, x, &suffix, gen);
    }
    wit
}

/// A replayable statement `input ≡ Σ canonical_i · gen_i + σ(witness)`
/// mod finite, rendered entirely in the expression grammar so third
/// parties can re-check it without trusting this crate's internals.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionCertificate {
    pub example: u8,
    pub input: String,
    /// Canonical part: (generator expression, coefficient) pairs.
    pub canonical: Vec<(String, String)>,
    /// One function expression per σ slot.
    pub witness: Vec<String>,
}

impl ReductionCertificate {
    /// Parses every field back and checks the defining congruence.
    pub fn replay(&self, group: FreeGroup) -> Result<bool, ReduceError> {
        let input = sexpr::eval_fun(group, &sexpr::parse_fun(&self.input)?)?;
        let mut canonical = StepFunction::zero(group);
        for (gen, c) in &self.canonical {
            let gen = sexpr::eval_fun(group, &sexpr::parse_fun(gen)?)?;
            let c: BigInt = c.parse().map_err(|_| {
                ReduceError::NotInSpan(format!("bad canonical coefficient {c:?}"))
            })?;
            canonical = canonical.add(&gen.scale_int(&c));
        }
        let mut slots = Vec::new();
        for w in &self.witness {
            slots.push(sexpr::eval_fun(group, &sexpr::parse_fun(w)?)?);
        }
        let image = sigma(group, &SigmaInput::new(slots));
        Ok(input.sub(&canonical).sub(&image).is_zero_mod_finite())
    }
}

fn cylinder_gen_expr(group: FreeGroup, letter: Letter) -> String {
    let _ = group;
    FunExpr::Ind(SetExpr::Cyl(letter.to_string())).to_string()
}

/// Renders a mod-finite representative of `f` as a cylinder sum.
fn depth_representative_expr(group: FreeGroup, k: usize, coords: &[BigInt]) -> FunExpr {
    let mut parts = Vec::new();
    for (t, c) in group.sphere(k).iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let mut e = FunExpr::Ind(SetExpr::Cyl(t.to_string()));
        if *c != BigInt::one() {
            e = FunExpr::Scl(num_rational::BigRational::from_integer(c.clone()), Box::new(e));
        }
        parts.push(e);
    }
    match parts.len() {
        0 => FunExpr::Zero,
        1 => parts.pop().unwrap(),
        _ => FunExpr::Add(parts),
    }
}

/// Reduces an integer, cylinder-finitary step function to its
/// canonical K-class coordinates `(n, m)` over the two positive
/// level-1 cylinders, with a σ-preimage witnessing the difference.
///
/// The algorithm walks each cylinder generator down to its last
/// letter (each one-letter move is an exact σ-image), then removes
/// the two inverse-letter cylinders with the relations
/// `σ(0, −1_{𝓑(b⁻¹)}) ≡ 1_{𝓑(a)} + 1_{𝓑(a⁻¹)}` and
/// `σ(−1_{𝓑(a⁻¹)}, 0) ≡ 1_{𝓑(b)} + 1_{𝓑(b⁻¹)}` mod finite.
pub fn k0_reduce_example1(
    group: FreeGroup,
    f: &StepFunction,
    input_expr: Option<String>,
) -> Result<ReductionCertificate, ReduceError> {
    assert_eq!(group.rank(), 2, "the worked examples have rank 2");
    if !f.is_integer_valued() {
        return Err(ReduceError::NotInteger);
    }
    let k = funcalc::depth_of(f)
        .map_err(|e| ReduceError::NotCylinderFinitary(e.to_string()))?
        .max(1);
    let coords = funcalc::coords_at_depth(f, k)
        .map_err(|e| ReduceError::NotCylinderFinitary(e.to_string()))?;

    let a = group.generator(0);
    let b = group.generator(1);
    let mut level1 = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let mut witness = SigmaWitness::zero();
    for (t, v) in group.sphere(k).iter().zip(&coords) {
        if v.is_zero() {
            continue;
        }
        let c = t.last().expect("sphere(k≥1) words are nonempty");
        let prefix = t.prefix(t.len() - 1);
        witness.add_scaled(&lift_shift(&prefix, &BGen::Cylinder(Word::single(c))), v);
        level1[c.index()] += v;
    }

    // eliminate 1_{𝓑(a⁻¹)}
    let na = std::mem::take(&mut level1[a.inverse().index()]);
    level1[a.index()] -= &na;
    witness.slots[1].add_term(&-&na, Word::identity(), BGen::Cylinder(Word::single(b.inverse())));
    // eliminate 1_{𝓑(b⁻¹)}
    let nb = std::mem::take(&mut level1[b.inverse().index()]);
    level1[b.index()] -= &nb;
    witness.slots[0].add_term(&-&nb, Word::identity(), BGen::Cylinder(Word::single(a.inverse())));

    let cert = ReductionCertificate {
        example: 1,
        input: input_expr
            .unwrap_or_else(|| depth_representative_expr(group, k, &coords).to_string()),
        canonical: vec![
            (cylinder_gen_expr(group, a), level1[a.index()].to_string()),
            (cylinder_gen_expr(group, b), level1[b.index()].to_string()),
        ],
        witness: witness.slots.iter().map(|s| s.to_fun_expr().to_string()).collect(),
    };
    if !cert.replay(group)? {
        return Err(ReduceError::ReplayFailed);
    }
    Ok(cert)
}

/// The matrix of `σ` from depth-`k` cylinder coordinates to depth-
/// `(k+1)` ones, mod finite: one column per (generator slot, cylinder
/// of length `k`), one row per cylinder of length `k+1`.
pub fn sigma_matrix(group: FreeGroup, k: usize) -> IntMatrix {
    assert!(k >= 1);
    let sphere_k = group.sphere(k);
    let sphere_k1 = group.sphere(k + 1);
    let index: std::collections::HashMap<&Word, usize> =
        sphere_k1.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let dk = sphere_k.len();
    let rows = sphere_k1.len();
    let mut m = IntMatrix::zeros(rows, group.rank() * dk);

    // all length-(k+1) extensions of t
    let expansions = |t: &Word| -> Vec<Word> {
        let mut out = vec![t.clone()];
        while out[0].len() < k + 1 {
            out = out
                .iter()
                .flat_map(|w| {
                    group
                        .letters()
                        .filter(|l| !w.last().is_some_and(|last| last.cancels(*l)))
                        .map(|l| w.push_reduced(l))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        out
    };

    for (slot, x) in (0..group.rank()).map(|i| (i, group.generator(i))) {
        for (j, t) in sphere_k.iter().enumerate() {
            let col = slot * dk + j;
            for u in expansions(t) {
                m[(index[&u], col)] += 1;
            }
            // subtract the expansion of x.1_{𝓑(t)}
            if t.first() == Some(x.inverse()) {
                let rest = t.suffix_from(1);
                if rest.is_identity() {
                    // x.𝓑(x⁻¹) is everything not starting with x, mod finite
                    for u in &sphere_k1 {
                        if u.first() != Some(x) {
                            m[(index[u], col)] -= 1;
                        }
                    }
                } else {
                    for u in expansions(&rest) {
                        m[(index[&u], col)] -= 1;
                    }
                }
            } else {
                let xt = Word::single(x).multiply(t);
                m[(index[&xt], col)] -= 1;
            }
        }
    }
    m
}

/// Same columns computed through the step-function layer, for the
/// two-path consistency check.
pub fn sigma_matrix_semantic(group: FreeGroup, k: usize) -> IntMatrix {
    let sphere_k = group.sphere(k);
    let dk = sphere_k.len();
    let mut cols = Vec::with_capacity(group.rank() * dk);
    for slot in 0..group.rank() {
        for t in &sphere_k {
            let ind = StepFunction::indicator(&RegSet::cylinder_unchecked(group, t));
            let mut components = vec![StepFunction::zero(group); group.rank()];
            components[slot] = ind;
            let image = sigma(group, &SigmaInput::new(components));
            cols.push(
                funcalc::coords_at_depth(&image, k + 1)
                    .expect("sigma of a cylinder tuple is cylinder-finitary"),
            );
        }
    }
    IntMatrix::from_columns(cols)
}

/// Kernel computation for Example 1 at depth `k`: asserts rank 2 and
/// that the kernel lattice is exactly the constants.
pub fn k1_example1(group: FreeGroup, k: usize) -> KGroupReport {
    let m = sigma_matrix(group, k);
    let dk = group.sphere(k).len();
    let kernel = intlinalg::kernel_basis(&m);
    let mut claims = Vec::new();

    claims.push(Claim::new(
        "kernel_rank_2",
        kernel.len() == 2,
        format!("kernel rank {} at depth {k} (matrix {}×{})", kernel.len(), m.rows(), m.cols()),
    ));

    let ones_first: Vec<BigInt> = (0..2 * dk)
        .map(|i| if i < dk { BigInt::one() } else { BigInt::zero() })
        .collect();
    let ones_second: Vec<BigInt> = (0..2 * dk)
        .map(|i| if i >= dk { BigInt::one() } else { BigInt::zero() })
        .collect();
    let consts_in_kernel = m.mul_vec(&ones_first).iter().all(|x| x.is_zero())
        && m.mul_vec(&ones_second).iter().all(|x| x.is_zero());
    claims.push(Claim::new(
        "constants_in_kernel",
        consts_in_kernel,
        "σ kills the two constant tuples".to_string(),
    ));

    // the kernel basis spans all integral solutions, so the lattice
    // equals the constants iff every basis vector is block-constant
    let block_constant = kernel.iter().all(|v| {
        v[..dk].iter().all(|x| *x == v[0]) && v[dk..].iter().all(|x| *x == v[dk])
    });
    claims.push(Claim::new(
        "kernel_is_constant_lattice",
        block_constant,
        "every kernel basis vector is constant on each slot".to_string(),
    ));

    // replay: reassemble kernel vectors and check σ = 0 mod finite
    let replay = kernel.iter().all(|v| {
        let h1 = funcalc::from_depth_coords(group, k, &v[..dk]);
        let h2 = funcalc::from_depth_coords(group, k, &v[dk..]);
        sigma(group, &SigmaInput::pair(h1, h2)).is_zero_mod_finite()
    });
    claims.push(Claim::new(
        "kernel_replay",
        replay,
        "reassembled kernel tuples satisfy h₁+h₂ = a.h₁+b.h₂ mod finite".to_string(),
    ));

    KGroupReport {
        example: 1,
        which: "k1".into(),
        depth: k,
        pattern_bound: None,
        kernel_rank: Some(kernel.len()),
        generators: vec!["(1, 0) constant tuple".into(), "(0, 1) constant tuple".into()],
        claims,
        pass: false,
    }
    .seal()
}

/// Checks that no nonzero combination `n·[1_{𝓑(a)}] + m·[1_{𝓑(b)}]`
/// lies in the image of the depth-`k` σ matrix.
pub fn k0_independence_example1(group: FreeGroup, k: usize) -> Claim {
    let m = sigma_matrix(group, k);
    let a_coords = funcalc::coords_at_depth(
        &StepFunction::indicator(&RegSet::cylinder_unchecked(
            group,
            &Word::single(group.generator(0)),
        )),
        k + 1,
    )
    .expect("cylinder indicator");
    let b_coords = funcalc::coords_at_depth(
        &StepFunction::indicator(&RegSet::cylinder_unchecked(
            group,
            &Word::single(group.generator(1)),
        )),
        k + 1,
    )
    .expect("cylinder indicator");
    let n = IntMatrix::from_columns(vec![a_coords, b_coords]);
    let inter = intlinalg::lattice_intersect(&m, &n).expect("same ambient dimension");
    Claim::new(
        "independence",
        inter.is_empty(),
        format!(
            "im(σ at depth {k}) meets the span of the two positive cylinders in {} vectors",
            inter.len()
        ),
    )
}

/// Bundles reduction plus independence evidence for Example 1.
pub fn k0_example1(group: FreeGroup, depth: usize) -> KGroupReport {
    let mut claims = Vec::new();
    for k in 1..=depth {
        let c = k0_independence_example1(group, k);
        claims.push(Claim::new(&format!("independence_depth_{k}"), c.pass, c.details));
    }
    // reduce the twelve depth-2 cylinder generators as a smoke check
    let mut reduced = 0usize;
    let mut replayed = true;
    for t in group.sphere(2) {
        let f = StepFunction::indicator(&RegSet::cylinder_unchecked(group, &t));
        match k0_reduce_example1(group, &f, None) {
            Ok(cert) => {
                reduced += 1;
                replayed &= cert.replay(group).unwrap_or(false);
            }
            Err(_) => replayed = false,
        }
    }
    claims.push(Claim::new(
        "depth2_generators_reduce",
        reduced == group.sphere(2).len() && replayed,
        format!("{reduced} depth-2 cylinder classes reduced with replayed witnesses"),
    ));

    KGroupReport {
        example: 1,
        which: "k0".into(),
        depth,
        pattern_bound: None,
        kernel_rank: None,
        generators: vec!["[1_{B(a)}]".into(), "[1_{B(b)}]".into()],
        claims,
        pass: false,
    }
    .seal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use crate::funcalc::Comparison;
    use crate::regset::Pattern;

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

    #[test]
    fn sigma_identities() {
        // σ(0, −1_{𝓑(b⁻¹)}) ≡ 1_{𝓑(a)} + 1_{𝓑(a⁻¹)} mod finite
        let lhs = sigma(
            g(),
            &SigmaInput::pair(StepFunction::zero(g()), ind(&cyl("B")).neg()),
        );
        let rhs = ind(&cyl("a")).add(&ind(&cyl("A")));
        assert!(lhs.sub(&rhs).is_zero_mod_finite());
        assert!(!lhs.equal(&rhs, Comparison::Exact));

        // σ(−1_{𝓑(a⁻¹)}, 0) ≡ 1_{𝓑(b)} + 1_{𝓑(b⁻¹)}
        let lhs = sigma(
            g(),
            &SigmaInput::pair(ind(&cyl("A")).neg(), StepFunction::zero(g())),
        );
        let rhs = ind(&cyl("b")).add(&ind(&cyl("B")));
        assert!(lhs.sub(&rhs).is_zero_mod_finite());

        // constants die
        let c = StepFunction::constant(g(), num_rational::BigRational::from_i64(5).unwrap());
        let k = StepFunction::constant(g(), num_rational::BigRational::from_i64(-3).unwrap());
        assert!(sigma(g(), &SigmaInput::pair(c, k)).is_zero());
    }

    #[test]
    fn lift_shift_is_exact() {
        // w.1_gen = 1_gen + σ(lift) as an exact identity
        for (shift, base) in [
            ("ab", "a"),
            ("B", "b"),
            ("bAb", "B"),
            ("aa", "A"),
        ] {
            let shift = w(shift);
            let base_letter = w(base).first().unwrap();
            let gen = BGen::Cylinder(Word::single(base_letter));
            let wit = lift_shift(&shift, &gen);
            let lhs = ind(&gen.to_set(g())).translate(&shift);
            let rhs = ind(&gen.to_set(g())).add(&sigma(g(), &wit.materialize(g())));
            assert!(lhs.equal(&rhs, Comparison::Exact), "lift failed for {shift}");
        }
    }

    #[test]
    fn sigma_matrix_shape_and_two_paths() {
        let m1 = sigma_matrix(g(), 1);
        assert_eq!((m1.rows(), m1.cols()), (12, 8));
        for k in 1..=3 {
            let fast = sigma_matrix(g(), k);
            let slow = sigma_matrix_semantic(g(), k);
            assert_eq!(fast, slow, "two-path mismatch at depth {k}");
        }
    }

    #[test]
    fn sigma_matrix_column_example() {
        // column of (slot a, t = a): σ(1_{𝓑(a)}, 0) = 1_{𝓑(a)} − 1_{𝓑(aa)}
        let m = sigma_matrix(g(), 1);
        let sphere1 = g().sphere(1);
        let sphere2 = g().sphere(2);
        let col_a = sphere1.iter().position(|t| *t == w("a")).unwrap();
        for (i, u) in sphere2.iter().enumerate() {
            let expected = i64::from(w("a").is_prefix_of(u)) - i64::from(*u == w("aa"));
            assert_eq!(m[(i, col_a)], BigInt::from(expected), "row {u}");
        }
        // constants are killed
        let dk = sphere1.len();
        let ones: Vec<BigInt> = vec![BigInt::one(); 2 * dk];
        assert!(m.mul_vec(&ones).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn k1_example1_small_depths() {
        for k in 1..=3 {
            let report = k1_example1(g(), k);
            assert!(report.pass, "depth {k}: {:?}", report.claims);
            assert_eq!(report.kernel_rank, Some(2));
        }
    }

    #[test]
    fn k0_reduction_examples() {
        // 1_{𝓑(ab)} → (0, 1)
        let cert = k0_reduce_example1(g(), &ind(&cyl("ab")), None).unwrap();
        assert_eq!(cert.canonical[0].1, "0");
        assert_eq!(cert.canonical[1].1, "1");
        assert!(cert.replay(g()).unwrap());

        // constant 1 → (0, 0)
        let cert = k0_reduce_example1(g(), &StepFunction::one(g()), None).unwrap();
        assert_eq!(cert.canonical[0].1, "0");
        assert_eq!(cert.canonical[1].1, "0");

        // 1_{𝓑(a)} → (1, 0) with no witness needed
        let cert = k0_reduce_example1(g(), &ind(&cyl("a")), None).unwrap();
        assert_eq!(cert.canonical[0].1, "1");
        assert_eq!(cert.canonical[1].1, "0");
        assert!(cert.witness.iter().all(|s| s == "(zero)"));

        // pattern indicators are rejected
        let p = ind(&RegSet::pattern(g(), &Pattern::parse("", "a", "b", 2).unwrap()));
        assert!(matches!(
            k0_reduce_example1(g(), &p, None),
            Err(ReduceError::NotCylinderFinitary(_))
        ));
    }

    #[test]
    fn k0_independence_small_depths() {
        for k in 1..=3 {
            assert!(k0_independence_example1(g(), k).pass, "depth {k}");
        }
    }

    #[test]
    fn certificate_tampering_is_caught() {
        let cert = k0_reduce_example1(g(), &ind(&cyl("ab")), None).unwrap();
        let mut bad = cert.clone();
        bad.canonical[0].1 = "7".into();
        assert!(!bad.replay(g()).unwrap());
        let mut bad = cert;
        bad.witness[0] = "(ind (cyl \"b\"))".into();
        assert!(!bad.replay(g()).unwrap());
    }
}
