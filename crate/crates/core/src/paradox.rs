//! Paradoxical-decomposition certificates and their verifiers.
//!
//! A certificate names a target set `E`, pieces `V₁, …, V_{n+m}`
//! split into two halves, and translators `t₁, …, t_{n+m}`. The weak
//! conditions ask each half's pieces to cover `E` and all translated
//! pieces to sit disjointly inside `E`; the strong conditions
//! additionally make each half a partition of `E` and the translated
//! pieces a partition of `E`. A strong certificate yields two partial
//! isometries realizing the doubling identities
//! `p = vv* = ww* = v*v + w*w` in the crossed product.
//!
//! Everything is stored in the set-expression grammar, so
//! certificates serialize as text and replay through the parser.

use num_bigint::BigInt;
use serde::Serialize;

use crate::freegroup::{FreeGroup, Letter, Word};
use crate::funcalc::{Comparison, StepFunction};
use crate::ktheory::{BGen, Claim};
use crate::regset::RegSet;
use crate::sexpr::{self, SetExpr};
use crate::xprod::CcElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strength {
    Weak,
    Strong,
}

/// A paradoxical-decomposition certificate over the set grammar.
#[derive(Clone, Debug, Serialize)]
pub struct ParadoxCert {
    pub target: String,
    pub pieces: Vec<String>,
    pub translators: Vec<String>,
    /// Number of pieces in the first half.
    pub split: usize,
    pub strength: Strength,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub strength: Strength,
    pub failures: Vec<String>,
}

impl ParadoxCert {
    fn new(
        target: SetExpr,
        pieces: Vec<SetExpr>,
        translators: Vec<Word>,
        split: usize,
        strength: Strength,
    ) -> ParadoxCert {
        ParadoxCert {
            target: target.to_string(),
            pieces: pieces.iter().map(|p| p.to_string()).collect(),
            translators: translators.iter().map(|t| t.to_string()).collect(),
            split,
            strength,
        }
    }

    pub fn target_set(&self, group: FreeGroup) -> Result<RegSet, sexpr::SexprError> {
        sexpr::eval_set(group, &sexpr::parse_set(&self.target)?)
    }

    pub fn piece_sets(&self, group: FreeGroup) -> Result<Vec<RegSet>, sexpr::SexprError> {
        self.pieces
            .iter()
            .map(|p| sexpr::eval_set(group, &sexpr::parse_set(p)?))
            .collect()
    }

    pub fn translator_words(&self, group: FreeGroup) -> Result<Vec<Word>, String> {
        self.translators
            .iter()
            .map(|t| group.parse(t).map_err(|e| e.to_string()))
            .collect()
    }
}

/// Checks every condition of the certificate's claimed strength and
/// reports each failure.
pub fn verify_cert(group: FreeGroup, cert: &ParadoxCert) -> Verdict {
    let mut failures = Vec::new();
    let target = match cert.target_set(group) {
        Ok(t) => t,
        Err(e) => {
            return Verdict {
                passed: false,
                strength: cert.strength,
                failures: vec![format!("target does not parse: {e}")],
            }
        }
    };
    let pieces = match cert.piece_sets(group) {
        Ok(p) => p,
        Err(e) => {
            return Verdict {
                passed: false,
                strength: cert.strength,
                failures: vec![format!("piece does not parse: {e}")],
            }
        }
    };
    let translators = match cert.translator_words(group) {
        Ok(t) => t,
        Err(e) => {
            return Verdict {
                passed: false,
                strength: cert.strength,
                failures: vec![format!("translator does not parse: {e}")],
            }
        }
    };
    if pieces.len() != translators.len() {
        failures.push("piece and translator counts differ".into());
    }
    if cert.split == 0 || cert.split >= pieces.len() {
        failures.push("split must leave both halves nonempty".into());
    }
    if !failures.is_empty() {
        return Verdict { passed: false, strength: cert.strength, failures };
    }

    for (i, p) in pieces.iter().enumerate() {
        if p.is_empty() {
            failures.push(format!("piece {i} is empty"));
        }
    }

    let half = |range: std::ops::Range<usize>| -> RegSet {
        range.fold(RegSet::empty(group), |acc, i| acc.union(&pieces[i]))
    };
    let first = half(0..cert.split);
    let second = half(cert.split..pieces.len());
    if first != target {
        failures.push("first-half pieces do not cover the target".into());
    }
    if second != target {
        failures.push("second-half pieces do not cover the target".into());
    }

    let images: Vec<RegSet> = pieces
        .iter()
        .zip(&translators)
        .map(|(p, t)| p.translate(t))
        .collect();
    for (i, img) in images.iter().enumerate() {
        if !img.is_subset(&target) {
            failures.push(format!("translate of piece {i} leaves the target"));
        }
        for (j, other) in images.iter().enumerate().take(i) {
            if !img.is_disjoint(other) {
                failures.push(format!("translates of pieces {j} and {i} overlap"));
            }
        }
    }

    if cert.strength == Strength::Strong {
        for i in 0..pieces.len() {
            for j in 0..i {
                let same_half = (i < cert.split) == (j < cert.split);
                if same_half && !pieces[i].is_disjoint(&pieces[j]) {
                    failures.push(format!("pieces {j} and {i} overlap within a half"));
                }
            }
        }
        let total = images
            .iter()
            .fold(RegSet::empty(group), |acc, img| acc.union(img));
        if total != target {
            failures.push("translated pieces do not tile the target".into());
        }
    }

    Verdict { passed: failures.is_empty(), strength: cert.strength, failures }
}

/// Set expression for `{x⁻¹-powers} ∪ {e}`, the diagonal absorbed by
/// the standard decomposition (rank 2).
fn diagonal_expr(group: FreeGroup) -> SetExpr {
    // {a⁻ᵏ : k ≥ 0} = {e} ∪ (𝓑(a⁻¹) minus the words that leave the
    // a⁻¹-run)
    let a_inv = group.generator(0).inverse().to_string();
    let b = group.generator(1).to_string();
    let b_inv = group.generator(1).inverse().to_string();
    SetExpr::Uni(vec![
        SetExpr::Fin(vec![String::new()]),
        SetExpr::Dif(
            Box::new(SetExpr::Cyl(a_inv.clone())),
            Box::new(SetExpr::Uni(vec![
                SetExpr::Pat(String::new(), a_inv.clone(), b),
                SetExpr::Pat(String::new(), a_inv, b_inv),
            ])),
        ),
    ])
}

/// The standard strong certificate doubling the whole group: the
/// four first-letter classes with the `a`-power diagonal absorbed
/// into the positive class, read backwards so the translated pieces
/// tile the group exactly once while each half partitions it.
pub fn standard_cert(group: FreeGroup) -> ParadoxCert {
    assert_eq!(group.rank(), 2, "the standard decomposition is for rank 2");
    let a = group.generator(0);
    let b = group.generator(1);
    let diag = diagonal_expr(group);
    // A1 = 𝓑(a) ∪ D, A2 = 𝓑(a⁻¹) ∖ D
    let a1 = SetExpr::Uni(vec![SetExpr::Cyl(a.to_string()), diag.clone()]);
    let a2 = SetExpr::Dif(
        Box::new(SetExpr::Cyl(a.inverse().to_string())),
        Box::new(diag),
    );
    let a3 = SetExpr::Cyl(b.to_string());
    let a4 = SetExpr::Cyl(b.inverse().to_string());
    // halves {A1, a.A2} and {A3, b.A4}; translators undo the shifts,
    // so the images are the four disjoint classes
    let pieces = vec![
        a1,
        SetExpr::Tr(a.to_string(), Box::new(a2)),
        a3,
        SetExpr::Tr(b.to_string(), Box::new(a4)),
    ];
    let translators = vec![
        Word::identity(),
        Word::single(a.inverse()),
        Word::identity(),
        Word::single(b.inverse()),
    ];
    let cert = ParadoxCert::new(SetExpr::All, pieces, translators, 2, Strength::Strong);
    debug_assert!(verify_cert(group, &cert).passed);
    cert
}

/// A weak certificate doubling a cylinder: the cylinder maps into
/// two disjoint sub-cylinders by conjugated letter shifts.
pub fn cylinder_cert(group: FreeGroup, t: &Word) -> Result<ParadoxCert, String> {
    if t.is_identity() {
        return Err("use the standard certificate for the whole group".into());
    }
    let c = t.last().expect("nonempty");
    // a letter extending t without cancellation, other than c
    let c2 = group
        .letters()
        .find(|l| *l != c && *l != c.inverse())
        .expect("rank ≥ 2 has a spare letter");
    // t·c·t⁻¹ maps 𝓑(t) onto 𝓑(tc); t·c2·c·t⁻¹ maps it onto 𝓑(t·c2·c)
    let shift1 = t.multiply(&Word::single(c)).multiply(&t.inverse());
    let shift2 = t
        .multiply(&Word::single(c2))
        .multiply(&Word::single(c))
        .multiply(&t.inverse());
    let target = SetExpr::Cyl(t.to_string());
    let cert = ParadoxCert::new(
        target.clone(),
        vec![target.clone(), target],
        vec![shift1, shift2],
        1,
        Strength::Weak,
    );
    debug_assert!(verify_cert(group, &cert).passed);
    Ok(cert)
}

/// The doubling isometries of a strong certificate, with the
/// identities verified in the crossed product.
pub struct IsometryPair {
    pub v: CcElement,
    pub w: CcElement,
    pub unit: StepFunction,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

/// Builds `v = Σ_{k<split} 1_{V_k} u_{t_k⁻¹}` and `w` from the second
/// half, then checks `p = vv* = ww* = v*v + w*w` exactly, with both
/// `v*v` and `w*w` scalar.
pub fn cert_to_isometries(group: FreeGroup, cert: &ParadoxCert) -> Result<IsometryPair, String> {
    if cert.strength != Strength::Strong {
        return Err("strengthen the certificate first: isometries need a strong one".into());
    }
    let verdict = verify_cert(group, cert);
    if !verdict.passed {
        return Err(format!("certificate does not verify: {:?}", verdict.failures));
    }
    let pieces = cert.piece_sets(group).map_err(|e| e.to_string())?;
    let translators = cert.translator_words(group)?;
    let unit = StepFunction::indicator(&cert.target_set(group).map_err(|e| e.to_string())?);

    let build = |range: std::ops::Range<usize>| -> CcElement {
        let mut acc = CcElement::zero(group);
        for i in range {
            acc = acc.add(&CcElement::term(
                StepFunction::indicator(&pieces[i]),
                &translators[i].inverse(),
            ));
        }
        acc
    };
    let v = build(0..cert.split);
    let w = build(cert.split..pieces.len());

    let vv = v.mul(&v.adjoint()).as_scalar();
    let ww = w.mul(&w.adjoint()).as_scalar();
    let vsv = v.adjoint().mul(&v).as_scalar();
    let wsw = w.adjoint().mul(&w).as_scalar();
    let mut claims = Vec::new();
    claims.push(Claim::new(
        "vv_star",
        vv.as_ref() == Some(&unit),
        "v·v* equals the target projection exactly".into(),
    ));
    claims.push(Claim::new(
        "ww_star",
        ww.as_ref() == Some(&unit),
        "w·w* equals the target projection exactly".into(),
    ));
    let halves_sum = match (&vsv, &wsw) {
        (Some(x), Some(y)) => x.add(y).equal(&unit, Comparison::Exact),
        _ => false,
    };
    claims.push(Claim::new(
        "ranges_split_unit",
        halves_sum,
        "v*v + w*w equals the target projection exactly".into(),
    ));
    claims.push(Claim::new(
        "ranges_diagonal",
        vsv.is_some() && wsw.is_some(),
        "v*v and w*w are scalar (no off-diagonal terms)".into(),
    ));
    let pass = claims.iter().all(|c| c.pass);
    Ok(IsometryPair { v, w, unit, claims, pass })
}

/// Outcome of an infiniteness-witness search: a translator moving the
/// base projection strictly inside the obstructed remainder.
#[derive(Clone, Debug, Serialize)]
pub struct InfinitenessWitness {
    pub translator: String,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

/// Finds `t` with `t.p ≤ (p − p₁)⋯(p − p_n)` and `t.p` strictly
/// below it, for a cylinder or pattern generator `p` and pattern
/// obstructions `p_i ⪇ p`.
pub fn infiniteness_witness(
    group: FreeGroup,
    p: &BGen,
    obstructions: &[BGen],
) -> Result<InfinitenessWitness, String> {
    assert_eq!(group.rank(), 2, "witness formulas are for rank 2");
    let p_set = p.to_set(group);
    let p_fun = StepFunction::indicator(&p_set);
    let mut remainder = p_fun.clone();
    for (i, obs) in obstructions.iter().enumerate() {
        let obs_set = obs.to_set(group);
        if !obs_set.is_subset(&p_set) || obs_set == p_set {
            return Err(format!("obstruction {i} is not strictly below the base projection"));
        }
        if !matches!(obs, BGen::Pattern(_)) {
            return Err(format!("obstruction {i} must be a pattern generator"));
        }
        remainder = remainder.mul(&p_fun.sub(&StepFunction::indicator(&obs_set)));
    }

    let candidates: Vec<Word> = match p {
        BGen::Cylinder(s) => {
            let mut out = Vec::new();
            if obstructions.is_empty() {
                // t = s when s·s concatenates cleanly, else s·c for the
                // least letter keeping both concatenations reduced
                if s.last() != Some(s.first().unwrap().inverse()) {
                    out.push(s.clone());
                } else {
                    let c = group
                        .letters()
                        .find(|l| {
                            s.last() != Some(l.inverse()) && *l != s.first().unwrap().inverse()
                        })
                        .expect("rank ≥ 2 leaves a usable letter");
                    out.push(s.push_reduced(c));
                }
            } else {
                // dive along alternating blocks below the last letter
                let c0 = s.last().unwrap();
                let o = opposite(c0);
                let prefix = s.prefix(s.len() - 1);
                for n in 0..24usize {
                    let mut inner = Word::identity();
                    for _ in 0..n {
                        inner = inner.push_reduced(c0).push_reduced(o.inverse());
                    }
                    inner = inner.push_reduced(c0).push_reduced(o);
                    // conjugate back over the cylinder prefix
                    out.push(prefix.multiply(&inner).multiply(&prefix.inverse()));
                }
            }
            out
        }
        BGen::Pattern(pat) => {
            let c0 = pat.tail()[0];
            let z = pat.final_letter();
            let y: Word = pat.tail()[1..]
                .iter()
                .fold(Word::identity(), |w, &l| w.push_reduced(l));
            let head = pat.head().clone();
            (1..24usize)
                .map(|n| {
                    let mut t = Word::identity();
                    for _ in 0..n {
                        t = t.push_reduced(c0);
                    }
                    let t = t
                        .multiply(&y)
                        .push_reduced(z)
                        .multiply(&Word::single(opposite(z).inverse()))
                        .push_reduced(z);
                    head.multiply(&t).multiply(&head.inverse())
                })
                .collect()
        }
        BGen::Universe => return Err("the unit is not moved strictly below itself".into()),
    };

    for t in candidates {
        let moved = p_fun.translate(&t);
        let below = moved.mul(&remainder).equal(&moved, Comparison::Exact);
        let proper = !moved.equal(&remainder, Comparison::Exact);
        if below && proper {
            let claims = vec![
                Claim::new(
                    "below_remainder",
                    true,
                    format!("t.p sits inside the obstructed remainder for t = {t}"),
                ),
                Claim::new("strictly_below", true, "t.p differs from the remainder".into()),
            ];
            return Ok(InfinitenessWitness {
                translator: t.to_string(),
                claims,
                pass: true,
            });
        }
    }
    Err("no translator found within the search bound".into())
}

fn opposite(c: Letter) -> Letter {
    Letter::new(1 - c.generator().min(1), c.is_inverse())
}

/// A three-coloring of the group by the leading `a`-run exponent mod
/// 3: a partition of the unit into three projections, each orthogonal
/// to its translate by `a`.
pub struct ThreeColoring {
    pub classes: [StepFunction; 3],
    pub shift: Word,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

pub fn three_coloring(group: FreeGroup) -> ThreeColoring {
    assert_eq!(group.rank(), 2, "the coloring uses the first generator's runs");
    let a = group.generator(0);
    let shift = Word::single(a);
    let classes = [0u8, 1, 2].map(|r| StepFunction::indicator(&run_class(group, r)));
    let mut claims = Vec::new();

    let sum = classes.iter().fold(StepFunction::zero(group), |acc, c| acc.add(c));
    claims.push(Claim::new(
        "partition_of_unit",
        sum.equal(&StepFunction::one(group), Comparison::Exact),
        "the three classes sum to 1 exactly".into(),
    ));
    for (i, c) in classes.iter().enumerate() {
        let moved = c.translate(&shift);
        claims.push(Claim::new(
            &format!("orthogonal_translate_{i}"),
            moved.mul(c).is_zero(),
            format!("a.class{i} · class{i} = 0 exactly"),
        ));
    }
    // fullness mechanism: a.e ≤ 1 − e for each class
    let one = StepFunction::one(group);
    let full = classes.iter().all(|c| {
        let moved = c.translate(&shift);
        moved.mul(&one.sub(c)).equal(&moved, Comparison::Exact)
    });
    claims.push(Claim::new(
        "translate_below_complement",
        full,
        "a.e ≤ 1 − e exactly for each class".into(),
    ));

    let pass = claims.iter().all(|c| c.pass);
    ThreeColoring { classes, shift, claims, pass }
}

/// The set of words whose leading run of `a`-letters has signed
/// exponent ≡ r (mod 3).
fn run_class(group: FreeGroup, r: u8) -> RegSet {
    let alphabet = group.alphabet_size();
    let a = group.generator(0);
    // states: 0 start; 1..=3 inside a-run (residue 1, 2, 0);
    // 4..=6 inside a⁻¹-run (residue 2, 1, 0); 7..=9 run finished
    // (residue 0, 1, 2); 10 dead
    let n = 11usize;
    let dead = 10u32;
    let state_pos = |j: usize| (1 + (j + 2) % 3) as u32; // run residue j → state
    let state_neg = |j: usize| (4 + [2usize, 1, 0][j % 3]) as u32;
    let done = |j: usize| (7 + j) as u32;
    let mut trans = vec![dead; n * alphabet];
    for l in group.letters() {
        let li = l.index();
        // start
        trans[li] = if l == a {
            state_pos(1)
        } else if l == a.inverse() {
            state_neg(2)
        } else {
            done(0)
        };
        // positive runs: residue j at state_pos(j)
        for j in 0..3 {
            let s = state_pos(j) as usize;
            trans[s * alphabet + li] = if l == a {
                state_pos((j + 1) % 3)
            } else if l == a.inverse() {
                dead // impossible in a reduced word
            } else {
                done(j)
            };
        }
        // negative runs
        for j in 0..3 {
            let s = state_neg(j) as usize;
            trans[s * alphabet + li] = if l == a.inverse() {
                state_neg((j + 2) % 3)
            } else if l == a {
                dead
            } else {
                done(j)
            };
        }
        for j in 0..3 {
            let s = done(j) as usize;
            trans[s * alphabet + li] = done(j);
        }
    }
    let mut accept = vec![false; n];
    if r == 0 {
        accept[0] = true; // the identity has run 0
    }
    accept[state_pos(r as usize) as usize] = true;
    accept[state_neg(r as usize) as usize] = true;
    accept[done(r as usize) as usize] = true;
    RegSet::from_raw(group, 0, accept, trans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regset::Pattern;

    fn g() -> FreeGroup {
        FreeGroup::new(2)
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn standard_cert_is_strong() {
        let cert = standard_cert(g());
        let verdict = verify_cert(g(), &cert);
        assert!(verdict.passed, "{:?}", verdict.failures);
        assert_eq!(cert.strength, Strength::Strong);
    }

    #[test]
    fn standard_cert_indicator_identities() {
        // each half's pieces partition the group at the indicator level
        let cert = standard_cert(g());
        let pieces = cert.piece_sets(g()).unwrap();
        let first = StepFunction::indicator(&pieces[0]).add(&StepFunction::indicator(&pieces[1]));
        let second = StepFunction::indicator(&pieces[2]).add(&StepFunction::indicator(&pieces[3]));
        assert_eq!(first, StepFunction::one(g()));
        assert_eq!(second, StepFunction::one(g()));
        // and the translated pieces partition it again
        let translators = cert.translator_words(g()).unwrap();
        let total = pieces
            .iter()
            .zip(&translators)
            .fold(StepFunction::zero(g()), |acc, (p, t)| {
                acc.add(&StepFunction::indicator(&p.translate(t)))
            });
        assert_eq!(total, StepFunction::one(g()));
    }

    #[test]
    fn corrupted_cert_fails() {
        let mut cert = standard_cert(g());
        // overlap two translated pieces
        cert.translators[1] = "".into();
        let verdict = verify_cert(g(), &cert);
        assert!(!verdict.passed);
        assert!(verdict
            .failures
            .iter()
            .any(|f| f.contains("overlap") || f.contains("tile")));
    }

    #[test]
    fn cylinder_certs_verify_weak() {
        for t in ["a", "ab", "Ba", "bAb"] {
            let cert = cylinder_cert(g(), &w(t)).unwrap();
            let verdict = verify_cert(g(), &cert);
            assert!(verdict.passed, "{t}: {:?}", verdict.failures);
        }
        // degenerate corruption: both halves map to the same place
        let mut cert = cylinder_cert(g(), &w("a")).unwrap();
        cert.translators[1] = cert.translators[0].clone();
        assert!(!verify_cert(g(), &cert).passed);
    }

    #[test]
    fn isometries_from_standard_cert() {
        let pair = cert_to_isometries(g(), &standard_cert(g())).unwrap();
        assert!(pair.pass, "{:?}", pair.claims);
        assert_eq!(pair.unit, StepFunction::one(g()));
        // corrupted translator breaks vv*
        let mut bad = standard_cert(g());
        bad.translators[0] = "b".into();
        match cert_to_isometries(g(), &bad) {
            Err(_) => {}
            Ok(pair) => assert!(!pair.pass),
        }
    }

    #[test]
    fn weak_cert_cannot_make_isometries() {
        let cert = cylinder_cert(g(), &w("a")).unwrap();
        assert!(cert_to_isometries(g(), &cert).is_err());
    }

    #[test]
    fn infiniteness_cylinder_no_obstructions() {
        let witness =
            infiniteness_witness(g(), &BGen::Cylinder(w("a")), &[]).unwrap();
        assert_eq!(witness.translator, "a");
        // a word whose square cancels falls back to an extension
        let witness =
            infiniteness_witness(g(), &BGen::Cylinder(w("abA")), &[]).unwrap();
        assert!(witness.pass);
        assert_ne!(witness.translator, "abAabA");
    }

    #[test]
    fn infiniteness_cylinder_with_obstructions() {
        let p = BGen::Cylinder(w("a"));
        let obs = vec![
            BGen::Pattern(Pattern::parse("", "a", "b", 2).unwrap()),
            BGen::Pattern(Pattern::parse("a", "B", "A", 2).unwrap()),
        ];
        let witness = infiniteness_witness(g(), &p, &obs).unwrap();
        assert!(witness.pass);
        // malformed obstruction: not below the base
        let bad = vec![BGen::Pattern(Pattern::parse("", "b", "a", 2).unwrap())];
        assert!(infiniteness_witness(g(), &p, &bad).is_err());
    }

    #[test]
    fn infiniteness_pattern_case() {
        let p = BGen::Pattern(Pattern::parse("", "a", "b", 2).unwrap());
        let obs = vec![
            BGen::Pattern(Pattern::parse("", "ab", "a", 2).unwrap()),
            BGen::Pattern(Pattern::parse("a", "b", "a", 2).unwrap()),
        ];
        let witness = infiniteness_witness(g(), &p, &obs).unwrap();
        assert!(witness.pass);

        // the second pattern kind, ending in a block of the leading
        // generator's partner
        let p = BGen::Pattern(Pattern::parse("", "ab", "a", 2).unwrap());
        let witness = infiniteness_witness(g(), &p, &[]).unwrap();
        assert!(witness.pass);
    }

    #[test]
    fn three_coloring_checks() {
        let coloring = three_coloring(g());
        assert!(coloring.pass, "{:?}", coloring.claims);
        // spot-check the classes on a few words
        let class_of = |word: &Word| -> usize {
            coloring
                .classes
                .iter()
                .position(|c| c.eval(word) == num_rational::BigRational::from_integer(1.into()))
                .unwrap()
        };
        assert_eq!(class_of(&Word::identity()), 0);
        assert_eq!(class_of(&w("a")), 1);
        assert_eq!(class_of(&w("aa")), 2);
        assert_eq!(class_of(&w("aaa")), 0);
        assert_eq!(class_of(&w("A")), 2);
        assert_eq!(class_of(&w("AA")), 1);
        assert_eq!(class_of(&w("ba")), 0);
        assert_eq!(class_of(&w("aab")), 2);
    }

    #[test]
    fn run_class_matches_brute_force() {
        let run = |word: &Word| -> i64 {
            let a = g().generator(0);
            match word.first() {
                Some(l) if l == a => {
                    word.letters().iter().take_while(|&&x| x == a).count() as i64
                }
                Some(l) if l == a.inverse() => {
                    -(word.letters().iter().take_while(|&&x| x == a.inverse()).count() as i64)
                }
                _ => 0,
            }
        };
        for word in g().ball(5) {
            let expected = run(&word).rem_euclid(3) as u8;
            for r in 0..3u8 {
                assert_eq!(
                    run_class(g(), r).contains(&word),
                    r == expected,
                    "word {word} residue {expected}"
                );
            }
        }
    }
}
