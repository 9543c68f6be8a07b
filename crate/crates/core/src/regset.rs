//! Regular subsets of the free group as canonical minimal DFAs.
//!
//! Every `RegSet` is a language of reduced words over the `2n`-letter
//! alphabet, stored as a complete, minimized, canonically numbered
//! automaton. Minimization plus canonical numbering makes structural
//! equality coincide with language equality, so sets can be compared,
//! hashed and ordered directly.
//!
//! The constructors cover everything the calculus needs: cylinders
//! (all reduced words with a given prefix), pattern sets (unions of
//! cylinders over alternating letter powers `≥ 1`), finite sets, the
//! full reduced-word universe, boolean combinations, and the left
//! translation action.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::freegroup::{FreeGroup, Letter, Word};


/// Complete DFA over the free-group alphabet; state 0 is the start
/// state once canonicalized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Dfa {
    alphabet: usize,
    accept: Vec<bool>,
    /// Row-major transition table: `trans[state * alphabet + letter]`.
    trans: Vec<u32>,
}

impl Dfa {
    fn states(&self) -> usize {
        self.accept.len()
    }

    fn step(&self, state: u32, letter: usize) -> u32 {
        self.trans[state as usize * self.alphabet + letter]
    }

    fn accepts(&self, word: &Word) -> bool {
        let mut state = 0u32;
        for l in word.letters() {
            state = self.step(state, l.index());
        }
        self.accept[state as usize]
    }

    /// Minimizes (Moore refinement) and renumbers states in BFS order
    /// from the start state, so equal languages yield equal tables.
    fn canonical(alphabet: usize, start: u32, accept: &[bool], trans: &[u32]) -> Dfa {
        let n = accept.len();
        // restrict to reachable states
        let mut order = Vec::with_capacity(n);
        let mut index = vec![u32::MAX; n];
        order.push(start);
        index[start as usize] = 0;
        let mut head = 0usize;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for a in 0..alphabet {
                let t = trans[s as usize * alphabet + a];
                if index[t as usize] == u32::MAX {
                    index[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
        }
        let m = order.len();
        let mut racc = vec![false; m];
        let mut rtrans = vec![0u32; m * alphabet];
        for (i, &s) in order.iter().enumerate() {
            racc[i] = accept[s as usize];
            for a in 0..alphabet {
                rtrans[i * alphabet + a] = index[trans[s as usize * alphabet + a] as usize];
            }
        }

        // Moore partition refinement
        let mut class: Vec<u32> = racc.iter().map(|&b| u32::from(b)).collect();
        let mut class_count = 2;
        if racc.iter().all(|&b| b) || racc.iter().all(|&b| !b) {
            class = vec![0; m];
            class_count = 1;
        }
        loop {
            let mut signature: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let mut next = vec![0u32; m];
            for s in 0..m {
                let sig: Vec<u32> = (0..alphabet)
                    .map(|a| class[rtrans[s * alphabet + a] as usize])
                    .collect();
                let id = signature.len() as u32;
                let entry = *signature.entry((class[s], sig)).or_insert(id);
                next[s] = entry;
            }
            let next_count = signature.len();
            if next_count == class_count {
                break;
            }
            class = next;
            class_count = next_count;
        }

        // quotient, then BFS renumber from the start class
        let mut qtrans = vec![u32::MAX; class_count * alphabet];
        let mut qacc = vec![false; class_count];
        for s in 0..m {
            let c = class[s] as usize;
            qacc[c] = racc[s];
            for a in 0..alphabet {
                qtrans[c * alphabet + a] = class[rtrans[s * alphabet + a] as usize];
            }
        }
        let qstart = class[0];

        let mut bfs = vec![u32::MAX; class_count];
        let mut horder = Vec::with_capacity(class_count);
        bfs[qstart as usize] = 0;
        horder.push(qstart);
        let mut head = 0usize;
        while head < horder.len() {
            let s = horder[head];
            head += 1;
            for a in 0..alphabet {
                let t = qtrans[s as usize * alphabet + a];
                if bfs[t as usize] == u32::MAX {
                    bfs[t as usize] = horder.len() as u32;
                    horder.push(t);
                }
            }
        }
        let k = horder.len();
        let mut accept_out = vec![false; k];
        let mut trans_out = vec![0u32; k * alphabet];
        for (i, &s) in horder.iter().enumerate() {
            accept_out[i] = qacc[s as usize];
            for a in 0..alphabet {
                trans_out[i * alphabet + a] = bfs[qtrans[s as usize * alphabet + a] as usize];
            }
        }
        Dfa { alphabet, accept: accept_out, trans: trans_out }
    }

    /// Product automaton combined with a boolean on acceptance.
    fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(self.alphabet, other.alphabet);
        let alphabet = self.alphabet;
        let mut map: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        map.insert((0, 0), 0);
        let mut accept = Vec::new();
        let mut trans = Vec::new();
        let mut head = 0usize;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            head += 1;
            accept.push(op(self.accept[p as usize], other.accept[q as usize]));
            for a in 0..alphabet {
                let next = (self.step(p, a), other.step(q, a));
                let id = match map.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len() as u32;
                        map.insert(next, id);
                        pairs.push(next);
                        id
                    }
                };
                trans.push(id);
            }
        }
        Dfa::canonical(alphabet, 0, &accept, &trans)
    }

    /// Whether the product automaton reaches a pair satisfying `op`;
    /// cheaper than building the product when only a yes/no is needed.
    fn product_reaches(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> bool {
        assert_eq!(self.alphabet, other.alphabet);
        let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
        let mut stack = vec![(0u32, 0u32)];
        seen.insert((0, 0), ());
        while let Some((p, q)) = stack.pop() {
            if op(self.accept[p as usize], other.accept[q as usize]) {
                return true;
            }
            for a in 0..self.alphabet {
                let next = (self.step(p, a), other.step(q, a));
                if !seen.contains_key(&next) {
                    seen.insert(next, ());
                    stack.push(next);
                }
            }
        }
        false
    }

    fn is_empty(&self) -> bool {
        !self.accept.iter().any(|&b| b)
    }

    /// States that can reach an accepting state.
    fn co_accessible(&self) -> Vec<bool> {
        let n = self.states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            for a in 0..self.alphabet {
                rev[self.trans[s * self.alphabet + a] as usize].push(s as u32);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<u32> = (0..n as u32).filter(|&s| self.accept[s as usize]).collect();
        for &s in &stack {
            live[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// True if the accepted language is infinite (a cycle through a
    /// live state is reachable).
    fn is_infinite(&self) -> bool {
        let live = self.co_accessible();
        if !live[0] {
            return false;
        }
        // DFS cycle detection restricted to live states
        let n = self.states();
        let mut color = vec![0u8; n]; // 0 white, 1 gray, 2 black
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        color[0] = 1;
        while let Some(&mut (s, ref mut a)) = stack.last_mut() {
            if *a == self.alphabet {
                color[s as usize] = 2;
                stack.pop();
                continue;
            }
            let t = self.step(s, *a);
            *a += 1;
            if !live[t as usize] {
                continue;
            }
            match color[t as usize] {
                0 => {
                    color[t as usize] = 1;
                    stack.push((t, 0));
                }
                1 => return true,
                _ => {}
            }
        }
        false
    }

    /// Enumerates the full (finite) language; caller must have
    /// checked finiteness.
    fn enumerate_finite(&self) -> Vec<Word> {
        let live = self.co_accessible();
        let mut out = Vec::new();
        if !live[0] {
            return out;
        }
        let mut frontier: Vec<(u32, Word)> = vec![(0, Word::identity())];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (s, w) in frontier {
                if self.accept[s as usize] {
                    out.push(w.clone());
                }
                for a in 0..self.alphabet {
                    let l = Letter::from_index(a);
                    if w.last().is_some_and(|last| last.cancels(l)) {
                        continue;
                    }
                    let t = self.step(s, a);
                    if live[t as usize] {
                        next.push((t, w.push_reduced(l)));
                    }
                }
            }
            frontier = next;
        }
        out.sort();
        out
    }

    fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut frontier: Vec<(u32, Word)> = vec![(0, Word::identity())];
        for _ in 0..=max_len {
            let mut next = Vec::new();
            for (s, w) in &frontier {
                if self.accept[*s as usize] {
                    out.push(w.clone());
                }
                if w.len() < max_len {
                    for a in 0..self.alphabet {
                        let t = self.step(*s, a);
                        // only follow reduced continuations
                        let l = Letter::from_index(a);
                        if !w.last().is_some_and(|last| last.cancels(l)) {
                            next.push((t, w.push_reduced(l)));
                        }
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Shortlex-least accepted word.
    fn shortest(&self) -> Option<Word> {
        let mut seen = vec![false; self.states()];
        let mut frontier: Vec<(u32, Word)> = vec![(0, Word::identity())];
        seen[0] = true;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (s, w) in &frontier {
                if self.accept[*s as usize] {
                    return Some(w.clone());
                }
                for a in 0..self.alphabet {
                    let l = Letter::from_index(a);
                    if w.last().is_some_and(|last| last.cancels(l)) {
                        continue;
                    }
                    let t = self.step(*s, a);
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        next.push((t, w.push_reduced(l)));
                    }
                }
            }
            frontier = next;
        }
        None
    }
}

/// How large a regular set is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Empty,
    Finite(Vec<Word>),
    Infinite,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegSetError {
    #[error("cylinder prefix must not be the identity; use the universe instead")]
    EmptyCylinderPrefix,
    #[error("rank mismatch between operands")]
    RankMismatch,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern tail must be nonempty")]
    EmptyTail,
    #[error("adjacent tail letters must differ and not be mutually inverse")]
    TailAlternation,
    #[error("final letter must differ from the last tail letter and its inverse")]
    FinalClash,
    #[error("head must not end with the inverse of the first tail letter")]
    HeadClash,
}

/// A pattern `𝓑(y c₁^ℕ … c_m^ℕ z)`: the union over all exponents
/// `k_i ≥ 1` of the cylinders `𝓑(y c₁^{k₁} … c_m^{k_m} z)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    head: Word,
    tail: Vec<Letter>,
    last: Letter,
}

impl Pattern {
    pub fn new(head: Word, tail: Vec<Letter>, last: Letter) -> Result<Pattern, PatternError> {
        if tail.is_empty() {
            return Err(PatternError::EmptyTail);
        }
        for pair in tail.windows(2) {
            if pair[1] == pair[0] || pair[1] == pair[0].inverse() {
                return Err(PatternError::TailAlternation);
            }
        }
        let m = *tail.last().unwrap();
        if last == m || last == m.inverse() {
            return Err(PatternError::FinalClash);
        }
        if head.last() == Some(tail[0].inverse()) {
            return Err(PatternError::HeadClash);
        }
        Ok(Pattern { head, tail, last })
    }

    /// Parses `(head, tail, final)` from word spellings, e.g.
    /// `("", "ab", "a")` for `𝓑(a^ℕ b^ℕ a)`.
    pub fn parse(head: &str, tail: &str, last: &str, rank: usize) -> Result<Pattern, String> {
        let head = Word::parse(head, rank).map_err(|e| e.to_string())?;
        let tail_word = Word::parse(tail, rank).map_err(|e| e.to_string())?;
        if tail_word.len() != tail.len() {
            return Err("pattern tail must be a reduced spelling".into());
        }
        let last_word = Word::parse(last, rank).map_err(|e| e.to_string())?;
        if last_word.len() != 1 {
            return Err("pattern final must be a single letter".into());
        }
        Pattern::new(head, tail_word.letters().to_vec(), last_word.first().unwrap())
            .map_err(|e| e.to_string())
    }

    pub fn head(&self) -> &Word {
        &self.head
    }

    pub fn tail(&self) -> &[Letter] {
        &self.tail
    }

    pub fn final_letter(&self) -> Letter {
        self.last
    }

    /// The shortest member prefix `y c₁ … c_m z` (all exponents 1).
    pub fn base_word(&self) -> Word {
        let mut w = self.head.clone();
        for &c in &self.tail {
            w = w.push_reduced(c);
        }
        w.push_reduced(self.last)
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pat({:?}", self.head)?;
        for &c in &self.tail {
            write!(f, " {c}^N")?;
        }
        write!(f, " {})", self.last)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail: String = self.tail.iter().map(|c| c.to_string()).collect();
        write!(f, "(pat \"{}\" \"{}\" \"{}\")", self.head, tail, self.last)
    }
}

/// A regular set of reduced words in canonical minimal-DFA form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegSet {
    group: FreeGroup,
    dfa: Arc<Dfa>,
}

impl RegSet {
    fn from_parts(group: FreeGroup, start: u32, accept: Vec<bool>, trans: Vec<u32>) -> RegSet {
        let dfa = Dfa::canonical(group.alphabet_size(), start, &accept, &trans);
        RegSet { group, dfa: Arc::new(dfa) }
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn state_count(&self) -> usize {
        self.dfa.states()
    }

    /// The empty set.
    pub fn empty(group: FreeGroup) -> RegSet {
        let a = group.alphabet_size();
        RegSet::from_parts(group, 0, vec![false], vec![0; a])
    }

    /// All reduced words, including the identity.
    pub fn universe(group: FreeGroup) -> RegSet {
        let a = group.alphabet_size();
        // state 0 = start, 1 + l = last letter was l, a + 1 = dead
        let n = a + 2;
        let dead = (a + 1) as u32;
        let mut accept = vec![true; n];
        accept[dead as usize] = false;
        let mut trans = vec![0u32; n * a];
        for l in 0..a {
            trans[l] = (1 + l) as u32;
        }
        for last in 0..a {
            for l in 0..a {
                trans[(1 + last) * a + l] =
                    if l == last ^ 1 { dead } else { (1 + l) as u32 };
            }
        }
        for l in 0..a {
            trans[dead as usize * a + l] = dead;
        }
        RegSet::from_parts(group, 0, accept, trans)
    }

    /// The singleton `{w}`.
    pub fn singleton(group: FreeGroup, w: &Word) -> RegSet {
        RegSet::finite(group, std::slice::from_ref(w))
    }

    /// A finite set of reduced words, as a trie automaton.
    pub fn finite(group: FreeGroup, words: &[Word]) -> RegSet {
        let a = group.alphabet_size();
        // trie states; state 0 = root; last = dead
        let mut accept = vec![false];
        let mut trans: Vec<Vec<Option<u32>>> = vec![vec![None; a]];
        for w in words {
            let mut s = 0usize;
            for l in w.letters() {
                let next = match trans[s][l.index()] {
                    Some(t) => t as usize,
                    None => {
                        let t = trans.len();
                        trans.push(vec![None; a]);
                        accept.push(false);
                        trans[s][l.index()] = Some(t as u32);
                        t
                    }
                };
                s = next;
            }
            accept[s] = true;
        }
        let dead = trans.len() as u32;
        accept.push(false);
        let mut flat = vec![dead; (trans.len() + 1) * a];
        for (s, row) in trans.iter().enumerate() {
            for (l, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    flat[s * a + l] = *t;
                }
            }
        }
        RegSet::from_parts(group, 0, accept, flat)
    }

    /// Builds a set from an explicit automaton; internal constructor
    /// for the handful of bespoke languages other modules need.
    pub(crate) fn from_raw(
        group: FreeGroup,
        start: u32,
        accept: Vec<bool>,
        trans: Vec<u32>,
    ) -> RegSet {
        RegSet::from_parts(group, start, accept, trans).intersect(&RegSet::universe(group))
    }

    /// `{l^k : k ≥ 0}`, the diagonal of powers of one letter
    /// (including the identity).
    pub fn letter_powers(group: FreeGroup, l: Letter) -> RegSet {
        let a = group.alphabet_size();
        // state 0 accepts and loops on l; everything else dies
        let mut trans = vec![1u32; 2 * a];
        trans[l.index()] = 0;
        RegSet::from_raw(group, 0, vec![true, false], trans)
    }

    /// All reduced words of length at least `k`.
    pub fn min_length(group: FreeGroup, k: usize) -> RegSet {
        let a = group.alphabet_size();
        // states 0..=k count letters read, saturating at k
        let mut accept = vec![false; k + 1];
        accept[k] = true;
        let mut trans = vec![0u32; (k + 1) * a];
        for s in 0..=k {
            for l in 0..a {
                trans[s * a + l] = (s + 1).min(k) as u32;
            }
        }
        let counter = RegSet::from_parts(group, 0, accept, trans);
        counter.intersect(&RegSet::universe(group))
    }

    /// All reduced words of length exactly `k`.
    pub fn length_exactly(group: FreeGroup, k: usize) -> RegSet {
        RegSet::min_length(group, k).difference(&RegSet::min_length(group, k + 1))
    }

    /// The cylinder `𝓑(t)`: all reduced words starting with `t`.
    pub fn cylinder(group: FreeGroup, t: &Word) -> Result<RegSet, RegSetError> {
        if t.is_identity() {
            return Err(RegSetError::EmptyCylinderPrefix);
        }
        Ok(RegSet::cylinder_unchecked(group, t))
    }

    pub(crate) fn cylinder_unchecked(group: FreeGroup, t: &Word) -> RegSet {
        if t.is_identity() {
            return RegSet::universe(group);
        }
        let a = group.alphabet_size();
        // spine 0..|t|, then accept-all; last state = dead
        let k = t.len();
        let accept_all = k as u32;
        let dead = (k + 1) as u32;
        let mut accept = vec![false; k + 2];
        accept[k] = true;
        let mut trans = vec![dead; (k + 2) * a];
        for (i, l) in t.letters().iter().enumerate() {
            trans[i * a + l.index()] = (i + 1) as u32;
        }
        for l in 0..a {
            trans[accept_all as usize * a + l] = accept_all;
        }
        let prefix = RegSet::from_parts(group, 0, accept, trans);
        prefix.intersect(&RegSet::universe(group))
    }

    /// The pattern set as a regular language.
    pub fn pattern(group: FreeGroup, p: &Pattern) -> RegSet {
        let a = group.alphabet_size();
        let hl = p.head.len();
        let m = p.tail.len();
        // states: 0..=hl head positions (hl = "expect first tail letter"),
        // hl+1..hl+m inside tail blocks, hl+m+1 accept-all, hl+m+2 dead
        let n = hl + m + 3;
        let accept_all = (hl + m + 1) as u32;
        let dead = (hl + m + 2) as u32;
        let mut accept = vec![false; n];
        accept[accept_all as usize] = true;
        let mut trans = vec![dead; n * a];
        for (i, l) in p.head.letters().iter().enumerate() {
            trans[i * a + l.index()] = (i + 1) as u32;
        }
        trans[hl * a + p.tail[0].index()] = (hl + 1) as u32;
        for j in 0..m {
            let s = hl + 1 + j;
            trans[s * a + p.tail[j].index()] = s as u32;
            if j + 1 < m {
                trans[s * a + p.tail[j + 1].index()] = (s + 1) as u32;
            } else {
                trans[s * a + p.last.index()] = accept_all;
            }
        }
        for l in 0..a {
            trans[accept_all as usize * a + l] = accept_all;
        }
        let raw = RegSet::from_parts(group, 0, accept, trans);
        raw.intersect(&RegSet::universe(group))
    }

    fn check_rank(&self, other: &RegSet) {
        assert_eq!(self.group, other.group, "rank mismatch between regular sets");
    }

    pub fn union(&self, other: &RegSet) -> RegSet {
        self.check_rank(other);
        RegSet {
            group: self.group,
            dfa: Arc::new(self.dfa.product(&other.dfa, |x, y| x || y)),
        }
    }

    pub fn intersect(&self, other: &RegSet) -> RegSet {
        self.check_rank(other);
        RegSet {
            group: self.group,
            dfa: Arc::new(self.dfa.product(&other.dfa, |x, y| x && y)),
        }
    }

    pub fn difference(&self, other: &RegSet) -> RegSet {
        self.check_rank(other);
        RegSet {
            group: self.group,
            dfa: Arc::new(self.dfa.product(&other.dfa, |x, y| x && !y)),
        }
    }

    pub fn symmetric_difference(&self, other: &RegSet) -> RegSet {
        self.check_rank(other);
        RegSet {
            group: self.group,
            dfa: Arc::new(self.dfa.product(&other.dfa, |x, y| x != y)),
        }
    }

    /// Complement relative to the reduced-word universe.
    pub fn complement(&self) -> RegSet {
        RegSet::universe(self.group).difference(self)
    }

    /// Left translation `{g·w : w ∈ self}`, applied one letter at a
    /// time: the part of the set starting with `x⁻¹` loses that
    /// letter, the rest gains `x` in front.
    pub fn translate(&self, g: &Word) -> RegSet {
        let mut cur = self.clone();
        for &x in g.letters().iter().rev() {
            cur = cur.translate_letter(x);
        }
        cur
    }

    fn translate_letter(&self, x: Letter) -> RegSet {
        let a = self.group.alphabet_size();
        let dfa = &self.dfa;
        // derivative along x⁻¹: words u with x⁻¹u in the set
        let dstart = dfa.step(0, x.inverse().index());
        let derivative = RegSet {
            group: self.group,
            dfa: Arc::new(Dfa::canonical(a, dstart, &dfa.accept, &dfa.trans)),
        };
        // words not starting with x⁻¹ (including the identity), with x
        // prepended
        let keep = self.difference(&RegSet::cylinder_unchecked(
            self.group,
            &Word::single(x.inverse()),
        ));
        let n = keep.dfa.states();
        let mut accept = vec![false];
        accept.extend_from_slice(&keep.dfa.accept);
        let dead = n as u32 + 1;
        accept.push(false);
        let mut trans = vec![dead; (n + 2) * a];
        trans[x.index()] = 1;
        for s in 0..n {
            for l in 0..a {
                trans[(s + 1) * a + l] = keep.dfa.trans[s * a + l] + 1;
            }
        }
        let prepended = RegSet::from_parts(self.group, 0, accept, trans);
        derivative.union(&prepended)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.dfa.accepts(w)
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn is_universe(&self) -> bool {
        *self == RegSet::universe(self.group)
    }

    pub fn classify(&self) -> Classification {
        if self.dfa.is_empty() {
            Classification::Empty
        } else if self.dfa.is_infinite() {
            Classification::Infinite
        } else {
            Classification::Finite(self.dfa.enumerate_finite())
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.dfa.is_infinite()
    }

    /// Finite symmetric difference.
    pub fn equals_mod_finite(&self, other: &RegSet) -> bool {
        self.check_rank(other);
        !self.dfa.product(&other.dfa, |x, y| x != y).is_infinite()
    }

    pub fn is_subset(&self, other: &RegSet) -> bool {
        self.check_rank(other);
        !self.dfa.product_reaches(&other.dfa, |x, y| x && !y)
    }

    /// Containment up to finitely many exceptions.
    pub fn is_subset_mod_finite(&self, other: &RegSet) -> bool {
        self.check_rank(other);
        !self.dfa.product(&other.dfa, |x, y| x && !y).is_infinite()
    }

    pub fn is_disjoint(&self, other: &RegSet) -> bool {
        self.check_rank(other);
        !self.dfa.product_reaches(&other.dfa, |x, y| x && y)
    }

    /// Shortlex-least member.
    pub fn shortest(&self) -> Option<Word> {
        self.dfa.shortest()
    }

    /// All members of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        self.dfa.words_up_to(max_len)
    }
}

impl fmt::Debug for RegSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RegSet(rank {}, {} states, e.g. {:?})",
            self.group.rank(),
            self.dfa.states(),
            self.shortest()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> FreeGroup {
        FreeGroup::new(2)
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cyl(s: &str) -> RegSet {
        RegSet::cylinder(g(), &w(s)).unwrap()
    }

    #[test]
    fn universe_and_empty() {
        let u = RegSet::universe(g());
        assert!(u.contains(&Word::identity()));
        assert!(u.contains(&w("abA")));
        assert!(RegSet::empty(g()).is_empty());
        assert_eq!(u.words_up_to(2).len(), 1 + 4 + 12);
    }

    #[test]
    fn universe_is_identity_plus_level_one_cylinders() {
        let mut s = RegSet::singleton(g(), &Word::identity());
        for c in ["a", "b", "A", "B"] {
            s = s.union(&cyl(c));
        }
        assert_eq!(s, RegSet::universe(g()));
    }

    #[test]
    fn cylinder_basics() {
        let ca = cyl("a");
        assert!(ca.contains(&w("a")));
        assert!(ca.contains(&w("abA")));
        assert!(!ca.contains(&w("ba")));
        assert!(!ca.contains(&Word::identity()));
        assert!(ca.intersect(&cyl("b")).is_empty());
        // |cylinder(a) ∩ ball(≤2)| = 4: a, aa, ab, aB
        assert_eq!(ca.words_up_to(2).len(), 4);
        assert!(RegSet::cylinder(g(), &Word::identity()).is_err());
    }

    #[test]
    fn cylinder_membership_matches_prefix_oracle() {
        let t = w("aB");
        let c = RegSet::cylinder(g(), &t).unwrap();
        for v in g().ball(5) {
            assert_eq!(c.contains(&v), t.is_prefix_of(&v), "{v}");
        }
    }

    #[test]
    fn boolean_ops() {
        let ca = cyl("a");
        let cb = cyl("b");
        assert!(ca.difference(&ca).is_empty());
        let both = ca.union(&cb);
        assert!(both.contains(&w("ab")) && both.contains(&w("ba")));
        let comp = ca.complement();
        assert!(comp.contains(&Word::identity()));
        assert!(!comp.contains(&w("ab")));
        // De Morgan
        assert_eq!(
            ca.union(&cb).complement(),
            ca.complement().intersect(&cb.complement())
        );
    }

    #[test]
    fn pattern_examples() {
        // 𝓑(a^ℕ b): words a^k b …, k ≥ 1
        let p = Pattern::parse("", "a", "b", 2).unwrap();
        let ps = RegSet::pattern(g(), &p);
        assert!(ps.contains(&w("ab")));
        assert!(ps.contains(&w("aab")));
        assert!(ps.contains(&w("abA")));
        assert!(!ps.contains(&w("a")));
        assert!(!ps.contains(&w("ba")));
        assert!(ps.intersect(&cyl("b")).is_empty());
        assert!(ps.is_subset(&cyl("a")));

        // head invariant: head may not end with the inverse of c₁
        assert!(Pattern::parse("A", "a", "b", 2).is_err());
        // alternation invariant
        assert!(Pattern::parse("", "aa", "b", 2).is_err());
        assert!(Pattern::parse("", "aA", "b", 2).is_err());
        // final invariant
        assert!(Pattern::parse("", "ab", "B", 2).is_err());
    }

    #[test]
    fn pattern_membership_matches_exponent_oracle() {
        // brute-force the union over exponents k_i ≤ K and compare on
        // the ball of radius K
        let cases = [
            Pattern::parse("", "a", "b", 2).unwrap(),
            Pattern::parse("", "ab", "a", 2).unwrap(),
            Pattern::parse("b", "a", "B", 2).unwrap(),
            Pattern::parse("", "AB", "A", 2).unwrap(),
        ];
        let radius = 6usize;
        for p in &cases {
            let ps = RegSet::pattern(g(), p);
            let mut expected: std::collections::HashSet<Word> = Default::default();
            // enumerate exponent tuples with total length ≤ radius
            let m = p.tail().len();
            let mut tuples = vec![vec![]];
            for _ in 0..m {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<usize>| {
                        (1..=radius).map(move |k| {
                            let mut t2 = t.clone();
                            t2.push(k);
                            t2
                        })
                    })
                    .collect();
            }
            for t in &tuples {
                let mut base = p.head().clone();
                for (i, &k) in t.iter().enumerate() {
                    for _ in 0..k {
                        base = base.multiply(&Word::single(p.tail()[i]));
                    }
                }
                base = base.multiply(&Word::single(p.final_letter()));
                if base.len() > radius {
                    continue;
                }
                for v in g().ball(radius) {
                    if base.is_prefix_of(&v) {
                        expected.insert(v);
                    }
                }
            }
            for v in g().ball(radius) {
                assert_eq!(ps.contains(&v), expected.contains(&v), "{p:?} at {v}");
            }
        }
    }

    #[test]
    fn translate_examples() {
        // a.𝓑(a⁻¹) = 𝓑(b) ∪ 𝓑(b⁻¹) ∪ 𝓑(a⁻¹) ∪ {e}
        let lhs = cyl("A").translate(&w("a"));
        let rhs = cyl("b")
            .union(&cyl("B"))
            .union(&cyl("A"))
            .union(&RegSet::singleton(g(), &Word::identity()));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, cyl("a").complement());

        // no-cancellation prefix concatenation
        assert_eq!(cyl("b").translate(&w("ab")), cyl("abb"));

        // b⁻¹.𝓑(b^ℕ a) = 𝓑(b^ℕ a) ∪ 𝓑(a)
        let e = RegSet::pattern(g(), &Pattern::parse("", "b", "a", 2).unwrap());
        assert_eq!(e.translate(&w("B")), e.union(&cyl("a")));
    }

    #[test]
    fn translate_matches_pointwise_oracle() {
        let sets = [cyl("a"), cyl("Ab"), RegSet::universe(g()),
            RegSet::pattern(g(), &Pattern::parse("", "a", "b", 2).unwrap())];
        let gs = ["a", "A", "ba", "AB", "bAb"];
        for s in &sets {
            for gw in gs {
                let gw = w(gw);
                let t = s.translate(&gw);
                // pointwise: g·(members of s within reach) must be
                // exactly the members of t within the safe ball
                let reach = 6usize;
                let safe = reach - gw.len();
                let mut image: Vec<Word> = s
                    .words_up_to(reach)
                    .iter()
                    .map(|v| gw.multiply(v))
                    .filter(|v| v.len() <= safe)
                    .collect();
                image.sort();
                image.dedup();
                let expected: Vec<Word> = t
                    .words_up_to(safe)
                    .into_iter()
                    .collect();
                assert_eq!(image, expected, "translate {gw} mismatch");
            }
        }
    }

    #[test]
    fn translate_is_action() {
        let s = cyl("a").union(&RegSet::pattern(
            g(),
            &Pattern::parse("", "b", "a", 2).unwrap(),
        ));
        for (u, v) in [("a", "b"), ("A", "ab"), ("Ba", "Ab")] {
            let u = w(u);
            let v = w(v);
            assert_eq!(
                s.translate(&v).translate(&u),
                s.translate(&u.multiply(&v))
            );
        }
        assert_eq!(s.translate(&Word::identity()), s);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            RegSet::singleton(g(), &Word::identity()).classify(),
            Classification::Finite(vec![Word::identity()])
        );
        assert_eq!(RegSet::empty(g()).classify(), Classification::Empty);
        assert_eq!(cyl("a").classify(), Classification::Infinite);

        let fin = RegSet::finite(g(), &[w("a"), w("ab")]);
        assert_eq!(
            fin.classify(),
            Classification::Finite(vec![w("a"), w("ab")])
        );
    }

    #[test]
    fn equals_mod_finite_examples() {
        let ca = cyl("a");
        let plus_b = ca.union(&RegSet::singleton(g(), &w("b")));
        assert!(ca.equals_mod_finite(&plus_b));
        assert_ne!(ca, plus_b);

        let lhs = cyl("A").translate(&w("a"));
        assert!(lhs.equals_mod_finite(&cyl("a").complement()));
        assert_eq!(lhs, cyl("a").complement());
        assert!(!lhs.equals_mod_finite(&cyl("A")));
    }

    #[test]
    fn translate_preserves_cardinality_class() {
        let fin = RegSet::finite(g(), &[w("a"), w("ab"), Word::identity()]);
        for gw in ["a", "Ab", "bb"] {
            let t = fin.translate(&w(gw));
            assert!(matches!(t.classify(), Classification::Finite(v) if v.len() == 3));
        }
        let inf = cyl("aB");
        for gw in ["a", "Ab", "bb"] {
            assert_eq!(inf.translate(&w(gw)).classify(), Classification::Infinite);
        }
    }
}
