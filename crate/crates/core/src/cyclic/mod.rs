//! Rotations, cyclic reduction and its reachability structure.
//!
//! Everything here works on [`CyclicClass`]es: a word is identified with all
//! of its rotations through the shortlex-least rotation. A cyclic step rotates
//! a word and applies one rule anywhere in the rotated word; pure rotations
//! are invisible at class level.

pub(crate) mod explore;

use std::collections::HashSet;

use crate::presentation::{RewritingSystem, Symbol, SymbolOrder, Word};

pub use explore::{
    classify_lengths, explore, rho, rho_from, rho_up_to_sim, sim_equivalent, termination_report, ExplorationResult,
    ExplorationStatus, ExploreBudget, ExploredEdge, ExploredNode, LengthProfile, RhoResult, SimFormResult, SimVerdict,
    SinkComponent, TerminationVerdict, DEFAULT_EXTRA_LEN, DEFAULT_MAX_NODES,
};

/// Moves the first `i` letters to the end (`i` is taken modulo the length).
pub fn rotate(w: &Word, i: usize) -> Word {
    if w.is_empty() {
        return w.clone();
    }
    let i = i % w.len();
    let mut v = Vec::with_capacity(w.len());
    v.extend_from_slice(&w[i..]);
    v.extend_from_slice(&w[..i]);
    Word::new(v)
}

/// Offset of the lexicographically least rotation (two-pointer minimum
/// expression, linear time). Returns the smallest such offset.
pub fn least_rotation_offset(w: &[Symbol], order: &SymbolOrder) -> usize {
    let n = w.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = order.rank(w[(i + k) % n]);
        let b = order.rank(w[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}

/// The shortlex-least rotation of `w` (all rotations share a length, so this
/// is the lexicographically least one).
pub fn canonical_rotation(w: &Word, order: &SymbolOrder) -> Word {
    rotate(w, least_rotation_offset(w, order))
}

/// `u ≃ v`: the words are rotations of one another.
pub fn are_cyclic_conjugates(u: &Word, v: &Word) -> bool {
    if u.len() != v.len() {
        return false;
    }
    let n = u.iter().chain(v.iter()).map(|s| s.index() + 1).max().unwrap_or(0);
    let order = SymbolOrder::identity(n);
    canonical_rotation(u, &order) == canonical_rotation(v, &order)
}

/// A word up to rotation, stored as its canonical rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicClass {
    canonical: Word,
}

impl CyclicClass {
    pub fn of(w: &Word, order: &SymbolOrder) -> Self {
        CyclicClass {
            canonical: canonical_rotation(w, order),
        }
    }

    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn contains(&self, w: &Word, order: &SymbolOrder) -> bool {
        w.len() == self.len() && canonical_rotation(w, order) == self.canonical
    }
}

/// What fired in a cyclic step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepRule {
    /// A rule of the underlying system.
    Rule(usize),
    /// An added whole-word reduction of an augmented system.
    Added(usize),
}

/// `source_word ∘^rotation rotated → result_word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicStep {
    pub source: CyclicClass,
    pub source_word: Word,
    pub rotation: usize,
    pub rotated: Word,
    pub rule: StepRule,
    pub position: usize,
    pub result_word: Word,
    pub result: CyclicClass,
}

/// A cyclic reduction relation: the plain relation induced by a rewriting
/// system, or that relation extended by whole-word reductions.
pub trait CyclicRelation {
    fn system(&self) -> &RewritingSystem;

    /// One step per reachable class, from every rotation of `w`, in
    /// (rotation, rule, position) order.
    fn steps_from(&self, w: &Word) -> Vec<CyclicStep> {
        rule_steps(self.system(), w)
    }
}

impl CyclicRelation for RewritingSystem {
    fn system(&self) -> &RewritingSystem {
        self
    }
}

pub(crate) fn rule_steps(system: &RewritingSystem, w: &Word) -> Vec<CyclicStep> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let order = system.order();
    let source = CyclicClass::of(w, order);
    let rules = system.rules();
    let doubled = w.concat(w);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut matches = Vec::new();
    for i in 0..n {
        let rotated = &doubled[i..i + n];
        matches.clear();
        for p in 0..n {
            for &ri in system.rules_starting_with(rotated[p]) {
                let l = &rules[ri].lhs;
                if p + l.len() <= n && rotated[p..p + l.len()] == l[..] {
                    matches.push((ri, p));
                }
            }
        }
        matches.sort_unstable();
        for &(ri, p) in &matches {
            let rotated = Word::new(rotated.to_vec());
            let result_word = rotated.replace_factor(p, rules[ri].lhs.len(), &rules[ri].rhs);
            let result = CyclicClass::of(&result_word, order);
            if seen.insert(result.clone()) {
                out.push(CyclicStep {
                    source: source.clone(),
                    source_word: w.clone(),
                    rotation: i,
                    rotated,
                    rule: StepRule::Rule(ri),
                    position: p,
                    result_word,
                    result,
                });
            }
        }
    }
    out
}

pub fn cyclic_successors<R: CyclicRelation + ?Sized>(rel: &R, class: &CyclicClass) -> Vec<CyclicStep> {
    rel.steps_from(class.canonical())
}

/// No rotation of `w` admits a step (for plain systems: every rotation is irreducible).
pub fn is_cyclically_irreducible<R: CyclicRelation + ?Sized>(rel: &R, w: &Word) -> bool {
    rel.steps_from(w).is_empty()
}

/// One representative per class among words of length `len`, ascending.
pub fn class_representatives(order: &SymbolOrder, len: usize) -> Vec<Word> {
    let k = order.len();
    if len == 0 {
        return vec![Word::empty()];
    }
    if k == 0 {
        return Vec::new();
    }
    let asc = order.ascending();
    let mut digits = vec![0usize; len];
    let mut out = Vec::new();
    loop {
        let w: Word = digits.iter().map(|&d| asc[d]).collect();
        if least_rotation_offset(&w, order) == 0 {
            out.push(w);
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn ex22() -> RewritingSystem {
        parse_presentation("gens: a b c d\norder: b < d < c < a\nrule: a b -> b c\nrule: c d -> d a\n").unwrap()
    }

    #[test]
    fn rotate_examples() {
        let sys = parse_presentation("gens: a b c d e f\n").unwrap();
        let w = sys.parse_word("abcdef").unwrap();
        assert_eq!(sys.render(&rotate(&w, 1)), "bcdefa");
        assert_eq!(sys.render(&rotate(&w, 4)), "efabcd");
        assert_eq!(rotate(&w, 0), w);
        assert_eq!(rotate(&w, 6), w);
        assert_eq!(rotate(&Word::empty(), 3), Word::empty());
    }

    #[test]
    fn canonical_rotation_examples() {
        let sys = parse_presentation("gens: a b c\n").unwrap();
        let o = sys.order();
        let c = |s: &str| sys.render(&canonical_rotation(&sys.parse_word(s).unwrap(), o));
        assert_eq!(c("bca"), "abc");
        assert_eq!(c("aaa"), "aaa");
        assert_eq!(c("ba"), "ab");
        assert_eq!(c("1"), "1");
        assert_eq!(c("abab"), "abab");
        assert_eq!(c("baba"), "abab");
    }

    #[test]
    fn conjugacy_of_words() {
        let sys = parse_presentation("gens: a b\n").unwrap();
        let p = |s: &str| sys.parse_word(s).unwrap();
        assert!(are_cyclic_conjugates(&p("ba^4"), &p("a^3ba")));
        assert!(are_cyclic_conjugates(&p("abb"), &p("abb")));
        assert!(!are_cyclic_conjugates(&p("a"), &p("b")));
        assert!(!are_cyclic_conjugates(&p("ab"), &p("abb")));
    }

    #[test]
    fn ex22_successors_of_bcd() {
        let sys = ex22();
        let o = sys.order();
        let class = CyclicClass::of(&sys.parse_word("bcd").unwrap(), o);
        let steps = cyclic_successors(&sys, &class);
        let results: HashSet<_> = steps.iter().map(|s| s.result.clone()).collect();
        let bda = CyclicClass::of(&sys.parse_word("bda").unwrap(), o);
        let dab = CyclicClass::of(&sys.parse_word("dab").unwrap(), o);
        // bda and dab are rotations of one another, so they share a class
        assert_eq!(bda, dab);
        assert_eq!(results, HashSet::from([bda]));
        for s in &steps {
            assert_eq!(rotate(class.canonical(), s.rotation), s.rotated);
            assert!(s.result.contains(&s.result_word, o));
        }
        assert!(cyclic_successors(&sys, &CyclicClass::of(&Word::empty(), o)).is_empty());
    }

    #[test]
    fn irreducibility() {
        let sys = ex22();
        assert!(is_cyclically_irreducible(&sys, &sys.parse_word("ada").unwrap()));
        assert!(!is_cyclically_irreducible(&sys, &sys.parse_word("bcd").unwrap()));
        assert!(is_cyclically_irreducible(&sys, &Word::empty()));
    }

    #[test]
    fn representatives_count_necklaces() {
        let o = SymbolOrder::identity(2);
        // binary necklaces of length 1..=6: 2, 3, 4, 6, 8, 14
        let counts: Vec<_> = (1..=6).map(|n| class_representatives(&o, n).len()).collect();
        assert_eq!(counts, vec![2, 3, 4, 6, 8, 14]);
    }
}
