//! Alphabets, words, symbol orders and rewriting systems.
//!
//! A [`RewritingSystem`] is the oriented rule set `(lhs, rhs)` over a finite
//! alphabet together with the [`SymbolOrder`] used to orient rules and to
//! pick canonical rotations. Systems are built by [`parse_presentation`] or
//! assembled directly from [`Rule`]s.

mod parse;
mod template;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use crate::error::ParseErrorKind;
use crate::rewrite::CriticalPair;

pub use parse::{
    parse_document, parse_presentation, parse_presentation_with, Document, ParseOptions, DEFAULT_TEMPLATE_UPPER,
};
pub use template::{Exponent, PatternAtom, RuleTemplate};

/// A generator, identified by its position in the declared generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An element of the free monoid: a finite, possibly empty, symbol sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(ids: &[u32]) -> Self {
        Word(ids.iter().map(|&i| Symbol(i)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Start positions of every occurrence of `pattern` as a factor.
    pub fn occurrences<'a>(&'a self, pattern: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = self.len();
        let m = pattern.len();
        let last = if m == 0 || m > n { 0 } else { n - m + 1 };
        (0..last).filter(move |&p| self.0[p..p + m] == pattern.0[..])
    }

    pub fn contains_factor(&self, pattern: &Word) -> bool {
        pattern.is_empty() || self.occurrences(pattern).next().is_some()
    }

    /// Replaces the factor `[pos, pos + len)` by `with`.
    pub fn replace_factor(&self, pos: usize, len: usize, with: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() - len + with.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(&with.0);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Generator names, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

const RESERVED: &[char] = &['^', '(', ')', '<', '>', '-', '.', '#'];

pub(crate) fn valid_generator_name(name: &str) -> bool {
    !name.is_empty()
        && name != "1"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || RESERVED.contains(&c))
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ParseErrorKind> {
        let mut index = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !valid_generator_name(n) {
                return Err(ParseErrorKind::InvalidGeneratorName(n.to_string()));
            }
            if index.insert(n.to_string(), Symbol(i as u32)).is_some() {
                return Err(ParseErrorKind::DuplicateGenerator(n.to_string()));
            }
            owned.push(n.to_string());
        }
        Ok(Alphabet { names: owned, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// True when every generator name is one character, which enables the
    /// unseparated `abba` shorthand for words.
    pub fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Reads a word such as `a c d`, `a^2 b`, `1`, or `ba^2ba` (shorthand).
    pub fn parse_word(&self, text: &str) -> Result<Word, crate::error::ParseError> {
        parse::parse_word(self, text)
    }

    pub fn tokens(&self, w: &Word) -> Vec<String> {
        w.iter().map(|&s| self.name(s).to_string()).collect()
    }

    /// Human-readable rendering: `1` for the empty word, letters run
    /// together for single-character alphabets, space separated otherwise.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let sep = if self.single_char() { "" } else { " " };
        self.tokens(w).join(sep)
    }

    /// Space-separated rendering used by the file format.
    pub fn render_tokens(&self, w: &Word) -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            self.tokens(w).join(" ")
        }
    }
}

/// A total order on generators: `rank[s]` is the position of `s`, smallest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolOrder {
    rank: Vec<u32>,
}

impl SymbolOrder {
    pub fn identity(n: usize) -> Self {
        SymbolOrder {
            rank: (0..n as u32).collect(),
        }
    }

    /// Builds the order listing `ascending` from smallest to largest.
    /// Returns `None` unless `ascending` is a permutation of `0..n`.
    pub fn from_ascending(ascending: &[Symbol], n: usize) -> Option<Self> {
        if ascending.len() != n {
            return None;
        }
        let mut rank = vec![u32::MAX; n];
        for (r, s) in ascending.iter().enumerate() {
            if s.index() >= n || rank[s.index()] != u32::MAX {
                return None;
            }
            rank[s.index()] = r as u32;
        }
        Some(SymbolOrder { rank })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, s: Symbol) -> u32 {
        self.rank[s.index()]
    }

    pub fn is_identity(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, &r)| i as u32 == r)
    }

    pub fn ascending(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = (0..self.rank.len() as u32).map(Symbol).collect();
        v.sort_by_key(|&s| self.rank(s));
        v
    }

    /// Lexicographic comparison of equal-or-unequal length words by rank.
    pub fn lex(&self, u: &[Symbol], v: &[Symbol]) -> Ordering {
        for (a, b) in u.iter().zip(v) {
            match self.rank(*a).cmp(&self.rank(*b)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        u.len().cmp(&v.len())
    }

    pub fn shortlex(&self, u: &[Symbol], v: &[Symbol]) -> Ordering {
        u.len().cmp(&v.len()).then_with(|| self.lex(u, v))
    }
}

/// Shorter words are smaller; equal lengths compare lexicographically by rank.
pub fn shortlex_compare(u: &Word, v: &Word, order: &SymbolOrder) -> Ordering {
    order.shortlex(u, v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOrigin {
    Declared,
    TemplateInstance { template: usize, n: i64 },
    KnuthBendix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Rule {
            lhs,
            rhs,
            origin: RuleOrigin::Declared,
        }
    }

    /// `|rhs| - |lhs|`.
    pub fn length_delta(&self) -> isize {
        self.rhs.len() as isize - self.lhs.len() as isize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Completeness {
    #[default]
    Unverified,
    VerifiedComplete,
    VerifiedIncomplete(Box<CriticalPair>),
}

/// Oriented rules over an alphabet, with the order that orients them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingSystem {
    alphabet: Alphabet,
    order: SymbolOrder,
    rules: Vec<Rule>,
    templates: Vec<RuleTemplate>,
    completeness: Completeness,
    // rule indices keyed by the first symbol of their lhs, ascending
    by_first: Vec<Vec<usize>>,
}

impl RewritingSystem {
    pub fn new(alphabet: Alphabet, order: SymbolOrder, rules: Vec<Rule>) -> Self {
        Self::with_templates(alphabet, order, rules, Vec::new())
    }

    pub fn with_templates(
        alphabet: Alphabet,
        order: SymbolOrder,
        rules: Vec<Rule>,
        templates: Vec<RuleTemplate>,
    ) -> Self {
        assert_eq!(alphabet.len(), order.len(), "order does not cover the alphabet");
        let mut by_first = vec![Vec::new(); alphabet.len()];
        for (i, r) in rules.iter().enumerate() {
            assert!(
                r.lhs.iter().chain(r.rhs.iter()).all(|s| s.index() < alphabet.len()),
                "rule {i} uses a symbol outside the alphabet"
            );
            if let Some(s) = r.lhs.first() {
                by_first[s.index()].push(i);
            }
        }
        RewritingSystem {
            alphabet,
            order,
            rules,
            templates,
            completeness: Completeness::Unverified,
            by_first,
        }
    }

    /// Same alphabet, order and templates with a different rule list.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Self {
        Self::with_templates(self.alphabet.clone(), self.order.clone(), rules, self.templates.clone())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> &SymbolOrder {
        &self.order
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> Option<&Rule> {
        self.rules.get(i)
    }

    pub fn templates(&self) -> &[RuleTemplate] {
        &self.templates
    }

    pub fn completeness(&self) -> &Completeness {
        &self.completeness
    }

    pub fn is_verified_complete(&self) -> bool {
        self.completeness == Completeness::VerifiedComplete
    }

    pub(crate) fn set_completeness(&mut self, c: Completeness) {
        self.completeness = c;
    }

    pub(crate) fn rules_starting_with(&self, s: Symbol) -> &[usize] {
        &self.by_first[s.index()]
    }

    /// For a system that contains truncated rule families, the longest
    /// instantiated left-hand side. Family members beyond the truncation have
    /// longer left-hand sides, so on words no longer than this the truncated
    /// and the full family agree. `None` when no families are present.
    pub fn horizon(&self) -> Option<usize> {
        self.rules
            .iter()
            .filter(|r| matches!(r.origin, RuleOrigin::TemplateInstance { .. }))
            .map(|r| r.lhs.len())
            .max()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, crate::error::ParseError> {
        self.alphabet.parse_word(text)
    }

    pub fn render(&self, w: &Word) -> String {
        self.alphabet.render(w)
    }

    /// Index of the first rule whose lhs equals `lhs`.
    pub fn rule_index_by_lhs(&self, lhs: &Word) -> Option<usize> {
        self.rules.iter().position(|r| &r.lhs == lhs)
    }

    /// Serializes to the presentation file format.
    pub fn to_presentation(&self) -> String {
        parse::serialize(self)
    }
}

impl fmt::Display for RewritingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_presentation())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    EmptyLhs,
    /// `lhs` is not strictly greater than `rhs` in shortlex.
    NotShortlexDecreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No violations: every rule is shortlex-decreasing, so the system terminates.
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_system(system: &RewritingSystem) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, r) in system.rules().iter().enumerate() {
        if r.lhs.is_empty() {
            violations.push(Violation {
                rule: i,
                kind: ViolationKind::EmptyLhs,
            });
        } else if system.order().shortlex(&r.lhs, &r.rhs) != Ordering::Greater {
            violations.push(Violation {
                rule: i,
                kind: ViolationKind::NotShortlexDecreasing,
            });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ids: &[u32]) -> Word {
        Word::from_indices(ids)
    }

    #[test]
    fn shortlex_examples() {
        let ord = SymbolOrder::identity(2);
        assert_eq!(shortlex_compare(&w(&[0]), &w(&[1]), &ord), Ordering::Less);
        assert_eq!(shortlex_compare(&w(&[0, 1]), &w(&[1]), &ord), Ordering::Greater);
        assert_eq!(shortlex_compare(&w(&[1, 0]), &w(&[0, 1]), &ord), Ordering::Greater);
        assert_eq!(shortlex_compare(&w(&[]), &w(&[]), &ord), Ordering::Equal);
    }

    #[test]
    fn reversed_order_flips_lex_step() {
        let ord = SymbolOrder::from_ascending(&[Symbol(1), Symbol(0)], 2).unwrap();
        assert_eq!(shortlex_compare(&w(&[1, 0]), &w(&[0, 1]), &ord), Ordering::Less);
        assert_eq!(ord.ascending(), vec![Symbol(1), Symbol(0)]);
    }

    #[test]
    fn from_ascending_rejects_non_permutations() {
        assert!(SymbolOrder::from_ascending(&[Symbol(0), Symbol(0)], 2).is_none());
        assert!(SymbolOrder::from_ascending(&[Symbol(0)], 2).is_none());
        assert!(SymbolOrder::from_ascending(&[Symbol(0), Symbol(2)], 2).is_none());
    }

    #[test]
    fn ex22_is_oriented_under_b_d_c_a() {
        let sys =
            parse_presentation("gens: a b c d\norder: b < d < c < a\nrule: a b -> b c\nrule: c d -> d a\n").unwrap();
        assert!(validate_system(&sys).is_ok());
    }

    #[test]
    fn misoriented_and_empty_rules_are_reported() {
        let sys = parse_presentation("gens: a b c\nrule: a b -> b c\n").unwrap();
        let report = validate_system(&sys);
        assert_eq!(
            report.violations,
            vec![Violation {
                rule: 0,
                kind: ViolationKind::NotShortlexDecreasing
            }]
        );

        let alphabet = Alphabet::new(&["a"]).unwrap();
        let sys = RewritingSystem::new(
            alphabet,
            SymbolOrder::identity(1),
            vec![Rule::new(Word::empty(), w(&[0]))],
        );
        assert_eq!(
            validate_system(&sys).violations,
            vec![Violation {
                rule: 0,
                kind: ViolationKind::EmptyLhs
            }]
        );
    }

    #[test]
    fn rendering() {
        let a = Alphabet::new(&["a", "b"]).unwrap();
        assert_eq!(a.render(&w(&[0, 1, 1])), "abb");
        assert_eq!(a.render(&Word::empty()), "1");
        let hm = Alphabet::new(&["a", "AB"]).unwrap();
        assert_eq!(hm.render(&w(&[1, 0])), "AB a");
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(&["a", "a"]).is_err());
        assert!(Alphabet::new(&["a^"]).is_err());
        assert!(Alphabet::new(&["1"]).is_err());
        assert!(Alphabet::new(&[""]).is_err());
    }

    #[test]
    fn word_factor_helpers() {
        let x = w(&[0, 1, 0, 1]);
        assert_eq!(x.occurrences(&w(&[0, 1])).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(x.replace_factor(1, 2, &w(&[2])), w(&[0, 2, 1]));
        assert!(!x.contains_factor(&w(&[1, 1])));
    }
}
