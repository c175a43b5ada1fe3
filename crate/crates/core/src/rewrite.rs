//! Classical (linear) string rewriting.
//!
//! Reduction is leftmost-outermost: the occurrence with the smallest start
//! position wins, ties going to the lowest rule index. On a complete system
//! the strategy does not affect normal forms.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::presentation::{Completeness, RewritingSystem, Rule, RuleOrigin, Symbol, Word};

pub const DEFAULT_STEP_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: usize,
    pub position: usize,
    pub result: Word,
}

fn find_leftmost(system: &RewritingSystem, w: &[Symbol], from: usize) -> Option<(usize, usize)> {
    let rules = system.rules();
    for p in from..w.len() {
        for &ri in system.rules_starting_with(w[p]) {
            let l = &rules[ri].lhs;
            if p + l.len() <= w.len() && w[p..p + l.len()] == l[..] {
                return Some((p, ri));
            }
        }
    }
    None
}

pub fn reduce_once(system: &RewritingSystem, w: &Word) -> Option<ReductionStep> {
    let (position, rule) = find_leftmost(system, w, 0)?;
    let r = &system.rules()[rule];
    Some(ReductionStep {
        rule,
        position,
        result: w.replace_factor(position, r.lhs.len(), &r.rhs),
    })
}

/// Every one-step reduct of `w`, ordered by (position, rule index).
pub fn all_reductions(system: &RewritingSystem, w: &Word) -> Vec<ReductionStep> {
    let rules = system.rules();
    let mut out = Vec::new();
    for p in 0..w.len() {
        for &ri in system.rules_starting_with(w[p]) {
            let l = &rules[ri].lhs;
            if p + l.len() <= w.len() && w[p..p + l.len()] == l[..] {
                out.push(ReductionStep {
                    rule: ri,
                    position: p,
                    result: w.replace_factor(p, l.len(), &rules[ri].rhs),
                });
            }
        }
    }
    out
}

pub fn is_irreducible(system: &RewritingSystem, w: &[Symbol]) -> bool {
    find_leftmost(system, w, 0).is_none()
}

pub fn normal_form(system: &RewritingSystem, w: &Word) -> Result<Word> {
    normal_form_with_budget(system, w, DEFAULT_STEP_BUDGET)
}

/// Iterates [`reduce_once`] to an irreducible word, failing after `max_steps`.
pub fn normal_form_with_budget(system: &RewritingSystem, w: &Word, max_steps: usize) -> Result<Word> {
    let max_lhs = system.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(1).max(1);
    let mut cur: Vec<Symbol> = w.symbols().to_vec();
    let mut from = 0;
    let mut steps = 0;
    // Before the leftmost redex at p nothing matched, so after rewriting the
    // next leftmost redex cannot start before p - (max_lhs - 1).
    while let Some((p, ri)) = find_leftmost(system, &cur, from) {
        if steps == max_steps {
            return Err(Error::StepBudgetExceeded(max_steps));
        }
        steps += 1;
        let r = &system.rules()[ri];
        cur.splice(p..p + r.lhs.len(), r.rhs.iter().copied());
        from = p.saturating_sub(max_lhs - 1);
    }
    Ok(Word::new(cur))
}

/// Decides `u =_M v` by comparing normal forms. Requires a system verified
/// complete; for truncated families the answer is exact on words within the
/// horizon and sound (never a false `true`) beyond it.
pub fn equal_in_monoid(system: &RewritingSystem, u: &Word, v: &Word) -> Result<bool> {
    if !system.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    Ok(normal_form(system, u)? == normal_form(system, v)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CriticalPairKind {
    Overlap,
    Inclusion,
}

/// Two one-step reducts of a superposition of two left-hand sides.
/// `left` applies `rules.0` at position 0, `right` applies `rules.1` at `position`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub kind: CriticalPairKind,
    pub rules: (usize, usize),
    pub position: usize,
    pub superposition: Word,
    pub left: Word,
    pub right: Word,
}

/// Overlaps (a proper suffix of one lhs equals a proper prefix of another,
/// both orders, including self-overlaps) and inclusions (one lhs a factor of
/// another), ordered by rule pair then position.
pub fn critical_pairs(system: &RewritingSystem) -> Vec<CriticalPair> {
    let rules = system.rules();
    let mut out = Vec::new();
    for (i, ri) in rules.iter().enumerate() {
        for (j, rj) in rules.iter().enumerate() {
            let (li, lj) = (&ri.lhs, &rj.lhs);
            if li.is_empty() || lj.is_empty() {
                continue;
            }
            for p in 0..li.len() {
                let kind = if p + lj.len() <= li.len() {
                    if i == j || li[p..p + lj.len()] != lj[..] {
                        continue;
                    }
                    CriticalPairKind::Inclusion
                } else {
                    let k = li.len() - p;
                    if p == 0 || li[p..] != lj[..k] {
                        continue;
                    }
                    CriticalPairKind::Overlap
                };
                let superposition = if kind == CriticalPairKind::Inclusion {
                    li.clone()
                } else {
                    li.concat(&lj.slice(li.len() - p, lj.len()))
                };
                let left = superposition.replace_factor(0, li.len(), &ri.rhs);
                let right = superposition.replace_factor(p, lj.len(), &rj.rhs);
                out.push(CriticalPair {
                    kind,
                    rules: (i, j),
                    position: p,
                    superposition,
                    left,
                    right,
                });
            }
        }
    }
    out
}

// Pairs beyond the truncation horizon may need family members that were not
// instantiated; they are outside the verified region.
fn in_scope(system: &RewritingSystem, cp: &CriticalPair) -> bool {
    system.horizon().is_none_or(|h| cp.superposition.len() <= h)
}

fn first_unjoinable(system: &RewritingSystem) -> Result<Option<(CriticalPair, Word, Word)>> {
    for cp in critical_pairs(system) {
        if !in_scope(system, &cp) {
            continue;
        }
        let a = normal_form(system, &cp.left)?;
        let b = normal_form(system, &cp.right)?;
        if a != b {
            return Ok(Some((cp, a, b)));
        }
    }
    Ok(None)
}

/// Checks joinability of every critical pair and records the verdict on the
/// system. For truncated families only superpositions within
/// [`RewritingSystem::horizon`] are checked, which certifies completeness on
/// all words of at most that length.
pub fn verify_confluence(system: &mut RewritingSystem) -> Result<Completeness> {
    let verdict = match first_unjoinable(system)? {
        None => Completeness::VerifiedComplete,
        Some((cp, _, _)) => Completeness::VerifiedIncomplete(Box::new(cp)),
    };
    system.set_completeness(verdict.clone());
    Ok(verdict)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KbLimits {
    pub max_rules: usize,
    pub max_word_len: usize,
    pub max_iterations: usize,
}

impl Default for KbLimits {
    fn default() -> Self {
        KbLimits {
            max_rules: 200,
            max_word_len: 32,
            max_iterations: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KbOutcome {
    Completed(RewritingSystem),
    /// A limit tripped; the partial system is returned unverified.
    Diverged(RewritingSystem),
}

fn orient(system: &RewritingSystem, a: Word, b: Word) -> Rule {
    let (lhs, rhs) = match system.order().shortlex(&a, &b) {
        Ordering::Greater => (a, b),
        _ => (b, a),
    };
    Rule {
        lhs,
        rhs,
        origin: RuleOrigin::KnuthBendix,
    }
}

// Removes rules whose lhs is reducible by the others (re-adding the
// normalized equation) and normalizes right-hand sides, until stable.
fn interreduce(base: &RewritingSystem, mut rules: Vec<Rule>) -> Result<Vec<Rule>> {
    'outer: loop {
        for i in 0..rules.len() {
            let mut others = rules.clone();
            let r = others.remove(i);
            let rest = base.with_rules(others.clone());
            if !is_irreducible(&rest, &r.lhs) {
                let a = normal_form(&rest, &r.lhs)?;
                let b = normal_form(&rest, &r.rhs)?;
                if a != b {
                    others.push(orient(base, a, b));
                }
                rules = others;
                continue 'outer;
            }
            let full = base.with_rules(rules.clone());
            let rhs = normal_form(&full, &r.rhs)?;
            if rhs != rules[i].rhs {
                rules[i].rhs = rhs;
                continue 'outer;
            }
        }
        return Ok(rules);
    }
}

/// Knuth-Bendix completion under shortlex.
pub fn knuth_bendix(system: &RewritingSystem, limits: KbLimits) -> Result<KbOutcome> {
    if limits.max_rules == 0 || limits.max_word_len == 0 || limits.max_iterations == 0 {
        return Err(Error::InvalidLimit("Knuth-Bendix limits must be positive".into()));
    }
    if limits.max_rules > 1_000_000 || limits.max_iterations > 10_000_000 {
        return Err(Error::InvalidLimit("Knuth-Bendix limits are unreasonably large".into()));
    }
    let mut rules = system.rules().to_vec();
    for _ in 0..limits.max_iterations {
        rules = interreduce(system, rules)?;
        let current = system.with_rules(rules.clone());
        match first_unjoinable(&current)? {
            None => {
                let mut done = current;
                done.set_completeness(Completeness::VerifiedComplete);
                return Ok(KbOutcome::Completed(done));
            }
            Some((_, a, b)) => {
                let rule = orient(system, a, b);
                if rule.lhs.len() > limits.max_word_len || rules.len() >= limits.max_rules {
                    return Ok(KbOutcome::Diverged(current));
                }
                rules.push(rule);
            }
        }
    }
    Ok(KbOutcome::Diverged(system.with_rules(rules)))
}
