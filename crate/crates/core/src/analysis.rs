//! Static analysis of rule pairs under rotation: prefix/suffix sets,
//! simultaneous applicability, decompositions and cyclic ambiguities.

use crate::cyclic::{
    are_cyclic_conjugates, class_representatives, rotate, termination_report, ExploreBudget, TerminationVerdict,
};
use crate::error::{Error, Result};
use crate::presentation::{RewritingSystem, Rule, Word};

/// Non-empty prefixes of `w`, shortest first.
pub fn prefixes(w: &Word) -> Result<Vec<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok((1..=w.len()).map(|k| w.slice(0, k)).collect())
}

/// Non-empty suffixes of `w`, shortest first.
pub fn suffixes(w: &Word) -> Result<Vec<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok((1..=w.len()).map(|k| w.slice(w.len() - k, w.len())).collect())
}

/// Start offsets of the rotations of `w` that contain `pattern`.
fn rotations_containing(w: &Word, pattern: &Word) -> Vec<usize> {
    if pattern.len() > w.len() {
        return Vec::new();
    }
    (0..w.len().max(1))
        .filter(|&i| rotate(w, i).contains_factor(pattern))
        .collect()
}

fn lhs_of(system: &RewritingSystem, r: usize) -> Result<&Word> {
    system.rule(r).map(|rule| &rule.lhs).ok_or(Error::RuleIndex(r))
}

/// Whether one rotation of `w` admits both rules. An absent rule is a wildcard.
pub fn is_c_defined(system: &RewritingSystem, w: &Word, r1: Option<usize>, r2: Option<usize>) -> Result<bool> {
    let mut sets = Vec::new();
    for r in [r1, r2].into_iter().flatten() {
        let rots = rotations_containing(w, lhs_of(system, r)?);
        if rots.is_empty() {
            return Err(Error::RuleDoesNotApply { rule: r });
        }
        sets.push(rots);
    }
    Ok(match sets.as_slice() {
        [a, b] => a.iter().any(|i| b.contains(i)),
        _ => true,
    })
}

fn meets(a: &[Word], b: &[Word]) -> bool {
    a.iter().any(|p| b.contains(p))
}

/// `pre(l2) ∩ suf(l1) = ∅` or `pre(l1) ∩ suf(l2) = ∅`.
pub fn presuf_disjoint(r1: &Rule, r2: &Rule) -> bool {
    let (Ok(p1), Ok(s1), Ok(p2), Ok(s2)) = (
        prefixes(&r1.lhs),
        suffixes(&r1.lhs),
        prefixes(&r2.lhs),
        suffixes(&r2.lhs),
    ) else {
        return true;
    };
    !meets(&p2, &s1) || !meets(&p1, &s2)
}

/// `lhs(r1) = x·u·y` and `lhs(r2) = y·v·x` with `x`, `y` non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub rules: (usize, usize),
    pub x: Word,
    pub u: Word,
    pub y: Word,
    pub v: Word,
}

pub fn enumerate_decompositions(system: &RewritingSystem, r1: usize, r2: usize) -> Result<Vec<Decomposition>> {
    let l1 = lhs_of(system, r1)?;
    let l2 = lhs_of(system, r2)?;
    let bound = l1.len().min(l2.len());
    let mut out = Vec::new();
    for xl in 1..bound {
        for yl in 1..=bound - xl {
            let x = l1.slice(0, xl);
            let y = l1.slice(l1.len() - yl, l1.len());
            if l2.starts_with(&y) && l2.ends_with(&x) {
                out.push(Decomposition {
                    rules: (r1, r2),
                    u: l1.slice(xl, l1.len() - yl),
                    v: l2.slice(yl, l2.len() - xl),
                    x,
                    y,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbiguityKind {
    /// `u` and `v` both non-empty.
    CyclicalOverlap,
    /// `u = v = 1`: the two left-hand sides are rotations of one another.
    CyclicalInclusionConjugate,
    /// `rotate(lhs(outer), rotation) = prefix · lhs(inner)` with `prefix` non-empty.
    CyclicalInclusionFactor {
        outer: usize,
        inner: usize,
        rotation: usize,
        prefix: Word,
    },
}

impl AmbiguityKind {
    pub fn name(&self) -> &'static str {
        match self {
            AmbiguityKind::CyclicalOverlap => "overlap",
            AmbiguityKind::CyclicalInclusionConjugate => "inclusion-conjugate",
            AmbiguityKind::CyclicalInclusionFactor { .. } => "inclusion-factor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAmbiguity {
    pub decomposition: Decomposition,
    pub kind: AmbiguityKind,
    pub left_result: Word,
    pub right_result: Word,
    /// The two results are not rotations of one another.
    pub raw: bool,
}

impl CyclicAmbiguity {
    pub fn rules(&self) -> (usize, usize) {
        self.decomposition.rules
    }
}

fn classify(system: &RewritingSystem, d: Decomposition) -> CyclicAmbiguity {
    let (r1, r2) = d.rules;
    let rhs1 = &system.rules()[r1].rhs;
    let rhs2 = &system.rules()[r2].rhs;
    let (kind, left, right) = match (d.u.is_empty(), d.v.is_empty()) {
        (true, true) => (AmbiguityKind::CyclicalInclusionConjugate, rhs1.clone(), rhs2.clone()),
        (true, false) => {
            // lhs(r1) = x·y sits inside v·x·y, a rotation of lhs(r2)
            let kind = AmbiguityKind::CyclicalInclusionFactor {
                outer: r2,
                inner: r1,
                rotation: d.y.len(),
                prefix: d.v.clone(),
            };
            (kind, rhs2.clone(), d.v.concat(rhs1))
        }
        (false, true) => {
            let kind = AmbiguityKind::CyclicalInclusionFactor {
                outer: r1,
                inner: r2,
                rotation: d.x.len(),
                prefix: d.u.clone(),
            };
            (kind, rhs1.clone(), d.u.concat(rhs2))
        }
        (false, false) => (AmbiguityKind::CyclicalOverlap, rhs1.concat(&d.v), rhs2.concat(&d.u)),
    };
    let raw = !are_cyclic_conjugates(&left, &right);
    CyclicAmbiguity {
        decomposition: d,
        kind,
        left_result: left,
        right_result: right,
        raw,
    }
}

/// All cyclic ambiguities over unordered rule pairs, ordered by
/// (first rule, second rule, |x|, |y|). For a rule paired with itself the
/// mirrored decomposition `(y, v, x, u)` is reported once.
pub fn find_cyclic_ambiguities(system: &RewritingSystem) -> Vec<CyclicAmbiguity> {
    let n = system.rules().len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let Ok(ds) = enumerate_decompositions(system, i, j) else {
                continue;
            };
            for d in ds {
                if i == j && (d.x.len(), d.x.symbols()) > (d.y.len(), d.y.symbols()) {
                    continue;
                }
                out.push(classify(system, d));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminationEvidence {
    AssumedTerminating,
    /// Check cyclic termination for every class of length up to the bound.
    ReportPerWord(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfluenceWitnesses {
    pub raw: Vec<CyclicAmbiguity>,
    pub nonterminating: Vec<Word>,
    /// Words whose exploration hit the budget.
    pub undecided: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfluenceVerdict {
    CyclicallyConfluent,
    Inconclusive(ConfluenceWitnesses),
}

/// Cyclic confluence from the absence of raw ambiguities plus cyclic
/// termination. Never concludes non-confluence.
pub fn sufficient_confluence(system: &RewritingSystem, evidence: TerminationEvidence) -> Result<ConfluenceVerdict> {
    if !system.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    let mut w = ConfluenceWitnesses {
        raw: find_cyclic_ambiguities(system).into_iter().filter(|a| a.raw).collect(),
        ..Default::default()
    };
    if let TerminationEvidence::ReportPerWord(maxlen) = evidence {
        for len in 1..=maxlen {
            for word in class_representatives(system.order(), len) {
                match termination_report(system, &word, ExploreBudget::default()) {
                    TerminationVerdict::TerminatesAllseq => {}
                    TerminationVerdict::NonTerminatingAllseq(_) => w.nonterminating.push(word),
                    TerminationVerdict::Inconclusive => w.undecided.push(word),
                }
            }
        }
    }
    if w == ConfluenceWitnesses::default() {
        Ok(ConfluenceVerdict::CyclicallyConfluent)
    } else {
        Ok(ConfluenceVerdict::Inconclusive(w))
    }
}
