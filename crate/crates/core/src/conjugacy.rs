//! Conjugacy in the presented monoid: sufficient conditions from cyclic
//! reduction, and bounded brute-force witness searches.

use crate::completion::{verify_cyclic_completeness, AugmentedSystem, CyclicCompletenessCheck};
use crate::cyclic::explore::sinks_sorted;
use crate::cyclic::{explore, CyclicClass, CyclicRelation, ExploreBudget, SinkComponent};
use crate::error::{Error, Result};
use crate::presentation::{RewritingSystem, Word};
use crate::rewrite::{equal_in_monoid, is_irreducible};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyEvidence {
    /// Both words have the same unique cyclically irreducible form.
    RhoAgreement(CyclicClass),
    /// Both words have the same unique sink component.
    SimAgreement(SinkComponent),
    /// Both words reach this class by cyclic reduction.
    CommonDescendant(CyclicClass),
    /// `u·x = x·v` and `y·u = v·y` in the monoid.
    Witnesses(Word, Word),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    BudgetExhausted,
    /// The forms differ but cyclic completeness could not be established.
    CompletenessNotEstablished(CyclicCompletenessCheck),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    Conjugate(ConjugacyEvidence),
    /// The sink forms differ and the augmented system is cyclically complete
    /// on words up to `verified_up_to`. The words may still be conjugate.
    NotInTranspositionClosure {
        u_forms: Vec<CyclicClass>,
        v_forms: Vec<CyclicClass>,
        verified_up_to: usize,
    },
    Unknown(UnknownReason),
}

pub fn decide_conjugacy(aug: &AugmentedSystem, u: &Word, v: &Word, budget: ExploreBudget) -> Result<ConjugacyVerdict> {
    let system = aug.system();
    if !system.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    let eu = explore(aug, u, budget);
    let ev = explore(aug, v, budget);
    let su = eu.is_exhausted().then(|| sinks_sorted(system, &eu));
    let sv = ev.is_exhausted().then(|| sinks_sorted(system, &ev));
    if let (Some([a]), Some([b])) = (su.as_deref(), sv.as_deref()) {
        if a == b {
            let evidence = if a.irreducible {
                ConjugacyEvidence::RhoAgreement(a.representative.clone())
            } else {
                ConjugacyEvidence::SimAgreement(a.clone())
            };
            return Ok(ConjugacyVerdict::Conjugate(evidence));
        }
    }
    let mut shared: Vec<&CyclicClass> = eu.nodes.iter().map(|n| &n.class).filter(|c| ev.contains(c)).collect();
    if !shared.is_empty() {
        shared.sort_by(|a, b| crate::presentation::shortlex_compare(a.canonical(), b.canonical(), system.order()));
        return Ok(ConjugacyVerdict::Conjugate(ConjugacyEvidence::CommonDescendant(
            shared[0].clone(),
        )));
    }
    let (Some(su), Some(sv)) = (su, sv) else {
        return Ok(ConjugacyVerdict::Unknown(UnknownReason::BudgetExhausted));
    };
    let scale = u.len().max(v.len());
    match verify_cyclic_completeness(aug, scale, budget) {
        CyclicCompletenessCheck::VerifiedUpTo(n) => Ok(ConjugacyVerdict::NotInTranspositionClosure {
            u_forms: su.into_iter().map(|s| s.representative).collect(),
            v_forms: sv.into_iter().map(|s| s.representative).collect(),
            verified_up_to: n,
        }),
        other => Ok(ConjugacyVerdict::Unknown(UnknownReason::CompletenessNotEstablished(
            other,
        ))),
    }
}

/// Irreducible words of length at most `max_len`, in shortlex order.
pub fn irreducible_words(system: &RewritingSystem, max_len: usize) -> Vec<Word> {
    let asc = system.order().ascending();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &s in &asc {
                let mut v = w.symbols().to_vec();
                v.push(s);
                if is_irreducible(system, &v) {
                    next.push(Word::new(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// First `x` (shortlex) with `u·x = x·v`. Only irreducible candidates are
/// tried: the normal form of a witness is a witness and is no larger.
pub fn witness_x(system: &RewritingSystem, u: &Word, v: &Word, max_len: usize) -> Result<Option<Word>> {
    first(system, max_len, |x| equal_in_monoid(system, &u.concat(x), &x.concat(v)))
}

/// First `y` (shortlex) with `y·u = v·y`.
pub fn witness_y(system: &RewritingSystem, u: &Word, v: &Word, max_len: usize) -> Result<Option<Word>> {
    first(system, max_len, |y| equal_in_monoid(system, &y.concat(u), &v.concat(y)))
}

fn first(
    system: &RewritingSystem,
    max_len: usize,
    mut test: impl FnMut(&Word) -> Result<bool>,
) -> Result<Option<Word>> {
    if !system.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    for w in irreducible_words(system, max_len) {
        if test(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Witnesses `(x, y)` for `u ≡ v`. A single word serving as both `x` and `y`
/// is preferred (the shortlex-first such word); otherwise the shortlex-first
/// `x` and `y` are chosen independently.
pub fn witness_search(system: &RewritingSystem, u: &Word, v: &Word, max_len: usize) -> Result<Option<(Word, Word)>> {
    let common =
        first(system, max_len, |z| {
            Ok(equal_in_monoid(system, &u.concat(z), &z.concat(v))?
                && equal_in_monoid(system, &z.concat(u), &v.concat(z))?)
        })?;
    if let Some(z) = common {
        return Ok(Some((z.clone(), z)));
    }
    match (witness_x(system, u, v, max_len)?, witness_y(system, u, v, max_len)?) {
        (Some(x), Some(y)) => Ok(Some((x, y))),
        _ => Ok(None),
    }
}

/// First `(x, y)` with `|x| + |y| <= max_split`, `u = x·y` and `v = y·x`.
pub fn transposition_check(
    system: &RewritingSystem,
    u: &Word,
    v: &Word,
    max_split: usize,
) -> Result<Option<(Word, Word)>> {
    if !system.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    let words = irreducible_words(system, max_split);
    for x in &words {
        for y in words.iter().filter(|y| x.len() + y.len() <= max_split) {
            if equal_in_monoid(system, u, &x.concat(y))? && equal_in_monoid(system, v, &y.concat(x))? {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

/// `y·x·w̃ = w̃·y·x` and `x·y·w = w·x·y`. Holds whenever `w·x = x·w̃` and
/// `y·w = w̃·y`; `w̃` need not be a rotation of `w`.
pub fn commutation_check(system: &RewritingSystem, w: &Word, w_tilde: &Word, x: &Word, y: &Word) -> Result<bool> {
    let yx = y.concat(x);
    let xy = x.concat(y);
    Ok(equal_in_monoid(system, &yx.concat(w_tilde), &w_tilde.concat(&yx))?
        && equal_in_monoid(system, &xy.concat(w), &w.concat(&xy))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{are_cyclic_conjugates, rotate};
    use crate::presentation::parse_presentation;
    use crate::rewrite::verify_confluence;

    fn complete(text: &str) -> RewritingSystem {
        let mut s = parse_presentation(text).unwrap();
        verify_confluence(&mut s).unwrap();
        assert!(s.is_verified_complete());
        s
    }

    fn braid() -> RewritingSystem {
        complete("gens: a b\nrule: b a b -> a b a\nrule[n=2..8]: b a^n b a -> a b a^2 b^(n-1)\n")
    }

    #[test]
    fn braid_generators_are_conjugate_but_not_transposed() {
        let s = braid();
        let (a, b) = (s.parse_word("a").unwrap(), s.parse_word("b").unwrap());
        let (x, y) = witness_search(&s, &a, &b, 3).unwrap().unwrap();
        assert_eq!(s.render(&x), "aba");
        assert_eq!(s.render(&y), "aba");
        assert_eq!(s.render(&witness_x(&s, &a, &b, 3).unwrap().unwrap()), "ba");
        let aug = AugmentedSystem::new(s.clone());
        match decide_conjugacy(&aug, &a, &b, ExploreBudget::default()).unwrap() {
            ConjugacyVerdict::NotInTranspositionClosure { verified_up_to, .. } => assert_eq!(verified_up_to, 1),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn rotations_are_conjugate() {
        let s = braid();
        let aug = AugmentedSystem::new(s.clone());
        let w = s.parse_word("ba^2ba").unwrap();
        let v = s.parse_word("a^2bab").unwrap();
        match decide_conjugacy(&aug, &w, &v, ExploreBudget::default()).unwrap() {
            ConjugacyVerdict::Conjugate(ConjugacyEvidence::RhoAgreement(c)) => {
                assert!(are_cyclic_conjugates(c.canonical(), &s.parse_word("ba^4").unwrap()))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            decide_conjugacy(&aug, &w, &rotate(&w, 2), ExploreBudget::default()).unwrap(),
            ConjugacyVerdict::Conjugate(_)
        ));
    }

    #[test]
    fn trivial_witnesses() {
        let s = braid();
        let w = s.parse_word("ab").unwrap();
        assert_eq!(
            witness_search(&s, &w, &w, 0).unwrap(),
            Some((Word::empty(), Word::empty()))
        );
        assert!(commutation_check(&s, &w, &w, &Word::empty(), &Word::empty()).unwrap());
        // aba^2b is a rotation of ba^2ba; ba^4 is not
        let w5 = s.parse_word("ba^2ba").unwrap();
        assert!(commutation_check(&s, &w5, &s.parse_word("aba^2b").unwrap(), &w, &w).is_ok());
        // a and b are not rotations, yet x = y = aba satisfies both identities
        let (a, b, aba) = (
            s.parse_word("a").unwrap(),
            s.parse_word("b").unwrap(),
            s.parse_word("aba").unwrap(),
        );
        assert!(commutation_check(&s, &a, &b, &aba, &aba).unwrap());
        assert!(!commutation_check(&s, &a, &b, &a, &a).unwrap());
    }

    #[test]
    fn transpositions() {
        let free = complete("gens: a b\n");
        let (ab, ba) = (free.parse_word("ab").unwrap(), free.parse_word("ba").unwrap());
        let (x, y) = transposition_check(&free, &ab, &ba, 2).unwrap().unwrap();
        assert_eq!((free.render(&x), free.render(&y)), ("a".into(), "b".into()));
        assert_eq!(transposition_check(&free, &ab, &ab, 0).unwrap(), None);
        let s = braid();
        let (bab, aba) = (s.parse_word("bab").unwrap(), s.parse_word("aba").unwrap());
        let (x, y) = transposition_check(&s, &bab, &aba, 3).unwrap().unwrap();
        assert!(equal_in_monoid(&s, &bab, &x.concat(&y)).unwrap());
        assert!(equal_in_monoid(&s, &aba, &y.concat(&x)).unwrap());
    }

    #[test]
    fn ex22_witnesses() {
        let s = complete("gens: a b c d\norder: b < d < c < a\nrule: a b -> b c\nrule: c d -> d a\n");
        let (u, v) = (s.parse_word("acd").unwrap(), s.parse_word("ada").unwrap());
        let (x, y) = witness_search(&s, &u, &v, 3).unwrap().unwrap();
        assert!(equal_in_monoid(&s, &u.concat(&x), &x.concat(&v)).unwrap());
        assert!(equal_in_monoid(&s, &y.concat(&u), &v.concat(&y)).unwrap());
    }

    #[test]
    fn irreducible_enumeration_is_shortlex() {
        let s = braid();
        let ws = irreducible_words(&s, 4);
        for pair in ws.windows(2) {
            assert_eq!(
                crate::presentation::shortlex_compare(&pair[0], &pair[1], s.order()),
                std::cmp::Ordering::Less
            );
        }
        assert!(!ws.contains(&s.parse_word("bab").unwrap()));
        assert_eq!(ws.iter().filter(|w| w.len() == 3).count(), 7);
    }
}
