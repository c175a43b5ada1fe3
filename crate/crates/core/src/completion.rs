//! Cyclical completion: whole-word reductions between cyclic classes added
//! until every raw cyclic ambiguity of the base rules resolves.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{find_cyclic_ambiguities, CyclicAmbiguity};
use crate::cyclic::explore::sinks_sorted;
use crate::cyclic::{
    class_representatives, explore, is_cyclically_irreducible, rho_from, rho_up_to_sim, rule_steps, CyclicClass,
    CyclicRelation, CyclicStep, ExplorationResult, ExploreBudget, RhoResult, SimFormResult, StepRule,
};
use crate::error::{Error, Result};
use crate::presentation::{parse_document, shortlex_compare, ParseOptions, RewritingSystem, Word};

/// `from ⇝⁺ to`, firing only on whole words of class `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddedReduction {
    pub from: CyclicClass,
    pub to: CyclicClass,
    /// The ambiguity that forced it; `None` when read from a file.
    pub provenance: Option<CyclicAmbiguity>,
}

/// Union-find over cyclic classes with a designated representative per set.
#[derive(Clone, Debug, Default)]
struct ClassDsu {
    ids: HashMap<CyclicClass, usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
    rep: Vec<CyclicClass>,
}

impl ClassDsu {
    fn id(&mut self, c: &CyclicClass) -> usize {
        if let Some(&i) = self.ids.get(c) {
            return i;
        }
        let i = self.parent.len();
        self.ids.insert(c.clone(), i);
        self.parent.push(i);
        self.size.push(1);
        self.rep.push(c.clone());
        i
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn representative(&self, c: &CyclicClass) -> CyclicClass {
        match self.ids.get(c) {
            Some(&i) => self.rep[self.find(i)].clone(),
            None => c.clone(),
        }
    }

    fn union(&mut self, a: &CyclicClass, b: &CyclicClass, rep: CyclicClass) {
        let (ia, ib) = (self.id(a), self.id(b));
        let (mut ra, mut rb) = (self.find(ia), self.find(ib));
        if ra != rb {
            if self.size[ra] < self.size[rb] {
                std::mem::swap(&mut ra, &mut rb);
            }
            self.parent[rb] = ra;
            self.size[ra] += self.size[rb];
        }
        self.rep[ra] = rep;
    }
}

/// A rewriting system together with added whole-word reductions.
#[derive(Clone, Debug)]
pub struct AugmentedSystem {
    base: RewritingSystem,
    added: Vec<AddedReduction>,
    by_from: HashMap<CyclicClass, usize>,
    dsu: ClassDsu,
}

impl AugmentedSystem {
    pub fn new(base: RewritingSystem) -> Self {
        AugmentedSystem {
            base,
            added: Vec::new(),
            by_from: HashMap::new(),
            dsu: ClassDsu::default(),
        }
    }

    pub fn base(&self) -> &RewritingSystem {
        &self.base
    }

    pub fn added(&self) -> &[AddedReduction] {
        &self.added
    }

    pub fn added_from(&self, c: &CyclicClass) -> Option<&AddedReduction> {
        self.by_from.get(c).map(|&i| &self.added[i])
    }

    /// The chosen representative of the merged component containing `c`.
    pub fn class_representative(&self, c: &CyclicClass) -> CyclicClass {
        self.dsu.representative(c)
    }

    /// Adds `from ⇝⁺ to`. Both classes must be distinct, cyclically
    /// irreducible under the base rules, and `from` must not already have
    /// an added reduction.
    pub fn add_reduction(
        &mut self,
        from: CyclicClass,
        to: CyclicClass,
        provenance: Option<CyclicAmbiguity>,
    ) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidAugmentation(why.to_string()));
        if from == to {
            return bad("a class cannot reduce to itself");
        }
        if self.by_from.contains_key(&from) {
            return bad("a class already has an added reduction");
        }
        if !is_cyclically_irreducible(&self.base, from.canonical())
            || !is_cyclically_irreducible(&self.base, to.canonical())
        {
            return bad("added reductions must join cyclically irreducible classes");
        }
        let rep = self.dsu.representative(&to);
        self.dsu.union(&from, &to, rep);
        self.by_from.insert(from.clone(), self.added.len());
        self.added.push(AddedReduction { from, to, provenance });
        Ok(())
    }

    /// Presentation text with one `creduce:` line per added reduction.
    pub fn to_presentation(&self) -> String {
        let mut out = self.base.to_presentation();
        let a = self.base.alphabet();
        for r in &self.added {
            let _ = writeln!(
                out,
                "creduce: {} -> {}",
                a.render_tokens(r.from.canonical()),
                a.render_tokens(r.to.canonical())
            );
        }
        out
    }
}

impl CyclicRelation for AugmentedSystem {
    fn system(&self) -> &RewritingSystem {
        &self.base
    }

    fn steps_from(&self, w: &Word) -> Vec<CyclicStep> {
        let mut steps = rule_steps(&self.base, w);
        if self.added.is_empty() {
            return steps;
        }
        let class = CyclicClass::of(w, self.base.order());
        if let Some(&i) = self.by_from.get(&class) {
            let to = &self.added[i].to;
            if !steps.iter().any(|s| &s.result == to) {
                steps.push(CyclicStep {
                    source: class,
                    source_word: w.clone(),
                    rotation: 0,
                    rotated: w.clone(),
                    rule: StepRule::Added(i),
                    position: 0,
                    result_word: to.canonical().clone(),
                    result: to.clone(),
                });
            }
        }
        steps
    }
}

/// Builds an augmented system from word pairs `(from, to)`.
pub fn augment(base: RewritingSystem, reductions: Vec<(Word, Word)>) -> Result<AugmentedSystem> {
    let mut aug = AugmentedSystem::new(base);
    for (l, r) in reductions {
        let order = aug.base.order();
        let (from, to) = (CyclicClass::of(&l, order), CyclicClass::of(&r, order));
        aug.add_reduction(from, to, None)?;
    }
    Ok(aug)
}

/// Reads a presentation with `creduce:` lines.
pub fn parse_augmented(text: &str) -> Result<AugmentedSystem> {
    let doc = parse_document(
        text,
        ParseOptions {
            allow_creduce: true,
            ..ParseOptions::default()
        },
    )?;
    augment(doc.system, doc.creduce)
}

#[derive(Clone, Debug)]
pub enum Resolution {
    Resolved(CyclicClass),
    Unresolved(RhoResult, RhoResult),
    Unknown,
}

fn shortlex_least<'a>(system: &RewritingSystem, it: impl Iterator<Item = &'a CyclicClass>) -> Option<&'a CyclicClass> {
    it.min_by(|a, b| shortlex_compare(a.canonical(), b.canonical(), system.order()))
}

fn resolve_explored(system: &RewritingSystem, left: &ExplorationResult, right: &ExplorationResult) -> Resolution {
    let shared: Vec<&CyclicClass> = left
        .nodes
        .iter()
        .map(|n| &n.class)
        .filter(|c| right.contains(c))
        .collect();
    if !shared.is_empty() {
        // prefer the common irreducible form when both sides have one
        let l_irr = left.irreducible_nodes();
        let r_irr = right.irreducible_nodes();
        if left.is_exhausted() && right.is_exhausted() && l_irr.len() == 1 && r_irr.len() == 1 {
            let (a, b) = (&left.nodes[l_irr[0]].class, &right.nodes[r_irr[0]].class);
            if a == b {
                return Resolution::Resolved(a.clone());
            }
        }
        return Resolution::Resolved(shortlex_least(system, shared.into_iter()).unwrap().clone());
    }
    if !left.is_exhausted() || !right.is_exhausted() {
        return Resolution::Unknown;
    }
    Resolution::Unresolved(rho_from(system, left.clone()), rho_from(system, right.clone()))
}

/// Whether the two results of `amb` reach a common class under `rel`.
pub fn resolves<R: CyclicRelation + ?Sized>(rel: &R, amb: &CyclicAmbiguity, budget: ExploreBudget) -> Resolution {
    let left = explore(rel, &amb.left_result, budget);
    let right = explore(rel, &amb.right_result, budget);
    resolve_explored(rel.system(), &left, &right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrientationPolicy {
    /// Merge components and point everything at the shortlex-least class.
    OrientToShortlexMin,
    /// Seeded coin flips; fails when both classes already reduce elsewhere.
    FaithfulArbitrary(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivergenceReason {
    BudgetExhausted,
    /// A side of the ambiguity reaches no cyclically irreducible class.
    NoIrreducibleForm,
}

#[derive(Clone, Debug)]
pub enum CompletionOutcome {
    CyclicallyCompleted(AugmentedSystem),
    /// Both chosen classes already carry an added reduction.
    Failed {
        partial: AugmentedSystem,
        ambiguity: CyclicAmbiguity,
        classes: (CyclicClass, CyclicClass),
    },
    Diverged {
        partial: AugmentedSystem,
        ambiguity: CyclicAmbiguity,
        reason: DivergenceReason,
    },
}

pub fn cyclical_completion(
    system: &RewritingSystem,
    budget: ExploreBudget,
    policy: OrientationPolicy,
) -> Result<CompletionOutcome> {
    complete_augmented(AugmentedSystem::new(system.clone()), budget, policy)
}

/// Continues completion from an existing augmented system.
pub fn complete_augmented(
    mut aug: AugmentedSystem,
    budget: ExploreBudget,
    policy: OrientationPolicy,
) -> Result<CompletionOutcome> {
    if !aug.base.is_verified_complete() {
        return Err(Error::NotVerifiedComplete);
    }
    let raws: Vec<CyclicAmbiguity> = find_cyclic_ambiguities(&aug.base)
        .into_iter()
        .filter(|a| a.raw)
        .collect();
    let mut rng = match policy {
        OrientationPolicy::FaithfulArbitrary(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        OrientationPolicy::OrientToShortlexMin => None,
    };
    'fixpoint: loop {
        for amb in &raws {
            let left = explore(&aug, &amb.left_result, budget);
            let right = explore(&aug, &amb.right_result, budget);
            match resolve_explored(&aug.base, &left, &right) {
                Resolution::Resolved(_) => continue,
                Resolution::Unknown => {
                    return Ok(CompletionOutcome::Diverged {
                        partial: aug,
                        ambiguity: amb.clone(),
                        reason: DivergenceReason::BudgetExhausted,
                    })
                }
                Resolution::Unresolved(..) => {}
            }
            let stuck = |aug| {
                Ok(CompletionOutcome::Diverged {
                    partial: aug,
                    ambiguity: amb.clone(),
                    reason: DivergenceReason::NoIrreducibleForm,
                })
            };
            match rng.as_mut() {
                None => {
                    let pick = |ex: &ExplorationResult| {
                        sinks_sorted(&aug.base, ex)
                            .into_iter()
                            .find(|s| s.irreducible)
                            .map(|s| s.representative)
                    };
                    let (Some(z1), Some(z2)) = (pick(&left), pick(&right)) else {
                        return stuck(aug);
                    };
                    let (hi, lo) = match shortlex_compare(z1.canonical(), z2.canonical(), aug.base.order()) {
                        std::cmp::Ordering::Less => (z2, z1),
                        _ => (z1, z2),
                    };
                    aug.add_reduction(hi.clone(), lo.clone(), Some(amb.clone()))?;
                    for r in &mut aug.added {
                        if r.to == hi {
                            r.to = lo.clone();
                        }
                    }
                    aug.dsu.union(&hi, &lo, lo.clone());
                }
                Some(rng) => {
                    // the irreducible forms modulo the base rules alone
                    let pick = |w: &Word| {
                        let ex = explore(&aug.base, w, budget);
                        let irr = ex
                            .irreducible_nodes()
                            .into_iter()
                            .map(|i| ex.nodes[i].class.clone())
                            .collect::<Vec<_>>();
                        shortlex_least(&aug.base, irr.iter()).cloned()
                    };
                    let (Some(z1), Some(z2)) = (pick(&amb.left_result), pick(&amb.right_result)) else {
                        return stuck(aug);
                    };
                    let (from, to) = match (aug.by_from.contains_key(&z1), aug.by_from.contains_key(&z2)) {
                        (false, false) if rng.gen_bool(0.5) => (z1, z2),
                        (false, false) => (z2, z1),
                        (true, false) => (z2, z1),
                        (false, true) => (z1, z2),
                        (true, true) => {
                            return Ok(CompletionOutcome::Failed {
                                partial: aug,
                                ambiguity: amb.clone(),
                                classes: (z1, z2),
                            })
                        }
                    };
                    aug.add_reduction(from, to, Some(amb.clone()))?;
                }
            }
            continue 'fixpoint;
        }
        return Ok(CompletionOutcome::CyclicallyCompleted(aug));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclicCompletenessCheck {
    VerifiedUpTo(usize),
    /// A word with several sink components.
    CounterexampleWord(Word),
    /// A word whose exploration hit the budget (and no counterexample was found).
    Inconclusive(Word),
}

/// Checks every class of length `1..=maxlen` for a unique sink component.
pub fn verify_cyclic_completeness(
    aug: &AugmentedSystem,
    maxlen: usize,
    budget: ExploreBudget,
) -> CyclicCompletenessCheck {
    let mut undecided = None;
    for len in 1..=maxlen {
        for w in class_representatives(aug.base.order(), len) {
            match rho_up_to_sim(aug, &w, budget) {
                SimFormResult::UniqueClass(_) => {}
                SimFormResult::Multiple(_) => return CyclicCompletenessCheck::CounterexampleWord(w),
                SimFormResult::Unknown(_) => {
                    undecided.get_or_insert(w);
                }
            }
        }
    }
    match undecided {
        Some(w) => CyclicCompletenessCheck::Inconclusive(w),
        None => CyclicCompletenessCheck::VerifiedUpTo(maxlen),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::AmbiguityKind;
    use crate::cyclic::{rho, rho_up_to_sim};
    use crate::presentation::parse_presentation;
    use crate::rewrite::verify_confluence;

    const HM: &str = "gens: a b AB BA D
rule: a b -> AB
rule: b a -> BA
rule: AB a -> D
rule: a BA -> D
rule: BA b -> D
rule: b AB -> D
rule: AB AB -> a D
rule: BA BA -> b D
rule: D a -> b D
rule: D b -> a D
rule: D AB -> BA D
rule: D BA -> AB D
";

    fn complete(text: &str) -> RewritingSystem {
        let mut s = parse_presentation(text).unwrap();
        verify_confluence(&mut s).unwrap();
        assert!(s.is_verified_complete());
        s
    }

    fn class(s: &RewritingSystem, t: &str) -> CyclicClass {
        CyclicClass::of(&s.parse_word(t).unwrap(), s.order())
    }

    #[test]
    fn hm_completion_adds_one_reduction() {
        let s = complete(HM);
        let budget = ExploreBudget::default();
        let CompletionOutcome::CyclicallyCompleted(aug) =
            cyclical_completion(&s, budget, OrientationPolicy::OrientToShortlexMin).unwrap()
        else {
            panic!("expected completion");
        };
        assert_eq!(aug.added().len(), 1);
        let r = &aug.added()[0];
        assert_eq!(r.from, class(&s, "BA"));
        assert_eq!(r.to, class(&s, "AB"));
        assert_eq!(aug.class_representative(&class(&s, "BA")), class(&s, "AB"));
        assert_eq!(aug.base().rules(), s.rules());
        let ab = s.parse_word("a b").unwrap();
        assert!(matches!(
            rho_up_to_sim(&aug, &ab, budget),
            SimFormResult::UniqueClass(_)
        ));
        assert!(matches!(rho(&s, &ab, budget), RhoResult::Multiple(ref v) if v.len() == 2));
        let amb = r.provenance.as_ref().unwrap();
        assert_eq!(amb.kind, AmbiguityKind::CyclicalInclusionConjugate);
        assert!(matches!(
            resolves(&s, amb, budget),
            Resolution::Unresolved(RhoResult::Unique(_), RhoResult::Unique(_))
        ));
        assert!(matches!(resolves(&aug, amb, budget), Resolution::Resolved(_)));
        // idempotent
        let CompletionOutcome::CyclicallyCompleted(again) =
            complete_augmented(aug.clone(), budget, OrientationPolicy::OrientToShortlexMin).unwrap()
        else {
            panic!()
        };
        assert_eq!(again.added(), aug.added());
    }

    #[test]
    fn nothing_to_add_without_raw_ambiguities() {
        let s = complete("gens: a b c d\norder: b < d < c < a\nrule: a b -> b c\nrule: c d -> d a\n");
        let CompletionOutcome::CyclicallyCompleted(aug) =
            cyclical_completion(&s, ExploreBudget::default(), OrientationPolicy::OrientToShortlexMin).unwrap()
        else {
            panic!()
        };
        assert!(aug.added().is_empty());
        assert_eq!(
            verify_cyclic_completeness(&aug, 3, ExploreBudget::default()),
            CyclicCompletenessCheck::VerifiedUpTo(3)
        );
    }

    #[test]
    fn braid_inclusion_resolves() {
        let s = complete("gens: a b\nrule: b a b -> a b a\nrule[n=2..4]: b a^n b a -> a b a^2 b^(n-1)\n");
        let amb = find_cyclic_ambiguities(&s)
            .into_iter()
            .find(|a| {
                matches!(
                    a.kind,
                    AmbiguityKind::CyclicalInclusionFactor { inner: 0, outer: 1, .. }
                )
            })
            .unwrap();
        match resolves(&s, &amb, ExploreBudget::default()) {
            Resolution::Resolved(c) => assert_eq!(c, class(&s, "ba^4")),
            other => panic!("{other:?}"),
        }
        let CompletionOutcome::CyclicallyCompleted(aug) =
            cyclical_completion(&s, ExploreBudget::default(), OrientationPolicy::OrientToShortlexMin).unwrap()
        else {
            panic!()
        };
        assert!(aug.added().is_empty());
    }

    #[test]
    fn faithful_policy_on_hm() {
        let s = complete(HM);
        for seed in 0..8 {
            match cyclical_completion(&s, ExploreBudget::default(), OrientationPolicy::FaithfulArbitrary(seed)).unwrap()
            {
                CompletionOutcome::CyclicallyCompleted(aug) => {
                    assert_eq!(aug.added().len(), 1);
                    let r = &aug.added()[0];
                    let pair = [class(&s, "AB"), class(&s, "BA")];
                    assert!(pair.contains(&r.from) && pair.contains(&r.to));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn faithful_policy_fails_when_both_classes_are_taken() {
        let s = complete(HM);
        let mut aug = AugmentedSystem::new(s.clone());
        aug.add_reduction(class(&s, "AB"), class(&s, "a"), None).unwrap();
        aug.add_reduction(class(&s, "BA"), class(&s, "b"), None).unwrap();
        match complete_augmented(aug, ExploreBudget::default(), OrientationPolicy::FaithfulArbitrary(1)).unwrap() {
            CompletionOutcome::Failed { classes, .. } => {
                assert_eq!(classes, (class(&s, "AB"), class(&s, "BA")));
            }
            other => panic!("{other:?}"),
        }
        // the shortlex policy merges instead
        let mut aug = AugmentedSystem::new(s.clone());
        aug.add_reduction(class(&s, "AB"), class(&s, "a"), None).unwrap();
        aug.add_reduction(class(&s, "BA"), class(&s, "b"), None).unwrap();
        assert!(matches!(
            complete_augmented(aug, ExploreBudget::default(), OrientationPolicy::OrientToShortlexMin).unwrap(),
            CompletionOutcome::CyclicallyCompleted(_)
        ));
    }

    #[test]
    fn invalid_additions_are_rejected() {
        let s = complete(HM);
        let mut aug = AugmentedSystem::new(s.clone());
        assert!(aug.add_reduction(class(&s, "a b"), class(&s, "AB"), None).is_err());
        assert!(aug.add_reduction(class(&s, "AB"), class(&s, "AB"), None).is_err());
        aug.add_reduction(class(&s, "BA"), class(&s, "AB"), None).unwrap();
        assert!(aug.add_reduction(class(&s, "BA"), class(&s, "D"), None).is_err());
    }

    #[test]
    fn augmented_round_trip() {
        let s = complete(HM);
        let CompletionOutcome::CyclicallyCompleted(aug) =
            cyclical_completion(&s, ExploreBudget::default(), OrientationPolicy::OrientToShortlexMin).unwrap()
        else {
            panic!()
        };
        let text = aug.to_presentation();
        assert!(text.contains("creduce: BA -> AB"));
        let back = parse_augmented(&text).unwrap();
        assert_eq!(back.base().rules(), aug.base().rules());
        assert_eq!(back.added().len(), 1);
        assert_eq!(back.added()[0].from, aug.added()[0].from);
        assert_eq!(back.added()[0].to, aug.added()[0].to);
        assert!(parse_presentation(&text).is_err());
    }
}
