use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{CyclicClass, CyclicRelation, CyclicStep};
use crate::presentation::{shortlex_compare, RewritingSystem, Word};

pub const DEFAULT_MAX_NODES: usize = 50_000;
/// Default slack on top of the start word's length.
pub const DEFAULT_EXTRA_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreBudget {
    pub max_nodes: usize,
    /// Absolute cap on word length; `None` means `|w| + DEFAULT_EXTRA_LEN`.
    pub max_word_len: Option<usize>,
}

impl Default for ExploreBudget {
    fn default() -> Self {
        ExploreBudget {
            max_nodes: DEFAULT_MAX_NODES,
            max_word_len: None,
        }
    }
}

impl ExploreBudget {
    pub fn nodes(max_nodes: usize) -> Self {
        ExploreBudget {
            max_nodes,
            ..Self::default()
        }
    }

    fn len_cap(&self, start: usize) -> usize {
        self.max_word_len.unwrap_or(start + DEFAULT_EXTRA_LEN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExplorationStatus {
    Exhausted,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploredNode {
    pub class: CyclicClass,
    /// The concrete word through which the class was first reached.
    pub reached_as: Word,
    /// Successors were computed (false only for frontier nodes left by a budget stop).
    pub expanded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploredEdge {
    pub from: usize,
    pub to: usize,
    pub step: CyclicStep,
}

/// Breadth-first closure of the cyclic step relation from one class.
/// Node 0 is the root; node order is discovery order.
#[derive(Clone, Debug)]
pub struct ExplorationResult {
    pub nodes: Vec<ExploredNode>,
    pub edges: Vec<ExploredEdge>,
    pub status: ExplorationStatus,
    /// Strongly connected components, each sorted, ordered by least member.
    pub sccs: Vec<Vec<usize>>,
    /// Component index of each node.
    pub component_of: Vec<usize>,
    pub cyclic_flag: bool,
    index: HashMap<CyclicClass, usize>,
    out: Vec<Vec<usize>>,
}

impl ExplorationResult {
    pub fn root(&self) -> &CyclicClass {
        &self.nodes[0].class
    }

    pub fn is_exhausted(&self) -> bool {
        self.status == ExplorationStatus::Exhausted
    }

    pub fn index_of(&self, class: &CyclicClass) -> Option<usize> {
        self.index.get(class).copied()
    }

    pub fn contains(&self, class: &CyclicClass) -> bool {
        self.index.contains_key(class)
    }

    /// Target node indices of the edges leaving `i`.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[i].iter().map(move |&e| self.edges[e].to)
    }

    /// Expanded nodes without outgoing edges.
    pub fn irreducible_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].expanded && self.out[i].is_empty())
            .collect()
    }

    fn component_is_cyclic(&self, c: usize) -> bool {
        let comp = &self.sccs[c];
        comp.len() > 1 || self.successors(comp[0]).any(|t| t == comp[0])
    }

    /// Components no edge leaves, in component order; the representative
    /// is the first member in discovery order (see `sinks_sorted`).
    /// Frontier nodes of a budget-stopped exploration are never sinks.
    fn sink_components(&self) -> Vec<SinkComponent> {
        let mut out = Vec::new();
        for (c, comp) in self.sccs.iter().enumerate() {
            let closed = comp
                .iter()
                .all(|&i| self.nodes[i].expanded && self.successors(i).all(|t| self.component_of[t] == c));
            if !closed {
                continue;
            }
            let members: Vec<CyclicClass> = comp.iter().map(|&i| self.nodes[i].class.clone()).collect();
            let irreducible = comp.len() == 1 && self.out[comp[0]].is_empty();
            out.push(SinkComponent {
                representative: members[0].clone(),
                members,
                irreducible,
            });
        }
        out
    }

    /// A directed cycle `[s, .., s]` through node `s`, if one exists.
    pub fn cycle_through(&self, s: usize) -> Option<Vec<usize>> {
        let c = self.component_of[s];
        if !self.component_is_cyclic(c) {
            return None;
        }
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for t in self.successors(u) {
                if t == s {
                    let mut path = vec![u];
                    let mut cur = u;
                    while cur != s {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    path.push(s);
                    return Some(path);
                }
                if self.component_of[t] == c && t != s && !parent.contains_key(&t) {
                    parent.insert(t, u);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A cycle through the root when there is one, else through the least
    /// node of the first cyclic component.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        if let Some(c) = self.cycle_through(0) {
            return Some(c);
        }
        (0..self.sccs.len())
            .find(|&c| self.component_is_cyclic(c))
            .and_then(|c| self.cycle_through(self.sccs[c][0]))
    }
}

pub fn explore<R: CyclicRelation + ?Sized>(rel: &R, w: &Word, budget: ExploreBudget) -> ExplorationResult {
    let order = rel.system().order();
    let cap = budget.len_cap(w.len());
    let root = CyclicClass::of(w, order);
    let mut nodes = vec![ExploredNode {
        class: root.clone(),
        reached_as: w.clone(),
        expanded: false,
    }];
    let mut index = HashMap::from([(root, 0usize)]);
    let mut edges: Vec<ExploredEdge> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut status = ExplorationStatus::Exhausted;
    let mut next = 0;
    while next < nodes.len() {
        let i = next;
        next += 1;
        let steps = rel.steps_from(&nodes[i].reached_as);
        if steps.iter().any(|s| s.result.len() > cap) {
            status = ExplorationStatus::BudgetExhausted;
            break;
        }
        let fresh = steps.iter().filter(|s| !index.contains_key(&s.result)).count();
        if nodes.len() + fresh > budget.max_nodes {
            status = ExplorationStatus::BudgetExhausted;
            break;
        }
        for step in steps {
            let to = match index.get(&step.result) {
                Some(&t) => t,
                None => {
                    let t = nodes.len();
                    index.insert(step.result.clone(), t);
                    nodes.push(ExploredNode {
                        class: step.result.clone(),
                        reached_as: step.result_word.clone(),
                        expanded: false,
                    });
                    out.push(Vec::new());
                    t
                }
            };
            out[i].push(edges.len());
            edges.push(ExploredEdge { from: i, to, step });
        }
        nodes[i].expanded = true;
    }

    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(nodes.len(), edges.len());
    for _ in 0..nodes.len() {
        g.add_node(());
    }
    for e in &edges {
        g.add_edge(NodeIndex::new(e.from), NodeIndex::new(e.to), ());
    }
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    sccs.sort_by_key(|c| c[0]);
    let mut component_of = vec![0; nodes.len()];
    for (ci, c) in sccs.iter().enumerate() {
        for &n in c {
            component_of[n] = ci;
        }
    }
    let cyclic_flag = edges.iter().any(|e| component_of[e.from] == component_of[e.to]);
    ExplorationResult {
        nodes,
        edges,
        status,
        sccs,
        component_of,
        cyclic_flag,
        index,
        out,
    }
}

#[derive(Clone, Debug)]
pub enum RhoResult {
    Unique(CyclicClass),
    NoFormExists,
    /// Sorted shortlex by canonical word.
    Multiple(Vec<CyclicClass>),
    Unknown(Box<ExplorationResult>),
}

impl RhoResult {
    pub fn unique(&self) -> Option<&CyclicClass> {
        match self {
            RhoResult::Unique(c) => Some(c),
            _ => None,
        }
    }
}

pub(crate) fn sort_classes(classes: &mut [CyclicClass], system: &RewritingSystem) {
    classes.sort_by(|a, b| shortlex_compare(a.canonical(), b.canonical(), system.order()));
}

/// ρ read off an exploration.
pub fn rho_from(system: &RewritingSystem, ex: ExplorationResult) -> RhoResult {
    if !ex.is_exhausted() {
        return RhoResult::Unknown(Box::new(ex));
    }
    let mut irr: Vec<CyclicClass> = ex
        .irreducible_nodes()
        .into_iter()
        .map(|i| ex.nodes[i].class.clone())
        .collect();
    match irr.len() {
        0 => RhoResult::NoFormExists,
        1 => RhoResult::Unique(irr.pop().unwrap()),
        _ => {
            sort_classes(&mut irr, system);
            RhoResult::Multiple(irr)
        }
    }
}

pub fn rho<R: CyclicRelation + ?Sized>(rel: &R, w: &Word, budget: ExploreBudget) -> RhoResult {
    rho_from(rel.system(), explore(rel, w, budget))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthProfile {
    LengthPreserving,
    LengthNonIncreasing,
    LengthDecreasing,
    Mixed,
}

impl LengthProfile {
    /// Every rule is non-increasing, so exploration from a word is finite.
    pub fn is_bounded(self) -> bool {
        self != LengthProfile::Mixed
    }
}

/// A system without rules counts as length-preserving.
pub fn classify_lengths(system: &RewritingSystem) -> LengthProfile {
    let deltas: Vec<isize> = system.rules().iter().map(|r| r.length_delta()).collect();
    let eq = deltas.contains(&0);
    let dec = deltas.iter().any(|&d| d < 0);
    if deltas.iter().any(|&d| d > 0) {
        LengthProfile::Mixed
    } else if dec && eq {
        LengthProfile::LengthNonIncreasing
    } else if dec {
        LengthProfile::LengthDecreasing
    } else {
        LengthProfile::LengthPreserving
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TerminationVerdict {
    TerminatesAllseq,
    /// Classes along a directed cycle, first and last equal.
    NonTerminatingAllseq(Vec<CyclicClass>),
    Inconclusive,
}

/// A cycle found before a budget stop is still a genuine cycle, so only the
/// "terminates" direction needs an exhausted exploration.
pub fn termination_report<R: CyclicRelation + ?Sized>(rel: &R, w: &Word, budget: ExploreBudget) -> TerminationVerdict {
    let ex = explore(rel, w, budget);
    if let Some(cycle) = ex.find_cycle() {
        return TerminationVerdict::NonTerminatingAllseq(
            cycle.into_iter().map(|i| ex.nodes[i].class.clone()).collect(),
        );
    }
    if ex.is_exhausted() {
        TerminationVerdict::TerminatesAllseq
    } else {
        TerminationVerdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimVerdict {
    Yes,
    No,
    Unknown,
}

/// `u ~ v`: each class reaches the other.
pub fn sim_equivalent<R: CyclicRelation + ?Sized>(rel: &R, u: &Word, v: &Word, budget: ExploreBudget) -> SimVerdict {
    let order = rel.system().order();
    let cu = CyclicClass::of(u, order);
    let cv = CyclicClass::of(v, order);
    if cu == cv {
        return SimVerdict::Yes;
    }
    let ex = explore(rel, u, budget);
    match ex.index_of(&cv) {
        Some(j) => {
            // u reaches v inside the explored graph; same component means v reaches u
            if ex.component_of[0] == ex.component_of[j] {
                return SimVerdict::Yes;
            }
            if ex.is_exhausted() {
                // all of v's successors were explored from u; v cannot reach u
                SimVerdict::No
            } else {
                let back = explore(rel, v, budget);
                if back.contains(&cu) {
                    SimVerdict::Yes
                } else if back.is_exhausted() {
                    SimVerdict::No
                } else {
                    SimVerdict::Unknown
                }
            }
        }
        None if ex.is_exhausted() => SimVerdict::No,
        None => SimVerdict::Unknown,
    }
}

/// A sink strongly connected component of an exploration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkComponent {
    /// Shortlex-least canonical word among the members.
    pub representative: CyclicClass,
    pub members: Vec<CyclicClass>,
    /// A single class with no outgoing step.
    pub irreducible: bool,
}

#[derive(Clone, Debug)]
pub enum SimFormResult {
    UniqueClass(SinkComponent),
    Multiple(Vec<SinkComponent>),
    Unknown(Box<ExplorationResult>),
}

/// Sink components of the exploration, members and list sorted shortlex.
pub(crate) fn sinks_sorted(system: &RewritingSystem, ex: &ExplorationResult) -> Vec<SinkComponent> {
    let mut sinks = ex.sink_components();
    for s in &mut sinks {
        sort_classes(&mut s.members, system);
        s.representative = s.members[0].clone();
    }
    sinks.sort_by(|a, b| {
        shortlex_compare(
            a.representative.canonical(),
            b.representative.canonical(),
            system.order(),
        )
    });
    sinks
}

/// Every exhausted exploration has at least one sink component, so there is
/// no "no form" outcome here.
pub fn rho_up_to_sim<R: CyclicRelation + ?Sized>(rel: &R, w: &Word, budget: ExploreBudget) -> SimFormResult {
    let ex = explore(rel, w, budget);
    if !ex.is_exhausted() {
        return SimFormResult::Unknown(Box::new(ex));
    }
    let mut sinks = sinks_sorted(rel.system(), &ex);
    if sinks.len() == 1 {
        SimFormResult::UniqueClass(sinks.pop().unwrap())
    } else {
        SimFormResult::Multiple(sinks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::is_cyclically_irreducible;
    use crate::presentation::parse_presentation;

    fn ex22() -> RewritingSystem {
        parse_presentation("gens: a b c d\norder: b < d < c < a\nrule: a b -> b c\nrule: c d -> d a\n").unwrap()
    }

    fn class(sys: &RewritingSystem, s: &str) -> CyclicClass {
        CyclicClass::of(&sys.parse_word(s).unwrap(), sys.order())
    }

    #[test]
    fn bcd_cycles_without_form() {
        let sys = ex22();
        let w = sys.parse_word("bcd").unwrap();
        let ex = explore(&sys, &w, ExploreBudget::default());
        assert!(ex.is_exhausted());
        assert!(ex.irreducible_nodes().is_empty());
        assert!(ex.cyclic_flag);
        assert!(matches!(
            rho(&sys, &w, ExploreBudget::default()),
            RhoResult::NoFormExists
        ));
        match termination_report(&sys, &w, ExploreBudget::default()) {
            TerminationVerdict::NonTerminatingAllseq(c) => {
                assert_eq!(c.first(), Some(&class(&sys, "bcd")));
                assert_eq!(c.first(), c.last());
                assert!(c.len() >= 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn acd_has_unique_form_ada() {
        let sys = ex22();
        let w = sys.parse_word("acd").unwrap();
        let ex = explore(&sys, &w, ExploreBudget::default());
        let irr = ex.irreducible_nodes();
        assert_eq!(irr.len(), 1);
        assert_eq!(sys.render(&ex.nodes[irr[0]].reached_as), "ada");
        match rho_from(&sys, ex) {
            RhoResult::Unique(c) => assert_eq!(c, class(&sys, "ada")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irreducible_word_is_a_single_node() {
        let sys = ex22();
        let w = sys.parse_word("ada").unwrap();
        let ex = explore(&sys, &w, ExploreBudget::default());
        assert!(ex.is_exhausted());
        assert_eq!(ex.nodes.len(), 1);
        assert!(ex.edges.is_empty());
        assert!(!ex.cyclic_flag);
        assert_eq!(
            termination_report(&sys, &w, ExploreBudget::default()),
            TerminationVerdict::TerminatesAllseq
        );
        match rho_up_to_sim(&sys, &w, ExploreBudget::default()) {
            SimFormResult::UniqueClass(s) => {
                assert!(s.irreducible);
                assert_eq!(s.members, vec![class(&sys, "ada")]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_stops_are_reported() {
        let sys = ex22();
        let w = sys.parse_word("bcd").unwrap();
        let ex = explore(&sys, &w, ExploreBudget::nodes(1));
        assert_eq!(ex.status, ExplorationStatus::BudgetExhausted);
        assert!(matches!(rho_from(&sys, ex), RhoResult::Unknown(_)));
        let ex = explore(
            &sys,
            &w,
            ExploreBudget {
                max_nodes: 100,
                max_word_len: Some(2),
            },
        );
        assert_eq!(ex.status, ExplorationStatus::BudgetExhausted);
    }

    #[test]
    fn length_profiles() {
        assert_eq!(classify_lengths(&ex22()), LengthProfile::LengthPreserving);
        let p = |t: &str| classify_lengths(&parse_presentation(t).unwrap());
        assert_eq!(p("gens: a b\nrule: a b -> a\n"), LengthProfile::LengthDecreasing);
        assert_eq!(
            p("gens: a b\nrule: a b -> a\nrule: b a -> a b\n"),
            LengthProfile::LengthNonIncreasing
        );
        assert_eq!(p("gens: a b\nrule: b -> a a\n"), LengthProfile::Mixed);
    }

    #[test]
    fn sim_on_rotations_and_cycles() {
        let sys = ex22();
        let w = sys.parse_word("bcd").unwrap();
        let r = crate::cyclic::rotate(&w, 1);
        assert_eq!(sim_equivalent(&sys, &w, &r, ExploreBudget::default()), SimVerdict::Yes);
        let ex = explore(&sys, &w, ExploreBudget::default());
        let j = ex.nodes.len() - 1;
        let other = ex.nodes[j].reached_as.clone();
        let expected = if ex.component_of[j] == ex.component_of[0] {
            SimVerdict::Yes
        } else {
            SimVerdict::No
        };
        assert_eq!(sim_equivalent(&sys, &w, &other, ExploreBudget::default()), expected);
        let ada = sys.parse_word("ada").unwrap();
        assert_eq!(sim_equivalent(&sys, &w, &ada, ExploreBudget::default()), SimVerdict::No);
    }

    #[test]
    fn cycle_witness_is_a_path() {
        let sys = ex22();
        let w = sys.parse_word("bcd").unwrap();
        let ex = explore(&sys, &w, ExploreBudget::default());
        let cyc = ex.find_cycle().unwrap();
        for pair in cyc.windows(2) {
            assert!(ex.successors(pair[0]).any(|t| t == pair[1]), "{cyc:?}");
        }
        for i in ex.irreducible_nodes() {
            assert!(is_cyclically_irreducible(&sys, &ex.nodes[i].reached_as));
        }
    }
}
