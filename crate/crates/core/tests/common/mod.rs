//! Fixture loading and brute-force oracles shared by the integration tests.
//! The oracles deliberately avoid the crate's cyclic module.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use cyclic_rewriting::completion::{cyclical_completion, AugmentedSystem, CompletionOutcome, OrientationPolicy};
use cyclic_rewriting::cyclic::{CyclicClass, ExplorationResult, ExploreBudget};
use cyclic_rewriting::presentation::{parse_presentation, RewritingSystem, Symbol, Word};
use cyclic_rewriting::rewrite::verify_confluence;

pub const FIXTURES: [&str; 4] = ["ex22", "braid", "trefoil", "hm"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.rws"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Parsed and run through the confluence check.
pub fn fixture(name: &str) -> RewritingSystem {
    let mut s = parse_presentation(&fixture_text(name)).unwrap();
    verify_confluence(&mut s).unwrap();
    s
}

pub fn word(s: &RewritingSystem, text: &str) -> Word {
    s.parse_word(text).unwrap()
}

pub fn class(s: &RewritingSystem, text: &str) -> CyclicClass {
    CyclicClass::of(&word(s, text), s.order())
}

pub fn completed(s: &RewritingSystem) -> AugmentedSystem {
    match cyclical_completion(s, ExploreBudget::default(), OrientationPolicy::OrientToShortlexMin).unwrap() {
        CompletionOutcome::CyclicallyCompleted(aug) => aug,
        other => panic!("completion did not finish: {other:?}"),
    }
}

/// All words of length `len` over `n` symbols, in index order.
pub fn all_words(n: u32, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| {
                (0..n).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Word::from_indices(&v)).collect()
}

pub fn all_words_up_to(n: u32, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|l| all_words(n, l)).collect()
}

fn ranks(s: &RewritingSystem, w: &[Symbol]) -> Vec<u32> {
    w.iter().map(|&x| s.order().rank(x)).collect()
}

/// Least rotation by comparing every rotation.
pub fn naive_canonical(s: &RewritingSystem, w: &[Symbol]) -> Vec<Symbol> {
    let n = w.len();
    (0..n.max(1))
        .map(|i| w[i.min(n)..].iter().chain(&w[..i.min(n)]).copied().collect::<Vec<_>>())
        .min_by(|a, b| ranks(s, a).cmp(&ranks(s, b)))
        .unwrap_or_default()
}

/// Every word obtained from a rotation of `w` by one rule application.
pub fn naive_cyclic_successors(s: &RewritingSystem, w: &[Symbol]) -> Vec<Vec<Symbol>> {
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..n.max(1) {
        let r: Vec<Symbol> = w[i.min(n)..].iter().chain(&w[..i.min(n)]).copied().collect();
        for rule in s.rules() {
            let l = rule.lhs.symbols();
            if l.len() > r.len() {
                continue;
            }
            for p in 0..=r.len() - l.len() {
                if &r[p..p + l.len()] == l {
                    let mut v = r[..p].to_vec();
                    v.extend_from_slice(rule.rhs.symbols());
                    v.extend_from_slice(&r[p + l.len()..]);
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Canonical rotations of every word reachable from `w` in at most `depth`
/// cyclic reductions, with their least depth.
pub fn brute_reachable(s: &RewritingSystem, w: &Word, depth: usize) -> HashMap<Vec<Symbol>, usize> {
    let mut seen: HashSet<Vec<Symbol>> = HashSet::from([w.symbols().to_vec()]);
    let mut found = HashMap::from([(naive_canonical(s, w.symbols()), 0)]);
    let mut frontier = vec![w.symbols().to_vec()];
    for d in 1..=depth {
        let mut next = Vec::new();
        for u in &frontier {
            for v in naive_cyclic_successors(s, u) {
                if seen.insert(v.clone()) {
                    found.entry(naive_canonical(s, &v)).or_insert(d);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    found
}

/// Breadth-first distances from the root over the exploration's edges.
pub fn depths(ex: &ExplorationResult) -> Vec<Option<usize>> {
    let mut dist = vec![None; ex.nodes.len()];
    dist[0] = Some(0);
    let mut q = VecDeque::from([0usize]);
    while let Some(i) = q.pop_front() {
        for e in ex.edges.iter().filter(|e| e.from == i) {
            if dist[e.to].is_none() {
                dist[e.to] = Some(dist[i].unwrap() + 1);
                q.push_back(e.to);
            }
        }
    }
    dist
}

/// Classes the exploration reaches within `depth` steps, as canonical words.
pub fn explored_within(ex: &ExplorationResult, depth: usize) -> HashMap<Vec<Symbol>, usize> {
    depths(ex)
        .into_iter()
        .enumerate()
        .filter_map(|(i, d)| {
            d.filter(|&d| d <= depth)
                .map(|d| (ex.nodes[i].class.canonical().symbols().to_vec(), d))
        })
        .collect()
}
