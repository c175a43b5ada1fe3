use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{AmbiguityKind, CyclicAmbiguity};
use crate::cyclic::{CyclicClass, ExplorationResult, SinkComponent, StepRule};
use crate::presentation::{RewritingSystem, Word};

pub(crate) fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn word(sys: &RewritingSystem, w: &Word) -> Value {
    json!(sys.alphabet().tokens(w))
}

pub(crate) fn class(sys: &RewritingSystem, c: &CyclicClass) -> Value {
    word(sys, c.canonical())
}

pub(crate) fn classes(sys: &RewritingSystem, cs: &[CyclicClass]) -> Value {
    Value::Array(cs.iter().map(|c| class(sys, c)).collect())
}

pub(crate) fn sink(sys: &RewritingSystem, s: &SinkComponent) -> Value {
    json!({
        "representative": class(sys, &s.representative),
        "members": classes(sys, &s.members),
        "irreducible": s.irreducible,
    })
}

pub(crate) fn step_rule(r: StepRule) -> Value {
    match r {
        StepRule::Rule(i) => json!({ "rule": i }),
        StepRule::Added(i) => json!({ "added": i }),
    }
}

/// Nodes and edges in discovery order, component lists sorted.
pub(crate) fn exploration(sys: &RewritingSystem, ex: &ExplorationResult) -> Value {
    let nodes: Vec<Value> = ex
        .nodes
        .iter()
        .map(|n| json!({ "class": class(sys, &n.class), "reached_as": word(sys, &n.reached_as), "expanded": n.expanded }))
        .collect();
    let edges: Vec<Value> = ex
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": e.from,
                "to": e.to,
                "via": step_rule(e.step.rule),
                "rotation": e.step.rotation,
                "position": e.step.position,
            })
        })
        .collect();
    json!({
        "status": if ex.is_exhausted() { "Exhausted" } else { "BudgetExhausted" },
        "cyclic_flag": ex.cyclic_flag,
        "nodes": nodes,
        "edges": edges,
        "irreducible_nodes": ex.irreducible_nodes(),
        "scc": ex.sccs,
    })
}

pub(crate) fn ambiguity(sys: &RewritingSystem, a: &CyclicAmbiguity) -> Value {
    let d = &a.decomposition;
    let mut v = json!({
        "kind": a.kind.name(),
        "rules": [d.rules.0, d.rules.1],
        "x": word(sys, &d.x),
        "u": word(sys, &d.u),
        "y": word(sys, &d.y),
        "v": word(sys, &d.v),
        "left_result": word(sys, &a.left_result),
        "right_result": word(sys, &a.right_result),
        "raw": a.raw,
    });
    if let AmbiguityKind::CyclicalInclusionFactor {
        outer,
        inner,
        rotation,
        prefix,
    } = &a.kind
    {
        v["outer"] = json!(outer);
        v["inner"] = json!(inner);
        v["rotation"] = json!(rotation);
        v["prefix"] = word(sys, prefix);
    }
    v
}
