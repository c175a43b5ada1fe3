//! The `cycrw` command line.
//!
//! Exit codes: 0 for a definitive answer, 2 when the answer is unknown,
//! inconclusive or the procedure diverged, 1 for usage and input errors.

mod report;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{find_cyclic_ambiguities, sufficient_confluence, ConfluenceVerdict, TerminationEvidence};
use crate::completion::{
    augment, complete_augmented, verify_cyclic_completeness, AugmentedSystem, CompletionOutcome,
    CyclicCompletenessCheck, DivergenceReason, OrientationPolicy,
};
use crate::conjugacy::{decide_conjugacy, witness_search, ConjugacyEvidence, ConjugacyVerdict, UnknownReason};
use crate::cyclic::explore::sinks_sorted;
use crate::cyclic::{
    explore, rho_from, CyclicClass, ExplorationResult, ExploreBudget, RhoResult, StepRule, DEFAULT_MAX_NODES,
};
use crate::error::Error;
use crate::presentation::{
    parse_document, validate_system, Completeness, ParseOptions, RewritingSystem, ViolationKind, Word,
    DEFAULT_TEMPLATE_UPPER,
};
use crate::rewrite::{knuth_bendix, normal_form, verify_confluence, KbLimits, KbOutcome};

const DEFINITIVE: u8 = 0;
const FAILURE: u8 = 1;
const UNDECIDED: u8 = 2;

/// Witness length used when `conj` has to fall back on a witness search.
const DEFAULT_WITNESS_LEN: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "cycrw",
    version,
    about = "Cyclic string rewriting over finitely presented monoids"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Upper bound for open rule families such as `rule[n=2..]`.
    #[arg(long, global = true, default_value_t = DEFAULT_TEMPLATE_UPPER)]
    template_bound: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Maximum number of cyclic classes to explore.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    budget: usize,

    /// Maximum word length during exploration (default: start length + 16).
    #[arg(long)]
    max_len: Option<usize>,
}

impl BudgetArgs {
    fn budget(self) -> ExploreBudget {
        ExploreBudget {
            max_nodes: self.budget,
            max_word_len: self.max_len,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Policy {
    Shortlex,
    Faithful,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a word.
    Nf { file: PathBuf, word: String },
    /// Validate the rules and check confluence.
    Check { file: PathBuf },
    /// Knuth-Bendix completion; prints the completed system.
    Kb {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        max_rules: usize,
        #[arg(long, default_value_t = 32)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        max_iterations: usize,
    },
    /// Cyclically irreducible form of a word.
    Cnf {
        file: PathBuf,
        word: String,
        /// Report sink components of mutual reachability instead.
        #[arg(long)]
        up_to_sim: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// All classes reachable from a word by cyclic reduction.
    Explore {
        file: PathBuf,
        word: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cyclic ambiguities between rules and the sufficient confluence test.
    Analyze {
        file: PathBuf,
        /// Check cyclic termination for all words up to this length.
        #[arg(long)]
        maxlen: Option<usize>,
    },
    /// Cyclical completion; prints the augmented system.
    Ccomplete {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Policy::Shortlex)]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check that every word up to a length has a unique sink component.
    Cverify {
        file: PathBuf,
        #[arg(long)]
        maxlen: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Conjugacy of two words.
    Conj {
        file: PathBuf,
        u: String,
        v: String,
        /// Also search for conjugating words up to this length.
        #[arg(long)]
        witness_len: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Nf { .. } => "nf",
            Command::Check { .. } => "check",
            Command::Kb { .. } => "kb",
            Command::Cnf { .. } => "cnf",
            Command::Explore { .. } => "explore",
            Command::Analyze { .. } => "analyze",
            Command::Ccomplete { .. } => "ccomplete",
            Command::Cverify { .. } => "cverify",
            Command::Conj { .. } => "conj",
        }
    }
}

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

struct Loaded {
    file: String,
    digest: String,
    aug: AugmentedSystem,
    confluence: crate::error::Result<Completeness>,
}

impl Loaded {
    fn sys(&self) -> &RewritingSystem {
        self.aug.base()
    }

    fn word(&self, text: &str) -> CliResult<Word> {
        Ok(self.sys().parse_word(text)?)
    }

    fn render(&self, w: &Word) -> String {
        self.sys().render(w)
    }

    fn require_complete(&self) -> CliResult<()> {
        if self.sys().is_verified_complete() {
            Ok(())
        } else {
            Err(Box::new(Error::NotVerifiedComplete))
        }
    }
}

fn load(path: &PathBuf, template_bound: i64) -> CliResult<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| format!("{} is not UTF-8", path.display()))?;
    let options = ParseOptions {
        default_template_upper: template_bound,
        allow_creduce: true,
    };
    let mut doc = parse_document(&text, options)?;
    let confluence = verify_confluence(&mut doc.system);
    let aug = augment(doc.system, doc.creduce)?;
    Ok(Loaded {
        file: path.display().to_string(),
        digest: report::digest(&bytes),
        aug,
        confluence,
    })
}

struct Outcome {
    code: u8,
    status: String,
    text: String,
    result: Value,
    words: Vec<String>,
    budget: Option<ExploreBudget>,
    explored: Option<usize>,
}

impl Outcome {
    fn new(code: u8, status: impl Into<String>, text: String, result: Value) -> Self {
        Outcome {
            code,
            status: status.into(),
            text,
            result,
            words: Vec::new(),
            budget: None,
            explored: None,
        }
    }

    fn words(mut self, words: &[&String]) -> Self {
        self.words = words.iter().map(|s| s.to_string()).collect();
        self
    }

    fn budget(mut self, budget: ExploreBudget, explored: Option<usize>) -> Self {
        self.budget = Some(budget);
        self.explored = explored;
        self
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { FAILURE } else { DEFINITIVE };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let name = cli.command.name();
    match dispatch(&cli) {
        Ok((loaded, outcome)) => {
            let written = if cli.json {
                let budget = outcome.budget.map(|b| {
                    json!({ "max_nodes": b.max_nodes, "max_word_len": b.max_word_len, "classes_explored": outcome.explored })
                });
                let doc = json!({
                    "command": name,
                    "input": { "file": loaded.file, "sha256": loaded.digest, "words": outcome.words },
                    "status": outcome.status,
                    "exit_code": outcome.code,
                    "result": outcome.result,
                    "budget": budget,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap_or_default())
            } else {
                out.write_all(outcome.text.as_bytes())
            };
            if written.is_err() {
                return FAILURE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<(Loaded, Outcome)> {
    let bound = cli.template_bound;
    let file = match &cli.command {
        Command::Nf { file, .. }
        | Command::Check { file }
        | Command::Kb { file, .. }
        | Command::Cnf { file, .. }
        | Command::Explore { file, .. }
        | Command::Analyze { file, .. }
        | Command::Ccomplete { file, .. }
        | Command::Cverify { file, .. }
        | Command::Conj { file, .. } => file,
    };
    let l = load(file, bound)?;
    let outcome = match &cli.command {
        Command::Nf { word, .. } => nf(&l, word)?,
        Command::Check { .. } => check(&l),
        Command::Kb {
            max_rules,
            max_len,
            max_iterations,
            ..
        } => kb(
            &l,
            KbLimits {
                max_rules: *max_rules,
                max_word_len: *max_len,
                max_iterations: *max_iterations,
            },
        )?,
        Command::Cnf {
            word,
            up_to_sim,
            budget,
            ..
        } => cnf(&l, word, *up_to_sim, budget.budget())?,
        Command::Explore { word, budget, .. } => explore_cmd(&l, word, budget.budget())?,
        Command::Analyze { maxlen, .. } => analyze(&l, *maxlen)?,
        Command::Ccomplete {
            policy, seed, budget, ..
        } => {
            let policy = match policy {
                Policy::Shortlex => OrientationPolicy::OrientToShortlexMin,
                Policy::Faithful => OrientationPolicy::FaithfulArbitrary(*seed),
            };
            ccomplete(&l, policy, budget.budget())?
        }
        Command::Cverify { maxlen, budget, .. } => cverify(&l, *maxlen, budget.budget()),
        Command::Conj {
            u,
            v,
            witness_len,
            budget,
            ..
        } => conj(&l, u, v, *witness_len, budget.budget())?,
    };
    Ok((l, outcome))
}

fn nf(l: &Loaded, text: &String) -> CliResult<Outcome> {
    let w = l.word(text)?;
    let n = normal_form(l.sys(), &w)?;
    let result = json!({ "normal_form": report::word(l.sys(), &n) });
    Ok(Outcome::new(DEFINITIVE, "ok", format!("{}\n", l.render(&n)), result).words(&[text]))
}

fn check(l: &Loaded) -> Outcome {
    let sys = l.sys();
    let mut text = String::new();
    let report = validate_system(sys);
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let kind = match v.kind {
                ViolationKind::EmptyLhs => "empty left-hand side",
                ViolationKind::NotShortlexDecreasing => "not shortlex-decreasing",
            };
            let _ = writeln!(text, "rule {}: {kind}", v.rule);
            json!({ "rule": v.rule, "kind": kind })
        })
        .collect();
    let _ = writeln!(text, "rules: {}", sys.rules().len());
    if let Some(h) = sys.horizon() {
        let _ = writeln!(
            text,
            "rule families truncated; confluence checked on words up to length {h}"
        );
    }
    let (status, code, detail) = match &l.confluence {
        _ if !report.is_ok() => ("invalid", FAILURE, json!(null)),
        Ok(Completeness::VerifiedComplete) => {
            text.push_str("complete\n");
            ("complete", DEFINITIVE, json!(null))
        }
        Ok(Completeness::VerifiedIncomplete(cp)) => {
            let _ = writeln!(
                text,
                "incomplete: rules {} and {} on {} give {} and {}, which do not join",
                cp.rules.0,
                cp.rules.1,
                l.render(&cp.superposition),
                l.render(&cp.left),
                l.render(&cp.right)
            );
            let d = json!({
                "rules": [cp.rules.0, cp.rules.1],
                "superposition": report::word(sys, &cp.superposition),
                "left": report::word(sys, &cp.left),
                "right": report::word(sys, &cp.right),
            });
            ("incomplete", FAILURE, d)
        }
        Ok(Completeness::Unverified) => ("unverified", FAILURE, json!(null)),
        Err(e) => {
            let _ = writeln!(text, "confluence check failed: {e}");
            ("error", FAILURE, json!(e.to_string()))
        }
    };
    let result = json!({
        "rules": sys.rules().len(),
        "violations": violations,
        "horizon": sys.horizon(),
        "critical_pair": detail,
    });
    Outcome::new(code, status, text, result)
}

fn kb(l: &Loaded, limits: KbLimits) -> CliResult<Outcome> {
    let (status, code, sys) = match knuth_bendix(l.sys(), limits)? {
        KbOutcome::Completed(s) => ("Completed", DEFINITIVE, s),
        KbOutcome::Diverged(s) => ("Diverged", UNDECIDED, s),
    };
    let text = sys.to_presentation();
    let rules: Vec<Value> = sys
        .rules()
        .iter()
        .map(|r| json!([report::word(&sys, &r.lhs), report::word(&sys, &r.rhs)]))
        .collect();
    let result = json!({ "rules": rules, "presentation": text });
    Ok(Outcome::new(code, status, text, result))
}

/// The word through which a class was reached, or its canonical rotation.
fn reached(ex: &ExplorationResult, c: &CyclicClass) -> Word {
    ex.index_of(c)
        .map(|i| ex.nodes[i].reached_as.clone())
        .unwrap_or_else(|| c.canonical().clone())
}

fn form_json(l: &Loaded, ex: &ExplorationResult, c: &CyclicClass) -> Value {
    json!({ "class": report::class(l.sys(), c), "reached_as": report::word(l.sys(), &reached(ex, c)) })
}

fn cnf(l: &Loaded, text: &String, up_to_sim: bool, budget: ExploreBudget) -> CliResult<Outcome> {
    let w = l.word(text)?;
    let ex = explore(&l.aug, &w, budget);
    let explored = Some(ex.nodes.len());
    let sys = l.sys();
    let outcome = if up_to_sim {
        if !ex.is_exhausted() {
            let msg = format!("unknown: exploration stopped after {} classes\n", ex.nodes.len());
            Outcome::new(UNDECIDED, "Unknown", msg, json!({ "sinks": [] }))
        } else {
            let sinks = sinks_sorted(sys, &ex);
            let status = if sinks.len() == 1 { "UniqueClass" } else { "Multiple" };
            let mut out = String::new();
            for s in &sinks {
                let members: Vec<String> = s.members.iter().map(|c| l.render(&reached(&ex, c))).collect();
                if s.irreducible {
                    let _ = writeln!(out, "{}", members[0]);
                } else {
                    let _ = writeln!(out, "{{{}}} (no cyclically irreducible member)", members.join(", "));
                }
            }
            let result = json!({ "sinks": sinks.iter().map(|s| report::sink(sys, s)).collect::<Vec<_>>() });
            Outcome::new(DEFINITIVE, status, out, result)
        }
    } else {
        match rho_from(sys, ex.clone()) {
            RhoResult::Unique(c) => {
                let msg = format!("{}\n", l.render(&reached(&ex, &c)));
                Outcome::new(DEFINITIVE, "Unique", msg, json!({ "forms": [form_json(l, &ex, &c)] }))
            }
            RhoResult::NoFormExists => Outcome::new(
                DEFINITIVE,
                "NoFormExists",
                "no cyclically irreducible form\n".into(),
                json!({ "forms": [] }),
            ),
            RhoResult::Multiple(cs) => {
                let names: Vec<String> = cs.iter().map(|c| l.render(&reached(&ex, c))).collect();
                let forms: Vec<Value> = cs.iter().map(|c| form_json(l, &ex, c)).collect();
                Outcome::new(
                    DEFINITIVE,
                    "Multiple",
                    format!("multiple forms: {}\n", names.join(", ")),
                    json!({ "forms": forms }),
                )
            }
            RhoResult::Unknown(_) => Outcome::new(
                UNDECIDED,
                "Unknown",
                format!("unknown: exploration stopped after {} classes\n", ex.nodes.len()),
                json!({ "forms": [] }),
            ),
        }
    };
    Ok(outcome.words(&[text]).budget(budget, explored))
}

fn via(r: StepRule) -> String {
    match r {
        StepRule::Rule(i) => format!("rule {i}"),
        StepRule::Added(i) => format!("added reduction {i}"),
    }
}

fn explore_cmd(l: &Loaded, text: &String, budget: ExploreBudget) -> CliResult<Outcome> {
    let w = l.word(text)?;
    let ex = explore(&l.aug, &w, budget);
    let mut out = String::new();
    let status = if ex.is_exhausted() {
        "Exhausted"
    } else {
        "BudgetExhausted"
    };
    let _ = writeln!(out, "status: {status}");
    let _ = writeln!(out, "cyclic: {}", ex.cyclic_flag);
    out.push_str("nodes:\n");
    for (i, n) in ex.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {i}: {} (reached as {})",
            l.render(n.class.canonical()),
            l.render(&n.reached_as)
        );
    }
    out.push_str("edges:\n");
    for e in &ex.edges {
        let _ = writeln!(
            out,
            "  {} -> {}: {} at rotation {}, position {}",
            e.from,
            e.to,
            via(e.step.rule),
            e.step.rotation,
            e.step.position
        );
    }
    let irr: Vec<String> = ex.irreducible_nodes().iter().map(|i| i.to_string()).collect();
    let _ = writeln!(
        out,
        "irreducible: {}",
        if irr.is_empty() { "none".into() } else { irr.join(" ") }
    );
    out.push_str("components:\n");
    for c in &ex.sccs {
        let ids: Vec<String> = c.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "  {{{}}}", ids.join(" "));
    }
    let code = if ex.is_exhausted() { DEFINITIVE } else { UNDECIDED };
    let result = report::exploration(l.sys(), &ex);
    Ok(Outcome::new(code, status, out, result)
        .words(&[text])
        .budget(budget, Some(ex.nodes.len())))
}

fn analyze(l: &Loaded, maxlen: Option<usize>) -> CliResult<Outcome> {
    let sys = l.sys();
    let ambs = find_cyclic_ambiguities(sys);
    let mut out = String::new();
    let raw = ambs.iter().filter(|a| a.raw).count();
    let _ = writeln!(out, "ambiguities: {} ({raw} raw)", ambs.len());
    for a in &ambs {
        let d = &a.decomposition;
        let _ = writeln!(
            out,
            "  {} rules {} and {}: x={} u={} y={} v={}; results {} and {}{}",
            a.kind.name(),
            d.rules.0,
            d.rules.1,
            l.render(&d.x),
            l.render(&d.u),
            l.render(&d.y),
            l.render(&d.v),
            l.render(&a.left_result),
            l.render(&a.right_result),
            if a.raw { " (raw)" } else { "" }
        );
    }
    l.require_complete()?;
    let evidence = maxlen.map_or(
        TerminationEvidence::AssumedTerminating,
        TerminationEvidence::ReportPerWord,
    );
    let verdict = sufficient_confluence(sys, evidence)?;
    let (code, status, witnesses) = match &verdict {
        ConfluenceVerdict::CyclicallyConfluent => {
            out.push_str("cyclically confluent\n");
            (DEFINITIVE, "CyclicallyConfluent", json!(null))
        }
        ConfluenceVerdict::Inconclusive(w) => {
            out.push_str("inconclusive\n");
            if !w.raw.is_empty() {
                let _ = writeln!(out, "  raw ambiguities: {}", w.raw.len());
            }
            let list = |ws: &[Word]| ws.iter().map(|x| l.render(x)).collect::<Vec<_>>();
            if !w.nonterminating.is_empty() {
                let _ = writeln!(
                    out,
                    "  not cyclically terminating: {}",
                    list(&w.nonterminating).join(", ")
                );
            }
            if !w.undecided.is_empty() {
                let _ = writeln!(out, "  termination undecided: {}", list(&w.undecided).join(", "));
            }
            let words = |ws: &[Word]| ws.iter().map(|x| report::word(sys, x)).collect::<Vec<_>>();
            (
                UNDECIDED,
                "Inconclusive",
                json!({ "raw": w.raw.len(), "nonterminating": words(&w.nonterminating), "undecided": words(&w.undecided) }),
            )
        }
    };
    let result = json!({
        "ambiguities": ambs.iter().map(|a| report::ambiguity(sys, a)).collect::<Vec<_>>(),
        "termination_evidence": match evidence {
            TerminationEvidence::AssumedTerminating => json!("assumed"),
            TerminationEvidence::ReportPerWord(n) => json!({ "checked_up_to": n }),
        },
        "witnesses": witnesses,
    });
    Ok(Outcome::new(code, status, out, result))
}

fn added_json(aug: &AugmentedSystem) -> Value {
    let sys = aug.base();
    Value::Array(
        aug.added()
            .iter()
            .map(|r| json!({ "from": report::class(sys, &r.from), "to": report::class(sys, &r.to) }))
            .collect(),
    )
}

fn ccomplete(l: &Loaded, policy: OrientationPolicy, budget: ExploreBudget) -> CliResult<Outcome> {
    l.require_complete()?;
    let outcome = match complete_augmented(l.aug.clone(), budget, policy)? {
        CompletionOutcome::CyclicallyCompleted(aug) => {
            let text = aug.to_presentation();
            Outcome::new(
                DEFINITIVE,
                "CyclicallyCompleted",
                text.clone(),
                json!({ "added": added_json(&aug), "presentation": text }),
            )
        }
        CompletionOutcome::Failed {
            partial,
            ambiguity,
            classes,
        } => {
            let text = format!(
                "failed: {} and {} both already carry added reductions (rules {} and {})\n",
                l.render(classes.0.canonical()),
                l.render(classes.1.canonical()),
                ambiguity.rules().0,
                ambiguity.rules().1
            );
            let result = json!({
                "added": added_json(&partial),
                "ambiguity": report::ambiguity(l.sys(), &ambiguity),
                "classes": [report::class(l.sys(), &classes.0), report::class(l.sys(), &classes.1)],
            });
            Outcome::new(UNDECIDED, "Failed", text, result)
        }
        CompletionOutcome::Diverged {
            partial,
            ambiguity,
            reason,
        } => {
            let why = match reason {
                DivergenceReason::BudgetExhausted => "exploration budget exhausted",
                DivergenceReason::NoIrreducibleForm => "a result has no cyclically irreducible form",
            };
            let text = format!(
                "diverged on the ambiguity between rules {} and {}: {why}\n",
                ambiguity.rules().0,
                ambiguity.rules().1
            );
            let result = json!({
                "added": added_json(&partial),
                "ambiguity": report::ambiguity(l.sys(), &ambiguity),
                "reason": why,
            });
            Outcome::new(UNDECIDED, "Diverged", text, result)
        }
    };
    Ok(outcome.budget(budget, None))
}

fn cverify(l: &Loaded, maxlen: usize, budget: ExploreBudget) -> Outcome {
    let outcome = match verify_cyclic_completeness(&l.aug, maxlen, budget) {
        CyclicCompletenessCheck::VerifiedUpTo(n) => Outcome::new(
            DEFINITIVE,
            "VerifiedUpTo",
            format!("verified up to length {n}\n"),
            json!({ "verified_up_to": n }),
        ),
        CyclicCompletenessCheck::CounterexampleWord(w) => Outcome::new(
            DEFINITIVE,
            "CounterexampleWord",
            format!("counterexample: {} has several sink components\n", l.render(&w)),
            json!({ "counterexample": report::word(l.sys(), &w) }),
        ),
        CyclicCompletenessCheck::Inconclusive(w) => Outcome::new(
            UNDECIDED,
            "Inconclusive",
            format!("inconclusive: exploration of {} exhausted its budget\n", l.render(&w)),
            json!({ "undecided": report::word(l.sys(), &w) }),
        ),
    };
    outcome.budget(budget, None)
}

fn conj(
    l: &Loaded,
    u_text: &String,
    v_text: &String,
    witness_len: Option<usize>,
    budget: ExploreBudget,
) -> CliResult<Outcome> {
    let (u, v) = (l.word(u_text)?, l.word(v_text)?);
    let sys = l.sys();
    let verdict = decide_conjugacy(&l.aug, &u, &v, budget)?;
    let search_len = match (&verdict, witness_len) {
        (_, Some(n)) => Some(n),
        (ConjugacyVerdict::Unknown(_), None) => Some(DEFAULT_WITNESS_LEN),
        _ => None,
    };
    let witnesses = match search_len {
        Some(n) => Some((n, witness_search(sys, &u, &v, n)?)),
        None => None,
    };
    let verdict = match (verdict, &witnesses) {
        (ConjugacyVerdict::Unknown(_), Some((_, Some((x, y))))) => {
            ConjugacyVerdict::Conjugate(ConjugacyEvidence::Witnesses(x.clone(), y.clone()))
        }
        (v, _) => v,
    };
    let mut out = String::new();
    let names = |cs: &[CyclicClass]| {
        cs.iter()
            .map(|c| l.render(c.canonical()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let (code, status, detail) = match &verdict {
        ConjugacyVerdict::Conjugate(e) => {
            let (how, d) = match e {
                ConjugacyEvidence::RhoAgreement(c) => (
                    format!("same cyclically irreducible form {}", l.render(c.canonical())),
                    json!({ "evidence": "RhoAgreement", "class": report::class(sys, c) }),
                ),
                ConjugacyEvidence::SimAgreement(s) => (
                    format!("same sink component {{{}}}", names(&s.members)),
                    json!({ "evidence": "SimAgreement", "component": report::sink(sys, s) }),
                ),
                ConjugacyEvidence::CommonDescendant(c) => (
                    format!("both reduce cyclically to {}", l.render(c.canonical())),
                    json!({ "evidence": "CommonDescendant", "class": report::class(sys, c) }),
                ),
                ConjugacyEvidence::Witnesses(x, y) => (
                    "witnesses found".to_string(),
                    json!({ "evidence": "Witnesses", "x": report::word(sys, x), "y": report::word(sys, y) }),
                ),
            };
            let _ = writeln!(out, "conjugate: {how}");
            (DEFINITIVE, "Conjugate", d)
        }
        ConjugacyVerdict::NotInTranspositionClosure {
            u_forms,
            v_forms,
            verified_up_to,
        } => {
            let _ = writeln!(
                out,
                "not in transposition closure: forms {} and {} differ (cyclic completeness verified up to length {verified_up_to})",
                names(u_forms),
                names(v_forms)
            );
            let d = json!({
                "u_forms": report::classes(sys, u_forms),
                "v_forms": report::classes(sys, v_forms),
                "verified_up_to": verified_up_to,
            });
            (DEFINITIVE, "NotInTranspositionClosure", d)
        }
        ConjugacyVerdict::Unknown(reason) => {
            let why = match reason {
                UnknownReason::BudgetExhausted => "exploration budget exhausted".to_string(),
                UnknownReason::CompletenessNotEstablished(c) => match c {
                    CyclicCompletenessCheck::CounterexampleWord(w) => {
                        format!("cyclic completeness fails at {}", l.render(w))
                    }
                    _ => "cyclic completeness could not be established".to_string(),
                },
            };
            let _ = writeln!(out, "unknown: {why}");
            (UNDECIDED, "Unknown", json!({ "reason": why }))
        }
    };
    let wjson = match &witnesses {
        Some((n, Some((x, y)))) => {
            let _ = writeln!(out, "witnesses: x = {}, y = {}", l.render(x), l.render(y));
            json!({ "searched_up_to": n, "x": report::word(sys, x), "y": report::word(sys, y) })
        }
        Some((n, None)) => {
            let _ = writeln!(out, "witnesses: none up to length {n}");
            json!({ "searched_up_to": n })
        }
        None => json!(null),
    };
    let result = json!({ "verdict": detail, "witnesses": wjson });
    Ok(Outcome::new(code, status, out, result)
        .words(&[u_text, v_text])
        .budget(budget, None))
}
