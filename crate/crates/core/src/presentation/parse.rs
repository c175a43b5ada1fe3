//! Line-oriented presentation files.
//!
//! ```text
//! # comment
//! gens: a b c d
//! order: b < d < c < a
//! rule: a b -> b c
//! rule[n=2..8]: b a^n b a -> a b a^2 b^(n-1)
//! ```

use std::collections::HashSet;

use super::template::{Exponent, PatternAtom, RuleTemplate};
use super::{valid_generator_name, Alphabet, RewritingSystem, Rule, RuleOrigin, SymbolOrder, Word};
use crate::error::{ParseError, ParseErrorKind};

/// Upper bound used for `rule[n=<lo>..]:` families with no explicit upper end.
pub const DEFAULT_TEMPLATE_UPPER: i64 = 8;

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    pub default_template_upper: i64,
    /// Accept `creduce:` lines (augmented systems).
    pub allow_creduce: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            default_template_upper: DEFAULT_TEMPLATE_UPPER,
            allow_creduce: false,
        }
    }
}

/// A parsed file: the system plus any `creduce:` lines, in order.
#[derive(Clone, Debug)]
pub struct Document {
    pub system: RewritingSystem,
    pub creduce: Vec<(Word, Word)>,
}

pub fn parse_presentation(text: &str) -> Result<RewritingSystem, ParseError> {
    parse_presentation_with(text, ParseOptions::default())
}

pub fn parse_presentation_with(text: &str, options: ParseOptions) -> Result<RewritingSystem, ParseError> {
    parse_document(
        text,
        ParseOptions {
            allow_creduce: false,
            ..options
        },
    )
    .map(|d| d.system)
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

// 1-based character column of byte offset `byte` in `line`.
fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

enum Pending {
    Rule(Rule),
    Template(RuleTemplate),
}

pub fn parse_document(text: &str, options: ParseOptions) -> Result<Document, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut order: Option<SymbolOrder> = None;
    let mut pending: Vec<Pending> = Vec::new();
    let mut creduce = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let Some(colon) = content.find(':') else {
            return Err(syntax(lineno, lead + 1, "expected `<directive>:`"));
        };
        let directive = content[..colon].trim();
        let rest = &content[colon + 1..];
        let rest_col = column_of(raw, colon + 1);

        if alphabet.is_none() && directive != "gens" {
            return Err(err(lineno, lead + 1, ParseErrorKind::MissingGenerators));
        }

        match directive {
            "gens" => {
                if alphabet.is_some() {
                    return Err(err(
                        lineno,
                        lead + 1,
                        ParseErrorKind::UnexpectedDirective("gens".into()),
                    ));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                alphabet = Some(Alphabet::new(&names).map_err(|k| err(lineno, rest_col, k))?);
            }
            "order" => {
                let a = alphabet.as_ref().unwrap();
                if order.is_some() {
                    return Err(err(
                        lineno,
                        lead + 1,
                        ParseErrorKind::UnexpectedDirective("order".into()),
                    ));
                }
                let mut seq = Vec::new();
                for tok in rest.split('<') {
                    let tok = tok.trim();
                    let s = a
                        .symbol(tok)
                        .ok_or_else(|| err(lineno, rest_col, ParseErrorKind::UnknownGenerator(tok.into())))?;
                    seq.push(s);
                }
                order = Some(
                    SymbolOrder::from_ascending(&seq, a.len())
                        .ok_or_else(|| err(lineno, rest_col, ParseErrorKind::IncompleteOrder))?,
                );
            }
            "rule" | "creduce" => {
                if directive == "creduce" && !options.allow_creduce {
                    return Err(err(
                        lineno,
                        lead + 1,
                        ParseErrorKind::UnexpectedDirective("creduce".into()),
                    ));
                }
                let a = alphabet.as_ref().unwrap();
                let (l, r, rcol) = split_arrow(rest, lineno, rest_col)?;
                let lhs = to_word(parse_atoms(a, l, lineno, rest_col, false)?);
                let rhs = to_word(parse_atoms(a, r, lineno, rcol, false)?);
                if lhs.is_empty() {
                    return Err(err(lineno, rest_col, ParseErrorKind::EmptyLhs));
                }
                if directive == "rule" {
                    pending.push(Pending::Rule(Rule::new(lhs, rhs)));
                } else {
                    creduce.push((lhs, rhs));
                }
            }
            d if d.starts_with("rule[") && d.ends_with(']') => {
                let a = alphabet.as_ref().unwrap();
                let (lo, hi) = parse_range(&d[5..d.len() - 1], options, lineno, lead + 1)?;
                let (l, r, rcol) = split_arrow(rest, lineno, rest_col)?;
                let lhs = parse_atoms(a, l, lineno, rest_col, true)?;
                let rhs = parse_atoms(a, r, lineno, rcol, true)?;
                let t = RuleTemplate { lhs, rhs, lo, hi };
                for n in t.range() {
                    let (lw, _) = t.instantiate(n).map_err(|(s, n)| {
                        err(
                            lineno,
                            rest_col,
                            ParseErrorKind::NegativeExponent {
                                symbol: a.name(s).into(),
                                n,
                            },
                        )
                    })?;
                    if lw.is_empty() {
                        return Err(err(lineno, rest_col, ParseErrorKind::EmptyLhs));
                    }
                }
                pending.push(Pending::Template(t));
            }
            other => return Err(syntax(lineno, lead + 1, format!("unknown directive `{other}`"))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| err(1, 1, ParseErrorKind::MissingGenerators))?;
    let order = order.unwrap_or_else(|| SymbolOrder::identity(alphabet.len()));
    let mut rules = Vec::new();
    let mut templates = Vec::new();
    for p in pending {
        match p {
            Pending::Rule(r) => rules.push(r),
            Pending::Template(t) => {
                let ti = templates.len();
                for n in t.range() {
                    let (lhs, rhs) = t.instantiate(n).expect("checked above");
                    rules.push(Rule {
                        lhs,
                        rhs,
                        origin: RuleOrigin::TemplateInstance { template: ti, n },
                    });
                }
                templates.push(t);
            }
        }
    }
    Ok(Document {
        system: RewritingSystem::with_templates(alphabet, order, rules, templates),
        creduce,
    })
}

fn split_arrow(rest: &str, line: usize, col: usize) -> Result<(&str, &str, usize), ParseError> {
    let mut parts = rest.split("->");
    let (Some(l), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(syntax(line, col, "expected exactly one `->`"));
    };
    let rcol = col + l.chars().count() + 2;
    Ok((l, r, rcol))
}

fn parse_range(spec: &str, options: ParseOptions, line: usize, col: usize) -> Result<(i64, i64), ParseError> {
    let spec = spec.trim();
    let body = spec
        .strip_prefix("n")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| syntax(line, col, "expected `n=<lo>..<hi>`"))?;
    let (lo, hi) = body
        .split_once("..")
        .ok_or_else(|| syntax(line, col, "expected `..` in range"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| syntax(line, col, "bad range start"))?;
    let hi = hi.trim();
    let hi: i64 = if hi.is_empty() {
        options.default_template_upper
    } else {
        hi.parse().map_err(|_| syntax(line, col, "bad range end"))?
    };
    if lo > hi {
        return Err(err(line, col, ParseErrorKind::EmptyRange { lo, hi }));
    }
    Ok((lo, hi))
}

fn to_word(atoms: Vec<PatternAtom>) -> Word {
    atoms
        .into_iter()
        .flat_map(|a| match a.exponent {
            Exponent::Const(k) => std::iter::repeat_n(a.symbol, k as usize),
            Exponent::Param(_) => unreachable!("parameters rejected outside templates"),
        })
        .collect()
}

pub(crate) fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word, ParseError> {
    parse_atoms(alphabet, text, 1, 1, false).map(to_word)
}

/// Parses a whitespace-separated word or pattern into atoms.
fn parse_atoms(
    alphabet: &Alphabet,
    text: &str,
    line: usize,
    col0: usize,
    allow_param: bool,
) -> Result<Vec<PatternAtom>, ParseError> {
    let mut atoms = Vec::new();
    let mut start = None;
    let mut tokens = Vec::new();
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    for (offset, tok) in tokens {
        let col = col0 + text[..offset].chars().count();
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, Some(e)),
            None => (tok, None),
        };
        let whole = match (alphabet.symbol(name), exp) {
            (Some(s), None) => Some((s, Exponent::Const(1))),
            (Some(s), Some(e)) => {
                let (x, used) = parse_exponent(e, line, col, allow_param)?;
                if used == e.len() {
                    Some((s, x))
                } else if alphabet.single_char() {
                    None
                } else {
                    return Err(syntax(line, col, format!("trailing characters in `{tok}`")));
                }
            }
            (None, _) => None,
        };
        if let Some((symbol, exponent)) = whole {
            atoms.push(PatternAtom { symbol, exponent });
        } else if alphabet.single_char() {
            shorthand(alphabet, tok, line, col, allow_param, &mut atoms)?;
        } else if valid_generator_name(name) {
            return Err(err(line, col, ParseErrorKind::UnknownGenerator(name.into())));
        } else {
            return Err(syntax(line, col, format!("malformed token `{tok}`")));
        }
    }
    Ok(atoms)
}

// `ba^2ba`, `xz^nx`: letters with optional exponents, no separators.
fn shorthand(
    alphabet: &Alphabet,
    tok: &str,
    line: usize,
    col: usize,
    allow_param: bool,
    atoms: &mut Vec<PatternAtom>,
) -> Result<(), ParseError> {
    let mut rest = tok;
    let mut c_off = 0;
    while let Some(c) = rest.chars().next() {
        let here = col + c_off;
        let mut buf = [0u8; 4];
        let symbol = alphabet
            .symbol(c.encode_utf8(&mut buf))
            .ok_or_else(|| err(line, here, ParseErrorKind::UnknownGenerator(c.to_string())))?;
        rest = &rest[c.len_utf8()..];
        c_off += 1;
        let mut exponent = Exponent::Const(1);
        if let Some(e) = rest.strip_prefix('^') {
            let (x, used) = parse_exponent(e, line, here, allow_param)?;
            exponent = x;
            c_off += 1 + e[..used].chars().count();
            rest = &e[used..];
        }
        atoms.push(PatternAtom { symbol, exponent });
    }
    Ok(())
}

// Parses an exponent at the start of `s`; returns it with the bytes consumed.
fn parse_exponent(s: &str, line: usize, col: usize, allow_param: bool) -> Result<(Exponent, usize), ParseError> {
    let param = |off: i64, used: usize| {
        if allow_param {
            Ok((Exponent::Param(off), used))
        } else {
            Err(err(line, col, ParseErrorKind::ParameterOutsideTemplate))
        }
    };
    if s.starts_with('n') {
        return param(0, 1);
    }
    if let Some(inner) = s.strip_prefix('(') {
        let close = inner
            .find(')')
            .ok_or_else(|| syntax(line, col, "unclosed `(` in exponent"))?;
        let body: String = inner[..close].chars().filter(|c| !c.is_whitespace()).collect();
        let used = close + 2;
        let off = match body.strip_prefix('n') {
            Some("") => 0,
            Some(tail) => {
                let (sign, digits) = tail.split_at(1);
                let c: i64 = digits.parse().map_err(|_| syntax(line, col, "bad exponent offset"))?;
                match sign {
                    "+" => c,
                    "-" => -c,
                    _ => return Err(syntax(line, col, "expected `n+c` or `n-c`")),
                }
            }
            None => return Err(syntax(line, col, "expected `(n+c)` or `(n-c)`")),
        };
        return param(off, used);
    }
    let digits = s.bytes().take_while(|b| b.is_ascii_digit()).count();
    if digits == 0 {
        return Err(syntax(line, col, "missing exponent after `^`"));
    }
    let k: u32 = s[..digits]
        .parse()
        .map_err(|_| syntax(line, col, "exponent too large"))?;
    Ok((Exponent::Const(k), digits))
}

pub(crate) fn serialize(system: &RewritingSystem) -> String {
    let a = system.alphabet();
    let mut out = format!("gens: {}\n", a.names().join(" "));
    if !system.order().is_identity() {
        let asc: Vec<&str> = system.order().ascending().into_iter().map(|s| a.name(s)).collect();
        out.push_str(&format!("order: {}\n", asc.join(" < ")));
    }
    // a template is written back compactly only if every instance survives unchanged
    let intact = |t: usize| {
        let tpl = &system.templates()[t];
        tpl.range().all(|n| {
            system.rules().iter().any(|r| {
                r.origin == RuleOrigin::TemplateInstance { template: t, n }
                    && tpl.instantiate(n).is_ok_and(|(l, rh)| l == r.lhs && rh == r.rhs)
            })
        })
    };
    let mut emitted = HashSet::new();
    for r in system.rules() {
        match r.origin {
            RuleOrigin::TemplateInstance { template, .. } if intact(template) => {
                if emitted.insert(template) {
                    let t = &system.templates()[template];
                    out.push_str(&format!(
                        "rule[n={}..{}]: {} -> {}\n",
                        t.lo,
                        t.hi,
                        RuleTemplate::render_pattern(&t.lhs, a),
                        RuleTemplate::render_pattern(&t.rhs, a)
                    ));
                }
            }
            _ => out.push_str(&format!(
                "rule: {} -> {}\n",
                a.render_tokens(&r.lhs),
                a.render_tokens(&r.rhs)
            )),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Symbol;

    #[test]
    fn ex22_file() {
        let sys = parse_presentation("gens: a b c d\nrule: a b -> b c\nrule: c d -> d a\n").unwrap();
        assert_eq!(sys.alphabet().len(), 4);
        assert_eq!(sys.rules().len(), 2);
        assert_eq!(sys.rules()[0].lhs, Word::from_indices(&[0, 1]));
        assert_eq!(sys.rules()[1].rhs, Word::from_indices(&[3, 0]));
        assert_eq!(*sys.completeness(), crate::presentation::Completeness::Unverified);
    }

    #[test]
    fn no_rules_is_free_monoid() {
        let sys = parse_presentation("# free\ngens: a b\n").unwrap();
        assert!(sys.rules().is_empty());
    }

    #[test]
    fn braid_family_expands() {
        let sys = parse_presentation("gens: a b\nrule[n=2..4]: b a^n b a -> a b a^2 b^(n-1)\n").unwrap();
        assert_eq!(sys.rules().len(), 3);
        let r = &sys.rules()[0];
        assert_eq!(sys.render(&r.lhs), "baaba");
        assert_eq!(sys.render(&r.rhs), "abaab");
        assert_eq!(r.origin, RuleOrigin::TemplateInstance { template: 0, n: 2 });
        assert_eq!(sys.render(&sys.rules()[2].rhs), "abaabbb");
        assert_eq!(sys.horizon(), Some(7));
    }

    #[test]
    fn shorthand_words_and_patterns() {
        let sys = parse_presentation("gens: a b\nrule[n=2..3]: ba^nba -> aba^2b^(n-1)\n").unwrap();
        assert_eq!(sys.render(&sys.rules()[1].lhs), "baaaba");
        assert_eq!(sys.parse_word("ba^2ba").unwrap(), sys.parse_word("b a a b a").unwrap());
        assert_eq!(sys.parse_word("1").unwrap(), Word::empty());
        assert_eq!(sys.parse_word("a^0 b").unwrap(), Word::new(vec![Symbol(1)]));
    }

    #[test]
    fn multi_char_generators_need_separators() {
        let sys = parse_presentation("gens: a b AB\nrule: a b -> AB\n").unwrap();
        assert_eq!(sys.parse_word("AB a").unwrap(), Word::from_indices(&[2, 0]));
        let e = sys.parse_word("ab").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("ab".into()));
    }

    #[test]
    fn error_kinds() {
        let kind = |t: &str| parse_presentation(t).unwrap_err().kind;
        assert_eq!(kind("rule: a -> b\n"), ParseErrorKind::MissingGenerators);
        assert_eq!(kind("gens: a a\n"), ParseErrorKind::DuplicateGenerator("a".into()));
        assert_eq!(
            kind("gens: a b\nrule: a c -> b\n"),
            ParseErrorKind::UnknownGenerator("c".into())
        );
        assert_eq!(kind("gens: a b\nrule: 1 -> b\n"), ParseErrorKind::EmptyLhs);
        assert_eq!(
            kind("gens: a b\nrule[n=0..2]: b a^(n-1) -> a\n"),
            ParseErrorKind::NegativeExponent {
                symbol: "a".into(),
                n: 0
            }
        );
        assert_eq!(
            kind("gens: a b\nrule: a^n -> b\n"),
            ParseErrorKind::ParameterOutsideTemplate
        );
        assert_eq!(kind("gens: a b\norder: a\n"), ParseErrorKind::IncompleteOrder);
        assert!(matches!(kind("gens: a b\nrule a -> b\n"), ParseErrorKind::Syntax(_)));
        assert!(matches!(
            kind("gens: a b\nrule: a -> b -> a\n"),
            ParseErrorKind::Syntax(_)
        ));
        assert_eq!(
            kind("gens: a b\ncreduce: a -> b\n"),
            ParseErrorKind::UnexpectedDirective("creduce".into())
        );
    }

    #[test]
    fn error_positions() {
        let e = parse_presentation("gens: a b\n\nrule: a  q -> b\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
    }

    #[test]
    fn open_upper_bound_uses_default() {
        let opts = ParseOptions {
            default_template_upper: 5,
            ..Default::default()
        };
        let sys = parse_presentation_with("gens: a b\nrule[n=2..]: b a^n -> a b\n", opts).unwrap();
        assert_eq!(sys.rules().len(), 4);
    }

    #[test]
    fn serialize_round_trips_fixture_shapes() {
        let text = "gens: x y z\norder: z < x < y\nrule: x y -> z x\nrule[n=1..5]: x z^n x -> z x z y^(n-1)\nrule: y z -> z x\n";
        let sys = parse_presentation(text).unwrap();
        let again = parse_presentation(&sys.to_presentation()).unwrap();
        assert_eq!(sys, again);
    }
}
