use super::{Alphabet, Symbol, Word};

/// Exponent of a pattern atom: a constant, or `n + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Const(u32),
    Param(i64),
}

impl Exponent {
    pub fn at(self, n: i64) -> i64 {
        match self {
            Exponent::Const(k) => k as i64,
            Exponent::Param(c) => n + c,
        }
    }

    fn render(self) -> String {
        match self {
            Exponent::Const(1) => String::new(),
            Exponent::Const(k) => format!("^{k}"),
            Exponent::Param(0) => "^n".to_string(),
            Exponent::Param(c) if c > 0 => format!("^(n+{c})"),
            Exponent::Param(c) => format!("^(n-{})", -c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternAtom {
    pub symbol: Symbol,
    pub exponent: Exponent,
}

/// A parameterized rule family `lhs(n) -> rhs(n)` for `n` in `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTemplate {
    pub lhs: Vec<PatternAtom>,
    pub rhs: Vec<PatternAtom>,
    pub lo: i64,
    pub hi: i64,
}

fn expand(atoms: &[PatternAtom], n: i64) -> Result<Word, (Symbol, i64)> {
    let mut out = Vec::new();
    for a in atoms {
        let e = a.exponent.at(n);
        if e < 0 {
            return Err((a.symbol, n));
        }
        out.extend(std::iter::repeat_n(a.symbol, e as usize));
    }
    Ok(Word::new(out))
}

impl RuleTemplate {
    /// The rule at parameter value `n`; `Err((symbol, n))` if an exponent
    /// would be negative.
    pub fn instantiate(&self, n: i64) -> Result<(Word, Word), (Symbol, i64)> {
        Ok((expand(&self.lhs, n)?, expand(&self.rhs, n)?))
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub(crate) fn render_pattern(atoms: &[PatternAtom], alphabet: &Alphabet) -> String {
        if atoms.is_empty() {
            return "1".to_string();
        }
        atoms
            .iter()
            .map(|a| format!("{}{}", alphabet.name(a.symbol), a.exponent.render()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_evaluate() {
        assert_eq!(Exponent::Const(3).at(10), 3);
        assert_eq!(Exponent::Param(0).at(4), 4);
        assert_eq!(Exponent::Param(-1).at(4), 3);
        assert_eq!(Exponent::Param(2).at(4), 6);
    }

    #[test]
    fn negative_instantiation_is_reported() {
        let t = RuleTemplate {
            lhs: vec![PatternAtom {
                symbol: Symbol(0),
                exponent: Exponent::Param(-2),
            }],
            rhs: vec![],
            lo: 1,
            hi: 3,
        };
        assert_eq!(t.instantiate(1), Err((Symbol(0), 1)));
        assert_eq!(t.instantiate(3).unwrap().0, Word::from_indices(&[0]));
    }
}
