//! Single-variable unsigned 64-bit constraint formulas.
//!
//! A formula is a conjunction of comparisons between affine terms over one
//! variable `n`. All arithmetic wraps modulo 2^64, the same way a 64-bit
//! `size_t` or `uint64_t` behaves in the C++ code the rules point at.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The only variable name the grammar accepts.
pub const VARIABLE: &str = "n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Const(u64),
    Var,
    /// `c*n`, wrapping.
    Scaled(u64),
    /// `n + c`, wrapping.
    Offset(u64),
}

impl Term {
    pub fn eval(self, n: u64) -> u64 {
        match self {
            Term::Const(c) => c,
            Term::Var => n,
            Term::Scaled(c) => c.wrapping_mul(n),
            Term::Offset(c) => n.wrapping_add(c),
        }
    }

    /// `(slope, intercept)` such that the term is `slope*n + intercept mod 2^64`.
    pub(crate) fn affine(self) -> (u64, u64) {
        match self {
            Term::Const(c) => (0, c),
            Term::Var => (1, 0),
            Term::Scaled(c) => (c, 0),
            Term::Offset(c) => (1, c),
        }
    }

    fn pretty(self) -> String {
        match self {
            Term::Const(c) => c.to_string(),
            Term::Var => VARIABLE.to_string(),
            Term::Scaled(c) => format!("{c}{VARIABLE}"),
            Term::Offset(c) => format!("{VARIABLE} + {c}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var => f.write_str(VARIABLE),
            Term::Scaled(c) => write!(f, "{c}*{VARIABLE}"),
            Term::Offset(c) => write!(f, "{VARIABLE} + {c}"),
        }
    }
}

/// Unsigned comparison operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Ge,
    Gt,
    Eq,
}

impl Cmp {
    pub fn holds(self, lhs: u64, rhs: u64) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Eq => lhs == rhs,
        }
    }

    /// The operator with its operands swapped: `a < b` iff `b > a`.
    pub fn flipped(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Gt,
            Cmp::Le => Cmp::Ge,
            Cmp::Ge => Cmp::Le,
            Cmp::Gt => Cmp::Lt,
            Cmp::Eq => Cmp::Eq,
        }
    }

    fn ascii(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Eq => "==",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "≤",
            Cmp::Ge => "≥",
            Cmp::Gt => ">",
            Cmp::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub lhs: Term,
    pub cmp: Cmp,
    pub rhs: Term,
}

impl Predicate {
    pub fn new(lhs: Term, cmp: Cmp, rhs: Term) -> Self {
        Predicate { lhs, cmp, rhs }
    }

    pub fn holds(&self, n: u64) -> bool {
        self.cmp.holds(self.lhs.eval(n), self.rhs.eval(n))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.cmp.ascii(), self.rhs)
    }
}

/// A non-empty conjunction of predicates over `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintFormula {
    conjuncts: Vec<Predicate>,
}

impl ConstraintFormula {
    /// Returns `None` for an empty conjunct list.
    pub fn new(conjuncts: Vec<Predicate>) -> Option<Self> {
        if conjuncts.is_empty() {
            None
        } else {
            Some(ConstraintFormula { conjuncts })
        }
    }

    pub fn conjuncts(&self) -> &[Predicate] {
        &self.conjuncts
    }

    /// Direct evaluation at one point.
    pub fn holds(&self, n: u64) -> bool {
        self.conjuncts.iter().all(|p| p.holds(n))
    }

    /// Human-facing rendering with unsigned comparison glyphs, e.g. `n < 64 ∧ 2n ≥ 64`.
    pub fn pretty(&self) -> String {
        self.conjuncts
            .iter()
            .map(|p| format!("{} {} {}", p.lhs.pretty(), p.cmp.symbol(), p.rhs.pretty()))
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }
}

impl fmt::Display for ConstraintFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ConstraintFormula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for ConstraintFormula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConstraintFormula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

/// Parse failure. `column` is 1-based and counts characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {kind}")]
pub struct FormulaError {
    pub column: usize,
    pub kind: FormulaErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaErrorKind {
    #[error("empty formula")]
    Empty,
    #[error("unknown variable `{0}` (only `n` is allowed)")]
    UnknownVariable(String),
    #[error("integer constant does not fit in 64 bits")]
    ConstantOverflow,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Ident(String),
    Star,
    Plus,
    And,
    Cmp(Cmp),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("`{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::And => "`&&`".into(),
            Tok::Cmp(c) => format!("`{}`", c.ascii()),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, kind| FormulaError { column, kind };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let (radix, digits_from) =
                if c == '0' && matches!(chars.get(i + 1), Some('x') | Some('X')) { (16, i + 2) } else { (10, i) };
            i = digits_from;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let digits: String = chars[digits_from..i].iter().filter(|&&d| d != '_').collect();
            if digits.is_empty() || !digits.chars().all(|d| d.is_digit(radix)) {
                let found: String = chars[start..i].iter().collect();
                return Err(err(col, FormulaErrorKind::Unexpected { expected: "integer", found }));
            }
            let value =
                u64::from_str_radix(&digits, radix).map_err(|_| err(col, FormulaErrorKind::ConstantOverflow))?;
            out.push((col, Tok::Num(value)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('*', _) | ('×', _) | ('·', _) => (Tok::Star, 1),
            ('+', _) => (Tok::Plus, 1),
            ('&', Some('&')) => (Tok::And, 2),
            ('∧', _) => (Tok::And, 1),
            ('<', Some('=')) => (Tok::Cmp(Cmp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(Cmp::Ge), 2),
            ('=', Some('=')) => (Tok::Cmp(Cmp::Eq), 2),
            ('<', _) => (Tok::Cmp(Cmp::Lt), 1),
            ('>', _) => (Tok::Cmp(Cmp::Gt), 1),
            ('=', _) => (Tok::Cmp(Cmp::Eq), 1),
            ('≤', _) => (Tok::Cmp(Cmp::Le), 1),
            ('≥', _) => (Tok::Cmp(Cmp::Ge), 1),
            _ => {
                return Err(err(
                    col,
                    FormulaErrorKind::Unexpected { expected: "term or operator", found: format!("`{c}`") },
                ))
            }
        };
        out.push((col, tok));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end_col)
    }

    fn unexpected(&self, expected: &'static str) -> FormulaError {
        let found = self.peek().map(Tok::describe).unwrap_or_else(|| "end of input".into());
        FormulaError { column: self.col(), kind: FormulaErrorKind::Unexpected { expected, found } }
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        tok
    }

    fn variable(&mut self) -> Result<(), FormulaError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(name)) if name == VARIABLE => Ok(()),
            Some(Tok::Ident(name)) => Err(FormulaError { column: col, kind: FormulaErrorKind::UnknownVariable(name) }),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`n`"))
            }
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        match self.peek() {
            Some(Tok::Num(c)) => {
                let c = *c;
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Star) => {
                        self.pos += 1;
                        self.variable()?;
                        Ok(Term::Scaled(c))
                    }
                    Some(Tok::Plus) => {
                        self.pos += 1;
                        self.variable()?;
                        Ok(Term::Offset(c))
                    }
                    _ => Ok(Term::Const(c)),
                }
            }
            Some(Tok::Ident(_)) => {
                self.variable()?;
                match self.peek() {
                    Some(Tok::Star) => {
                        self.pos += 1;
                        match self.bump() {
                            Some(Tok::Num(c)) => Ok(Term::Scaled(c)),
                            _ => {
                                self.pos -= 1;
                                Err(self.unexpected("integer"))
                            }
                        }
                    }
                    Some(Tok::Plus) => {
                        self.pos += 1;
                        match self.bump() {
                            Some(Tok::Num(c)) => Ok(Term::Offset(c)),
                            _ => {
                                self.pos -= 1;
                                Err(self.unexpected("integer"))
                            }
                        }
                    }
                    _ => Ok(Term::Var),
                }
            }
            _ => Err(self.unexpected("term")),
        }
    }

    fn predicate(&mut self) -> Result<Predicate, FormulaError> {
        let lhs = self.term()?;
        let cmp = match self.peek() {
            Some(Tok::Cmp(c)) => *c,
            _ => return Err(self.unexpected("comparison operator")),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Predicate { lhs, cmp, rhs })
    }
}

/// Parses `pred (&& pred)*` where `pred` is `term CMP term` and a term is
/// `c`, `n`, `c*n` (or `n*c`), or `n + c` (or `c + n`).
pub fn parse_formula(text: &str) -> Result<ConstraintFormula, FormulaError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(FormulaError { column: 1, kind: FormulaErrorKind::Empty });
    }
    let mut parser = Parser { toks, pos: 0, end_col: text.chars().count() + 1 };
    let mut conjuncts = vec![parser.predicate()?];
    while parser.peek().is_some() {
        if parser.peek() != Some(&Tok::And) {
            return Err(parser.unexpected("`&&` or end of input"));
        }
        parser.pos += 1;
        conjuncts.push(parser.predicate()?);
    }
    Ok(ConstraintFormula { conjuncts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_bound() {
        let f = parse_formula("n >= 64").unwrap();
        assert_eq!(f.conjuncts(), &[Predicate::new(Term::Var, Cmp::Ge, Term::Const(64))]);
    }

    #[test]
    fn parses_doubling_chain() {
        let f = parse_formula("n < 64 && 2*n >= 64").unwrap();
        assert_eq!(f.conjuncts().len(), 2);
        assert_eq!(f.conjuncts()[1], Predicate::new(Term::Scaled(2), Cmp::Ge, Term::Const(64)));
    }

    #[test]
    fn accepts_commuted_and_unicode_forms() {
        let a = parse_formula("n*2 ≥ 64 ∧ 1 + n > 0x3f").unwrap();
        let b = parse_formula("2*n >= 64 && n + 1 > 63").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_unknown_variable() {
        let err = parse_formula("m >= 3").unwrap_err();
        assert_eq!(err.column, 1);
        assert_eq!(err.kind, FormulaErrorKind::UnknownVariable("m".into()));
    }

    #[test]
    fn reports_column_of_syntax_error() {
        let err = parse_formula("n >= 64 &&").unwrap_err();
        assert_eq!(err.column, 11);
        let err = parse_formula("n >= 64 || n < 3").unwrap_err();
        assert_eq!(err.column, 9);
        let err = parse_formula("n >= 18446744073709551616").unwrap_err();
        assert_eq!(err.kind, FormulaErrorKind::ConstantOverflow);
    }

    #[test]
    fn display_round_trips() {
        for text in ["n >= 64", "n < 64 && 2*n >= 64", "n + 1 >= 64", "7 == n && n + 3 > 5*n"] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn pretty_uses_glyphs() {
        let f = parse_formula("n < 64 && 2*n >= 64").unwrap();
        assert_eq!(f.pretty(), "n < 64 ∧ 2n ≥ 64");
    }

    #[test]
    fn wrapping_evaluation() {
        let f = parse_formula("2*n == 0 && n > 0").unwrap();
        assert!(f.holds(1 << 63));
        assert!(!f.holds(1));
    }
}
