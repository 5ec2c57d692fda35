//! Recursive-descent parser for the formula grammar
//!
//! ```text
//! imp := or ("->" imp)?
//! or  := and ("|" and)*
//! and := neg ("&" neg)*
//! neg := "~" neg | atom | "_|_" | "(" imp ")"
//! ```
//!
//! The atom production is supplied by the atom type through [`AtomSyntax`].
//! Unicode connectives are accepted on input as aliases.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset of the offending input.
    pub offset: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected ", self.offset)?;
        let mut first = true;
        for e in &self.expected {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "`{e}`")?;
        }
        write!(f, "; found {}", self.found)
    }
}

/// A byte cursor over the input with whitespace skipping.
#[derive(Debug, Clone, Copy)]
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Consumes `tok` (after whitespace) if present.
    pub fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    pub fn looking_at(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(tok)
    }

    /// Consumes a maximal run of characters satisfying `pred`.
    pub fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !pred(c))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += len;
        &rest[..len]
    }

    pub fn error<I, S>(&mut self, expected: I) -> ParseError
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.skip_ws();
        let found = match self.rest().chars().next() {
            None => "end of input".to_owned(),
            Some(c) => format!("`{c}`"),
        };
        ParseError {
            offset: self.pos,
            expected: expected.into_iter().map(Into::into).collect(),
            found,
        }
    }
}

/// The atom production of the grammar.
pub trait AtomSyntax: Sized {
    /// Name of the atom class in "expected ..." messages.
    const EXPECTED: &'static str;

    /// Parses an atom at the cursor. On `None` the caller restores the
    /// cursor position.
    fn parse_atom(cur: &mut Cursor<'_>) -> Option<Self>;

    /// Whether an atom can start with `c`; used to choose error messages.
    fn starts_atom(c: char) -> bool;
}

impl AtomSyntax for Var {
    const EXPECTED: &'static str = "variable";

    fn parse_atom(cur: &mut Cursor<'_>) -> Option<Self> {
        cur.skip_ws();
        match cur.rest().chars().next() {
            Some(c) if c.is_ascii_lowercase() => {
                let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                Some(Var(name.to_owned()))
            }
            _ => None,
        }
    }

    fn starts_atom(c: char) -> bool {
        c.is_ascii_lowercase()
    }
}

const IMP: [&str; 2] = ["->", "→"];
const AND: [&str; 2] = ["&", "∧"];
const NOT: [&str; 2] = ["~", "¬"];
const BOT: [&str; 2] = ["_|_", "⊥"];
const TURNSTILE: [&str; 2] = ["|-", "⊢"];

fn eat_any(cur: &mut Cursor<'_>, toks: &[&str]) -> bool {
    toks.iter().any(|t| cur.eat(t))
}

fn eat_or(cur: &mut Cursor<'_>) -> bool {
    if cur.looking_at("|-") {
        return false;
    }
    cur.eat("|") || cur.eat("∨")
}

fn neg_expected<A: AtomSyntax>() -> [&'static str; 4] {
    ["~", "_|_", "(", A::EXPECTED]
}

pub(crate) fn parse_imp<A: AtomSyntax>(cur: &mut Cursor<'_>) -> Result<Formula<A>, ParseError> {
    let left = parse_or(cur)?;
    if eat_any(cur, &IMP) {
        let right = parse_imp(cur)?;
        Ok(Formula::imp(left, right))
    } else {
        Ok(left)
    }
}

fn parse_or<A: AtomSyntax>(cur: &mut Cursor<'_>) -> Result<Formula<A>, ParseError> {
    let mut acc = parse_and(cur)?;
    while eat_or(cur) {
        let right = parse_and(cur)?;
        acc = Formula::or(acc, right);
    }
    Ok(acc)
}

fn parse_and<A: AtomSyntax>(cur: &mut Cursor<'_>) -> Result<Formula<A>, ParseError> {
    let mut acc = parse_neg(cur)?;
    while eat_any(cur, &AND) {
        let right = parse_neg(cur)?;
        acc = Formula::and(acc, right);
    }
    Ok(acc)
}

fn parse_neg<A: AtomSyntax>(cur: &mut Cursor<'_>) -> Result<Formula<A>, ParseError> {
    if eat_any(cur, &NOT) {
        return Ok(Formula::not(parse_neg(cur)?));
    }
    if eat_any(cur, &BOT) {
        return Ok(Formula::Bot);
    }
    let start = cur.pos();
    if let Some(a) = A::parse_atom(cur) {
        return Ok(Formula::Atom(a));
    }
    cur.reset(start);
    if cur.eat("(") {
        let inner = parse_imp(cur)?;
        if !cur.eat(")") {
            return Err(cur.error([")", "&", "|", "->"]));
        }
        return Ok(inner);
    }
    Err(cur.error(neg_expected::<A>()))
}

/// Parses a complete formula.
pub fn parse_formula<A: AtomSyntax>(text: &str) -> Result<Formula<A>, ParseError> {
    let mut cur = Cursor::new(text);
    let f = parse_imp(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error(["&", "|", "->", "end of input"]));
    }
    Ok(f)
}

impl<A: AtomSyntax> FromStr for Formula<A> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

fn parse_list<A: AtomSyntax>(
    cur: &mut Cursor<'_>,
    stop: impl Fn(&mut Cursor<'_>) -> bool,
) -> Result<Vec<Formula<A>>, ParseError> {
    let mut out = Vec::new();
    if stop(cur) {
        return Ok(out);
    }
    loop {
        out.push(parse_imp(cur)?);
        if !cur.eat(",") {
            return Ok(out);
        }
    }
}

/// Parses `A, B |- C, D`; either side may be empty.
#[allow(clippy::type_complexity)]
pub fn parse_sequent_sides<A: AtomSyntax>(
    text: &str,
) -> Result<(Vec<Formula<A>>, Vec<Formula<A>>), ParseError> {
    let mut cur = Cursor::new(text);
    let is_turnstile = |c: &mut Cursor<'_>| TURNSTILE.iter().any(|t| c.looking_at(t));
    let left = parse_list(&mut cur, is_turnstile)?;
    if !eat_any(&mut cur, &TURNSTILE) {
        return Err(cur.error([",", "|-"]));
    }
    let right = parse_list(&mut cur, |c| c.at_end())?;
    if !cur.at_end() {
        return Err(cur.error([",", "end of input"]));
    }
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Fm;

    fn v(s: &str) -> Fm {
        Formula::var(s)
    }

    #[test]
    fn implication_is_right_associative() {
        let f: Fm = parse_formula("p -> q -> r").unwrap();
        assert_eq!(f, Formula::imp(v("p"), Formula::imp(v("q"), v("r"))));
    }

    #[test]
    fn negation_is_sugar() {
        let f: Fm = parse_formula("~p | ~~p").unwrap();
        assert_eq!(
            f,
            Formula::or(Formula::not(v("p")), Formula::not_not(v("p")))
        );
    }

    #[test]
    fn precedence() {
        let f: Fm = parse_formula("~p & q | r -> s").unwrap();
        let expected = Formula::imp(
            Formula::or(Formula::and(Formula::not(v("p")), v("q")), v("r")),
            v("s"),
        );
        assert_eq!(f, expected);
        let g: Fm = parse_formula("p & q & r").unwrap();
        assert_eq!(g, Formula::and(Formula::and(v("p"), v("q")), v("r")));
    }

    #[test]
    fn unicode_aliases() {
        let a: Fm = parse_formula("¬p ∨ (p ∧ q → ⊥)").unwrap();
        let b: Fm = parse_formula("~p | (p & q -> _|_)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_input_reports_offset() {
        let err = parse_formula::<Var>("p & | q").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains("variable"));
        assert_eq!(err.found, "`|`");

        let err = parse_formula::<Var>("p q").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_formula::<Var>("(p -> q").unwrap_err();
        assert_eq!(err.offset, 7);
        assert_eq!(err.found, "end of input");
        assert!(parse_formula::<Var>("").is_err());
        assert!(parse_formula::<Var>("P").is_err());
    }

    #[test]
    fn sequents() {
        let (l, r) = parse_sequent_sides::<Var>("p, p -> q |- q").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(r, vec![v("q")]);
        let (l, r) = parse_sequent_sides::<Var>("|- ~p | ~~p").unwrap();
        assert!(l.is_empty());
        assert_eq!(r.len(), 1);
        let (l, r) = parse_sequent_sides::<Var>("_|_ |-").unwrap();
        assert_eq!(l, vec![Formula::Bot]);
        assert!(r.is_empty());
        let (l, _) = parse_sequent_sides::<Var>("p|-p").unwrap();
        assert_eq!(l, vec![v("p")]);
        assert!(parse_sequent_sides::<Var>("p, q").is_err());
    }
}
