//! Variable-free arithmetic terms and equations between them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{AtomSyntax, Cursor, ParseError};

/// A natural-number denoting expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nde {
    Zero,
    Succ(Box<Nde>),
    Add(Box<Nde>, Box<Nde>),
    Mul(Box<Nde>, Box<Nde>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("term value exceeds 128 bits")]
pub struct Overflow;

impl Nde {
    pub fn succ(x: Nde) -> Nde {
        Nde::Succ(Box::new(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(x: Nde, y: Nde) -> Nde {
        Nde::Add(Box::new(x), Box::new(y))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(x: Nde, y: Nde) -> Nde {
        Nde::Mul(Box::new(x), Box::new(y))
    }

    /// The numeral `S(...S(0)...)`.
    pub fn numeral(n: usize) -> Nde {
        (0..n).fold(Nde::Zero, |x, _| Nde::succ(x))
    }

    /// Immediate subterms.
    pub fn parts(&self) -> Vec<&Nde> {
        match self {
            Nde::Zero => vec![],
            Nde::Succ(x) => vec![x],
            Nde::Add(x, y) | Nde::Mul(x, y) => vec![x, y],
        }
    }

    /// All subterms, children before parents, without repetition.
    pub fn subterms(&self) -> Vec<&Nde> {
        let mut out: Vec<&Nde> = Vec::new();
        fn walk<'a>(x: &'a Nde, out: &mut Vec<&'a Nde>) {
            for p in x.parts() {
                walk(p, out);
            }
            if !out.contains(&x) {
                out.push(x);
            }
        }
        walk(self, &mut out);
        out
    }
}

/// The denotation of a term.
pub fn eval_nde(x: &Nde) -> Result<u128, Overflow> {
    Ok(match x {
        Nde::Zero => 0,
        Nde::Succ(a) => eval_nde(a)?.checked_add(1).ok_or(Overflow)?,
        Nde::Add(a, b) => eval_nde(a)?.checked_add(eval_nde(b)?).ok_or(Overflow)?,
        Nde::Mul(a, b) => eval_nde(a)?.checked_mul(eval_nde(b)?).ok_or(Overflow)?,
    })
}

impl fmt::Display for Nde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 0: sum, 1: product, 2: primary
        fn go(x: &Nde, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let own = match x {
                Nde::Add(..) => 0,
                Nde::Mul(..) => 1,
                _ => 2,
            };
            if own < level {
                write!(f, "(")?;
            }
            match x {
                Nde::Zero => write!(f, "0")?,
                Nde::Succ(a) => {
                    write!(f, "S(")?;
                    go(a, 0, f)?;
                    write!(f, ")")?;
                }
                Nde::Add(a, b) => {
                    go(a, 0, f)?;
                    write!(f, "+")?;
                    go(b, 1, f)?;
                }
                Nde::Mul(a, b) => {
                    go(a, 1, f)?;
                    write!(f, "*")?;
                    go(b, 2, f)?;
                }
            }
            if own < level {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

fn parse_sum(cur: &mut Cursor<'_>) -> Option<Nde> {
    let mut acc = parse_product(cur)?;
    while cur.eat("+") {
        acc = Nde::add(acc, parse_product(cur)?);
    }
    Some(acc)
}

fn parse_product(cur: &mut Cursor<'_>) -> Option<Nde> {
    let mut acc = parse_primary(cur)?;
    while cur.eat("*") || cur.eat("·") {
        acc = Nde::mul(acc, parse_primary(cur)?);
    }
    Some(acc)
}

fn parse_primary(cur: &mut Cursor<'_>) -> Option<Nde> {
    if cur.eat("0") {
        return Some(Nde::Zero);
    }
    if cur.eat("S") {
        if !cur.eat("(") {
            return None;
        }
        let x = parse_sum(cur)?;
        return cur.eat(")").then(|| Nde::succ(x));
    }
    if cur.eat("(") {
        let x = parse_sum(cur)?;
        return cur.eat(")").then_some(x);
    }
    None
}

fn parse_whole<T>(
    text: &str,
    what: &str,
    p: impl Fn(&mut Cursor<'_>) -> Option<T>,
) -> Result<T, ParseError> {
    let mut cur = Cursor::new(text);
    match p(&mut cur) {
        Some(x) if cur.at_end() => Ok(x),
        _ => {
            cur.reset(0);
            Err(cur.error([what]))
        }
    }
}

impl FromStr for Nde {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_whole(s, "term", parse_sum)
    }
}

/// An equation `x=y` between terms, compared syntactically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Nde,
    pub rhs: Nde,
}

impl Equation {
    pub fn new(lhs: Nde, rhs: Nde) -> Self {
        Equation { lhs, rhs }
    }

    /// Whether both sides denote the same number.
    pub fn is_true(&self) -> bool {
        match (eval_nde(&self.lhs), eval_nde(&self.rhs)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// The false equation `0=S(0)`.
    pub fn falsum() -> Self {
        Equation::new(Nde::Zero, Nde::numeral(1))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

fn parse_equation(cur: &mut Cursor<'_>) -> Option<Equation> {
    let lhs = parse_sum(cur)?;
    if !cur.eat("=") {
        return None;
    }
    Some(Equation::new(lhs, parse_sum(cur)?))
}

impl FromStr for Equation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_whole(s, "equation", parse_equation)
    }
}

impl AtomSyntax for Equation {
    const EXPECTED: &'static str = "equation";

    fn parse_atom(cur: &mut Cursor<'_>) -> Option<Self> {
        parse_equation(cur)
    }

    fn starts_atom(c: char) -> bool {
        matches!(c, '0' | 'S' | '(')
    }
}

/// Terms in order of height, each height listing `S(x)`, then sums, then
/// products of earlier terms (pairs ordered by left, then right, index).
#[derive(Debug, Clone, Default)]
pub struct TermEnumeration {
    terms: Vec<Nde>,
    /// Index where the current height starts; terms before it are complete.
    height_start: usize,
}

impl TermEnumeration {
    pub fn new() -> Self {
        TermEnumeration {
            terms: vec![Nde::Zero],
            height_start: 0,
        }
    }

    fn grow(&mut self) {
        let prev = self.height_start;
        let upto = self.terms.len();
        let mut next = Vec::new();
        for x in &self.terms[prev..upto] {
            next.push(Nde::succ(x.clone()));
        }
        for mul in [false, true] {
            for i in 0..upto {
                for j in 0..upto {
                    if i < prev && j < prev {
                        continue;
                    }
                    let (x, y) = (self.terms[i].clone(), self.terms[j].clone());
                    next.push(if mul { Nde::mul(x, y) } else { Nde::add(x, y) });
                }
            }
        }
        self.height_start = upto;
        self.terms.extend(next);
    }

    pub fn get(&mut self, i: usize) -> &Nde {
        while self.terms.len() <= i {
            self.grow();
        }
        &self.terms[i]
    }
}

/// True equations in canonical order: pairs `(x_i, x_j)` of enumerated
/// terms sorted by `max(i, j)`, then `j`, then `i`.
pub fn true_equations() -> impl Iterator<Item = Equation> {
    let mut terms = TermEnumeration::new();
    (0usize..)
        .flat_map(|m| {
            let pairs: Vec<(usize, usize)> = (0..m)
                .map(|j| (m, j))
                .chain((0..=m).map(|i| (i, m)))
                .collect();
            pairs
        })
        .filter_map(move |(i, j)| {
            let eq = Equation::new(terms.get(i).clone(), terms.get(j).clone());
            eq.is_true().then_some(eq)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Nde {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(eval_nde(&n("S(0)+S(0)")), Ok(2));
        assert_eq!(eval_nde(&n("0*S(0)")), Ok(0));
        assert_eq!(eval_nde(&n("S(S(0))*S(S(0))")), Ok(4));
        assert_eq!(eval_nde(&n("S(0)+S(0)*S(S(0))")), Ok(3));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "0",
            "S(0)+0",
            "0+(0+0)",
            "(0+0)*0",
            "0*(0*0)",
            "S(0*0+S(0))",
            "0+0+0",
            "0*0*0",
        ] {
            assert_eq!(n(s).to_string(), s);
        }
        assert_eq!(n("(0+0)+0").to_string(), "0+0+0");
        let e: Equation = "0+0 = S(0)*0".parse().unwrap();
        assert_eq!(e.to_string(), "0+0=S(0)*0");
        assert!(e.is_true());
        assert!(!Equation::falsum().is_true());
    }

    #[test]
    fn canonical_equations() {
        let first: Vec<String> = true_equations().take(5).map(|e| e.to_string()).collect();
        assert_eq!(first, ["0=0", "S(0)=S(0)", "0+0=0", "0=0+0", "0+0=0+0"]);
    }

    #[test]
    fn term_enumeration_heights() {
        let mut t = TermEnumeration::new();
        let first: Vec<String> = (0..4).map(|i| t.get(i).to_string()).collect();
        assert_eq!(first, ["0", "S(0)", "0+0", "0*0"]);
        assert_eq!(t.get(4).to_string(), "S(S(0))");
    }
}
