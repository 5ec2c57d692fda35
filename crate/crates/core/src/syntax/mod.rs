//! Propositional syntax: formulas over an arbitrary atom type, the ST
//! class, substitution and the concrete ASCII grammar.
//!
//! Negation has no node of its own. `~A` is read and printed as `A -> _|_`,
//! and there is no verum constant; `~_|_` plays that role.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_formula, parse_sequent_sides, AtomSyntax, Cursor, ParseError};

/// A propositional variable, `[a-z][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid variable name `{0}` (expected [a-z][a-zA-Z0-9_]*)")]
pub struct InvalidVarName(pub String);

impl Var {
    pub fn new(name: &str) -> Result<Self, InvalidVarName> {
        if is_var_name(name) {
            Ok(Var(name.to_owned()))
        } else {
            Err(InvalidVarName(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A formula whose atoms are drawn from `A`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula<A> {
    Atom(A),
    Bot,
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Imp(Box<Formula<A>>, Box<Formula<A>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("substitution does not map variable `{0}`")]
    Unmapped(String),
}

impl Formula<Var> {
    /// Shorthand for a variable atom. Panics on a malformed name.
    pub fn var(name: &str) -> Self {
        Formula::Atom(Var::new(name).expect("valid variable name"))
    }
}

impl<A> Formula<A> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    pub fn and(l: Self, r: Self) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Self, r: Self) -> Self {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    /// `A -> _|_`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        Formula::Imp(Box::new(a), Box::new(Formula::Bot))
    }

    pub fn not_not(a: Self) -> Self {
        Self::not(Self::not(a))
    }

    /// `~_|_`, the canonical always-forced formula.
    pub fn verum() -> Self {
        Self::not(Formula::Bot)
    }

    /// If this is `A -> _|_`, returns `A`.
    pub fn negated(&self) -> Option<&Self> {
        match self {
            Formula::Imp(a, b) if matches!(**b, Formula::Bot) => Some(a),
            _ => None,
        }
    }

    /// If this is `~~A`, returns `A`.
    pub fn double_negated(&self) -> Option<&Self> {
        self.negated().and_then(Self::negated)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Membership in ST: `_|_ | Fm -> Fm | ST & ST | ST | ST`.
    pub fn is_st(&self) -> bool {
        match self {
            Formula::Bot | Formula::Imp(..) => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_st() && r.is_st(),
            Formula::Atom(_) => false,
        }
    }

    /// Number of binary connectives (negation counts as an implication).
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.connectives() + r.connectives()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Rebuilds the formula, replacing every atom by `f(atom)`.
    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Bot => Formula::Bot,
            Formula::And(l, r) => Formula::and(l.map_atoms(f), r.map_atoms(f)),
            Formula::Or(l, r) => Formula::or(l.map_atoms(f), r.map_atoms(f)),
            Formula::Imp(l, r) => Formula::imp(l.map_atoms(f), r.map_atoms(f)),
        }
    }

    /// Visits atoms left to right.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Bot => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.for_each_atom(f);
                r.for_each_atom(f);
            }
        }
    }

    /// Every subformula occurrence, in post-order (children before parents).
    pub fn subformulas(&self) -> Vec<&Self> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Self>) {
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
        out.push(self);
    }
}

impl<A: Clone + Ord> Formula<A> {
    /// The set of atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<A> {
        let mut set = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            set.insert(a.clone());
        });
        set
    }
}

impl<A: Ord + fmt::Display> Formula<A> {
    /// Simultaneous substitution. Every atom of the formula must be mapped.
    pub fn substitute<B: Clone>(
        &self,
        sigma: &BTreeMap<A, Formula<B>>,
    ) -> Result<Formula<B>, SubstitutionError> {
        let mut missing = None;
        let out = self.map_atoms(&mut |a| match sigma.get(a) {
            Some(g) => g.clone(),
            None => {
                missing.get_or_insert_with(|| a.to_string());
                Formula::Bot
            }
        });
        match missing {
            Some(name) => Err(SubstitutionError::Unmapped(name)),
            None => Ok(out),
        }
    }
}

/// Conjunction of a nonempty list, right-nested; `~_|_` for the empty list.
pub fn big_and<A>(items: impl IntoIterator<Item = Formula<A>>) -> Formula<A> {
    let mut items: Vec<_> = items.into_iter().collect();
    match items.pop() {
        None => Formula::verum(),
        Some(last) => items
            .into_iter()
            .rev()
            .fold(last, |acc, f| Formula::and(f, acc)),
    }
}

/// Disjunction of a list, right-nested; `_|_` for the empty list.
pub fn big_or<A>(items: impl IntoIterator<Item = Formula<A>>) -> Formula<A> {
    let mut items: Vec<_> = items.into_iter().collect();
    match items.pop() {
        None => Formula::Bot,
        Some(last) => items
            .into_iter()
            .rev()
            .fold(last, |acc, f| Formula::or(f, acc)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Fm;

    fn f(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    #[test]
    fn st_membership() {
        assert!(f("~p").is_st());
        assert!(f("(p->q) & ~r").is_st());
        assert!(!f("p | (q->r)").is_st());
        assert!(f("_|_").is_st());
        assert!(!f("p").is_st());
        assert!(f("(p -> q) | _|_").is_st());
    }

    #[test]
    fn variables() {
        let names = |s: &str| {
            f(s).atoms()
                .into_iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names("((p->q)->p)->p"), ["p", "q"]);
        assert!(names("_|_").is_empty());
        assert_eq!(names("~~p"), ["p"]);
    }

    #[test]
    fn substitution_is_simultaneous() {
        let sigma = |pairs: &[(&str, &str)]| {
            pairs
                .iter()
                .map(|(v, g)| (Var::new(v).unwrap(), f(g)))
                .collect::<BTreeMap<_, _>>()
        };
        assert_eq!(
            f("p->p").substitute(&sigma(&[("p", "q&r")])).unwrap(),
            f("(q&r)->(q&r)")
        );
        assert_eq!(
            f("~p").substitute(&sigma(&[("p", "_|_")])).unwrap(),
            f("~_|_")
        );
        assert_eq!(
            f("p|q")
                .substitute(&sigma(&[("p", "q"), ("q", "p")]))
                .unwrap(),
            f("q|p")
        );
        assert_eq!(
            f("p|q").substitute(&sigma(&[("p", "q")])),
            Err(SubstitutionError::Unmapped("q".into()))
        );
    }

    #[test]
    fn big_connectives() {
        assert_eq!(big_or(Vec::<Fm>::new()), Formula::Bot);
        assert_eq!(big_and(Vec::<Fm>::new()), Formula::verum());
        assert_eq!(big_or([f("p"), f("q"), f("r")]), f("p | (q | r)"));
    }

    #[test]
    fn var_names() {
        assert!(Var::new("p_1X").is_ok());
        assert!(Var::new("P").is_err());
        assert!(Var::new("1p").is_err());
        assert!(Var::new("").is_err());
    }
}
