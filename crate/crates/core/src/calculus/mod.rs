//! The sequent calculus: sequents, derivations, the rule checker, derived
//! rules and a bounded proof search.
//!
//! Sides of a sequent are sequences. Left rules act on the first formula of
//! the antecedent and right rules on the last formula of the succedent;
//! exchange swaps one adjacent pair. `imp-l`, `imp-r` and `cut` follow the
//! shapes
//!
//! ```text
//! G |- D, A    B, P |- S          G, A |- ~~B, D        G |- D, A    A, P |- S
//! ----------------------- imp-l   ---------------- imp-r  -------------------- cut
//! G, A -> B, P |- D, ~~S          G |- A -> B, ~~D        G, P |- D, S
//! ```

mod build;
mod search;
mod sexp;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{parse_sequent_sides, Formula, ParseError};
use crate::Fm;

pub use build::{lemma, macro_derivation, Lemma, Macro, MacroError};
pub use search::{prove_bounded, SearchFailure, DEFAULT_SEARCH_DEPTH};
pub use sexp::{read_derivation, write_derivation, SexpError};

/// `antecedent |- succedent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    pub ante: Vec<Fm>,
    pub succ: Vec<Fm>,
}

impl Sequent {
    pub fn new(ante: Vec<Fm>, succ: Vec<Fm>) -> Self {
        Sequent { ante, succ }
    }

    /// Every formula occurring on either side.
    pub fn formulas(&self) -> impl Iterator<Item = &Fm> {
        self.ante.iter().chain(&self.succ)
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &[Fm]) -> fmt::Result {
    for (i, a) in side.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_side(f, &self.ante)?;
        f.write_str(if self.ante.is_empty() { "|-" } else { " |-" })?;
        if !self.succ.is_empty() {
            f.write_str(" ")?;
        }
        write_side(f, &self.succ)
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (ante, succ) = parse_sequent_sides(s)?;
        Ok(Sequent { ante, succ })
    }
}

/// Primitive rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Init,
    BotL,
    Wl,
    Wr,
    Cl,
    Cr,
    Xl,
    Xr,
    Cut,
    AndL1,
    AndL2,
    AndR,
    OrL,
    OrR1,
    OrR2,
    ImpL,
    ImpR,
}

impl Rule {
    pub const ALL: [Rule; 17] = [
        Rule::Init,
        Rule::BotL,
        Rule::Wl,
        Rule::Wr,
        Rule::Cl,
        Rule::Cr,
        Rule::Xl,
        Rule::Xr,
        Rule::Cut,
        Rule::AndL1,
        Rule::AndL2,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR1,
        Rule::OrR2,
        Rule::ImpL,
        Rule::ImpR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Init => "init",
            Rule::BotL => "bot-l",
            Rule::Wl => "wl",
            Rule::Wr => "wr",
            Rule::Cl => "cl",
            Rule::Cr => "cr",
            Rule::Xl => "xl",
            Rule::Xr => "xr",
            Rule::Cut => "cut",
            Rule::AndL1 => "and-l1",
            Rule::AndL2 => "and-l2",
            Rule::AndR => "and-r",
            Rule::OrL => "or-l",
            Rule::OrR1 => "or-r1",
            Rule::OrR2 => "or-r2",
            Rule::ImpL => "imp-l",
            Rule::ImpR => "imp-r",
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            Rule::Init | Rule::BotL => 0,
            Rule::Cut | Rule::AndR | Rule::OrL | Rule::ImpL => 2,
            _ => 1,
        }
    }

    /// The rule schema, for diagnostics.
    pub fn schema(self) -> &'static str {
        match self {
            Rule::Init => "p |- p",
            Rule::BotL => "_|_ |-",
            Rule::Wl => "G |- D / A, G |- D",
            Rule::Wr => "G |- D / G |- D, A",
            Rule::Cl => "A, A, G |- D / A, G |- D",
            Rule::Cr => "G |- D, A, A / G |- D, A",
            Rule::Xl => "G, A, B, P |- D / G, B, A, P |- D",
            Rule::Xr => "G |- D, A, B, S / G |- D, B, A, S",
            Rule::Cut => "G |- D, A  and  A, P |- S / G, P |- D, S",
            Rule::AndL1 => "A, G |- D / B & A, G |- D",
            Rule::AndL2 => "A, G |- D / A & B, G |- D",
            Rule::AndR => "G |- D, A  and  G |- D, B / G |- D, A & B",
            Rule::OrL => "A, G |- D  and  B, G |- D / A | B, G |- D",
            Rule::OrR1 => "G |- D, A / G |- D, A | B",
            Rule::OrR2 => "G |- D, A / G |- D, B | A",
            Rule::ImpL => "G |- D, A  and  B, P |- S / G, A -> B, P |- D, ~~S",
            Rule::ImpR => "G, A |- ~~B, D / G |- A -> B, ~~D",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_owned()))
    }
}

/// A derivation tree of primitive rule applications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(conclusion: Sequent, rule: Rule, premises: Vec<Derivation>) -> Self {
        Derivation {
            conclusion,
            rule,
            premises,
        }
    }

    /// Number of rule applications.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            n += 1;
            stack.extend(&d.premises);
        }
        n
    }

    pub fn height(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::height)
            .max()
            .unwrap_or(0)
    }
}

/// A rule application that does not match its rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        let at = if path.is_empty() {
            "root".to_owned()
        } else {
            format!("root/{}", path.join("/"))
        };
        write!(
            f,
            "{at}: {}: expected {}, found {}",
            self.rule, self.expected, self.found
        )
    }
}

/// Checks every node; returns all mismatches in preorder.
pub fn check_derivation(d: &Derivation) -> Result<(), Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut stack = vec![(d, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        if let Err((expected, found)) = check_node(node) {
            out.push(Diagnostic {
                path: path.clone(),
                rule: node.rule,
                expected,
                found,
            });
        }
        for (i, p) in node.premises.iter().enumerate().rev() {
            let mut sub = path.clone();
            sub.push(i);
            stack.push((p, sub));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn nn(a: &Fm) -> Fm {
    Formula::not_not(a.clone())
}

/// A sequent pattern with schematic text for one formula.
fn pattern(ante: &[Fm], succ: &[Fm], head: Option<&str>, tail: Option<&str>) -> String {
    let texts = |xs: &[Fm]| xs.iter().map(Fm::to_string).collect::<Vec<_>>();
    let mut l = texts(ante);
    let mut r = texts(succ);
    if let Some(h) = head {
        l.insert(0, h.to_owned());
    }
    if let Some(t) = tail {
        r.push(t.to_owned());
    }
    let l = l.join(", ");
    let r = r.join(", ");
    let mid = match (l.is_empty(), r.is_empty()) {
        (true, true) => "|-",
        (true, false) => "|- ",
        (false, true) => " |-",
        (false, false) => " |- ",
    };
    format!("`{l}{mid}{r}`")
}

type Mismatch = (String, String);

fn mismatch(expected: impl Into<String>, found: impl fmt::Display) -> Mismatch {
    (expected.into(), format!("`{found}`"))
}

fn is_adjacent_swap(from: &[Fm], to: &[Fm]) -> bool {
    from.len() == to.len()
        && (0..from.len().saturating_sub(1)).any(|i| {
            from[i] == to[i + 1]
                && from[i + 1] == to[i]
                && from[..i] == to[..i]
                && from[i + 2..] == to[i + 2..]
        })
}

fn check_node(d: &Derivation) -> Result<(), Mismatch> {
    let c = &d.conclusion;
    let ps = &d.premises;
    let want = d.rule.premise_count();
    if ps.len() != want {
        return Err((
            format!("{want} premise(s) for {}", d.rule),
            format!("{} premise(s)", ps.len()),
        ));
    }
    let p0 = ps.first().map(|p| &p.conclusion);
    let p1 = ps.get(1).map(|p| &p.conclusion);
    let expect = |ok: bool, expected: String| {
        if ok {
            Ok(())
        } else {
            Err(mismatch(expected, c))
        }
    };
    match d.rule {
        Rule::Init => match (&c.ante[..], &c.succ[..]) {
            ([a @ Formula::Atom(_)], [b]) if a == b => Ok(()),
            _ => Err(mismatch("`p |- p` for a variable p", c)),
        },
        Rule::BotL => expect(
            c.ante == [Formula::Bot] && c.succ.is_empty(),
            "`_|_ |-`".into(),
        ),
        Rule::Wl => {
            let p = p0.unwrap();
            let ok = matches!(c.ante.split_first(), Some((_, rest)) if rest == p.ante)
                && c.succ == p.succ;
            expect(ok, format!("`A, {p}` (one formula added in front)"))
        }
        Rule::Wr => {
            let p = p0.unwrap();
            let ok = matches!(c.succ.split_last(), Some((_, rest)) if rest == p.succ)
                && c.ante == p.ante;
            expect(ok, format!("`{p}, A` (one formula added at the end)"))
        }
        Rule::Cl => {
            let p = p0.unwrap();
            match &p.ante[..] {
                [a, b, rest @ ..] if a == b => {
                    let mut ante = vec![a.clone()];
                    ante.extend_from_slice(rest);
                    let e = Sequent::new(ante, p.succ.clone());
                    expect(*c == e, format!("`{e}`"))
                }
                _ => Err(mismatch("a premise beginning with `A, A`", p)),
            }
        }
        Rule::Cr => {
            let p = p0.unwrap();
            match &p.succ[..] {
                [rest @ .., a, b] if a == b => {
                    let mut succ = rest.to_vec();
                    succ.push(a.clone());
                    let e = Sequent::new(p.ante.clone(), succ);
                    expect(*c == e, format!("`{e}`"))
                }
                _ => Err(mismatch("a premise ending with `A, A`", p)),
            }
        }
        Rule::Xl => {
            let p = p0.unwrap();
            let ok = c.succ == p.succ && is_adjacent_swap(&p.ante, &c.ante);
            expect(
                ok,
                format!("`{p}` with two adjacent antecedent formulas swapped"),
            )
        }
        Rule::Xr => {
            let p = p0.unwrap();
            let ok = c.ante == p.ante && is_adjacent_swap(&p.succ, &c.succ);
            expect(
                ok,
                format!("`{p}` with two adjacent succedent formulas swapped"),
            )
        }
        Rule::Cut => {
            let (l, r) = (p0.unwrap(), p1.unwrap());
            let (Some((a, delta)), Some((b, pi))) = (l.succ.split_last(), r.ante.split_first())
            else {
                return Err(mismatch(
                    "premises `G |- D, A` and `A, P |- S`",
                    format!("{l}` and `{r}"),
                ));
            };
            if a != b {
                return Err((
                    "the cut formula ending the left succedent to begin the right antecedent"
                        .into(),
                    format!("`{a}` and `{b}`"),
                ));
            }
            let e = Sequent::new([&l.ante[..], pi].concat(), [delta, &r.succ[..]].concat());
            expect(*c == e, format!("`{e}`"))
        }
        Rule::AndL1 | Rule::AndL2 => {
            let p = p0.unwrap();
            let Some((a, gamma)) = p.ante.split_first() else {
                return Err(mismatch("a premise with a nonempty antecedent", p));
            };
            let ok = match c.ante.split_first() {
                Some((Formula::And(l, r), rest)) => {
                    let side = if d.rule == Rule::AndL1 { r } else { l };
                    **side == *a && rest == gamma && c.succ == p.succ
                }
                _ => false,
            };
            let shape = if d.rule == Rule::AndL1 {
                format!("B & {a}")
            } else {
                format!("{a} & B")
            };
            expect(ok, pattern(gamma, &p.succ, Some(&shape), None))
        }
        Rule::AndR | Rule::OrL => {
            let (l, r) = (p0.unwrap(), p1.unwrap());
            if d.rule == Rule::AndR {
                let (Some((a, dl)), Some((b, dr))) = (l.succ.split_last(), r.succ.split_last())
                else {
                    return Err(mismatch(
                        "premises with nonempty succedents",
                        format!("{l}` and `{r}"),
                    ));
                };
                if l.ante != r.ante || dl != dr {
                    return Err(mismatch(
                        "premises `G |- D, A` and `G |- D, B` with equal contexts",
                        format!("{l}` and `{r}"),
                    ));
                }
                let mut succ = dl.to_vec();
                succ.push(Formula::and(a.clone(), b.clone()));
                let e = Sequent::new(l.ante.clone(), succ);
                expect(*c == e, format!("`{e}`"))
            } else {
                let (Some((a, gl)), Some((b, gr))) = (l.ante.split_first(), r.ante.split_first())
                else {
                    return Err(mismatch(
                        "premises with nonempty antecedents",
                        format!("{l}` and `{r}"),
                    ));
                };
                if l.succ != r.succ || gl != gr {
                    return Err(mismatch(
                        "premises `A, G |- D` and `B, G |- D` with equal contexts",
                        format!("{l}` and `{r}"),
                    ));
                }
                let mut ante = vec![Formula::or(a.clone(), b.clone())];
                ante.extend_from_slice(gl);
                let e = Sequent::new(ante, l.succ.clone());
                expect(*c == e, format!("`{e}`"))
            }
        }
        Rule::OrR1 | Rule::OrR2 => {
            let p = p0.unwrap();
            let Some((a, delta)) = p.succ.split_last() else {
                return Err(mismatch("a premise with a nonempty succedent", p));
            };
            let ok = match c.succ.split_last() {
                Some((Formula::Or(l, r), rest)) => {
                    let side = if d.rule == Rule::OrR1 { l } else { r };
                    **side == *a && rest == delta && c.ante == p.ante
                }
                _ => false,
            };
            let shape = if d.rule == Rule::OrR1 {
                format!("{a} | B")
            } else {
                format!("B | {a}")
            };
            expect(ok, pattern(&p.ante, delta, None, Some(&shape)))
        }
        Rule::ImpL => {
            let (l, r) = (p0.unwrap(), p1.unwrap());
            let (Some((a, delta)), Some((b, pi))) = (l.succ.split_last(), r.ante.split_first())
            else {
                return Err(mismatch(
                    "premises `G |- D, A` and `B, P |- S`",
                    format!("{l}` and `{r}"),
                ));
            };
            let mut ante = l.ante.clone();
            ante.push(Formula::imp(a.clone(), b.clone()));
            ante.extend_from_slice(pi);
            let mut succ = delta.to_vec();
            succ.extend(r.succ.iter().map(nn));
            let e = Sequent::new(ante, succ);
            expect(*c == e, format!("`{e}`"))
        }
        Rule::ImpR => {
            let p = p0.unwrap();
            let (Some((a, gamma)), Some((b, delta))) = (p.ante.split_last(), p.succ.split_first())
            else {
                return Err(mismatch("a premise `G, A |- ~~B, D`", p));
            };
            let Some(b) = b.double_negated() else {
                return Err((
                    "a premise succedent beginning with a double negation `~~B`".into(),
                    format!("`{p}`"),
                ));
            };
            let mut succ = vec![Formula::imp(a.clone(), b.clone())];
            succ.extend(delta.iter().map(nn));
            let e = Sequent::new(gamma.to_vec(), succ);
            expect(*c == e, format!("`{e}`"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Sequent {
        text.parse().unwrap()
    }

    fn leaf(text: &str, rule: Rule) -> Derivation {
        Derivation::new(s(text), rule, Vec::new())
    }

    #[test]
    fn sequent_round_trip() {
        for text in [
            "p, q |- r",
            "|- p | ~p",
            "~~p |-",
            "|-",
            "p -> q, r & s |- ~~(p -> q), _|_",
        ] {
            assert_eq!(s(text).to_string(), text);
        }
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
        }
    }

    #[test]
    fn initial_sequents() {
        assert!(check_derivation(&leaf("p |- p", Rule::Init)).is_ok());
        assert!(check_derivation(&leaf("_|_ |-", Rule::BotL)).is_ok());
        assert!(check_derivation(&leaf("p & q |- p & q", Rule::Init)).is_err());
        assert!(check_derivation(&leaf("_|_ |- p", Rule::BotL)).is_err());
    }

    #[test]
    fn imp_r_requires_double_negation() {
        let ok = Derivation::new(
            s("|- p -> p"),
            Rule::ImpR,
            vec![Derivation::new(s("p |- ~~p"), Rule::Wr, vec![])],
        );
        assert!(check_node(&ok).is_ok());
        let bad = Derivation::new(s("|- p -> q"), Rule::ImpR, vec![leaf("p |- q", Rule::Init)]);
        let diags = check_derivation(&bad).unwrap_err();
        assert_eq!(diags[0].path, Vec::<usize>::new());
        assert_eq!(diags[0].rule, Rule::ImpR);
        assert!(diags[0].expected.contains("~~B"));
        // The leaf `p |- q` is reported too.
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[1].path, vec![0]);
    }

    #[test]
    fn imp_l_decorates_right_context() {
        let d = Derivation::new(
            s("p, p -> q |- ~~q"),
            Rule::ImpL,
            vec![leaf("p |- p", Rule::Init), leaf("q |- q", Rule::Init)],
        );
        assert!(check_derivation(&d).is_ok());
        let undecorated = Derivation {
            conclusion: s("p, p -> q |- q"),
            ..d
        };
        assert!(check_derivation(&undecorated).is_err());
    }

    #[test]
    fn exchange_and_cut() {
        let x = Derivation::new(
            s("q, p |- p"),
            Rule::Xl,
            vec![Derivation::new(s("p, q |- p"), Rule::Wl, vec![])],
        );
        assert!(check_node(&x).is_ok());
        let bad = Derivation {
            conclusion: s("p, q |- p"),
            ..x.clone()
        };
        assert!(check_node(&bad).is_err());
        let cut = Derivation::new(
            s("p |- p"),
            Rule::Cut,
            vec![leaf("p |- p", Rule::Init), leaf("p |- p", Rule::Init)],
        );
        assert!(check_derivation(&cut).is_ok());
    }
}
