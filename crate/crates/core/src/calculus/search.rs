//! Bounded backward proof search.
//!
//! The search rewrites the leftmost compound formula (antecedent first) by
//! one derived step: the invertible logical rules for `&` and `|`, and for
//! implications and negated formulas a replacement through a library
//! equivalence such as `A -> B -||- ~A | ~~B` or `~(A & B) -||- ~A | ~B`,
//! joined to the premises by cuts. Branches end in sequents over `p`, `~p`
//! and `~~p`, which close by identity, a negation clash, `A |- ~~A` or
//! `|- ~A, ~~A`. Every step strictly shrinks the sequent, so no loop
//! check is needed.

use thiserror::Error;

use super::build::{
    and_l1, and_l2, bot_l, cut_on, fit, id, imp_split_l, lem_nn, neg_and_l, neg_and_r1, neg_and_r2,
    neg_imp_l1, neg_imp_l2, neg_imp_r, neg_l, neg_or_l1, neg_or_l2, neg_or_r, neg_to_imp,
    nn_and_l1, nn_and_l2, nn_and_r, nn_bot_l, nn_imp_l, nn_intro, nn_or_l, nn_or_r1, nn_or_r2,
    nn_to_imp, or_r1, or_r2, or_split, pair, verum_r,
};
use super::{Derivation, Sequent};
use crate::syntax::Formula;
use crate::Fm;

pub const DEFAULT_SEARCH_DEPTH: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchFailure {
    #[error("search depth {0} exhausted")]
    DepthExhausted(usize),
    #[error("no derivation found; the search is stuck at `{0}`")]
    NotFound(Sequent),
}

type D = Derivation;

fn not(a: &Fm) -> Fm {
    Formula::not(a.clone())
}

fn nn(a: &Fm) -> Fm {
    Formula::not_not(a.clone())
}

/// A derivation of `s`, if the search finds one within `depth` steps on
/// every branch.
pub fn prove_bounded(s: &Sequent, depth: usize) -> Result<Derivation, SearchFailure> {
    prove(s, depth, depth)
}

/// A closing derivation of a subsequent of `g`.
fn close(g: &Sequent) -> Option<D> {
    let (ante, succ) = (&g.ante, &g.succ);
    if ante.contains(&Formula::Bot) {
        return Some(bot_l());
    }
    if ante.contains(&nn(&Formula::Bot)) {
        return Some(nn_bot_l());
    }
    if succ.contains(&not(&Formula::Bot)) {
        return Some(verum_r());
    }
    if let Some(a) = ante.iter().find(|a| succ.contains(a)) {
        return Some(id(a));
    }
    if let Some(a) = ante.iter().find(|a| ante.contains(&not(a))) {
        return Some(neg_l(id(a), a));
    }
    if let Some(a) = ante.iter().find(|a| succ.contains(&nn(a))) {
        return Some(nn_intro(a));
    }
    if let Some(a) = succ
        .iter()
        .filter_map(|f| f.negated())
        .find(|a| succ.contains(&nn(a)))
    {
        return Some(lem_nn(a));
    }
    None
}

/// How a principal formula is replaced.
enum Step {
    /// Drop the formula.
    Drop,
    /// Left: `X |- Y_k` for each k; one premise with all `Y_k`.
    LeftConj(Vec<D>, Vec<Fm>),
    /// Left: `X |- Y_1, ..., Y_n`; one premise per `Y_k`.
    LeftDisj(D, Vec<Fm>),
    /// Right: `Y_k |- X` for each k; one premise with all `Y_k`.
    RightDisj(Vec<D>, Vec<Fm>),
    /// Right: `Y_1, ..., Y_n |- X`; one premise per `Y_k`.
    RightConj(D, Vec<Fm>),
}

fn left_step(f: &Fm) -> Option<Step> {
    use Formula::*;
    Some(match f {
        Atom(_) | Bot => return None,
        And(a, b) => Step::LeftConj(
            vec![and_l2(id(a), b), and_l1(id(b), a)],
            vec![(**a).clone(), (**b).clone()],
        ),
        Or(a, b) => Step::LeftDisj(or_split(a, b), vec![(**a).clone(), (**b).clone()]),
        Imp(a, b) if **b != Bot => Step::LeftDisj(imp_split_l(a, b), vec![not(a), nn(b)]),
        Imp(x, _) => match &**x {
            Atom(_) => return None,
            Bot => Step::Drop,
            And(a, b) => Step::LeftDisj(neg_and_l(a, b), vec![not(a), not(b)]),
            Or(a, b) => {
                Step::LeftConj(vec![neg_or_l1(a, b), neg_or_l2(a, b)], vec![not(a), not(b)])
            }
            Imp(a, b) if **b != Bot => Step::LeftConj(
                vec![neg_imp_l1(a, b), neg_imp_l2(a, b)],
                vec![nn(a), not(b)],
            ),
            Imp(y, _) => match &**y {
                Atom(_) | Bot => return None,
                And(a, b) => {
                    Step::LeftConj(vec![nn_and_l1(a, b), nn_and_l2(a, b)], vec![nn(a), nn(b)])
                }
                Or(a, b) => Step::LeftDisj(nn_or_l(a, b), vec![nn(a), nn(b)]),
                Imp(a, b) => Step::LeftConj(
                    vec![nn_imp_l(a, b)],
                    vec![Formula::imp((**a).clone(), (**b).clone())],
                ),
            },
        },
    })
}

fn right_step(f: &Fm) -> Option<Step> {
    use Formula::*;
    Some(match f {
        Atom(_) => return None,
        Bot => Step::Drop,
        And(a, b) => Step::RightConj(pair(a, b), vec![(**a).clone(), (**b).clone()]),
        Or(a, b) => Step::RightDisj(
            vec![or_r1(id(a), b), or_r2(id(b), a)],
            vec![(**a).clone(), (**b).clone()],
        ),
        Imp(a, b) if **b != Bot => {
            Step::RightDisj(vec![neg_to_imp(a, b), nn_to_imp(a, b)], vec![not(a), nn(b)])
        }
        Imp(x, _) => match &**x {
            Atom(_) | Bot => return None,
            And(a, b) => Step::RightDisj(
                vec![neg_and_r1(a, b), neg_and_r2(a, b)],
                vec![not(a), not(b)],
            ),
            Or(a, b) => Step::RightConj(neg_or_r(a, b), vec![not(a), not(b)]),
            Imp(a, b) if **b != Bot => Step::RightConj(neg_imp_r(a, b), vec![nn(a), not(b)]),
            Imp(y, _) => match &**y {
                Atom(_) => return None,
                Bot => Step::Drop,
                And(a, b) => Step::RightConj(nn_and_r(a, b), vec![nn(a), nn(b)]),
                Or(a, b) => {
                    Step::RightDisj(vec![nn_or_r1(a, b), nn_or_r2(a, b)], vec![nn(a), nn(b)])
                }
                Imp(a, b) => {
                    let ab = Formula::imp((**a).clone(), (**b).clone());
                    Step::RightDisj(vec![nn_intro(&ab)], vec![ab])
                }
            },
        },
    })
}

fn prove(g: &Sequent, depth: usize, budget: usize) -> Result<D, SearchFailure> {
    if let Some(d) = close(g) {
        return Ok(fit(d, g));
    }
    let left = g
        .ante
        .iter()
        .enumerate()
        .find_map(|(i, f)| left_step(f).map(|s| (true, i, s)));
    let found = left.or_else(|| {
        g.succ
            .iter()
            .enumerate()
            .find_map(|(i, f)| right_step(f).map(|s| (false, i, s)))
    });
    let Some((is_left, i, step)) = found else {
        return Err(SearchFailure::NotFound(g.clone()));
    };
    if depth == 0 {
        return Err(SearchFailure::DepthExhausted(budget));
    }
    let mut rest = g.clone();
    if is_left {
        rest.ante.remove(i);
    } else {
        rest.succ.remove(i);
    }
    let with_left = |ys: &[Fm]| {
        let mut s = rest.clone();
        s.ante.splice(0..0, ys.iter().cloned());
        s
    };
    let with_right = |ys: &[Fm]| {
        let mut s = rest.clone();
        s.succ.extend(ys.iter().cloned());
        s
    };
    let sub = |s: &Sequent| prove(s, depth - 1, budget);
    let d = match step {
        Step::Drop => sub(&rest)?,
        Step::LeftConj(lemmas, ys) => {
            let mut d = sub(&with_left(&ys))?;
            for (l, y) in lemmas.into_iter().zip(&ys) {
                d = cut_on(l, d, y);
            }
            d
        }
        Step::LeftDisj(lemma, ys) => {
            let mut d = lemma;
            for y in &ys {
                d = cut_on(d, sub(&with_left(std::slice::from_ref(y)))?, y);
            }
            d
        }
        Step::RightDisj(lemmas, ys) => {
            let mut d = sub(&with_right(&ys))?;
            for (l, y) in lemmas.into_iter().zip(&ys) {
                d = cut_on(d, l, y);
            }
            d
        }
        Step::RightConj(lemma, ys) => {
            let mut d = lemma;
            for y in &ys {
                d = cut_on(sub(&with_right(std::slice::from_ref(y)))?, d, y);
            }
            d
        }
    };
    Ok(fit(d, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;
    use crate::decide::{decide_consequence, DEFAULT_VAR_BUDGET};

    fn sq(s: &str) -> Sequent {
        s.parse().unwrap()
    }

    fn proves(s: &str) -> D {
        let d = prove_bounded(&sq(s), DEFAULT_SEARCH_DEPTH).unwrap_or_else(|e| panic!("{s}: {e}"));
        if let Err(diags) = check_derivation(&d) {
            panic!("{s}: {}", diags[0]);
        }
        assert_eq!(d.conclusion, sq(s));
        d
    }

    #[test]
    fn finds_stated_derivations() {
        for s in [
            "|- ~p | ~~p",
            "~~(p -> q) |- p -> q",
            "p |- p",
            "p |- ~~p",
            "~~~p |- ~p",
            "p -> q |- ~p | ~~q",
            "~p | ~~q |- p -> q",
            "~~(p & q) |- ~~p & ~~q",
            "~~p & ~~q |- ~~(p & q)",
            "~~(p | q) |- ~~p | ~~q",
            "~~~p |- ~p",
            "|- (p -> q) | ~(p -> q)",
            "p, p -> ~q |- ~q",
            "|- ((p -> q) -> p) -> p",
            "|- ~~p -> p",
        ] {
            proves(s);
        }
    }

    #[test]
    fn fails_on_invalid_sequents() {
        for s in ["|- p | ~p", "~~p |- p", "p, p -> q |- q", "|- p", "|-"] {
            assert!(
                matches!(prove_bounded(&sq(s), 30), Err(SearchFailure::NotFound(_))),
                "{s}"
            );
            let (ante, succ) = (sq(s).ante, sq(s).succ);
            assert!(!decide_consequence(&ante, &succ, DEFAULT_VAR_BUDGET)
                .unwrap()
                .is_valid());
        }
    }

    #[test]
    fn depth_bound() {
        let s = sq("|- ((p -> q) -> p) -> p");
        assert_eq!(prove_bounded(&s, 0), Err(SearchFailure::DepthExhausted(0)));
        assert!(prove_bounded(&s, 30).is_ok());
    }
}
