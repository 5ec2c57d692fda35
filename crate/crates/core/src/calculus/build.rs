//! Derivation builders: structural rearrangement, derived rules, the lemma
//! library and the admissible-rule macros.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Derivation, Rule, Sequent};
use crate::syntax::Formula;
use crate::Fm;

type D = Derivation;

fn not(a: &Fm) -> Fm {
    Formula::not(a.clone())
}

fn nn(a: &Fm) -> Fm {
    Formula::not_not(a.clone())
}

fn seq(ante: Vec<Fm>, succ: Vec<Fm>) -> Sequent {
    Sequent::new(ante, succ)
}

fn node(ante: Vec<Fm>, succ: Vec<Fm>, rule: Rule, premises: Vec<D>) -> D {
    Derivation::new(seq(ante, succ), rule, premises)
}

fn count(xs: &[Fm], a: &Fm) -> usize {
    xs.iter().filter(|x| *x == a).count()
}

/// Left or right side of a sequent.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn side(d: &D, s: Side) -> &Vec<Fm> {
    match s {
        Side::Left => &d.conclusion.ante,
        Side::Right => &d.conclusion.succ,
    }
}

/// Applies a one-premise structural rule producing `new` on side `s`.
fn structural(d: D, s: Side, rule: Rule, new: Vec<Fm>) -> D {
    let c = match s {
        Side::Left => seq(new, d.conclusion.succ.clone()),
        Side::Right => seq(d.conclusion.ante.clone(), new),
    };
    Derivation::new(c, rule, vec![d])
}

/// Swaps positions `i` and `i + 1` on side `s`.
fn swap(d: D, s: Side, i: usize) -> D {
    let mut xs = side(&d, s).clone();
    xs.swap(i, i + 1);
    let rule = if s == Side::Left { Rule::Xl } else { Rule::Xr };
    structural(d, s, rule, xs)
}

/// Moves the formula at `from` to `to` by adjacent swaps.
fn shift(mut d: D, s: Side, from: usize, to: usize) -> D {
    if from > to {
        for i in (to..from).rev() {
            d = swap(d, s, i);
        }
    } else {
        for i in from..to {
            d = swap(d, s, i);
        }
    }
    d
}

/// Rearranges one side into `target` by contraction, weakening and
/// exchange. Every formula of the side must occur in `target`.
fn fit_side(mut d: D, s: Side, target: &[Fm]) -> D {
    let (cl, wk) = match s {
        Side::Left => (Rule::Cl, Rule::Wl),
        Side::Right => (Rule::Cr, Rule::Wr),
    };
    loop {
        let xs = side(&d, s);
        let extra = xs
            .iter()
            .find(|a| count(xs, a) > count(target, a).max(1))
            .cloned();
        let Some(a) = extra else { break };
        let pos: Vec<usize> = xs
            .iter()
            .enumerate()
            .filter(|(_, x)| **x == a)
            .map(|(i, _)| i)
            .collect();
        let n = xs.len();
        if s == Side::Left {
            d = shift(d, s, pos[0], 0);
            d = shift(d, s, pos[1], 1);
            let mut new = side(&d, s).clone();
            new.remove(0);
            d = structural(d, s, cl, new);
        } else {
            let (i, j) = (pos[pos.len() - 2], pos[pos.len() - 1]);
            d = shift(d, s, j, n - 1);
            d = shift(d, s, i, n - 2);
            let mut new = side(&d, s).clone();
            new.pop();
            d = structural(d, s, cl, new);
        }
    }
    assert!(
        side(&d, s).iter().all(|a| target.contains(a)),
        "side contains a formula missing from the target"
    );
    for a in target {
        while count(side(&d, s), a) < count(target, a) {
            let mut new = side(&d, s).clone();
            match s {
                Side::Left => new.insert(0, a.clone()),
                Side::Right => new.push(a.clone()),
            }
            d = structural(d, s, wk, new);
        }
    }
    for (i, a) in target.iter().enumerate() {
        let j = i + side(&d, s)[i..]
            .iter()
            .position(|x| x == a)
            .expect("permutation");
        d = shift(d, s, j, i);
    }
    d
}

/// Rearranges `d` to conclude exactly `target`, using structural rules.
pub(crate) fn fit(d: D, target: &Sequent) -> D {
    let d = fit_side(d, Side::Left, &target.ante);
    fit_side(d, Side::Right, &target.succ)
}

fn fit_to(d: D, ante: Vec<Fm>, succ: Vec<Fm>) -> D {
    fit(d, &seq(ante, succ))
}

fn without(xs: &[Fm], a: &Fm, from_end: bool) -> Vec<Fm> {
    let mut v = xs.to_vec();
    let i = if from_end {
        v.iter().rposition(|x| x == a)
    } else {
        v.iter().position(|x| x == a)
    };
    v.remove(i.unwrap_or_else(|| panic!("`{a}` does not occur")));
    v
}

/// Cuts `c`, which must occur in the succedent of `l` and the antecedent of
/// `r`, rearranging both first.
pub(crate) fn cut_on(l: D, r: D, c: &Fm) -> D {
    let mut succ = without(&l.conclusion.succ, c, true);
    succ.push(c.clone());
    let ante = l.conclusion.ante.clone();
    let l = fit_to(l, ante, succ);
    let mut ante = vec![c.clone()];
    ante.extend(without(&r.conclusion.ante, c, false));
    let succ = r.conclusion.succ.clone();
    let r = fit_to(r, ante, succ);
    let ante = [&l.conclusion.ante[..], &r.conclusion.ante[1..]].concat();
    let succ = [
        &l.conclusion.succ[..l.conclusion.succ.len() - 1],
        &r.conclusion.succ[..],
    ]
    .concat();
    node(ante, succ, Rule::Cut, vec![l, r])
}

pub(crate) fn init(p: &Fm) -> D {
    node(vec![p.clone()], vec![p.clone()], Rule::Init, vec![])
}

pub(crate) fn bot_l() -> D {
    node(vec![Formula::Bot], vec![], Rule::BotL, vec![])
}

/// From `A, G |- D` infer `A & B, G |- D`.
pub(crate) fn and_l2(d: D, b: &Fm) -> D {
    let mut ante = d.conclusion.ante.clone();
    ante[0] = Formula::and(ante[0].clone(), b.clone());
    let succ = d.conclusion.succ.clone();
    node(ante, succ, Rule::AndL2, vec![d])
}

/// From `A, G |- D` infer `B & A, G |- D`.
pub(crate) fn and_l1(d: D, b: &Fm) -> D {
    let mut ante = d.conclusion.ante.clone();
    ante[0] = Formula::and(b.clone(), ante[0].clone());
    let succ = d.conclusion.succ.clone();
    node(ante, succ, Rule::AndL1, vec![d])
}

/// From `G |- D, A` and `G |- D, B` infer `G |- D, A & B`.
pub(crate) fn and_r(l: D, r: D) -> D {
    let mut succ = l.conclusion.succ.clone();
    let a = succ.pop().unwrap();
    let b = r.conclusion.succ.last().unwrap().clone();
    succ.push(Formula::and(a, b));
    let ante = l.conclusion.ante.clone();
    node(ante, succ, Rule::AndR, vec![l, r])
}

/// From `A, G |- D` and `B, G |- D` infer `A | B, G |- D`.
pub(crate) fn or_l(l: D, r: D) -> D {
    let mut ante = l.conclusion.ante.clone();
    ante[0] = Formula::or(ante[0].clone(), r.conclusion.ante[0].clone());
    let succ = l.conclusion.succ.clone();
    node(ante, succ, Rule::OrL, vec![l, r])
}

/// From `G |- D, A` infer `G |- D, A | B`.
pub(crate) fn or_r1(d: D, b: &Fm) -> D {
    let mut succ = d.conclusion.succ.clone();
    let a = succ.pop().unwrap();
    succ.push(Formula::or(a, b.clone()));
    let ante = d.conclusion.ante.clone();
    node(ante, succ, Rule::OrR1, vec![d])
}

/// From `G |- D, A` infer `G |- D, B | A`.
pub(crate) fn or_r2(d: D, b: &Fm) -> D {
    let mut succ = d.conclusion.succ.clone();
    let a = succ.pop().unwrap();
    succ.push(Formula::or(b.clone(), a));
    let ante = d.conclusion.ante.clone();
    node(ante, succ, Rule::OrR2, vec![d])
}

/// From `G |- D, A` and `B, P |- S` infer `G, A -> B, P |- D, ~~S`.
fn imp_l(l: D, r: D) -> D {
    let mut delta = l.conclusion.succ.clone();
    let a = delta.pop().unwrap();
    let b = r.conclusion.ante[0].clone();
    let mut ante = l.conclusion.ante.clone();
    ante.push(Formula::imp(a, b));
    ante.extend_from_slice(&r.conclusion.ante[1..]);
    delta.extend(r.conclusion.succ.iter().map(nn));
    node(ante, delta, Rule::ImpL, vec![l, r])
}

/// From `G, A |- ~~B, D` infer `G |- A -> B, ~~D`.
fn imp_r(d: D) -> D {
    let mut gamma = d.conclusion.ante.clone();
    let a = gamma.pop().unwrap();
    let b = d.conclusion.succ[0].double_negated().expect("~~B").clone();
    let mut succ = vec![Formula::imp(a, b)];
    succ.extend(d.conclusion.succ[1..].iter().map(nn));
    node(gamma, succ, Rule::ImpR, vec![d])
}

/// `A |- A`.
pub(crate) fn id(a: &Fm) -> D {
    match a {
        Formula::Atom(_) => init(a),
        Formula::Bot => fit_to(bot_l(), vec![Formula::Bot], vec![Formula::Bot]),
        Formula::And(l, r) => and_r(and_l2(id(l), r), and_l1(id(r), l)),
        Formula::Or(l, r) => or_l(or_r1(id(l), r), or_r2(id(r), l)),
        Formula::Imp(l, r) => {
            let d = imp_l(id(l), id(r));
            imp_r(fit_to(d, vec![a.clone(), (**l).clone()], vec![nn(r)]))
        }
    }
}

/// From a derivation with `A` in the succedent, `~A` added on the left.
pub(crate) fn neg_l(d: D, a: &Fm) -> D {
    let mut succ = without(&d.conclusion.succ, a, true);
    succ.push(a.clone());
    let d = fit_to(d.clone(), d.conclusion.ante.clone(), succ);
    imp_l(d, bot_l())
}

/// From `G, A |- D` (any order) infer `G |- ~A, ~~D`.
pub(crate) fn neg_r(d: D, a: &Fm) -> D {
    let mut ante = without(&d.conclusion.ante, a, false);
    ante.push(a.clone());
    let mut succ = vec![nn(&Formula::Bot)];
    succ.extend(d.conclusion.succ.iter().cloned());
    imp_r(fit_to(d, ante, succ))
}

/// `A |- ~~A`.
pub(crate) fn nn_intro(a: &Fm) -> D {
    neg_r(neg_l(id(a), a), &not(a))
}

/// `~~~A |- ~A`.
pub(crate) fn tri(a: &Fm) -> D {
    neg_r(neg_l(nn_intro(a), &nn(a)), a)
}

/// `|- ~A, ~~A`.
pub(crate) fn lem_nn(a: &Fm) -> D {
    neg_r(id(a), a)
}

/// From `A, G |- D` (any order) infer `~~A, G |- ~~D`.
pub(crate) fn nn_l(d: D, a: &Fm) -> D {
    let e = neg_r(d, a);
    let f = neg_l(e, &not(a));
    let mut ante = vec![nn(a)];
    ante.extend(without(&f.conclusion.ante, &nn(a), true));
    let succ = f.conclusion.succ.clone();
    fit_to(f, ante, succ)
}

/// From `G |- D, A` infer `G |- D, ~~A`.
pub(crate) fn nn_r(d: D, a: &Fm) -> D {
    cut_on(d, nn_intro(a), a)
}

/// `A -> B |- ~A, ~~B`.
pub(crate) fn imp_split_l(a: &Fm, b: &Fm) -> D {
    let ab = Formula::imp(a.clone(), b.clone());
    let e = imp_l(id(a), id(b));
    let f = nn_l(e, a);
    let g = cut_on(f, tri(&not(b)), &nn(&nn(b)));
    let h = cut_on(lem_nn(a), g, &nn(a));
    fit_to(h, vec![ab], vec![not(a), nn(b)])
}

/// `~A |- A -> B`.
pub(crate) fn neg_to_imp(a: &Fm, b: &Fm) -> D {
    let d = neg_l(id(a), a);
    imp_r(fit_to(d, vec![not(a), a.clone()], vec![nn(b)]))
}

/// `~~B |- A -> B`.
pub(crate) fn nn_to_imp(a: &Fm, b: &Fm) -> D {
    imp_r(fit_to(id(&nn(b)), vec![nn(b), a.clone()], vec![nn(b)]))
}

/// `B |- A -> B`.
pub(crate) fn weak_imp(a: &Fm, b: &Fm) -> D {
    imp_r(fit_to(nn_intro(b), vec![b.clone(), a.clone()], vec![nn(b)]))
}

/// `B, A |- A & B`.
pub(crate) fn pair(a: &Fm, b: &Fm) -> D {
    let ctx = vec![b.clone(), a.clone()];
    and_r(
        fit_to(id(a), ctx.clone(), vec![a.clone()]),
        fit_to(id(b), ctx, vec![b.clone()]),
    )
}

/// `~(A & B) |- ~A, ~B`.
pub(crate) fn neg_and_l(a: &Fm, b: &Fm) -> D {
    let ab = Formula::and(a.clone(), b.clone());
    let y = neg_l(pair(a, b), &ab);
    let z = neg_r(y, b);
    let w = neg_r(z, a);
    cut_on(w, tri(b), &nn(&not(b)))
}

/// `~A |- ~(A & B)`.
pub(crate) fn neg_and_r1(a: &Fm, b: &Fm) -> D {
    let d = fit_to(neg_l(id(a), a), vec![a.clone(), not(a)], vec![]);
    neg_r(and_l2(d, b), &Formula::and(a.clone(), b.clone()))
}

/// `~B |- ~(A & B)`.
pub(crate) fn neg_and_r2(a: &Fm, b: &Fm) -> D {
    let d = fit_to(neg_l(id(b), b), vec![b.clone(), not(b)], vec![]);
    neg_r(and_l1(d, a), &Formula::and(a.clone(), b.clone()))
}

/// `~(A | B) |- ~A`.
pub(crate) fn neg_or_l1(a: &Fm, b: &Fm) -> D {
    neg_r(
        neg_l(or_r1(id(a), b), &Formula::or(a.clone(), b.clone())),
        a,
    )
}

/// `~(A | B) |- ~B`.
pub(crate) fn neg_or_l2(a: &Fm, b: &Fm) -> D {
    neg_r(
        neg_l(or_r2(id(b), a), &Formula::or(a.clone(), b.clone())),
        b,
    )
}

/// `~A, ~B |- ~(A | B)`.
pub(crate) fn neg_or_r(a: &Fm, b: &Fm) -> D {
    let l = fit_to(neg_l(id(a), a), vec![a.clone(), not(a), not(b)], vec![]);
    let r = fit_to(neg_l(id(b), b), vec![b.clone(), not(a), not(b)], vec![]);
    neg_r(or_l(l, r), &Formula::or(a.clone(), b.clone()))
}

/// `~(A -> B) |- ~~A`.
pub(crate) fn neg_imp_l1(a: &Fm, b: &Fm) -> D {
    neg_r(
        neg_l(neg_to_imp(a, b), &Formula::imp(a.clone(), b.clone())),
        &not(a),
    )
}

/// `~(A -> B) |- ~B`.
pub(crate) fn neg_imp_l2(a: &Fm, b: &Fm) -> D {
    neg_r(
        neg_l(weak_imp(a, b), &Formula::imp(a.clone(), b.clone())),
        b,
    )
}

/// `~~A, ~B |- ~(A -> B)`.
pub(crate) fn neg_imp_r(a: &Fm, b: &Fm) -> D {
    let c1 = neg_l(id(&not(a)), &not(a));
    let c2 = neg_l(id(&not(b)), &not(b));
    let d = cut_on(imp_split_l(a, b), c2, &nn(b));
    let d = cut_on(d, c1, &not(a));
    neg_r(d, &Formula::imp(a.clone(), b.clone()))
}

/// `~~(A & B) |- ~~A`.
pub(crate) fn nn_and_l1(a: &Fm, b: &Fm) -> D {
    nn_l(and_l2(id(a), b), &Formula::and(a.clone(), b.clone()))
}

/// `~~(A & B) |- ~~B`.
pub(crate) fn nn_and_l2(a: &Fm, b: &Fm) -> D {
    nn_l(and_l1(id(b), a), &Formula::and(a.clone(), b.clone()))
}

/// `~~A, ~~B |- ~~(A & B)`.
pub(crate) fn nn_and_r(a: &Fm, b: &Fm) -> D {
    let ab = Formula::and(a.clone(), b.clone());
    let d = nn_l(pair(a, b), a);
    let d = nn_l(d, b);
    cut_on(d, tri(&not(&ab)), &nn(&nn(&ab)))
}

/// `A | B |- A, B`.
pub(crate) fn or_split(a: &Fm, b: &Fm) -> D {
    let both = vec![a.clone(), b.clone()];
    or_l(
        fit_to(id(a), vec![a.clone()], both.clone()),
        fit_to(id(b), vec![b.clone()], both),
    )
}

/// `~~(A | B) |- ~~A, ~~B`.
pub(crate) fn nn_or_l(a: &Fm, b: &Fm) -> D {
    nn_l(or_split(a, b), &Formula::or(a.clone(), b.clone()))
}

/// `~~A |- ~~(A | B)`.
pub(crate) fn nn_or_r1(a: &Fm, b: &Fm) -> D {
    nn_l(or_r1(id(a), b), a)
}

/// `~~B |- ~~(A | B)`.
pub(crate) fn nn_or_r2(a: &Fm, b: &Fm) -> D {
    nn_l(or_r2(id(b), a), b)
}

/// `~~(A -> B) |- A -> B`.
pub(crate) fn nn_imp_l(a: &Fm, b: &Fm) -> D {
    let ab = Formula::imp(a.clone(), b.clone());
    if *b == Formula::Bot {
        return tri(a);
    }
    let d = nn_l(imp_split_l(a, b), &ab);
    let d = cut_on(d, tri(a), &nn(&not(a)));
    let d = cut_on(d, tri(&not(b)), &nn(&nn(b)));
    let d = cut_on(d, neg_to_imp(a, b), &not(a));
    let d = cut_on(d, nn_to_imp(a, b), &nn(b));
    fit_to(d, vec![nn(&ab)], vec![ab])
}

/// `|- ~_|_`.
pub(crate) fn verum_r() -> D {
    neg_r(bot_l(), &Formula::Bot)
}

/// `~~_|_ |-`.
pub(crate) fn nn_bot_l() -> D {
    neg_l(verum_r(), &not(&Formula::Bot))
}

/// `~~S |- S` for `S` in ST.
pub(crate) fn stab(s: &Fm) -> Option<D> {
    Some(match s {
        Formula::Atom(_) => return None,
        Formula::Bot => fit_to(nn_bot_l(), vec![nn(s)], vec![Formula::Bot]),
        Formula::Imp(a, b) => nn_imp_l(a, b),
        Formula::And(a, b) => {
            let l = cut_on(nn_and_l1(a, b), stab(a)?, &nn(a));
            let r = cut_on(nn_and_l2(a, b), stab(b)?, &nn(b));
            and_r(l, r)
        }
        Formula::Or(a, b) => {
            let d = cut_on(nn_or_l(a, b), stab(a)?, &nn(a));
            let d = cut_on(d, stab(b)?, &nn(b));
            let d = or_r2(
                fit_to(d, vec![nn(s)], vec![(**a).clone(), (**b).clone()]),
                a,
            );
            let d = or_r1(fit_to(d, vec![nn(s)], vec![s.clone(), (**a).clone()]), b);
            fit_to(d, vec![nn(s)], vec![s.clone()])
        }
    })
}

/// `|- ~S, S` for `S` in ST.
fn lem_st(s: &Fm) -> Option<D> {
    Some(cut_on(lem_nn(s), stab(s)?, &nn(s)))
}

/// Lemmas of the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    /// `A |- A`
    Identity,
    /// `A |- ~~A`
    DoubleNegIntro,
    /// `~~~A |- ~A`
    TripleNeg,
    /// `A -> B |- ~A | ~~B`
    ImpToDisj,
    /// `~A | ~~B |- A -> B`
    DisjToImp,
    /// `|- ~A | ~~A`
    WeakExcludedMiddle,
    /// `~~(A & B) |- ~~A & ~~B`
    NnAndOut,
    /// `~~A & ~~B |- ~~(A & B)`
    NnAndIn,
    /// `~~(A | B) |- ~~A | ~~B`
    NnOrOut,
    /// `~~(A -> B) |- A -> B`
    NnImp,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Identity,
        Lemma::DoubleNegIntro,
        Lemma::TripleNeg,
        Lemma::ImpToDisj,
        Lemma::DisjToImp,
        Lemma::WeakExcludedMiddle,
        Lemma::NnAndOut,
        Lemma::NnAndIn,
        Lemma::NnOrOut,
        Lemma::NnImp,
    ];
}

/// An instance of a library lemma for formulas `a` and `b` (`b` is unused
/// by one-formula lemmas).
pub fn lemma(which: Lemma, a: &Fm, b: &Fm) -> Derivation {
    let na_or_nnb = Formula::or(not(a), nn(b));
    match which {
        Lemma::Identity => id(a),
        Lemma::DoubleNegIntro => nn_intro(a),
        Lemma::TripleNeg => tri(a),
        Lemma::ImpToDisj => {
            let d = or_r2(imp_split_l(a, b), &not(a));
            let d = fit_to(
                d,
                vec![Formula::imp(a.clone(), b.clone())],
                vec![na_or_nnb.clone(), not(a)],
            );
            let d = or_r1(d, &nn(b));
            fit_to(d, vec![Formula::imp(a.clone(), b.clone())], vec![na_or_nnb])
        }
        Lemma::DisjToImp => or_l(neg_to_imp(a, b), nn_to_imp(a, b)),
        Lemma::WeakExcludedMiddle => {
            let d = or_r2(lem_nn(a), &not(a));
            let or = Formula::or(not(a), nn(a));
            let d = or_r1(fit_to(d, vec![], vec![or.clone(), not(a)]), &nn(a));
            fit_to(d, vec![], vec![or])
        }
        Lemma::NnAndOut => and_r(nn_and_l1(a, b), nn_and_l2(a, b)),
        Lemma::NnAndIn => {
            let d = nn_and_r(a, b);
            let conj = Formula::and(nn(a), nn(b));
            let d = and_l2(
                fit_to(
                    d,
                    vec![nn(a), nn(b)],
                    vec![nn(&Formula::and(a.clone(), b.clone()))],
                ),
                &nn(b),
            );
            let d = fit_to(
                d.clone(),
                vec![nn(b), conj.clone()],
                d.conclusion.succ.clone(),
            );
            let d = and_l1(d, &nn(a));
            let succ = d.conclusion.succ.clone();
            fit_to(d, vec![conj], succ)
        }
        Lemma::NnOrOut => {
            let d = or_r2(nn_or_l(a, b), &nn(a));
            let or = Formula::or(nn(a), nn(b));
            let ante = d.conclusion.ante.clone();
            let d = or_r1(fit_to(d, ante.clone(), vec![or.clone(), nn(a)]), &nn(b));
            fit_to(d, ante, vec![or])
        }
        Lemma::NnImp => nn_imp_l(a, b),
    }
}

/// Admissible rules, expanded into primitive derivations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Macro {
    /// `A, G |- D` to `~~A, G |- ~~D`.
    NnL,
    /// `G |- D, A` to `G |- D, ~~A`.
    NnR,
    /// `G |- D, A` and `S, P |- S'` to `G, A -> S, P |- D, S'`.
    ImpLStar,
    /// `G, S |- B, D` to `G |- S -> B, D`.
    ImpRStar,
}

impl Macro {
    pub const ALL: [Macro; 4] = [Macro::NnL, Macro::NnR, Macro::ImpLStar, Macro::ImpRStar];

    pub fn name(self) -> &'static str {
        match self {
            Macro::NnL => "nn-l",
            Macro::NnR => "nn-r",
            Macro::ImpLStar => "imp-l-star",
            Macro::ImpRStar => "imp-r-star",
        }
    }

    pub fn premise_count(self) -> usize {
        if self == Macro::ImpLStar {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Macro {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Macro {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Macro::ALL.into_iter().find(|m| m.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacroError {
    #[error("{name} takes {expected} premise(s), got {found}")]
    Arity {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{name}: premise `{found}` does not have the shape `{expected}`")]
    Shape {
        name: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("{name}: `{formula}` is not an ST formula")]
    NotSt { name: &'static str, formula: String },
}

/// Expands a macro applied to `premises`. The conclusion is determined by
/// the premises; the result checks whenever the premises do.
pub fn macro_derivation(m: Macro, premises: Vec<Derivation>) -> Result<Derivation, MacroError> {
    let name = m.name();
    if premises.len() != m.premise_count() {
        return Err(MacroError::Arity {
            name,
            expected: m.premise_count(),
            found: premises.len(),
        });
    }
    let shape = |expected: &'static str, p: &D| MacroError::Shape {
        name,
        expected,
        found: p.conclusion.to_string(),
    };
    let mut it = premises.into_iter();
    let p = it.next().unwrap();
    match m {
        Macro::NnL => {
            let Some(a) = p.conclusion.ante.first().cloned() else {
                return Err(shape("A, G |- D", &p));
            };
            let mut ante = p.conclusion.ante.clone();
            ante[0] = nn(&a);
            let succ = p.conclusion.succ.iter().map(nn).collect();
            Ok(fit_to(nn_l(p, &a), ante, succ))
        }
        Macro::NnR => {
            let Some(a) = p.conclusion.succ.last().cloned() else {
                return Err(shape("G |- D, A", &p));
            };
            let mut succ = p.conclusion.succ.clone();
            *succ.last_mut().unwrap() = nn(&a);
            let ante = p.conclusion.ante.clone();
            Ok(fit_to(nn_r(p, &a), ante, succ))
        }
        Macro::ImpLStar => {
            let q = it.next().unwrap();
            let Some(a) = p.conclusion.succ.last().cloned() else {
                return Err(shape("G |- D, A", &p));
            };
            let Some(s) = q.conclusion.ante.first().cloned() else {
                return Err(shape("S, P |- S'", &q));
            };
            let stable = stab(&s).ok_or_else(|| MacroError::NotSt {
                name,
                formula: s.to_string(),
            })?;
            let delta = p.conclusion.succ[..p.conclusion.succ.len() - 1].to_vec();
            let mut ante = p.conclusion.ante.clone();
            ante.push(Formula::imp(a, s.clone()));
            ante.extend_from_slice(&q.conclusion.ante[1..]);
            let succ = [&delta[..], &q.conclusion.succ[..]].concat();
            let e = imp_l(p, id(&s));
            let f = cut_on(e, stable, &nn(&s));
            Ok(fit_to(cut_on(f, q, &s), ante, succ))
        }
        Macro::ImpRStar => {
            let (Some(s), Some(b)) = (
                p.conclusion.ante.last().cloned(),
                p.conclusion.succ.first().cloned(),
            ) else {
                return Err(shape("G, S |- B, D", &p));
            };
            let lem = lem_st(&s).ok_or_else(|| MacroError::NotSt {
                name,
                formula: s.to_string(),
            })?;
            let gamma = p.conclusion.ante[..p.conclusion.ante.len() - 1].to_vec();
            let mut succ = vec![Formula::imp(s.clone(), b.clone())];
            succ.extend_from_slice(&p.conclusion.succ[1..]);
            let e = cut_on(lem, p, &s);
            let f = cut_on(e, neg_to_imp(&s, &b), &not(&s));
            let g = cut_on(f, weak_imp(&s, &b), &b);
            Ok(fit_to(g, gamma, succ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    fn sq(s: &str) -> Sequent {
        s.parse().unwrap()
    }

    fn assert_checks(d: &D, expected: &str) {
        if let Err(diags) = check_derivation(d) {
            panic!(
                "{}",
                diags
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            );
        }
        assert_eq!(d.conclusion, sq(expected));
    }

    const SAMPLES: [&str; 8] = [
        "p",
        "_|_",
        "~p",
        "p & q",
        "p | ~q",
        "p -> q",
        "~~(p -> r)",
        "(p -> q) & (r | ~s)",
    ];

    #[test]
    fn fit_rearranges() {
        let d = id(&f("p"));
        let e = fit(d, &sq("q, p, r |- s, p"));
        assert_checks(&e, "q, p, r |- s, p");
        let g = fit(e, &sq("p, r, q |- p, s"));
        assert_checks(&g, "p, r, q |- p, s");
        let h = fit(fit(id(&f("p")), &sq("p, p, p |- p, p")), &sq("q, p |- p"));
        assert_checks(&h, "q, p |- p");
    }

    #[test]
    fn one_formula_lemmas() {
        for a in SAMPLES {
            assert_checks(&id(&f(a)), &format!("{a} |- {a}"));
            let fa = f(a);
            assert_checks(&nn_intro(&fa), &format!("{fa} |- {}", nn(&fa)));
            assert_checks(&tri(&fa), &format!("{} |- {}", nn(&not(&fa)), not(&fa)));
            assert_checks(&lem_nn(&fa), &format!("|- {}, {}", not(&fa), nn(&fa)));
        }
        assert_checks(&verum_r(), "|- ~_|_");
        assert_checks(&nn_bot_l(), "~~_|_ |-");
    }

    #[test]
    fn two_formula_lemmas() {
        for a in SAMPLES {
            for b in ["q", "~r", "p | s", "q -> p"] {
                let (fa, fb) = (f(a), f(b));
                let conj = Formula::and(fa.clone(), fb.clone());
                let disj = Formula::or(fa.clone(), fb.clone());
                let imp = Formula::imp(fa.clone(), fb.clone());
                let cases: Vec<(D, Sequent)> = vec![
                    (
                        imp_split_l(&fa, &fb),
                        seq(vec![imp.clone()], vec![not(&fa), nn(&fb)]),
                    ),
                    (neg_to_imp(&fa, &fb), seq(vec![not(&fa)], vec![imp.clone()])),
                    (nn_to_imp(&fa, &fb), seq(vec![nn(&fb)], vec![imp.clone()])),
                    (weak_imp(&fa, &fb), seq(vec![fb.clone()], vec![imp.clone()])),
                    (
                        neg_and_l(&fa, &fb),
                        seq(vec![not(&conj)], vec![not(&fa), not(&fb)]),
                    ),
                    (neg_and_r1(&fa, &fb), seq(vec![not(&fa)], vec![not(&conj)])),
                    (neg_and_r2(&fa, &fb), seq(vec![not(&fb)], vec![not(&conj)])),
                    (neg_or_l1(&fa, &fb), seq(vec![not(&disj)], vec![not(&fa)])),
                    (neg_or_l2(&fa, &fb), seq(vec![not(&disj)], vec![not(&fb)])),
                    (
                        neg_or_r(&fa, &fb),
                        seq(vec![not(&fa), not(&fb)], vec![not(&disj)]),
                    ),
                    (neg_imp_l1(&fa, &fb), seq(vec![not(&imp)], vec![nn(&fa)])),
                    (neg_imp_l2(&fa, &fb), seq(vec![not(&imp)], vec![not(&fb)])),
                    (
                        neg_imp_r(&fa, &fb),
                        seq(vec![nn(&fa), not(&fb)], vec![not(&imp)]),
                    ),
                    (nn_and_l1(&fa, &fb), seq(vec![nn(&conj)], vec![nn(&fa)])),
                    (nn_and_l2(&fa, &fb), seq(vec![nn(&conj)], vec![nn(&fb)])),
                    (
                        nn_or_l(&fa, &fb),
                        seq(vec![nn(&disj)], vec![nn(&fa), nn(&fb)]),
                    ),
                    (nn_or_r1(&fa, &fb), seq(vec![nn(&fa)], vec![nn(&disj)])),
                    (nn_or_r2(&fa, &fb), seq(vec![nn(&fb)], vec![nn(&disj)])),
                    (nn_imp_l(&fa, &fb), seq(vec![nn(&imp)], vec![imp.clone()])),
                ];
                for (i, (d, want)) in cases.into_iter().enumerate() {
                    let got = d.conclusion.clone();
                    assert!(check_derivation(&d).is_ok(), "case {i} for {a}, {b}");
                    let mut g = (got.ante.clone(), got.succ.clone());
                    let mut w = (want.ante.clone(), want.succ.clone());
                    g.0.sort();
                    g.1.sort();
                    w.0.sort();
                    w.1.sort();
                    assert_eq!(g, w, "case {i} for {a}, {b}");
                }
                let nand = seq(vec![nn(&fa), nn(&fb)], vec![nn(&conj)]);
                let d = fit(nn_and_r(&fa, &fb), &nand);
                assert!(check_derivation(&d).is_ok());
            }
        }
    }

    #[test]
    fn stability_of_st_formulas() {
        for s in [
            "_|_",
            "~p",
            "p -> q",
            "~p & (q -> r)",
            "(p -> q) | ~~r",
            "_|_ | ~(p & q)",
        ] {
            let fs = f(s);
            assert_checks(&stab(&fs).unwrap(), &format!("{} |- {s}", nn(&fs)));
        }
        assert!(stab(&f("p & ~q")).is_none());
    }

    #[test]
    fn library_instances() {
        let (a, b) = (f("p"), f("q -> r"));
        let expected = [
            "p |- p",
            "p |- ~~p",
            "~~~p |- ~p",
            "p -> q -> r |- ~p | ~~(q -> r)",
            "~p | ~~(q -> r) |- p -> q -> r",
            "|- ~p | ~~p",
            "~~(p & (q -> r)) |- ~~p & ~~(q -> r)",
            "~~p & ~~(q -> r) |- ~~(p & (q -> r))",
            "~~(p | (q -> r)) |- ~~p | ~~(q -> r)",
            "~~(p -> q -> r) |- p -> q -> r",
        ];
        for (l, e) in Lemma::ALL.into_iter().zip(expected) {
            assert_checks(&lemma(l, &a, &b), e);
        }
    }

    #[test]
    fn macros() {
        let d = macro_derivation(Macro::NnR, vec![id(&f("p"))]).unwrap();
        assert_checks(&d, "p |- ~~p");
        let d = macro_derivation(Macro::NnL, vec![fit(id(&f("p")), &sq("p, q |- p"))]).unwrap();
        assert_checks(&d, "~~p, q |- ~~p");
        let prem = fit(id(&f("r")), &sq("p, r, ~q |- r"));
        let d = macro_derivation(Macro::ImpRStar, vec![prem]).unwrap();
        assert_checks(&d, "p, r |- ~q -> r");
        // An assumed premise `p, ~q |- r`: only the assumption fails to check.
        let assumed = Derivation::new(sq("p, ~q |- r"), Rule::Init, vec![]);
        let d = macro_derivation(Macro::ImpRStar, vec![assumed]).unwrap();
        assert_eq!(d.conclusion, sq("p |- ~q -> r"));
        let diags = check_derivation(&d).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].found.contains("p, ~q |- r"));
        let left = fit(id(&f("p")), &sq("p |- p"));
        let right = fit(id(&f("~q")), &sq("~q, r |- ~q"));
        let d = macro_derivation(Macro::ImpLStar, vec![left.clone(), right]).unwrap();
        assert_checks(&d, "p, p -> ~q, r |- ~q");
        let right = fit(id(&f("q")), &sq("q |- q"));
        assert!(matches!(
            macro_derivation(Macro::ImpLStar, vec![left, right]),
            Err(MacroError::NotSt { .. })
        ));
    }
}
