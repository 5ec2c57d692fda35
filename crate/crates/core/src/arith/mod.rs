//! Strict finitistic arithmetic: terms, equations, the canonical tree of
//! construction stages S_∞, finite arithmetic models, copy models and
//! faithful substitutions.

mod explore;
mod model;
mod nde;

use std::collections::{BTreeMap, BTreeSet};

use crate::kripke::KripkeModel;
use crate::syntax::{Formula, Var};

pub use explore::{
    classical, count_stages, forces_in_state, search_from, sinf_assertible, sinf_valid,
    ExploreError, Move, SInfinity, Stage, StageMove, StageState, Terms, DEFAULT_DEPTH, MAX_DEPTH,
};
pub use model::{
    contract_arith, copy_model, substitute, validate_arith_model, ArithError, ArithErrorKind,
    ArithModel, ContractArithError, RawArithModel,
};
pub use nde::{eval_nde, true_equations, Equation, Nde, Overflow, TermEnumeration};

/// Maps the variables assertible in `w` to distinct true equations, in
/// canonical order, and the others to `0=S(0)`.
pub fn faithful_substitution(w: &KripkeModel) -> BTreeMap<Var, Equation> {
    let mut fresh = true_equations();
    w.vars()
        .map(|p| {
            let q = if w.is_assertible(&Formula::Atom(p.clone())) {
                fresh.next().expect("infinitely many true equations")
            } else {
                Equation::falsum()
            };
            (p.clone(), q)
        })
        .collect()
}

/// An order embedding of a finite model into S_∞ respecting a
/// substitution: node names mapped to stage identifiers.
pub type Embedding = BTreeMap<String, String>;

/// A path of moves from the current state that learns exactly the
/// equations of `target` not yet learnt, constructing their terms first.
fn learn_path(terms: &mut Terms, state: &StageState, target: &BTreeSet<u32>) -> Vec<Move> {
    let mut st = state.clone();
    let mut path = Vec::new();
    for &q in target {
        if st.e.contains(&q) {
            continue;
        }
        let eq = terms.eq(q);
        for side in [&eq.lhs, &eq.rhs] {
            for x in side.subterms() {
                let id = terms.insert(x);
                if !st.m.contains(&id) {
                    st.apply(Move::Construct(id));
                    path.push(Move::Construct(id));
                }
            }
        }
        st.apply(Move::Learn(q));
        path.push(Move::Learn(q));
    }
    path
}

/// Follows moves from a state, returning the child positions taken.
fn positions(terms: &mut Terms, state: &mut StageState, path: &[Move]) -> Vec<usize> {
    let mut buf = Vec::new();
    path.iter()
        .map(|&mv| {
            terms.moves(&state.m, &state.e, &mut buf);
            let i = buf.iter().position(|&c| c == mv).expect("legal move");
            state.apply(mv);
            i
        })
        .collect()
}

fn path_id(positions: &[usize]) -> String {
    let mut id = String::from("t0");
    for i in positions {
        id.push_str(&format!("_{i}"));
    }
    id
}

/// Searches for an embedding of `w` into S_∞ within `depth` moves of the
/// root such that a node forces `p` iff its image has learnt `sigma(p)`.
/// Children of a node are separated by distinct first construction moves.
/// `None` means no embedding was found within the depth.
pub fn embed(w: &KripkeModel, sigma: &BTreeMap<Var, Equation>, depth: usize) -> Option<Embedding> {
    let assertible_false = sigma
        .iter()
        .any(|(p, q)| !q.is_true() && w.is_assertible(&Formula::Atom(p.clone())));
    if assertible_false {
        return None;
    }
    let mut terms = Terms::new();
    let ids: Vec<(Vec<bool>, u32)> = sigma
        .iter()
        .map(|(p, q)| (w.var_truth(p), terms.insert_eq(q)))
        .collect();
    let tree = w.tree();
    let mut images: Vec<Option<(StageState, Vec<usize>)>> = vec![None; tree.len()];
    let mut buf = Vec::new();
    for &k in tree.preorder() {
        let (mut state, mut pos) = match tree.parent(k) {
            None => (StageState::root(), Vec::new()),
            Some(p) => {
                let (mut state, mut pos) = images[p].clone().expect("parents come first");
                let sibling = tree
                    .children(p)
                    .iter()
                    .position(|&c| c == k)
                    .expect("child");
                terms.moves(&state.m, &state.e, &mut buf);
                let first = buf
                    .iter()
                    .filter(|mv| matches!(mv, Move::Construct(_)))
                    .nth(sibling)
                    .copied()?;
                pos.extend(positions(&mut terms, &mut state, &[first]));
                (state, pos)
            }
        };
        let target: BTreeSet<u32> = ids
            .iter()
            .filter(|(truth, _)| truth[k])
            .map(|&(_, q)| q)
            .collect();
        let path = learn_path(&mut terms, &state, &target);
        pos.extend(positions(&mut terms, &mut state, &path));
        if pos.len() > depth {
            return None;
        }
        images[k] = Some((state, pos));
    }
    Some(
        images
            .into_iter()
            .enumerate()
            .map(|(k, img)| {
                (
                    tree.name(k).to_owned(),
                    path_id(&img.expect("every node placed").1),
                )
            })
            .collect(),
    )
}

/// The state reached by following child positions from the root.
pub fn state_at(terms: &mut Terms, id: &str) -> Option<StageState> {
    let mut parts = id.split('_');
    if parts.next() != Some("t0") {
        return None;
    }
    let mut state = StageState::root();
    let mut buf = Vec::new();
    for p in parts {
        let i: usize = p.parse().ok()?;
        terms.moves(&state.m, &state.e, &mut buf);
        state.apply(*buf.get(i)?);
    }
    Some(state)
}

/// A sequence of moves from `state` that constructs `x`, using only moves
/// that build subterms of `x`, within `horizon` moves.
pub fn construct_from(
    terms: &mut Terms,
    state: &StageState,
    x: &Nde,
    horizon: usize,
) -> Option<Vec<Move>> {
    let goal = terms.insert(x);
    let wanted: BTreeSet<u32> = x.subterms().into_iter().map(|s| terms.insert(s)).collect();
    search_from(
        terms,
        state,
        horizon,
        &mut |_, mv| matches!(mv, Move::Construct(t) if wanted.contains(&t)),
        &mut |_, st| st.m.contains(&goal),
    )
}
