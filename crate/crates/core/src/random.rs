//! Seeded random formulas and structures for property checks.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::arith::{eval_nde, ArithModel, Equation, Nde};
use crate::generations::{GStructure, IntuitionisticModel, Member};
use crate::kripke::{KripkeModel, TreeModel};
use crate::syntax::{Formula, Var};
use crate::tree::Tree;
use crate::Fm;

/// Variables `p, q, r, s, ...` (then `p4, p5, ...`).
pub fn vars(n: usize) -> Vec<Var> {
    const NAMES: [&str; 4] = ["p", "q", "r", "s"];
    (0..n)
        .map(|i| match NAMES.get(i) {
            Some(s) => Var::new(s).unwrap(),
            None => Var::new(&format!("p{i}")).unwrap(),
        })
        .collect()
}

/// A formula of depth at most `depth`.
pub fn formula<R: Rng>(rng: &mut R, vars: &[Var], depth: usize) -> Fm {
    if depth == 0 || rng.gen_ratio(1, 5) {
        return if rng.gen_ratio(1, 12) {
            Formula::Bot
        } else {
            Formula::Atom(vars[rng.gen_range(0..vars.len())].clone())
        };
    }
    let sub = |rng: &mut R| formula(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::imp(sub(rng), sub(rng)),
    }
}

/// A random tree with between 1 and `max_nodes` nodes named by `name`.
fn tree<R: Rng>(rng: &mut R, max_nodes: usize, name: impl Fn(usize) -> String) -> Tree {
    let n = rng.gen_range(1..=max_nodes);
    let names = (0..n).map(name).collect();
    let parents = (0..n)
        .map(|i| (i > 0).then(|| rng.gen_range(0..i)))
        .collect();
    Tree::from_parents(names, parents).expect("random parents precede children")
}

/// The upward closure of a set.
fn up_close(tree: &Tree, set: &mut [bool]) {
    for &k in tree.preorder() {
        if let Some(p) = tree.parent(k) {
            set[k] |= set[p];
        }
    }
}

fn upward_set<R: Rng>(rng: &mut R, tree: &Tree, density: f64) -> Vec<bool> {
    let mut set: Vec<bool> = (0..tree.len()).map(|_| rng.gen_bool(density)).collect();
    up_close(tree, &mut set);
    set
}

/// Extends a nonempty upward-closed set to satisfy atomic prevalence.
fn make_prevalent(tree: &Tree, set: &mut [bool]) {
    if set.iter().any(|&b| b) {
        for l in tree.leaves() {
            set[l] = true;
        }
    }
}

fn prevalent_set<R: Rng>(rng: &mut R, tree: &Tree) -> Vec<bool> {
    if rng.gen_ratio(1, 5) {
        return vec![false; tree.len()];
    }
    let mut set = upward_set(rng, tree, 0.3);
    if rng.gen_bool(0.8) {
        for l in tree.leaves() {
            set[l] = true;
        }
    }
    make_prevalent(tree, &mut set);
    set
}

/// A strict finitistic model with at most `max_nodes` nodes.
pub fn model<R: Rng>(rng: &mut R, max_nodes: usize, vars: &[Var]) -> KripkeModel {
    let tree = tree(rng, max_nodes, |i| format!("k{i}"));
    let valuation = vars
        .iter()
        .map(|v| (v.clone(), prevalent_set(rng, &tree)))
        .collect();
    let m = TreeModel::new(tree, valuation).expect("upward closed");
    KripkeModel::from_tree_model(m).expect("prevalent")
}

/// An intuitionistic model with at most `max_worlds` worlds.
pub fn intuitionistic<R: Rng>(rng: &mut R, max_worlds: usize, vars: &[Var]) -> IntuitionisticModel {
    let tree = tree(rng, max_worlds, |i| format!("u{i}"));
    let valuation: BTreeMap<Var, Vec<bool>> = vars
        .iter()
        .map(|v| (v.clone(), upward_set(rng, &tree, 0.3)))
        .collect();
    IntuitionisticModel::new(tree, valuation).expect("upward closed")
}

/// A g-structure with at most `max_members` members of at most
/// `max_nodes` nodes. Later generations add leaves and verify more.
pub fn gstructure<R: Rng>(
    rng: &mut R,
    max_members: usize,
    max_nodes: usize,
    vars: &[Var],
) -> GStructure {
    let order = tree(rng, max_members, |i| format!("w{i}"));
    let mut fresh = 0usize;
    let mut members: Vec<Option<Member>> = vec![None; order.len()];
    for &m in order.preorder() {
        let (names, parents, old) = match order.parent(m) {
            None => {
                let t = tree(rng, max_nodes.min(3), |i| format!("n{i}"));
                fresh = t.len();
                let parents = (0..t.len()).map(|k| t.parent(k)).collect::<Vec<_>>();
                let empty: BTreeMap<Var, Vec<bool>> = BTreeMap::new();
                (t.names().to_vec(), parents, empty)
            }
            Some(p) => {
                let base = members[p]
                    .as_ref()
                    .expect("parent built first")
                    .model
                    .as_tree_model();
                let t = base.tree();
                let mut names = t.names().to_vec();
                let mut parents: Vec<Option<usize>> = (0..t.len()).map(|k| t.parent(k)).collect();
                let extra = rng.gen_range(0..=max_nodes.saturating_sub(t.len()).min(2));
                for _ in 0..extra {
                    parents.push(Some(rng.gen_range(0..names.len())));
                    names.push(format!("n{fresh}"));
                    fresh += 1;
                }
                let old = base
                    .valuation()
                    .iter()
                    .map(|(v, s)| {
                        let mut s = s.clone();
                        s.resize(names.len(), false);
                        (v.clone(), s)
                    })
                    .collect();
                (names, parents, old)
            }
        };
        let t = Tree::from_parents(names, parents).expect("leaves added to a tree");
        let valuation = vars
            .iter()
            .map(|v| {
                let mut set = old.get(v).cloned().unwrap_or_else(|| vec![false; t.len()]);
                let grow = if set.iter().any(|&b| b) { 0.3 } else { 0.15 };
                for (k, add) in upward_set(rng, &t, grow).into_iter().enumerate() {
                    set[k] |= add;
                }
                up_close(&t, &mut set);
                make_prevalent(&t, &mut set);
                (v.clone(), set)
            })
            .collect();
        let model =
            KripkeModel::from_tree_model(TreeModel::new(t, valuation).expect("upward closed"))
                .expect("prevalent");
        members[m] = Some(Member {
            name: order.name(m).to_owned(),
            model,
        });
    }
    let members: Vec<Member> = members
        .into_iter()
        .map(|m| m.expect("every member built"))
        .collect();
    let mut edges = Vec::new();
    for c in 1..order.len() {
        edges.push((order.name(order.parent(c).unwrap()), order.name(c)));
    }
    GStructure::new(members, &edges).expect("generated structures are ordered")
}

type Stage = (BTreeSet<Nde>, BTreeSet<Equation>);

fn true_pairs(m: &BTreeSet<Nde>, e: &BTreeSet<Equation>) -> Vec<Equation> {
    let vals: Vec<(&Nde, Option<u128>)> = m.iter().map(|x| (x, eval_nde(x).ok())).collect();
    let mut out = Vec::new();
    for (x, a) in &vals {
        for (y, b) in &vals {
            if a.is_some() && a == b {
                let q = Equation::new((*x).clone(), (*y).clone());
                if !e.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// One random transition: construct a fresh term or learn a true equation.
fn step<R: Rng>(rng: &mut R, (m, e): &Stage) -> Stage {
    let (mut m, mut e) = (m.clone(), e.clone());
    let learnable = true_pairs(&m, &e);
    if !learnable.is_empty() && rng.gen_bool(0.5) {
        e.insert(learnable[rng.gen_range(0..learnable.len())].clone());
        return (m, e);
    }
    let terms: Vec<&Nde> = m.iter().collect();
    loop {
        let x = terms[rng.gen_range(0..terms.len())].clone();
        let y = terms[rng.gen_range(0..terms.len())].clone();
        let t = match rng.gen_range(0..3) {
            0 => Nde::succ(x),
            1 => Nde::add(x, y),
            _ => Nde::mul(x, y),
        };
        if !m.contains(&t) {
            m.insert(t);
            return (m, e);
        }
    }
}

/// Extends `chain` (ending in `cur`) to construct `x` and its missing
/// subterms.
fn construct(cur: &mut Stage, x: &Nde, chain: &mut Vec<Stage>) {
    if cur.0.contains(x) {
        return;
    }
    for p in x.parts() {
        construct(cur, p, chain);
    }
    cur.0.insert(x.clone());
    chain.push(cur.clone());
}

/// A finite arithmetic model with a random canonical root, a random tree
/// of transitions of at most `max_stages` stages, and chains appended at
/// the leaves so that every learnt equation is prevalent.
pub fn arith_model<R: Rng>(rng: &mut R, root_moves: usize, max_stages: usize) -> ArithModel {
    let mut root: Stage = (BTreeSet::from([Nde::Zero]), BTreeSet::new());
    for _ in 0..rng.gen_range(0..=root_moves) {
        root = step(rng, &root);
    }
    let n = rng.gen_range(1..=max_stages);
    let mut stages = vec![root];
    let mut parents = vec![None];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        let s = step(rng, &stages[p]);
        stages.push(s);
        parents.push(Some(p));
    }
    let all: BTreeSet<Equation> = stages.iter().flat_map(|s| s.1.iter().cloned()).collect();
    let leaves: Vec<usize> = (0..n).filter(|&k| !parents.contains(&Some(k))).collect();
    for l in leaves {
        let mut chain: Vec<Stage> = Vec::new();
        let mut cur = stages[l].clone();
        for q in &all {
            if cur.1.contains(q) {
                continue;
            }
            construct(&mut cur, &q.lhs, &mut chain);
            construct(&mut cur, &q.rhs, &mut chain);
            cur.1.insert(q.clone());
            chain.push(cur.clone());
        }
        let mut at = l;
        for s in chain {
            stages.push(s);
            parents.push(Some(at));
            at = stages.len() - 1;
        }
    }
    let names = (0..stages.len()).map(|i| format!("t{i}")).collect();
    let tree = Tree::from_parents(names, parents).expect("parents precede children");
    let (m, e) = stages.into_iter().unzip();
    ArithModel::from_parts(tree, m, e).expect("random transitions form a model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_structures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vs = vars(3);
        for _ in 0..200 {
            let f = formula(&mut rng, &vs, 4);
            assert!(f.depth() <= 4);
            let m = model(&mut rng, 12, &vs);
            assert!(m.len() <= 12);
            let g = gstructure(&mut rng, 4, 6, &vs);
            assert!(g.members().len() <= 4);
            assert!(g.members().iter().all(|m| m.model.len() <= 6));
            intuitionistic(&mut rng, 5, &vs);
            arith_model(&mut rng, 3, 8);
        }
    }
}
