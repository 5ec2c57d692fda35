//! A signed tableau for intuitionistic propositional logic.
//!
//! A world is a pair of sets of signed subformulas. True formulas persist
//! into new worlds and false ones do not, so every new world strictly
//! enlarges the true set and the search terminates. Open branches read
//! off as finite tree countermodels.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::decide::BudgetExceeded;
use crate::generations::IntuitionisticModel;
use crate::syntax::{Formula, Var};
use crate::tree::Tree;
use crate::Fm;

pub const DEFAULT_IPC_VAR_BUDGET: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpcResult {
    Provable,
    /// A countermodel whose root does not force the formula.
    Refuted(IntuitionisticModel),
}

impl IpcResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, IpcResult::Provable)
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Atom(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

struct Table {
    nodes: Vec<Node>,
    vars: Vec<Var>,
}

impl Table {
    fn new(a: &Fm) -> (Table, usize) {
        let mut t = Table {
            nodes: Vec::new(),
            vars: a.atoms().into_iter().collect(),
        };
        let mut seen = BTreeMap::new();
        let root = t.intern(a, &mut seen);
        (t, root)
    }

    fn intern<'a>(&mut self, a: &'a Fm, seen: &mut BTreeMap<&'a Fm, usize>) -> usize {
        if let Some(&i) = seen.get(a) {
            return i;
        }
        let node = match a {
            Formula::Atom(v) => Node::Atom(self.vars.binary_search(v).expect("variable in scope")),
            Formula::Bot => Node::Bot,
            Formula::And(x, y) => Node::And(self.intern(x, seen), self.intern(y, seen)),
            Formula::Or(x, y) => Node::Or(self.intern(x, seen), self.intern(y, seen)),
            Formula::Imp(x, y) => Node::Imp(self.intern(x, seen), self.intern(y, seen)),
        };
        self.nodes.push(node);
        seen.insert(a, self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}

/// A countermodel world: the true atoms and the worlds above it.
struct World {
    atoms: Vec<usize>,
    children: Vec<World>,
}

#[derive(Clone)]
struct Signed {
    t: FixedBitSet,
    f: FixedBitSet,
}

enum Expand {
    Closed,
    Branch(Signed, Signed),
    Saturated(Signed),
}

impl Table {
    /// Applies local rules until saturation or the first branching rule.
    fn expand(&self, mut s: Signed) -> Expand {
        loop {
            if self.closed(&s) {
                return Expand::Closed;
            }
            let mut changed = false;
            for i in s.t.ones().collect::<Vec<_>>() {
                match self.nodes[i] {
                    Node::And(a, b) => {
                        if !s.t.contains(a) || !s.t.contains(b) {
                            s.t.insert(a);
                            s.t.insert(b);
                            changed = true;
                        }
                    }
                    Node::Or(a, b) if !s.t.contains(a) && !s.t.contains(b) => {
                        let mut l = s.clone();
                        l.t.insert(a);
                        s.t.insert(b);
                        return Expand::Branch(l, s);
                    }
                    Node::Imp(a, b) if !s.f.contains(a) && !s.t.contains(b) => {
                        if s.t.contains(a) {
                            s.t.insert(b);
                            changed = true;
                        } else {
                            let mut l = s.clone();
                            l.f.insert(a);
                            s.t.insert(b);
                            return Expand::Branch(l, s);
                        }
                    }
                    _ => {}
                }
            }
            for i in s.f.ones().collect::<Vec<_>>() {
                match self.nodes[i] {
                    Node::Or(a, b) => {
                        if !s.f.contains(a) || !s.f.contains(b) {
                            s.f.insert(a);
                            s.f.insert(b);
                            changed = true;
                        }
                    }
                    Node::And(a, b) if !s.f.contains(a) && !s.f.contains(b) => {
                        let mut l = s.clone();
                        l.f.insert(a);
                        s.f.insert(b);
                        return Expand::Branch(l, s);
                    }
                    Node::Imp(a, b) if s.t.contains(a) && !s.f.contains(b) => {
                        s.f.insert(b);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Expand::Saturated(s);
            }
        }
    }

    fn closed(&self, s: &Signed) -> bool {
        s.t.ones().any(|i| matches!(self.nodes[i], Node::Bot)) || !s.t.is_disjoint(&s.f)
    }

    /// A countermodel for the signed set, if one exists.
    fn refute(&self, s: Signed) -> Option<World> {
        match self.expand(s) {
            Expand::Closed => None,
            Expand::Branch(l, r) => self.refute(l).or_else(|| self.refute(r)),
            Expand::Saturated(s) => {
                let mut children = Vec::new();
                for i in s.f.ones() {
                    if let Node::Imp(a, b) = self.nodes[i] {
                        if !s.t.contains(a) {
                            let mut t = s.t.clone();
                            t.insert(a);
                            let mut f = FixedBitSet::with_capacity(self.nodes.len());
                            f.insert(b);
                            children.push(self.refute(Signed { t, f })?);
                        }
                    }
                }
                let atoms =
                    s.t.ones()
                        .filter_map(|i| match self.nodes[i] {
                            Node::Atom(v) => Some(v),
                            _ => None,
                        })
                        .collect();
                Some(World { atoms, children })
            }
        }
    }

    fn model(&self, root: World) -> IntuitionisticModel {
        let mut names = Vec::new();
        let mut parents = Vec::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut stack = vec![(root, None)];
        while let Some((w, parent)) = stack.pop() {
            let id = names.len();
            names.push(format!("w{id}"));
            parents.push(parent);
            sets.push(w.atoms);
            for c in w.children.into_iter().rev() {
                stack.push((c, Some(id)));
            }
        }
        let mut valuation: BTreeMap<Var, Vec<bool>> = self
            .vars
            .iter()
            .map(|v| (v.clone(), vec![false; names.len()]))
            .collect();
        for (w, atoms) in sets.iter().enumerate() {
            for &a in atoms {
                valuation.get_mut(&self.vars[a]).expect("known variable")[w] = true;
            }
        }
        let tree = Tree::from_parents(names, parents).expect("search tree");
        IntuitionisticModel::new(tree, valuation).expect("true sets persist upwards")
    }
}

/// Decides intuitionistic validity.
pub fn ipc_prove(a: &Fm, budget: usize) -> Result<IpcResult, BudgetExceeded> {
    let n = a.atoms().len();
    if n > budget {
        return Err(BudgetExceeded { vars: n, budget });
    }
    let (table, root) = Table::new(a);
    let mut f = FixedBitSet::with_capacity(table.nodes.len());
    f.insert(root);
    let start = Signed {
        t: FixedBitSet::with_capacity(table.nodes.len()),
        f,
    };
    Ok(match table.refute(start) {
        None => IpcResult::Provable,
        Some(w) => {
            let model = table.model(w);
            assert!(!model.eval(a)[0], "countermodel re-check");
            IpcResult::Refuted(model)
        }
    })
}
