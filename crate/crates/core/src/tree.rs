//! Finite rooted trees with named nodes, and bottom-up forcing evaluation.
//!
//! Node 0 is the root. Every model type in the crate (strict finitistic,
//! intuitionistic, arithmetic) sits on one of these.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("not a tree: {reason} (at `{node}`)")]
    NotATree { reason: &'static str, node: String },
    #[error("invalid node identifier `{0}`")]
    InvalidName(String),
    #[error("empty node list")]
    Empty,
}

pub fn is_node_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    names: Vec<String>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    index: BTreeMap<String, usize>,
    /// Preorder from the root; reversed, it lists children before parents.
    preorder: Vec<usize>,
}

/// Which implication clause to evaluate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implication {
    /// `k |= A -> B` iff every `k' >= k` forcing `A` has some `k'' >= k'`
    /// forcing `B`.
    TimeGap,
    /// `k ||- A -> B` iff every `k' >= k` forcing `A` forces `B`.
    Intuitionistic,
}

impl Tree {
    /// Builds a tree from a node list (first = root) and parent/child edges.
    pub fn new<S: AsRef<str>>(nodes: &[S], edges: &[(S, S)]) -> Result<Self, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut index = BTreeMap::new();
        let mut names = Vec::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            let n = n.as_ref();
            if !is_node_name(n) {
                return Err(TreeError::InvalidName(n.to_owned()));
            }
            if index.insert(n.to_owned(), i).is_some() {
                return Err(TreeError::DuplicateNode(n.to_owned()));
            }
            names.push(n.to_owned());
        }
        let lookup = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| TreeError::UnknownNode(n.to_owned()))
        };
        let mut parent = vec![None; names.len()];
        for (p, c) in edges {
            let (p, c) = (lookup(p.as_ref())?, lookup(c.as_ref())?);
            if c == 0 {
                return Err(TreeError::NotATree {
                    reason: "the root has a parent",
                    node: names[0].clone(),
                });
            }
            if parent[c].is_some() {
                return Err(TreeError::NotATree {
                    reason: "node has two parents",
                    node: names[c].clone(),
                });
            }
            parent[c] = Some(p);
        }
        Self::from_parents(names, parent)
    }

    /// Builds a tree from a parent vector; `parent[0]` must be `None`.
    pub fn from_parents(names: Vec<String>, parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = names.len();
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(TreeError::DuplicateNode(name.clone()));
            }
        }
        let mut children = vec![Vec::new(); n];
        for (c, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(c),
                None if c != 0 => {
                    return Err(TreeError::NotATree {
                        reason: "node has no parent",
                        node: names[c].clone(),
                    })
                }
                None => {}
            }
        }
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![0];
        while let Some(k) = stack.pop() {
            preorder.push(k);
            stack.extend(children[k].iter().rev());
        }
        if preorder.len() != n {
            let mut seen = vec![false; n];
            for &k in &preorder {
                seen[k] = true;
            }
            let k = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(TreeError::NotATree {
                reason: "node is not reachable from the root",
                node: names[k].clone(),
            });
        }
        Ok(Tree {
            names,
            parent,
            children,
            index,
            preorder,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn parent(&self, k: usize) -> Option<usize> {
        self.parent[k]
    }

    pub fn children(&self, k: usize) -> &[usize] {
        &self.children[k]
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn is_leaf(&self, k: usize) -> bool {
        self.children[k].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.is_leaf(k))
    }

    /// `a <= b` in the tree order.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// All `k' >= k`, in preorder.
    pub fn up_set(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![k];
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(self.children[c].iter().rev());
        }
        out
    }

    /// The path from the root down to `k`.
    pub fn branch_to(&self, k: usize) -> Vec<usize> {
        let mut out = vec![k];
        let mut cur = self.parent[k];
        while let Some(c) = cur {
            out.push(c);
            cur = self.parent[c];
        }
        out.reverse();
        out
    }

    /// Marks every node that has some `k' >= k` in `set`.
    pub fn eventually(&self, set: &[bool]) -> Vec<bool> {
        let mut out = set.to_vec();
        for &k in self.preorder.iter().rev() {
            if let Some(p) = self.parent[k] {
                if out[k] {
                    out[p] = true;
                }
            }
        }
        out
    }

    /// Marks every node all of whose `k' >= k` are in `set`.
    pub fn always(&self, set: &[bool]) -> Vec<bool> {
        let mut out = set.to_vec();
        for &k in self.preorder.iter().rev() {
            if let Some(p) = self.parent[k] {
                if !out[k] {
                    out[p] = false;
                }
            }
        }
        out
    }

    /// Evaluates `f` at every node; `atom` gives the truth vector of an atom.
    pub fn eval<A>(
        &self,
        f: &Formula<A>,
        clause: Implication,
        atom: &mut impl FnMut(&A) -> Vec<bool>,
    ) -> Vec<bool> {
        match f {
            Formula::Atom(a) => atom(a),
            Formula::Bot => vec![false; self.len()],
            Formula::And(l, r) => {
                let (l, r) = (self.eval(l, clause, atom), self.eval(r, clause, atom));
                l.iter().zip(&r).map(|(a, b)| *a && *b).collect()
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.eval(l, clause, atom), self.eval(r, clause, atom));
                l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
            }
            Formula::Imp(l, r) => {
                let (l, r) = (self.eval(l, clause, atom), self.eval(r, clause, atom));
                self.implication(&l, &r, clause)
            }
        }
    }

    /// Combines truth vectors of antecedent and consequent.
    pub fn implication(&self, ante: &[bool], cons: &[bool], clause: Implication) -> Vec<bool> {
        let reach;
        let target = match clause {
            Implication::TimeGap => {
                reach = self.eventually(cons);
                &reach
            }
            Implication::Intuitionistic => cons,
        };
        let ok: Vec<bool> = ante.iter().zip(target).map(|(a, b)| !*a || *b).collect();
        self.always(&ok)
    }
}
