//! Finite strict finitistic Kripke models.
//!
//! A model is a finite rooted tree with an upward-closed valuation that
//! satisfies atomic prevalence: a variable forced anywhere is forced
//! above every node. Forcing uses the time-gapped implication clause.

mod text;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::Var;
use crate::tree::{Implication, Tree, TreeError};
use crate::Fm;

pub use text::{strip_comment, RawModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelErrorKind {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("not a tree: {reason} (at `{node}`)")]
    NotATree { reason: &'static str, node: String },
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("valuation of `{var}` is not upward closed: missing node `{node}`")]
    NotUpwardClosed { var: String, node: String },
    #[error("atomic prevalence fails for `{var}`: nothing above `{node}` forces it")]
    PrevalenceViolated { var: String, node: String },
    #[error("{0}")]
    Syntax(String),
}

/// A model validation error, with the input line when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ModelError {
    pub line: Option<usize>,
    pub kind: ModelErrorKind,
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl From<ModelErrorKind> for ModelError {
    fn from(kind: ModelErrorKind) -> Self {
        ModelError { line: None, kind }
    }
}

impl From<TreeError> for ModelErrorKind {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::DuplicateNode(n) => ModelErrorKind::DuplicateNode(n),
            TreeError::UnknownNode(n) => ModelErrorKind::UnknownNode(n),
            TreeError::NotATree { reason, node } => ModelErrorKind::NotATree { reason, node },
            TreeError::InvalidName(n) => ModelErrorKind::InvalidName(n),
            TreeError::Empty => ModelErrorKind::Syntax("empty node list".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown node `{0}`")]
pub struct UnknownNode(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("`{node}` is not a contraction node: `{var}` is assertible but not forced there")]
    NotAContractionNode { node: String, var: String },
    #[error(transparent)]
    UnknownNode(#[from] UnknownNode),
}

/// A finite rooted tree with a variable valuation, not yet checked for
/// atomic prevalence. Shared by strict finitistic and intuitionistic models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeModel {
    tree: Tree,
    valuation: BTreeMap<Var, Vec<bool>>,
}

impl TreeModel {
    /// Checks the tree shape and upward closure.
    pub fn new(tree: Tree, valuation: BTreeMap<Var, Vec<bool>>) -> Result<Self, ModelErrorKind> {
        for (var, set) in &valuation {
            assert_eq!(set.len(), tree.len(), "valuation vector length");
            for &k in tree.preorder() {
                if set[k] {
                    if let Some(&c) = tree.children(k).iter().find(|&&c| !set[c]) {
                        return Err(ModelErrorKind::NotUpwardClosed {
                            var: var.to_string(),
                            node: tree.name(c).to_owned(),
                        });
                    }
                }
            }
        }
        Ok(TreeModel { tree, valuation })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn root_name(&self) -> &str {
        self.tree.name(0)
    }

    /// Variables with an entry in the valuation (possibly empty).
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.valuation.keys()
    }

    pub fn valuation(&self) -> &BTreeMap<Var, Vec<bool>> {
        &self.valuation
    }

    /// Truth vector of a variable; absent variables are forced nowhere.
    pub fn var_truth(&self, v: &Var) -> Vec<bool> {
        self.valuation
            .get(v)
            .cloned()
            .unwrap_or_else(|| vec![false; self.len()])
    }

    pub fn node_index(&self, name: &str) -> Result<usize, UnknownNode> {
        self.tree
            .index_of(name)
            .ok_or_else(|| UnknownNode(name.to_owned()))
    }

    pub fn eval(&self, f: &Fm, clause: Implication) -> Vec<bool> {
        self.tree.eval(f, clause, &mut |v| self.var_truth(v))
    }

    /// The submodel on `{k' >= k}`.
    pub fn generated(&self, k: usize) -> TreeModel {
        let nodes = self.tree.up_set(k);
        let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let names = nodes
            .iter()
            .map(|&n| self.tree.name(n).to_owned())
            .collect();
        let parents = nodes
            .iter()
            .map(|&n| {
                if n == k {
                    None
                } else {
                    self.tree.parent(n).map(|p| pos[&p])
                }
            })
            .collect();
        let tree = Tree::from_parents(names, parents).expect("up-set of a tree is a tree");
        let valuation = self
            .valuation
            .iter()
            .map(|(v, set)| (v.clone(), nodes.iter().map(|&n| set[n]).collect()))
            .collect();
        TreeModel { tree, valuation }
    }

    /// Renders in the line-based model format.
    pub fn to_text(&self) -> String {
        text::write(self)
    }
}

/// A validated finite strict finitistic model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel(TreeModel);

/// Which semantic statuses a formula has in one model, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticProfile {
    pub valid: bool,
    pub assertible: bool,
    pub prevalent: bool,
    /// First node (in listing order) forcing the formula.
    pub forced_at: Option<String>,
    /// First node not forcing it; present iff not valid.
    pub refuted_at: Option<String>,
    /// A node with nothing above it forcing the formula; present iff not
    /// prevalent.
    pub unreachable_from: Option<String>,
}

impl KripkeModel {
    /// Validates a raw description: tree shape, upward closure, prevalence.
    pub fn validate(raw: &RawModel) -> Result<Self, ModelError> {
        let model = raw.build_tree_model()?;
        Self::from_tree_model(model).map_err(|kind| ModelError {
            line: raw.line_of_var(&kind),
            kind,
        })
    }

    /// Checks atomic prevalence on an upward-closed tree model.
    pub fn from_tree_model(model: TreeModel) -> Result<Self, ModelErrorKind> {
        for (var, set) in &model.valuation {
            if set.iter().any(|&b| b) {
                let reach = model.tree.eventually(set);
                if let Some(k) = reach.iter().position(|&b| !b) {
                    return Err(ModelErrorKind::PrevalenceViolated {
                        var: var.to_string(),
                        node: model.tree.name(k).to_owned(),
                    });
                }
            }
        }
        Ok(KripkeModel(model))
    }

    /// Builds a model from node names, parent/child edges and valuation
    /// sets given by node names.
    pub fn build(
        nodes: &[&str],
        edges: &[(&str, &str)],
        valuation: &[(&str, &[&str])],
    ) -> Result<Self, ModelError> {
        let raw = RawModel::from_parts(nodes, edges, valuation);
        Self::validate(&raw)
    }

    pub fn from_text(text: &str) -> Result<Self, ModelError> {
        Self::validate(&RawModel::parse(text)?)
    }

    pub fn as_tree_model(&self) -> &TreeModel {
        &self.0
    }

    pub fn tree(&self) -> &Tree {
        &self.0.tree
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn node_index(&self, name: &str) -> Result<usize, UnknownNode> {
        self.0.node_index(name)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.vars()
    }

    pub fn var_truth(&self, v: &Var) -> Vec<bool> {
        self.0.var_truth(v)
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// Truth of `f` at every node.
    pub fn eval(&self, f: &Fm) -> Vec<bool> {
        self.0.eval(f, Implication::TimeGap)
    }

    pub fn forces_at(&self, k: usize, f: &Fm) -> bool {
        self.eval(f)[k]
    }

    pub fn forces(&self, node: &str, f: &Fm) -> Result<bool, UnknownNode> {
        let k = self.node_index(node)?;
        Ok(self.forces_at(k, f))
    }

    pub fn is_valid(&self, f: &Fm) -> bool {
        self.eval(f)[0]
    }

    pub fn is_assertible(&self, f: &Fm) -> bool {
        self.eval(f).iter().any(|&b| b)
    }

    pub fn is_prevalent(&self, f: &Fm) -> bool {
        self.tree().eventually(&self.eval(f)).iter().all(|&b| b)
    }

    /// Validity, assertibility and prevalence of `f`.
    pub fn profile(&self, f: &Fm) -> SemanticProfile {
        let truth = self.eval(f);
        let reach = self.tree().eventually(&truth);
        let name = |k: usize| self.tree().name(k).to_owned();
        let valid = truth[0];
        debug_assert_eq!(valid, truth.iter().all(|&b| b), "persistence");
        let assertible = truth.iter().any(|&b| b);
        let prevalent = reach.iter().all(|&b| b);
        debug_assert!(!assertible || prevalent, "full prevalence");
        SemanticProfile {
            valid,
            assertible,
            prevalent,
            forced_at: truth.iter().position(|&b| b).map(name),
            refuted_at: truth.iter().position(|&b| !b).map(name),
            unreachable_from: reach.iter().position(|&b| !b).map(name),
        }
    }

    /// Consequence in this model: every node forcing all of `gamma` forces
    /// some member of `delta`. Returns the first violating node.
    pub fn consequence_violation(&self, gamma: &[Fm], delta: &[Fm]) -> Option<usize> {
        let mut lhs = vec![true; self.len()];
        for g in gamma {
            for (a, b) in lhs.iter_mut().zip(self.eval(g)) {
                *a &= b;
            }
        }
        let mut rhs = vec![false; self.len()];
        for d in delta {
            for (a, b) in rhs.iter_mut().zip(self.eval(d)) {
                *a |= b;
            }
        }
        (0..self.len()).find(|&k| lhs[k] && !rhs[k])
    }

    /// Nodes forcing every variable of `f` that is assertible in the model.
    pub fn contraction_nodes(&self, f: &Fm) -> BTreeSet<String> {
        (0..self.len())
            .filter(|&k| self.missing_for_contraction(f, k).is_none())
            .map(|k| self.tree().name(k).to_owned())
            .collect()
    }

    fn missing_for_contraction(&self, f: &Fm, k: usize) -> Option<Var> {
        f.atoms().into_iter().find(|v| {
            let set = self.var_truth(v);
            set.iter().any(|&b| b) && !set[k]
        })
    }

    /// The contraction model on `{root, k}` with the restricted valuation.
    pub fn contract(&self, f: &Fm, node: &str) -> Result<KripkeModel, ContractError> {
        let k = self.node_index(node)?;
        if let Some(var) = self.missing_for_contraction(f, k) {
            return Err(ContractError::NotAContractionNode {
                node: node.to_owned(),
                var: var.to_string(),
            });
        }
        let keep: Vec<usize> = if k == 0 { vec![0] } else { vec![0, k] };
        let names = keep
            .iter()
            .map(|&n| self.tree().name(n).to_owned())
            .collect();
        let parents = if k == 0 {
            vec![None]
        } else {
            vec![None, Some(0)]
        };
        let tree = Tree::from_parents(names, parents).expect("two-node tree");
        let valuation = self
            .0
            .valuation
            .iter()
            .map(|(v, set)| (v.clone(), keep.iter().map(|&n| set[n]).collect()))
            .collect();
        let model = TreeModel::new(tree, valuation).expect("restriction stays upward closed");
        Ok(KripkeModel::from_tree_model(model).expect("restriction stays prevalent"))
    }

    /// The submodel generated by `node`.
    pub fn generated_submodel(&self, node: &str) -> Result<KripkeModel, UnknownNode> {
        let k = self.node_index(node)?;
        let sub = self.0.generated(k);
        Ok(KripkeModel::from_tree_model(sub).expect("generated submodels stay prevalent"))
    }
}

/// Parses and validates a model description.
pub fn validate_model(raw: &RawModel) -> Result<KripkeModel, ModelError> {
    KripkeModel::validate(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    fn two(vp: &[&str]) -> KripkeModel {
        KripkeModel::build(&["r", "k"], &[("r", "k")], &[("p", vp)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(KripkeModel::build(&["r", "k"], &[("r", "k")], &[("p", &["k"])]).is_ok());
        let err = KripkeModel::build(&["r", "k"], &[("r", "k")], &[("p", &["r"])]).unwrap_err();
        assert_eq!(
            err.kind,
            ModelErrorKind::NotUpwardClosed {
                var: "p".into(),
                node: "k".into()
            }
        );
        let err = KripkeModel::build(
            &["r", "k1", "k2"],
            &[("r", "k1"), ("r", "k2")],
            &[("p", &["k1"])],
        )
        .unwrap_err();
        assert_eq!(
            err.kind,
            ModelErrorKind::PrevalenceViolated {
                var: "p".into(),
                node: "k2".into()
            }
        );
        let err = KripkeModel::build(&["r", "r"], &[], &[]).unwrap_err();
        assert_eq!(err.kind, ModelErrorKind::DuplicateNode("r".into()));
        assert!(KripkeModel::build(&["r"], &[], &[("p", &[])]).is_ok());
    }

    #[test]
    fn forcing_examples() {
        let w = two(&["k"]);
        assert!(w.forces("r", &f("~~p")).unwrap());
        assert!(!w.forces("r", &f("p")).unwrap());
        assert!(w.forces("x", &f("p")).is_err());
        let w = KripkeModel::build(
            &["r", "k"],
            &[("r", "k")],
            &[("p", &["r", "k"]), ("q", &["k"])],
        )
        .unwrap();
        assert!(w.forces("r", &f("p -> q")).unwrap());
    }

    #[test]
    fn profile_examples() {
        let w = two(&["k"]);
        let p = w.profile(&f("p"));
        assert!(!p.valid && p.assertible && p.prevalent);
        assert_eq!(p.forced_at.as_deref(), Some("k"));
        assert_eq!(p.refuted_at.as_deref(), Some("r"));
        let v = w.profile(&f("~_|_"));
        assert!(v.valid && v.assertible && v.prevalent);
        let lem = w.profile(&f("p | ~p"));
        assert!(!lem.valid && lem.assertible && lem.prevalent);
        let bot = w.profile(&f("_|_"));
        assert!(!bot.assertible && !bot.prevalent);
        assert_eq!(bot.unreachable_from.as_deref(), Some("r"));
    }

    #[test]
    fn contraction_examples() {
        let w = KripkeModel::build(
            &["r", "a", "b"],
            &[("r", "a"), ("a", "b")],
            &[("p", &["a", "b"])],
        )
        .unwrap();
        let p = f("p");
        assert_eq!(
            w.contraction_nodes(&p).into_iter().collect::<Vec<_>>(),
            vec!["a".to_string(), "b".to_string()]
        );
        let c = w.contract(&p, "b").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.var_truth(&Var::new("p").unwrap()), vec![false, true]);
        assert_eq!(c.is_valid(&p), w.is_valid(&p));
        assert_eq!(c.forces("b", &p).unwrap(), w.is_assertible(&p));
        assert!(matches!(
            w.contract(&p, "r"),
            Err(ContractError::NotAContractionNode { .. })
        ));
    }

    #[test]
    fn generated_submodel_examples() {
        let w = KripkeModel::build(
            &["r", "a", "b"],
            &[("r", "a"), ("a", "b")],
            &[("p", &["b"])],
        )
        .unwrap();
        assert_eq!(w.generated_submodel("r").unwrap(), w);
        let s = w.generated_submodel("a").unwrap();
        assert_eq!(s.tree().names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(s.var_truth(&Var::new("p").unwrap()), vec![false, true]);
        let np = f("~p");
        assert_eq!(w.forces("a", &np).unwrap(), s.forces("a", &np).unwrap());
    }
}
