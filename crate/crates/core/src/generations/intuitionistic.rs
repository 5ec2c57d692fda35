//! Finite intuitionistic Kripke models on rooted trees.

use std::collections::BTreeMap;

use crate::algebra::Algebra;
use crate::kripke::{ModelError, RawModel, TreeModel, UnknownNode};
use crate::syntax::Var;
use crate::tree::{Implication, Tree};
use crate::Fm;

/// A finite rooted tree of worlds with an upward-closed valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntuitionisticModel(TreeModel);

impl IntuitionisticModel {
    pub fn new(tree: Tree, valuation: BTreeMap<Var, Vec<bool>>) -> Result<Self, ModelError> {
        TreeModel::new(tree, valuation)
            .map(IntuitionisticModel)
            .map_err(ModelError::from)
    }

    pub fn validate(raw: &RawModel) -> Result<Self, ModelError> {
        raw.build_tree_model().map(IntuitionisticModel)
    }

    pub fn from_text(text: &str) -> Result<Self, ModelError> {
        Self::validate(&RawModel::parse(text)?)
    }

    pub fn build(
        worlds: &[&str],
        edges: &[(&str, &str)],
        valuation: &[(&str, &[&str])],
    ) -> Result<Self, ModelError> {
        Self::validate(&RawModel::from_parts(worlds, edges, valuation))
    }

    pub fn as_tree_model(&self) -> &TreeModel {
        &self.0
    }

    pub fn tree(&self) -> &Tree {
        self.0.tree()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn world_index(&self, name: &str) -> Result<usize, UnknownNode> {
        self.0.node_index(name)
    }

    pub fn var_truth(&self, v: &Var) -> Vec<bool> {
        self.0.var_truth(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.vars()
    }

    pub fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// Truth of `f` at every world.
    pub fn eval(&self, f: &Fm) -> Vec<bool> {
        self.0.eval(f, Implication::Intuitionistic)
    }

    pub fn forces(&self, world: &str, f: &Fm) -> Result<bool, UnknownNode> {
        Ok(self.eval(f)[self.world_index(world)?])
    }
}

/// Intuitionistic forcing at a named world.
pub fn int_forces(i: &IntuitionisticModel, world: &str, f: &Fm) -> Result<bool, UnknownNode> {
    i.forces(world, f)
}

impl Algebra for IntuitionisticModel {
    type Value = Vec<bool>;

    fn atom(&self, v: &Var) -> Vec<bool> {
        self.var_truth(v)
    }

    fn bot(&self) -> Vec<bool> {
        vec![false; self.len()]
    }

    fn and(&self, a: &Vec<bool>, b: &Vec<bool>) -> Vec<bool> {
        a.iter().zip(b).map(|(x, y)| *x && *y).collect()
    }

    fn or(&self, a: &Vec<bool>, b: &Vec<bool>) -> Vec<bool> {
        a.iter().zip(b).map(|(x, y)| *x || *y).collect()
    }

    fn imp(&self, a: &Vec<bool>, b: &Vec<bool>) -> Vec<bool> {
        self.tree().implication(a, b, Implication::Intuitionistic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn forcing_examples() {
        let i = IntuitionisticModel::build(&["r", "t"], &[("r", "t")], &[("p", &["t"])]).unwrap();
        let f = |s: &str| parse_formula(s).unwrap();
        assert!(int_forces(&i, "r", &f("~~p")).unwrap());
        assert!(!int_forces(&i, "r", &f("p | ~p")).unwrap());
        assert!(int_forces(&i, "t", &f("p")).unwrap());
        for w in ["r", "t"] {
            assert!(int_forces(&i, w, &f("p -> p")).unwrap());
        }
        assert_eq!(i.eval(&f("~p -> q")), Algebra::eval(&i, &f("~p -> q")));
    }

    #[test]
    fn no_prevalence_requirement() {
        assert!(IntuitionisticModel::build(
            &["r", "a", "b"],
            &[("r", "a"), ("r", "b")],
            &[("p", &["a"])]
        )
        .is_ok());
        assert!(IntuitionisticModel::build(&["r", "a"], &[("r", "a")], &[("p", &["r"])]).is_err());
    }
}
