//! The line-based model format.
//!
//! ```text
//! nodes: r k1 k2
//! edge: r k1
//! edge: r k2
//! val: p k1 k2
//! ```

use std::collections::BTreeMap;

use super::{ModelError, ModelErrorKind, TreeModel};
use crate::syntax::Var;
use crate::tree::{is_node_name, Tree, TreeError};

/// An unvalidated model description with source line numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawModel {
    pub nodes: Vec<String>,
    pub nodes_line: Option<usize>,
    pub edges: Vec<(String, String, Option<usize>)>,
    pub vals: Vec<(String, Vec<String>, Option<usize>)>,
}

fn err(line: Option<usize>, kind: ModelErrorKind) -> ModelError {
    ModelError { line, kind }
}

/// Strips a `#` comment and surrounding blanks.
pub fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

impl RawModel {
    pub fn from_parts(
        nodes: &[&str],
        edges: &[(&str, &str)],
        valuation: &[(&str, &[&str])],
    ) -> Self {
        RawModel {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            nodes_line: None,
            edges: edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string(), None))
                .collect(),
            vals: valuation
                .iter()
                .map(|(v, ns)| {
                    (
                        v.to_string(),
                        ns.iter().map(|s| s.to_string()).collect(),
                        None,
                    )
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut raw = RawModel::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = strip_comment(line);
            if body.is_empty() {
                continue;
            }
            if !raw.parse_line(line_no, body)? {
                return Err(err(
                    Some(line_no),
                    ModelErrorKind::Syntax(format!("unrecognised line `{body}`")),
                ));
            }
        }
        Ok(raw)
    }

    /// Consumes one comment-free, non-blank line. Returns `false` if the
    /// line has an unknown keyword.
    pub(crate) fn parse_line(&mut self, line_no: usize, body: &str) -> Result<bool, ModelError> {
        let Some((key, rest)) = body.split_once(':') else {
            return Ok(false);
        };
        let words: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
        let line = Some(line_no);
        match key.trim() {
            "nodes" => {
                if self.nodes_line.is_some() {
                    return Err(err(
                        line,
                        ModelErrorKind::Syntax("second `nodes:` line".into()),
                    ));
                }
                self.nodes = words;
                self.nodes_line = line;
            }
            "edge" => {
                let [a, b]: [String; 2] = words.try_into().map_err(|_| {
                    err(
                        line,
                        ModelErrorKind::Syntax("`edge:` takes a parent and a child".into()),
                    )
                })?;
                self.edges.push((a, b, line));
            }
            "val" => {
                let mut it = words.into_iter();
                let var = it.next().ok_or_else(|| {
                    err(
                        line,
                        ModelErrorKind::Syntax("`val:` needs a variable".into()),
                    )
                })?;
                self.vals.push((var, it.collect(), line));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub(crate) fn line_of_var(&self, kind: &ModelErrorKind) -> Option<usize> {
        let var = match kind {
            ModelErrorKind::NotUpwardClosed { var, .. }
            | ModelErrorKind::PrevalenceViolated { var, .. } => var,
            _ => return None,
        };
        self.vals
            .iter()
            .find(|(v, _, _)| v == var)
            .and_then(|x| x.2)
    }

    /// Checks the tree and upward closure, but not prevalence.
    pub fn build_tree_model(&self) -> Result<TreeModel, ModelError> {
        if self.nodes.is_empty() {
            return Err(err(
                self.nodes_line,
                ModelErrorKind::Syntax("missing or empty `nodes:` line".into()),
            ));
        }
        let mut index = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !is_node_name(n) {
                return Err(err(self.nodes_line, ModelErrorKind::InvalidName(n.clone())));
            }
            if index.insert(n.as_str(), i).is_some() {
                return Err(err(
                    self.nodes_line,
                    ModelErrorKind::DuplicateNode(n.clone()),
                ));
            }
        }
        let lookup = |n: &str, line| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| err(line, ModelErrorKind::UnknownNode(n.to_owned())))
        };
        let mut parent = vec![None; self.nodes.len()];
        let mut edge_line = vec![None; self.nodes.len()];
        for (p, c, line) in &self.edges {
            let (p, c) = (lookup(p, *line)?, lookup(c, *line)?);
            let not_tree = |reason| {
                err(
                    *line,
                    ModelErrorKind::NotATree {
                        reason,
                        node: self.nodes[c].clone(),
                    },
                )
            };
            if c == 0 {
                return Err(not_tree("the root has a parent"));
            }
            if parent[c].is_some() {
                return Err(not_tree("node has two parents"));
            }
            parent[c] = Some(p);
            edge_line[c] = *line;
        }
        let tree = Tree::from_parents(self.nodes.clone(), parent).map_err(|e| {
            let line = match &e {
                TreeError::NotATree { node, .. } => {
                    index.get(node.as_str()).and_then(|&k| edge_line[k])
                }
                _ => None,
            };
            err(line.or(self.nodes_line), e.into())
        })?;
        let mut valuation: BTreeMap<Var, Vec<bool>> = BTreeMap::new();
        let mut var_line = BTreeMap::new();
        for (v, ns, line) in &self.vals {
            let var =
                Var::new(v).map_err(|_| err(*line, ModelErrorKind::InvalidName(v.clone())))?;
            let set = valuation
                .entry(var.clone())
                .or_insert_with(|| vec![false; self.nodes.len()]);
            for n in ns {
                set[lookup(n, *line)?] = true;
            }
            var_line.entry(var).or_insert(*line);
        }
        TreeModel::new(tree, valuation).map_err(|kind| {
            let line = match &kind {
                ModelErrorKind::NotUpwardClosed { var, .. } => Var::new(var)
                    .ok()
                    .and_then(|v| var_line.get(&v).copied().flatten()),
                _ => None,
            };
            err(line, kind)
        })
    }
}

pub(super) fn write(model: &TreeModel) -> String {
    let tree = model.tree();
    let mut out = format!("nodes: {}\n", tree.names().join(" "));
    for &k in tree.preorder() {
        for &c in tree.children(k) {
            out.push_str(&format!("edge: {} {}\n", tree.name(k), tree.name(c)));
        }
    }
    for (v, set) in model.valuation() {
        out.push_str(&format!("val: {v}"));
        for (k, &b) in set.iter().enumerate() {
            if b {
                out.push(' ');
                out.push_str(tree.name(k));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::KripkeModel;
    use super::*;

    #[test]
    fn parse_and_write_round_trip() {
        let text = "# a model\nnodes: r k1 k2   # root first\nedge: r k1\nedge: r k2\nval: p k1 k2\nval: q\n";
        let w = KripkeModel::from_text(text).unwrap();
        assert_eq!(w.len(), 3);
        let again = KripkeModel::from_text(&w.to_text()).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn errors_carry_lines() {
        let e = KripkeModel::from_text("nodes: r k\nedge: r k\nval: p r\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(matches!(e.kind, ModelErrorKind::NotUpwardClosed { .. }));
        let e = KripkeModel::from_text("nodes: r k\nedge: r x\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.kind, ModelErrorKind::UnknownNode("x".into()));
        let e = KripkeModel::from_text("nodes: r a b\nedge: r a\nedge: b b\n").unwrap_err();
        assert!(matches!(e.kind, ModelErrorKind::NotATree { .. }));
        let e = KripkeModel::from_text("nodes: r\nbogus line\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = KripkeModel::from_text("nodes: r r\n").unwrap_err();
        assert_eq!(e.kind, ModelErrorKind::DuplicateNode("r".into()));
    }
}
