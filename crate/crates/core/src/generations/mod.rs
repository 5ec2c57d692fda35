//! Generation structures: trees of finite strict finitistic models under
//! the generation order, with generation forcing, and the translations
//! to and from intuitionistic models.

mod intuitionistic;
mod text;

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::algebra::Algebra;
use crate::kripke::{KripkeModel, ModelError, RawModel};
use crate::syntax::Var;
use crate::tree::{Tree, TreeError};
use crate::Fm;

pub use intuitionistic::{int_forces, IntuitionisticModel};
pub use text::RawGStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenErrorKind {
    #[error("member `{member}` is not a valid model: {error}")]
    MemberInvalid { member: String, error: ModelError },
    #[error("`{lower}` is not generation-below `{upper}`: {reason}")]
    NotGenerationOrdered {
        lower: String,
        upper: String,
        reason: String,
    },
    #[error("duplicate member `{0}`")]
    DuplicateMember(String),
    #[error("unknown member `{0}`")]
    UnknownMember(String),
    #[error("members do not form a tree: {reason} (at `{member}`)")]
    NotATree {
        reason: &'static str,
        member: String,
    },
    #[error("{0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct GenError {
    pub line: Option<usize>,
    pub kind: GenErrorKind,
}

impl std::fmt::Display for GenError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl From<GenErrorKind> for GenError {
    fn from(kind: GenErrorKind) -> Self {
        GenError { line: None, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown member `{0}`")]
    UnknownMember(String),
    #[error("node `{node}` is not in member `{member}`")]
    UnknownNode { member: String, node: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub name: String,
    pub model: KripkeModel,
}

/// A validated generation structure. Truth values are bit sets over all
/// (member, node) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GStructure {
    members: Vec<Member>,
    order: Tree,
    offset: Vec<usize>,
    pairs: usize,
    /// `lift[c][i]`: index in member `c` of node `i` of `c`'s parent.
    lift: Vec<Vec<usize>>,
}

fn not_ordered(lower: &str, upper: &str, reason: String) -> GenErrorKind {
    GenErrorKind::NotGenerationOrdered {
        lower: lower.to_owned(),
        upper: upper.to_owned(),
        reason,
    }
}

/// Checks the three clauses of `lower ⪯ upper`; returns the node map.
fn generation_edge(lower: &Member, upper: &Member) -> Result<Vec<usize>, GenErrorKind> {
    let (t1, t2) = (lower.model.tree(), upper.model.tree());
    let mut map = Vec::with_capacity(t1.len());
    for name in t1.names() {
        match t2.index_of(name) {
            Some(j) => map.push(j),
            None => {
                return Err(not_ordered(
                    &lower.name,
                    &upper.name,
                    format!("node `{name}` is missing from `{}`", upper.name),
                ))
            }
        }
    }
    for a in 0..t1.len() {
        for b in 0..t1.len() {
            if t1.leq(a, b) != t2.leq(map[a], map[b]) {
                return Err(not_ordered(
                    &lower.name,
                    &upper.name,
                    format!("order disagrees on `{}` and `{}`", t1.name(a), t1.name(b)),
                ));
            }
        }
    }
    for v in lower.model.vars() {
        let (s1, s2) = (lower.model.var_truth(v), upper.model.var_truth(v));
        if let Some(k) = (0..t1.len()).find(|&k| s1[k] && !s2[map[k]]) {
            return Err(not_ordered(
                &lower.name,
                &upper.name,
                format!("`{v}` at `{}` is not kept", t1.name(k)),
            ));
        }
    }
    Ok(map)
}

impl GStructure {
    /// Builds from members (first = root of the generation order) and
    /// parent/child generation edges.
    pub fn new(members: Vec<Member>, edges: &[(&str, &str)]) -> Result<Self, GenError> {
        let names: Vec<String> = members.iter().map(|m| m.name.clone()).collect();
        let edges: Vec<(String, String)> = edges
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let order = Tree::new(&names, &edges).map_err(tree_error)?;
        Self::with_order(members, order, &vec![None; names.len()])
    }

    fn with_order(
        members: Vec<Member>,
        order: Tree,
        edge_line: &[Option<usize>],
    ) -> Result<Self, GenError> {
        let mut lift = vec![Vec::new(); members.len()];
        for c in 1..members.len() {
            let p = order.parent(c).expect("non-root member has a parent");
            lift[c] = generation_edge(&members[p], &members[c]).map_err(|kind| GenError {
                line: edge_line[c],
                kind,
            })?;
        }
        let mut offset = Vec::with_capacity(members.len());
        let mut pairs = 0;
        for m in &members {
            offset.push(pairs);
            pairs += m.model.len();
        }
        Ok(GStructure {
            members,
            order,
            offset,
            pairs,
            lift,
        })
    }

    pub fn validate(raw: &RawGStructure) -> Result<Self, GenError> {
        raw.build()
    }

    pub fn from_text(text: &str) -> Result<Self, GenError> {
        RawGStructure::parse(text)?.build()
    }

    pub fn to_text(&self) -> String {
        text::write(self)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// The generation order as a tree over member indices.
    pub fn order(&self) -> &Tree {
        &self.order
    }

    pub fn member_index(&self, name: &str) -> Result<usize, LookupError> {
        self.order
            .index_of(name)
            .ok_or_else(|| LookupError::UnknownMember(name.to_owned()))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    pub fn pair(&self, member: usize, node: usize) -> usize {
        self.offset[member] + node
    }

    fn slice(&self, set: &FixedBitSet, m: usize) -> Vec<bool> {
        (0..self.members[m].model.len())
            .map(|i| set.contains(self.offset[m] + i))
            .collect()
    }

    /// Generation forcing at a named member and node.
    pub fn gen_forces(&self, member: &str, node: &str, f: &Fm) -> Result<bool, LookupError> {
        let m = self.member_index(member)?;
        let k = self.members[m]
            .model
            .node_index(node)
            .map_err(|_| LookupError::UnknownNode {
                member: member.to_owned(),
                node: node.to_owned(),
            })?;
        Ok(self.eval(f).contains(self.pair(m, k)))
    }

    /// Forced at every pair.
    pub fn is_valid(&self, f: &Fm) -> bool {
        self.eval(f).count_ones(..) == self.pairs
    }

    /// `I_G`: the member tree, with `W` forcing `p` iff some node of `W`
    /// does.
    pub fn induce_intuitionistic(&self) -> IntuitionisticModel {
        let mut vars: BTreeMap<Var, Vec<bool>> = BTreeMap::new();
        for (m, member) in self.members.iter().enumerate() {
            for v in member.model.vars() {
                let any = member.model.var_truth(v).iter().any(|&b| b);
                vars.entry(v.clone())
                    .or_insert_with(|| vec![false; self.members.len()])[m] = any;
            }
        }
        IntuitionisticModel::new(self.order.clone(), vars)
            .expect("valuation inclusion gives upward closure")
    }
}

fn tree_error(e: TreeError) -> GenError {
    let kind = match e {
        TreeError::DuplicateNode(n) => GenErrorKind::DuplicateMember(n),
        TreeError::UnknownNode(n) => GenErrorKind::UnknownMember(n),
        TreeError::NotATree { reason, node } => GenErrorKind::NotATree {
            reason,
            member: node,
        },
        TreeError::InvalidName(n) => GenErrorKind::Syntax(format!("invalid member name `{n}`")),
        TreeError::Empty => GenErrorKind::Syntax("no members".into()),
    };
    kind.into()
}

/// `G_I`: one chain model per world on its down-set, ordered as in `I`.
pub fn induce_gstructure(i: &IntuitionisticModel) -> GStructure {
    let tree = i.tree();
    let members = (0..tree.len())
        .map(|u| {
            let chain = tree.branch_to(u);
            let nodes: Vec<&str> = chain.iter().map(|&w| tree.name(w)).collect();
            let edges: Vec<(&str, &str)> = nodes.windows(2).map(|w| (w[0], w[1])).collect();
            let sets: Vec<(String, Vec<&str>)> = i
                .vars()
                .map(|v| {
                    let truth = i.var_truth(v);
                    let set = chain
                        .iter()
                        .filter(|&&w| truth[w])
                        .map(|&w| tree.name(w))
                        .collect();
                    (v.to_string(), set)
                })
                .collect();
            let val: Vec<(&str, &[&str])> = sets
                .iter()
                .map(|(v, s)| (v.as_str(), s.as_slice()))
                .collect();
            let model = KripkeModel::validate(&RawModel::from_parts(&nodes, &edges, &val))
                .expect("a chain topped by its only leaf is prevalent");
            Member {
                name: tree.name(u).to_owned(),
                model,
            }
        })
        .collect();
    GStructure::with_order(members, tree.clone(), &vec![None; tree.len()])
        .expect("down-set chains are generation ordered")
}

impl Algebra for GStructure {
    type Value = FixedBitSet;

    fn atom(&self, v: &Var) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.pairs);
        for (m, member) in self.members.iter().enumerate() {
            for (i, b) in member.model.var_truth(v).into_iter().enumerate() {
                set.set(self.offset[m] + i, b);
            }
        }
        set
    }

    fn bot(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.pairs)
    }

    fn and(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        a & b
    }

    fn or(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        a | b
    }

    fn imp(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        // Per member: no node above `k` forces `a` without `b` later on.
        let mut local: Vec<Vec<bool>> = (0..self.members.len())
            .map(|m| {
                let tree = self.members[m].model.tree();
                let later = tree.eventually(&self.slice(b, m));
                let fine: Vec<bool> = self
                    .slice(a, m)
                    .iter()
                    .zip(&later)
                    .map(|(x, y)| !x || *y)
                    .collect();
                tree.always(&fine)
            })
            .collect();
        // Then across all later generations.
        for &m in self.order.preorder().iter().rev() {
            for &c in self.order.children(m) {
                for i in 0..local[m].len() {
                    let up = local[c][self.lift[c][i]];
                    local[m][i] &= up;
                }
            }
        }
        let mut out = FixedBitSet::with_capacity(self.pairs);
        for (m, vals) in local.iter().enumerate() {
            for (i, &v) in vals.iter().enumerate() {
                out.set(self.offset[m] + i, v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    fn member(
        name: &str,
        nodes: &[&str],
        edges: &[(&str, &str)],
        val: &[(&str, &[&str])],
    ) -> Member {
        Member {
            name: name.into(),
            model: KripkeModel::build(nodes, edges, val).unwrap(),
        }
    }

    fn witness() -> GStructure {
        GStructure::new(
            vec![
                member("w1", &["r"], &[], &[("p", &[])]),
                member("w2", &["r", "k"], &[("r", "k")], &[("p", &["k"])]),
            ],
            &[("w1", "w2")],
        )
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        let single = GStructure::new(vec![member("w", &["r"], &[], &[])], &[]).unwrap();
        assert_eq!(single.members().len(), 1);
        let g = witness();
        assert_eq!(g.pair_count(), 3);
        let err = GStructure::new(
            vec![
                member("w1", &["r", "k"], &[("r", "k")], &[]),
                member("w2", &["r"], &[], &[]),
            ],
            &[("w1", "w2")],
        )
        .unwrap_err();
        assert!(
            matches!(err.kind, GenErrorKind::NotGenerationOrdered { .. }),
            "{err}"
        );
    }

    #[test]
    fn forcing_examples() {
        let g = witness();
        assert!(!g.gen_forces("w1", "r", &f("~p")).unwrap());
        assert!(g.gen_forces("w2", "r", &f("~~p")).unwrap());
        assert!(g.gen_forces("w3", "r", &f("p")).is_err());
        // Prevalence inside single members does not persist along the order.
        let m1 = &g.members()[0].model;
        let m2 = &g.members()[1].model;
        assert!(m1.is_prevalent(&f("~p")));
        assert!(m2.is_prevalent(&f("p")));
    }

    #[test]
    fn singleton_matches_kripke() {
        let w = KripkeModel::build(
            &["r", "a", "b"],
            &[("r", "a"), ("r", "b")],
            &[("p", &["a", "b"]), ("q", &["b"])],
        );
        assert!(w.is_err());
        let w = KripkeModel::build(
            &["r", "a", "b"],
            &[("r", "a"), ("a", "b")],
            &[("p", &["a", "b"]), ("q", &["b"])],
        )
        .unwrap();
        let g = GStructure::new(
            vec![Member {
                name: "w".into(),
                model: w.clone(),
            }],
            &[],
        )
        .unwrap();
        for s in ["p -> q", "~q", "~~q -> q", "(p -> q) | (q -> p)"] {
            let t = g.eval(&f(s));
            assert_eq!(
                (0..3).map(|i| t.contains(i)).collect::<Vec<_>>(),
                w.eval(&f(s))
            );
        }
    }

    #[test]
    fn induced_models() {
        let g = witness();
        let i = g.induce_intuitionistic();
        assert_eq!(i.var_truth(&Var::new("p").unwrap()), vec![false, true]);
        let back = induce_gstructure(&i);
        assert_eq!(back.members().len(), 2);
        assert_eq!(back.members()[0].model.len(), 1);
        assert_eq!(back.members()[1].model.len(), 2);
        let chain =
            IntuitionisticModel::build(&["R", "U"], &[("R", "U")], &[("p", &["U"])]).unwrap();
        let gi = induce_gstructure(&chain);
        assert!(chain.forces("U", &f("~~p")).unwrap());
        assert!(gi.gen_forces("U", "U", &f("~~p")).unwrap());
    }
}
