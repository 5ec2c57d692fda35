//! Finite models of arithmetic: trees of stages labelled with
//! constructed terms and learnt equations.
//!
//! ```text
//! stages: t0 t1
//! edge: t0 t1
//! m: t1 0
//! e: t1 0=0
//! ```
//!
//! `m:` and `e:` lines give full sets; a stage without an `m:` line has
//! constructed only `0`, and one without an `e:` line has learnt nothing.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::explore::{SInfinity, Stage};
use super::nde::{Equation, Nde};
use crate::kripke::{strip_comment, KripkeModel, TreeModel};
use crate::syntax::{Formula, Var};
use crate::tree::{is_node_name, Implication, Tree, TreeError};
use crate::ClFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithErrorKind {
    #[error("root stage `{stage}` is not a stage of S_inf: {reason}")]
    BadRoot { stage: String, reason: String },
    #[error("edge `{parent}` -> `{child}` is not one transition: {reason}")]
    BadTransition {
        parent: String,
        child: String,
        reason: String,
    },
    #[error("false equation `{eq}` learnt at `{stage}`")]
    FalseEquation { eq: String, stage: String },
    #[error("atomic prevalence fails for `{eq}`: nothing above `{stage}` learns it")]
    PrevalenceViolated { eq: String, stage: String },
    #[error("duplicate stage `{0}`")]
    DuplicateStage(String),
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error("not a tree: {reason} (at `{stage}`)")]
    NotATree { reason: &'static str, stage: String },
    #[error("{0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ArithError {
    pub line: Option<usize>,
    pub kind: ArithErrorKind,
}

impl std::fmt::Display for ArithError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

fn err(line: Option<usize>, kind: ArithErrorKind) -> ArithError {
    ArithError { line, kind }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractArithError {
    #[error("`{stage}` is not a contraction stage: true equation `{eq}` is not learnt there")]
    NotAContractionStage { stage: String, eq: String },
}

/// A validated finite model of arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithModel {
    tree: Tree,
    m: Vec<BTreeSet<Nde>>,
    e: Vec<BTreeSet<Equation>>,
}

/// An unvalidated model description with source lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawArithModel {
    pub stages: Vec<String>,
    pub stages_line: Option<usize>,
    pub edges: Vec<(String, String, Option<usize>)>,
    pub m: Vec<(String, Vec<Nde>, Option<usize>)>,
    pub e: Vec<(String, Vec<Equation>, Option<usize>)>,
}

impl RawArithModel {
    pub fn parse(text: &str) -> Result<Self, ArithError> {
        let mut raw = RawArithModel::default();
        for (i, source) in text.lines().enumerate() {
            let line = Some(i + 1);
            let body = strip_comment(source);
            if body.is_empty() {
                continue;
            }
            let syntax = |msg: String| err(line, ArithErrorKind::Syntax(msg));
            let (key, rest) = body
                .split_once(':')
                .ok_or_else(|| syntax(format!("unrecognised line `{body}`")))?;
            let words: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "stages" => {
                    raw.stages = words.iter().map(|s| s.to_string()).collect();
                    raw.stages_line = line;
                }
                "edge" => {
                    let [a, b] = words[..] else {
                        return Err(syntax("`edge:` takes a parent and a child".into()));
                    };
                    raw.edges.push((a.into(), b.into(), line));
                }
                "m" | "e" => {
                    let Some((stage, items)) = words.split_first() else {
                        return Err(syntax(format!("`{}:` needs a stage", key.trim())));
                    };
                    if key.trim() == "m" {
                        let terms = items
                            .iter()
                            .map(|w| {
                                w.parse::<Nde>()
                                    .map_err(|e| syntax(format!("bad term `{w}`: {e}")))
                            })
                            .collect::<Result<_, _>>()?;
                        raw.m.push((stage.to_string(), terms, line));
                    } else {
                        let eqs = items
                            .iter()
                            .map(|w| {
                                w.parse::<Equation>()
                                    .map_err(|e| syntax(format!("bad equation `{w}`: {e}")))
                            })
                            .collect::<Result<_, _>>()?;
                        raw.e.push((stage.to_string(), eqs, line));
                    }
                }
                _ => return Err(syntax(format!("unrecognised line `{body}`"))),
            }
        }
        Ok(raw)
    }
}

fn tree_kind(e: TreeError) -> ArithErrorKind {
    match e {
        TreeError::DuplicateNode(n) => ArithErrorKind::DuplicateStage(n),
        TreeError::UnknownNode(n) => ArithErrorKind::UnknownStage(n),
        TreeError::NotATree { reason, node } => ArithErrorKind::NotATree {
            reason,
            stage: node,
        },
        TreeError::InvalidName(n) => {
            ArithErrorKind::Syntax(format!("invalid stage identifier `{n}`"))
        }
        TreeError::Empty => ArithErrorKind::Syntax("missing or empty `stages:` line".into()),
    }
}

fn describe(x: &impl std::fmt::Display) -> String {
    format!("`{x}`")
}

/// Checks one edge; `None` if it is a single legal transition.
fn transition_error(
    (m1, e1): (&BTreeSet<Nde>, &BTreeSet<Equation>),
    (m2, e2): (&BTreeSet<Nde>, &BTreeSet<Equation>),
) -> Option<String> {
    if !m1.is_subset(m2) || !e1.is_subset(e2) {
        return Some("the child forgets terms or equations".into());
    }
    let new_m: Vec<&Nde> = m2.difference(m1).collect();
    let new_e: Vec<&Equation> = e2.difference(e1).collect();
    match (new_m.as_slice(), new_e.as_slice()) {
        ([z], []) => {
            if z.parts().iter().all(|p| m1.contains(*p)) && **z != Nde::Zero {
                None
            } else {
                Some(format!(
                    "{} is built from terms not yet constructed",
                    describe(z)
                ))
            }
        }
        ([], [q]) => {
            if m1.contains(&q.lhs) && m1.contains(&q.rhs) {
                None
            } else {
                Some(format!("{} relates terms not yet constructed", describe(q)))
            }
        }
        ([], []) => Some("nothing changes".into()),
        _ => Some("more than one term or equation is added".into()),
    }
}

impl ArithModel {
    pub fn validate(raw: &RawArithModel) -> Result<Self, ArithError> {
        let edges: Vec<(&str, &str)> = raw
            .edges
            .iter()
            .map(|(a, b, _)| (a.as_str(), b.as_str()))
            .collect();
        if let Some(bad) = raw.stages.iter().find(|s| !is_node_name(s)) {
            return Err(err(
                raw.stages_line,
                ArithErrorKind::Syntax(format!("invalid stage identifier `{bad}`")),
            ));
        }
        let tree = Tree::new(
            &raw.stages.iter().map(String::as_str).collect::<Vec<_>>(),
            &edges,
        )
        .map_err(|e| {
            let kind = tree_kind(e);
            let line = match &kind {
                ArithErrorKind::UnknownStage(s) | ArithErrorKind::NotATree { stage: s, .. } => raw
                    .edges
                    .iter()
                    .find(|(a, b, _)| a == s || b == s)
                    .and_then(|x| x.2),
                _ => None,
            };
            err(line.or(raw.stages_line), kind)
        })?;
        let n = tree.len();
        let mut m: Vec<BTreeSet<Nde>> = vec![BTreeSet::from([Nde::Zero]); n];
        let mut e: Vec<BTreeSet<Equation>> = vec![BTreeSet::new(); n];
        let mut m_line = vec![None; n];
        let mut e_line = vec![None; n];
        let index = |s: &str, line| {
            tree.index_of(s)
                .ok_or_else(|| err(line, ArithErrorKind::UnknownStage(s.to_owned())))
        };
        for (s, terms, line) in &raw.m {
            let k = index(s, *line)?;
            m[k] = terms.iter().cloned().collect();
            m_line[k] = *line;
        }
        for (s, eqs, line) in &raw.e {
            let k = index(s, *line)?;
            e[k] = eqs.iter().cloned().collect();
            e_line[k] = *line;
            if let Some(q) = eqs.iter().find(|q| !q.is_true()) {
                return Err(err(
                    *line,
                    ArithErrorKind::FalseEquation {
                        eq: q.to_string(),
                        stage: s.clone(),
                    },
                ));
            }
        }
        let bad_root = |reason: String| {
            err(
                m_line[0].or(e_line[0]),
                ArithErrorKind::BadRoot {
                    stage: tree.name(0).to_owned(),
                    reason,
                },
            )
        };
        if !m[0].contains(&Nde::Zero) {
            return Err(bad_root("`0` is not constructed".into()));
        }
        if let Some(x) = m[0]
            .iter()
            .find(|x| x.parts().iter().any(|p| !m[0].contains(*p)))
        {
            return Err(bad_root(format!(
                "{} lacks a constructed subterm",
                describe(x)
            )));
        }
        if let Some(q) = e[0]
            .iter()
            .find(|q| !m[0].contains(&q.lhs) || !m[0].contains(&q.rhs))
        {
            return Err(bad_root(format!(
                "{} relates terms not constructed",
                describe(q)
            )));
        }
        for c in 1..n {
            let p = tree.parent(c).expect("non-root stage");
            if let Some(reason) = transition_error((&m[p], &e[p]), (&m[c], &e[c])) {
                let line = raw
                    .edges
                    .iter()
                    .find(|x| x.1 == tree.name(c))
                    .and_then(|x| x.2);
                return Err(err(
                    line,
                    ArithErrorKind::BadTransition {
                        parent: tree.name(p).to_owned(),
                        child: tree.name(c).to_owned(),
                        reason,
                    },
                ));
            }
        }
        let all: BTreeSet<&Equation> = e.iter().flatten().collect();
        for q in all {
            let truth: Vec<bool> = e.iter().map(|set| set.contains(q)).collect();
            if let Some(k) = tree.eventually(&truth).iter().position(|&b| !b) {
                return Err(err(
                    None,
                    ArithErrorKind::PrevalenceViolated {
                        eq: q.to_string(),
                        stage: tree.name(k).to_owned(),
                    },
                ));
            }
        }
        Ok(ArithModel { tree, m, e })
    }

    pub fn from_text(text: &str) -> Result<Self, ArithError> {
        Self::validate(&RawArithModel::parse(text)?)
    }

    pub fn to_text(&self) -> String {
        let t = &self.tree;
        let mut out = format!("stages: {}\n", t.names().join(" "));
        for &k in t.preorder() {
            for &c in t.children(k) {
                out.push_str(&format!("edge: {} {}\n", t.name(k), t.name(c)));
            }
        }
        for k in 0..t.len() {
            let terms: Vec<String> = self.m[k].iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("m: {} {}\n", t.name(k), terms.join(" ")));
            if !self.e[k].is_empty() {
                let eqs: Vec<String> = self.e[k].iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("e: {} {}\n", t.name(k), eqs.join(" ")));
            }
        }
        out
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

    pub fn constructed(&self, k: usize) -> &BTreeSet<Nde> {
        &self.m[k]
    }

    pub fn learnt(&self, k: usize) -> &BTreeSet<Equation> {
        &self.e[k]
    }

    pub fn stage_index(&self, name: &str) -> Result<usize, ArithErrorKind> {
        self.tree
            .index_of(name)
            .ok_or_else(|| ArithErrorKind::UnknownStage(name.to_owned()))
    }

    /// Every equation learnt at some stage.
    pub fn equations(&self) -> BTreeSet<Equation> {
        self.e.iter().flatten().cloned().collect()
    }

    /// Truth of `f` at every stage.
    pub fn eval(&self, f: &ClFormula) -> Vec<bool> {
        self.tree.eval(f, Implication::TimeGap, &mut |q| {
            self.e.iter().map(|set| set.contains(q)).collect()
        })
    }

    pub fn forces(&self, stage: &str, f: &ClFormula) -> Result<bool, ArithErrorKind> {
        Ok(self.eval(f)[self.stage_index(stage)?])
    }

    /// Builds a model from trusted parts, checking every condition.
    pub fn from_parts(
        tree: Tree,
        m: Vec<BTreeSet<Nde>>,
        e: Vec<BTreeSet<Equation>>,
    ) -> Result<Self, ArithError> {
        let name = |k: usize| tree.name(k).to_owned();
        let raw = RawArithModel {
            stages: tree.names().to_vec(),
            stages_line: None,
            edges: (1..tree.len())
                .map(|c| (name(tree.parent(c).unwrap()), name(c), None))
                .collect(),
            m: (0..tree.len())
                .map(|k| (name(k), m[k].iter().cloned().collect(), None))
                .collect(),
            e: (0..tree.len())
                .map(|k| (name(k), e[k].iter().cloned().collect(), None))
                .collect(),
        };
        Self::validate(&raw)
    }
}

/// Parses and validates an arithmetic model.
pub fn validate_arith_model(raw: &RawArithModel) -> Result<ArithModel, ArithError> {
    ArithModel::validate(raw)
}

/// The copy model: `t` forces `p` iff `sigma(p)` is learnt at `t`.
pub fn copy_model(s: &ArithModel, sigma: &BTreeMap<Var, Equation>) -> KripkeModel {
    let valuation = sigma
        .iter()
        .map(|(p, q)| (p.clone(), s.e.iter().map(|set| set.contains(q)).collect()))
        .collect();
    let model = TreeModel::new(s.tree.clone(), valuation).expect("learnt sets grow upwards");
    KripkeModel::from_tree_model(model).expect("equations are prevalent")
}

/// The chain from the root to `t` in an explored prefix, for a stage
/// learning every true equation of `f`.
pub fn contract_arith(
    prefix: &SInfinity,
    f: &ClFormula,
    t: Stage,
) -> Result<ArithModel, ContractArithError> {
    let learnt = prefix.learnt(t);
    if let Some(q) = f
        .atoms()
        .into_iter()
        .find(|q| q.is_true() && !learnt.contains(q))
    {
        return Err(ContractArithError::NotAContractionStage {
            stage: prefix.stage_id(t),
            eq: q.to_string(),
        });
    }
    let branch = prefix.branch(t);
    let names: Vec<String> = branch.iter().map(|&s| prefix.stage_id(s)).collect();
    let parents = (0..branch.len()).map(|i| i.checked_sub(1)).collect();
    let tree = Tree::from_parents(names, parents).expect("chain");
    let m = branch
        .iter()
        .map(|&s| prefix.constructed(s).into_iter().collect())
        .collect();
    let e = branch
        .iter()
        .map(|&s| prefix.learnt(s).into_iter().collect())
        .collect();
    Ok(ArithModel::from_parts(tree, m, e).expect("initial chains of S_inf are models"))
}

/// `sigma(A)`: replaces variables by equations.
pub fn substitute(f: &crate::Fm, sigma: &BTreeMap<Var, Equation>) -> ClFormula {
    f.map_atoms(&mut |p| match sigma.get(p) {
        Some(q) => Formula::Atom(q.clone()),
        None => Formula::Atom(Equation::falsum()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    const CHAIN: &str = "stages: t0 t1\nedge: t0 t1\ne: t1 0=0\n";

    #[test]
    fn validation_examples() {
        let s = ArithModel::from_text(CHAIN).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(ArithModel::from_text(&s.to_text()).unwrap(), s);
        let e = ArithModel::from_text("stages: t0 t1\nedge: t0 t1\nm: t1 0 S(S(0))\n").unwrap_err();
        assert!(
            matches!(e.kind, ArithErrorKind::BadTransition { .. }),
            "{e}"
        );
        assert_eq!(e.line, Some(2));
        let e = ArithModel::from_text(
            "stages: t0 a b\nedge: t0 a\nedge: t0 b\ne: a 0=0\nm: b 0 S(0)\n",
        )
        .unwrap_err();
        assert!(
            matches!(e.kind, ArithErrorKind::PrevalenceViolated { .. }),
            "{e}"
        );
        let e = ArithModel::from_text(
            "stages: t0 t1\nedge: t0 t1\nm: t0 0 S(0)\nm: t1 0 S(0)\ne: t1 0=S(0)\n",
        )
        .unwrap_err();
        assert!(
            matches!(e.kind, ArithErrorKind::FalseEquation { .. }),
            "{e}"
        );
        assert_eq!(e.line, Some(5));
        let e = ArithModel::from_text("stages: t0\nm: t0 0 S(S(0))\n").unwrap_err();
        assert!(matches!(e.kind, ArithErrorKind::BadRoot { .. }), "{e}");
    }

    #[test]
    fn copy_model_examples() {
        let s = ArithModel::from_text(CHAIN).unwrap();
        let p = Var::new("p").unwrap();
        let sigma = BTreeMap::from([(p.clone(), "0=0".parse().unwrap())]);
        let w = copy_model(&s, &sigma);
        assert_eq!(w.var_truth(&p), vec![false, true]);
        let nnp: crate::Fm = parse_formula("~~p").unwrap();
        assert!(w.forces("t0", &nnp).unwrap());
        assert!(s.forces("t0", &substitute(&nnp, &sigma)).unwrap());
        let sigma = BTreeMap::from([(p.clone(), "S(0)=S(0)".parse().unwrap())]);
        assert_eq!(copy_model(&s, &sigma).var_truth(&p), vec![false, false]);
    }

    #[test]
    fn contraction_examples() {
        let prefix = SInfinity::explore(2).unwrap();
        let a: ClFormula = parse_formula("0=0").unwrap();
        let t = prefix.stage_by_id("t0_3").unwrap();
        let c = contract_arith(&prefix, &a, t).unwrap();
        assert_eq!(c.len(), 2);
        assert!(!c.forces("t0", &a).unwrap());
        assert!(c.forces("t0_3", &a).unwrap());
        let only_false: ClFormula = parse_formula("0=S(0) | ~(0+0=S(0))").unwrap();
        assert_eq!(prefix.contraction_stages(&only_false).count(), prefix.len());
        assert!(contract_arith(&prefix, &a, Stage::ROOT).is_err());
    }
}
