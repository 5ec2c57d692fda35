//! Class-level decision procedures by enumeration of the two-node frame.
//!
//! Validity and consequence over all strict finitistic models reduce to
//! models on `r < k`, where each variable is interpreted by one of the
//! three sets `{}`, `{k}`, `{r, k}`.

mod matrix;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::kripke::KripkeModel;
use crate::syntax::{Formula, Var};
use crate::Fm;

pub use matrix::{decode, Compiled, State};

pub const DEFAULT_VAR_BUDGET: usize = 16;

/// Below this many valuations the scan stays on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula has {vars} variables, over the budget of {budget} (raise with --var-budget)")]
pub struct BudgetExceeded {
    pub vars: usize,
    pub budget: usize,
}

/// A two-node model with the node at which the query fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Countermodel),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(c) => Some(c),
        }
    }
}

/// The two-node model for a list of per-variable states.
pub fn two_node_model(vars: &[Var], states: &[State]) -> KripkeModel {
    let val: Vec<(&str, &[&str])> = vars
        .iter()
        .zip(states)
        .map(|(v, s)| {
            let set: &[&str] = match s {
                State::Empty => &[],
                State::Top => &["k"],
                State::Both => &["r", "k"],
            };
            (v.as_str(), set)
        })
        .collect();
    KripkeModel::build(&["r", "k"], &[("r", "k")], &val).expect("two-node valuations are valid")
}

fn variables<'a>(fs: impl IntoIterator<Item = &'a Fm>) -> Vec<Var> {
    let mut set = BTreeSet::new();
    for f in fs {
        set.extend(f.atoms());
    }
    set.into_iter().collect()
}

fn check_budget(n: usize, budget: usize) -> Result<u64, BudgetExceeded> {
    if n > budget || n > 40 {
        return Err(BudgetExceeded { vars: n, budget });
    }
    Ok(3u64.pow(n as u32))
}

/// Index of the first valuation accepted by `bad`, in enumeration order.
fn first_bad<F>(n: usize, total: u64, bad: F) -> Option<u64>
where
    F: Fn(&[u8], &mut Vec<u8>) -> bool + Sync,
{
    let probe = |states: &mut Vec<u8>, buf: &mut Vec<u8>, i: u64| {
        decode(i, states);
        bad(states, buf)
    };
    if total <= PARALLEL_THRESHOLD {
        let (mut states, mut buf) = (vec![0; n], Vec::new());
        return (0..total).find(|&i| probe(&mut states, &mut buf, i));
    }
    (0..total)
        .into_par_iter()
        .map_init(|| (vec![0; n], Vec::new()), |(s, b), i| (i, probe(s, b, i)))
        .find_first(|&(_, hit)| hit)
        .map(|(i, _)| i)
}

fn states_of(n: usize, index: u64) -> Vec<State> {
    let mut digits = vec![0; n];
    decode(index, &mut digits);
    digits.into_iter().map(State::from_digit).collect()
}

/// Validity in every strict finitistic model.
pub fn decide_validity(a: &Fm, budget: usize) -> Result<Verdict, BudgetExceeded> {
    let vars = variables([a]);
    let total = check_budget(vars.len(), budget)?;
    let prog = Compiled::new(a, &vars);
    let hit = first_bad(vars.len(), total, |s, buf| prog.eval(s, buf) != 2);
    Ok(match hit {
        None => Verdict::Valid,
        Some(i) => {
            let model = two_node_model(&vars, &states_of(vars.len(), i));
            assert!(!model.forces_at(0, a), "countermodel re-check");
            Verdict::Invalid(Countermodel {
                model,
                node: "r".into(),
            })
        }
    })
}

/// `gamma |= delta` over all models: every node forcing all of `gamma`
/// forces some member of `delta`.
pub fn decide_consequence(
    gamma: &[Fm],
    delta: &[Fm],
    budget: usize,
) -> Result<Verdict, BudgetExceeded> {
    let vars = variables(gamma.iter().chain(delta));
    let total = check_budget(vars.len(), budget)?;
    let lhs: Vec<Compiled> = gamma.iter().map(|f| Compiled::new(f, &vars)).collect();
    let rhs: Vec<Compiled> = delta.iter().map(|f| Compiled::new(f, &vars)).collect();
    // Least degree of the antecedents and greatest of the succedents.
    let degrees = |s: &[u8], buf: &mut Vec<u8>| {
        let lo = lhs.iter().map(|c| c.eval(s, buf)).min().unwrap_or(2);
        let hi = rhs.iter().map(|c| c.eval(s, buf)).max().unwrap_or(0);
        (lo, hi)
    };
    let violated = |lo: u8, hi: u8, need: u8| lo >= need && hi < need;
    let hit = first_bad(vars.len(), total, |s, buf| {
        let (lo, hi) = degrees(s, buf);
        violated(lo, hi, 2) || violated(lo, hi, 1)
    });
    Ok(match hit {
        None => Verdict::Valid,
        Some(i) => {
            let states = states_of(vars.len(), i);
            let model = two_node_model(&vars, &states);
            let node = model
                .consequence_violation(gamma, delta)
                .expect("countermodel re-check");
            Verdict::Invalid(Countermodel {
                node: model.tree().name(node).to_owned(),
                model,
            })
        }
    })
}

/// Assertibility in every model, via validity of the double negation.
pub fn class_assertibility(a: &Fm, budget: usize) -> Result<bool, BudgetExceeded> {
    Ok(decide_validity(&Formula::not_not(a.clone()), budget)?.is_valid())
}

/// Whether `~~A |= A` holds over all models.
pub fn decide_stability(a: &Fm, budget: usize) -> Result<bool, BudgetExceeded> {
    Ok(decide_consequence(
        &[Formula::not_not(a.clone())],
        std::slice::from_ref(a),
        budget,
    )?
    .is_valid())
}

/// A classical truth assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassicalAssignment(pub BTreeMap<Var, bool>);

impl ClassicalAssignment {
    pub fn get(&self, v: &Var) -> bool {
        self.0.get(v).copied().unwrap_or(false)
    }

    /// Classical truth of `f`; unlisted variables are false.
    pub fn satisfies(&self, f: &Fm) -> bool {
        match f {
            Formula::Atom(v) => self.get(v),
            Formula::Bot => false,
            Formula::And(a, b) => self.satisfies(a) && self.satisfies(b),
            Formula::Or(a, b) => self.satisfies(a) || self.satisfies(b),
            Formula::Imp(a, b) => !self.satisfies(a) || self.satisfies(b),
        }
    }
}

/// The variables prevalent in `w`.
pub fn classical_part(w: &KripkeModel) -> ClassicalAssignment {
    ClassicalAssignment(
        w.vars()
            .map(|v| (v.clone(), w.is_prevalent(&Formula::Atom(v.clone()))))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Fm {
        parse_formula(s).unwrap()
    }

    fn valid(s: &str) -> bool {
        decide_validity(&f(s), DEFAULT_VAR_BUDGET)
            .unwrap()
            .is_valid()
    }

    #[test]
    fn validity_examples() {
        assert!(valid("~p | ~~p"));
        assert!(valid("~~p -> p"));
        assert!(valid("((p->q)->p)->p"));
        let v = decide_validity(&f("p | ~p"), 16).unwrap();
        let c = v.countermodel().unwrap();
        assert_eq!(c.node, "r");
        assert_eq!(
            c.model.var_truth(&Var::new("p").unwrap()),
            vec![false, true]
        );
    }

    #[test]
    fn consequence_examples() {
        let cons = |g: &[&str], d: &[&str]| {
            let g: Vec<Fm> = g.iter().map(|s| f(s)).collect();
            let d: Vec<Fm> = d.iter().map(|s| f(s)).collect();
            decide_consequence(&g, &d, 16).unwrap()
        };
        assert!(cons(&["p", "p->~q"], &["~q"]).is_valid());
        assert!(cons(&["_|_"], &[]).is_valid());
        let v = cons(&["p", "p->q"], &["q"]);
        let c = v.countermodel().unwrap();
        assert_eq!(c.node, "r");
        assert_eq!(c.model.var_truth(&Var::new("p").unwrap()), vec![true, true]);
        assert_eq!(
            c.model.var_truth(&Var::new("q").unwrap()),
            vec![false, true]
        );
    }

    #[test]
    fn assertibility_and_stability() {
        assert!(class_assertibility(&f("p | ~p"), 16).unwrap());
        assert!(!class_assertibility(&f("p & ~p"), 16).unwrap());
        assert!(class_assertibility(&f("((p->q)->p)->p"), 16).unwrap());
        assert!(decide_stability(&f("(p->q)&~r"), 16).unwrap());
        assert!(!decide_stability(&f("p"), 16).unwrap());
        assert!(decide_stability(&f("_|_"), 16).unwrap());
    }

    #[test]
    fn budget() {
        let e = decide_validity(&f("p & q & r"), 2).unwrap_err();
        assert_eq!(e, BudgetExceeded { vars: 3, budget: 2 });
    }

    #[test]
    fn classical_part_examples() {
        let w =
            KripkeModel::build(&["r", "k"], &[("r", "k")], &[("p", &["k"]), ("q", &[])]).unwrap();
        let cl = classical_part(&w);
        assert!(cl.get(&Var::new("p").unwrap()));
        assert!(!cl.get(&Var::new("q").unwrap()));
    }

    #[test]
    fn compiled_matches_forcing() {
        let vars: Vec<Var> = ["p", "q"].iter().map(|s| Var::new(s).unwrap()).collect();
        for s in [
            "p -> q",
            "~(p & q) | ~~q",
            "(p -> q) -> p",
            "~~p -> p",
            "p | (p -> q) | ~q",
        ] {
            let a = f(s);
            let prog = Compiled::new(&a, &vars);
            for i in 0..9 {
                let mut digits = vec![0; 2];
                decode(i, &mut digits);
                let states: Vec<State> = digits.iter().map(|&d| State::from_digit(d)).collect();
                let w = two_node_model(&vars, &states);
                let deg = prog.eval(&digits, &mut Vec::new());
                assert_eq!(w.eval(&a), vec![deg == 2, deg >= 1], "{s} at {digits:?}");
            }
        }
    }
}
