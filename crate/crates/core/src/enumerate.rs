//! Exhaustive enumeration of formulas by number of connectives.
//!
//! Leaves are variables; connectives are `&`, `|`, `->` and `~`, each
//! counting once. Values are built bottom-up from their immediate parts,
//! so any [`Algebra`](crate::algebra::Algebra) can be tabulated without
//! re-evaluating shared subformulas.

use crate::syntax::{Formula, Var};
use crate::Fm;

/// One construction step, handing over the already built parts.
pub enum Step<'a, T> {
    Atom(&'a Var),
    Not(&'a T),
    And(&'a T, &'a T),
    Or(&'a T, &'a T),
    Imp(&'a T, &'a T),
}

/// Builds every formula over `vars` with at most `max` connectives and
/// passes each to `visit` with its connective count. Only layers below
/// `max` are kept in memory.
pub fn for_each<T>(
    vars: &[Var],
    max: usize,
    mut build: impl FnMut(Step<'_, T>) -> T,
    mut visit: impl FnMut(usize, &T),
) {
    let mut layers: Vec<Vec<T>> = Vec::new();
    for c in 0..=max {
        let keep = c < max;
        let mut layer = Vec::new();
        let mut emit = |t: T| {
            visit(c, &t);
            if keep {
                layer.push(t);
            }
        };
        if c == 0 {
            for v in vars {
                emit(build(Step::Atom(v)));
            }
        } else {
            for a in &layers[c - 1] {
                emit(build(Step::Not(a)));
            }
            for op in 0..3 {
                for i in 0..c {
                    for a in &layers[i] {
                        for b in &layers[c - 1 - i] {
                            let step = match op {
                                0 => Step::And(a, b),
                                1 => Step::Or(a, b),
                                _ => Step::Imp(a, b),
                            };
                            emit(build(step));
                        }
                    }
                }
            }
        }
        layers.push(layer);
    }
}

/// Builds the formula for a step.
pub fn formula(step: Step<'_, Fm>) -> Fm {
    match step {
        Step::Atom(v) => Formula::Atom(v.clone()),
        Step::Not(a) => Formula::not(a.clone()),
        Step::And(a, b) => Formula::and(a.clone(), b.clone()),
        Step::Or(a, b) => Formula::or(a.clone(), b.clone()),
        Step::Imp(a, b) => Formula::imp(a.clone(), b.clone()),
    }
}

/// All formulas over `vars` with at most `max` connectives.
pub fn formulas(vars: &[Var], max: usize) -> Vec<Fm> {
    let mut out = Vec::new();
    for_each(vars, max, formula, |_, f| out.push(f.clone()));
    out
}

/// Tabulates an algebra alongside the formulas.
pub fn step_value<A: crate::algebra::Algebra>(
    alg: &A,
    step: Step<'_, (Fm, A::Value)>,
) -> (Fm, A::Value) {
    match step {
        Step::Atom(v) => (Formula::Atom(v.clone()), alg.atom(v)),
        Step::Not((f, a)) => (Formula::not(f.clone()), alg.not(a)),
        Step::And((f, a), (g, b)) => (Formula::and(f.clone(), g.clone()), alg.and(a, b)),
        Step::Or((f, a), (g, b)) => (Formula::or(f.clone(), g.clone()), alg.or(a, b)),
        Step::Imp((f, a), (g, b)) => (Formula::imp(f.clone(), g.clone()), alg.imp(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let vars = [Var::new("p").unwrap(), Var::new("q").unwrap()];
        let mut counts = vec![0usize; 5];
        for_each(&vars, 4, formula, |c, f| {
            assert_eq!(f.connectives(), c);
            counts[c] += 1;
        });
        assert_eq!(counts, vec![2, 14, 182, 2954, 53690]);
    }

    #[test]
    fn distinct() {
        let vars = [Var::new("p").unwrap(), Var::new("q").unwrap()];
        let all = formulas(&vars, 3);
        let set: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
    }
}
