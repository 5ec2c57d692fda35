//! Reference deciders for classical logic, here-and-there and
//! intuitionistic logic.

mod ipc;

use std::collections::BTreeMap;

use crate::syntax::{Formula, Var};
use crate::Fm;

pub use ipc::{ipc_prove, IpcResult, DEFAULT_IPC_VAR_BUDGET};

fn vars_of(a: &Fm) -> Vec<Var> {
    a.atoms().into_iter().collect()
}

/// Every assignment over `n` variables with values below `base`.
fn assignments(n: usize, base: u8) -> impl Iterator<Item = Vec<u8>> {
    let total = (base as u64).pow(n as u32);
    (0..total).map(move |mut i| {
        let mut out = vec![0; n];
        for d in out.iter_mut().rev() {
            *d = (i % base as u64) as u8;
            i /= base as u64;
        }
        out
    })
}

fn index(vars: &[Var], v: &Var) -> usize {
    vars.binary_search(v).expect("variable in scope")
}

fn classical(a: &Fm, vars: &[Var], val: &[u8]) -> bool {
    match a {
        Formula::Atom(v) => val[index(vars, v)] == 1,
        Formula::Bot => false,
        Formula::And(x, y) => classical(x, vars, val) && classical(y, vars, val),
        Formula::Or(x, y) => classical(x, vars, val) || classical(y, vars, val),
        Formula::Imp(x, y) => !classical(x, vars, val) || classical(y, vars, val),
    }
}

/// Classical tautology by truth tables.
pub fn cpc_valid(a: &Fm) -> bool {
    let vars = vars_of(a);
    assignments(vars.len(), 2).all(|val| classical(a, &vars, &val))
}

/// A value of Gödel's three-valued logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Goedel {
    Zero,
    Half,
    One,
}

/// A three-valued assignment.
pub type ThreeValuedAssignment = BTreeMap<Var, Goedel>;

/// Gödel evaluation; unlisted variables take value 0.
pub fn goedel_eval(a: &Fm, val: &ThreeValuedAssignment) -> Goedel {
    match a {
        Formula::Atom(v) => val.get(v).copied().unwrap_or(Goedel::Zero),
        Formula::Bot => Goedel::Zero,
        Formula::And(x, y) => goedel_eval(x, val).min(goedel_eval(y, val)),
        Formula::Or(x, y) => goedel_eval(x, val).max(goedel_eval(y, val)),
        Formula::Imp(x, y) => {
            let (x, y) = (goedel_eval(x, val), goedel_eval(y, val));
            if x <= y {
                Goedel::One
            } else {
                y
            }
        }
    }
}

/// A refuting three-valued assignment, if any.
pub fn ht_countermodel(a: &Fm) -> Option<ThreeValuedAssignment> {
    let vars = vars_of(a);
    const VALUES: [Goedel; 3] = [Goedel::Zero, Goedel::Half, Goedel::One];
    assignments(vars.len(), 3)
        .map(|digits| {
            vars.iter()
                .cloned()
                .zip(digits.into_iter().map(|d| VALUES[d as usize]))
                .collect::<ThreeValuedAssignment>()
        })
        .find(|val| goedel_eval(a, val) != Goedel::One)
}

/// Validity in here-and-there, by the three-valued matrix.
pub fn ht_valid(a: &Fm) -> bool {
    ht_countermodel(a).is_none()
}

/// Validity in here-and-there, by intuitionistic evaluation on every
/// two-world chain.
pub fn ht_valid_two_world(a: &Fm) -> bool {
    use crate::generations::IntuitionisticModel;
    let vars = vars_of(a);
    assignments(vars.len(), 3).all(|digits| {
        let sets: Vec<(&str, &[&str])> = vars
            .iter()
            .zip(&digits)
            .map(|(v, d)| {
                let set: &[&str] = match d {
                    0 => &[],
                    1 => &["t"],
                    _ => &["h", "t"],
                };
                (v.as_str(), set)
            })
            .collect();
        let i = IntuitionisticModel::build(&["h", "t"], &[("h", "t")], &sets).expect("chain model");
        i.eval(a)[0]
    })
}
