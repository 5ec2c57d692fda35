//! Formulas compiled to straight-line code over the three upward-closed
//! states of a variable on the frame `r < k`.

use crate::syntax::{Formula, Var};
use crate::Fm;

/// `v(p)` on `r < k`: nowhere, only at `k`, or at both nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum State {
    Empty = 0,
    Top = 1,
    Both = 2,
}

impl State {
    pub const ALL: [State; 3] = [State::Empty, State::Top, State::Both];

    pub fn from_digit(d: u8) -> State {
        Self::ALL[d as usize]
    }

    pub fn at_root(self) -> bool {
        self == State::Both
    }

    pub fn at_top(self) -> bool {
        self != State::Empty
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(usize),
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

/// A formula flattened into post-order with variables resolved to indices.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
}

impl Compiled {
    /// `vars` must contain every variable of `f`.
    pub fn new(f: &Fm, vars: &[Var]) -> Compiled {
        let mut ops = Vec::new();
        compile(f, vars, &mut ops);
        Compiled { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Truth degree: 0 nowhere, 1 only at `k`, 2 at both nodes.
    pub fn eval(&self, states: &[u8], buf: &mut Vec<u8>) -> u8 {
        buf.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => states[i],
                Op::Bot => 0,
                Op::And(a, b) => buf[a].min(buf[b]),
                Op::Or(a, b) => buf[a].max(buf[b]),
                Op::Imp(a, b) => {
                    if buf[a] == 0 || buf[b] >= 1 {
                        2
                    } else {
                        0
                    }
                }
            };
            buf.push(v);
        }
        *buf.last().expect("nonempty program")
    }
}

fn compile(f: &Fm, vars: &[Var], ops: &mut Vec<Op>) -> usize {
    let op = match f {
        Formula::Atom(v) => Op::Var(vars.binary_search(v).expect("variable in scope")),
        Formula::Bot => Op::Bot,
        Formula::And(a, b) => Op::And(compile(a, vars, ops), compile(b, vars, ops)),
        Formula::Or(a, b) => Op::Or(compile(a, vars, ops), compile(b, vars, ops)),
        Formula::Imp(a, b) => Op::Imp(compile(a, vars, ops), compile(b, vars, ops)),
    };
    ops.push(op);
    ops.len() - 1
}

/// Writes the base-3 digits of `index` into `out`, most significant first.
pub fn decode(mut index: u64, out: &mut [u8]) {
    for d in out.iter_mut().rev() {
        *d = (index % 3) as u8;
        index /= 3;
    }
}
