//! The canonical tree of construction stages, materialized to a bounded
//! depth.
//!
//! A stage is reached from its parent by one move: constructing a term or
//! learning a true equation. Stages are stored level by level; a stage
//! keeps only its move, and its term and equation sets are recovered by
//! walking to the root. Children of a stage are contiguous in the next
//! level and listed in canonical order: successors `S(x)` for `x` in
//! construction order, then sums and then products over ordered pairs in
//! construction order, then the absent true equations in lexicographic
//! order of their printed form.

use std::cmp::Ordering;

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::nde::{Equation, Nde};
use crate::syntax::Formula;
use crate::ClFormula;

pub const DEFAULT_DEPTH: usize = 6;
pub const MAX_DEPTH: usize = 8;

const ROOT_MOVE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("depth {depth} is over the maximum of {budget} (lower --depth)")]
    DepthBudget { depth: usize, budget: usize },
    #[error("stage budget exhausted after {0} stages")]
    StageBudget(usize),
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Zero,
    Succ(u32),
    Add(u32, u32),
    Mul(u32, u32),
}

impl Node {
    fn key(self) -> u64 {
        match self {
            Node::Zero => 0,
            Node::Succ(a) => (1 << 62) | a as u64,
            Node::Add(a, b) => (2 << 62) | ((a as u64) << 31) | b as u64,
            Node::Mul(a, b) => (3 << 62) | ((a as u64) << 31) | b as u64,
        }
    }
}

/// Interned terms and equations.
#[derive(Debug, Clone, Default)]
pub struct Terms {
    nodes: Vec<Node>,
    /// `None` past 128 bits; such terms take part in no equation.
    values: Vec<Option<u128>>,
    text: Vec<Box<str>>,
    map: FxHashMap<u64, u32>,
    eqs: Vec<(u32, u32)>,
    eq_map: FxHashMap<u64, u32>,
    eq_text: Vec<Box<str>>,
}

/// A move from a stage to a child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Construct(u32),
    Learn(u32),
}

/// A stored move, relative to the parent's terms in construction order:
/// a kind tag and up to two operand positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Succ(u32),
    Add(u32, u32),
    Mul(u32, u32),
    Learn(u32, u32),
}

impl Rel {
    fn encode(self) -> u32 {
        let (kind, i, j) = match self {
            Rel::Succ(i) => (0, i, 0),
            Rel::Add(i, j) => (1, i, j),
            Rel::Mul(i, j) => (2, i, j),
            Rel::Learn(i, j) => (3, i, j),
        };
        (kind << 28) | (i << 14) | j
    }

    fn decode(item: u32) -> Rel {
        let (i, j) = ((item >> 14) & 0x3fff, item & 0x3fff);
        match item >> 28 {
            0 => Rel::Succ(i),
            1 => Rel::Add(i, j),
            2 => Rel::Mul(i, j),
            _ => Rel::Learn(i, j),
        }
    }

    /// The move as terms, given the parent's terms.
    fn apply(self, m: &mut Vec<Nde>, e: &mut Vec<Equation>) {
        let at = |i: u32| m[i as usize].clone();
        match self {
            Rel::Succ(i) => {
                let t = Nde::succ(at(i));
                m.push(t);
            }
            Rel::Add(i, j) => {
                let t = Nde::add(at(i), at(j));
                m.push(t);
            }
            Rel::Mul(i, j) => {
                let t = Nde::mul(at(i), at(j));
                m.push(t);
            }
            Rel::Learn(i, j) => e.push(Equation::new(at(i), at(j))),
        }
    }
}

/// A move between explored stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageMove {
    Construct(Nde),
    Learn(Equation),
}

impl std::fmt::Display for StageMove {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StageMove::Construct(x) => write!(f, "construct {x}"),
            StageMove::Learn(q) => write!(f, "learn {q}"),
        }
    }
}

impl Terms {
    pub fn new() -> Self {
        let mut t = Terms::default();
        t.intern(Node::Zero);
        t
    }

    pub const ZERO: u32 = 0;

    fn intern(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.map.get(&node.key()) {
            return id;
        }
        let value = match node {
            Node::Zero => Some(0),
            Node::Succ(a) => self.values[a as usize].and_then(|v| v.checked_add(1)),
            Node::Add(a, b) => match (self.values[a as usize], self.values[b as usize]) {
                (Some(x), Some(y)) => x.checked_add(y),
                _ => None,
            },
            Node::Mul(a, b) => match (self.values[a as usize], self.values[b as usize]) {
                (Some(x), Some(y)) => x.checked_mul(y),
                _ => None,
            },
        };
        let text = match node {
            Node::Zero => "0".to_owned(),
            Node::Succ(a) => format!("S({})", self.text(a, 0)),
            Node::Add(a, b) => format!("{}+{}", self.text(a, 0), self.text(b, 1)),
            Node::Mul(a, b) => format!("{}*{}", self.text(a, 1), self.text(b, 2)),
        };
        let id = self.nodes.len() as u32;
        assert!(id < u32::MAX, "term table full");
        self.text.push(text.into_boxed_str());
        self.nodes.push(node);
        self.values.push(value);
        self.map.insert(node.key(), id);
        id
    }

    fn equation(&mut self, x: u32, y: u32) -> u32 {
        let key = ((x as u64) << 32) | y as u64;
        if let Some(&id) = self.eq_map.get(&key) {
            return id;
        }
        let id = self.eqs.len() as u32;
        self.eqs.push((x, y));
        self.eq_map.insert(key, id);
        let text = format!("{}={}", self.text[x as usize], self.text[y as usize]);
        self.eq_text.push(text.into_boxed_str());
        id
    }

    /// Printed form of a term as an operand at binding `level` (0 sum,
    /// 1 product, 2 primary).
    fn text(&self, id: u32, level: u8) -> std::borrow::Cow<'_, str> {
        let own = match self.nodes[id as usize] {
            Node::Add(..) => 0,
            Node::Mul(..) => 1,
            _ => 2,
        };
        let t = &*self.text[id as usize];
        if own < level {
            format!("({t})").into()
        } else {
            t.into()
        }
    }

    pub fn term(&self, id: u32) -> Nde {
        match self.nodes[id as usize] {
            Node::Zero => Nde::Zero,
            Node::Succ(a) => Nde::succ(self.term(a)),
            Node::Add(a, b) => Nde::add(self.term(a), self.term(b)),
            Node::Mul(a, b) => Nde::mul(self.term(a), self.term(b)),
        }
    }

    pub fn eq(&self, id: u32) -> Equation {
        let (x, y) = self.eqs[id as usize];
        Equation::new(self.term(x), self.term(y))
    }

    pub fn eq_text(&self, id: u32) -> &str {
        &self.eq_text[id as usize]
    }

    /// The id of an already interned term.
    pub fn lookup(&self, x: &Nde) -> Option<u32> {
        let node = match x {
            Nde::Zero => Node::Zero,
            Nde::Succ(a) => Node::Succ(self.lookup(a)?),
            Nde::Add(a, b) => Node::Add(self.lookup(a)?, self.lookup(b)?),
            Nde::Mul(a, b) => Node::Mul(self.lookup(a)?, self.lookup(b)?),
        };
        self.map.get(&node.key()).copied()
    }

    /// The id of an already interned equation.
    pub fn lookup_eq(&self, e: &Equation) -> Option<u32> {
        let (x, y) = (self.lookup(&e.lhs)?, self.lookup(&e.rhs)?);
        self.eq_map.get(&(((x as u64) << 32) | y as u64)).copied()
    }

    /// Interns a term and all its subterms.
    pub fn insert(&mut self, x: &Nde) -> u32 {
        let node = match x {
            Nde::Zero => Node::Zero,
            Nde::Succ(a) => Node::Succ(self.insert(a)),
            Nde::Add(a, b) => Node::Add(self.insert(a), self.insert(b)),
            Nde::Mul(a, b) => Node::Mul(self.insert(a), self.insert(b)),
        };
        self.intern(node)
    }

    pub fn insert_eq(&mut self, e: &Equation) -> u32 {
        let (x, y) = (self.insert(&e.lhs), self.insert(&e.rhs));
        self.equation(x, y)
    }

    fn same_value(&self, x: u32, y: u32) -> bool {
        match (self.values[x as usize], self.values[y as usize]) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Children moves of a stage with terms `m` (construction order) and
    /// learnt equations `e`, in canonical order.
    pub fn moves(&mut self, m: &[u32], e: &[u32], out: &mut Vec<Move>) {
        out.clear();
        for &x in m {
            let t = self.intern(Node::Succ(x));
            if !m.contains(&t) {
                out.push(Move::Construct(t));
            }
        }
        for mul in [false, true] {
            for &x in m {
                for &y in m {
                    let t = self.intern(if mul {
                        Node::Mul(x, y)
                    } else {
                        Node::Add(x, y)
                    });
                    if !m.contains(&t) {
                        out.push(Move::Construct(t));
                    }
                }
            }
        }
        let start = out.len();
        for &x in m {
            for &y in m {
                if self.same_value(x, y) {
                    let q = self.equation(x, y);
                    if !e.contains(&q) {
                        out.push(Move::Learn(q));
                    }
                }
            }
        }
        let text = &self.eq_text;
        out[start..].sort_unstable_by(|a, b| match (a, b) {
            (Move::Learn(a), Move::Learn(b)) => text[*a as usize].cmp(&text[*b as usize]),
            _ => Ordering::Equal,
        });
    }
}

/// Candidate moves of every stage with a given term sequence `m`. Stages
/// differing only in learnt equations share a frame.
#[derive(Debug, Clone, Default)]
struct Frame {
    m: Vec<u32>,
    nodes: Vec<Node>,
    /// True equations over `m` as (id, lhs position, rhs position), sorted
    /// by printed form.
    eqs: Vec<(u32, u32, u32)>,
    /// Encoded constructions already present in `m`, sorted.
    taken: Vec<u32>,
}

impl Frame {
    fn root(terms: &mut Terms) -> Frame {
        let mut f = Frame::default();
        Frame::default().extend(terms, Terms::ZERO, &mut f);
        f
    }

    /// Writes the frame after constructing `z` into `f`.
    fn extend(&self, terms: &mut Terms, z: u32, f: &mut Frame) {
        f.clone_from(self);
        let k = f.m.len() as u32;
        f.m.push(z);
        let node = terms.nodes[z as usize];
        f.nodes.push(node);
        let pos = |x: u32| f.m.iter().position(|&y| y == x).unwrap() as u32;
        let rel = match node {
            Node::Zero => None,
            Node::Succ(a) => Some(Rel::Succ(pos(a))),
            Node::Add(a, b) => Some(Rel::Add(pos(a), pos(b))),
            Node::Mul(a, b) => Some(Rel::Mul(pos(a), pos(b))),
        };
        if let Some(rel) = rel {
            let code = rel.encode();
            let at = f.taken.partition_point(|&c| c < code);
            f.taken.insert(at, code);
        }
        let f = &mut *f;
        for (i, &x) in f.m.iter().enumerate() {
            let i = i as u32;
            for (a, b, ia, ib) in [(x, z, i, k), (z, x, k, i)] {
                if terms.same_value(a, b) {
                    let q = terms.equation(a, b);
                    let text = &terms.eq_text;
                    let at = f
                        .eqs
                        .partition_point(|o| text[o.0 as usize] < text[q as usize]);
                    if f.eqs.get(at).map(|o| o.0) != Some(q) {
                        f.eqs.insert(at, (q, ia, ib));
                    }
                }
            }
        }
    }

    fn emit(&self, in_e: &[bool], out: &mut Vec<u32>) {
        let k = self.m.len() as u32;
        let mut taken = self.taken.iter().copied().peekable();
        let mut push = |code: u32| {
            if taken.peek() == Some(&code) {
                taken.next();
            } else {
                out.push(code);
            }
        };
        for i in 0..k {
            push(Rel::Succ(i).encode());
        }
        for kind in [Rel::Add as fn(u32, u32) -> Rel, Rel::Mul] {
            for i in 0..k {
                for j in 0..k {
                    push(kind(i, j).encode());
                }
            }
        }
        for &(q, i, j) in &self.eqs {
            if !in_e.get(q as usize).copied().unwrap_or(false) {
                out.push(Rel::Learn(i, j).encode());
            }
        }
    }

    fn resolve(&self, terms: &mut Terms, rel: Rel) -> Move {
        let at = |i: u32| self.m[i as usize];
        match rel {
            Rel::Succ(i) => Move::Construct(terms.intern(Node::Succ(at(i)))),
            Rel::Add(i, j) => Move::Construct(terms.intern(Node::Add(at(i), at(j)))),
            Rel::Mul(i, j) => Move::Construct(terms.intern(Node::Mul(at(i), at(j)))),
            Rel::Learn(i, j) => Move::Learn(terms.equation(at(i), at(j))),
        }
    }
}

/// A stage of an explored prefix: its depth and position in that level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stage {
    pub depth: usize,
    pub index: usize,
}

impl Stage {
    pub const ROOT: Stage = Stage { depth: 0, index: 0 };
}

/// The canonical S_∞ materialized to a fixed depth.
#[derive(Debug, Clone)]
pub struct SInfinity {
    terms: Terms,
    /// Per level, the move leading to each stage.
    levels: Vec<Vec<u32>>,
    /// Per level below the last, where each stage's children start in the
    /// next level, with a final sentinel.
    first_child: Vec<Vec<u32>>,
}

/// Term and equation sets of a stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageState {
    pub m: Vec<u32>,
    pub e: Vec<u32>,
}

impl StageState {
    pub fn root() -> Self {
        StageState {
            m: vec![Terms::ZERO],
            e: Vec::new(),
        }
    }

    pub fn apply(&mut self, mv: Move) {
        match mv {
            Move::Construct(t) => self.m.push(t),
            Move::Learn(q) => self.e.push(q),
        }
    }

    pub fn undo(&mut self, mv: Move) {
        match mv {
            Move::Construct(_) => self.m.pop(),
            Move::Learn(_) => self.e.pop(),
        };
    }
}

/// Stages per depth of the canonical tree, without storing it.
pub fn count_stages(depth: usize) -> Vec<u64> {
    let mut terms = Terms::new();
    let mut counts = vec![0u64; depth + 1];
    let mut state = StageState::root();
    let mut bufs = vec![Vec::new(); depth + 1];
    fn go(
        terms: &mut Terms,
        state: &mut StageState,
        d: usize,
        counts: &mut [u64],
        bufs: &mut [Vec<Move>],
    ) {
        counts[d] += 1;
        if d + 1 == counts.len() {
            return;
        }
        let mut moves = std::mem::take(&mut bufs[d]);
        terms.moves(&state.m, &state.e, &mut moves);
        if d + 2 == counts.len() {
            counts[d + 1] += moves.len() as u64;
        } else {
            for &mv in &moves {
                state.apply(mv);
                go(terms, state, d + 1, counts, bufs);
                state.undo(mv);
            }
        }
        bufs[d] = moves;
    }
    go(&mut terms, &mut state, 0, &mut counts, &mut bufs);
    counts
}

impl SInfinity {
    /// Materializes every stage up to `depth` (at most [`MAX_DEPTH`]).
    pub fn explore(depth: usize) -> Result<SInfinity, ExploreError> {
        Self::explore_with_budget(depth, MAX_DEPTH)
    }

    pub fn explore_with_budget(depth: usize, budget: usize) -> Result<SInfinity, ExploreError> {
        if depth > budget || depth > MAX_DEPTH {
            return Err(ExploreError::DepthBudget {
                depth,
                budget: budget.min(MAX_DEPTH),
            });
        }
        let mut s = SInfinity {
            terms: Terms::new(),
            levels: vec![Vec::new(); depth + 1],
            first_child: vec![Vec::new(); depth],
        };
        s.levels[0].push(ROOT_MOVE);
        let mut frames = vec![Frame::default(); depth + 1];
        frames[0] = Frame::root(&mut s.terms);
        s.build(0, &mut frames, &mut Vec::new());
        for (d, fc) in s.first_child.iter_mut().enumerate() {
            fc.push(s.levels[d + 1].len() as u32);
        }
        Ok(s)
    }

    /// Expands a stage at depth `d` whose frame is `frames[0]`; the rest
    /// is scratch.
    fn build(&mut self, d: usize, frames: &mut [Frame], in_e: &mut Vec<bool>) {
        if d == self.levels.len() - 1 {
            return;
        }
        let next = &mut self.levels[d + 1];
        let start = next.len();
        self.first_child[d].push(start as u32);
        frames[0].emit(in_e, next);
        let end = next.len();
        if d + 2 == self.levels.len() {
            return;
        }
        for i in start..end {
            let rel = Rel::decode(self.levels[d + 1][i]);
            match frames[0].resolve(&mut self.terms, rel) {
                Move::Construct(z) => {
                    let (head, tail) = frames.split_at_mut(1);
                    head[0].extend(&mut self.terms, z, &mut tail[0]);
                    self.build(d + 1, tail, in_e);
                }
                Move::Learn(q) => {
                    let q = q as usize;
                    if in_e.len() <= q {
                        in_e.resize(q + 1, false);
                    }
                    in_e[q] = true;
                    self.build(d + 1, frames, in_e);
                    in_e[q] = false;
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_len(&self, d: usize) -> usize {
        self.levels[d].len()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stages_at(&self, d: usize) -> impl Iterator<Item = Stage> {
        (0..self.levels[d].len()).map(move |index| Stage { depth: d, index })
    }

    /// The move from the parent, as terms.
    pub fn move_to(&self, s: Stage) -> Option<StageMove> {
        let p = self.parent(s)?;
        let (mut m, mut e) = self.sets(p);
        let rel = Rel::decode(self.levels[s.depth][s.index]);
        rel.apply(&mut m, &mut e);
        Some(match rel {
            Rel::Learn(..) => StageMove::Learn(e.pop().expect("learnt")),
            _ => StageMove::Construct(m.pop().expect("constructed")),
        })
    }

    pub fn parent(&self, s: Stage) -> Option<Stage> {
        if s.depth == 0 {
            return None;
        }
        let fc = &self.first_child[s.depth - 1];
        let index = fc.partition_point(|&c| c as usize <= s.index) - 1;
        Some(Stage {
            depth: s.depth - 1,
            index,
        })
    }

    pub fn children(&self, s: Stage) -> impl Iterator<Item = Stage> {
        let range = if s.depth < self.depth() {
            let fc = &self.first_child[s.depth];
            fc[s.index] as usize..fc[s.index + 1] as usize
        } else {
            0..0
        };
        range.map(move |index| Stage {
            depth: s.depth + 1,
            index,
        })
    }

    /// Stages from the root down to `s`.
    pub fn branch(&self, s: Stage) -> Vec<Stage> {
        let mut out = vec![s];
        while let Some(p) = self.parent(*out.last().unwrap()) {
            out.push(p);
        }
        out.reverse();
        out
    }

    /// `M(t)` in construction order and `E(t)` in learning order.
    pub fn sets(&self, s: Stage) -> (Vec<Nde>, Vec<Equation>) {
        let (mut m, mut e) = (vec![Nde::Zero], Vec::new());
        for b in self.branch(s).into_iter().skip(1) {
            Rel::decode(self.levels[b.depth][b.index]).apply(&mut m, &mut e);
        }
        (m, e)
    }

    pub fn constructed(&self, s: Stage) -> Vec<Nde> {
        self.sets(s).0
    }

    pub fn learnt(&self, s: Stage) -> Vec<Equation> {
        self.sets(s).1
    }

    /// Identifier `t0_i_j_...` listing child positions from the root.
    pub fn stage_id(&self, s: Stage) -> String {
        let mut id = String::from("t0");
        let branch = self.branch(s);
        for w in branch.windows(2) {
            let first = self.first_child[w[0].depth][w[0].index] as usize;
            id.push_str(&format!("_{}", w[1].index - first));
        }
        id
    }

    pub fn stage_by_id(&self, id: &str) -> Result<Stage, ExploreError> {
        let unknown = || ExploreError::UnknownStage(id.to_owned());
        let mut parts = id.split('_');
        if parts.next() != Some("t0") {
            return Err(unknown());
        }
        let mut s = Stage::ROOT;
        for p in parts {
            let i: usize = p.parse().map_err(|_| unknown())?;
            s = self.children(s).nth(i).ok_or_else(unknown)?;
        }
        Ok(s)
    }

    /// Forcing at a stage. Atoms are read from `E(t)`. An implication is
    /// forced at a stage iff it holds classically under the true
    /// equations, at every stage alike, so no deeper exploration is
    /// needed.
    pub fn forces(&self, s: Stage, f: &ClFormula) -> bool {
        let e = self.learnt(s);
        forces_with(f, &|q| e.contains(q))
    }

    /// Forcing by raw clause evaluation inside the prefix, looking at most
    /// `horizon` levels above `s`. Universal clauses can only be settled
    /// by the whole infinite tree, so an implication is `Some(false)` when
    /// the prefix exhibits a counterexample it cannot repair and `None`
    /// otherwise.
    pub fn forces_within(&self, s: Stage, f: &ClFormula, horizon: usize) -> Option<bool> {
        let limit = (s.depth + horizon).min(self.depth());
        self.raw(s, f, limit)
    }

    fn raw(&self, s: Stage, f: &ClFormula, limit: usize) -> Option<bool> {
        match f {
            Formula::Atom(q) => Some(self.forces(s, &Formula::Atom(q.clone()))),
            Formula::Bot => Some(false),
            Formula::And(a, b) => match (self.raw(s, a, limit), self.raw(s, b, limit)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Formula::Or(a, b) => match (self.raw(s, a, limit), self.raw(s, b, limit)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Imp(a, b) => {
                // A false consequent never becomes verifiable: `B` is then
                // forced nowhere, and any stage forcing `A` refutes.
                if !classical(b)
                    && self
                        .up_to(s, limit)
                        .any(|t| self.raw(t, a, limit) == Some(true))
                {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    fn up_to(&self, s: Stage, limit: usize) -> impl Iterator<Item = Stage> + '_ {
        let mut stack = vec![s];
        std::iter::from_fn(move || {
            let t = stack.pop()?;
            if t.depth < limit {
                stack.extend(self.children(t));
            }
            Some(t)
        })
    }

    /// Stages of the prefix forcing every true equation of `f`.
    pub fn contraction_stages(&self, f: &ClFormula) -> impl Iterator<Item = Stage> + '_ {
        let needed: Vec<Equation> = f.atoms().into_iter().filter(Equation::is_true).collect();
        (0..=self.depth()).flat_map(move |d| {
            let needed = needed.clone();
            self.stages_at(d).filter(move |&s| {
                let learnt = self.learnt(s);
                needed.iter().all(|q| learnt.contains(q))
            })
        })
    }
}

/// Classical truth with atoms read as equation truth.
pub fn classical(f: &ClFormula) -> bool {
    match f {
        Formula::Atom(q) => q.is_true(),
        Formula::Bot => false,
        Formula::And(a, b) => classical(a) && classical(b),
        Formula::Or(a, b) => classical(a) || classical(b),
        Formula::Imp(a, b) => !classical(a) || classical(b),
    }
}

fn forces_with(f: &ClFormula, learnt: &dyn Fn(&Equation) -> bool) -> bool {
    match f {
        Formula::Atom(q) => learnt(q),
        Formula::Bot => false,
        Formula::And(a, b) => forces_with(a, learnt) && forces_with(b, learnt),
        Formula::Or(a, b) => forces_with(a, learnt) || forces_with(b, learnt),
        Formula::Imp(..) => classical(f),
    }
}

/// Forcing at the stage with the given sets; see [`SInfinity::forces`].
pub fn forces_in_state(terms: &Terms, state: &StageState, f: &ClFormula) -> bool {
    forces_with(f, &|q| {
        terms.lookup_eq(q).is_some_and(|id| state.e.contains(&id))
    })
}

/// Assertibility in S_∞: classical truth under the true equations.
pub fn sinf_assertible(f: &ClFormula) -> bool {
    classical(f)
}

/// Validity in S_∞: forcing at the root.
pub fn sinf_valid(f: &ClFormula) -> bool {
    forces_with(f, &|_| false)
}

/// Depth-first search below a stage state for a state satisfying `goal`,
/// following only moves accepted by `allow`, at most `horizon` moves deep.
/// Returns the moves taken.
pub fn search_from(
    terms: &mut Terms,
    state: &StageState,
    horizon: usize,
    allow: &mut dyn FnMut(&Terms, Move) -> bool,
    goal: &mut dyn FnMut(&Terms, &StageState) -> bool,
) -> Option<Vec<Move>> {
    fn go(
        terms: &mut Terms,
        state: &mut StageState,
        left: usize,
        path: &mut Vec<Move>,
        allow: &mut dyn FnMut(&Terms, Move) -> bool,
        goal: &mut dyn FnMut(&Terms, &StageState) -> bool,
    ) -> bool {
        if goal(terms, state) {
            return true;
        }
        if left == 0 {
            return false;
        }
        let mut moves = Vec::new();
        terms.moves(&state.m, &state.e, &mut moves);
        for mv in moves {
            if !allow(terms, mv) {
                continue;
            }
            state.apply(mv);
            path.push(mv);
            if go(terms, state, left - 1, path, allow, goal) {
                return true;
            }
            path.pop();
            state.undo(mv);
        }
        false
    }
    let mut st = state.clone();
    let mut path = Vec::new();
    go(terms, &mut st, horizon, &mut path, allow, goal).then_some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn cl(s: &str) -> ClFormula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn first_level() {
        let s = SInfinity::explore(1).unwrap();
        let moves: Vec<String> = s
            .stages_at(1)
            .map(|t| s.move_to(t).unwrap().to_string())
            .collect();
        assert_eq!(
            moves,
            [
                "construct S(0)",
                "construct 0+0",
                "construct 0*0",
                "learn 0=0"
            ]
        );
        let root = s.constructed(Stage::ROOT);
        assert_eq!(root, vec![Nde::Zero]);
        assert!(s.learnt(Stage::ROOT).is_empty());
    }

    #[test]
    fn counts_match_materialization() {
        let s = SInfinity::explore(3).unwrap();
        let counts: Vec<u64> = (0..=3).map(|d| s.level_len(d) as u64).collect();
        assert_eq!(counts, vec![1, 4, 40, 850]);
        assert_eq!(count_stages(4), vec![1, 4, 40, 850, 31072]);
    }

    #[test]
    fn incremental_children_match_direct_generation() {
        let s = SInfinity::explore(4).unwrap();
        let mut terms = Terms::new();
        let mut buf = Vec::new();
        for d in 0..4 {
            for t in s.stages_at(d) {
                let (m, e) = s.sets(t);
                let m: Vec<u32> = m.iter().map(|x| terms.insert(x)).collect();
                let e: Vec<u32> = e.iter().map(|q| terms.insert_eq(q)).collect();
                terms.moves(&m, &e, &mut buf);
                let direct: Vec<StageMove> = buf
                    .iter()
                    .map(|&mv| match mv {
                        Move::Construct(x) => StageMove::Construct(terms.term(x)),
                        Move::Learn(q) => StageMove::Learn(terms.eq(q)),
                    })
                    .collect();
                let kids: Vec<StageMove> = s.children(t).map(|c| s.move_to(c).unwrap()).collect();
                assert_eq!(kids, direct);
            }
        }
    }

    #[test]
    fn one_change_per_edge() {
        let s = SInfinity::explore(3).unwrap();
        for d in 1..=3 {
            for t in s.stages_at(d) {
                let (a, b) = (s.sets(s.parent(t).unwrap()), s.sets(t));
                let dm = b.0.len() - a.0.len();
                let de = b.1.len() - a.1.len();
                assert_eq!(dm + de, 1);
                assert!(b.0.starts_with(&a.0) && b.1.starts_with(&a.1));
                let m: std::collections::BTreeSet<_> = b.0.iter().collect();
                assert_eq!(m.len(), b.0.len());
            }
        }
    }

    #[test]
    fn stage_ids_round_trip() {
        let s = SInfinity::explore(3).unwrap();
        for d in 0..=3 {
            for t in s.stages_at(d).step_by(37) {
                assert_eq!(s.stage_by_id(&s.stage_id(t)).unwrap(), t);
            }
        }
        assert_eq!(s.stage_id(Stage::ROOT), "t0");
        assert!(s.stage_by_id("t0_9").is_err());
    }

    #[test]
    fn forcing_examples() {
        let s = SInfinity::explore(2).unwrap();
        let eq = cl("0=0");
        assert!(!s.forces(Stage::ROOT, &eq));
        let learns = s.stage_by_id("t0_3").unwrap();
        assert!(s.forces(learns, &eq));
        let never = cl("0=S(0)");
        assert!((0..=2).all(|d| s.stages_at(d).all(|t| !s.forces(t, &never))));
        assert!(s.forces(Stage::ROOT, &cl("~~(0=0)")));
        assert!(s.forces(Stage::ROOT, &cl("0=0 -> 0=0")));
        assert!(!s.forces(Stage::ROOT, &cl("0=0 | ~(0=0)")));
    }

    #[test]
    fn horizon_evaluation_never_contradicts() {
        let s = SInfinity::explore(3).unwrap();
        for f in ["~(0=0)", "0=0 -> 0=S(0)", "~~(0=0) & 0=0", "0=0 | 0+0=0"] {
            let f = cl(f);
            for t in s.stages_at(1) {
                if let Some(v) = s.forces_within(t, &f, 2) {
                    assert_eq!(v, s.forces(t, &f));
                }
            }
        }
    }
}
