//! Property suites over exhaustive and seeded random samples. Each suite
//! returns how many instances it checked and the first violations found.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::arith::{copy_model, substitute, ArithModel, Equation};
use crate::calculus::{check_derivation, prove_bounded, SearchFailure, Sequent};
use crate::decide::{class_assertibility, decide_consequence, decide_validity, DEFAULT_VAR_BUDGET};
use crate::enumerate::{formulas, step_value};
use crate::generations::{induce_gstructure, GStructure, IntuitionisticModel};
use crate::kripke::KripkeModel;
use crate::oracles::{cpc_valid, ht_valid, ipc_prove, IpcResult, DEFAULT_IPC_VAR_BUDGET};
use crate::syntax::{Formula, Var};
use crate::{random, Fm};

const KEEP: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: impl FnOnce() -> String) {
        if self.violations.len() < KEEP {
            self.violations.push(msg());
        }
    }

    fn expect(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.fail(msg);
        }
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.checked += other.checked;
        for v in other.violations {
            if self.violations.len() < KEEP {
                self.violations.push(v);
            }
        }
        self
    }
}

fn par_check(items: &[Fm], f: impl Fn(&Fm, &mut Outcome) + Sync) -> Outcome {
    items
        .par_chunks(4096)
        .map(|chunk| {
            let mut o = Outcome::default();
            for a in chunk {
                o.checked += 1;
                f(a, &mut o);
            }
            o
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Outcome::default(), Outcome::merge)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Class-level assertibility agrees with classical validity on every
/// formula over `p, q` with at most `max_connectives` connectives and on
/// `random` formulas over four variables of depth at most 6.
pub fn assertibility_is_cpc(max_connectives: usize, random: usize, seed: u64) -> Outcome {
    let mut items = formulas(&random::vars(2), max_connectives);
    let mut r = rng(seed);
    let vars = random::vars(4);
    items.extend((0..random).map(|_| random::formula(&mut r, &vars, 6)));
    par_check(&items, |a, o| {
        let sf = class_assertibility(a, DEFAULT_VAR_BUDGET).expect("small formula");
        let cpc = cpc_valid(a);
        o.expect(sf == cpc, || {
            format!("`{a}`: class assertibility {sf}, CPC {cpc}")
        });
    })
}

/// `IPC ⊆ HT ⊆ SF ⊆ CPC` on every formula over `p, q` with at most
/// `max_connectives` connectives.
pub fn logic_chain(max_connectives: usize) -> Outcome {
    let items = formulas(&random::vars(2), max_connectives);
    par_check(&items, |a, o| {
        let ipc = ipc_prove(a, DEFAULT_IPC_VAR_BUDGET)
            .expect("two variables")
            .is_provable();
        let ht = ht_valid(a);
        let sf = decide_validity(a, DEFAULT_VAR_BUDGET)
            .expect("two variables")
            .is_valid();
        let cpc = cpc_valid(a);
        o.expect(!ipc || ht, || format!("`{a}`: IPC but not HT"));
        o.expect(!ht || sf, || format!("`{a}`: HT but not SF"));
        o.expect(!sf || cpc, || format!("`{a}`: SF but not CPC"));
    })
}

fn leq_pairs(w: &KripkeModel) -> impl Iterator<Item = (usize, usize)> + '_ {
    let t = w.tree();
    (0..t.len()).flat_map(move |k| t.up_set(k).into_iter().map(move |l| (k, l)))
}

/// Forcing properties on one model and formula pair.
fn model_properties(w: &KripkeModel, a: &Fm, b: &Fm, o: &mut Outcome) {
    let t = w.tree();
    let n = w.len();
    let va = w.eval(a);
    o.checked += 1;
    for (k, l) in leq_pairs(w) {
        o.expect(!va[k] || va[l], || {
            format!("persistence of `{a}` from {} to {}", t.name(k), t.name(l))
        });
    }
    let p = w.profile(a);
    o.expect(p.valid == va.iter().all(|&x| x), || {
        format!("validity of `{a}` is root forcing")
    });
    o.expect(!p.assertible || p.prevalent, || {
        format!("full prevalence of `{a}`")
    });

    let neg = w.eval(&Formula::not(a.clone()));
    let none = !va.iter().any(|&x| x);
    o.expect(neg.iter().all(|&x| x == none), || {
        format!("negation globality of `~({a})`")
    });

    let imp = Formula::imp(a.clone(), b.clone());
    let nf = Formula::or(Formula::not(a.clone()), Formula::not_not(b.clone()));
    o.expect(w.eval(&imp) == w.eval(&nf), || {
        format!("`{imp}` against `{nf}` pointwise")
    });

    let (pa, pb) = (p, w.profile(b));
    let and = w.profile(&Formula::and(a.clone(), b.clone()));
    let or = w.profile(&Formula::or(a.clone(), b.clone()));
    let pi = w.profile(&imp);
    o.expect(and.valid == (pa.valid && pb.valid), || {
        format!("validity of `{a}` & `{b}`")
    });
    o.expect(or.valid == (pa.valid || pb.valid), || {
        format!("validity of `{a}` | `{b}`")
    });
    o.expect(pi.valid == pi.assertible, || {
        format!("validity of `{imp}` is assertibility")
    });
    o.expect(pi.assertible == (!pa.assertible || pb.assertible), || {
        format!("assertibility of `{imp}`")
    });

    for k in 0..n {
        let name = t.name(k);
        let sub = w.generated_submodel(name).expect("node of the model");
        let vs = sub.eval(a);
        for (i, l) in sub.tree().names().iter().enumerate() {
            let at = w.node_index(l).expect("shared name");
            o.expect(vs[i] == va[at], || {
                format!("`{a}` at {l} in the submodel generated by {name}")
            });
        }
    }

    for k in w.contraction_nodes(a) {
        let c = w.contract(a, &k).expect("contraction node");
        let at_k = c.forces(&k, a).expect("node kept");
        let at_r = c.forces_at(0, a);
        o.expect(at_k == pa.assertible, || {
            format!("assertibility of `{a}` after contraction at {k}")
        });
        o.expect(at_r == pa.valid, || {
            format!("validity of `{a}` after contraction at {k}")
        });
    }
}

/// Forcing, status and contraction properties on `models` random models
/// (at most 12 nodes, 4 variables), each against `per_model` random
/// formulas of depth at most 4, and strong contraction on `pairs` random
/// consequence queries checked in every model.
pub fn semantics(models: usize, per_model: usize, pairs: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let vars = random::vars(4);
    let sample: Vec<(KripkeModel, Vec<Fm>)> = (0..models)
        .map(|_| {
            let w = random::model(&mut r, 12, &vars);
            let fs = (0..per_model)
                .map(|_| random::formula(&mut r, &vars, 4))
                .collect();
            (w, fs)
        })
        .collect();
    let out = sample
        .par_iter()
        .map(|(w, fs)| {
            let mut o = Outcome::default();
            for (i, a) in fs.iter().enumerate() {
                model_properties(w, a, &fs[(i + 1) % fs.len()], &mut o);
            }
            o
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Outcome::default(), Outcome::merge);

    let queries: Vec<(Vec<Fm>, Vec<Fm>)> = (0..pairs)
        .map(|_| {
            let g = (0..r.gen_range(0..=3))
                .map(|_| random::formula(&mut r, &vars, 3))
                .collect();
            let d = (0..r.gen_range(0..=2))
                .map(|_| random::formula(&mut r, &vars, 3))
                .collect();
            (g, d)
        })
        .collect();
    let strong = queries
        .par_iter()
        .map(|(g, d)| {
            let mut o = Outcome::default();
            o.checked += 1;
            let verdict = decide_consequence(g, d, DEFAULT_VAR_BUDGET).expect("four variables");
            if let Some(c) = verdict.countermodel() {
                let k = c.model.node_index(&c.node).expect("countermodel node");
                let refutes = g.iter().all(|x| c.model.forces_at(k, x))
                    && !d.iter().any(|x| c.model.forces_at(k, x));
                o.expect(refutes, || {
                    format!("countermodel for {g:?} |- {d:?} does not refute")
                });
            }
            let refuted = sample
                .iter()
                .find_map(|(w, _)| w.consequence_violation(g, d).map(|k| (w, k)));
            if let (true, Some((w, k))) = (verdict.is_valid(), refuted) {
                o.fail(|| {
                    format!(
                        "valid consequence refuted at {} of a {}-node model",
                        w.tree().name(k),
                        w.len()
                    )
                });
            }
            o
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Outcome::default(), Outcome::merge);
    out.merge(strong)
}

/// A random sequent over three variables.
fn random_sequent<R: Rng>(r: &mut R, vars: &[Var]) -> Sequent {
    let ante = (0..r.gen_range(0..=2))
        .map(|_| random::formula(r, vars, 3))
        .collect();
    let succ = (0..r.gen_range(0..=2))
        .map(|_| random::formula(r, vars, 3))
        .collect();
    Sequent::new(ante, succ)
}

/// Runs the proof search on random sequents until `successes`
/// derivations are found. Every derivation must check and conclude a
/// valid sequent; every failure must be a sequent with a countermodel.
pub fn search_soundness(successes: usize, depth: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let vars = random::vars(3);
    let mut out = Outcome::default();
    let mut found = 0;
    let mut attempts = 0;
    while found < successes && attempts < 50 * successes.max(1) {
        let batch: Vec<Sequent> = (0..256).map(|_| random_sequent(&mut r, &vars)).collect();
        attempts += batch.len();
        let results: Vec<(bool, Outcome)> = batch
            .par_iter()
            .map(|s| {
                let mut o = Outcome::default();
                o.checked += 1;
                let valid = decide_consequence(&s.ante, &s.succ, DEFAULT_VAR_BUDGET)
                    .expect("three variables")
                    .is_valid();
                match prove_bounded(s, depth) {
                    Ok(d) => {
                        o.expect(d.conclusion == *s, || {
                            format!("`{s}`: derivation of `{}`", d.conclusion)
                        });
                        if let Err(diags) = check_derivation(&d) {
                            o.fail(|| format!("`{s}`: {}", diags[0]));
                        }
                        o.expect(valid, || format!("`{s}`: derived but not valid"));
                        (true, o)
                    }
                    Err(SearchFailure::NotFound(leaf)) => {
                        o.expect(!valid, || format!("`{s}`: valid but stuck at `{leaf}`"));
                        (false, o)
                    }
                    Err(e) => {
                        o.expect(!valid, || format!("`{s}`: valid but {e}"));
                        (false, o)
                    }
                }
            })
            .collect();
        for (ok, o) in results {
            if found < successes {
                found += ok as usize;
                out = out.merge(o);
            }
        }
    }
    out.expect(found == successes, || {
        format!("only {found} of {successes} searches succeeded")
    });
    out
}

/// A substitution of `vars` by equations learnt somewhere in `s`, or by
/// equations never learnt.
fn random_sigma<R: Rng>(r: &mut R, s: &ArithModel, vars: &[Var]) -> BTreeMap<Var, Equation> {
    let learnt: Vec<Equation> = s.equations().into_iter().collect();
    let other: [Equation; 2] = [
        "0=S(0)".parse().expect("equation"),
        "S(S(0))*0=0".parse().expect("equation"),
    ];
    vars.iter()
        .map(|v| {
            let q = if !learnt.is_empty() && r.gen_bool(0.75) {
                learnt[r.gen_range(0..learnt.len())].clone()
            } else {
                other[r.gen_range(0..2)].clone()
            };
            (v.clone(), q)
        })
        .collect()
}

/// `t` forces `A` in the copy model iff `t` forces `sigma(A)` in `S`, on
/// `models` random arithmetic models with `per_model` random formulas of
/// depth at most 4.
pub fn copy_model_correspondence(models: usize, per_model: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let vars = random::vars(3);
    let mut out = Outcome::default();
    for _ in 0..models {
        let s = random::arith_model(&mut r, 3, 8);
        let sigma = random_sigma(&mut r, &s, &vars);
        let w = copy_model(&s, &sigma);
        for _ in 0..per_model {
            let a = random::formula(&mut r, &vars, 4);
            let sa = substitute(&a, &sigma);
            out.checked += 1;
            let (lhs, rhs) = (w.eval(&a), s.eval(&sa));
            if let Some(k) = (0..s.len()).find(|&k| lhs[k] != rhs[k]) {
                out.fail(|| format!("`{a}` under {sigma:?} at {}", s.tree().name(k)));
            }
        }
    }
    out
}

/// `G`, `I_G` and `G_{I_G}` evaluated together.
struct Joint<'a> {
    g: &'a GStructure,
    ig: &'a IntuitionisticModel,
    gi: &'a GStructure,
}

type Bits = fixedbitset::FixedBitSet;

impl Algebra for Joint<'_> {
    type Value = (Bits, Vec<bool>, Bits);

    fn atom(&self, v: &Var) -> Self::Value {
        (self.g.atom(v), self.ig.atom(v), self.gi.atom(v))
    }

    fn bot(&self) -> Self::Value {
        (self.g.bot(), self.ig.bot(), self.gi.bot())
    }

    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (
            self.g.and(&a.0, &b.0),
            self.ig.and(&a.1, &b.1),
            self.gi.and(&a.2, &b.2),
        )
    }

    fn or(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (
            self.g.or(&a.0, &b.0),
            self.ig.or(&a.1, &b.1),
            self.gi.or(&a.2, &b.2),
        )
    }

    fn imp(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (
            self.g.imp(&a.0, &b.0),
            self.ig.imp(&a.1, &b.1),
            self.gi.imp(&a.2, &b.2),
        )
    }
}

/// The generation properties of one structure for one formula.
fn generation_properties(j: &Joint<'_>, a: &Fm, v: &(Bits, Vec<bool>, Bits), o: &mut Outcome) {
    o.checked += 1;
    let (g, gi) = (j.g, j.gi);
    for (m, member) in g.members().iter().enumerate() {
        let w = &member.model;
        let t = w.tree();
        let at = |k: usize| v.0.contains(g.pair(m, k));
        let some = (0..w.len()).any(at);
        o.expect(v.1[m] == some, || {
            format!(
                "`{a}`: I_G at {} against forcing in the member",
                member.name
            )
        });
        if some {
            for l in 0..w.len() {
                let reach = t.up_set(l).into_iter().any(at);
                o.expect(reach, || {
                    format!(
                        "`{a}`: prevalence in generation {} fails above {}",
                        member.name,
                        t.name(l)
                    )
                });
            }
        }
        if let Formula::Imp(..) = a {
            o.expect(at(0) == some, || {
                format!("`{a}`: root implication in {}", member.name)
            });
        }
    }
    for (u, member) in gi.members().iter().enumerate() {
        let top = member
            .model
            .node_index(&member.name)
            .expect("world is the top of its chain");
        o.expect(v.1[u] == v.2.contains(gi.pair(u, top)), || {
            format!("`{a}`: G_I at world {}", member.name)
        });
    }
}

/// On `structures` random g-structures (at most 4 members of at most 6
/// nodes), the translations to and from intuitionistic models agree
/// with generation forcing, and prevalence in generation and the root
/// implication property hold, for every formula over `p, q` with at most
/// `max_connectives` connectives.
pub fn generations(structures: usize, max_connectives: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let vars = random::vars(2);
    let sample: Vec<GStructure> = (0..structures)
        .map(|_| random::gstructure(&mut r, 4, 6, &vars))
        .collect();
    sample
        .par_iter()
        .map(|g| {
            let ig = g.induce_intuitionistic();
            let gi = induce_gstructure(&ig);
            let j = Joint {
                g,
                ig: &ig,
                gi: &gi,
            };
            let mut o = Outcome::default();
            crate::enumerate::for_each(
                &vars,
                max_connectives,
                |s| step_value(&j, s),
                |_, (a, v)| generation_properties(&j, a, v, &mut o),
            );
            o
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Outcome::default(), Outcome::merge)
}

/// For `count` random formulas refuted by the intuitionistic oracle, the
/// g-structure of the countermodel refutes them at its root pair.
pub fn ipc_countermodels(count: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let vars = random::vars(3);
    let mut out = Outcome::default();
    let mut tries = 0;
    while out.checked < count && tries < 1000 * count.max(1) {
        tries += 1;
        let a = random::formula(&mut r, &vars, 4);
        let Ok(IpcResult::Refuted(i)) = ipc_prove(&a, DEFAULT_IPC_VAR_BUDGET) else {
            continue;
        };
        out.checked += 1;
        let gi = induce_gstructure(&i);
        let root = &gi.members()[0];
        let forced = gi
            .gen_forces(&root.name, &root.name, &a)
            .expect("root pair");
        out.expect(!forced, || format!("`{a}` holds at the root pair of G_I"));
        out.expect(!i.eval(&a)[0], || {
            format!("`{a}` holds at the root of its countermodel")
        });
    }
    let n = out.checked;
    out.expect(n == count, || format!("found only {n} refuted formulas"));
    out
}
