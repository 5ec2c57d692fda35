//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finitist::arith::{self, Equation, SInfinity, Stage};
use finitist::calculus::{check_derivation, prove_bounded, read_derivation, DEFAULT_SEARCH_DEPTH};
use finitist::checks::{self, Outcome};
use finitist::decide::{decide_consequence, decide_validity, Verdict, DEFAULT_VAR_BUDGET};
use finitist::oracles::{cpc_valid, ht_valid, ipc_prove, DEFAULT_IPC_VAR_BUDGET};
use finitist::{random, ClFormula, Fm, Formula};

/// Result of one criterion: failures found, or an empty list.
struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome(&mut self, name: &str, o: Outcome) {
        self.expect(o.checked > 0, || format!("{name}: nothing checked"));
        if let Some(v) = o.violations.first() {
            self.failures.push(format!(
                "{name}: {} violations, first: {v}",
                o.violations.len()
            ));
        }
    }

    fn within(&mut self, name: &str, took: Duration, limit: Duration) {
        self.expect(took < limit, || {
            format!("{name} took {took:.2?}, limit {limit:?}")
        });
    }
}

fn fm(s: &str) -> Fm {
    s.parse().unwrap()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// A countermodel refuting `gamma |- delta` at its node.
fn refutes(v: &Verdict, gamma: &[Fm], delta: &[Fm]) -> bool {
    let Some(c) = v.countermodel() else {
        return false;
    };
    let forced = |f: &Fm| c.model.forces(&c.node, f).unwrap();
    gamma.iter().all(forced) && !delta.iter().any(forced)
}

fn st_instances(n: usize) -> Vec<Fm> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let vars = random::vars(3);
    let mut out = Vec::new();
    while out.len() < n {
        let f = random::formula(&mut rng, &vars, 4);
        if f.is_st() && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn criterion_1(c: &mut Check) {
    let start = Instant::now();
    for s in ["~p | ~~p", "~~p -> p", "((p -> q) -> p) -> p", "p -> p"] {
        let v = decide_validity(&fm(s), DEFAULT_VAR_BUDGET).unwrap();
        c.expect(v.is_valid(), || format!("{s} should be valid"));
    }
    for st in st_instances(10) {
        let f = Formula::or(st.clone(), Formula::not(st.clone()));
        let v = decide_validity(&f, DEFAULT_VAR_BUDGET).unwrap();
        c.expect(v.is_valid(), || format!("{f} should be valid"));
    }
    for s in ["p | ~p", "p", "_|_"] {
        let v = decide_validity(&fm(s), DEFAULT_VAR_BUDGET).unwrap();
        c.expect(refutes(&v, &[], &[fm(s)]), || {
            format!("{s} should be invalid with a countermodel")
        });
    }
    let v = decide_consequence(&[fm("~~p")], &[fm("p")], DEFAULT_VAR_BUDGET).unwrap();
    c.expect(refutes(&v, &[fm("~~p")], &[fm("p")]), || {
        "~~p |= p should fail".into()
    });
    c.within("verdict list", start.elapsed(), secs(1));
}

fn criterion_2(c: &mut Check) {
    let start = Instant::now();
    let o = checks::assertibility_is_cpc(5, 5000, 11);
    // Formulas over {p, q} with at most 5 connectives, then 5000 random ones.
    let exhaustive: usize = [2, 14, 182, 2954, 53690, 1045478].iter().sum();
    c.expect(o.checked == exhaustive + 5000, || {
        format!("checked {} formulas", o.checked)
    });
    c.outcome("assertibility", o);
    c.within("assertibility", start.elapsed(), secs(30));
}

fn criterion_3(c: &mut Check) {
    let start = Instant::now();
    c.outcome("chain", checks::logic_chain(5));
    let status = |s: &str| {
        let f = fm(s);
        let ipc = ipc_prove(&f, DEFAULT_IPC_VAR_BUDGET).unwrap().is_provable();
        let sf = decide_validity(&f, DEFAULT_VAR_BUDGET).unwrap().is_valid();
        [ipc, ht_valid(&f), sf, cpc_valid(&f)]
    };
    let peirce = status("((p -> q) -> p) -> p");
    c.expect(!peirce[1] && peirce[2], || {
        "Peirce separates HT from SF".into()
    });
    let lem = status("p | ~p");
    c.expect(!lem[2] && lem[3], || "p | ~p separates SF from CPC".into());
    let wlem = status("~p | ~~p");
    c.expect(!wlem[0] && wlem[1], || {
        "~p | ~~p separates IPC from HT".into()
    });
    c.within("chain", start.elapsed(), secs(60));
}

fn criterion_4(c: &mut Check) {
    let start = Instant::now();
    c.outcome("semantics", checks::semantics(500, 50, 200, 12));
    c.within("semantics", start.elapsed(), secs(60));
}

fn criterion_5(c: &mut Check) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sexp"))
        .collect();
    files.sort();
    c.expect(!files.is_empty(), || "empty corpus".into());
    for p in files {
        let name = p.file_name().unwrap().to_string_lossy().into_owned();
        let d = match read_derivation(&std::fs::read_to_string(&p).unwrap()) {
            Ok(d) => d,
            Err(e) => {
                c.failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        c.expect(check_derivation(&d).is_ok(), || {
            format!("{name} does not check")
        });
        let start = Instant::now();
        let found = prove_bounded(&d.conclusion, DEFAULT_SEARCH_DEPTH);
        c.within(&name, start.elapsed(), secs(5));
        c.expect(found.is_ok_and(|e| check_derivation(&e).is_ok()), || {
            format!("search does not re-derive {name}")
        });
    }
    let o = checks::search_soundness(1000, DEFAULT_SEARCH_DEPTH, 13);
    c.outcome("search soundness", o);
}

fn criterion_6(c: &mut Check) {
    let start = Instant::now();
    let s = SInfinity::explore(6);
    c.within("explore depth 6", start.elapsed(), secs(10));
    let s = match s {
        Ok(s) => s,
        Err(e) => {
            c.failures.push(e.to_string());
            return;
        }
    };
    let cl = |t: &str| t.parse::<ClFormula>().unwrap();
    let a: Equation = "0=0".parse().unwrap();
    let a = Formula::Atom(a);
    let b = Formula::imp(a.clone(), a.clone());
    let t0 = Stage::ROOT;
    c.expect(!s.forces(t0, &cl("0=0")), || "t0 forces 0=0".into());
    c.expect(
        !s.forces(t0, &Formula::or(a.clone(), Formula::not(a.clone()))),
        || "t0 forces 0=0 | ~0=0".into(),
    );
    c.expect(
        s.forces(t0, &Formula::imp(b.clone(), a.clone())) && s.forces(t0, &b) && !s.forces(t0, &a),
        || "modus ponens witness".into(),
    );
    c.expect(!arith::sinf_valid(&a) && arith::sinf_valid(&b), || {
        "validity at the root".into()
    });
    c.outcome(
        "copy models",
        checks::copy_model_correspondence(100, 50, 14),
    );
}

fn criterion_7(c: &mut Check) {
    let start = Instant::now();
    c.outcome("generations", checks::generations(100, 4, 15));
    let o = checks::ipc_countermodels(20, 16);
    c.expect(o.checked == 20, || {
        format!("{} IPC countermodels", o.checked)
    });
    c.outcome("IPC countermodels", o);
    c.within("generations", start.elapsed(), secs(120));
}

const MODEL: &str = "nodes: r a b\nedge: r a\nedge: r b\nval: p a b\n";
const ARITH: &str = "stages: t0 t1\nedge: t0 t1\ne: t1 0=0\n";
const GEN: &str =
    "model: w1\nnodes: r\nval: p\n\nmodel: w2\nnodes: r k\nedge: r k\nval: p k\ngen-edge: w1 w2\n";

fn criterion_8(c: &mut Check) {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let (model, arith_model, gen) = (
        write("m.txt", MODEL),
        write("a.txt", ARITH),
        write("g.txt", GEN),
    );
    let proof = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/nn_or_out.sexp");
    let proof = proof.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["decide", "p | ~p"],
        vec!["decide", "((p -> q) -> p) -> p"],
        vec!["consequence", "~~p |- p"],
        vec!["assertible", "p & ~p"],
        vec!["stable", "p -> q"],
        vec!["force", "--model", &model, "--node", "r", "~~p"],
        vec!["profile", "--model", &model, "p | q"],
        vec!["prove", "|- ~p | ~~p"],
        vec!["prove", "~~(p | q) |- ~~p | ~~q"],
        vec!["prove", "|- p | ~p"],
        vec!["check-proof", proof],
        vec!["compare", "((p->q)->p)->p"],
        vec!["arith", "explore", "--depth", "3", "--list"],
        vec![
            "arith",
            "force",
            "--stage",
            "t0_2",
            "--horizon",
            "2",
            "0=0 -> 0=0",
        ],
        vec![
            "arith",
            "force",
            "--model",
            &arith_model,
            "--stage",
            "t1",
            "0=0 & ~0=S(0)",
        ],
        vec!["gen", "check", &gen],
        vec!["gen", "force", &gen, "--member", "w1", "--node", "r", "~~p"],
        vec!["--format", "json", "decide", "p | ~p"],
        vec!["--format", "json", "prove", "|- ~p | ~~p"],
        vec!["--var-budget", "1", "decide", "p | q"],
        vec!["decide", "p &"],
    ];
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_finitist"))
            .args(args)
            .output()
            .unwrap();
        (o.stdout, o.stderr, o.status.code())
    };
    for args in &commands {
        let first = run(args);
        let second = run(args);
        c.expect(first == second, || {
            format!("`{}` differs between runs", args.join(" "))
        });
        c.expect(!first.0.is_empty() || !first.1.is_empty(), || {
            format!("`{}` prints nothing", args.join(" "))
        });
    }
}

type Criterion = (&'static str, fn(&mut Check));

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("verdict list", criterion_1),
        ("assertibility is classical", criterion_2),
        ("logic chain", criterion_3),
        ("semantic properties", criterion_4),
        ("calculus corpus and search", criterion_5),
        ("arithmetic", criterion_6),
        ("generations", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut c = Check::new();
        let start = Instant::now();
        run(&mut c);
        let took = start.elapsed();
        let status = if c.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {}: {status} {name} ({took:.2?})", i + 1);
        for f in &c.failures {
            println!("    {f}");
        }
        failed += usize::from(!c.failures.is_empty());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
