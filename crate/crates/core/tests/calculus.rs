use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use finitist::calculus::{
    check_derivation, macro_derivation, prove_bounded, read_derivation, write_derivation,
    Derivation, Macro, SearchFailure, Sequent,
};
use finitist::decide::{decide_consequence, decide_stability, DEFAULT_VAR_BUDGET};
use finitist::syntax::parse_formula;
use finitist::Fm;

fn corpus() -> Vec<(String, Derivation)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "sexp"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let d = read_derivation(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, d)
        })
        .collect()
}

fn valid(s: &Sequent) -> bool {
    decide_consequence(&s.ante, &s.succ, DEFAULT_VAR_BUDGET)
        .unwrap()
        .is_valid()
}

fn sq(s: &str) -> Sequent {
    s.parse().unwrap()
}

#[test]
fn corpus_checks_and_is_valid() {
    for (name, d) in corpus() {
        if let Err(diags) = check_derivation(&d) {
            panic!("{name}: {}", diags[0]);
        }
        assert!(valid(&d.conclusion), "{name}");
    }
}

#[test]
fn corpus_covers_stated_sequents() {
    let have: BTreeSet<String> = corpus()
        .into_iter()
        .map(|(_, d)| d.conclusion.to_string())
        .collect();
    for s in [
        "p & q |- p & q",
        "p |- ~~p",
        "~~~p |- ~p",
        "p -> q |- ~p | ~~q",
        "~p | ~~q |- p -> q",
        "|- ~p | ~~p",
        "~~(p & q) |- ~~p & ~~q",
        "~~p & ~~q |- ~~(p & q)",
        "~~(p | q) |- ~~p | ~~q",
        "~~(p -> q) |- p -> q",
        "~~_|_ |- _|_",
        "~~((p -> q) & ~r) |- (p -> q) & ~r",
        "|- (p -> q) | ~(p -> q)",
        "p, p -> ~q |- ~q",
    ] {
        assert!(have.contains(&sq(s).to_string()), "missing {s}");
    }
}

#[test]
fn search_rederives_corpus() {
    for (name, d) in corpus() {
        let start = Instant::now();
        let found = prove_bounded(&d.conclusion, 30).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(start.elapsed() < Duration::from_secs(5), "{name}");
        assert_eq!(found.conclusion, d.conclusion);
        assert!(check_derivation(&found).is_ok(), "{name}");
    }
}

#[test]
fn corpus_round_trips_through_writer() {
    for (name, d) in corpus() {
        assert_eq!(read_derivation(&write_derivation(&d)).unwrap(), d, "{name}");
    }
}

#[test]
fn stated_search_examples() {
    assert!(prove_bounded(&sq("|- ~p | ~~p"), 30).is_ok());
    assert!(prove_bounded(&sq("~~(p -> q) |- p -> q"), 30).is_ok());
    let lem = sq("|- p | ~p");
    assert!(matches!(
        prove_bounded(&lem, 30),
        Err(SearchFailure::NotFound(_))
    ));
    let verdict = decide_consequence(&lem.ante, &lem.succ, DEFAULT_VAR_BUDGET).unwrap();
    let c = verdict.countermodel().unwrap();
    assert_eq!(c.model.to_text(), "nodes: r k\nedge: r k\nval: p k\n");
    assert_eq!(c.node, "r");
}

const INSTANCES: [&str; 12] = [
    "p",
    "_|_",
    "~p",
    "p -> q",
    "p & q",
    "p | q",
    "~p | q",
    "(p -> q) & ~r",
    "(p -> q) | ~~r",
    "~~p -> p",
    "p & ~p",
    "~(p | q) | (q -> r)",
];

#[test]
fn curated_instances() {
    for a in INSTANCES {
        let fa: Fm = parse_formula(a).unwrap();
        let nfa = Fm::not(fa.clone());
        let imp = |s: &Fm| Fm::imp(fa.clone(), s.clone());
        let mut goals = vec![
            Sequent::new(vec![fa.clone()], vec![fa.clone()]),
            Sequent::new(vec![fa.clone()], vec![Fm::not_not(fa.clone())]),
            Sequent::new(vec![Fm::not_not(nfa.clone())], vec![nfa.clone()]),
            Sequent::new(vec![], vec![Fm::or(nfa.clone(), Fm::not_not(fa.clone()))]),
        ];
        for s in ["~q", "p -> r", "_|_"] {
            let s: Fm = parse_formula(s).unwrap();
            goals.push(Sequent::new(vec![fa.clone(), imp(&s)], vec![s.clone()]));
        }
        if fa.is_st() {
            goals.push(Sequent::new(
                vec![Fm::not_not(fa.clone())],
                vec![fa.clone()],
            ));
            goals.push(Sequent::new(vec![], vec![Fm::or(fa.clone(), nfa.clone())]));
        }
        for g in goals {
            let d = prove_bounded(&g, 30).unwrap_or_else(|e| panic!("{g}: {e}"));
            assert!(check_derivation(&d).is_ok(), "{g}");
            assert!(valid(&g), "{g}");
        }
    }
}

#[test]
fn stability_equivalence() {
    for a in INSTANCES {
        let fa: Fm = parse_formula(a).unwrap();
        let goal = Sequent::new(vec![Fm::not_not(fa.clone())], vec![fa.clone()]);
        let stable = decide_stability(&fa, DEFAULT_VAR_BUDGET).unwrap();
        assert_eq!(prove_bounded(&goal, 30).is_ok(), stable, "{a}");
        if fa.is_st() {
            assert!(stable, "{a}");
        }
    }
}

#[test]
fn macros_expand_to_checked_derivations() {
    let id = |s: &str| prove_bounded(&sq(s), 30).unwrap();
    let cases = [
        (Macro::NnR, vec![id("|- ~p, ~~p")], "|- ~p, ~~~~p"),
        (Macro::NnL, vec![id("p & q |- q")], "~~(p & q) |- ~~q"),
        (
            Macro::ImpLStar,
            vec![id("r |- p, r"), id("~q, r |- ~q")],
            "r, r -> ~q, r |- p, ~q",
        ),
        (
            Macro::ImpRStar,
            vec![id("p, p -> q |- p")],
            "p |- (p -> q) -> p",
        ),
    ];
    for (m, premises, expected) in cases {
        let d = macro_derivation(m, premises).unwrap();
        assert!(check_derivation(&d).is_ok(), "{m}");
        assert_eq!(d.conclusion, sq(expected));
        assert!(valid(&d.conclusion), "{m}");
    }
}
