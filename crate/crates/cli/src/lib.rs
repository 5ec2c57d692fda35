//! Command-line front end: argument parsing, command dispatch and report
//! rendering.
//!
//! Exit codes: 0 when the query is answered affirmatively, 1 when it is
//! answered negatively, 2 on input errors and 3 when a budget runs out.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use finitist::arith::{self, ArithModel, ExploreError, SInfinity, Terms};
use finitist::calculus::{
    check_derivation, prove_bounded, read_derivation, write_derivation, SearchFailure, Sequent,
};
use finitist::decide::{self, BudgetExceeded, Countermodel, Verdict};
use finitist::generations::{GStructure, GenErrorKind};
use finitist::kripke::KripkeModel;
use finitist::oracles::{self, IpcResult};
use finitist::{ClFormula, Fm, Formula};

#[derive(Debug, Parser)]
#[command(
    name = "finitist",
    version,
    about = "Strict finitistic logic workbench"
)]
pub struct Cli {
    /// Most distinct variables a decision query may mention.
    #[arg(long, global = true, value_name = "N")]
    pub var_budget: Option<usize>,
    /// Proof search depth (`prove`) or exploration depth (`arith explore`).
    #[arg(long, global = true, value_name = "N")]
    pub depth: Option<usize>,
    /// Levels above a stage searched by the raw frontier check of `arith force`.
    #[arg(long, global = true, value_name = "N")]
    pub horizon: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validity of a formula, with a countermodel when invalid.
    Decide { formula: String },
    /// Consequence `G |- D` in every model and node.
    Consequence { sequent: String },
    /// Whether a formula is forced somewhere in every model.
    Assertible { formula: String },
    /// Whether `~~A |= A`.
    Stable { formula: String },
    /// Forcing at one node of a model file.
    Force {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "ID")]
        node: String,
        formula: String,
    },
    /// Validity, assertibility and prevalence in a model file.
    Profile {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        formula: String,
    },
    /// Backward proof search in SF.
    Prove { sequent: String },
    /// Checks a derivation file.
    CheckProof { file: PathBuf },
    /// Status in CPC, HT, SF and IPC.
    Compare { formula: String },
    /// The arithmetic model S_inf and finite arithmetic models.
    #[command(subcommand)]
    Arith(ArithCommand),
    /// Generation structures.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum ArithCommand {
    /// Materializes S_inf up to `--depth` and counts stages per level.
    Explore(ExploreArgs),
    /// Forcing of a closed formula at a stage of S_inf or of a model file.
    Force {
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        #[arg(long, value_name = "ID")]
        stage: String,
        formula: String,
    },
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    /// Lists every stage with the move leading to it.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Validates a g-structure file.
    Check { file: PathBuf },
    /// Generation forcing at a member and node.
    Force {
        file: PathBuf,
        #[arg(long, value_name = "W")]
        member: String,
        #[arg(long, value_name = "K")]
        node: String,
        formula: String,
    },
}

/// Outcome of one command.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub verdict: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit: u8,
}

impl Report {
    fn new(verdict: impl Into<String>, exit: u8) -> Self {
        Report {
            verdict: verdict.into(),
            exit,
            ..Report::default()
        }
    }

    fn yes_no(yes: bool, affirmative: &str, negative: &str) -> Self {
        if yes {
            Report::new(affirmative, 0)
        } else {
            Report::new(negative, 1)
        }
    }

    fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    fn with_countermodel(mut self, c: &Countermodel) -> Self {
        self.countermodel = Some(c.model.to_text());
        self.node = Some(c.node.clone());
        self
    }

    /// An input error.
    pub fn input_error(msg: impl Into<String>) -> Self {
        Report {
            verdict: "Error".into(),
            error: Some(msg.into()),
            exit: 2,
            ..Report::default()
        }
    }

    /// A budget ran out.
    pub fn budget(msg: impl Into<String>) -> Self {
        Report {
            verdict: "Indeterminate".into(),
            budget: Some(msg.into()),
            exit: 3,
            ..Report::default()
        }
    }
}

/// Renders a report. Errors go to the second string in text mode.
pub fn emit_report(r: &Report, format: Format) -> (String, String) {
    match format {
        Format::Json => {
            let mut line = serde_json::to_string(r).expect("reports serialize");
            line.push('\n');
            (line, String::new())
        }
        Format::Text => {
            if let Some(e) = &r.error {
                return (String::new(), format!("error: {e}\n"));
            }
            let mut out = format!("{}\n", r.verdict);
            for d in &r.details {
                out.push_str(d);
                out.push('\n');
            }
            if let Some(b) = &r.budget {
                out.push_str(b);
                out.push('\n');
            }
            if let Some(m) = &r.countermodel {
                match &r.node {
                    Some(n) => out.push_str(&format!("# countermodel, fails at {n}\n")),
                    None => out.push_str("# countermodel\n"),
                }
                out.push_str(m);
            }
            if let Some(d) = &r.derivation {
                out.push_str(d);
            }
            (out, String::new())
        }
    }
}

/// Parses arguments and runs the command. Clap handles its own usage
/// errors (exit 2) and `--help`.
pub fn run<I, T>(args: I) -> Result<(Report, Format), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let format = cli.format;
    Ok((execute(&cli), format))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Report {
    Runner { cli }.run().unwrap_or_else(|r| *r)
}

struct Runner<'a> {
    cli: &'a Cli,
}

type Outcome = Result<Report, Box<Report>>;

fn formula(text: &str) -> Result<Fm, Box<Report>> {
    text.parse()
        .map_err(|e| Report::input_error(format!("formula `{text}`: {e}")).into())
}

fn cl_formula(text: &str) -> Result<ClFormula, Box<Report>> {
    text.parse()
        .map_err(|e| Report::input_error(format!("formula `{text}`: {e}")).into())
}

fn sequent(text: &str) -> Result<Sequent, Box<Report>> {
    text.parse()
        .map_err(|e| Report::input_error(format!("sequent `{text}`: {e}")).into())
}

fn read(path: &Path) -> Result<String, Box<Report>> {
    std::fs::read_to_string(path)
        .map_err(|e| Report::input_error(format!("{}: {e}", path.display())).into())
}

fn budget(e: BudgetExceeded) -> Report {
    Report::budget(e.to_string())
}

/// Re-validates a countermodel through its text form and checks that it
/// refutes `gamma |- delta` at its node.
fn verified(c: Countermodel, gamma: &[Fm], delta: &[Fm]) -> Countermodel {
    let reread =
        KripkeModel::from_text(&c.model.to_text()).expect("countermodel text re-validates");
    assert_eq!(reread, c.model, "countermodel text round-trips");
    let forced = |f: &Fm| {
        c.model
            .forces(&c.node, f)
            .expect("countermodel node exists")
    };
    assert!(
        gamma.iter().all(forced) && !delta.iter().any(forced),
        "countermodel refutes at {}",
        c.node
    );
    c
}

impl Runner<'_> {
    fn var_budget(&self) -> usize {
        self.cli.var_budget.unwrap_or(decide::DEFAULT_VAR_BUDGET)
    }

    fn run(&self) -> Outcome {
        match &self.cli.command {
            Command::Decide { formula: f } => self.decide(&formula(f)?),
            Command::Consequence { sequent: s } => self.consequence(&sequent(s)?),
            Command::Assertible { formula: f } => self.assertible(&formula(f)?),
            Command::Stable { formula: f } => self.stable(&formula(f)?),
            Command::Force {
                model,
                node,
                formula: f,
            } => {
                let f = formula(f)?;
                let m = self.model(model)?;
                let forced = m
                    .forces(node, &f)
                    .map_err(|e| Report::input_error(format!("unknown node `{}`", e.0)))?;
                Ok(Report::yes_no(forced, "Forced", "Not forced"))
            }
            Command::Profile { model, formula: f } => {
                self.profile(&self.model(model)?, &formula(f)?)
            }
            Command::Prove { sequent: s } => self.prove(&sequent(s)?),
            Command::CheckProof { file } => self.check_proof(file),
            Command::Compare { formula: f } => self.compare(&formula(f)?),
            Command::Arith(ArithCommand::Explore(args)) => self.explore(args),
            Command::Arith(ArithCommand::Force {
                model,
                stage,
                formula: f,
            }) => self.arith_force(model.as_deref(), stage, &cl_formula(f)?),
            Command::Gen(GenCommand::Check { file }) => self.gen_check(file),
            Command::Gen(GenCommand::Force {
                file,
                member,
                node,
                formula: f,
            }) => {
                let f = formula(f)?;
                let g = GStructure::from_text(&read(file)?)
                    .map_err(|e| Report::input_error(format!("{}: {e}", file.display())))?;
                let forced = g
                    .gen_forces(member, node, &f)
                    .map_err(|e| Report::input_error(e.to_string()))?;
                Ok(Report::yes_no(forced, "Forced", "Not forced"))
            }
        }
    }

    fn model(&self, path: &Path) -> Result<KripkeModel, Box<Report>> {
        KripkeModel::from_text(&read(path)?)
            .map_err(|e| Report::input_error(format!("{}: {e}", path.display())).into())
    }

    fn decide(&self, f: &Fm) -> Outcome {
        Ok(
            match decide::decide_validity(f, self.var_budget()).map_err(budget)? {
                Verdict::Valid => Report::new("Valid", 0),
                Verdict::Invalid(c) => Report::new("Invalid", 1).with_countermodel(&verified(
                    c,
                    &[],
                    std::slice::from_ref(f),
                )),
            },
        )
    }

    fn consequence(&self, s: &Sequent) -> Outcome {
        Ok(
            match decide::decide_consequence(&s.ante, &s.succ, self.var_budget()).map_err(budget)? {
                Verdict::Valid => Report::new("Valid", 0),
                Verdict::Invalid(c) => {
                    Report::new("Invalid", 1).with_countermodel(&verified(c, &s.ante, &s.succ))
                }
            },
        )
    }

    fn assertible(&self, f: &Fm) -> Outcome {
        // A model forces `A` nowhere iff it refutes `~~A` at its root.
        let nn = Formula::not_not(f.clone());
        Ok(
            match decide::decide_validity(&nn, self.var_budget()).map_err(budget)? {
                Verdict::Valid => Report::new("Assertible", 0),
                Verdict::Invalid(c) => {
                    let c = verified(c, &[], &[nn]);
                    assert!(!c.model.is_assertible(f));
                    Report::new("Not assertible", 1)
                        .detail(format!("{f} is forced at no node of the countermodel"))
                        .with_countermodel(&c)
                }
            },
        )
    }

    fn stable(&self, f: &Fm) -> Outcome {
        let nn = Formula::not_not(f.clone());
        Ok(
            match decide::decide_consequence(
                std::slice::from_ref(&nn),
                std::slice::from_ref(f),
                self.var_budget(),
            )
            .map_err(budget)?
            {
                Verdict::Valid => Report::new("Stable", 0),
                Verdict::Invalid(c) => Report::new("Unstable", 1).with_countermodel(&verified(
                    c,
                    &[nn],
                    std::slice::from_ref(f),
                )),
            },
        )
    }

    fn profile(&self, m: &KripkeModel, f: &Fm) -> Outcome {
        let p = m.profile(f);
        let yes = |b: bool, witness: &Option<String>, label: &str| match (b, witness) {
            (true, _) => "yes".to_owned(),
            (false, Some(k)) => format!("no ({label} {k})"),
            (false, None) => "no".to_owned(),
        };
        let forced = match &p.forced_at {
            Some(k) => format!("yes (forced at {k})"),
            None => "no".to_owned(),
        };
        Ok(Report::new("Profile", 0)
            .detail(format!(
                "valid: {}",
                yes(p.valid, &p.refuted_at, "refuted at")
            ))
            .detail(format!("assertible: {forced}"))
            .detail(format!(
                "prevalent: {}",
                yes(p.prevalent, &p.unreachable_from, "unreachable from")
            )))
    }

    fn prove(&self, s: &Sequent) -> Outcome {
        let depth = self
            .cli
            .depth
            .unwrap_or(finitist::calculus::DEFAULT_SEARCH_DEPTH);
        match prove_bounded(s, depth) {
            Ok(d) => {
                assert!(
                    check_derivation(&d).is_ok() && d.conclusion == *s,
                    "search output checks"
                );
                Ok(Report {
                    derivation: Some(write_derivation(&d)),
                    ..Report::new("Provable", 0)
                })
            }
            Err(failure) => match decide::decide_consequence(&s.ante, &s.succ, self.var_budget())
                .map_err(budget)?
            {
                Verdict::Invalid(c) => Ok(Report::new("Not provable", 1)
                    .detail("the sequent is not valid")
                    .with_countermodel(&verified(c, &s.ante, &s.succ))),
                Verdict::Valid => Ok(match failure {
                    SearchFailure::DepthExhausted(n) => {
                        Report::budget(format!("search depth {n} exhausted (raise with --depth)"))
                    }
                    SearchFailure::NotFound(g) => Report::new("Indeterminate", 3)
                        .detail(format!("valid, but the search is stuck at `{g}`")),
                }),
            },
        }
    }

    fn check_proof(&self, path: &Path) -> Outcome {
        let d = read_derivation(&read(path)?)
            .map_err(|e| Report::input_error(format!("{}: {e}", path.display())))?;
        Ok(match check_derivation(&d) {
            Ok(()) => Report::new("Accepted", 0)
                .detail(format!("conclusion: {}", d.conclusion))
                .detail(format!("size: {}, height: {}", d.size(), d.height())),
            Err(diags) => diags.iter().fold(Report::new("Rejected", 1), |r, diag| {
                r.detail(diag.to_string())
            }),
        })
    }

    fn compare(&self, f: &Fm) -> Outcome {
        let budget_n = self.var_budget();
        let sf = decide::decide_validity(f, budget_n)
            .map_err(budget)?
            .is_valid();
        let ipc_budget = self
            .cli
            .var_budget
            .unwrap_or(oracles::DEFAULT_IPC_VAR_BUDGET);
        let ipc = oracles::ipc_prove(f, ipc_budget).map_err(budget)?;
        let word = |b: bool| if b { "valid" } else { "invalid" };
        Ok(Report::new(
            format!(
                "CPC:{} HT:{} SF:{} IPC:{}",
                word(oracles::cpc_valid(f)),
                word(oracles::ht_valid(f)),
                word(sf),
                word(matches!(ipc, IpcResult::Provable))
            ),
            0,
        ))
    }

    fn explore(&self, args: &ExploreArgs) -> Outcome {
        let depth = self.cli.depth.unwrap_or(arith::DEFAULT_DEPTH);
        let s = SInfinity::explore(depth).map_err(explore_error)?;
        let mut r = Report::new(format!("Explored to depth {depth}"), 0);
        for d in 0..=depth {
            r = r.detail(format!("level {d}: {} stages", s.level_len(d)));
        }
        r = r.detail(format!("total: {} stages", s.len()));
        if args.list {
            for d in 0..=depth {
                for t in s.stages_at(d) {
                    let mv = s
                        .move_to(t)
                        .map_or_else(|| "root".to_owned(), |m| m.to_string());
                    r = r.detail(format!("{} {mv}", s.stage_id(t)));
                }
            }
        }
        Ok(r)
    }

    fn arith_force(&self, model: Option<&Path>, stage: &str, f: &ClFormula) -> Outcome {
        if let Some(path) = model {
            let m = ArithModel::from_text(&read(path)?)
                .map_err(|e| Report::input_error(format!("{}: {e}", path.display())))?;
            let forced = m
                .forces(stage, f)
                .map_err(|e| Report::input_error(e.to_string()))?;
            return Ok(Report::yes_no(forced, "Forced", "Not forced"));
        }
        let mut terms = Terms::new();
        let state = arith::state_at(&mut terms, stage).ok_or_else(|| {
            Report::input_error(ExploreError::UnknownStage(stage.to_owned()).to_string())
        })?;
        let forced = arith::forces_in_state(&terms, &state, f);
        let mut r = Report::yes_no(forced, "Forced", "Not forced");
        let learnt: Vec<&str> = state.e.iter().map(|&q| terms.eq_text(q)).collect();
        r = r.detail(format!(
            "learnt: {}",
            if learnt.is_empty() {
                "none".to_owned()
            } else {
                learnt.join(", ")
            }
        ));
        if let Some(h) = self.cli.horizon {
            let depth = stage.split('_').count() - 1;
            if depth + h > arith::MAX_DEPTH {
                return Ok(Report::budget(format!(
                    "stage depth {depth} plus horizon {h} is over the maximum of {} (lower --horizon)",
                    arith::MAX_DEPTH
                )));
            }
            let s = SInfinity::explore(depth + h).map_err(explore_error)?;
            let t = s.stage_by_id(stage).map_err(explore_error)?;
            let raw = match s.forces_within(t, f, h) {
                Some(true) => "forced",
                Some(false) => "not forced",
                None => "undetermined",
            };
            r = r.detail(format!("within horizon {h}: {raw}"));
        }
        Ok(r)
    }

    fn gen_check(&self, path: &Path) -> Outcome {
        Ok(match GStructure::from_text(&read(path)?) {
            Ok(g) => {
                let names: Vec<&str> = g.members().iter().map(|m| m.name.as_str()).collect();
                Report::new("Accepted", 0)
                    .detail(format!("members: {}", names.join(" ")))
                    .detail(format!("pairs: {}", g.pair_count()))
            }
            Err(e) if matches!(e.kind, GenErrorKind::Syntax(_)) => {
                return Err(Report::input_error(format!("{}: {e}", path.display())).into())
            }
            Err(e) => Report::new("Rejected", 1).detail(e.to_string()),
        })
    }
}

fn explore_error(e: ExploreError) -> Report {
    match e {
        ExploreError::UnknownStage(_) => Report::input_error(e.to_string()),
        _ => Report::budget(e.to_string()),
    }
}
