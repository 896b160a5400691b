//! `emblab` command-line front end.
//!
//! Exit codes: 0 success (provable, suite passed, chain holds), 1 negative
//! result (unprovable, suite failures, chain mismatch), 2 bad input (parse
//! error, unknown suite, missing argument), 3 precondition violation,
//! 4 decider budget exhausted.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use emblab::deciders::{DecideError, Decider, DeciderConfig, Engine, Logic, Sequent};
use emblab::embeddings::{
    translate_dbox, translate_f, translate_ff, translate_ff_mea, translate_goedel,
    translate_negative, translate_rs, TranslateError,
};
use emblab::syntax::{Formula, GammaContext};
use emblab::verify::{
    gen_formula, replay_glivenko_chain, replay_markov_chain, run_suite, ChainReport, GenParams,
    ReplayError, Suite,
};
use emblab::{parse, ParseError};

#[derive(Parser)]
#[command(
    name = "emblab",
    version,
    about = "Modal and intuitionistic embeddings workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula and print the result.
    Translate {
        #[arg(long, value_enum)]
        translation: Translation,
        /// Member of Γ (repeatable); required by ff and mea.
        #[arg(long)]
        gamma: Vec<String>,
        /// Distinguished member E of Γ; required by ff and mea.
        #[arg(long)]
        e: Option<String>,
        formula: String,
    },
    /// Decide a propositional sequent.
    Decide {
        #[arg(long, value_enum)]
        logic: LogicArg,
        /// Assumption formula (repeatable).
        #[arg(long)]
        assumption: Vec<String>,
        #[arg(long, value_enum, default_value_t = EngineArg::Sat)]
        engine: EngineArg,
        formula: String,
    },
    /// Run a property suite and print its JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of instances; defaults to the suite's own default.
        #[arg(long)]
        count: Option<u64>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        num_atoms: Option<usize>,
        #[arg(long, value_enum, default_value_t = EngineArg::Sat)]
        engine: EngineArg,
    },
    /// Replay a translation chain stage by stage.
    Replay {
        #[arg(long, value_enum)]
        chain: Chain,
        /// Source formula; required by the glivenko chain.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, value_enum, default_value_t = EngineArg::Sat)]
        engine: EngineArg,
    },
    /// Print generated formulas, one per line.
    Corpus {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_depth: usize,
        #[arg(long, default_value_t = 4)]
        num_atoms: usize,
        /// Generate box-free formulas only.
        #[arg(long)]
        no_box: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Translation {
    Goedel,
    Rs,
    Ff,
    F,
    Dbox,
    Neg,
    Mea,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogicArg {
    Cpc,
    Ipc,
    S4,
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Self {
        match l {
            LogicArg::Cpc => Logic::Cpc,
            LogicArg::Ipc => Logic::Ipc,
            LogicArg::S4 => Logic::S4,
        }
    }
}

/// IPC and S4 search engine.
#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    /// SAT solver with learnt clauses.
    Sat,
    /// Backward sequent search.
    Sequent,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Sat => Engine::Sat,
            EngineArg::Sequent => Engine::Sequent,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Chain {
    Markov,
    Glivenko,
}

/// An error with its exit code.
struct Exit(u8, String);

impl From<(&str, ParseError)> for Exit {
    fn from((what, e): (&str, ParseError)) -> Self {
        Exit(2, format!("{what}: {e}"))
    }
}

impl From<TranslateError> for Exit {
    fn from(e: TranslateError) -> Self {
        Exit(3, e.to_string())
    }
}

impl From<DecideError> for Exit {
    fn from(e: DecideError) -> Self {
        let code = match e {
            DecideError::BudgetExhausted { .. } => 4,
            _ => 3,
        };
        Exit(code, e.to_string())
    }
}

fn parse_arg(what: &str, text: &str) -> Result<Formula, Exit> {
    parse(text).map_err(|e| Exit::from((what, e)))
}

fn decider(engine: EngineArg) -> Decider {
    Decider::new(DeciderConfig {
        engine: engine.into(),
        ..DeciderConfig::from_env()
    })
}

fn translate(
    translation: Translation,
    gamma: &[String],
    e: Option<&str>,
    formula: &str,
) -> Result<u8, Exit> {
    let a = parse_arg("formula", formula)?;
    let context = || -> Result<GammaContext, Exit> {
        let members = gamma
            .iter()
            .map(|g| parse_arg("gamma", g))
            .collect::<Result<Vec<_>, _>>()?;
        let e = e.ok_or_else(|| Exit(3, "this translation needs --e".into()))?;
        let e = parse_arg("e", e)?;
        if members.is_empty() {
            return Err(Exit(
                3,
                "this translation needs at least one --gamma".into(),
            ));
        }
        GammaContext::new(members, &e).map_err(|err| Exit(3, err.to_string()))
    };
    let out = match translation {
        Translation::Goedel => translate_goedel(&a)?,
        Translation::Rs => translate_rs(&a)?,
        Translation::Ff => translate_ff(&a, &context()?)?,
        Translation::Mea => translate_ff_mea(&a, &context()?)?,
        Translation::F => translate_f(&a)?,
        Translation::Dbox => translate_dbox(&a)?,
        Translation::Neg => translate_negative(&a)?,
    };
    println!("{out}");
    Ok(0)
}

fn decide(
    logic: LogicArg,
    assumptions: &[String],
    formula: &str,
    engine: EngineArg,
) -> Result<u8, Exit> {
    let goal = parse_arg("formula", formula)?;
    let assumptions = assumptions
        .iter()
        .map(|a| parse_arg("assumption", a))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = decider(engine).decide(&Sequent::new(assumptions, goal), logic.into())?;
    if verdict.provable {
        println!("provable");
        return Ok(0);
    }
    println!("unprovable");
    if let Some(model) = &verdict.countermodel {
        println!(
            "{}",
            serde_json::to_string(model).expect("models serialise")
        );
    }
    Ok(1)
}

fn verify(
    suite: &str,
    seed: u64,
    count: Option<u64>,
    max_depth: Option<usize>,
    num_atoms: Option<usize>,
    engine: EngineArg,
) -> Result<u8, Exit> {
    let suite: Suite = suite.parse().map_err(|e| Exit(2, format!("{e}")))?;
    let (mut params, default_count): (GenParams, u64) = suite.defaults(seed);
    if let Some(d) = max_depth {
        params.max_depth = d;
    }
    if let Some(n) = num_atoms {
        params.num_atoms = n;
    }
    let report = run_suite(
        suite,
        &params,
        count.unwrap_or(default_count),
        &decider(engine),
    )
    .map_err(|e| Exit(2, e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("reports serialise")
    );
    Ok(if report.passed() { 0 } else { 1 })
}

fn print_chain(report: &ChainReport) -> u8 {
    for stage in &report.stages {
        println!("{stage}");
    }
    if report.holds() {
        0
    } else {
        1
    }
}

fn replay(chain: Chain, formula: Option<&str>, engine: EngineArg) -> Result<u8, Exit> {
    let report = match chain {
        Chain::Markov => replay_markov_chain(),
        Chain::Glivenko => {
            let text =
                formula.ok_or_else(|| Exit(2, "the glivenko chain needs --formula".into()))?;
            let a = parse_arg("formula", text)?;
            replay_glivenko_chain(&a, &decider(engine))
        }
    };
    match report {
        Ok(report) => Ok(print_chain(&report)),
        Err(ReplayError::Decide(e)) => Err(e.into()),
        Err(ReplayError::Translate(e)) => Err(e.into()),
        Err(e @ ReplayError::UnsupportedFormula(_)) => Err(Exit(3, e.to_string())),
    }
}

fn corpus(count: u64, params: GenParams) -> Result<u8, Exit> {
    params.validate().map_err(|e| Exit(2, e.to_string()))?;
    let mut out = std::io::stdout().lock();
    for i in 0..count {
        // A closed reader (e.g. `| head`) ends the listing early.
        if writeln!(out, "{}", gen_formula(&params, i)).is_err() {
            break;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Translate {
            translation,
            gamma,
            e,
            formula,
        } => translate(*translation, gamma, e.as_deref(), formula),
        Command::Decide {
            logic,
            assumption,
            engine,
            formula,
        } => decide(*logic, assumption, formula, *engine),
        Command::Verify {
            suite,
            seed,
            count,
            max_depth,
            num_atoms,
            engine,
        } => verify(suite, *seed, *count, *max_depth, *num_atoms, *engine),
        Command::Replay {
            chain,
            formula,
            engine,
        } => replay(*chain, formula.as_deref(), *engine),
        Command::Corpus {
            count,
            seed,
            max_depth,
            num_atoms,
            no_box,
        } => corpus(
            *count,
            GenParams {
                seed: *seed,
                max_depth: *max_depth,
                num_atoms: *num_atoms,
                allow_box: !no_box,
                ..GenParams::default()
            },
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
