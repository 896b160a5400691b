//! Property suites that instantiate the translation theorems on generated
//! propositional formulas and check each instance with the deciders.
//!
//! Every suite runs a predicate over instance indices `0..attempted`.
//! Instances are independent and are sharded across threads; the report is
//! identical however the work is split. Each negative verdict met along the
//! way has its countermodel re-checked, and a countermodel that does not
//! refute its sequent is reported as a failure of the instance.

mod generate;
mod replay;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deciders::{
    check_model, semantics_of, DecideError, Decider, Logic, ModelVerdict, Sequent,
};
use crate::embeddings::TranslateError;
use crate::syntax::Formula;

pub use generate::{
    default_weights, gen_formula, instance_rng, Connective, GenParams, GenParamsError,
};
pub use replay::{
    replay_glivenko_chain, replay_markov_chain, ChainReport, ChainStage, ReplayError,
    MARKOV_SOURCE, MARKOV_STAGES,
};

/// The available suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `IPC ⊢ A` iff `S4 ⊢ A^□RS`.
    RsSoundFaithful,
    /// `IPC ⊢ A` iff `S4 ⊢ A^□`.
    GoedelSoundFaithful,
    /// `S4 ⊢ A^□ ↔ A^□RS`.
    BoxEquiv,
    /// `S4 ⊢ B` implies `IPC ⊢ B^(C)_Γ` for sampled `Γ ∋ C`.
    FfSoundness,
    /// `A ⊣⊢ ⋀_C (A^□RS)^(C)_Γ` and `A ⊣⊢ ⋀_C (A^□)^(C)_Γ` with `Γ` the
    /// subformulas of `A`.
    CoreLemma,
    /// The relativised negation identities for `¬_E`.
    NegationIdentities,
    /// `(¬B)^E ⊣⊢ ¬_E B^E` and `¬²_E B^E ⊣⊢ B^E`.
    FfNegation,
    /// `IPC ⊢ ¬_E¬_E A^(E)_Γ ↔ A^(E)_Γ`.
    FfDoubleNegation,
    /// `IPC ⊢ A^(⊥)_{⊥} ↔ A^F`.
    FfFalsumIsF,
    /// `IPC ⊢ A ↔ ¬²_A A`.
    SelfDoubleNegation,
    /// `IPC ⊢ A^F ↔ (A^d□)°`.
    FFactorsNegative,
    /// `IPC ⊢ A^F ↔ ¬¬A^d□` and `IPC ⊢ A^F ↔ ¬¬A^F`.
    FCollapse,
    /// `A^□`, `A^□RS`, `□A` and their `∨`/`∧` combinations are S4-stable.
    Stability,
    /// `CPC ⊢ A` iff `IPC ⊢ ¬¬A`.
    Glivenko,
    /// Cross-checks between the deciders.
    DeciderConsistency,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::RsSoundFaithful,
        Suite::GoedelSoundFaithful,
        Suite::BoxEquiv,
        Suite::FfSoundness,
        Suite::CoreLemma,
        Suite::NegationIdentities,
        Suite::FfNegation,
        Suite::FfDoubleNegation,
        Suite::FfFalsumIsF,
        Suite::SelfDoubleNegation,
        Suite::FFactorsNegative,
        Suite::FCollapse,
        Suite::Stability,
        Suite::Glivenko,
        Suite::DeciderConsistency,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::RsSoundFaithful => "rs_sound_faithful",
            Suite::GoedelSoundFaithful => "goedel_sound_faithful",
            Suite::BoxEquiv => "box_equiv",
            Suite::FfSoundness => "ff_soundness",
            Suite::CoreLemma => "core_lemma",
            Suite::NegationIdentities => "negation_identities",
            Suite::FfNegation => "ff_negation",
            Suite::FfDoubleNegation => "ff_double_negation",
            Suite::FfFalsumIsF => "ff_falsum_is_f",
            Suite::SelfDoubleNegation => "self_double_negation",
            Suite::FFactorsNegative => "f_factors_negative",
            Suite::FCollapse => "f_collapse",
            Suite::Stability => "stability",
            Suite::Glivenko => "glivenko",
            Suite::DeciderConsistency => "decider_consistency",
        }
    }

    /// Suites whose instances go through the Flagg–Friedman translation
    /// with a nontrivial `Γ`; their images grow quickly with depth.
    pub fn is_ff_based(self) -> bool {
        matches!(
            self,
            Suite::FfSoundness | Suite::CoreLemma | Suite::FfNegation | Suite::FfDoubleNegation
        )
    }

    /// Default generator parameters and instance count.
    pub fn defaults(self, seed: u64) -> (GenParams, u64) {
        let (max_depth, num_atoms, count) = if self.is_ff_based() {
            (3, 3, 200)
        } else {
            (5, 4, 500)
        };
        let params = GenParams {
            seed,
            max_depth,
            num_atoms,
            ..GenParams::default()
        };
        (params, count)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Params(#[from] GenParamsError),
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.id() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub witness: Vec<String>,
    pub detail: String,
}

/// Outcome of one suite run. Serialises to
/// `{"suite","seed","attempted","failures","budget_exhausted","elapsed_ms"}`;
/// the remaining fields are kept in memory only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub attempted: u64,
    pub failures: Vec<Failure>,
    pub budget_exhausted: u64,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub params: GenParams,
    /// Successful instances whose hypothesis did not hold, so the
    /// conclusion was not exercised.
    #[serde(skip)]
    pub vacuous: u64,
    /// Countermodels re-checked against their sequents.
    #[serde(skip)]
    pub countermodels_checked: u64,
}

impl SuiteReport {
    pub fn successes(&self) -> u64 {
        self.attempted - self.failures.len() as u64 - self.budget_exhausted
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// How an instance ended without succeeding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Stop {
    Budget,
    Fail(String),
}

impl From<TranslateError> for Stop {
    fn from(e: TranslateError) -> Self {
        Stop::Fail(format!("translation failed: {e}"))
    }
}

pub(crate) type Check<T = ()> = Result<T, Stop>;

/// Per-instance state: the decider, witnesses recorded so far and the audit
/// counter.
pub(crate) struct Case<'a> {
    decider: &'a Decider,
    pub(crate) witness: Vec<Formula>,
    pub(crate) vacuous: bool,
    audited: u64,
}

impl<'a> Case<'a> {
    pub(crate) fn new(decider: &'a Decider) -> Self {
        Case {
            decider,
            witness: Vec::new(),
            vacuous: false,
            audited: 0,
        }
    }

    pub(crate) fn witness(&mut self, f: &Formula) {
        self.witness.push(f.clone());
    }

    pub(crate) fn decide(&mut self, s: &Sequent, logic: Logic) -> Check<bool> {
        let v = match self.decider.decide(s, logic) {
            Ok(v) => v,
            Err(DecideError::BudgetExhausted { .. }) => return Err(Stop::Budget),
            Err(e) => return Err(Stop::Fail(e.to_string())),
        };
        if let Some(m) = &v.countermodel {
            self.audited += 1;
            let audit = check_model(m, &s.as_formula(), semantics_of(logic));
            if audit != Ok(ModelVerdict::Refutes) {
                return Err(Stop::Fail(format!(
                    "{logic} countermodel does not refute `{}`: {audit:?}",
                    s.as_formula()
                )));
            }
        }
        Ok(v.provable)
    }

    pub(crate) fn theorem(&mut self, a: &Formula, logic: Logic) -> Check<bool> {
        self.decide(&Sequent::theorem(a.clone()), logic)
    }

    pub(crate) fn equivalent(&mut self, a: &Formula, b: &Formula, logic: Logic) -> Check<bool> {
        Ok(self.decide(&Sequent::new([a.clone()], b.clone()), logic)?
            && self.decide(&Sequent::new([b.clone()], a.clone()), logic)?)
    }

    /// Fails the instance with `what` unless `holds`.
    pub(crate) fn require(&self, holds: bool, what: impl FnOnce() -> String) -> Check {
        if holds {
            Ok(())
        } else {
            Err(Stop::Fail(what()))
        }
    }

    pub(crate) fn require_theorem(&mut self, a: &Formula, logic: Logic, what: &str) -> Check {
        let ok = self.theorem(a, logic)?;
        self.require(ok, || format!("{what}: {logic} does not prove `{a}`"))
    }

    pub(crate) fn require_equivalent(
        &mut self,
        a: &Formula,
        b: &Formula,
        logic: Logic,
        what: &str,
    ) -> Check {
        let ok = self.equivalent(a, b, logic)?;
        self.require(ok, || {
            format!("{what}: `{a}` and `{b}` are not mutually derivable in {logic}")
        })
    }
}

struct InstanceOutcome {
    index: u64,
    result: Check,
    witness: Vec<Formula>,
    vacuous: bool,
    audited: u64,
}

/// Runs `suite` on instances `0..attempted`.
pub fn run_suite(
    suite: Suite,
    params: &GenParams,
    attempted: u64,
    decider: &Decider,
) -> Result<SuiteReport, VerifyError> {
    params.validate()?;
    let start = Instant::now();
    let outcomes: Vec<InstanceOutcome> = (0..attempted)
        .into_par_iter()
        .map(|index| {
            let mut case = Case::new(decider);
            let result = suites::run_instance(suite, params, index, &mut case);
            InstanceOutcome {
                index,
                result,
                witness: case.witness,
                vacuous: case.vacuous,
                audited: case.audited,
            }
        })
        .collect();
    let mut report = SuiteReport {
        suite: suite.id().to_owned(),
        seed: params.seed,
        attempted,
        failures: Vec::new(),
        budget_exhausted: 0,
        elapsed_ms: 0,
        params: params.clone(),
        vacuous: 0,
        countermodels_checked: 0,
    };
    for out in outcomes {
        report.countermodels_checked += out.audited;
        match out.result {
            Ok(()) => report.vacuous += u64::from(out.vacuous),
            Err(Stop::Budget) => report.budget_exhausted += 1,
            Err(Stop::Fail(detail)) => report.failures.push(Failure {
                index: out.index,
                witness: out.witness.iter().map(|f| f.to_string()).collect(),
                detail,
            }),
        }
    }
    report.failures.sort_by_key(|f| f.index);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Looks up `suite_id` and runs it.
pub fn run_suite_by_id(
    suite_id: &str,
    params: &GenParams,
    attempted: u64,
    decider: &Decider,
) -> Result<SuiteReport, VerifyError> {
    run_suite(suite_id.parse()?, params, attempted, decider)
}
