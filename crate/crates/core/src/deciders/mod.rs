//! Decision procedures for propositional CPC, IPC and S4.
//!
//! All three work on sequents `A1, ..., An => B` read as local consequence,
//! so a sequent is provable exactly when `A1 & ... & An -> B` is a theorem.
//! Negative verdicts come with a Kripke countermodel whenever the search
//! produced one.

mod arena;
mod cpc;
mod ipc_g4;
mod ipc_sat;
pub mod kripke;
mod s4_sat;
mod s4_sequent;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Formula;

use arena::{Arena, NodeId};
pub use kripke::{check_model, KripkeModel, ModelError, ModelVerdict, Semantics};

/// Default cap on search nodes per decision.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`] in [`DeciderConfig::from_env`].
pub const BUDGET_ENV: &str = "EMBLAB_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("search budget of {limit} nodes exhausted")]
    BudgetExhausted { limit: u64 },
    #[error("formula is not propositional: {0}")]
    NotPropositional(String),
    #[error("modal operator not allowed in {logic}")]
    ModalNotAllowed { logic: Logic },
    #[error("proof operator is not supported by the deciders")]
    ProofOperator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Cpc,
    Ipc,
    S4,
}

impl Logic {
    pub const ALL: [Logic; 3] = [Logic::Cpc, Logic::Ipc, Logic::S4];

    pub fn name(self) -> &'static str {
        match self {
            Logic::Cpc => "cpc",
            Logic::Ipc => "ipc",
            Logic::S4 => "s4",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Cpc => "CPC",
            Logic::Ipc => "IPC",
            Logic::S4 => "S4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic `{0}` (expected cpc, ipc or s4)")]
pub struct UnknownLogic(pub String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cpc" => Ok(Logic::Cpc),
            "ipc" => Ok(Logic::Ipc),
            "s4" => Ok(Logic::S4),
            _ => Err(UnknownLogic(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(assumptions: impl IntoIterator<Item = Formula>, goal: Formula) -> Sequent {
        Sequent {
            assumptions: assumptions.into_iter().collect(),
            goal,
        }
    }

    /// A sequent with no assumptions.
    pub fn theorem(goal: Formula) -> Sequent {
        Sequent {
            assumptions: Vec::new(),
            goal,
        }
    }

    /// `A1 & ... & An -> B`, or just `B` without assumptions.
    pub fn as_formula(&self) -> Formula {
        if self.assumptions.is_empty() {
            self.goal.clone()
        } else {
            Formula::implies(
                crate::syntax::big_and(self.assumptions.clone()),
                self.goal.clone(),
            )
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub provable: bool,
    pub countermodel: Option<KripkeModel>,
    pub stats: Stats,
}

/// Search engine used for IPC and S4; CPC always uses truth tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Clausified search over an incremental SAT solver that learns
    /// implication clauses (IPC) or box clauses (S4).
    #[default]
    Sat,
    /// Backward sequent search: contraction-free G4ip for IPC and a
    /// loop-checked multi-succedent calculus for S4.
    Sequent,
}

impl Engine {
    pub const ALL: [Engine; 2] = [Engine::Sat, Engine::Sequent];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Sat => "sat",
            Engine::Sequent => "sequent",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown engine `{0}` (expected sat or sequent)")]
pub struct UnknownEngine(pub String);

impl FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s.to_ascii_lowercase())
            .ok_or_else(|| UnknownEngine(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeciderConfig {
    pub budget: u64,
    pub engine: Engine,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            budget: DEFAULT_BUDGET,
            engine: Engine::default(),
        }
    }
}

impl DeciderConfig {
    /// Reads the budget from `EMBLAB_BUDGET`, falling back to the default
    /// when the variable is unset or not a positive integer.
    pub fn from_env() -> DeciderConfig {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&b| b > 0)
            .unwrap_or(DEFAULT_BUDGET);
        DeciderConfig {
            budget,
            ..DeciderConfig::default()
        }
    }
}

/// Node counter shared by the search procedures.
#[derive(Debug)]
pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<(), DecideError> {
        self.spend(1)
    }

    pub(crate) fn spend(&mut self, n: u64) -> Result<(), DecideError> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(DecideError::BudgetExhausted { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub(crate) fn limit(&self) -> u64 {
        self.limit
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.min(self.limit)
    }
}

/// Runs `f` on a fresh stack segment when the current one runs low, so the
/// recursive searches cope with deeply nested formulas on small threads.
pub(crate) fn with_stack<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(128 * 1024, 8 * 1024 * 1024, f)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Decider {
    pub config: DeciderConfig,
}

impl Decider {
    pub fn new(config: DeciderConfig) -> Decider {
        Decider { config }
    }

    pub fn decide(&self, s: &Sequent, logic: Logic) -> Result<Verdict, DecideError> {
        let mut arena = Arena::default();
        let mut assumptions = Vec::with_capacity(s.assumptions.len());
        for a in &s.assumptions {
            assumptions.push(arena.intern(a)?);
        }
        let goal = arena.intern(&s.goal)?;
        if logic != Logic::S4 && has_box(&arena) {
            return Err(DecideError::ModalNotAllowed { logic });
        }
        let mut budget = Budget::new(self.config.budget);
        let (provable, countermodel) = match logic {
            Logic::Cpc => cpc::decide(&mut arena, &assumptions, goal, &mut budget)?,
            Logic::Ipc => match self.config.engine {
                Engine::Sat => ipc_sat::decide(&mut arena, &assumptions, goal, &mut budget)?,
                Engine::Sequent => ipc_g4::decide(&mut arena, &assumptions, goal, &mut budget)?,
            },
            Logic::S4 => match self.config.engine {
                Engine::Sat => s4_sat::decide(&mut arena, &assumptions, goal, &mut budget)?,
                Engine::Sequent => s4_sequent::decide(&mut arena, &assumptions, goal, &mut budget)?,
            },
        };
        Ok(Verdict {
            provable,
            countermodel,
            stats: Stats {
                nodes_expanded: budget.used(),
            },
        })
    }

    pub fn decide_cpc(&self, s: &Sequent) -> Result<Verdict, DecideError> {
        self.decide(s, Logic::Cpc)
    }

    pub fn decide_ipc(&self, s: &Sequent) -> Result<Verdict, DecideError> {
        self.decide(s, Logic::Ipc)
    }

    pub fn decide_s4(&self, s: &Sequent) -> Result<Verdict, DecideError> {
        self.decide(s, Logic::S4)
    }

    pub fn provable(&self, s: &Sequent, logic: Logic) -> Result<bool, DecideError> {
        Ok(self.decide(s, logic)?.provable)
    }

    /// `A |- B` and `B |- A`.
    pub fn mutually_derivable(
        &self,
        a: &Formula,
        b: &Formula,
        logic: Logic,
    ) -> Result<bool, DecideError> {
        Ok(self.provable(&Sequent::new([a.clone()], b.clone()), logic)?
            && self.provable(&Sequent::new([b.clone()], a.clone()), logic)?)
    }

    /// Whether S4 proves `A <-> []A`.
    pub fn check_stability(&self, a: &Formula) -> Result<bool, DecideError> {
        self.provable(
            &Sequent::theorem(Formula::iff(a.clone(), Formula::boxed(a.clone()))),
            Logic::S4,
        )
    }
}

fn has_box(arena: &Arena) -> bool {
    (0..arena.len()).any(|i| matches!(arena.node(NodeId(i as u32)), arena::Node::Box(_)))
}

pub fn decide(s: &Sequent, logic: Logic) -> Result<Verdict, DecideError> {
    Decider::default().decide(s, logic)
}

pub fn decide_cpc(s: &Sequent) -> Result<Verdict, DecideError> {
    Decider::default().decide_cpc(s)
}

pub fn decide_ipc(s: &Sequent) -> Result<Verdict, DecideError> {
    Decider::default().decide_ipc(s)
}

pub fn decide_s4(s: &Sequent) -> Result<Verdict, DecideError> {
    Decider::default().decide_s4(s)
}

pub fn mutually_derivable(a: &Formula, b: &Formula, logic: Logic) -> Result<bool, DecideError> {
    Decider::default().mutually_derivable(a, b, logic)
}

pub fn check_stability(a: &Formula) -> Result<bool, DecideError> {
    Decider::default().check_stability(a)
}

/// The semantics a countermodel from `logic` should be audited under.
pub fn semantics_of(logic: Logic) -> Semantics {
    match logic {
        Logic::Cpc | Logic::Ipc => Semantics::Ipc,
        Logic::S4 => Semantics::S4,
    }
}
