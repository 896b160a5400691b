//! Step-by-step replays of two translation chains.
//!
//! The Markov chain follows `□∀x◇∃yR(x,y)` through the F-translation and
//! three rewrite steps down to `∀x¬²∃yR(x,y)`, comparing each stage with a
//! hard-coded expected formula. The Glivenko chain takes a classical
//! formula `A` through S4, `A^F`, `¬¬A^d□` and finally `¬¬A`, deciding each
//! stage; if `A` is a classical tautology every stage must be provable.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::deciders::{DecideError, Decider, Logic, Sequent, Verdict};
use crate::embeddings::{
    collapse_self_double_negation, collapse_triple_not_e, eliminate_inner_double_negation,
    translate_dbox, translate_f, TranslateError,
};
use crate::surface::parse;
use crate::syntax::{is_propositional, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("formula must be propositional and box-free: {0}")]
    UnsupportedFormula(String),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStage {
    pub label: String,
    #[serde(serialize_with = "as_text")]
    pub formula: Formula,
    /// Logic the stage is decided in, if any.
    pub logic: Option<Logic>,
    pub verdict: Option<Verdict>,
    /// Whether the stage meets its obligation: equality with the expected
    /// formula, or provability where that is required.
    pub holds: bool,
}

fn as_text<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub stages: Vec<ChainStage>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.stages.iter().all(|s| s.holds)
    }
}

impl fmt::Display for ChainStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.label, self.formula)?;
        if let (Some(logic), Some(v)) = (self.logic, &self.verdict) {
            let word = if v.provable { "provable" } else { "unprovable" };
            write!(f, "\t{} {word}", logic.name())?;
        }
        if !self.holds {
            f.write_str("\tMISMATCH")?;
        }
        Ok(())
    }
}

/// Source formula of the Markov chain.
pub const MARKOV_SOURCE: &str = "[] forall x. <> exists y. R(x,y)";

/// Expected stage formulas, in order.
pub const MARKOV_STAGES: [(&str, &str); 4] = [
    (
        "F image",
        "forall x. ((~~exists y. ~~R(x,y)) -> ~~bot) -> ~~bot",
    ),
    (
        "double-negated falsum collapsed",
        "forall x. ~~~~exists y. ~~R(x,y)",
    ),
    (
        "triple negation collapsed",
        "forall x. ~~exists y. ~~R(x,y)",
    ),
    (
        "double negation under exists removed",
        "forall x. ~~exists y. R(x,y)",
    ),
];

pub fn replay_markov_chain() -> Result<ChainReport, ReplayError> {
    let bot = Formula::bot();
    let source = parse(MARKOV_SOURCE).expect("source parses");
    let f_image = translate_f(&source)?;
    let collapsed_bot = collapse_self_double_negation(&f_image);
    let collapsed_triple = collapse_triple_not_e(&bot, &collapsed_bot);
    let eliminated = eliminate_inner_double_negation(&bot, &collapsed_triple);
    let produced = [f_image, collapsed_bot, collapsed_triple, eliminated];
    let stages = MARKOV_STAGES
        .iter()
        .zip(produced)
        .map(|(&(label, expected), formula)| {
            let expected = parse(expected).expect("expected stage parses");
            ChainStage {
                label: label.to_owned(),
                holds: formula == expected,
                formula,
                logic: None,
                verdict: None,
            }
        })
        .collect();
    Ok(ChainReport { stages })
}

pub fn replay_glivenko_chain(a: &Formula, decider: &Decider) -> Result<ChainReport, ReplayError> {
    if !is_propositional(a) || a.contains_box() || a.contains_prf() {
        return Err(ReplayError::UnsupportedFormula(a.to_string()));
    }
    let dnn = |x: Formula| Formula::not(Formula::not(x));
    let classical = decider
        .decide(&Sequent::theorem(a.clone()), Logic::Cpc)?
        .provable;
    let plan = [
        ("S4 source", a.clone(), Logic::S4),
        ("F image", translate_f(a)?, Logic::Ipc),
        (
            "double-negated box deletion",
            dnn(translate_dbox(a)?),
            Logic::Ipc,
        ),
        ("double negation", dnn(a.clone()), Logic::Ipc),
    ];
    let mut stages = Vec::with_capacity(plan.len());
    for (label, formula, logic) in plan {
        let verdict = decider.decide(&Sequent::theorem(formula.clone()), logic)?;
        stages.push(ChainStage {
            label: label.to_owned(),
            holds: verdict.provable || !classical,
            formula,
            logic: Some(logic),
            verdict: Some(verdict),
        });
    }
    Ok(ChainReport { stages })
}
