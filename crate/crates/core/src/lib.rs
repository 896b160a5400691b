//! Translations between classical, modal (S4) and intuitionistic formula
//! languages, decision procedures for their propositional fragments, and
//! seeded property suites that check the translations against each other.

pub mod deciders;
pub mod embeddings;
pub mod surface;
pub mod syntax;
pub mod verify;

pub use deciders::{
    check_model, decide, DecideError, Decider, DeciderConfig, Engine, KripkeModel, Logic,
    ModelVerdict, Semantics, Sequent, Verdict,
};
pub use surface::{parse, parse_corpus, print, CorpusError, ParseError};
pub use syntax::{Formula, FormulaKind, GammaContext, Symbol, SyntaxError, Term};
pub use verify::{gen_formula, run_suite, GenParams, Suite, SuiteReport};
