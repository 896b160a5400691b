//! Syntactic translations between the intuitionistic, classical and modal
//! formula languages, plus the rewrite steps used when replaying the
//! Markov-rule derivation.
//!
//! Every translation is a single structural pass. The Flagg–Friedman family
//! re-enters the argument of each `□` once per member of `Γ`; results are
//! memoised per (subformula, member) so the output is a DAG of polynomial
//! size even when its tree form is exponential.

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::{conj_over, not_e, not_e_n, Formula, FormulaKind, GammaContext, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("modal operator not allowed in source")]
    ModalInSource,
    #[error("proof operator not allowed in source")]
    ProofOperatorInSource,
    #[error("context member `{0}` contains a modal or proof operator")]
    ModalInContext(String),
    #[error(transparent)]
    Context(#[from] SyntaxError),
}

fn require_no_box(a: &Formula) -> Result<(), TranslateError> {
    if a.contains_box() {
        Err(TranslateError::ModalInSource)
    } else {
        Ok(())
    }
}

fn require_no_prf(a: &Formula) -> Result<(), TranslateError> {
    if a.contains_prf() {
        Err(TranslateError::ProofOperatorInSource)
    } else {
        Ok(())
    }
}

fn dn(a: Formula) -> Formula {
    Formula::not(Formula::not(a))
}

fn rebuild(f: &Formula, children: Vec<Formula>) -> Formula {
    let mut it = children.into_iter();
    let mut next = || it.next().expect("arity");
    Formula::new(match f.kind() {
        FormulaKind::Bot | FormulaKind::Eq(..) | FormulaKind::Atom(..) => return f.clone(),
        FormulaKind::Or(..) => FormulaKind::Or(next(), next()),
        FormulaKind::And(..) => FormulaKind::And(next(), next()),
        FormulaKind::Implies(..) => FormulaKind::Implies(next(), next()),
        FormulaKind::Exists(x, _) => FormulaKind::Exists(x.clone(), next()),
        FormulaKind::Forall(x, _) => FormulaKind::Forall(x.clone(), next()),
        FormulaKind::Box(_) => FormulaKind::Box(next()),
        FormulaKind::Prf(_) => FormulaKind::Prf(next()),
    })
}

/// Gödel translation `A^□` from the intuitionistic language into S4.
pub fn translate_goedel(a: &Formula) -> Result<Formula, TranslateError> {
    require_no_box(a)?;
    require_no_prf(a)?;
    Ok(goedel(a))
}

fn goedel(a: &Formula) -> Formula {
    match a.kind() {
        FormulaKind::Bot | FormulaKind::Eq(..) => a.clone(),
        FormulaKind::Atom(..) => Formula::boxed(a.clone()),
        FormulaKind::Or(l, r) => Formula::or(goedel(l), goedel(r)),
        FormulaKind::And(l, r) => Formula::and(goedel(l), goedel(r)),
        FormulaKind::Implies(l, r) => Formula::boxed(Formula::implies(goedel(l), goedel(r))),
        FormulaKind::Exists(x, b) => Formula::new(FormulaKind::Exists(x.clone(), goedel(b))),
        FormulaKind::Forall(x, b) => {
            Formula::boxed(Formula::new(FormulaKind::Forall(x.clone(), goedel(b))))
        }
        FormulaKind::Box(_) | FormulaKind::Prf(_) => unreachable!("checked by caller"),
    }
}

/// Modified Rasiowa–Sikorski translation `A^□RS`: boxes disjuncts and
/// existential bodies, leaves `∀` unboxed.
pub fn translate_rs(a: &Formula) -> Result<Formula, TranslateError> {
    require_no_box(a)?;
    require_no_prf(a)?;
    Ok(rs(a))
}

fn rs(a: &Formula) -> Formula {
    match a.kind() {
        FormulaKind::Bot | FormulaKind::Eq(..) => a.clone(),
        FormulaKind::Atom(..) => Formula::boxed(a.clone()),
        FormulaKind::Or(l, r) => Formula::or(Formula::boxed(rs(l)), Formula::boxed(rs(r))),
        FormulaKind::And(l, r) => Formula::and(rs(l), rs(r)),
        FormulaKind::Implies(l, r) => Formula::boxed(Formula::implies(
            Formula::boxed(rs(l)),
            Formula::boxed(rs(r)),
        )),
        FormulaKind::Exists(x, b) => {
            Formula::new(FormulaKind::Exists(x.clone(), Formula::boxed(rs(b))))
        }
        FormulaKind::Forall(x, b) => Formula::new(FormulaKind::Forall(x.clone(), rs(b))),
        FormulaKind::Box(_) | FormulaKind::Prf(_) => unreachable!("checked by caller"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FfVariant {
    /// `□` re-enters every member of `Γ` under a `¬_E¬_E` prefix.
    Standard,
    /// `□` is transparent; `P` re-enters every member without a prefix.
    ModalEpistemic,
}

struct FfTranslator<'a> {
    ctx: &'a GammaContext,
    variant: FfVariant,
    memo: HashMap<(*const FormulaKind, usize), Formula>,
}

impl FfTranslator<'_> {
    fn translate(&mut self, a: &Formula, e_index: usize) -> Formula {
        let key = (a.node_ptr(), e_index);
        if let Some(done) = self.memo.get(&key) {
            return done.clone();
        }
        let e = self.ctx.members()[e_index].clone();
        let nn = |x: Formula| not_e_n(&e, 2, &x);
        let out = match a.kind() {
            FormulaKind::Bot | FormulaKind::Eq(..) | FormulaKind::Atom(..) => nn(a.clone()),
            FormulaKind::Or(l, r) => {
                let (l, r) = (self.translate(l, e_index), self.translate(r, e_index));
                nn(Formula::or(l, r))
            }
            FormulaKind::And(l, r) => {
                Formula::and(self.translate(l, e_index), self.translate(r, e_index))
            }
            FormulaKind::Implies(l, r) => {
                Formula::implies(self.translate(l, e_index), self.translate(r, e_index))
            }
            FormulaKind::Exists(x, b) => {
                let body = self.translate(b, e_index);
                nn(Formula::new(FormulaKind::Exists(x.clone(), body)))
            }
            FormulaKind::Forall(x, b) => {
                Formula::new(FormulaKind::Forall(x.clone(), self.translate(b, e_index)))
            }
            FormulaKind::Box(b) => match self.variant {
                FfVariant::Standard => nn(self.over_gamma(b)),
                FfVariant::ModalEpistemic => self.translate(b, e_index),
            },
            FormulaKind::Prf(b) => match self.variant {
                FfVariant::Standard => unreachable!("checked by caller"),
                FfVariant::ModalEpistemic => self.over_gamma(b),
            },
        };
        self.memo.insert(key, out.clone());
        out
    }

    /// `⋀_{C∈Γ} b^(C)`.
    fn over_gamma(&mut self, b: &Formula) -> Formula {
        let ctx = self.ctx;
        let mut index = 0;
        conj_over(ctx, |_| {
            let part = self.translate(b, index);
            index += 1;
            part
        })
    }
}

/// Flagg–Friedman translation `A^(E)_Γ` from S4 into the intuitionistic
/// language, with `E` the distinguished member of `ctx`.
pub fn translate_ff(a: &Formula, ctx: &GammaContext) -> Result<Formula, TranslateError> {
    require_no_prf(a)?;
    if let Some(bad) = ctx
        .members()
        .iter()
        .find(|c| c.contains_box() || c.contains_prf())
    {
        return Err(TranslateError::ModalInContext(bad.to_string()));
    }
    Ok(FfTranslator {
        ctx,
        variant: FfVariant::Standard,
        memo: HashMap::new(),
    }
    .translate(a, ctx.e_index()))
}

/// `⋀_{C∈Γ} A^(C)_Γ`, the conjunction of the Flagg–Friedman images of `a`
/// for every choice of distinguished member. The choice of `E` in `ctx` is
/// irrelevant.
pub fn translate_ff_over_gamma(a: &Formula, ctx: &GammaContext) -> Result<Formula, TranslateError> {
    require_no_prf(a)?;
    if let Some(bad) = ctx
        .members()
        .iter()
        .find(|c| c.contains_box() || c.contains_prf())
    {
        return Err(TranslateError::ModalInContext(bad.to_string()));
    }
    Ok(FfTranslator {
        ctx,
        variant: FfVariant::Standard,
        memo: HashMap::new(),
    }
    .over_gamma(a))
}

/// Flagg–Friedman translation for the language with both `□` and the proof
/// operator `P`: `(□A)^(E) = A^(E)` and `(PA)^(E) = ⋀_{C∈Γ} A^(C)`.
pub fn translate_ff_mea(a: &Formula, ctx: &GammaContext) -> Result<Formula, TranslateError> {
    Ok(FfTranslator {
        ctx,
        variant: FfVariant::ModalEpistemic,
        memo: HashMap::new(),
    }
    .translate(a, ctx.e_index()))
}

/// The `Γ = {⊥}` simplification `A^F`: `□` is dropped, atoms (including `⊥`)
/// and the prime connectives `∨`, `∃` get a double negation.
pub fn translate_f(a: &Formula) -> Result<Formula, TranslateError> {
    require_no_prf(a)?;
    Ok(f_translation(a))
}

fn f_translation(a: &Formula) -> Formula {
    match a.kind() {
        FormulaKind::Bot | FormulaKind::Eq(..) | FormulaKind::Atom(..) => dn(a.clone()),
        FormulaKind::Or(l, r) => dn(Formula::or(f_translation(l), f_translation(r))),
        FormulaKind::And(l, r) => Formula::and(f_translation(l), f_translation(r)),
        FormulaKind::Implies(l, r) => Formula::implies(f_translation(l), f_translation(r)),
        FormulaKind::Box(b) => f_translation(b),
        FormulaKind::Exists(x, b) => dn(Formula::new(FormulaKind::Exists(
            x.clone(),
            f_translation(b),
        ))),
        FormulaKind::Forall(x, b) => Formula::new(FormulaKind::Forall(x.clone(), f_translation(b))),
        FormulaKind::Prf(_) => unreachable!("checked by caller"),
    }
}

/// Deletes every `□`.
pub fn translate_dbox(a: &Formula) -> Result<Formula, TranslateError> {
    require_no_prf(a)?;
    Ok(dbox(a))
}

fn dbox(a: &Formula) -> Formula {
    match a.kind() {
        FormulaKind::Box(b) => dbox(b),
        _ if a.is_atomic() => a.clone(),
        _ => rebuild(a, a.children().into_iter().map(dbox).collect()),
    }
}

/// Negative (Gödel–Gentzen) translation `A°` from classical into
/// intuitionistic logic. `⊥° = ⊥`, so `(¬A)° = ¬A°` falls out of the
/// implication clause.
pub fn translate_negative(a: &Formula) -> Result<Formula, TranslateError> {
    require_no_box(a)?;
    require_no_prf(a)?;
    Ok(negative(a))
}

fn negative(a: &Formula) -> Formula {
    match a.kind() {
        FormulaKind::Bot => a.clone(),
        FormulaKind::Eq(..) | FormulaKind::Atom(..) => dn(a.clone()),
        FormulaKind::Or(l, r) => Formula::not(Formula::and(
            Formula::not(negative(l)),
            Formula::not(negative(r)),
        )),
        FormulaKind::And(l, r) => Formula::and(negative(l), negative(r)),
        FormulaKind::Implies(l, r) => Formula::implies(negative(l), negative(r)),
        FormulaKind::Forall(x, b) => Formula::new(FormulaKind::Forall(x.clone(), negative(b))),
        FormulaKind::Exists(x, b) => Formula::not(Formula::new(FormulaKind::Forall(
            x.clone(),
            Formula::not(negative(b)),
        ))),
        FormulaKind::Box(_) | FormulaKind::Prf(_) => unreachable!("checked by caller"),
    }
}

fn strip_triple(e: &Formula, a: &Formula) -> Option<Formula> {
    let peel = |f: &Formula| match f.kind() {
        FormulaKind::Implies(x, y) if y == e => Some(x.clone()),
        _ => None,
    };
    let inner = peel(&peel(&peel(a)?)?)?;
    Some(not_e(e, &inner))
}

/// Rewrites every `¬_E¬_E¬_E X` to `¬_E X`, outermost first, until no
/// triple remains.
pub fn collapse_triple_not_e(e: &Formula, a: &Formula) -> Formula {
    let mut current = a.clone();
    while let Some(shorter) = strip_triple(e, &current) {
        current = shorter;
    }
    let rebuilt = rebuild(
        &current,
        current
            .children()
            .into_iter()
            .map(|c| collapse_triple_not_e(e, c))
            .collect(),
    );
    if strip_triple(e, &rebuilt).is_some() {
        collapse_triple_not_e(e, &rebuilt)
    } else {
        rebuilt
    }
}

/// Rewrites every `¬²_X X` (i.e. `(X ⊃ X) ⊃ X`) to `X`, bottom-up. With
/// `X = ⊥` this turns `¬²⊥` back into `⊥`.
pub fn collapse_self_double_negation(a: &Formula) -> Formula {
    let rebuilt = rebuild(
        a,
        a.children()
            .into_iter()
            .map(collapse_self_double_negation)
            .collect(),
    );
    if let FormulaKind::Implies(inner, x) = rebuilt.kind() {
        if let FormulaKind::Implies(l, r) = inner.kind() {
            if l == x && r == x {
                return x.clone();
            }
        }
    }
    rebuilt
}

/// Rewrites every `¬²_E ∃y ¬²_E B` to `¬²_E ∃y B`, bottom-up.
pub fn eliminate_inner_double_negation(e: &Formula, a: &Formula) -> Formula {
    let rebuilt = rebuild(
        a,
        a.children()
            .into_iter()
            .map(|c| eliminate_inner_double_negation(e, c))
            .collect(),
    );
    let peel = |f: &Formula| match f.kind() {
        FormulaKind::Implies(x, y) if y == e => Some(x.clone()),
        _ => None,
    };
    let stripped = (|| {
        let ex = peel(&peel(&rebuilt)?)?;
        let FormulaKind::Exists(y, body) = ex.kind() else {
            return None;
        };
        let inner = peel(&peel(body)?)?;
        Some(not_e_n(
            e,
            2,
            &Formula::new(FormulaKind::Exists(y.clone(), inner)),
        ))
    })();
    stripped.unwrap_or(rebuilt)
}
