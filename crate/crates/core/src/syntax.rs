//! The shared term and formula AST.
//!
//! One AST serves every language in the workbench: intuitionistic and
//! classical formulas, modal formulas with `□`, and formulas with the proof
//! operator `P`. Negation and `◇` are not constructors; `¬A` is stored as
//! `A ⊃ ⊥` and `◇A` as `¬□¬A`.
//!
//! Subformulas are held behind [`Arc`], so cloning a [`Formula`] is cheap and
//! translations can share subtrees freely.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("function application `{0}` needs at least one argument")]
    EmptyApplication(String),
    #[error("context is empty")]
    EmptyContext,
    #[error("distinguished formula `{0}` is not a member of the context")]
    NotInContext(String),
}

/// An identifier matching `[a-zA-Z][a-zA-Z0-9_]*`, other than the reserved
/// words `bot`, `forall`, `exists` and `prf`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, SyntaxError> {
        if is_identifier(name) && !crate::surface::is_keyword(name) {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(SyntaxError::InvalidIdentifier(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds a symbol from a name known to be valid.
///
/// # Panics
///
/// Panics if `name` is not an identifier.
pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap_or_else(|e| panic!("{e}"))
}

/// First-order term. Constants are numerals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Symbol),
    Const(u64),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(sym(name))
    }

    pub fn app(name: &str, args: Vec<Term>) -> Result<Term, SyntaxError> {
        if args.is_empty() {
            return Err(SyntaxError::EmptyApplication(name.to_owned()));
        }
        Ok(Term::App(Symbol::new(name)?, args))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Bot,
    Eq(Term, Term),
    /// Predicate application; propositional atoms have no arguments.
    Atom(Symbol, Vec<Term>),
    Or(Formula, Formula),
    And(Formula, Formula),
    Implies(Formula, Formula),
    Exists(Symbol, Formula),
    Forall(Symbol, Formula),
    Box(Formula),
    /// The proof operator `P`.
    Prf(Formula),
}

/// A formula. Equality is structural; ordering is the canonical order
/// (node count, then printed form).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Formula(Arc<FormulaKind>);

impl Formula {
    pub fn new(kind: FormulaKind) -> Self {
        Formula(Arc::new(kind))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    /// Identity of this node, stable while the formula is alive.
    pub(crate) fn node_ptr(&self) -> *const FormulaKind {
        Arc::as_ptr(&self.0)
    }

    pub fn bot() -> Self {
        Formula::new(FormulaKind::Bot)
    }

    /// Propositional atom.
    ///
    /// # Panics
    ///
    /// Panics if `name` is not an identifier.
    pub fn atom(name: &str) -> Self {
        Formula::new(FormulaKind::Atom(sym(name), Vec::new()))
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Self {
        Formula::new(FormulaKind::Atom(sym(name), args))
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::new(FormulaKind::Eq(lhs, rhs))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::new(FormulaKind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::new(FormulaKind::Or(a, b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::new(FormulaKind::Implies(a, b))
    }

    /// `¬A`, i.e. `A ⊃ ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::bot())
    }

    /// `(A ⊃ B) ∧ (B ⊃ A)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn boxed(a: Formula) -> Self {
        Formula::new(FormulaKind::Box(a))
    }

    /// `◇A`, i.e. `¬□¬A`.
    pub fn diamond(a: Formula) -> Self {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    pub fn prf(a: Formula) -> Self {
        Formula::new(FormulaKind::Prf(a))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::new(FormulaKind::Forall(sym(var), body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::new(FormulaKind::Exists(sym(var), body))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self.kind(), FormulaKind::Bot)
    }

    /// Atomic in the wide sense: `⊥`, equations and predicate applications.
    pub fn is_atomic(&self) -> bool {
        matches!(
            self.kind(),
            FormulaKind::Bot | FormulaKind::Eq(..) | FormulaKind::Atom(..)
        )
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self.kind() {
            FormulaKind::Bot | FormulaKind::Eq(..) | FormulaKind::Atom(..) => Vec::new(),
            FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => {
                vec![a, b]
            }
            FormulaKind::Exists(_, a)
            | FormulaKind::Forall(_, a)
            | FormulaKind::Box(a)
            | FormulaKind::Prf(a) => vec![a],
        }
    }

    /// Number of formula nodes, counting shared subtrees once per occurrence.
    pub fn node_count(&self) -> u64 {
        self.children()
            .into_iter()
            .fold(1u64, |n, c| n.saturating_add(c.node_count()))
    }

    /// Height of the formula tree; atoms and `⊥` have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// True if `pred` holds at some node.
    pub fn any_node(&self, pred: &mut impl FnMut(&Formula) -> bool) -> bool {
        let mut seen = HashSet::new();
        self.any_node_inner(pred, &mut seen)
    }

    fn any_node_inner(
        &self,
        pred: &mut impl FnMut(&Formula) -> bool,
        seen: &mut HashSet<*const FormulaKind>,
    ) -> bool {
        if !seen.insert(self.node_ptr()) {
            return false;
        }
        pred(self)
            || self
                .children()
                .into_iter()
                .any(|c| c.any_node_inner(pred, seen))
    }

    pub fn contains_box(&self) -> bool {
        self.any_node(&mut |f| matches!(f.kind(), FormulaKind::Box(_)))
    }

    pub fn contains_prf(&self) -> bool {
        self.any_node(&mut |f| matches!(f.kind(), FormulaKind::Prf(_)))
    }

    pub fn contains_quantifier(&self) -> bool {
        self.any_node(&mut |f| {
            matches!(f.kind(), FormulaKind::Exists(..) | FormulaKind::Forall(..))
        })
    }

    /// Matches `A ⊃ ⊥` and returns `A`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self.kind() {
            FormulaKind::Implies(a, b) if b.is_bot() => Some(a),
            _ => None,
        }
    }

    /// Matches `¬□¬A` and returns `A`.
    pub fn as_diamond(&self) -> Option<&Formula> {
        let inner = self.as_negation()?;
        match inner.kind() {
            FormulaKind::Box(b) => b.as_negation(),
            _ => None,
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical order: node count first, then the printed form.
///
/// Printing is injective, so this is a strict total order consistent with
/// structural equality.
pub fn canonical_cmp(a: &Formula, b: &Formula) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    a.node_count()
        .cmp(&b.node_count())
        .then_with(|| a.to_string().cmp(&b.to_string()))
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self, other)
    }
}

/// `¬_E A`, i.e. `A ⊃ E`.
pub fn not_e(e: &Formula, a: &Formula) -> Formula {
    Formula::implies(a.clone(), e.clone())
}

/// `¬_E` applied `n` times.
pub fn not_e_n(e: &Formula, n: usize, a: &Formula) -> Formula {
    (0..n).fold(a.clone(), |acc, _| not_e(e, &acc))
}

/// Reflexive subformula closure in canonical order, without duplicates.
pub fn subformulas(a: &Formula) -> Vec<Formula> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![a.clone()];
    while let Some(f) = stack.pop() {
        if seen.insert(f.clone()) {
            stack.extend(f.children().into_iter().cloned());
            out.push(f);
        }
    }
    out.sort();
    out
}

/// Propositional: no equations, no quantifiers, only nullary atoms.
/// `□` and `P` are allowed.
pub fn is_propositional(a: &Formula) -> bool {
    !a.any_node(&mut |f| match f.kind() {
        FormulaKind::Eq(..) | FormulaKind::Exists(..) | FormulaKind::Forall(..) => true,
        FormulaKind::Atom(_, args) => !args.is_empty(),
        _ => false,
    })
}

/// Right-associated conjunction of a nonempty list.
///
/// # Panics
///
/// Panics on an empty list.
pub fn big_and(items: Vec<Formula>) -> Formula {
    let mut iter = items.into_iter().rev();
    let last = iter.next().expect("conjunction over an empty list");
    iter.fold(last, |acc, f| Formula::and(f, acc))
}

/// A finite set `Γ` of formulas with a distinguished member `E`.
///
/// Members are kept in canonical order without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaContext {
    gamma: Vec<Formula>,
    e_index: usize,
}

impl GammaContext {
    pub fn new(gamma: impl IntoIterator<Item = Formula>, e: &Formula) -> Result<Self, SyntaxError> {
        let mut gamma: Vec<Formula> = gamma.into_iter().collect();
        gamma.sort();
        gamma.dedup();
        if gamma.is_empty() {
            return Err(SyntaxError::EmptyContext);
        }
        let e_index = gamma
            .iter()
            .position(|c| c == e)
            .ok_or_else(|| SyntaxError::NotInContext(e.to_string()))?;
        Ok(GammaContext { gamma, e_index })
    }

    /// `Γ = {⊥}` with `E = ⊥`.
    pub fn falsum() -> Self {
        GammaContext {
            gamma: vec![Formula::bot()],
            e_index: 0,
        }
    }

    pub fn members(&self) -> &[Formula] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn e(&self) -> &Formula {
        &self.gamma[self.e_index]
    }

    pub fn e_index(&self) -> usize {
        self.e_index
    }

    /// Same `Γ`, distinguished member moved to position `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index` is out of range.
    pub fn with_e_index(&self, index: usize) -> Self {
        assert!(index < self.gamma.len(), "context index out of range");
        GammaContext {
            gamma: self.gamma.clone(),
            e_index: index,
        }
    }
}

/// Maps `f` over `Γ` in canonical order and right-associates the results
/// with `∧`. A singleton `Γ` yields `f(C)` without a conjunction node.
pub fn conj_over(ctx: &GammaContext, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
    big_and(ctx.members().iter().map(&mut f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }

    #[test]
    fn identifiers() {
        assert!(Symbol::new("p0").is_ok());
        assert!(Symbol::new("R_x2").is_ok());
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("0p").is_err());
        assert!(Symbol::new("_p").is_err());
        assert!(Symbol::new("forall").is_err());
        assert!(Term::app("f", vec![]).is_err());
    }

    #[test]
    fn not_e_examples() {
        let bot = Formula::bot();
        assert_eq!(not_e(&bot, &p()), Formula::implies(p(), bot.clone()));
        assert_eq!(not_e(&q(), &p()), Formula::implies(p(), q()));
        assert_eq!(not_e(&p(), &p()), Formula::implies(p(), p()));
    }

    #[test]
    fn not_e_n_examples() {
        let bot = Formula::bot();
        assert_eq!(not_e_n(&bot, 2, &p()), Formula::not(Formula::not(p())));
        assert_eq!(not_e_n(&q(), 0, &p()), p());
        let expected = Formula::implies(Formula::implies(Formula::implies(p(), q()), q()), q());
        assert_eq!(not_e_n(&q(), 3, &p()), expected);
    }

    #[test]
    fn subformula_examples() {
        assert_eq!(
            subformulas(&Formula::or(p(), q())),
            vec![p(), q(), Formula::or(p(), q())]
        );
        assert_eq!(subformulas(&Formula::bot()), vec![Formula::bot()]);
        let pq = Formula::implies(p(), q());
        let peirce_core = Formula::implies(pq.clone(), p());
        assert_eq!(
            subformulas(&peirce_core),
            vec![p(), q(), pq, peirce_core.clone()]
        );
    }

    #[test]
    fn subformulas_cover_box_and_quantifier_bodies() {
        let body = Formula::pred("P", vec![Term::var("x")]);
        let f = Formula::boxed(Formula::forall("x", body.clone()));
        let subs = subformulas(&f);
        assert!(subs.contains(&body));
        assert!(subs.contains(&Formula::forall("x", body)));
        assert!(subs.contains(&f));
    }

    #[test]
    fn conj_over_examples() {
        let single = GammaContext::new([Formula::bot()], &Formula::bot()).unwrap();
        assert_eq!(conj_over(&single, |c| c.clone()), Formula::bot());
        let two = GammaContext::new([q(), p()], &p()).unwrap();
        assert_eq!(conj_over(&two, |c| c.clone()), Formula::and(p(), q()));
        let three = GammaContext::new([r(), p(), q()], &q()).unwrap();
        assert_eq!(
            conj_over(&three, |c| c.clone()),
            Formula::and(p(), Formula::and(q(), r()))
        );
    }

    #[test]
    fn context_requires_membership() {
        assert_eq!(
            GammaContext::new([p()], &q()),
            Err(SyntaxError::NotInContext("q".into()))
        );
        assert_eq!(GammaContext::new([], &q()), Err(SyntaxError::EmptyContext));
        let ctx = GammaContext::new([p(), p(), q()], &q()).unwrap();
        assert_eq!(ctx.members(), &[p(), q()]);
        assert_eq!(ctx.e(), &q());
    }

    #[test]
    fn propositional_examples() {
        assert!(is_propositional(&Formula::implies(
            Formula::boxed(p()),
            p()
        )));
        assert!(!is_propositional(&Formula::forall(
            "x",
            Formula::pred("P", vec![Term::var("x")])
        )));
        assert!(!is_propositional(&Formula::eq(
            Term::var("s"),
            Term::var("t")
        )));
    }

    #[test]
    fn sugar_recognizers() {
        let d = Formula::diamond(p());
        assert_eq!(d.as_diamond(), Some(&p()));
        assert_eq!(Formula::not(p()).as_negation(), Some(&p()));
        assert_eq!(p().as_negation(), None);
    }
}
