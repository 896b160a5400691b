mod common;

use std::cmp::Ordering;

use common::{any_formula, prop_formula};
use emblab::syntax::{
    big_and, canonical_cmp, conj_over, not_e, not_e_n, subformulas, Formula, FormulaKind,
    GammaContext, Symbol,
};
use proptest::prelude::*;

/// Splits a right-associated conjunction into its conjuncts.
fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f.kind() {
        FormulaKind::And(a, b) => {
            let mut out = vec![a.clone()];
            out.extend(conjuncts(b));
            out
        }
        _ => vec![f.clone()],
    }
}

fn contains(haystack: &Formula, needle: &Formula) -> bool {
    haystack.clone().any_node(&mut |f| f == needle)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn not_e_n_composes(e in prop_formula(2, 2, false), a in any_formula(3), m in 0usize..4, n in 0usize..4) {
        prop_assert_eq!(not_e_n(&e, m + n, &a), not_e_n(&e, m, &not_e_n(&e, n, &a)));
        prop_assert_eq!(not_e_n(&e, 1, &a), not_e(&e, &a));
        prop_assert_eq!(not_e_n(&e, 0, &a), a.clone());
        prop_assert_eq!(not_e_n(&e, n, &a).node_count(), a.node_count() + n as u64 * (1 + e.node_count()));
    }

    #[test]
    fn subformulas_are_closed_sorted_and_distinct(a in any_formula(4)) {
        let subs = subformulas(&a);
        prop_assert!(subs.contains(&a));
        for w in subs.windows(2) {
            prop_assert_eq!(canonical_cmp(&w[0], &w[1]), Ordering::Less);
        }
        for s in &subs {
            prop_assert!(contains(&a, s));
            for c in s.children() {
                prop_assert!(subs.contains(c));
            }
        }
        prop_assert_eq!(subs.last(), Some(&a));
    }

    #[test]
    fn canonical_order_is_a_strict_total_order(a in any_formula(3), b in any_formula(3), c in any_formula(3)) {
        prop_assert_eq!(canonical_cmp(&a, &a), Ordering::Equal);
        prop_assert_eq!(canonical_cmp(&a, &b), canonical_cmp(&b, &a).reverse());
        prop_assert_eq!(canonical_cmp(&a, &b) == Ordering::Equal, a == b);
        if canonical_cmp(&a, &b) == Ordering::Less && canonical_cmp(&b, &c) == Ordering::Less {
            prop_assert_eq!(canonical_cmp(&a, &c), Ordering::Less);
        }
        if a.node_count() < b.node_count() {
            prop_assert_eq!(canonical_cmp(&a, &b), Ordering::Less);
        }
    }

    #[test]
    fn conj_over_has_one_conjunct_per_member_in_order(
        members in proptest::collection::vec(prop_formula(3, 2, true), 1..6),
        pick in any::<prop::sample::Index>(),
    ) {
        let e = pick.get(&members).clone();
        let ctx = GammaContext::new(members, &e).unwrap();
        prop_assert_eq!(ctx.e(), &e);
        let mapped = conj_over(&ctx, |c| Formula::boxed(c.clone()));
        let expected: Vec<Formula> = ctx.members().iter().map(|c| Formula::boxed(c.clone())).collect();
        prop_assert_eq!(conjuncts(&mapped), expected.clone());
        prop_assert_eq!(mapped, big_and(expected));
        for w in ctx.members().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn sugar_is_recognised(a in any_formula(3)) {
        let negated = Formula::not(a.clone());
        let diamond = Formula::diamond(a.clone());
        prop_assert_eq!(negated.as_negation(), Some(&a));
        prop_assert_eq!(diamond.as_diamond(), Some(&a));
        prop_assert_eq!(Formula::not(a.clone()), Formula::implies(a.clone(), Formula::bot()));
    }

    #[test]
    fn depth_and_size_are_consistent(a in any_formula(4)) {
        prop_assert!(a.depth() as u64 <= a.node_count());
        let below: u64 = a.children().iter().map(|c| c.node_count()).sum();
        prop_assert_eq!(a.node_count(), 1 + below);
    }
}

#[test]
fn identifiers_follow_the_lexical_rule() {
    for good in ["p", "P0", "x_1", "Less", "a_b_c"] {
        assert!(Symbol::new(good).is_ok(), "{good}");
    }
    for bad in [
        "", "0p", "_x", "p-q", "bot", "forall", "exists", "prf", "p q",
    ] {
        assert!(Symbol::new(bad).is_err(), "{bad}");
    }
}

#[test]
fn gamma_context_rejects_empty_and_foreign_members() {
    let p = Formula::atom("p");
    assert!(GammaContext::new(Vec::new(), &p).is_err());
    assert!(GammaContext::new(vec![Formula::bot()], &p).is_err());
    let ctx = GammaContext::new(vec![p.clone(), Formula::bot(), p.clone()], &p).unwrap();
    assert_eq!(ctx.len(), 2);
    assert_eq!(ctx.members()[0], Formula::bot());
    assert_eq!(ctx.with_e_index(0).e(), &Formula::bot());
    assert_eq!(GammaContext::falsum().e(), &Formula::bot());
}

#[test]
fn structurally_equal_formulas_are_equal_and_hash_alike() {
    use std::collections::HashSet;
    let a = Formula::and(Formula::atom("p"), Formula::boxed(Formula::atom("q")));
    let b = Formula::and(Formula::atom("p"), Formula::boxed(Formula::atom("q")));
    assert_eq!(a, b);
    let set: HashSet<Formula> = [a, b].into_iter().collect();
    assert_eq!(set.len(), 1);
}
