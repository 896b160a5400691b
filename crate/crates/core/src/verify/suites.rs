//! The predicate behind each suite, evaluated on one instance.

use rand::Rng;

use crate::deciders::{Logic, Sequent};
use crate::embeddings::{
    translate_dbox, translate_f, translate_ff, translate_ff_over_gamma, translate_goedel,
    translate_negative, translate_rs,
};
use crate::syntax::{big_and, not_e, not_e_n, subformulas, Formula, GammaContext};

use super::generate::{gen_formula, instance_rng, GenParams};
use super::{Case, Check, Suite};

pub(crate) fn run_instance(suite: Suite, params: &GenParams, index: u64, case: &mut Case) -> Check {
    match suite {
        Suite::RsSoundFaithful => sound_faithful(params, index, case, translate_rs, "A^[]RS"),
        Suite::GoedelSoundFaithful => sound_faithful(params, index, case, translate_goedel, "A^[]"),
        Suite::BoxEquiv => box_equiv(params, index, case),
        Suite::FfSoundness => ff_soundness(params, index, case),
        Suite::CoreLemma => core_lemma(params, index, case),
        Suite::NegationIdentities => negation_identities(params, index, case),
        Suite::FfNegation => ff_negation(params, index, case),
        Suite::FfDoubleNegation => ff_double_negation(params, index, case),
        Suite::FfFalsumIsF => ff_falsum_is_f(params, index, case),
        Suite::SelfDoubleNegation => self_double_negation(params, index, case),
        Suite::FFactorsNegative => f_factors_negative(params, index, case),
        Suite::FCollapse => f_collapse(params, index, case),
        Suite::Stability => stability(params, index, case),
        Suite::Glivenko => glivenko(params, index, case),
        Suite::DeciderConsistency => decider_consistency(params, index, case),
    }
}

/// A box-free source formula for instance `index`.
fn source(params: &GenParams, index: u64, case: &mut Case) -> Formula {
    let a = gen_formula(&params.without_box(), index);
    case.witness(&a);
    a
}

/// A formula that may contain boxes when the parameters allow them.
fn modal_source(params: &GenParams, index: u64, case: &mut Case) -> Formula {
    let a = gen_formula(params, index);
    case.witness(&a);
    a
}

/// `Γ` = subformulas of a fresh box-free formula from companion stream `k`,
/// with `E` picked uniformly.
fn sample_context(params: &GenParams, index: u64, k: u64, case: &mut Case) -> GammaContext {
    let pool_params = GenParams {
        max_depth: params.max_depth.min(2),
        ..params.companion(k).without_box()
    };
    let g = gen_formula(&pool_params, index);
    let members = subformulas(&g);
    let pick = instance_rng(&pool_params, index ^ (1 << 63)).gen_range(0..members.len());
    let e = members[pick].clone();
    case.witness(&g);
    case.witness(&e);
    GammaContext::new(members, &e).expect("E is drawn from Γ")
}

fn iff(a: &Formula, b: &Formula) -> Formula {
    Formula::iff(a.clone(), b.clone())
}

fn sound_faithful(
    params: &GenParams,
    index: u64,
    case: &mut Case,
    translate: fn(&Formula) -> Result<Formula, crate::embeddings::TranslateError>,
    name: &str,
) -> Check {
    let a = source(params, index, case);
    let image = translate(&a)?;
    case.witness(&image);
    let ipc = case.theorem(&a, Logic::Ipc)?;
    let s4 = case.theorem(&image, Logic::S4)?;
    case.require(ipc == s4, || {
        format!("IPC provable: {ipc}, S4 provable for {name}: {s4}")
    })
}

fn box_equiv(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    let g = translate_goedel(&a)?;
    let rs = translate_rs(&a)?;
    case.require_theorem(&iff(&g, &rs), Logic::S4, "A^[] <-> A^[]RS")
}

fn ff_soundness(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let b = modal_source(params, index, case);
    if !case.theorem(&b, Logic::S4)? {
        case.vacuous = true;
        return Ok(());
    }
    for k in 0..2 {
        let ctx = sample_context(params, index, k, case);
        let image = translate_ff(&b, &ctx)?;
        case.require_theorem(&image, Logic::Ipc, "S4 theorem under B^(C)_G")?;
    }
    Ok(())
}

fn core_lemma(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    let ctx = GammaContext::new(subformulas(&a), &a).expect("A is its own subformula");
    let rs = translate_ff_over_gamma(&translate_rs(&a)?, &ctx)?;
    case.require_equivalent(
        &a,
        &rs,
        Logic::Ipc,
        "A vs conjunction over G of (A^[]RS)^(C)",
    )?;
    let g = translate_ff_over_gamma(&translate_goedel(&a)?, &ctx)?;
    case.require_equivalent(&a, &g, Logic::Ipc, "A vs conjunction over G of (A^[])^(C)")
}

fn negation_identities(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    let b = gen_formula(&params.companion(10).without_box(), index);
    case.witness(&b);
    let ctx = sample_context(params, index, 0, case);
    let e = ctx.e().clone();
    let nn = |x: &Formula| not_e_n(&e, 2, x);

    case.require_equivalent(&a, &not_e_n(&a, 2, &a), Logic::Ipc, "A -||- ~~_A A")?;

    let ok = case.decide(&Sequent::new([a.clone()], nn(&a)), Logic::Ipc)?;
    case.require(ok, || "A |- ~~_E A fails".into())?;

    case.require_equivalent(
        &not_e(&e, &a),
        &not_e_n(&e, 3, &a),
        Logic::Ipc,
        "~_E A -||- ~~~_E A",
    )?;

    // A member of Γ against the conjunction of its ¬²_E images over all E.
    let member = ctx.members()[index as usize % ctx.len()].clone();
    let all_nn = big_and(
        ctx.members()
            .iter()
            .map(|c| not_e_n(c, 2, &member))
            .collect(),
    );
    case.require_equivalent(&member, &all_nn, Logic::Ipc, "C -||- conjunction of ~~_E C")?;

    case.require_equivalent(
        &nn(&Formula::or(a.clone(), b.clone())),
        &nn(&Formula::or(nn(&a), nn(&b))),
        Logic::Ipc,
        "~~_E(A | B) -||- ~~_E(~~_E A | ~~_E B)",
    )?;

    case.require_equivalent(
        &nn(&Formula::and(a.clone(), b.clone())),
        &Formula::and(nn(&a), nn(&b)),
        Logic::Ipc,
        "~~_E(A & B) -||- ~~_E A & ~~_E B",
    )?;

    // An implication in Γ against the conjunction of ¬²_E A ⊃ ¬²_E B.
    let imp = Formula::implies(a.clone(), b.clone());
    let with_imp = GammaContext::new(ctx.members().iter().cloned().chain([imp.clone()]), &e)
        .expect("E stays a member");
    let all_imp = big_and(
        with_imp
            .members()
            .iter()
            .map(|c| Formula::implies(not_e_n(c, 2, &a), not_e_n(c, 2, &b)))
            .collect(),
    );
    case.require_equivalent(
        &imp,
        &all_imp,
        Logic::Ipc,
        "A -> B -||- conjunction of (~~_E A -> ~~_E B)",
    )?;

    // Admissibility of A1..An |- B  =>  ~~_E A1..~~_E An |- ~~_E B.
    let n = (index % 3) as usize;
    let premises: Vec<Formula> = (0..n)
        .map(|i| gen_formula(&params.companion(20 + i as u64).without_box(), index))
        .collect();
    for p in &premises {
        case.witness(p);
    }
    let mut goal = b.clone();
    if !case.decide(&Sequent::new(premises.clone(), goal.clone()), Logic::Ipc)? {
        // Fall back to a conclusion that certainly follows.
        goal = match premises.last() {
            Some(last) => Formula::or(b.clone(), last.clone()),
            None => Formula::implies(b.clone(), b.clone()),
        };
    }
    let image = Sequent::new(premises.iter().map(&nn), nn(&goal));
    let ok = case.decide(&image, Logic::Ipc)?;
    case.require(ok, || {
        format!("double-negated rule instance fails for conclusion `{goal}`")
    })
}

fn ff_negation(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let b = modal_source(params, index, case);
    let ctx = sample_context(params, index, 0, case);
    let e = ctx.e();
    let image = translate_ff(&b, &ctx)?;
    let neg_image = translate_ff(&Formula::not(b.clone()), &ctx)?;
    case.require_equivalent(
        &neg_image,
        &not_e(e, &image),
        Logic::Ipc,
        "(~B)^E -||- ~_E B^E",
    )?;
    case.require_equivalent(
        &not_e_n(e, 2, &image),
        &image,
        Logic::Ipc,
        "~~_E B^E -||- B^E",
    )
}

fn ff_double_negation(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = modal_source(params, index, case);
    let ctx = sample_context(params, index, 0, case);
    let image = translate_ff(&a, &ctx)?;
    case.require_theorem(
        &iff(&not_e_n(ctx.e(), 2, &image), &image),
        Logic::Ipc,
        "~~_E A^E <-> A^E",
    )
}

fn ff_falsum_is_f(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = modal_source(params, index, case);
    let ff = translate_ff(&a, &GammaContext::falsum())?;
    let f = translate_f(&a)?;
    case.require_theorem(&iff(&ff, &f), Logic::Ipc, "A^bot <-> A^F")
}

fn self_double_negation(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    case.require_theorem(&iff(&a, &not_e_n(&a, 2, &a)), Logic::Ipc, "A <-> ~~_A A")
}

fn f_factors_negative(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = modal_source(params, index, case);
    let f = translate_f(&a)?;
    let neg = translate_negative(&translate_dbox(&a)?)?;
    case.require_theorem(&iff(&f, &neg), Logic::Ipc, "A^F <-> (A^d[])°")
}

fn f_collapse(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = modal_source(params, index, case);
    let f = translate_f(&a)?;
    let dnn = |x: Formula| Formula::not(Formula::not(x));
    case.require_theorem(
        &iff(&f, &dnn(translate_dbox(&a)?)),
        Logic::Ipc,
        "A^F <-> ~~A^d[]",
    )?;
    case.require_theorem(&iff(&f, &dnn(f.clone())), Logic::Ipc, "A^F <-> ~~A^F")
}

fn stability(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    let b = gen_formula(&params.companion(30), index);
    case.witness(&b);
    let g = translate_goedel(&a)?;
    let rs = translate_rs(&a)?;
    let boxed = Formula::boxed(b);
    let stable = |case: &mut Case, x: &Formula, what: &str| -> Check {
        let ok = case.theorem(&iff(x, &Formula::boxed(x.clone())), Logic::S4)?;
        case.require(ok, || format!("{what} is not stable: `{x}`"))
    };
    stable(case, &g, "A^[]")?;
    stable(case, &rs, "A^[]RS")?;
    stable(case, &boxed, "[]B")?;
    stable(case, &Formula::or(g.clone(), boxed.clone()), "A^[] | []B")?;
    stable(case, &Formula::and(rs, boxed), "A^[]RS & []B")?;
    stable(
        case,
        &Formula::and(g.clone(), Formula::or(g.clone(), g)),
        "A^[] & (A^[] | A^[])",
    )
}

fn glivenko(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = source(params, index, case);
    let cpc = case.theorem(&a, Logic::Cpc)?;
    let ipc = case.theorem(&Formula::not(Formula::not(a)), Logic::Ipc)?;
    case.require(cpc == ipc, || {
        format!("CPC provable: {cpc}, IPC proves ~~A: {ipc}")
    })
}

fn decider_consistency(params: &GenParams, index: u64, case: &mut Case) -> Check {
    let a = modal_source(params, index, case);
    let plain = translate_dbox(&a)?;
    case.witness(&plain);

    let first = case.theorem(&a, Logic::S4)?;
    let again = case.theorem(&a, Logic::S4)?;
    case.require(first == again, || "S4 verdict changed between runs".into())?;

    let cpc = case.theorem(&plain, Logic::Cpc)?;
    let ipc = case.theorem(&plain, Logic::Ipc)?;
    let s4 = case.theorem(&plain, Logic::S4)?;
    case.require(!ipc || cpc, || "IPC proves a classical non-theorem".into())?;
    case.require(s4 == cpc, || {
        format!("S4 and CPC disagree on a box-free formula: S4 {s4}, CPC {cpc}")
    })?;

    if first {
        let nec = case.theorem(&Formula::boxed(a.clone()), Logic::S4)?;
        case.require(nec, || {
            "S4 theorem whose necessitation is unprovable".into()
        })?;
    }

    let assumptions: Vec<Formula> = (0..(index % 3))
        .map(|k| gen_formula(&params.companion(40 + k), index))
        .collect();
    for x in &assumptions {
        case.witness(x);
    }
    let s = Sequent::new(assumptions, a.clone());
    let flat = Sequent::theorem(s.as_formula());
    let local = case.decide(&s, Logic::S4)?;
    let global = case.decide(&flat, Logic::S4)?;
    case.require(local == global, || {
        "sequent and its implication form disagree in S4".into()
    })?;

    let other = translate_dbox(&gen_formula(&params.companion(50), index))?;
    case.witness(&other);
    if case.theorem(&Formula::or(plain.clone(), other.clone()), Logic::Ipc)? {
        let left = case.theorem(&plain, Logic::Ipc)?;
        let right = case.theorem(&other, Logic::Ipc)?;
        case.require(left || right, || {
            "IPC proves a disjunction but neither disjunct".into()
        })?;
    }
    Ok(())
}
