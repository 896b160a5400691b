mod common;

use common::{atom_names, forces, frames, prop_formula, small_countermodel, Frame};
use emblab::embeddings::{
    translate_dbox, translate_f, translate_ff, translate_ff_mea, translate_ff_over_gamma,
    translate_goedel, translate_negative, translate_rs, TranslateError,
};
use emblab::syntax::{conj_over, Formula, GammaContext};
use emblab::verify::{replay_markov_chain, MARKOV_STAGES};
use emblab::{parse, print};
use proptest::prelude::*;

fn p(text: &str) -> Formula {
    parse(text).unwrap()
}

fn iff(a: &Formula, b: &Formula) -> Formula {
    Formula::iff(a.clone(), b.clone())
}

/// No countermodel among intuitionistic models with up to three worlds.
fn holds_in_small_ipc_models(f: &Formula, atoms: usize) -> bool {
    small_countermodel(f, &atom_names(atoms), 3, true).is_none()
}

/// Every S4 model (preorder, arbitrary valuation) with up to `max_worlds`
/// worlds over `atoms`.
fn s4_models(atoms: usize, max_worlds: usize) -> Vec<Frame> {
    let names = atom_names(atoms);
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        for rel in frames(n, false) {
            for mask in 0u64..(1 << (n * atoms)) {
                let val = (0..n)
                    .map(|w| {
                        (0..atoms)
                            .filter(|i| mask >> (w * atoms + i) & 1 == 1)
                            .map(|i| names[i].clone())
                            .collect()
                    })
                    .collect();
                out.push(Frame {
                    rel: rel.clone(),
                    val,
                });
            }
        }
    }
    out
}

/// The upward-closed valuation `w ⊩ p` iff `p` holds at every successor.
fn interior(frame: &Frame) -> Frame {
    let n = frame.rel.len();
    let names: Vec<String> = frame.val.iter().flatten().cloned().collect();
    let val = (0..n)
        .map(|w| {
            let mut atoms: Vec<String> = names
                .iter()
                .filter(|a| (0..n).all(|v| !frame.rel[w][v] || frame.val[v].contains(a)))
                .cloned()
                .collect();
            atoms.sort();
            atoms.dedup();
            atoms
        })
        .collect();
    Frame {
        rel: frame.rel.clone(),
        val,
    }
}

fn classical_models(atoms: usize) -> Vec<Frame> {
    s4_models(atoms, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn goedel_and_rs_images_track_intuitionistic_forcing(a in prop_formula(2, 4, false)) {
        let g = translate_goedel(&a).unwrap();
        let rs = translate_rs(&a).unwrap();
        for model in s4_models(2, 3) {
            let int = interior(&model);
            for w in 0..model.rel.len() {
                let expected = forces(&int, w, &a, true);
                prop_assert_eq!(forces(&model, w, &g, false), expected, "Goedel image {}", g);
                prop_assert_eq!(forces(&model, w, &rs, false), expected, "RS image {}", rs);
            }
        }
    }

    #[test]
    fn negative_image_is_classically_equivalent_and_stable(a in prop_formula(3, 4, false)) {
        let n = translate_negative(&a).unwrap();
        for model in classical_models(3) {
            prop_assert_eq!(forces(&model, 0, &n, false), forces(&model, 0, &a, false));
        }
        let stable = Formula::implies(Formula::not(Formula::not(n.clone())), n);
        prop_assert!(holds_in_small_ipc_models(&stable, 3));
    }

    #[test]
    fn f_image_is_double_negated_box_deletion(a in prop_formula(2, 3, true)) {
        let f = translate_f(&a).unwrap();
        let d = translate_dbox(&a).unwrap();
        prop_assert!(!d.contains_box());
        let target = Formula::not(Formula::not(d));
        prop_assert!(holds_in_small_ipc_models(&iff(&f, &target), 2), "{} vs {}", f, target);
    }

    #[test]
    fn ff_with_falsum_context_matches_f(a in prop_formula(3, 4, true)) {
        let ff = translate_ff(&a, &GammaContext::falsum()).unwrap();
        let f = translate_f(&a).unwrap();
        prop_assert!(!ff.contains_box());
        prop_assert!(holds_in_small_ipc_models(&iff(&ff, &f), 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ff_images_of_s4_axioms_are_intuitionistically_valid(
        a in prop_formula(2, 1, true),
        b in prop_formula(2, 1, true),
        gamma in proptest::collection::vec(prop_formula(2, 1, false), 1..=2),
        pick in any::<prop::sample::Index>(),
    ) {
        let e = pick.get(&gamma).clone();
        let ctx = GammaContext::new(gamma, &e).unwrap();
        let bx = Formula::boxed;
        let axioms = [
            Formula::implies(
                bx(Formula::implies(a.clone(), b.clone())),
                Formula::implies(bx(a.clone()), bx(b.clone())),
            ),
            Formula::implies(bx(a.clone()), a.clone()),
            Formula::implies(bx(a.clone()), bx(bx(a.clone()))),
        ];
        for axiom in &axioms {
            let image = translate_ff(axiom, &ctx).unwrap();
            prop_assert!(!image.contains_box());
            prop_assert!(holds_in_small_ipc_models(&image, 2), "{} under E = {}", axiom, e);
        }
    }
}

#[test]
fn fixed_translation_outputs() {
    let a = p("p -> q | r");
    assert_eq!(
        print(&translate_goedel(&a).unwrap()),
        "[]([]p -> []q | []r)"
    );
    assert_eq!(
        print(&translate_rs(&a).unwrap()),
        "[]([][]p -> []([][]q | [][]r))"
    );
    assert_eq!(print(&translate_f(&p("[]p -> q")).unwrap()), "~~p -> ~~q");
    assert_eq!(print(&translate_dbox(&p("[](p & []q)")).unwrap()), "p & q");
    assert_eq!(
        print(&translate_negative(&p("p | q")).unwrap()),
        "~(~~~p & ~~~q)"
    );
    assert_eq!(translate_negative(&p("bot")).unwrap(), Formula::bot());
    assert_eq!(
        translate_goedel(&p("forall x. P(x)")).unwrap(),
        p("[] forall x. []P(x)")
    );
    assert_eq!(
        translate_rs(&p("exists x. P(x)")).unwrap(),
        p("exists x. [][]P(x)")
    );
}

#[test]
fn ff_box_reenters_every_context_member() {
    let q = p("q");
    let ctx = GammaContext::new([Formula::bot(), q.clone()], &q).unwrap();
    let image = translate_ff(&p("[]p"), &ctx).unwrap();
    let nn = |e: &Formula, x: Formula| Formula::implies(Formula::implies(x, e.clone()), e.clone());
    let inner = conj_over(&ctx, |c| nn(c, p("p")));
    assert_eq!(image, nn(&q, inner));
    assert_eq!(
        translate_ff_over_gamma(&p("p"), &ctx).unwrap(),
        conj_over(&ctx, |c| nn(c, p("p")))
    );
}

#[test]
fn modal_epistemic_variant_treats_box_as_transparent() {
    let q = p("q");
    let ctx = GammaContext::new([Formula::bot(), q.clone()], &q).unwrap();
    let a = p("p -> r");
    assert_eq!(
        translate_ff_mea(&Formula::boxed(a.clone()), &ctx).unwrap(),
        translate_ff_mea(&a, &ctx).unwrap()
    );
    let over = translate_ff_mea(&Formula::prf(a.clone()), &ctx).unwrap();
    let expected = conj_over(&ctx, |c| {
        translate_ff_mea(
            &a,
            &ctx.with_e_index(ctx.members().iter().position(|m| m == c).unwrap()),
        )
        .unwrap()
    });
    assert_eq!(over, expected);
}

#[test]
fn translations_reject_out_of_language_input() {
    assert_eq!(
        translate_goedel(&p("[]p")),
        Err(TranslateError::ModalInSource)
    );
    assert_eq!(
        translate_rs(&p("p & []q")),
        Err(TranslateError::ModalInSource)
    );
    assert_eq!(
        translate_negative(&p("<>p")),
        Err(TranslateError::ModalInSource)
    );
    assert_eq!(
        translate_f(&p("prf p")),
        Err(TranslateError::ProofOperatorInSource)
    );
    assert_eq!(
        translate_ff(&p("prf p"), &GammaContext::falsum()),
        Err(TranslateError::ProofOperatorInSource)
    );
    let modal_ctx = GammaContext::new([p("[]q")], &p("[]q")).unwrap();
    assert!(matches!(
        translate_ff(&p("p"), &modal_ctx),
        Err(TranslateError::ModalInContext(_))
    ));
}

#[test]
fn nested_boxes_stay_polynomial() {
    let mut a = p("p");
    for _ in 0..40 {
        a = Formula::boxed(Formula::implies(a, p("q")));
    }
    let ctx = GammaContext::new([Formula::bot(), p("p"), p("q")], &p("p")).unwrap();
    let start = std::time::Instant::now();
    let image = translate_ff(&a, &ctx).unwrap();
    assert!(start.elapsed().as_secs() < 5);
    assert!(!image.contains_box());
}

#[test]
fn markov_chain_reaches_its_final_stage() {
    let report = replay_markov_chain().unwrap();
    assert!(report.holds());
    for (stage, (label, text)) in report.stages.iter().zip(MARKOV_STAGES) {
        assert_eq!(stage.label, label);
        assert_eq!(stage.formula, p(text));
    }
    assert_eq!(
        report.stages.last().unwrap().formula,
        p("forall x. ~~exists y. R(x,y)")
    );
}
