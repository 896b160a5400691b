use emblab::deciders::{Decider, DeciderConfig};
use emblab::parse;
use emblab::verify::{
    gen_formula, replay_glivenko_chain, run_suite, run_suite_by_id, Connective, GenParams,
    GenParamsError, Suite, SuiteReport, VerifyError,
};
use proptest::prelude::*;

fn small(seed: u64) -> GenParams {
    GenParams {
        seed,
        max_depth: 3,
        num_atoms: 3,
        ..GenParams::default()
    }
}

fn without_timing(mut r: SuiteReport) -> SuiteReport {
    r.elapsed_ms = 0;
    r
}

#[test]
fn every_suite_passes_on_a_small_sample() {
    let decider = Decider::default();
    for suite in Suite::ALL {
        let report = run_suite(suite, &small(7), 20, &decider).unwrap();
        assert_eq!(report.suite, suite.id());
        assert_eq!(report.attempted, 20);
        assert!(report.passed(), "{suite}: {:#?}", report.failures);
        assert_eq!(
            report.successes() + report.failures.len() as u64 + report.budget_exhausted,
            report.attempted
        );
    }
}

#[test]
fn reports_are_deterministic() {
    let decider = Decider::default();
    for suite in [Suite::Glivenko, Suite::BoxEquiv, Suite::FfNegation] {
        let a = run_suite(suite, &small(11), 30, &decider).unwrap();
        let b = run_suite(suite, &small(11), 30, &decider).unwrap();
        assert_eq!(without_timing(a), without_timing(b));
    }
}

#[test]
fn report_json_has_exactly_the_public_fields() {
    let report = run_suite(Suite::Glivenko, &small(3), 10, &Decider::default()).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    let mut keys: Vec<&str> = json
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "attempted",
            "budget_exhausted",
            "elapsed_ms",
            "failures",
            "seed",
            "suite"
        ]
    );
    assert_eq!(json["suite"], "glivenko");
    assert_eq!(json["seed"], 3);
    assert_eq!(json["attempted"], 10);
}

#[test]
fn suite_ids_round_trip_and_unknown_ids_fail() {
    for suite in Suite::ALL {
        assert_eq!(suite.id().parse::<Suite>().unwrap(), suite);
        assert_eq!(suite.to_string(), suite.id());
    }
    let err = run_suite_by_id("no_such_suite", &small(0), 1, &Decider::default()).unwrap_err();
    assert_eq!(err, VerifyError::UnknownSuite("no_such_suite".into()));
}

#[test]
fn invalid_generator_parameters_are_rejected() {
    let params = GenParams {
        num_atoms: 0,
        ..GenParams::default()
    };
    assert_eq!(
        run_suite(Suite::Glivenko, &params, 1, &Decider::default()).unwrap_err(),
        VerifyError::Params(GenParamsError::NoAtoms)
    );
    let mut params = GenParams::default();
    params.connective_weights.values_mut().for_each(|w| *w = 0);
    assert_eq!(params.validate(), Err(GenParamsError::NoWeights));
}

#[test]
fn tiny_budget_is_reported_as_exhaustion_not_failure() {
    let decider = Decider::new(DeciderConfig {
        budget: 1,
        ..DeciderConfig::default()
    });
    let params = GenParams {
        seed: 5,
        ..GenParams::default()
    };
    let report = run_suite(Suite::GoedelSoundFaithful, &params, 20, &decider).unwrap();
    assert!(report.passed(), "{:#?}", report.failures);
    assert!(report.budget_exhausted > 0);
}

#[test]
fn glivenko_chain_on_a_classical_tautology() {
    let a = parse("((p -> q) -> p) -> p").unwrap();
    let report = replay_glivenko_chain(&a, &Decider::default()).unwrap();
    assert!(report.holds());
    assert_eq!(report.stages.len(), 4);
    assert!(report
        .stages
        .iter()
        .all(|s| s.verdict.as_ref().unwrap().provable));
}

fn atom_indices(f: &emblab::Formula, out: &mut Vec<usize>) {
    use emblab::FormulaKind;
    if let FormulaKind::Atom(name, _) = f.kind() {
        out.push(name.as_str()[1..].parse().unwrap());
    }
    for c in f.children() {
        atom_indices(c, out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_formulas_respect_parameters(
        seed in any::<u64>(),
        index in 0u64..1_000_000,
        max_depth in 0usize..7,
        num_atoms in 1usize..6,
        allow_box in any::<bool>(),
    ) {
        let params = GenParams { seed, max_depth, num_atoms, allow_box, ..GenParams::default() };
        let f = gen_formula(&params, index);
        prop_assert_eq!(&f, &gen_formula(&params, index));
        prop_assert!(f.depth() <= max_depth, "{} deeper than {}", f, max_depth);
        prop_assert!(allow_box || !f.contains_box());
        let mut atoms = Vec::new();
        atom_indices(&f, &mut atoms);
        prop_assert!(atoms.iter().all(|&i| i < num_atoms));
    }

    #[test]
    fn zero_weights_exclude_connectives(seed in any::<u64>(), index in 0u64..1000) {
        let mut params = GenParams { seed, max_depth: 5, ..GenParams::default() };
        params.connective_weights.insert(Connective::Or, 0);
        params.connective_weights.insert(Connective::Box, 0);
        params.connective_weights.insert(Connective::Diamond, 0);
        let f = gen_formula(&params, index);
        prop_assert!(!f.contains_box());
        prop_assert!(!f.to_string().contains('|'));
    }
}
