//! Shared helpers for the integration tests: formula strategies and a
//! brute-force Kripke semantics that does not go through the library's
//! model checker.

#![allow(dead_code)]

use emblab::syntax::{Formula, FormulaKind, Term};
use proptest::prelude::*;

pub fn atom_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Propositional formulas over `p0..p{atoms-1}` and falsum.
pub fn prop_formula(atoms: usize, depth: u32, allow_box: bool) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::bot()),
        6 => (0..atoms).prop_map(|i| Formula::atom(&format!("p{i}"))),
    ];
    leaf.prop_recursive(depth, 32, 2, move |inner| {
        let mut options = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::and(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::or(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::implies(a, b))
                .boxed(),
            inner.clone().prop_map(Formula::not).boxed(),
        ];
        if allow_box {
            options.push(inner.clone().prop_map(Formula::boxed).boxed());
            options.push(inner.prop_map(Formula::diamond).boxed());
        }
        proptest::strategy::Union::new(options)
    })
    .boxed()
}

/// A finite frame given as an adjacency matrix plus a valuation per world.
#[derive(Debug, Clone)]
pub struct Frame {
    pub rel: Vec<Vec<bool>>,
    pub val: Vec<Vec<String>>,
}

/// Forcing at world `w`. `intuitionistic` selects the implication clause;
/// boxes are read as necessity in both cases.
pub fn forces(frame: &Frame, w: usize, f: &Formula, intuitionistic: bool) -> bool {
    let n = frame.rel.len();
    match f.kind() {
        FormulaKind::Bot => false,
        FormulaKind::Atom(name, args) => {
            assert!(args.is_empty());
            frame.val[w].iter().any(|a| a == name.as_str())
        }
        FormulaKind::And(a, b) => {
            forces(frame, w, a, intuitionistic) && forces(frame, w, b, intuitionistic)
        }
        FormulaKind::Or(a, b) => {
            forces(frame, w, a, intuitionistic) || forces(frame, w, b, intuitionistic)
        }
        FormulaKind::Implies(a, b) => {
            if intuitionistic {
                (0..n).filter(|&v| frame.rel[w][v]).all(|v| {
                    !forces(frame, v, a, intuitionistic) || forces(frame, v, b, intuitionistic)
                })
            } else {
                !forces(frame, w, a, intuitionistic) || forces(frame, w, b, intuitionistic)
            }
        }
        FormulaKind::Box(a) => (0..n)
            .filter(|&v| frame.rel[w][v])
            .all(|v| forces(frame, v, a, intuitionistic)),
        other => panic!("oracle only handles propositional formulas: {other:?}"),
    }
}

fn transitive(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).all(|i| (0..n).all(|j| !rel[i][j] || (0..n).all(|k| !rel[j][k] || rel[i][k])))
}

/// All reflexive, transitive relations on `n` worlds; antisymmetric ones
/// only when `partial_order` is set.
pub fn frames(n: usize, partial_order: bool) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            rel[i][j] = mask >> bit & 1 == 1;
        }
        if !transitive(&rel) {
            continue;
        }
        if partial_order && (0..n).any(|i| (0..n).any(|j| i != j && rel[i][j] && rel[j][i])) {
            continue;
        }
        out.push(rel);
    }
    out
}

/// Searches models with at most `max_worlds` worlds for one where `f` fails
/// somewhere. IPC models get monotone valuations; S4 models any valuation.
pub fn small_countermodel(
    f: &Formula,
    atoms: &[String],
    max_worlds: usize,
    intuitionistic: bool,
) -> Option<Frame> {
    for n in 1..=max_worlds {
        for rel in frames(n, intuitionistic) {
            let bits = n * atoms.len();
            for mask in 0u64..(1u64 << bits) {
                let val: Vec<Vec<String>> = (0..n)
                    .map(|w| {
                        atoms
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> (w * atoms.len() + i) & 1 == 1)
                            .map(|(_, a)| a.clone())
                            .collect()
                    })
                    .collect();
                let frame = Frame {
                    rel: rel.clone(),
                    val,
                };
                if intuitionistic && !monotone(&frame) {
                    continue;
                }
                if (0..n).any(|w| !forces(&frame, w, f, intuitionistic)) {
                    return Some(frame);
                }
            }
        }
    }
    None
}

fn monotone(frame: &Frame) -> bool {
    let n = frame.rel.len();
    (0..n).all(|i| {
        (0..n).all(|j| !frame.rel[i][j] || frame.val[i].iter().all(|a| frame.val[j].contains(a)))
    })
}

/// Converts a library countermodel into an oracle frame, returning the
/// position of the designated world.
pub fn frame_of(m: &emblab::KripkeModel) -> (Frame, usize) {
    let n = m.worlds.len();
    let pos = |w: u32| m.worlds.iter().position(|&x| x == w).unwrap();
    let mut rel = vec![vec![false; n]; n];
    for &(a, b) in &m.order {
        rel[pos(a)][pos(b)] = true;
    }
    let val = m
        .worlds
        .iter()
        .map(|w| {
            m.valuation
                .get(w)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default()
        })
        .collect();
    (Frame { rel, val }, pos(m.designated))
}

fn ident(pool: &'static [&'static str]) -> impl Strategy<Value = &'static str> {
    proptest::sample::select(pool)
}

/// First-order terms over a few variables, numerals and function symbols.
pub fn term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        3 => ident(&["x", "y", "z", "u_1"]).prop_map(Term::var),
        1 => (0u64..1000).prop_map(Term::Const),
    ];
    leaf.prop_recursive(depth, 8, 3, |inner| {
        (
            ident(&["f", "g", "succ"]),
            proptest::collection::vec(inner, 1..=3),
        )
            .prop_map(|(name, args)| Term::app(name, args).expect("valid application"))
    })
    .boxed()
}

/// Arbitrary formulas: every connective, quantifiers, equations, predicates
/// with term arguments and the proof operator.
pub fn any_formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::bot()),
        4 => ident(&["p", "q", "r", "atom_2"]).prop_map(Formula::atom),
        2 => (ident(&["P", "Q", "Less"]), proptest::collection::vec(term(2), 1..=3))
            .prop_map(|(name, args)| Formula::pred(name, args)),
        1 => (term(2), term(2)).prop_map(|(a, b)| Formula::eq(a, b)),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::diamond),
            inner.clone().prop_map(Formula::prf),
            (ident(&["x", "y", "z"]), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (ident(&["x", "y", "z"]), inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
    .boxed()
}
