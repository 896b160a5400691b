//! Seeded random propositional formulas.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Atom,
    Bot,
    And,
    Or,
    Implies,
    Not,
    Box,
    Diamond,
}

impl Connective {
    pub const ALL: [Connective; 8] = [
        Connective::Atom,
        Connective::Bot,
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Not,
        Connective::Box,
        Connective::Diamond,
    ];

    /// Depth consumed by one application. `~A` is `A -> bot` and `<>A` is
    /// `~[]~A`.
    fn cost(self) -> usize {
        match self {
            Connective::Atom | Connective::Bot => 0,
            Connective::And
            | Connective::Or
            | Connective::Implies
            | Connective::Not
            | Connective::Box => 1,
            Connective::Diamond => 3,
        }
    }

    fn is_modal(self) -> bool {
        matches!(self, Connective::Box | Connective::Diamond)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub max_depth: usize,
    /// Atoms are drawn from `p0 .. p{num_atoms-1}`.
    pub num_atoms: usize,
    pub allow_box: bool,
    pub connective_weights: BTreeMap<Connective, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenParamsError {
    #[error("num_atoms must be at least 1")]
    NoAtoms,
    #[error("at least one connective weight must be positive")]
    NoWeights,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_depth: 5,
            num_atoms: 4,
            allow_box: true,
            connective_weights: default_weights(),
        }
    }
}

pub fn default_weights() -> BTreeMap<Connective, u32> {
    BTreeMap::from([
        (Connective::Atom, 6),
        (Connective::Bot, 1),
        (Connective::And, 2),
        (Connective::Or, 2),
        (Connective::Implies, 3),
        (Connective::Not, 1),
        (Connective::Box, 2),
        (Connective::Diamond, 1),
    ])
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenParamsError> {
        if self.num_atoms == 0 {
            return Err(GenParamsError::NoAtoms);
        }
        if self.connective_weights.values().all(|&w| w == 0) {
            return Err(GenParamsError::NoWeights);
        }
        Ok(())
    }

    pub fn weight(&self, c: Connective) -> u32 {
        self.connective_weights.get(&c).copied().unwrap_or(0)
    }

    /// Parameters for an independent stream of formulas derived from this
    /// one, used when an instance needs more than one formula.
    pub fn companion(&self, k: u64) -> GenParams {
        GenParams {
            seed: splitmix(self.seed ^ splitmix(k.wrapping_add(1))),
            ..self.clone()
        }
    }

    pub fn without_box(&self) -> GenParams {
        GenParams {
            allow_box: false,
            ..self.clone()
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The random stream for instance `index`.
pub fn instance_rng(params: &GenParams, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    rng
}

/// The `index`-th formula of the stream described by `params`. Fully
/// determined by `(params, index)`.
///
/// # Panics
///
/// Panics if `params` fails [`GenParams::validate`].
pub fn gen_formula(params: &GenParams, index: u64) -> Formula {
    params.validate().expect("invalid generator parameters");
    let atoms: Vec<Formula> = (0..params.num_atoms)
        .map(|i| Formula::atom(&format!("p{i}")))
        .collect();
    let mut rng = instance_rng(params, index);
    Generator {
        params,
        atoms: &atoms,
    }
    .formula(&mut rng, params.max_depth)
}

struct Generator<'a> {
    params: &'a GenParams,
    atoms: &'a [Formula],
}

impl Generator<'_> {
    fn formula(&self, rng: &mut ChaCha8Rng, depth: usize) -> Formula {
        let choices: Vec<(Connective, u32)> = Connective::ALL
            .iter()
            .copied()
            .filter(|c| c.cost() <= depth && (self.params.allow_box || !c.is_modal()))
            .map(|c| (c, self.params.weight(c)))
            .filter(|&(_, w)| w > 0)
            .collect();
        let Ok(dist) = WeightedIndex::new(choices.iter().map(|&(_, w)| w)) else {
            // Only zero-weight leaves fit; fall back to an atom.
            return self.atom(rng);
        };
        let rest = depth.saturating_sub(1);
        match choices[dist.sample(rng)].0 {
            Connective::Atom => self.atom(rng),
            Connective::Bot => Formula::bot(),
            Connective::And => Formula::and(self.formula(rng, rest), self.formula(rng, rest)),
            Connective::Or => Formula::or(self.formula(rng, rest), self.formula(rng, rest)),
            Connective::Implies => {
                Formula::implies(self.formula(rng, rest), self.formula(rng, rest))
            }
            Connective::Not => Formula::not(self.formula(rng, rest)),
            Connective::Box => Formula::boxed(self.formula(rng, rest)),
            Connective::Diamond => Formula::diamond(self.formula(rng, depth - 3)),
        }
    }

    fn atom(&self, rng: &mut ChaCha8Rng) -> Formula {
        self.atoms[rng.gen_range(0..self.atoms.len())].clone()
    }
}
