//! Finite Kripke models and forcing.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Formula;

use super::arena::{Arena, Node};
use super::DecideError;

/// A finite Kripke model. `order` lists the accessibility pairs `(w, v)`
/// explicitly, including reflexive ones.
///
/// Serialises as
/// `{"worlds":[0,1],"order":[[0,0],[0,1],[1,1]],"valuation":{"0":[],"1":["p"]},"designated":0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<u32>,
    pub order: Vec<(u32, u32)>,
    pub valuation: BTreeMap<u32, BTreeSet<String>>,
    pub designated: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Intuitionistic forcing over a partial order with monotone valuation.
    Ipc,
    /// Classical modal semantics over a reflexive, transitive relation.
    S4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelVerdict {
    Satisfies,
    Refutes,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("world {0} is listed twice")]
    DuplicateWorld(u32),
    #[error("unknown world {0}")]
    UnknownWorld(u32),
    #[error("relation is not reflexive at world {0}")]
    NotReflexive(u32),
    #[error("relation is not transitive: ({0},{1}) and ({1},{2}) without ({0},{2})")]
    NotTransitive(u32, u32, u32),
    #[error("order is not antisymmetric between worlds {0} and {1}")]
    NotAntisymmetric(u32, u32),
    #[error("valuation is not monotone: `{atom}` holds at {from} but not at {to}")]
    NotMonotone { atom: String, from: u32, to: u32 },
    #[error("modal operator is not interpreted by intuitionistic forcing")]
    ModalUnderIpc,
    #[error(transparent)]
    Formula(#[from] DecideError),
}

impl KripkeModel {
    fn positions(&self) -> Result<HashMap<u32, usize>, ModelError> {
        if self.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let mut pos = HashMap::new();
        for (i, &w) in self.worlds.iter().enumerate() {
            if pos.insert(w, i).is_some() {
                return Err(ModelError::DuplicateWorld(w));
            }
        }
        let known = |w: u32| {
            if pos.contains_key(&w) {
                Ok(())
            } else {
                Err(ModelError::UnknownWorld(w))
            }
        };
        known(self.designated)?;
        for &(a, b) in &self.order {
            known(a)?;
            known(b)?;
        }
        for &w in self.valuation.keys() {
            known(w)?;
        }
        Ok(pos)
    }

    /// Checks the frame conditions for `semantics` and returns the relation
    /// as an adjacency matrix over world positions.
    #[allow(clippy::needless_range_loop)]
    pub fn validate(&self, semantics: Semantics) -> Result<Vec<Vec<bool>>, ModelError> {
        let pos = self.positions()?;
        let n = self.worlds.len();
        let mut rel = vec![vec![false; n]; n];
        for &(a, b) in &self.order {
            rel[pos[&a]][pos[&b]] = true;
        }
        for (i, &w) in self.worlds.iter().enumerate() {
            if !rel[i][i] {
                return Err(ModelError::NotReflexive(w));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !rel[i][j] {
                    continue;
                }
                for k in 0..n {
                    if rel[j][k] && !rel[i][k] {
                        let w = &self.worlds;
                        return Err(ModelError::NotTransitive(w[i], w[j], w[k]));
                    }
                }
            }
        }
        if semantics == Semantics::Ipc {
            let empty = BTreeSet::new();
            for i in 0..n {
                for j in 0..n {
                    if i == j || !rel[i][j] {
                        continue;
                    }
                    let (wi, wj) = (self.worlds[i], self.worlds[j]);
                    if rel[j][i] {
                        return Err(ModelError::NotAntisymmetric(wi, wj));
                    }
                    let lower = self.valuation.get(&wi).unwrap_or(&empty);
                    let upper = self.valuation.get(&wj).unwrap_or(&empty);
                    if let Some(atom) = lower.difference(upper).next() {
                        return Err(ModelError::NotMonotone {
                            atom: atom.clone(),
                            from: wi,
                            to: wj,
                        });
                    }
                }
            }
        }
        Ok(rel)
    }

    /// Truth of `a` at every world, in `worlds` order.
    pub fn evaluate(&self, a: &Formula, semantics: Semantics) -> Result<Vec<bool>, ModelError> {
        let rel = self.validate(semantics)?;
        let mut arena = Arena::default();
        let root = arena.intern(a)?;
        let n = self.worlds.len();
        let truth_of_atom = |w: usize, name: &str| {
            self.valuation
                .get(&self.worlds[w])
                .is_some_and(|set| set.contains(name))
        };
        // Children precede parents in the arena, so one pass in id order
        // fills the table bottom-up.
        let mut table: Vec<Vec<bool>> = Vec::with_capacity(arena.len());
        for id in 0..arena.len() {
            let node = arena.node(super::arena::NodeId(id as u32));
            let column: Vec<bool> = (0..n)
                .map(|w| match node {
                    Node::Bot => Ok(false),
                    Node::Atom(x) => Ok(truth_of_atom(w, arena.atom_name(x).as_str())),
                    Node::And(l, r) => Ok(table[l.0 as usize][w] && table[r.0 as usize][w]),
                    Node::Or(l, r) => Ok(table[l.0 as usize][w] || table[r.0 as usize][w]),
                    Node::Imp(l, r) => Ok(match semantics {
                        Semantics::S4 => !table[l.0 as usize][w] || table[r.0 as usize][w],
                        Semantics::Ipc => (0..n).all(|v| {
                            !rel[w][v] || !table[l.0 as usize][v] || table[r.0 as usize][v]
                        }),
                    }),
                    Node::Box(b) => match semantics {
                        Semantics::S4 => Ok((0..n).all(|v| !rel[w][v] || table[b.0 as usize][v])),
                        Semantics::Ipc => Err(ModelError::ModalUnderIpc),
                    },
                })
                .collect::<Result<_, _>>()?;
            table.push(column);
        }
        Ok(table.swap_remove(root.0 as usize))
    }
}

/// Evaluates `a` at the designated world.
pub fn check_model(
    m: &KripkeModel,
    a: &Formula,
    semantics: Semantics,
) -> Result<ModelVerdict, ModelError> {
    let truth = m.evaluate(a, semantics)?;
    let at = m
        .worlds
        .iter()
        .position(|&w| w == m.designated)
        .expect("validated");
    Ok(if truth[at] {
        ModelVerdict::Satisfies
    } else {
        ModelVerdict::Refutes
    })
}

/// Worlds collected during proof search; edges point to immediate
/// successors and may form cycles (S4 loop links).
#[derive(Debug, Default)]
pub(crate) struct WorldGraph {
    atoms: Vec<Vec<u32>>,
    succ: Vec<Vec<usize>>,
}

impl WorldGraph {
    pub(crate) fn add(&mut self, atoms: Vec<u32>) -> usize {
        self.atoms.push(atoms);
        self.succ.push(Vec::new());
        self.atoms.len() - 1
    }

    pub(crate) fn set_atoms(&mut self, w: usize, atoms: Vec<u32>) {
        self.atoms[w] = atoms;
    }

    pub(crate) fn link(&mut self, from: usize, to: usize) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    /// The model generated by `root` under the reflexive-transitive closure
    /// of the successor edges, with worlds renumbered breadth-first.
    pub(crate) fn extract(&self, root: usize, arena: &Arena) -> KripkeModel {
        let mut number = HashMap::new();
        let mut order_seen = Vec::new();
        let mut queue = VecDeque::from([root]);
        number.insert(root, 0u32);
        while let Some(w) = queue.pop_front() {
            order_seen.push(w);
            for &v in &self.succ[w] {
                if !number.contains_key(&v) {
                    number.insert(v, number.len() as u32);
                    queue.push_back(v);
                }
            }
        }
        let mut order = Vec::new();
        for &w in &order_seen {
            let mut reach = vec![w];
            let mut seen: BTreeSet<u32> = BTreeSet::from([number[&w]]);
            while let Some(x) = reach.pop() {
                for &y in &self.succ[x] {
                    if seen.insert(number[&y]) {
                        reach.push(y);
                    }
                }
            }
            order.extend(seen.into_iter().map(|v| (number[&w], v)));
        }
        let valuation = order_seen
            .iter()
            .map(|&w| {
                let names = self.atoms[w]
                    .iter()
                    .map(|&a| arena.atom_name(a).as_str().to_owned())
                    .collect();
                (number[&w], names)
            })
            .collect();
        KripkeModel {
            worlds: (0..order_seen.len() as u32).collect(),
            order,
            valuation,
            designated: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse;

    fn model(worlds: &[u32], order: &[(u32, u32)], val: &[(u32, &[&str])]) -> KripkeModel {
        KripkeModel {
            worlds: worlds.to_vec(),
            order: order.to_vec(),
            valuation: val
                .iter()
                .map(|(w, atoms)| (*w, atoms.iter().map(|s| s.to_string()).collect()))
                .collect(),
            designated: worlds[0],
        }
    }

    #[test]
    fn one_world_refutes_false_atom() {
        let m = model(&[0], &[(0, 0)], &[]);
        assert_eq!(
            check_model(&m, &parse("p").unwrap(), Semantics::Ipc).unwrap(),
            ModelVerdict::Refutes
        );
    }

    #[test]
    fn two_world_chain_refutes_excluded_middle() {
        let m = model(&[0, 1], &[(0, 0), (0, 1), (1, 1)], &[(1, &["p"])]);
        let lem = parse("p | ~p").unwrap();
        assert_eq!(
            check_model(&m, &lem, Semantics::Ipc).unwrap(),
            ModelVerdict::Refutes
        );
        assert_eq!(
            check_model(&m, &parse("~~(p | ~p)").unwrap(), Semantics::Ipc).unwrap(),
            ModelVerdict::Satisfies
        );
    }

    #[test]
    fn reflexive_world_satisfies_box() {
        let m = model(&[0], &[(0, 0)], &[(0, &["p"])]);
        assert_eq!(
            check_model(&m, &parse("[]p").unwrap(), Semantics::S4).unwrap(),
            ModelVerdict::Satisfies
        );
    }

    #[test]
    fn s4_countermodel_to_p_implies_box_p() {
        let m = model(&[0, 1], &[(0, 0), (0, 1), (1, 1)], &[(0, &["p"])]);
        assert_eq!(
            check_model(&m, &parse("p -> []p").unwrap(), Semantics::S4).unwrap(),
            ModelVerdict::Refutes
        );
        // Not monotone, so not an intuitionistic model.
        assert!(matches!(
            m.validate(Semantics::Ipc),
            Err(ModelError::NotMonotone { .. })
        ));
    }

    #[test]
    fn frame_violations_are_rejected() {
        let no_refl = model(&[0, 1], &[(0, 0), (0, 1)], &[]);
        assert_eq!(
            no_refl.validate(Semantics::S4),
            Err(ModelError::NotReflexive(1))
        );
        let no_trans = model(&[0, 1, 2], &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)], &[]);
        assert_eq!(
            no_trans.validate(Semantics::S4),
            Err(ModelError::NotTransitive(0, 1, 2))
        );
        let cyclic = model(&[0, 1], &[(0, 0), (1, 1), (0, 1), (1, 0)], &[]);
        assert!(cyclic.validate(Semantics::S4).is_ok());
        assert_eq!(
            cyclic.validate(Semantics::Ipc),
            Err(ModelError::NotAntisymmetric(0, 1))
        );
        let m = model(&[0], &[(0, 0)], &[]);
        assert_eq!(
            check_model(&m, &parse("[]p").unwrap(), Semantics::Ipc),
            Err(ModelError::ModalUnderIpc)
        );
        assert_eq!(
            model(&[0], &[(0, 3)], &[]).validate(Semantics::S4),
            Err(ModelError::UnknownWorld(3))
        );
    }

    #[test]
    fn json_shape() {
        let m = model(&[0, 1], &[(0, 0), (0, 1), (1, 1)], &[(0, &[]), (1, &["p"])]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"worlds":[0,1],"order":[[0,0],[0,1],[1,1]],"valuation":{"0":[],"1":["p"]},"designated":0}"#
        );
        let back: KripkeModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
