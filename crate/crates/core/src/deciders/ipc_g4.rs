//! Intuitionistic propositional logic via a contraction-free sequent
//! calculus (G4ip).
//!
//! Every rule except the right-disjunction and left-implication-over-
//! implication rules is invertible and applied eagerly. Left implication is
//! split four ways by the shape of its antecedent, which makes the search
//! terminate without loop checks. A failed search yields a finite rooted
//! Kripke model: each irreducible refuted sequent becomes a world whose
//! successors refute the failed premises.

use std::collections::HashMap;

use super::arena::{set_contains, set_insert, set_remove, Arena, Node, NodeId};
use super::kripke::WorldGraph;
use super::{with_stack, Budget, DecideError, KripkeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Provable,
    /// Refuted at the given world, which forces the antecedent and not the goal.
    Refuted(usize),
}

struct Search<'a> {
    arena: &'a mut Arena,
    budget: &'a mut Budget,
    memo: HashMap<(Vec<NodeId>, NodeId), Outcome>,
    worlds: WorldGraph,
}

pub(crate) fn decide(
    arena: &mut Arena,
    assumptions: &[NodeId],
    goal: NodeId,
    budget: &mut Budget,
) -> Result<(bool, Option<KripkeModel>), DecideError> {
    let mut search = Search {
        arena,
        budget,
        memo: HashMap::new(),
        worlds: WorldGraph::default(),
    };
    let Some(left) = search.saturate(Vec::new(), assumptions.to_vec()) else {
        return Ok((true, None));
    };
    match search.prove(left, goal)? {
        Outcome::Provable => Ok((true, None)),
        Outcome::Refuted(w) => Ok((false, Some(search.worlds.extract(w, search.arena)))),
    }
}

impl Search<'_> {
    fn imp(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.arena.mk(Node::Imp(a, b))
    }

    /// Adds `new` to `left` and closes under the invertible left rules.
    /// Returns `None` when falsum is derived.
    fn saturate(&mut self, mut left: Vec<NodeId>, mut todo: Vec<NodeId>) -> Option<Vec<NodeId>> {
        loop {
            while let Some(x) = todo.pop() {
                if set_contains(&left, x) {
                    continue;
                }
                match self.arena.node(x) {
                    Node::Bot => return None,
                    Node::And(a, b) => {
                        todo.push(a);
                        todo.push(b);
                    }
                    Node::Imp(a, b) => match self.arena.node(a) {
                        Node::Bot => {}
                        _ if set_contains(&left, a) => todo.push(b),
                        _ if set_contains(&left, b) => {}
                        Node::And(c, d) => {
                            let inner = self.imp(d, b);
                            todo.push(self.imp(c, inner));
                        }
                        Node::Or(c, d) => {
                            todo.push(self.imp(c, b));
                            todo.push(self.imp(d, b));
                        }
                        _ => {
                            set_insert(&mut left, x);
                        }
                    },
                    _ => {
                        set_insert(&mut left, x);
                    }
                }
            }
            // Newly added members can discharge or trivialise implications
            // already on the left.
            let stale: Vec<(NodeId, Option<NodeId>)> = left
                .iter()
                .filter_map(|&x| match self.arena.node(x) {
                    Node::Imp(a, b) if set_contains(&left, a) => Some((x, Some(b))),
                    Node::Imp(_, b) if set_contains(&left, b) => Some((x, None)),
                    _ => None,
                })
                .collect();
            if stale.is_empty() {
                return Some(left);
            }
            for (x, fired) in stale {
                set_remove(&mut left, x);
                todo.extend(fired);
            }
        }
    }

    fn prove(&mut self, left: Vec<NodeId>, goal: NodeId) -> Result<Outcome, DecideError> {
        with_stack(|| self.prove_inner(left, goal))
    }

    fn prove_inner(&mut self, left: Vec<NodeId>, goal: NodeId) -> Result<Outcome, DecideError> {
        self.budget.tick()?;
        if set_contains(&left, goal) {
            return Ok(Outcome::Provable);
        }
        match self.arena.node(goal) {
            Node::Imp(a, b) => {
                return match self.saturate(left, vec![a]) {
                    None => Ok(Outcome::Provable),
                    Some(left) => self.prove(left, b),
                };
            }
            Node::And(a, b) => {
                let first = self.prove(left.clone(), a)?;
                if first != Outcome::Provable {
                    return Ok(first);
                }
                return self.prove(left, b);
            }
            _ => {}
        }
        let key = (left, goal);
        if let Some(&out) = self.memo.get(&key) {
            return Ok(out);
        }
        let out = self.prove_irreducible_goal(&key.0, goal)?;
        self.memo.insert(key, out);
        Ok(out)
    }

    /// Goal is an atom, falsum or a disjunction.
    fn prove_irreducible_goal(
        &mut self,
        left: &[NodeId],
        goal: NodeId,
    ) -> Result<Outcome, DecideError> {
        if let Some(&x) = left
            .iter()
            .find(|&&x| matches!(self.arena.node(x), Node::Or(..)))
        {
            let Node::Or(a, b) = self.arena.node(x) else {
                unreachable!()
            };
            for branch in [a, b] {
                let mut base = left.to_vec();
                set_remove(&mut base, x);
                if let Some(next) = self.saturate(base, vec![branch]) {
                    let out = self.prove(next, goal)?;
                    if out != Outcome::Provable {
                        return Ok(out);
                    }
                }
            }
            return Ok(Outcome::Provable);
        }

        let mut successors = Vec::new();
        if let Node::Or(a, b) = self.arena.node(goal) {
            for disjunct in [a, b] {
                match self.prove(left.to_vec(), disjunct)? {
                    Outcome::Provable => return Ok(Outcome::Provable),
                    // The world built below already fails an atomic disjunct.
                    Outcome::Refuted(_)
                        if matches!(self.arena.node(disjunct), Node::Atom(_) | Node::Bot) => {}
                    Outcome::Refuted(w) => successors.push(w),
                }
            }
        }

        let nested: Vec<NodeId> = left
            .iter()
            .copied()
            .filter(|&x| match self.arena.node(x) {
                Node::Imp(a, _) => matches!(self.arena.node(a), Node::Imp(..)),
                _ => false,
            })
            .collect();
        for f in nested {
            let Node::Imp(cd, b) = self.arena.node(f) else {
                unreachable!()
            };
            let Node::Imp(_, d) = self.arena.node(cd) else {
                unreachable!()
            };
            let mut base = left.to_vec();
            set_remove(&mut base, f);
            let db = self.imp(d, b);
            let premise = match self.saturate(base.clone(), vec![db]) {
                None => Outcome::Provable,
                Some(next) => self.prove(next, cd)?,
            };
            match premise {
                Outcome::Provable => {
                    return match self.saturate(base, vec![b]) {
                        None => Ok(Outcome::Provable),
                        Some(next) => self.prove(next, goal),
                    };
                }
                Outcome::Refuted(w) => successors.push(w),
            }
        }

        let atoms = left
            .iter()
            .filter_map(|&x| match self.arena.node(x) {
                Node::Atom(a) => Some(a),
                _ => None,
            })
            .collect();
        let w = self.worlds.add(atoms);
        for v in successors {
            self.worlds.link(w, v);
        }
        Ok(Outcome::Refuted(w))
    }
}
