//! Propositional S4 via a multi-succedent sequent calculus with a history
//! loop check.
//!
//! Propositional rules are classical and invertible; boxes on the left are
//! kept and their bodies added (reflexivity). A saturated sequent is refuted
//! when every boxed succedent `[]a` fails its jump `boxes(left) => a`. A jump
//! that repeats one already open on the current branch is treated as failed
//! and becomes a back edge to the world built for that earlier jump, which
//! is where the cycles of S4 countermodels come from.
//!
//! Results that depend on such a back edge are only valid relative to the
//! current branch, so only loop-independent refutations are cached.

use std::collections::HashMap;

use super::arena::{set_contains, set_insert, Arena, Node, NodeId};
use super::kripke::WorldGraph;
use super::{with_stack, Budget, DecideError, KripkeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Provable,
    /// Refuted at `world`; `dep` is the lowest history index the refutation
    /// relies on, or `usize::MAX`.
    Refuted {
        world: usize,
        dep: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
struct Saturated {
    atoms_l: Vec<NodeId>,
    boxes_l: Vec<NodeId>,
    atoms_r: Vec<NodeId>,
    boxes_r: Vec<NodeId>,
}

/// A sequent under construction. `seen_*` record every formula placed on a
/// side so that identical formulas on both sides close the branch early.
#[derive(Debug, Clone, Default)]
struct Partial {
    sat: Saturated,
    seen_l: Vec<NodeId>,
    seen_r: Vec<NodeId>,
    todo_l: Vec<NodeId>,
    todo_r: Vec<NodeId>,
    branching: Vec<(bool, NodeId)>,
}

struct Jump {
    boxes: Vec<NodeId>,
    body: NodeId,
    world: Option<usize>,
}

struct Search<'a> {
    arena: &'a Arena,
    budget: &'a mut Budget,
    cache: HashMap<Saturated, Outcome>,
    history: Vec<Jump>,
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
        cache: HashMap::new(),
        history: Vec::new(),
        worlds: WorldGraph::default(),
    };
    let start = Partial {
        todo_l: assumptions.to_vec(),
        todo_r: vec![goal],
        ..Partial::default()
    };
    match search.expand(start)? {
        Outcome::Provable => Ok((true, None)),
        Outcome::Refuted { world, .. } => {
            Ok((false, Some(search.worlds.extract(world, search.arena))))
        }
    }
}

enum Step {
    Closed,
    Open,
}

impl Search<'_> {
    fn add_left(&self, p: &mut Partial, x: NodeId) -> Step {
        if set_contains(&p.seen_r, x) {
            return Step::Closed;
        }
        if set_insert(&mut p.seen_l, x) {
            p.todo_l.push(x);
        }
        Step::Open
    }

    fn add_right(&self, p: &mut Partial, x: NodeId) -> Step {
        if set_contains(&p.seen_l, x) {
            return Step::Closed;
        }
        if set_insert(&mut p.seen_r, x) {
            p.todo_r.push(x);
        }
        Step::Open
    }

    /// Applies every non-branching rule. Returns `false` if the sequent
    /// closes.
    fn linear(&self, p: &mut Partial) -> bool {
        // Formulas handed in directly (initial sequent, branch choices) have
        // not been registered in the seen sets yet.
        let pending_l = std::mem::take(&mut p.todo_l);
        let pending_r = std::mem::take(&mut p.todo_r);
        for x in pending_l {
            if let Step::Closed = self.add_left(p, x) {
                return false;
            }
        }
        for x in pending_r {
            if let Step::Closed = self.add_right(p, x) {
                return false;
            }
        }
        loop {
            if let Some(x) = p.todo_l.pop() {
                let step = match self.arena.node(x) {
                    Node::Bot => Step::Closed,
                    Node::Atom(_) => {
                        set_insert(&mut p.sat.atoms_l, x);
                        Step::Open
                    }
                    Node::And(a, b) => match self.add_left(p, a) {
                        Step::Closed => Step::Closed,
                        Step::Open => self.add_left(p, b),
                    },
                    Node::Box(a) => {
                        set_insert(&mut p.sat.boxes_l, x);
                        self.add_left(p, a)
                    }
                    Node::Or(..) | Node::Imp(..) => {
                        p.branching.push((true, x));
                        Step::Open
                    }
                };
                if let Step::Closed = step {
                    return false;
                }
                continue;
            }
            if let Some(x) = p.todo_r.pop() {
                let step = match self.arena.node(x) {
                    Node::Bot => Step::Open,
                    Node::Atom(_) => {
                        set_insert(&mut p.sat.atoms_r, x);
                        Step::Open
                    }
                    Node::Or(a, b) => match self.add_right(p, a) {
                        Step::Closed => Step::Closed,
                        Step::Open => self.add_right(p, b),
                    },
                    Node::Imp(a, b) => match self.add_left(p, a) {
                        Step::Closed => Step::Closed,
                        Step::Open => self.add_right(p, b),
                    },
                    Node::Box(_) => {
                        set_insert(&mut p.sat.boxes_r, x);
                        Step::Open
                    }
                    Node::And(..) => {
                        p.branching.push((false, x));
                        Step::Open
                    }
                };
                if let Step::Closed = step {
                    return false;
                }
                continue;
            }
            return true;
        }
    }

    fn expand(&mut self, p: Partial) -> Result<Outcome, DecideError> {
        with_stack(|| self.expand_inner(p))
    }

    fn expand_inner(&mut self, mut p: Partial) -> Result<Outcome, DecideError> {
        self.budget.tick()?;
        if !self.linear(&mut p) {
            return Ok(Outcome::Provable);
        }
        let Some((on_left, x)) = p.branching.pop() else {
            return self.saturated(p.sat);
        };
        let branches: [(Vec<NodeId>, Vec<NodeId>); 2] = match (on_left, self.arena.node(x)) {
            (true, Node::Or(a, b)) => [(vec![a], vec![]), (vec![b], vec![])],
            (true, Node::Imp(a, b)) => [(vec![], vec![a]), (vec![b], vec![])],
            (false, Node::And(a, b)) => [(vec![], vec![a]), (vec![], vec![b])],
            _ => unreachable!("only branching formulas are deferred"),
        };
        for (l, r) in branches {
            let mut next = p.clone();
            next.todo_l = l;
            next.todo_r = r;
            let out = self.expand(next)?;
            if out != Outcome::Provable {
                return Ok(out);
            }
        }
        Ok(Outcome::Provable)
    }

    fn saturated(&mut self, sat: Saturated) -> Result<Outcome, DecideError> {
        if let Some(&out) = self.cache.get(&sat) {
            if let (Outcome::Refuted { world, .. }, Some(top)) = (out, self.history.last_mut()) {
                top.world = Some(world);
            }
            return Ok(out);
        }
        let atoms = sat
            .atoms_l
            .iter()
            .map(|&x| match self.arena.node(x) {
                Node::Atom(a) => a,
                _ => unreachable!(),
            })
            .collect();
        let world = self.worlds.add(atoms);
        if let Some(top) = self.history.last_mut() {
            top.world = Some(world);
        }
        let mut dep = usize::MAX;
        for &boxed in &sat.boxes_r {
            let Node::Box(body) = self.arena.node(boxed) else {
                unreachable!()
            };
            if let Some(i) = self
                .history
                .iter()
                .position(|j| j.body == body && j.boxes == sat.boxes_l)
            {
                let target = self.history[i]
                    .world
                    .expect("jump reached a saturated sequent");
                self.worlds.link(world, target);
                dep = dep.min(i);
                continue;
            }
            self.history.push(Jump {
                boxes: sat.boxes_l.clone(),
                body,
                world: None,
            });
            let start = Partial {
                todo_l: sat.boxes_l.clone(),
                todo_r: vec![body],
                ..Partial::default()
            };
            let out = self.expand(start);
            self.history.pop();
            match out? {
                Outcome::Provable => {
                    self.cache.insert(sat, Outcome::Provable);
                    return Ok(Outcome::Provable);
                }
                Outcome::Refuted { world: v, dep: d } => {
                    self.worlds.link(world, v);
                    if d < self.history.len() {
                        dep = dep.min(d);
                    }
                }
            }
        }
        let out = Outcome::Refuted { world, dep };
        if dep == usize::MAX {
            self.cache.insert(sat, out);
        }
        Ok(out)
    }
}
