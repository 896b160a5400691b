//! Propositional S4 by SAT with modal clause learning.
//!
//! Every node of the hash-consed DAG gets a variable defined classically by
//! its node, and each box `x = □a` adds `x → a`. A world is a classical
//! model of these clauses. A box `□a` false in the model needs a successor
//! world that keeps all true boxes and falsifies `a`; if that is impossible
//! under the true boxes `□b₁ … □bₙ` of an unsatisfiable core, the clause
//! `□b₁ ∧ … ∧ □bₙ → □a` holds in every S4 model and is learnt, and the
//! world is searched again. A successor request that repeats an open one on
//! the current path is answered by a back edge to that world, which is
//! where the cycles of S4 countermodels come from. Only results that do not
//! rely on such a back edge into an open ancestor are cached.

use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver, Var};

use super::arena::{Arena, Node, NodeId};
use super::kripke::WorldGraph;
use super::{with_stack, Budget, DecideError, KripkeModel};

enum Answer {
    /// Unsatisfiable; the assumption literals used.
    Unsat(Vec<Lit>),
    /// Satisfied at `world`; `dep` is the lowest open query the model relies
    /// on, or `usize::MAX`.
    Sat { world: usize, dep: usize },
}

struct Search<'s, 'b> {
    solver: Solver<'s>,
    budget: &'b mut Budget,
    /// `(x, a)` for each box `x = □a`.
    boxes: Vec<(Var, Var)>,
    /// Arena atom behind each variable, if any.
    atom_of: Vec<Option<u32>>,
    worlds: WorldGraph,
    /// Open queries on the current path with their worlds.
    history: Vec<(Vec<Lit>, usize)>,
    cache: HashMap<Vec<Lit>, usize>,
    /// Finished worlds that rely on no open query, with their models.
    finished: Vec<(Vec<bool>, usize)>,
}

pub(crate) fn decide(
    arena: &mut Arena,
    assumptions: &[NodeId],
    goal: NodeId,
    budget: &mut Budget,
) -> Result<(bool, Option<KripkeModel>), DecideError> {
    let mut roots = assumptions.to_vec();
    roots.push(goal);
    let (mut search, var) = Search::clausify(arena, &roots, budget);
    let mut root: Vec<Lit> = assumptions.iter().map(|&a| var(a).positive()).collect();
    root.push(var(goal).negative());
    match search.sat(canonical(root))? {
        Answer::Unsat(_) => Ok((true, None)),
        Answer::Sat { world, .. } => Ok((false, Some(search.worlds.extract(world, arena)))),
    }
}

fn canonical(mut lits: Vec<Lit>) -> Vec<Lit> {
    lits.sort_unstable();
    lits.dedup();
    lits
}

impl<'b> Search<'_, 'b> {
    fn clausify(
        arena: &Arena,
        roots: &[NodeId],
        budget: &'b mut Budget,
    ) -> (Self, impl Fn(NodeId) -> Var) {
        let nodes = arena.reachable(roots);
        let mut index = vec![usize::MAX; arena.len()];
        for (k, n) in nodes.iter().enumerate() {
            index[n.0 as usize] = k;
        }
        let var = move |n: NodeId| Var::from_index(index[n.0 as usize]);

        let mut solver = Solver::new();
        let mut boxes = Vec::new();
        let mut atom_of = vec![None; nodes.len()];
        for &n in &nodes {
            let x = var(n);
            match arena.node(n) {
                Node::Bot => solver.add_clause(&[x.negative()]),
                Node::Atom(a) => atom_of[x.index()] = Some(a),
                Node::And(a, b) => {
                    let (a, b) = (var(a), var(b));
                    solver.add_clause(&[x.negative(), a.positive()]);
                    solver.add_clause(&[x.negative(), b.positive()]);
                    solver.add_clause(&[a.negative(), b.negative(), x.positive()]);
                }
                Node::Or(a, b) => {
                    let (a, b) = (var(a), var(b));
                    solver.add_clause(&[x.negative(), a.positive(), b.positive()]);
                    solver.add_clause(&[a.negative(), x.positive()]);
                    solver.add_clause(&[b.negative(), x.positive()]);
                }
                Node::Imp(a, b) => {
                    let (a, b) = (var(a), var(b));
                    solver.add_clause(&[x.negative(), a.negative(), b.positive()]);
                    solver.add_clause(&[a.positive(), x.positive()]);
                    solver.add_clause(&[b.negative(), x.positive()]);
                }
                Node::Box(a) => {
                    let a = var(a);
                    solver.add_clause(&[x.negative(), a.positive()]);
                    boxes.push((x, a));
                }
            }
        }
        let search = Search {
            solver,
            budget,
            boxes,
            atom_of,
            worlds: WorldGraph::default(),
            history: Vec::new(),
            cache: HashMap::new(),
            finished: Vec::new(),
        };
        (search, var)
    }

    /// Satisfiability of `assumed` under the current clauses: the assumption
    /// literals used, or `None` with the solver holding a model.
    fn classical(&mut self, assumed: &[Lit]) -> Result<Option<Vec<Lit>>, DecideError> {
        self.budget.tick()?;
        self.solver.assume(assumed);
        if self
            .solver
            .solve()
            .expect("solver runs without proof output")
        {
            return Ok(None);
        }
        let core = self
            .solver
            .failed_core()
            .expect("unsatisfiable under assumptions")
            .to_vec();
        Ok(Some(core))
    }

    /// Learns `□b₁ ∧ … ∧ □bₙ → x` from a failed successor request for the
    /// box `x`; `core` holds the boxes used and possibly the negated body.
    fn learn(&mut self, core: Vec<Lit>, x: Var) {
        let mut clause: Vec<Lit> = core
            .into_iter()
            .filter(|l| l.is_positive())
            .map(|l| !l)
            .collect();
        clause.push(x.positive());
        self.solver.add_clause(&clause);
    }

    fn sat(&mut self, assumed: Vec<Lit>) -> Result<Answer, DecideError> {
        with_stack(|| self.sat_inner(assumed))
    }

    fn sat_inner(&mut self, assumed: Vec<Lit>) -> Result<Answer, DecideError> {
        if let Some(&world) = self.cache.get(&assumed) {
            return Ok(Answer::Sat {
                world,
                dep: usize::MAX,
            });
        }
        if let Some(i) = self.history.iter().position(|(open, _)| *open == assumed) {
            return Ok(Answer::Sat {
                world: self.history[i].1,
                dep: i,
            });
        }
        let world = self.worlds.add(Vec::new());
        let depth = self.history.len();
        self.history.push((assumed.clone(), world));
        let answer = self.explore(&assumed, world, depth);
        self.history.pop();
        let answer = answer?;
        if let Answer::Sat {
            dep: usize::MAX, ..
        } = answer
        {
            self.cache.insert(assumed, world);
        }
        Ok(answer)
    }

    fn explore(
        &mut self,
        assumed: &[Lit],
        world: usize,
        depth: usize,
    ) -> Result<Answer, DecideError> {
        'query: loop {
            if let Some(core) = self.classical(assumed)? {
                return Ok(Answer::Unsat(core));
            }
            let mut holds = vec![false; self.atom_of.len()];
            for l in self.solver.model().expect("satisfiable") {
                holds[l.var().index()] = l.is_positive();
            }
            let kept: Vec<Lit> = self
                .boxes
                .iter()
                .filter(|(x, _)| holds[x.index()])
                .map(|(x, _)| x.positive())
                .collect();
            // A false body refutes its box here by reflexivity; otherwise a
            // finished world keeping every true box and refuting the body
            // serves as the successor.
            let mut successors = Vec::new();
            let mut open = Vec::new();
            for &(x, a) in &self.boxes {
                if holds[x.index()] || !holds[a.index()] {
                    continue;
                }
                let reuse = self.finished.iter().find(|(model, _)| {
                    !model[a.index()] && kept.iter().all(|k| model[k.var().index()])
                });
                match reuse {
                    Some(&(_, w)) => successors.push(w),
                    None => open.push((x, a)),
                }
            }
            let request = |a: Var| canonical(kept.iter().copied().chain([a.negative()]).collect());
            // Classical checks first: they are cheap and often teach a
            // clause that changes the model.
            for &(x, a) in &open {
                if let Some(core) = self.classical(&request(a))? {
                    self.learn(core, x);
                    continue 'query;
                }
            }
            let mut dep = usize::MAX;
            for &(x, a) in &open {
                match self.sat(request(a))? {
                    Answer::Unsat(core) => {
                        self.learn(core, x);
                        continue 'query;
                    }
                    Answer::Sat { world: w, dep: d } => {
                        successors.push(w);
                        dep = dep.min(d);
                    }
                }
            }
            successors.dedup();
            let atoms = (0..holds.len())
                .filter(|&i| holds[i])
                .filter_map(|i| self.atom_of[i])
                .collect();
            self.worlds.set_atoms(world, atoms);
            for w in successors {
                self.worlds.link(world, w);
            }
            let dep = if dep >= depth { usize::MAX } else { dep };
            if dep == usize::MAX {
                self.finished.push((holds, world));
            }
            return Ok(Answer::Sat { world, dep });
        }
    }
}
