//! Intuitionistic propositional logic by SAT modulo intuitionistic
//! implications.
//!
//! The sequent is clausified over the hash-consed DAG: every node gets a
//! variable `x` defined by `x ↔ φ`, which yields flat clauses
//! `a₁ ∧ … ∧ aₙ → b₁ ∨ … ∨ bₘ` and implication clauses `(a → b) → c` over
//! variables. For flat clauses classical and intuitionistic consequence of a
//! variable coincide, so a SAT solver answers those queries. An implication
//! clause whose head is false in a classical model is checked by a nested
//! search above that model; a nested success is learnt as a flat clause and
//! the outer query repeats. A final classical model with all its nested
//! refutations is a world of a Kripke countermodel.

use varisat::{ExtendFormula, Lit, Solver, Var};

use super::arena::{Arena, Node, NodeId};
use super::kripke::WorldGraph;
use super::{with_stack, Budget, DecideError, KripkeModel};

enum Answer {
    /// Derivable from the listed assumption variables.
    Yes(Vec<Var>),
    /// Refuted at the given world.
    No(usize),
}

struct Search<'s, 'b> {
    solver: Solver<'s>,
    budget: &'b mut Budget,
    /// `(a, b, c)` for each implication clause `(a → b) → c`.
    implications: Vec<(Var, Var, Var)>,
    /// Arena atom behind each variable, if any.
    atom_of: Vec<Option<u32>>,
    worlds: WorldGraph,
    /// Refutation worlds found so far, with their models.
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
    for &a in assumptions {
        search.solver.add_clause(&[var(a).positive()]);
    }
    match search.prove(&[], var(goal))? {
        Answer::Yes(_) => Ok((true, None)),
        Answer::No(w) => Ok((false, Some(search.worlds.extract(w, arena)))),
    }
}

impl<'b> Search<'_, 'b> {
    /// Builds the clause set for the nodes reachable from `roots` and
    /// returns the search with its node-to-variable map.
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
        let mut implications = Vec::new();
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
                    solver.add_clause(&[b.negative(), x.positive()]);
                    implications.push((a, b, x));
                }
                Node::Box(_) => unreachable!("boxes are rejected before IPC search"),
            }
        }
        let search = Search {
            solver,
            budget,
            implications,
            atom_of,
            worlds: WorldGraph::default(),
            finished: Vec::new(),
        };
        (search, var)
    }

    /// Classical consequence under the current clauses: the assumption
    /// variables used, or `None` with the solver holding a model.
    fn classical(&mut self, assumed: &[Var], goal: Var) -> Result<Option<Vec<Var>>, DecideError> {
        self.budget.tick()?;
        let mut lits: Vec<Lit> = assumed.iter().map(|v| v.positive()).collect();
        lits.push(goal.negative());
        self.solver.assume(&lits);
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
            .iter()
            .filter(|l| l.is_positive())
            .map(|l| l.var())
            .collect();
        Ok(Some(core))
    }

    /// Learns `core \ {a} → c` from `core ⊢ b` for the clause `(a → b) → c`.
    fn learn(&mut self, core: Vec<Var>, a: Var, c: Var) {
        let mut clause: Vec<Lit> = core
            .into_iter()
            .filter(|&v| v != a)
            .map(|v| v.negative())
            .collect();
        clause.push(c.positive());
        self.solver.add_clause(&clause);
    }

    fn prove(&mut self, assumed: &[Var], goal: Var) -> Result<Answer, DecideError> {
        with_stack(|| self.prove_inner(assumed, goal))
    }

    fn prove_inner(&mut self, assumed: &[Var], goal: Var) -> Result<Answer, DecideError> {
        'query: loop {
            if let Some(core) = self.classical(assumed, goal)? {
                return Ok(Answer::Yes(core));
            }
            let mut holds = vec![false; self.atom_of.len()];
            for l in self.solver.model().expect("satisfiable") {
                holds[l.var().index()] = l.is_positive();
            }
            let world: Vec<Var> = (0..holds.len())
                .filter(|&i| holds[i])
                .map(Var::from_index)
                .collect();
            // A refutation world above this model that forces `a` and not
            // `b` already refutes `a → b`.
            let mut successors = Vec::new();
            let mut open = Vec::new();
            for &(a, b, c) in &self.implications {
                if holds[a.index()] || holds[b.index()] || holds[c.index()] {
                    continue;
                }
                let reuse = self.finished.iter().find(|(model, _)| {
                    model[a.index()] && !model[b.index()] && world.iter().all(|v| model[v.index()])
                });
                match reuse {
                    Some(&(_, w)) => successors.push(w),
                    None => open.push((a, b, c)),
                }
            }
            // Classical checks first: they are cheap and often teach a
            // clause that changes the model.
            for &(a, b, c) in &open {
                let mut above = world.clone();
                above.push(a);
                if let Some(core) = self.classical(&above, b)? {
                    self.learn(core, a, c);
                    continue 'query;
                }
            }
            for &(a, b, c) in &open {
                let mut above = world.clone();
                above.push(a);
                match self.prove(&above, b)? {
                    Answer::Yes(core) => {
                        self.learn(core, a, c);
                        continue 'query;
                    }
                    Answer::No(w) => successors.push(w),
                }
            }
            let atoms = world
                .iter()
                .filter_map(|v| self.atom_of[v.index()])
                .collect();
            let w = self.worlds.add(atoms);
            successors.dedup();
            for v in successors {
                self.worlds.link(w, v);
            }
            self.finished.push((holds, w));
            return Ok(Answer::No(w));
        }
    }
}
