//! Hash-consed propositional formulas.
//!
//! Interning maps structurally equal subformulas to one [`NodeId`], so
//! sequents become small sorted id sets and translated formulas whose tree
//! form is exponential stay polynomial. Children always get smaller ids than
//! their parents.

use std::collections::HashMap;

use crate::syntax::{Formula, FormulaKind, Symbol};

use super::DecideError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct NodeId(pub(crate) u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Bot,
    Atom(u32),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Imp(NodeId, NodeId),
    Box(NodeId),
}

#[derive(Debug, Default)]
pub(crate) struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    atoms: Vec<Symbol>,
    atom_index: HashMap<Symbol, u32>,
    /// Keyed by node address; the formula is held so the address stays
    /// unique for the arena's lifetime.
    by_ptr: HashMap<*const FormulaKind, (Formula, NodeId)>,
}

impl Arena {
    pub(crate) fn mk(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    pub(crate) fn node(&self, id: NodeId) -> Node {
        self.nodes[id.0 as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes reachable from `roots`, in increasing id order.
    pub(crate) fn reachable(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut mark = vec![false; self.nodes.len()];
        for r in roots {
            mark[r.0 as usize] = true;
        }
        // Children have smaller ids, so one downward sweep suffices.
        for i in (0..self.nodes.len()).rev() {
            if !mark[i] {
                continue;
            }
            match self.nodes[i] {
                Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                    mark[a.0 as usize] = true;
                    mark[b.0 as usize] = true;
                }
                Node::Box(a) => mark[a.0 as usize] = true,
                Node::Bot | Node::Atom(_) => {}
            }
        }
        (0..self.nodes.len())
            .filter(|&i| mark[i])
            .map(|i| NodeId(i as u32))
            .collect()
    }

    pub(crate) fn atom_name(&self, atom: u32) -> &Symbol {
        &self.atoms[atom as usize]
    }

    pub(crate) fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn atom(&mut self, name: &Symbol) -> u32 {
        if let Some(&a) = self.atom_index.get(name) {
            return a;
        }
        let a = self.atoms.len() as u32;
        self.atoms.push(name.clone());
        self.atom_index.insert(name.clone(), a);
        a
    }

    /// Interns a propositional formula. Rejects equations, quantifiers,
    /// predicates with arguments and the proof operator.
    pub(crate) fn intern(&mut self, f: &Formula) -> Result<NodeId, DecideError> {
        if let Some(&(_, id)) = self.by_ptr.get(&f.node_ptr()) {
            return Ok(id);
        }
        let node = match f.kind() {
            FormulaKind::Bot => Node::Bot,
            FormulaKind::Atom(name, args) if args.is_empty() => Node::Atom(self.atom(name)),
            FormulaKind::Atom(..)
            | FormulaKind::Eq(..)
            | FormulaKind::Exists(..)
            | FormulaKind::Forall(..) => {
                return Err(DecideError::NotPropositional(f.to_string()));
            }
            FormulaKind::Prf(_) => return Err(DecideError::ProofOperator),
            FormulaKind::And(a, b) => Node::And(self.intern(a)?, self.intern(b)?),
            FormulaKind::Or(a, b) => Node::Or(self.intern(a)?, self.intern(b)?),
            FormulaKind::Implies(a, b) => Node::Imp(self.intern(a)?, self.intern(b)?),
            FormulaKind::Box(a) => Node::Box(self.intern(a)?),
        };
        let id = self.mk(node);
        self.by_ptr.insert(f.node_ptr(), (f.clone(), id));
        Ok(id)
    }
}

/// Inserts into a sorted, duplicate-free vector.
pub(crate) fn set_insert(set: &mut Vec<NodeId>, id: NodeId) -> bool {
    match set.binary_search(&id) {
        Ok(_) => false,
        Err(pos) => {
            set.insert(pos, id);
            true
        }
    }
}

pub(crate) fn set_remove(set: &mut Vec<NodeId>, id: NodeId) {
    if let Ok(pos) = set.binary_search(&id) {
        set.remove(pos);
    }
}

pub(crate) fn set_contains(set: &[NodeId], id: NodeId) -> bool {
    set.binary_search(&id).is_ok()
}
