//! Classical propositional logic by exhaustive valuation.
//!
//! Valuations are evaluated 64 at a time: bit `k` of every word belongs to
//! the `k`-th valuation of the current block.

use std::collections::{BTreeMap, BTreeSet};

use super::arena::{Arena, Node, NodeId};
use super::{Budget, DecideError, KripkeModel};

/// Truth pattern of atom `i` across a block of 64 valuations.
fn atom_word(i: usize, block: u64) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if i < 6 {
        PATTERNS[i]
    } else if (block >> (i - 6)) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

pub(crate) fn decide(
    arena: &mut Arena,
    assumptions: &[NodeId],
    goal: NodeId,
    budget: &mut Budget,
) -> Result<(bool, Option<KripkeModel>), DecideError> {
    let n = arena.atom_count();
    let valuations: u128 = 1u128 << n.min(127);
    let limit = budget_room(budget);
    if n >= 127 || valuations > limit as u128 {
        return Err(DecideError::BudgetExhausted {
            limit: budget.limit(),
        });
    }
    let blocks = valuations.div_ceil(64) as u64;
    let live = if n < 6 {
        (1u64 << (1u64 << n)) - 1
    } else {
        u64::MAX
    };
    let mut words = vec![0u64; arena.len()];
    for block in 0..blocks {
        budget.spend(64.min(valuations) as u64)?;
        for id in 0..arena.len() {
            words[id] = match arena.node(NodeId(id as u32)) {
                Node::Bot => 0,
                Node::Atom(a) => atom_word(a as usize, block),
                Node::And(l, r) => words[l.0 as usize] & words[r.0 as usize],
                Node::Or(l, r) => words[l.0 as usize] | words[r.0 as usize],
                Node::Imp(l, r) => !words[l.0 as usize] | words[r.0 as usize],
                Node::Box(_) => unreachable!("modal formulas are rejected before dispatch"),
            };
        }
        let premises = assumptions
            .iter()
            .fold(u64::MAX, |acc, a| acc & words[a.0 as usize]);
        let bad = premises & !words[goal.0 as usize] & live;
        if bad != 0 {
            let bit = bad.trailing_zeros() as u64;
            let index = block * 64 + bit;
            let atoms: BTreeSet<String> = (0..n)
                .filter(|&i| index >> i & 1 == 1)
                .map(|i| arena.atom_name(i as u32).as_str().to_owned())
                .collect();
            let model = KripkeModel {
                worlds: vec![0],
                order: vec![(0, 0)],
                valuation: BTreeMap::from([(0, atoms)]),
                designated: 0,
            };
            return Ok((false, Some(model)));
        }
    }
    Ok((true, None))
}

fn budget_room(budget: &Budget) -> u64 {
    budget.limit().saturating_sub(budget.used())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_words_enumerate_all_valuations() {
        // Within block 0 the k-th bit of atom i is bit i of k.
        for k in 0..64u64 {
            for i in 0..6 {
                assert_eq!(atom_word(i, 0) >> k & 1, k >> i & 1);
            }
        }
        assert_eq!(atom_word(6, 1), u64::MAX);
        assert_eq!(atom_word(7, 1), 0);
        assert_eq!(atom_word(7, 2), u64::MAX);
    }
}
