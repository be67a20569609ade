use std::collections::BTreeMap;

use crate::player::{Owner, Player};
use crate::scalar::Probability;

use super::{Arena, StateId, StateSet};

/// Attractor region of a player with its rank function and a positional
/// attractor strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorResult {
    pub region: StateSet,
    /// For each of the player's states in `region ∖ target`, a successor of
    /// strictly smaller rank (the first one in state order).
    pub strategy: BTreeMap<StateId, StateId>,
    /// Level at which each state joined; `None` outside the region.
    pub rank: Vec<Option<usize>>,
}

/// Positive-probability attractor of `player` to `target` in the whole arena.
pub fn attractor<P: Probability>(arena: &Arena<P>, player: Player, target: &StateSet) -> AttractorResult {
    attractor_within(arena, &arena.all_states(), player, target)
}

/// Attractor computed in the sub-arena induced by `domain`; edges leaving
/// `domain` are ignored.
///
/// A state joins at level `i+1` if it belongs to `player` or to chance and
/// has a successor at level `≤ i`, or belongs to the opponent and has all its
/// successors (inside `domain`) at level `≤ i`.
pub fn attractor_within<P: Probability>(
    arena: &Arena<P>,
    domain: &StateSet,
    player: Player,
    target: &StateSet,
) -> AttractorResult {
    let n = arena.len();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut region = StateSet::with_capacity(n);
    let mut pending: Vec<usize> = vec![0; n];
    for s in domain.ones() {
        pending[s] = arena.successors(s).iter().filter(|&&t| domain.contains(t)).count();
    }
    let mut frontier: Vec<StateId> = target.ones().filter(|&s| domain.contains(s)).collect();
    for &s in &frontier {
        rank[s] = Some(0);
        region.insert(s);
    }
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &t in &frontier {
            for &s in arena.predecessors(t) {
                if !domain.contains(s) || region.contains(s) {
                    continue;
                }
                let joins = match arena.owner(s) {
                    Owner::Random => true,
                    o if o.is(player) => true,
                    _ => {
                        pending[s] -= 1;
                        pending[s] == 0
                    }
                };
                if joins {
                    region.insert(s);
                    rank[s] = Some(level);
                    next.push(s);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    let mut strategy = BTreeMap::new();
    for s in region.ones() {
        let r = rank[s].expect("in region");
        if r > 0 && arena.owner(s).is(player) {
            let t = arena
                .successors(s)
                .iter()
                .copied()
                .find(|&t| domain.contains(t) && rank[t].is_some_and(|rt| rt < r))
                .expect("a rank-decreasing successor exists");
            strategy.insert(s, t);
        }
    }
    AttractorResult {
        region,
        strategy,
        rank,
    }
}

/// Whether `set` is a trap for `player`: their states and random states
/// cannot leave it, and every opponent state in it can stay.
pub fn is_trap<P: Probability>(arena: &Arena<P>, player: Player, set: &StateSet) -> bool {
    is_trap_within(arena, &arena.all_states(), player, set)
}

/// [`is_trap`] in the sub-arena induced by `domain`.
pub fn is_trap_within<P: Probability>(
    arena: &Arena<P>,
    domain: &StateSet,
    player: Player,
    set: &StateSet,
) -> bool {
    set.ones().all(|s| {
        if !domain.contains(s) {
            return false;
        }
        let mut inside = arena.successors(s).iter().filter(|&&t| domain.contains(t));
        match arena.owner(s) {
            Owner::Random => inside.all(|&t| set.contains(t)),
            o if o.is(player) => inside.all(|&t| set.contains(t)),
            _ => inside.any(|&t| set.contains(t)),
        }
    })
}
