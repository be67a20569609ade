use std::collections::BTreeMap;

use crate::arena::{Arena, StateId, StateSet};
use crate::condition::MullerCondition;
use crate::error::SolveError;
use crate::player::{Owner, Player};
use crate::scalar::Probability;
use crate::strategy::{MemoryId, StrategyTransducer};
use crate::zielonka::ZielonkaTree;

use super::{solve, Trace};

/// A strategy synthesized on Eve's region.
#[derive(Clone, Debug)]
pub struct Synthesis<P> {
    pub strategy: StrategyTransducer<P>,
    pub region: StateSet,
    pub trace: Trace,
    /// `r` of the condition, the memory bound the strategy respects.
    pub bound: usize,
}

/// Synthesizes an almost-sure strategy, requiring Eve to win from every
/// state.
pub fn synthesize<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
) -> Result<StrategyTransducer<P>, SolveError> {
    let s = synthesize_on_region(arena, condition)?;
    if let Some(lost) = (0..arena.len()).find(|&x| !s.region.contains(x)) {
        return Err(SolveError::NotWinningEverywhere(arena.name(lost).to_string()));
    }
    Ok(s.strategy)
}

/// Solves the game and synthesizes a strategy defined on Eve's region,
/// which is a trap for Adam and hence a subarena.
pub fn synthesize_on_region<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
) -> Result<Synthesis<P>, SolveError> {
    let solved = solve(arena, condition)?;
    let local = build(arena, &solved.trace);
    let mut strategy = StrategyTransducer::with_size(Player::Eve, local.size, local.init);
    for ((s, m), d) in local.next {
        strategy.set_next(s, m, d);
    }
    for ((s, m), d) in local.update {
        strategy.set_update(s, m, d);
    }
    Ok(Synthesis {
        strategy,
        region: solved.eve_region,
        trace: solved.trace,
        bound: ZielonkaTree::build(condition).memory_r(),
    })
}

struct Local<P> {
    size: usize,
    init: MemoryId,
    next: BTreeMap<(StateId, MemoryId), Vec<(StateId, P)>>,
    update: BTreeMap<(StateId, MemoryId), Vec<(MemoryId, P)>>,
}

impl<P: Probability> Local<P> {
    fn empty(size: usize, init: MemoryId) -> Self {
        Local {
            size,
            init,
            next: BTreeMap::new(),
            update: BTreeMap::new(),
        }
    }

    fn pure(t: StateId) -> Vec<(StateId, P)> {
        vec![(t, P::one())]
    }
}

fn first_inside<P: Probability>(arena: &Arena<P>, s: StateId, domain: &StateSet) -> StateId {
    *arena
        .successors(s)
        .iter()
        .find(|&&t| domain.contains(t))
        .expect("the domain is live")
}

fn eve_states<'a, P: Probability>(arena: &'a Arena<P>, set: &'a StateSet) -> impl Iterator<Item = StateId> + 'a {
    set.ones().filter(|&s| arena.owner(s) == Owner::Eve)
}

fn build<P: Probability>(arena: &Arena<P>, trace: &Trace) -> Local<P> {
    match trace {
        Trace::Leaf { domain, .. } => {
            let mut l = Local::empty(1, 0);
            for s in eve_states(arena, domain) {
                l.next.insert((s, 0), Local::pure(first_inside(arena, s, domain)));
            }
            l
        }
        Trace::Adam { parts, .. } => {
            let subs: Vec<Local<P>> = parts.iter().map(|p| build(arena, &p.sub)).collect();
            let size = subs.iter().map(|l| l.size).max().unwrap_or(1);
            let mut l = Local::empty(size, 0);
            for (part, sub) in parts.iter().zip(&subs) {
                for s in part.trap.ones() {
                    for m in 0..size {
                        // Memory beyond the child's range is read as its initial state.
                        let mm = if m < sub.size { m } else { sub.init };
                        if let Some(d) = sub.next.get(&(s, mm)) {
                            l.next.insert((s, m), d.clone());
                        }
                        match sub.update.get(&(s, mm)) {
                            Some(d) => {
                                l.update.insert((s, m), d.clone());
                            }
                            None if mm != m => {
                                l.update.insert((s, m), vec![(mm, P::one())]);
                            }
                            None => {}
                        }
                    }
                }
                for (&s, &t) in &part.attractor {
                    for m in 0..size {
                        l.next.insert((s, m), Local::pure(t));
                    }
                }
            }
            l
        }
        Trace::Eve { domain, children, .. } => {
            let has_leaf = children.iter().any(|c| c.leaf);
            let inner: Vec<_> = children.iter().filter(|c| !c.leaf).collect();
            let subs: Vec<Local<P>> = inner.iter().map(|c| build(arena, &c.sub)).collect();
            let mut offsets = Vec::with_capacity(subs.len());
            let mut size = usize::from(has_leaf);
            for s in &subs {
                offsets.push(size);
                size += s.size;
            }
            let entry = |b: usize| offsets[b] + subs[b].init;
            let init = if subs.is_empty() { 0 } else { entry(0) };
            let mut l = Local::empty(size.max(1), init);

            for (b, (child, sub)) in inner.iter().zip(&subs).enumerate() {
                let off = offsets[b];
                let following = if b + 1 < subs.len() {
                    entry(b + 1)
                } else if has_leaf {
                    0
                } else {
                    entry(0)
                };
                for s in child.avoid.ones() {
                    for m in off..off + sub.size {
                        if arena.owner(s) == Owner::Eve {
                            l.next.insert((s, m), Local::pure(first_inside(arena, s, domain)));
                        }
                        if following != m {
                            l.update.insert((s, m), vec![(following, P::one())]);
                        }
                    }
                }
                for (&s, &t) in &child.attractor {
                    for m in off..off + sub.size {
                        l.next.insert((s, m), Local::pure(t));
                    }
                }
                for ((s, m), d) in &sub.next {
                    l.next.insert((*s, off + m), d.clone());
                }
                for ((s, m), d) in &sub.update {
                    let d = d.iter().map(|(n, p)| (off + n, p.clone())).collect();
                    l.update.insert((*s, off + m), d);
                }
            }

            if has_leaf {
                for s in eve_states(arena, domain) {
                    let succ: Vec<StateId> = arena
                        .successors(s)
                        .iter()
                        .copied()
                        .filter(|&t| domain.contains(t))
                        .collect();
                    let k = succ.len() as u64;
                    l.next
                        .insert((s, 0), succ.into_iter().map(|t| (t, P::from_ratio(1, k))).collect());
                }
                if !subs.is_empty() {
                    let half = || P::from_ratio(1, 2);
                    for s in domain.ones() {
                        l.update.insert((s, 0), vec![(0, half()), (entry(0), half())]);
                    }
                }
            }
            l
        }
    }
}
