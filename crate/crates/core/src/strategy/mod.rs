//! Finite-memory randomised strategies and their qualitative abstraction.
//!
//! A strategy in memory `m` at state `s` draws the next state from
//! `next(s, m)` (only at the owner's states) and, independently, the next
//! memory from `update(s, m)`. A missing update entry keeps the memory.

mod product;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::arena::{Arena, StateId};
use crate::error::StrategyError;
use crate::player::Player;
use crate::scalar::Probability;
use crate::Rational;

pub use product::{fix_positional, product, product_from, ProductMdp, ProductNode};

/// Index of a memory state.
pub type MemoryId = usize;

/// A finite-memory randomised strategy `(M, next, update)` with an explicit
/// initial memory state.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyTransducer<P = Rational> {
    owner: Player,
    memory: Vec<String>,
    initial: MemoryId,
    next: BTreeMap<(StateId, MemoryId), Vec<(StateId, P)>>,
    update: BTreeMap<(StateId, MemoryId), Vec<(MemoryId, P)>>,
}

impl<P: Probability> StrategyTransducer<P> {
    pub fn new(owner: Player, memory: Vec<String>, initial: MemoryId) -> Result<Self, StrategyError> {
        if memory.is_empty() {
            return Err(StrategyError::EmptyMemory);
        }
        let mut seen = BTreeSet::new();
        for m in &memory {
            if !seen.insert(m.as_str()) {
                return Err(StrategyError::DuplicateMemory(m.clone()));
            }
        }
        if initial >= memory.len() {
            return Err(StrategyError::UnknownMemory(initial.to_string()));
        }
        Ok(StrategyTransducer {
            owner,
            memory,
            initial,
            next: BTreeMap::new(),
            update: BTreeMap::new(),
        })
    }

    /// Memory states named `0..size`.
    pub fn with_size(owner: Player, size: usize, initial: MemoryId) -> Self {
        Self::new(owner, (0..size).map(|i| i.to_string()).collect(), initial)
            .expect("numbered memory is valid")
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn memory_size(&self) -> usize {
        self.memory.len()
    }

    pub fn memory_names(&self) -> &[String] {
        &self.memory
    }

    pub fn memory_name(&self, m: MemoryId) -> &str {
        &self.memory[m]
    }

    pub fn memory_id(&self, name: &str) -> Option<MemoryId> {
        self.memory.iter().position(|m| m == name)
    }

    pub fn initial(&self) -> MemoryId {
        self.initial
    }

    /// Entries are kept sorted by target.
    pub fn set_next(&mut self, s: StateId, m: MemoryId, mut dist: Vec<(StateId, P)>) {
        dist.sort_by_key(|(t, _)| *t);
        self.next.insert((s, m), dist);
    }

    pub fn set_update(&mut self, s: StateId, m: MemoryId, mut dist: Vec<(MemoryId, P)>) {
        dist.sort_by_key(|(n, _)| *n);
        self.update.insert((s, m), dist);
    }

    pub fn next(&self, s: StateId, m: MemoryId) -> Option<&[(StateId, P)]> {
        self.next.get(&(s, m)).map(Vec::as_slice)
    }

    /// The explicit update entry, if any.
    pub fn update_entry(&self, s: StateId, m: MemoryId) -> Option<&[(MemoryId, P)]> {
        self.update.get(&(s, m)).map(Vec::as_slice)
    }

    /// The memory distribution after leaving `s` in memory `m`.
    pub fn update(&self, s: StateId, m: MemoryId) -> Vec<(MemoryId, P)> {
        match self.update.get(&(s, m)) {
            Some(d) => d.clone(),
            None => vec![(m, P::one())],
        }
    }

    pub fn next_entries(&self) -> impl Iterator<Item = (&(StateId, MemoryId), &Vec<(StateId, P)>)> {
        self.next.iter()
    }

    pub fn update_entries(&self) -> impl Iterator<Item = (&(StateId, MemoryId), &Vec<(MemoryId, P)>)> {
        self.update.iter()
    }

    /// Whether every defined move and update is deterministic.
    pub fn is_pure(&self) -> bool {
        self.next.values().all(|d| d.len() == 1) && self.update.values().all(|d| d.len() == 1)
    }

    /// Checks moves against the arena: only the owner's states, legal
    /// successors, positive probabilities summing to one.
    pub fn validate(&self, arena: &Arena<P>) -> Result<(), StrategyError> {
        for (&(s, m), dist) in &self.next {
            let name = || arena.name(s).to_string();
            if s >= arena.len() {
                return Err(StrategyError::Undefined(s.to_string(), m.to_string()));
            }
            if !arena.owner(s).is(self.owner) {
                return Err(StrategyError::WrongOwner(name()));
            }
            check_dist(dist, || format!("{}|{}", name(), self.memory[m]))?;
            for (t, _) in dist {
                if !arena.has_edge(s, *t) {
                    return Err(StrategyError::IllegalMove(name(), arena.name(*t).to_string()));
                }
            }
        }
        for (&(s, m), dist) in &self.update {
            check_dist(dist, || format!("{}|{}", arena.name(s), self.memory[m]))?;
            if let Some((n, _)) = dist.iter().find(|(n, _)| *n >= self.memory.len()) {
                return Err(StrategyError::UnknownMemory(n.to_string()));
            }
        }
        Ok(())
    }

    /// The supports of every distribution.
    pub fn support(&self) -> SupportStrategy {
        SupportStrategy {
            owner: self.owner,
            memory: self.memory.clone(),
            initial: self.initial,
            next: self
                .next
                .iter()
                .map(|(k, d)| (*k, positive(d)))
                .collect(),
            update: self
                .update
                .iter()
                .map(|(k, d)| (*k, positive(d)))
                .collect(),
        }
    }

    /// Converts the probability scalar type.
    pub fn map_probabilities<Q: Probability>(&self, f: impl Fn(&P) -> Q) -> StrategyTransducer<Q> {
        StrategyTransducer {
            owner: self.owner,
            memory: self.memory.clone(),
            initial: self.initial,
            next: self
                .next
                .iter()
                .map(|(k, d)| (*k, d.iter().map(|(t, p)| (*t, f(p))).collect()))
                .collect(),
            update: self
                .update
                .iter()
                .map(|(k, d)| (*k, d.iter().map(|(t, p)| (*t, f(p))).collect()))
                .collect(),
        }
    }

    /// Renames memory states; `names` must have the same length.
    pub fn rename_memory(&mut self, names: Vec<String>) -> Result<(), StrategyError> {
        let renamed = StrategyTransducer::<P>::new(self.owner, names, self.initial)?;
        if renamed.memory.len() != self.memory.len() {
            return Err(StrategyError::UnknownMemory(format!(
                "{} names for {} memory states",
                renamed.memory.len(),
                self.memory.len()
            )));
        }
        self.memory = renamed.memory;
        Ok(())
    }
}

fn positive<T: Copy, P: Probability>(d: &[(T, P)]) -> Vec<T> {
    d.iter().filter(|(_, p)| p.is_positive()).map(|(t, _)| *t).collect()
}

fn check_dist<T, P: Probability>(dist: &[(T, P)], key: impl Fn() -> String) -> Result<(), StrategyError> {
    if dist.is_empty() || dist.iter().any(|(_, p)| !p.is_positive()) {
        return Err(StrategyError::BadDistribution(key()));
    }
    let total = dist.iter().fold(P::zero(), |acc, (_, p)| acc + p.clone());
    if !total.is_unit() {
        return Err(StrategyError::BadDistribution(key()));
    }
    Ok(())
}

/// A strategy given only by the supports of its distributions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportStrategy {
    pub owner: Player,
    pub memory: Vec<String>,
    pub initial: MemoryId,
    /// Sorted, non-empty successor sets.
    pub next: BTreeMap<(StateId, MemoryId), Vec<StateId>>,
    /// Sorted, non-empty memory sets; missing entries keep the memory.
    pub update: BTreeMap<(StateId, MemoryId), Vec<MemoryId>>,
}

impl SupportStrategy {
    pub fn memory_size(&self) -> usize {
        self.memory.len()
    }

    /// Replaces every support by the uniform distribution over it.
    pub fn uniformize<P: Probability>(&self) -> StrategyTransducer<P> {
        let uniform = |xs: &[usize]| -> Vec<(usize, P)> {
            let k = xs.len() as u64;
            xs.iter().map(|&x| (x, P::from_ratio(1, k))).collect()
        };
        StrategyTransducer {
            owner: self.owner,
            memory: self.memory.clone(),
            initial: self.initial,
            next: self.next.iter().map(|(k, xs)| (*k, uniform(xs))).collect(),
            update: self.update.iter().map(|(k, xs)| (*k, uniform(xs))).collect(),
        }
    }
}

/// A pure memoryless strategy for `owner`, one move per listed state.
pub fn pure_memoryless<P: Probability>(
    arena: &Arena<P>,
    owner: Player,
    moves: &BTreeMap<StateId, StateId>,
) -> Result<StrategyTransducer<P>, StrategyError> {
    let mut s = StrategyTransducer::with_size(owner, 1, 0);
    for (&from, &to) in moves {
        if from >= arena.len() || to >= arena.len() || !arena.has_edge(from, to) {
            let n = |x: usize| arena.states().get(x).map_or(x.to_string(), |st| st.name.clone());
            return Err(StrategyError::IllegalMove(n(from), n(to)));
        }
        if !arena.owner(from).is(owner) {
            return Err(StrategyError::WrongOwner(arena.name(from).to_string()));
        }
        s.set_next(from, 0, vec![(to, P::one())]);
    }
    Ok(s)
}

/// The move of a pure memoryless strategy at each state it defines.
pub fn positional_moves<P: Probability>(s: &StrategyTransducer<P>) -> Option<HashMap<StateId, StateId>> {
    if s.memory_size() != 1 {
        return None;
    }
    s.next
        .iter()
        .map(|(&(st, _), d)| match d.as_slice() {
            [(t, _)] => Some((st, *t)),
            _ => None,
        })
        .collect()
}
