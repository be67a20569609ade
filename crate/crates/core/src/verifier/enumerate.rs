use std::collections::{BTreeMap, HashMap};

use crate::arena::{Arena, StateId};
use crate::error::VerifyError;
use crate::player::{Owner, Player};
use crate::scalar::Probability;
use crate::strategy::{MemoryId, SupportStrategy};

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_MAX_ENUM: u128 = 10_000_000;

/// The cap from `MULLER_MAX_ENUM`, or [`DEFAULT_MAX_ENUM`].
pub fn max_enum_from_env() -> u128 {
    std::env::var("MULLER_MAX_ENUM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

#[derive(Clone, Debug)]
enum Slot {
    Next { state: StateId, memory: MemoryId, succ: Vec<StateId> },
    Update { state: StateId, memory: MemoryId },
}

/// Every Eve support strategy with a given memory size, up to renaming of
/// the non-initial memory states. Memory state `0` is initial.
#[derive(Clone, Debug)]
pub struct SupportEnumeration {
    memory: usize,
    slots: Vec<Slot>,
    radix: Vec<u64>,
    digits: Vec<u64>,
    done: bool,
    count: u128,
    next_slot: HashMap<(StateId, MemoryId), usize>,
    update_slot: HashMap<(StateId, MemoryId), usize>,
    perms: Vec<Vec<MemoryId>>,
}

/// Enumerates all support strategies for Eve with `memory_size` memory
/// states: every non-empty successor set at each (Eve state, memory) and,
/// with more than one memory state, every non-empty update set at each
/// (state, memory).
///
/// Fails with [`VerifyError::ResourceLimit`] when the raw number of
/// candidates exceeds `bound`.
pub fn enumerate_support_strategies<P: Probability>(
    arena: &Arena<P>,
    memory_size: usize,
    bound: u128,
) -> Result<SupportEnumeration, VerifyError> {
    if memory_size == 0 {
        return Err(VerifyError::Unsupported("memory size must be positive".into()));
    }
    if memory_size > 6 {
        return Err(VerifyError::Unsupported("memory size above 6".into()));
    }
    let mut slots = Vec::new();
    for s in 0..arena.len() {
        if arena.owner(s) == Owner::Eve {
            for m in 0..memory_size {
                slots.push(Slot::Next {
                    state: s,
                    memory: m,
                    succ: arena.successors(s).to_vec(),
                });
            }
        }
    }
    if memory_size > 1 {
        for s in 0..arena.len() {
            for m in 0..memory_size {
                slots.push(Slot::Update { state: s, memory: m });
            }
        }
    }
    let radix: Vec<u64> = slots
        .iter()
        .map(|sl| match sl {
            Slot::Next { succ, .. } if succ.len() >= 64 => u64::MAX,
            Slot::Next { succ, .. } => (1u64 << succ.len()) - 1,
            Slot::Update { .. } => (1u64 << memory_size) - 1,
        })
        .collect();
    let count = radix
        .iter()
        .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    if count > bound {
        return Err(VerifyError::ResourceLimit { count, bound });
    }
    let mut next_slot = HashMap::new();
    let mut update_slot = HashMap::new();
    for (i, sl) in slots.iter().enumerate() {
        match sl {
            Slot::Next { state, memory, .. } => next_slot.insert((*state, *memory), i),
            Slot::Update { state, memory } => update_slot.insert((*state, *memory), i),
        };
    }
    let mut perms = Vec::new();
    permutations(&mut (1..memory_size).collect(), 0, &mut perms);
    let perms = perms
        .into_iter()
        .map(|rest| std::iter::once(0).chain(rest).collect::<Vec<_>>())
        .filter(|p: &Vec<usize>| p.iter().enumerate().any(|(i, &x)| i != x))
        .collect();
    Ok(SupportEnumeration {
        memory: memory_size,
        digits: vec![0; slots.len()],
        slots,
        radix,
        done: count == 0,
        count,
        next_slot,
        update_slot,
        perms,
    })
}

fn permutations(xs: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == xs.len() {
        out.push(xs.clone());
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permutations(xs, k + 1, out);
        xs.swap(k, i);
    }
}

impl SupportEnumeration {
    /// Number of candidates before symmetry reduction.
    pub fn raw_count(&self) -> u128 {
        self.count
    }

    fn advance(&mut self) {
        for (d, &r) in self.digits.iter_mut().zip(&self.radix) {
            *d += 1;
            if *d < r {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }

    /// Whether no memory renaming yields a lexicographically smaller digit
    /// vector.
    fn is_canonical(&self) -> bool {
        for perm in &self.perms {
            let mut image = self.digits.clone();
            for (&(s, m), &i) in &self.next_slot {
                image[self.next_slot[&(s, perm[m])]] = self.digits[i];
            }
            for (&(s, m), &i) in &self.update_slot {
                let mask = self.digits[i] + 1;
                let mut mapped = 0u64;
                for (x, &px) in perm.iter().enumerate() {
                    if mask >> x & 1 == 1 {
                        mapped |= 1 << px;
                    }
                }
                image[self.update_slot[&(s, perm[m])]] = mapped - 1;
            }
            // Digits are little-endian; compare from the most significant.
            if image.iter().rev().lt(self.digits.iter().rev()) {
                return false;
            }
        }
        true
    }

    fn current(&self) -> SupportStrategy {
        let mut next = BTreeMap::new();
        let mut update = BTreeMap::new();
        for (sl, &d) in self.slots.iter().zip(&self.digits) {
            let mask = d + 1;
            match sl {
                Slot::Next { state, memory, succ } => {
                    let chosen = succ
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &t)| t)
                        .collect();
                    next.insert((*state, *memory), chosen);
                }
                Slot::Update { state, memory } => {
                    let chosen = (0..self.memory).filter(|i| mask >> i & 1 == 1).collect();
                    update.insert((*state, *memory), chosen);
                }
            }
        }
        SupportStrategy {
            owner: Player::Eve,
            memory: (0..self.memory).map(|i| i.to_string()).collect(),
            initial: 0,
            next,
            update,
        }
    }
}

impl Iterator for SupportEnumeration {
    type Item = SupportStrategy;

    fn next(&mut self) -> Option<SupportStrategy> {
        while !self.done {
            let canonical = self.is_canonical();
            let item = canonical.then(|| self.current());
            self.advance();
            if item.is_some() {
                return item;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::colour::ColourAlphabet;
    use crate::Rational;

    fn one_choice() -> Arena<Rational> {
        let mut b = ArenaBuilder::new(ColourAlphabet::letters(1));
        let s = b.add_state("s", Owner::Eve, None).unwrap();
        let x = b.add_state("x", Owner::Adam, None).unwrap();
        let y = b.add_state("y", Owner::Adam, None).unwrap();
        for (f, t) in [(s, x), (s, y), (x, s), (y, s)] {
            b.add_edge(f, t);
        }
        b.build().unwrap()
    }

    #[test]
    fn two_successors_one_memory_state() {
        let all: Vec<_> = enumerate_support_strategies(&one_choice(), 1, DEFAULT_MAX_ENUM)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 3);
        let supports: Vec<_> = all.iter().map(|s| s.next[&(0, 0)].clone()).collect();
        assert_eq!(supports, vec![vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn renaming_symmetry_is_removed() {
        let mut b = ArenaBuilder::<Rational>::new(ColourAlphabet::letters(1));
        let s = b.add_state("s", Owner::Eve, None).unwrap();
        b.add_edge(s, s);
        let a = b.build().unwrap();
        let e = enumerate_support_strategies(&a, 3, DEFAULT_MAX_ENUM).unwrap();
        let raw = e.raw_count();
        let kept: Vec<_> = e.collect();
        assert!((kept.len() as u128) < raw);
        // Orbits have size at most 2 (one swap of the non-initial states).
        assert!(2 * kept.len() as u128 >= raw);
        let unique: std::collections::HashSet<_> = kept.iter().collect();
        assert_eq!(unique.len(), kept.len());
    }

    #[test]
    fn resource_limit_reports_the_bound() {
        let a = one_choice();
        match enumerate_support_strategies(&a, 2, 10) {
            Err(VerifyError::ResourceLimit { count, bound }) => {
                assert_eq!(bound, 10);
                assert_eq!(count, 9 * 3u128.pow(6));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
