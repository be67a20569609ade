use std::collections::BTreeSet;

use crate::arena::{Arena, ArenaBuilder, StateId};
use crate::colour::{ColourAlphabet, ColourSet};
use crate::error::WitnessError;
use crate::player::Owner;
use crate::scalar::Probability;

/// A standalone gadget: an Adam-owned acyclic fragment from `entry` to
/// `exit`, closed into an arena by an edge from `exit` back to `entry`.
#[derive(Clone, Debug)]
pub struct Gadget<P> {
    pub arena: Arena<P>,
    pub entry: StateId,
    pub exit: StateId,
}

impl<P: Probability> Gadget<P> {
    /// Colour sets of all entry-to-exit paths, one per path.
    pub fn traversals(&self) -> Vec<ColourSet> {
        let mut out = Vec::new();
        let mut stack = vec![(self.entry, ColourSet::EMPTY)];
        while let Some((s, mut seen)) = stack.pop() {
            if let Some(c) = self.arena.colour(s) {
                seen.insert(c);
            }
            if s == self.exit {
                out.push(seen);
                continue;
            }
            for &t in self.arena.successors(s) {
                stack.push((t, seen));
            }
        }
        out
    }

    /// Distinct colour sets Adam can realise in one traversal.
    pub fn realisable(&self) -> BTreeSet<ColourSet> {
        self.traversals().into_iter().collect()
    }
}

/// `Pick*(C)`: a chain of visit/skip choices, one per colour of `C`.
/// `2|C| + 2` states.
pub fn pick_star_gadget<P: Probability>(
    alphabet: &ColourAlphabet,
    set: ColourSet,
) -> Gadget<P> {
    let mut b = ArenaBuilder::new(alphabet.clone());
    let entry = b.add_state("in", Owner::Adam, None).expect("fresh");
    let mut prev = vec![entry];
    for c in set.iter() {
        let n = alphabet.name(c);
        let v = b.add_state_coloured(format!("+{n}"), Owner::Adam, Some(c)).expect("fresh");
        let k = b.add_state(format!("-{n}"), Owner::Adam, None).expect("fresh");
        for &p in &prev {
            b.add_edge(p, v);
            b.add_edge(p, k);
        }
        prev = vec![v, k];
    }
    let exit = b.add_state("out", Owner::Adam, None).expect("fresh");
    for &p in &prev {
        b.add_edge(p, exit);
    }
    b.add_edge(exit, entry);
    Gadget { arena: b.build().expect("gadget is well formed"), entry, exit }
}

/// `Pick(D)`: one coloured state per colour of `D`. `|D| + 2` states.
pub fn pick_gadget<P: Probability>(
    alphabet: &ColourAlphabet,
    set: ColourSet,
) -> Result<Gadget<P>, WitnessError> {
    if set.is_empty() {
        return Err(WitnessError::EmptyChoice);
    }
    let mut b = ArenaBuilder::new(alphabet.clone());
    let entry = b.add_state("in", Owner::Adam, None).expect("fresh");
    let choices: Vec<StateId> = set
        .iter()
        .map(|c| {
            b.add_state_coloured(alphabet.name(c).to_string(), Owner::Adam, Some(c))
                .expect("fresh")
        })
        .collect();
    let exit = b.add_state("out", Owner::Adam, None).expect("fresh");
    for &v in &choices {
        b.add_edge(entry, v);
        b.add_edge(v, exit);
    }
    b.add_edge(exit, entry);
    Ok(Gadget { arena: b.build().expect("gadget is well formed"), entry, exit })
}
