//! Finite stochastic arenas with Eve, Adam and random states.

mod attractor;

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::colour::{Colour, ColourAlphabet, ColourSet};
use crate::error::ArenaError;
use crate::player::Owner;
use crate::scalar::Probability;
use crate::Rational;

pub use attractor::{attractor, attractor_within, is_trap, is_trap_within, AttractorResult};

/// Index of a state in its arena.
pub type StateId = usize;

/// A set of states of one arena.
pub type StateSet = FixedBitSet;

/// Builds a state set of capacity `n` from indices.
pub fn state_set(n: usize, states: impl IntoIterator<Item = StateId>) -> StateSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend(states);
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub owner: Owner,
    pub colour: Option<Colour>,
}

/// A finite arena: a graph whose states are split between Eve, Adam and
/// chance, with a distribution at every random state and a partial colouring.
///
/// Successor lists are sorted by state index, which is the canonical order
/// used for tie-breaking everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Arena<P = Rational> {
    alphabet: ColourAlphabet,
    states: Vec<State>,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
    delta: Vec<Vec<(StateId, P)>>,
    index: HashMap<String, StateId>,
}

/// A broken arena invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoSuccessor { state: String },
    MissingDelta { state: String },
    DeltaOnNonRandom { state: String },
    DeltaSupportMismatch { state: String },
    NonPositiveProbability { state: String, target: String },
    DeltaSum { state: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSuccessor { state } => write!(f, "state `{state}` has no successor"),
            Violation::MissingDelta { state } => {
                write!(f, "random state `{state}` has no distribution")
            }
            Violation::DeltaOnNonRandom { state } => {
                write!(f, "non-random state `{state}` has a distribution")
            }
            Violation::DeltaSupportMismatch { state } => write!(
                f,
                "support of the distribution at `{state}` differs from its successors"
            ),
            Violation::NonPositiveProbability { state, target } => {
                write!(f, "probability {state} → {target} is not positive")
            }
            Violation::DeltaSum { state } => {
                write!(f, "distribution at `{state}` does not sum to one")
            }
        }
    }
}

/// Incremental construction of an [`Arena`].
#[derive(Clone, Debug)]
pub struct ArenaBuilder<P = Rational> {
    alphabet: ColourAlphabet,
    states: Vec<State>,
    edges: Vec<Vec<StateId>>,
    delta: Vec<Option<Vec<(StateId, P)>>>,
    index: HashMap<String, StateId>,
}

impl<P: Probability> ArenaBuilder<P> {
    pub fn new(alphabet: ColourAlphabet) -> Self {
        ArenaBuilder {
            alphabet,
            states: Vec::new(),
            edges: Vec::new(),
            delta: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &ColourAlphabet {
        &self.alphabet
    }

    pub fn add_state(
        &mut self,
        name: impl Into<String>,
        owner: Owner,
        colour: Option<&str>,
    ) -> Result<StateId, ArenaError> {
        let colour = match colour {
            Some(c) => Some(
                self.alphabet
                    .lookup(c)
                    .ok_or_else(|| ArenaError::UnknownColour(c.to_string()))?,
            ),
            None => None,
        };
        self.push_state(name.into(), owner, colour)
    }

    pub fn add_state_coloured(
        &mut self,
        name: impl Into<String>,
        owner: Owner,
        colour: Option<Colour>,
    ) -> Result<StateId, ArenaError> {
        if let Some(c) = colour {
            if c >= self.alphabet.len() {
                return Err(ArenaError::UnknownColour(c.to_string()));
            }
        }
        self.push_state(name.into(), owner, colour)
    }

    fn push_state(
        &mut self,
        name: String,
        owner: Owner,
        colour: Option<Colour>,
    ) -> Result<StateId, ArenaError> {
        if self.index.contains_key(&name) {
            return Err(ArenaError::DuplicateState(name));
        }
        let id = self.states.len();
        self.index.insert(name.clone(), id);
        self.states.push(State {
            name,
            owner,
            colour,
        });
        self.edges.push(Vec::new());
        self.delta.push(None);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Result<StateId, ArenaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ArenaError::UnknownState(name.to_string()))
    }

    pub fn add_edge(&mut self, from: StateId, to: StateId) {
        self.edges[from].push(to);
    }

    pub fn add_edge_by_name(&mut self, from: &str, to: &str) -> Result<(), ArenaError> {
        let (f, t) = (self.id(from)?, self.id(to)?);
        self.add_edge(f, t);
        Ok(())
    }

    pub fn set_delta(&mut self, state: StateId, dist: Vec<(StateId, P)>) {
        self.delta[state] = Some(dist);
    }

    /// Gives every random state without a distribution the uniform one over
    /// its successors.
    pub fn fill_uniform_delta(&mut self) {
        for s in 0..self.states.len() {
            if self.states[s].owner == Owner::Random && self.delta[s].is_none() {
                let mut succ = self.edges[s].clone();
                succ.sort_unstable();
                succ.dedup();
                let k = succ.len() as u64;
                if k > 0 {
                    self.delta[s] = Some(succ.into_iter().map(|t| (t, P::from_ratio(1, k))).collect());
                }
            }
        }
    }

    /// Assembles the arena without checking its invariants; see
    /// [`Arena::validate`] and [`ArenaBuilder::build`].
    pub fn build_unchecked(self) -> Arena<P> {
        let n = self.states.len();
        let mut succ = self.edges;
        for s in succ.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        let mut pred = vec![Vec::new(); n];
        for (s, ts) in succ.iter().enumerate() {
            for &t in ts {
                pred[t].push(s);
            }
        }
        let delta = self
            .delta
            .into_iter()
            .map(|d| {
                let mut d = d.unwrap_or_default();
                d.sort_by_key(|(t, _)| *t);
                d
            })
            .collect();
        Arena {
            alphabet: self.alphabet,
            states: self.states,
            succ,
            pred,
            delta,
            index: self.index,
        }
    }

    /// Assembles and validates the arena.
    pub fn build(self) -> Result<Arena<P>, ArenaError> {
        let arena = self.build_unchecked();
        let violations = arena.validate();
        if violations.is_empty() {
            Ok(arena)
        } else {
            Err(ArenaError::Invalid(violations))
        }
    }
}

impl<P: Probability> Arena<P> {
    pub fn alphabet(&self) -> &ColourAlphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, s: StateId) -> &State {
        &self.states[s]
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.states[s].name
    }

    pub fn owner(&self, s: StateId) -> Owner {
        self.states[s].owner
    }

    pub fn colour(&self, s: StateId) -> Option<Colour> {
        self.states[s].colour
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.pred[s]
    }

    pub fn has_edge(&self, s: StateId, t: StateId) -> bool {
        self.succ[s].binary_search(&t).is_ok()
    }

    /// Distribution at a random state; empty for other states.
    pub fn delta(&self, s: StateId) -> &[(StateId, P)] {
        &self.delta[s]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// True when there are no random states.
    pub fn is_two_player(&self) -> bool {
        self.states.iter().all(|s| s.owner != Owner::Random)
    }

    pub fn all_states(&self) -> StateSet {
        let mut s = StateSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::with_capacity(self.len())
    }

    /// Colours of the coloured states in `set`.
    pub fn colours_of(&self, set: &StateSet) -> ColourSet {
        set.ones().filter_map(|s| self.states[s].colour).collect()
    }

    /// States of `domain` whose colour lies in `colours`.
    pub fn coloured_in(&self, domain: &StateSet, colours: ColourSet) -> StateSet {
        let mut out = self.empty_set();
        out.extend(
            domain
                .ones()
                .filter(|&s| self.states[s].colour.is_some_and(|c| colours.contains(c))),
        );
        out
    }

    /// Lists every broken invariant; an empty list means the arena is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (s, st) in self.states.iter().enumerate() {
            let name = || st.name.clone();
            if self.succ[s].is_empty() {
                out.push(Violation::NoSuccessor { state: name() });
            }
            let delta = &self.delta[s];
            if st.owner != Owner::Random {
                if !delta.is_empty() {
                    out.push(Violation::DeltaOnNonRandom { state: name() });
                }
                continue;
            }
            if delta.is_empty() {
                out.push(Violation::MissingDelta { state: name() });
                continue;
            }
            let mut total = P::zero();
            for (t, p) in delta {
                if !p.is_positive() {
                    out.push(Violation::NonPositiveProbability {
                        state: name(),
                        target: self.states[*t].name.clone(),
                    });
                }
                total = total + p.clone();
            }
            let mut support: Vec<StateId> = delta.iter().map(|(t, _)| *t).collect();
            support.dedup();
            if support != self.succ[s] || support.len() != delta.len() {
                out.push(Violation::DeltaSupportMismatch { state: name() });
            }
            if !total.is_unit() {
                out.push(Violation::DeltaSum { state: name() });
            }
        }
        out
    }

    /// Checks that `set` is live and δ-closed and returns the sub-arena it
    /// induces.
    pub fn subarena(&self, set: &StateSet) -> Result<SubArena<'_, P>, ArenaError> {
        for s in set.ones() {
            let succ = &self.succ[s];
            if self.states[s].owner == Owner::Random {
                if succ.iter().any(|&t| !set.contains(t)) {
                    return Err(ArenaError::NotClosed(self.states[s].name.clone()));
                }
            } else if !succ.iter().any(|&t| set.contains(t)) {
                return Err(ArenaError::NotLive(self.states[s].name.clone()));
            }
        }
        Ok(SubArena {
            parent: self,
            states: set.clone(),
        })
    }

    /// Graphviz rendering: circles for Eve, boxes for Adam, triangles for
    /// random states; random edges carry their probability.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph arena {\n");
        for (i, s) in self.states.iter().enumerate() {
            let shape = match s.owner {
                Owner::Eve => "circle",
                Owner::Adam => "box",
                Owner::Random => "triangle",
            };
            let label = match s.colour {
                Some(c) => format!("{}\\n{}", s.name, self.alphabet.name(c)),
                None => s.name.clone(),
            };
            out.push_str(&format!("  s{i} [label=\"{label}\", shape={shape}];\n"));
        }
        for (i, s) in self.states.iter().enumerate() {
            if s.owner == Owner::Random {
                for (t, p) in &self.delta[i] {
                    out.push_str(&format!(
                        "  s{i} -> s{t} [label=\"{}\"];\n",
                        p.format_probability()
                    ));
                }
            } else {
                for t in &self.succ[i] {
                    out.push_str(&format!("  s{i} -> s{t};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Converts the probability scalar type.
    pub fn map_probabilities<Q: Probability>(&self, f: impl Fn(&P) -> Q) -> Arena<Q> {
        Arena {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            succ: self.succ.clone(),
            pred: self.pred.clone(),
            delta: self
                .delta
                .iter()
                .map(|d| d.iter().map(|(t, p)| (*t, f(p))).collect())
                .collect(),
            index: self.index.clone(),
        }
    }
}

/// A live, δ-closed subset of an arena.
#[derive(Clone, Debug)]
pub struct SubArena<'a, P = Rational> {
    parent: &'a Arena<P>,
    states: StateSet,
}

impl<'a, P: Probability> SubArena<'a, P> {
    pub fn parent(&self) -> &'a Arena<P> {
        self.parent
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    /// A standalone arena restricted to the subset, together with the map
    /// from new state indices to parent indices.
    pub fn materialise(&self) -> (Arena<P>, Vec<StateId>) {
        let keep: Vec<StateId> = self.states.ones().collect();
        let mut new_id = vec![usize::MAX; self.parent.len()];
        for (i, &s) in keep.iter().enumerate() {
            new_id[s] = i;
        }
        let mut b = ArenaBuilder::new(self.parent.alphabet.clone());
        for &s in &keep {
            let st = self.parent.state(s);
            b.add_state_coloured(st.name.clone(), st.owner, st.colour)
                .expect("names are unique in the parent");
        }
        for &s in &keep {
            for &t in self.parent.successors(s) {
                if self.states.contains(t) {
                    b.add_edge(new_id[s], new_id[t]);
                }
            }
            if self.parent.owner(s) == Owner::Random {
                let d = self
                    .parent
                    .delta(s)
                    .iter()
                    .map(|(t, p)| (new_id[*t], p.clone()))
                    .collect();
                b.set_delta(new_id[s], d);
            }
        }
        (b.build_unchecked(), keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> Arena {
        let mut b = ArenaBuilder::new(ColourAlphabet::letters(1));
        let s = b.add_state("s0", Owner::Eve, Some("a")).unwrap();
        let r = b.add_state("r0", Owner::Random, None).unwrap();
        b.add_edge(s, r);
        b.add_edge(r, s);
        b.set_delta(r, vec![(s, Rational::from_ratio(1, 1))]);
        b.build().unwrap()
    }

    #[test]
    fn well_formed_arena_validates() {
        assert!(two_state().validate().is_empty());
    }

    #[test]
    fn support_mismatch_names_the_state() {
        let mut b = ArenaBuilder::<Rational>::new(ColourAlphabet::letters(1));
        let s = b.add_state("s0", Owner::Eve, None).unwrap();
        let t = b.add_state("s1", Owner::Eve, None).unwrap();
        let r = b.add_state("r0", Owner::Random, None).unwrap();
        b.add_edge(s, r);
        b.add_edge(t, r);
        b.add_edge(r, s);
        b.add_edge(r, t);
        b.set_delta(r, vec![(s, Rational::from_ratio(1, 1))]);
        let v = b.build_unchecked().validate();
        assert_eq!(
            v,
            vec![Violation::DeltaSupportMismatch {
                state: "r0".into()
            }]
        );
    }

    #[test]
    fn sink_state_is_reported() {
        let mut b = ArenaBuilder::<Rational>::new(ColourAlphabet::letters(1));
        let s = b.add_state("s0", Owner::Eve, None).unwrap();
        let t = b.add_state("sink", Owner::Adam, None).unwrap();
        b.add_edge(s, t);
        match b.build() {
            Err(ArenaError::Invalid(v)) => {
                assert_eq!(v, vec![Violation::NoSuccessor { state: "sink".into() }])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_sums_and_zero_probabilities_are_reported() {
        let mut b = ArenaBuilder::<Rational>::new(ColourAlphabet::letters(1));
        let s = b.add_state("s", Owner::Eve, None).unwrap();
        let r = b.add_state("r", Owner::Random, None).unwrap();
        b.add_edge(s, r);
        b.add_edge(r, s);
        b.set_delta(r, vec![(s, Rational::from_ratio(1, 2))]);
        assert_eq!(
            b.build_unchecked().validate(),
            vec![Violation::DeltaSum { state: "r".into() }]
        );
    }

    #[test]
    fn subarena_checks() {
        let a = two_state();
        let all = a.all_states();
        let sub = a.subarena(&all).unwrap();
        let (m, map) = sub.materialise();
        assert_eq!(m, a);
        assert_eq!(map, vec![0, 1]);

        // {r0} alone: the random state's only edge leaves the set.
        let only_r = state_set(2, [1]);
        assert_eq!(
            a.subarena(&only_r).unwrap_err(),
            ArenaError::NotClosed("r0".into())
        );
        let only_s = state_set(2, [0]);
        assert_eq!(
            a.subarena(&only_s).unwrap_err(),
            ArenaError::NotLive("s0".into())
        );
    }

    #[test]
    fn dot_shapes_follow_owners() {
        let dot = two_state().to_dot();
        assert!(dot.contains("shape=circle"));
        assert!(dot.contains("shape=triangle"));
        assert!(dot.contains("label=\"1/1\""));
    }
}
