//! Almost-sure winning regions of stochastic Muller games, computed by
//! recursion over the Zielonka tree, and synthesis of strategies with at
//! most `r` memory states.

mod synthesis;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::arena::{attractor_within, is_trap_within, Arena, StateId, StateSet};
use crate::colour::ColourSet;
use crate::condition::MullerCondition;
use crate::error::SolveError;
use crate::player::Player;
use crate::scalar::Probability;
use crate::zielonka::ZielonkaTree;

pub use synthesis::{synthesize, synthesize_on_region, Synthesis};

/// Winning regions and the decomposition that produced Eve's region.
#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    #[serde(serialize_with = "ser_set")]
    pub eve_region: StateSet,
    #[serde(serialize_with = "ser_set")]
    pub adam_region: StateSet,
    pub trace: Trace,
}

/// How Eve's region was certified at one tree node, for the last pass of
/// the fixpoint (the one on the final region).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    /// A tree leaf: Eve wins everything at her leaves, nothing at Adam's.
    Leaf {
        #[serde(serialize_with = "ser_colours")]
        label: ColourSet,
        owner: Player,
        #[serde(serialize_with = "ser_set")]
        domain: StateSet,
    },
    /// An Adam node: embedded traps `A_i`, each won by Eve for a child
    /// label, whose cumulative attractors cover the domain.
    Adam {
        #[serde(serialize_with = "ser_colours")]
        label: ColourSet,
        #[serde(serialize_with = "ser_set")]
        domain: StateSet,
        parts: Vec<AdamPart>,
    },
    /// An Eve node: per child, the states to avoid, their attractor and the
    /// rest where the child condition is won.
    Eve {
        #[serde(serialize_with = "ser_colours")]
        label: ColourSet,
        #[serde(serialize_with = "ser_set")]
        domain: StateSet,
        children: Vec<EveChild>,
    },
}

impl Trace {
    pub fn domain(&self) -> &StateSet {
        match self {
            Trace::Leaf { domain, .. } | Trace::Adam { domain, .. } | Trace::Eve { domain, .. } => domain,
        }
    }

    pub fn label(&self) -> ColourSet {
        match self {
            Trace::Leaf { label, .. } | Trace::Adam { label, .. } | Trace::Eve { label, .. } => *label,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdamPart {
    /// Index of the child in the tree node.
    pub child: usize,
    #[serde(serialize_with = "ser_colours")]
    pub child_label: ColourSet,
    /// The trap `A_i`.
    #[serde(serialize_with = "ser_set")]
    pub trap: StateSet,
    /// `Attr_E(A_i)` inside the residual arena; the level of `A_i`.
    #[serde(serialize_with = "ser_set")]
    pub level: StateSet,
    /// Attractor moves on `level ∖ trap`.
    pub attractor: BTreeMap<StateId, StateId>,
    pub sub: Box<Trace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EveChild {
    pub child: usize,
    #[serde(serialize_with = "ser_colours")]
    pub child_label: ColourSet,
    pub leaf: bool,
    /// States coloured outside the child label.
    #[serde(serialize_with = "ser_set")]
    pub avoid: StateSet,
    /// `Attr_E(avoid)`.
    #[serde(serialize_with = "ser_set")]
    pub reach: StateSet,
    pub attractor: BTreeMap<StateId, StateId>,
    /// The rest of the domain, won for the child condition.
    pub sub: Box<Trace>,
}

fn ser_set<S: Serializer>(set: &StateSet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(set.ones())
}

fn ser_colours<S: Serializer>(set: &ColourSet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

/// Computes Eve's almost-sure winning region. On arenas without random
/// states this is her sure winning region.
pub fn solve<P: Probability>(arena: &Arena<P>, condition: &MullerCondition) -> Result<SolveResult, SolveError> {
    if arena.alphabet() != condition.alphabet() {
        return Err(SolveError::AlphabetMismatch);
    }
    let tree = ZielonkaTree::build(condition);
    let (eve_region, trace) = solve_in(arena, &arena.all_states(), &tree);
    let mut adam_region = arena.all_states();
    adam_region.difference_with(&eve_region);
    Ok(SolveResult {
        eve_region,
        adam_region,
        trace,
    })
}

fn minus(a: &StateSet, b: &StateSet) -> StateSet {
    let mut out = a.clone();
    out.difference_with(b);
    out
}

fn is_empty(s: &StateSet) -> bool {
    s.is_clear()
}

/// Eve's region inside the subarena `g`, whose colours lie in the node's
/// label.
fn solve_in<P: Probability>(arena: &Arena<P>, g: &StateSet, node: &ZielonkaTree) -> (StateSet, Trace) {
    if node.is_leaf() {
        let domain = match node.owner() {
            Player::Eve => g.clone(),
            Player::Adam => arena.empty_set(),
        };
        return (
            domain.clone(),
            Trace::Leaf {
                label: node.label(),
                owner: node.owner(),
                domain,
            },
        );
    }
    match node.owner() {
        Player::Eve => solve_eve(arena, g, node),
        Player::Adam => solve_adam(arena, g, node),
    }
}

fn solve_eve<P: Probability>(arena: &Arena<P>, g: &StateSet, node: &ZielonkaTree) -> (StateSet, Trace) {
    let mut g = g.clone();
    'restart: loop {
        let mut children = Vec::with_capacity(node.children().len());
        for (i, child) in node.children().iter().enumerate() {
            let avoid = arena.coloured_in(&g, node.label().difference(child.label()));
            let attr = attractor_within(arena, &g, Player::Eve, &avoid);
            let y = minus(&g, &attr.region);
            let (w, sub) = solve_in(arena, &y, child);
            let lost = minus(&y, &w);
            if !is_empty(&lost) {
                let adam = attractor_within(arena, &g, Player::Adam, &lost);
                g.difference_with(&adam.region);
                continue 'restart;
            }
            children.push(EveChild {
                child: i,
                child_label: child.label(),
                leaf: child.is_leaf(),
                avoid,
                reach: attr.region,
                attractor: attr.strategy,
                sub: Box::new(sub),
            });
        }
        let trace = Trace::Eve {
            label: node.label(),
            domain: g.clone(),
            children,
        };
        return (g, trace);
    }
}

fn solve_adam<P: Probability>(arena: &Arena<P>, g: &StateSet, node: &ZielonkaTree) -> (StateSet, Trace) {
    let mut g = g.clone();
    loop {
        let mut rest = g.clone();
        let mut parts = Vec::new();
        'grow: while !is_empty(&rest) {
            for (i, child) in node.children().iter().enumerate() {
                let avoid = arena.coloured_in(&rest, node.label().difference(child.label()));
                let adam = attractor_within(arena, &rest, Player::Adam, &avoid);
                let y = minus(&rest, &adam.region);
                if is_empty(&y) {
                    continue;
                }
                let (w, sub) = solve_in(arena, &y, child);
                if is_empty(&w) {
                    continue;
                }
                assert!(
                    is_trap_within(arena, &rest, Player::Adam, &w),
                    "embedded region is not a trap for Adam"
                );
                assert!(
                    arena.colours_of(&w).is_subset(child.label()),
                    "embedded region uses colours outside the child label"
                );
                let level = attractor_within(arena, &rest, Player::Eve, &w);
                rest.difference_with(&level.region);
                parts.push(AdamPart {
                    child: i,
                    child_label: child.label(),
                    trap: w,
                    level: level.region,
                    attractor: level.strategy,
                    sub: Box::new(sub),
                });
                continue 'grow;
            }
            break;
        }
        if is_empty(&rest) {
            let trace = Trace::Adam {
                label: node.label(),
                domain: g.clone(),
                parts,
            };
            return (g, trace);
        }
        let adam = attractor_within(arena, &g, Player::Adam, &rest);
        g.difference_with(&adam.region);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::colour::ColourAlphabet;
    use crate::player::Owner;

    #[test]
    fn self_loop_on_a_winning_colour() {
        let mut b = ArenaBuilder::<crate::Rational>::new(ColourAlphabet::letters(1));
        let s = b.add_state("s", Owner::Eve, Some("a")).unwrap();
        b.add_edge(s, s);
        let a = b.build().unwrap();
        let f = MullerCondition::from_names(&["a"], &[vec!["a"]], false).unwrap();
        let r = solve(&a, &f).unwrap();
        assert_eq!(r.eve_region.ones().collect::<Vec<_>>(), vec![0]);
        let lose = MullerCondition::from_names(&["a"], &[], true).unwrap();
        assert!(solve(&a, &lose).unwrap().eve_region.is_clear());
    }

    #[test]
    fn alphabet_mismatch() {
        let mut b = ArenaBuilder::<crate::Rational>::new(ColourAlphabet::letters(2));
        let s = b.add_state("s", Owner::Eve, None).unwrap();
        b.add_edge(s, s);
        let a = b.build().unwrap();
        let f = MullerCondition::from_names(&["a"], &[vec!["a"]], false).unwrap();
        assert_eq!(solve(&a, &f).unwrap_err(), SolveError::AlphabetMismatch);
    }

    #[test]
    fn random_choice_between_colours() {
        // A random state alternating between a and b: Inf = {a,b} surely.
        let mut b = ArenaBuilder::<crate::Rational>::new(ColourAlphabet::letters(2));
        let r = b.add_state("r", Owner::Random, None).unwrap();
        let x = b.add_state("x", Owner::Adam, Some("a")).unwrap();
        let y = b.add_state("y", Owner::Adam, Some("b")).unwrap();
        for (f, t) in [(r, x), (r, y), (x, r), (y, r)] {
            b.add_edge(f, t);
        }
        b.fill_uniform_delta();
        let a = b.build().unwrap();
        let both = MullerCondition::from_names(&["a", "b"], &[vec!["a", "b"]], false).unwrap();
        assert_eq!(solve(&a, &both).unwrap().eve_region.count_ones(..), 3);
        let only_a = MullerCondition::from_names(&["a", "b"], &[vec!["a"]], false).unwrap();
        assert!(solve(&a, &only_a).unwrap().eve_region.is_clear());
    }
}
