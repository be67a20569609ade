//! Lower-bound arenas built from cropped Zielonka DAGs, with Eve's sure
//! strategy and Adam's branch strategies.
//!
//! Eve owns one state per Eve node and picks a child; Adam owns one state
//! per (Eve node, child) pair, where he either proceeds to the child's child
//! or stops. Stopping at `(E, A)` runs `Pick*(E)`, where Adam visits any
//! subset of `E`, then `Pick(E ∖ A)`, where he visits exactly one colour
//! outside `A`, and returns to the root. Eve leaves run `Pick*` on their
//! label. Only gadget states are coloured.

mod gadget;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, ArenaBuilder, StateId};
use crate::colour::{Colour, ColourAlphabet, ColourSet};
use crate::error::WitnessError;
use crate::player::{Owner, Player};
use crate::scalar::Probability;
use crate::strategy::{pure_memoryless, StrategyTransducer};
use crate::zielonka::{Branch, CroppedDag};
use crate::Rational;

pub use gadget::{pick_gadget, pick_star_gadget, Gadget};

/// Where a gadget instance is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    /// Adam stopped at the pair (parent, child).
    Stop { parent: usize, child: usize },
    /// The traversal reached a leaf.
    Leaf { node: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    PickStar,
    Pick,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Entry,
    Visit(Colour),
    Skip(Colour),
    Exit,
}

/// What a witness state stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Eve { node: usize },
    Pair { parent: usize, child: usize },
    /// The root when it is an Adam leaf (no Eve node exists).
    AdamLeaf { node: usize },
    Gadget { kind: GadgetKind, context: Context, part: Part },
}

/// `Pick` states: entry, one state per colour, exit.
pub type PickStates = (StateId, Vec<(Colour, StateId)>, StateId);

/// States of one `Pick*` instance followed, for stops, by a `Pick`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetStates {
    pub star_entry: StateId,
    /// `(colour, visit state, skip state)` in alphabet order.
    pub star_steps: Vec<(Colour, StateId, StateId)>,
    pub star_exit: StateId,
    pub pick: Option<PickStates>,
}

#[derive(Clone, Debug)]
pub struct WitnessArena<P = Rational> {
    pub arena: Arena<P>,
    pub root_state: StateId,
    /// Cropped-DAG Eve node → state.
    pub eve_nodes: BTreeMap<usize, StateId>,
    /// (Eve parent, Adam child) → state.
    pub pair_states: BTreeMap<(usize, usize), StateId>,
    pub gadgets: BTreeMap<Context, GadgetStates>,
    /// Role of every state.
    pub roles: Vec<Role>,
}

/// One line of the sidecar file describing a witness state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidecarEntry {
    pub state: String,
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub node: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parent: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub child: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub colour: Option<String>,
}

fn render(alphabet: &ColourAlphabet, set: ColourSet) -> String {
    alphabet.render(set)
}

/// Builds the witness arena of a cropped DAG.
pub fn build_witness<P: Probability>(
    cropped: &CroppedDag,
    alphabet: &ColourAlphabet,
) -> Result<WitnessArena<P>, WitnessError> {
    let mut b: ArenaBuilder<P> = ArenaBuilder::new(alphabet.clone());
    let mut roles = Vec::new();
    let mut add = |b: &mut ArenaBuilder<P>, name: String, owner: Owner, colour: Option<Colour>, role: Role| {
        let id = b.add_state_coloured(name, owner, colour).expect("witness names are unique");
        roles.push(role);
        id
    };
    let label = |n: usize| render(alphabet, cropped.label(n));

    let mut eve_nodes = BTreeMap::new();
    let mut pair_states = BTreeMap::new();
    let root = cropped.root();
    let root_is_adam_leaf = cropped.node(root).owner == Player::Adam;
    let root_state = if root_is_adam_leaf {
        add(&mut b, format!("L[{}]", label(root)), Owner::Adam, None, Role::AdamLeaf { node: root })
    } else {
        usize::MAX
    };
    for (i, n) in cropped.nodes().iter().enumerate() {
        if n.owner == Player::Eve {
            let s = add(&mut b, format!("E[{}]", label(i)), Owner::Eve, None, Role::Eve { node: i });
            eve_nodes.insert(i, s);
        }
    }
    for (i, n) in cropped.nodes().iter().enumerate() {
        if n.owner != Player::Eve {
            continue;
        }
        for &c in &n.children {
            let s = add(
                &mut b,
                format!("A[{}/{}]", label(i), label(c)),
                Owner::Adam,
                None,
                Role::Pair { parent: i, child: c },
            );
            pair_states.insert((i, c), s);
        }
    }
    let root_state = if root_is_adam_leaf { root_state } else { eve_nodes[&root] };

    let mut gadgets = BTreeMap::new();
    let mut contexts = Vec::new();
    for (i, n) in cropped.nodes().iter().enumerate() {
        if n.is_leaf() && (n.owner == Player::Eve || i == root) {
            contexts.push(Context::Leaf { node: i });
        }
        if n.owner == Player::Eve {
            for &c in &n.children {
                contexts.push(Context::Stop { parent: i, child: c });
            }
        }
    }
    for ctx in contexts {
        let (tag, star_set, pick_set) = match ctx {
            Context::Leaf { node } => (label(node), cropped.label(node), None),
            Context::Stop { parent, child } => {
                let rest = cropped.label(parent).difference(cropped.label(child));
                if rest.is_empty() {
                    return Err(WitnessError::EmptyChoice);
                }
                (format!("{}/{}", label(parent), label(child)), cropped.label(parent), Some(rest))
            }
        };
        let g = |part| Role::Gadget { kind: GadgetKind::PickStar, context: ctx, part };
        let star_entry = add(&mut b, format!("{tag}*in"), Owner::Adam, None, g(Part::Entry));
        let mut star_steps = Vec::new();
        for c in star_set.iter() {
            let cn = alphabet.name(c);
            let v = add(&mut b, format!("{tag}*+{cn}"), Owner::Adam, Some(c), g(Part::Visit(c)));
            let k = add(&mut b, format!("{tag}*-{cn}"), Owner::Adam, None, g(Part::Skip(c)));
            star_steps.push((c, v, k));
        }
        let star_exit = add(&mut b, format!("{tag}*out"), Owner::Adam, None, g(Part::Exit));
        let mut prev = vec![star_entry];
        for &(_, v, k) in &star_steps {
            for &p in &prev {
                b.add_edge(p, v);
                b.add_edge(p, k);
            }
            prev = vec![v, k];
        }
        for &p in &prev {
            b.add_edge(p, star_exit);
        }
        let pick = match pick_set {
            None => {
                b.add_edge(star_exit, root_state);
                None
            }
            Some(set) => {
                let g = |part| Role::Gadget { kind: GadgetKind::Pick, context: ctx, part };
                let entry = add(&mut b, format!("{tag}!in"), Owner::Adam, None, g(Part::Entry));
                let exit_name = format!("{tag}!out");
                let mut choices = Vec::new();
                for c in set.iter() {
                    let v = add(
                        &mut b,
                        format!("{tag}!{}", alphabet.name(c)),
                        Owner::Adam,
                        Some(c),
                        g(Part::Visit(c)),
                    );
                    choices.push((c, v));
                }
                let exit = add(&mut b, exit_name, Owner::Adam, None, g(Part::Exit));
                b.add_edge(star_exit, entry);
                for &(_, v) in &choices {
                    b.add_edge(entry, v);
                    b.add_edge(v, exit);
                }
                b.add_edge(exit, root_state);
                Some((entry, choices, exit))
            }
        };
        gadgets.insert(ctx, GadgetStates { star_entry, star_steps, star_exit, pick });
    }

    if root_is_adam_leaf {
        b.add_edge(root_state, gadgets[&Context::Leaf { node: root }].star_entry);
    }
    for (&i, &s) in &eve_nodes {
        let n = cropped.node(i);
        if n.is_leaf() {
            b.add_edge(s, gadgets[&Context::Leaf { node: i }].star_entry);
        }
        for &c in &n.children {
            b.add_edge(s, pair_states[&(i, c)]);
        }
    }
    for (&(e, a), &s) in &pair_states {
        if let Some(&next) = cropped.node(a).children.first() {
            b.add_edge(s, eve_nodes[&next]);
        }
        b.add_edge(s, gadgets[&Context::Stop { parent: e, child: a }].star_entry);
    }
    let arena = b.build().expect("witness arenas are well formed");
    Ok(WitnessArena { arena, root_state, eve_nodes, pair_states, gadgets, roles })
}

impl<P: Probability> WitnessArena<P> {
    /// Sidecar description of every state.
    pub fn sidecar(&self, cropped: &CroppedDag) -> Vec<SidecarEntry> {
        let alphabet = self.arena.alphabet();
        let names = |n: usize| Some(alphabet.names_of(cropped.label(n)));
        self.roles
            .iter()
            .enumerate()
            .map(|(s, role)| {
                let mut e = SidecarEntry {
                    state: self.arena.name(s).to_string(),
                    role: String::new(),
                    node: None,
                    parent: None,
                    child: None,
                    colour: None,
                };
                match *role {
                    Role::Eve { node } => {
                        e.role = "eve_node".into();
                        e.node = names(node);
                    }
                    Role::AdamLeaf { node } => {
                        e.role = "adam_leaf".into();
                        e.node = names(node);
                    }
                    Role::Pair { parent, child } => {
                        e.role = "pair".into();
                        e.parent = names(parent);
                        e.child = names(child);
                    }
                    Role::Gadget { kind, context, part } => {
                        let k = match kind {
                            GadgetKind::PickStar => "pick_star",
                            GadgetKind::Pick => "pick",
                        };
                        let (p, c) = match part {
                            Part::Entry => ("entry", None),
                            Part::Visit(c) => ("visit", Some(c)),
                            Part::Skip(c) => ("skip", Some(c)),
                            Part::Exit => ("exit", None),
                        };
                        e.role = format!("{k}_{p}");
                        e.colour = c.map(|c| alphabet.name(c).to_string());
                        match context {
                            Context::Leaf { node } => e.node = names(node),
                            Context::Stop { parent, child } => {
                                e.parent = names(parent);
                                e.child = names(child);
                            }
                        }
                    }
                }
                e
            })
            .collect()
    }
}

/// Name of a branch as its labels joined by `·`.
pub fn branch_name(cropped: &CroppedDag, alphabet: &ColourAlphabet, b: &Branch) -> String {
    b.nodes()
        .iter()
        .map(|&n| alphabet.render(cropped.label(n)))
        .collect::<Vec<_>>()
        .join("·")
}

/// Eve's pure sure strategy, with one memory state per branch.
///
/// In memory `b`, Eve moves along `b`. When Adam stops at `(E_i, A)` and
/// `E_i` has several children, the memory switches to the first branch
/// through `E_1 A_1 … E_i A'` where `A'` follows `A` cyclically among the
/// children of `E_i`.
pub fn sure_strategy<P: Probability>(
    cropped: &CroppedDag,
    witness: &WitnessArena<P>,
) -> StrategyTransducer<P> {
    let branches = cropped.branches();
    let alphabet = witness.arena.alphabet();
    let names = branches.iter().map(|b| branch_name(cropped, alphabet, b)).collect();
    let mut st = StrategyTransducer::new(Player::Eve, names, 0).expect("branches are distinct");
    for (&node, &s) in &witness.eve_nodes {
        let n = cropped.node(node);
        for (m, b) in branches.iter().enumerate() {
            let target = match b.position(node) {
                _ if n.is_leaf() => witness.gadgets[&Context::Leaf { node }].star_entry,
                Some(p) => witness.pair_states[&(node, b.nodes()[p + 1])],
                None => witness.pair_states[&(node, n.children[0])],
            };
            st.set_next(s, m, vec![(target, P::one())]);
        }
    }
    for (ctx, g) in &witness.gadgets {
        let Context::Stop { parent, child } = *ctx else { continue };
        let kids = &cropped.node(parent).children;
        if kids.len() < 2 {
            continue;
        }
        let k = kids.iter().position(|&c| c == child).expect("child of parent");
        let following = kids[(k + 1) % kids.len()];
        for (m, b) in branches.iter().enumerate() {
            let Some(p) = b.position(parent) else { continue };
            let mut prefix = b.nodes()[..=p].to_vec();
            prefix.push(following);
            let to = branches
                .iter()
                .position(|x| x.nodes().starts_with(&prefix))
                .expect("every prefix extends to a branch");
            if to != m {
                st.set_update(g.star_entry, m, vec![(to, P::one())]);
            }
        }
    }
    st
}

/// Adam's positional strategy punishing any deviation from branch `b`.
///
/// At `(E_i, A)` with `A ≠ A_i` he stops and visits exactly the colours of
/// `A_i`; at `(E_i, A_i)` he proceeds; at the end of the branch he visits
/// all of `E_ℓ`. Elsewhere he takes the first successor.
pub fn branch_strategy<P: Probability>(
    cropped: &CroppedDag,
    b: &Branch,
    witness: &WitnessArena<P>,
) -> Result<StrategyTransducer<P>, WitnessError> {
    if !cropped.branches().contains(b) {
        return Err(WitnessError::BranchMismatch);
    }
    let arena = &witness.arena;
    let mut moves: BTreeMap<StateId, StateId> = BTreeMap::new();
    for s in 0..arena.len() {
        if arena.owner(s) == Owner::Adam {
            moves.insert(s, arena.successors(s)[0]);
        }
    }
    let nodes = b.nodes();
    let steer = |g: &GadgetStates, star: ColourSet, pick: Option<Colour>, moves: &mut BTreeMap<_, _>| {
        let mut prev = g.star_entry;
        for &(c, v, k) in &g.star_steps {
            let next = if star.contains(c) { v } else { k };
            moves.insert(prev, next);
            prev = next;
        }
        moves.insert(prev, g.star_exit);
        if let (Some((entry, choices, _)), Some(c)) = (&g.pick, pick) {
            let v = choices.iter().find(|x| x.0 == c).expect("pick colour").1;
            moves.insert(g.star_exit, *entry);
            moves.insert(*entry, v);
        }
    };
    for (p, &e) in nodes.iter().enumerate() {
        if cropped.node(e).owner != Player::Eve {
            continue;
        }
        let label = cropped.label(e);
        match nodes.get(p + 1) {
            None => steer(&witness.gadgets[&Context::Leaf { node: e }], label, None, &mut moves),
            Some(&ai) => {
                let ai_label = cropped.label(ai);
                for &a in &cropped.node(e).children {
                    let pair = witness.pair_states[&(e, a)];
                    let g = &witness.gadgets[&Context::Stop { parent: e, child: a }];
                    let a_label = cropped.label(a);
                    if a != ai {
                        let d = ai_label.difference(a_label).iter().next().ok_or(WitnessError::EmptyChoice)?;
                        moves.insert(pair, g.star_entry);
                        steer(g, ai_label, Some(d), &mut moves);
                    } else if let Some(&next) = cropped.node(ai).children.first() {
                        moves.insert(pair, witness.eve_nodes[&next]);
                    } else {
                        let d = label.difference(a_label).iter().next().ok_or(WitnessError::EmptyChoice)?;
                        moves.insert(pair, g.star_entry);
                        steer(g, label, Some(d), &mut moves);
                    }
                }
            }
        }
    }
    if cropped.node(cropped.root()).owner == Player::Adam {
        let root = cropped.root();
        steer(&witness.gadgets[&Context::Leaf { node: root }], cropped.label(root), None, &mut moves);
    }
    Ok(pure_memoryless(arena, Player::Adam, &moves).expect("moves follow edges"))
}

#[cfg(test)]
mod tests;
