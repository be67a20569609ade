use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::arena::{Arena, ArenaBuilder, StateId};
use crate::error::StrategyError;
use crate::player::{Owner, Player};
use crate::scalar::Probability;

use super::{MemoryId, StrategyTransducer};

/// A node of a product: a configuration `(s, m)`, or an intermediate node
/// where the opponent has chosen `target` from `(s, m)` and the memory
/// update is still being drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductNode {
    Config { state: StateId, memory: MemoryId },
    Pending { state: StateId, memory: MemoryId, target: StateId },
}

impl ProductNode {
    pub fn state(&self) -> StateId {
        match *self {
            ProductNode::Config { state, .. } | ProductNode::Pending { state, .. } => state,
        }
    }

    pub fn memory(&self) -> MemoryId {
        match *self {
            ProductNode::Config { memory, .. } | ProductNode::Pending { memory, .. } => memory,
        }
    }
}

/// An arena composed with one player's strategy. The strategy owner's
/// states become random; the opponent keeps their states. Only nodes
/// reachable from the initial configurations are built.
#[derive(Clone, Debug)]
pub struct ProductMdp<P> {
    pub arena: Arena<P>,
    pub nodes: Vec<ProductNode>,
    pub initial: Vec<usize>,
    /// The player who still chooses moves.
    pub adversary: Player,
    /// Names of the underlying arena states and memory states.
    pub state_names: Vec<String>,
    pub memory_names: Vec<String>,
    index: HashMap<ProductNode, usize>,
}

impl<P: Probability> ProductMdp<P> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_id(&self, node: ProductNode) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn config_id(&self, state: StateId, memory: MemoryId) -> Option<usize> {
        self.node_id(ProductNode::Config { state, memory })
    }
}

/// Product from every state of `starts` with the strategy's initial memory.
pub fn product<P: Probability>(
    arena: &Arena<P>,
    strategy: &StrategyTransducer<P>,
    starts: impl IntoIterator<Item = StateId>,
) -> Result<ProductMdp<P>, StrategyError> {
    let m0 = strategy.initial();
    product_from(arena, strategy, starts.into_iter().map(|s| (s, m0)))
}

/// Product from explicit initial configurations.
pub fn product_from<P: Probability>(
    arena: &Arena<P>,
    strategy: &StrategyTransducer<P>,
    initial: impl IntoIterator<Item = (StateId, MemoryId)>,
) -> Result<ProductMdp<P>, StrategyError> {
    let owner = strategy.owner();
    let mut nodes: Vec<ProductNode> = Vec::new();
    let mut index: HashMap<ProductNode, usize> = HashMap::new();
    let mut edges: Vec<Vec<(usize, P)>> = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |n: ProductNode, nodes: &mut Vec<ProductNode>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(n).or_insert_with(|| {
            nodes.push(n);
            queue.push_back(nodes.len() - 1);
            nodes.len() - 1
        })
    };

    let mut init_ids = Vec::new();
    for (s, m) in initial {
        let id = intern(ProductNode::Config { state: s, memory: m }, &mut nodes, &mut queue);
        if !init_ids.contains(&id) {
            init_ids.push(id);
        }
    }

    while let Some(id) = queue.pop_front() {
        let node = nodes[id];
        let mut out: Vec<(usize, P)> = Vec::new();
        match node {
            ProductNode::Pending { state, memory, target } => {
                for (m2, q) in strategy.update(state, memory) {
                    let c = intern(ProductNode::Config { state: target, memory: m2 }, &mut nodes, &mut queue);
                    out.push((c, q));
                }
            }
            ProductNode::Config { state, memory } => {
                let update = strategy.update(state, memory);
                let moves: Option<Vec<(StateId, P)>> = match arena.owner(state) {
                    o if o.is(owner) => Some(
                        strategy
                            .next(state, memory)
                            .ok_or_else(|| {
                                StrategyError::Undefined(
                                    arena.name(state).to_string(),
                                    strategy.memory_name(memory).to_string(),
                                )
                            })?
                            .to_vec(),
                    ),
                    Owner::Random => Some(arena.delta(state).to_vec()),
                    _ => None,
                };
                match moves {
                    Some(moves) => {
                        for (t, p) in moves {
                            for (m2, q) in &update {
                                let c = intern(
                                    ProductNode::Config { state: t, memory: *m2 },
                                    &mut nodes,
                                    &mut queue,
                                );
                                out.push((c, p.clone() * q.clone()));
                            }
                        }
                    }
                    None => {
                        for &t in arena.successors(state) {
                            let n = match update.as_slice() {
                                [(m2, _)] => ProductNode::Config { state: t, memory: *m2 },
                                _ => ProductNode::Pending { state, memory, target: t },
                            };
                            let c = intern(n, &mut nodes, &mut queue);
                            out.push((c, P::one()));
                        }
                    }
                }
            }
        }
        if edges.len() <= id {
            edges.resize_with(id + 1, Vec::new);
        }
        edges[id] = out;
    }
    edges.resize_with(nodes.len(), Vec::new);

    let adversary = owner.opponent();
    let mut b = ArenaBuilder::new(arena.alphabet().clone());
    for (i, n) in nodes.iter().enumerate() {
        let (name, o, colour) = match *n {
            ProductNode::Config { state, memory } => {
                let o = match arena.owner(state) {
                    x if x.is(adversary) => Owner::from(adversary),
                    _ => Owner::Random,
                };
                (
                    format!("{}|{}", arena.name(state), strategy.memory_name(memory)),
                    o,
                    arena.colour(state),
                )
            }
            ProductNode::Pending { state, memory, target } => (
                format!(
                    "{}|{}>{}",
                    arena.name(state),
                    strategy.memory_name(memory),
                    arena.name(target)
                ),
                Owner::Random,
                None,
            ),
        };
        let id = match b.add_state_coloured(name.clone(), o, colour) {
            Ok(id) => id,
            // Arena names containing `|` can collide; disambiguate by index.
            Err(_) => b
                .add_state_coloured(format!("{name}#{i}"), o, colour)
                .expect("indexed names are unique"),
        };
        debug_assert_eq!(id, i);
    }
    for (i, out) in edges.into_iter().enumerate() {
        // Merge parallel edges (distinct moves leading to one node).
        let mut merged: BTreeMap<usize, P> = BTreeMap::new();
        for (c, p) in out {
            let e = merged.entry(c).or_insert_with(P::zero);
            *e = e.clone() + p;
        }
        for &c in merged.keys() {
            b.add_edge(i, c);
        }
        if matches!(nodes[i], ProductNode::Pending { .. })
            || b_owner_is_random(&nodes[i], arena, adversary)
        {
            b.set_delta(i, merged.into_iter().collect());
        }
    }
    Ok(ProductMdp {
        arena: b.build_unchecked(),
        nodes,
        initial: init_ids,
        adversary,
        state_names: arena.states().iter().map(|s| s.name.clone()).collect(),
        memory_names: strategy.memory_names().to_vec(),
        index,
    })
}

fn b_owner_is_random<P: Probability>(n: &ProductNode, arena: &Arena<P>, adversary: Player) -> bool {
    match *n {
        ProductNode::Config { state, .. } => !arena.owner(state).is(adversary),
        ProductNode::Pending { .. } => true,
    }
}

/// The arena where `player`'s states keep only the move chosen by a pure
/// memoryless strategy (states it leaves undefined keep all their moves).
pub fn fix_positional<P: Probability>(
    arena: &Arena<P>,
    strategy: &StrategyTransducer<P>,
) -> Result<Arena<P>, StrategyError> {
    let moves = super::positional_moves(strategy).ok_or_else(|| {
        StrategyError::BadDistribution("strategy is not pure memoryless".into())
    })?;
    let mut b = ArenaBuilder::new(arena.alphabet().clone());
    for st in arena.states() {
        b.add_state_coloured(st.name.clone(), st.owner, st.colour)
            .expect("names are unique");
    }
    for s in 0..arena.len() {
        match moves.get(&s) {
            Some(&t) if arena.owner(s).is(strategy.owner()) => {
                if !arena.has_edge(s, t) {
                    return Err(StrategyError::IllegalMove(
                        arena.name(s).to_string(),
                        arena.name(t).to_string(),
                    ));
                }
                b.add_edge(s, t)
            }
            _ => {
                for &t in arena.successors(s) {
                    b.add_edge(s, t);
                }
            }
        }
        if arena.owner(s) == Owner::Random {
            b.set_delta(s, arena.delta(s).to_vec());
        }
    }
    Ok(b.build_unchecked())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::colour::ColourAlphabet;
    use crate::Rational;

    fn triangle() -> Arena {
        // e (Eve) -> x | y ; x (Adam) -> e | y ; y (random) -> e
        let mut b = ArenaBuilder::new(ColourAlphabet::letters(2));
        let e = b.add_state("e", Owner::Eve, None).unwrap();
        let x = b.add_state("x", Owner::Adam, Some("a")).unwrap();
        let y = b.add_state("y", Owner::Random, Some("b")).unwrap();
        for (f, t) in [(e, x), (e, y), (x, e), (x, y), (y, e)] {
            b.add_edge(f, t);
        }
        b.fill_uniform_delta();
        b.build().unwrap()
    }

    #[test]
    fn memoryless_pure_strategy_leaves_one_successor() {
        let a = triangle();
        let s = super::super::pure_memoryless(&a, Player::Eve, &BTreeMap::from([(0, 1)])).unwrap();
        let p = product(&a, &s, 0..a.len()).unwrap();
        assert_eq!(p.len(), 3);
        let e = p.config_id(0, 0).unwrap();
        assert_eq!(p.arena.successors(e), &[p.config_id(1, 0).unwrap()]);
        assert_eq!(p.arena.owner(e), Owner::Random);
        assert_eq!(p.arena.owner(p.config_id(1, 0).unwrap()), Owner::Adam);
        assert!(p.arena.validate().is_empty());
    }

    #[test]
    fn two_memory_states_bound_the_size() {
        let a = triangle();
        let mut s = StrategyTransducer::<Rational>::with_size(Player::Eve, 2, 0);
        for m in 0..2 {
            s.set_next(0, m, vec![(1 + m, Rational::new(1, 1))]);
            s.set_update(0, m, vec![(0, Rational::new(1, 2)), (1, Rational::new(1, 2))]);
        }
        s.set_update(1, 0, vec![(0, Rational::new(1, 3)), (1, Rational::new(2, 3))]);
        let p = product(&a, &s, 0..a.len()).unwrap();
        let configs = p
            .nodes
            .iter()
            .filter(|n| matches!(n, ProductNode::Config { .. }))
            .count();
        assert!(configs <= 6);
        // The Adam state with a random update goes through pending nodes.
        assert!(p.nodes.iter().any(|n| matches!(n, ProductNode::Pending { .. })));
        assert!(p.arena.validate().is_empty(), "{:?}", p.arena.validate());
    }

    #[test]
    fn undefined_moves_are_reported() {
        let a = triangle();
        let s = StrategyTransducer::<Rational>::with_size(Player::Eve, 1, 0);
        assert!(matches!(
            product(&a, &s, [0]),
            Err(StrategyError::Undefined(..))
        ));
    }

    #[test]
    fn fixing_a_positional_strategy_prunes_edges() {
        let a = triangle();
        let t = super::super::pure_memoryless(&a, Player::Adam, &BTreeMap::from([(1, 2)])).unwrap();
        let f = fix_positional(&a, &t).unwrap();
        assert_eq!(f.successors(1), &[2]);
        assert_eq!(f.successors(0), &[1, 2]);
    }
}
