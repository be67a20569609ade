//! Exact qualitative verification of strategies, plus the independent
//! oracles used to cross-check the solver and the lower bounds.

pub mod ec;
mod enumerate;
mod lar;
mod simulate;

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arena::{attractor_within, Arena, StateId, StateSet};
use crate::condition::MullerCondition;
use crate::error::{SolveError, VerifyError};
use crate::player::{Owner, Player};
use crate::scalar::Probability;
use crate::strategy::{product, MemoryId, ProductMdp, ProductNode, StrategyTransducer};

pub use ec::{find_losing, is_end_component, maximal_end_components, Semantics};
pub use enumerate::{enumerate_support_strategies, max_enum_from_env, SupportEnumeration, DEFAULT_MAX_ENUM};
pub use lar::lar_parity_oracle;
pub use simulate::{simulate, AdamPolicy, EpisodeResult, SimulationConfig, SimulationStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AlmostSure,
    SureWin,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    /// Number of nodes in the explored product.
    pub product_nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub statistics: Option<SimulationStats>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Refuted
    }
}

/// A reachable losing end component of the product, with Adam's behaviour
/// reaching it and staying in it. Names are product node names `state|memory`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub component: Vec<String>,
    pub colours: Vec<String>,
    /// Adam's moves: a positional reachability strategy outside the
    /// component, all successors kept inside it.
    pub moves: Vec<AdversaryMove>,
    /// A path of product nodes from an initial node into the component.
    pub prefix: Vec<String>,
    /// A closed walk through every node of the component.
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryMove {
    pub state: String,
    pub memory: String,
    pub targets: Vec<String>,
}

impl Counterexample {
    /// Adam's moves keyed by arena state and Eve memory, for replay.
    pub fn policy<P: Probability>(
        &self,
        arena: &Arena<P>,
        eve: &StrategyTransducer<P>,
    ) -> Result<HashMap<(StateId, MemoryId), Vec<StateId>>, VerifyError> {
        let bad = |what: &str| VerifyError::Unsupported(format!("counterexample mentions unknown {what}"));
        let mut out = HashMap::new();
        for mv in &self.moves {
            let s = arena.id(&mv.state).ok_or_else(|| bad(&mv.state))?;
            let m = eve.memory_id(&mv.memory).ok_or_else(|| bad(&mv.memory))?;
            let ts = mv
                .targets
                .iter()
                .map(|t| arena.id(t).ok_or_else(|| bad(t)))
                .collect::<Result<Vec<_>, _>>()?;
            out.insert((s, m), ts);
        }
        Ok(out)
    }

    /// Re-checks the certificate against a product: the component is an
    /// end component under the given semantics, loses, and is reachable
    /// along `prefix`.
    pub fn check<P: Probability>(
        &self,
        product: &ProductMdp<P>,
        condition: &MullerCondition,
        semantics: Semantics,
    ) -> bool {
        let ids: Option<Vec<usize>> = self.component.iter().map(|n| product.arena.id(n)).collect();
        let Some(ids) = ids else { return false };
        let mut set = product.arena.empty_set();
        set.extend(ids);
        if !is_end_component(&product.arena, &set, semantics) {
            return false;
        }
        if condition.wins(product.arena.colours_of(&set)) {
            return false;
        }
        let path: Option<Vec<usize>> = self.prefix.iter().map(|n| product.arena.id(n)).collect();
        let Some(path) = path else { return false };
        let starts_ok = path.first().is_some_and(|p| product.initial.contains(p));
        let steps_ok = path.windows(2).all(|w| product.arena.has_edge(w[0], w[1]));
        let ends_ok = path.last().is_some_and(|&p| set.contains(p));
        starts_ok && steps_ok && ends_ok
    }
}

fn check_alphabet<P: Probability>(arena: &Arena<P>, condition: &MullerCondition) -> Result<(), VerifyError> {
    if arena.alphabet() != condition.alphabet() {
        return Err(SolveError::AlphabetMismatch.into());
    }
    Ok(())
}

/// Checks that `eve` wins almost-surely from every state of `starts` (with
/// her initial memory) against every Adam strategy.
///
/// The product is an MDP for Adam; Eve loses from somewhere iff a reachable
/// end component has a losing colour set.
pub fn check_almost_sure<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
    eve: &StrategyTransducer<P>,
    starts: &[StateId],
) -> Result<VerificationReport, VerifyError> {
    check_alphabet(arena, condition)?;
    let p = product(arena, eve, starts.iter().copied())?;
    Ok(report_on(&p, condition, Semantics::Stochastic, Verdict::AlmostSure))
}

/// Checks that every play consistent with `eve` from `starts` is winning.
/// Random states are not supported.
pub fn check_sure_win<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
    eve: &StrategyTransducer<P>,
    starts: &[StateId],
) -> Result<VerificationReport, VerifyError> {
    check_alphabet(arena, condition)?;
    if !arena.is_two_player() {
        return Err(VerifyError::Unsupported(
            "sure winning is only checked on arenas without random states".into(),
        ));
    }
    let p = product(arena, eve, starts.iter().copied())?;
    Ok(report_on(&p, condition, Semantics::Sure, Verdict::SureWin))
}

/// Runs the losing-component search on an already built product.
pub fn report_on<P: Probability>(
    p: &ProductMdp<P>,
    condition: &MullerCondition,
    semantics: Semantics,
    success: Verdict,
) -> VerificationReport {
    let all = p.arena.all_states();
    match find_losing(&p.arena, &all, condition, semantics) {
        None => VerificationReport {
            verdict: success,
            product_nodes: p.len(),
            counterexample: None,
            statistics: None,
        },
        Some(k) => VerificationReport {
            verdict: Verdict::Refuted,
            product_nodes: p.len(),
            counterexample: Some(counterexample(p, &k)),
            statistics: None,
        },
    }
}

fn counterexample<P: Probability>(p: &ProductMdp<P>, k: &StateSet) -> Counterexample {
    let a = &p.arena;
    let name = |i: usize| a.name(i).to_string();
    let reach = attractor_within(a, &a.all_states(), p.adversary, k);

    let mut moves = BTreeMap::new();
    for (i, node) in p.nodes.iter().enumerate() {
        let ProductNode::Config { state, memory } = *node else { continue };
        if !a.owner(i).is(p.adversary) {
            continue;
        }
        let targets: Vec<usize> = if k.contains(i) {
            a.successors(i).iter().copied().filter(|&t| k.contains(t)).collect()
        } else if let Some(&t) = reach.strategy.get(&i) {
            vec![t]
        } else {
            continue;
        };
        let mut arena_targets: Vec<StateId> = targets.iter().map(|&t| target_state(p, t)).collect();
        arena_targets.sort_unstable();
        arena_targets.dedup();
        moves.insert((state, memory), (i, arena_targets));
    }
    let moves = moves
        .into_iter()
        .map(|((state, memory), (_, ts))| AdversaryMove {
            state: p.state_names[state].clone(),
            memory: p.memory_names[memory].clone(),
            targets: ts.into_iter().map(|t| p.state_names[t].clone()).collect(),
        })
        .collect();

    Counterexample {
        component: k.ones().map(name).collect(),
        colours: a.alphabet().names_of(a.colours_of(k)),
        moves,
        prefix: shortest_path(a, &p.initial, k).into_iter().map(name).collect(),
        cycle: closed_walk(a, k).into_iter().map(name).collect(),
    }
}

/// Arena state entered when moving to product node `t`.
fn target_state<P: Probability>(p: &ProductMdp<P>, t: usize) -> StateId {
    match p.nodes[t] {
        ProductNode::Config { state, .. } => state,
        ProductNode::Pending { target, .. } => target,
    }
}

/// BFS path from any of `from` into `to`, following all edges.
fn shortest_path<P: Probability>(a: &Arena<P>, from: &[usize], to: &StateSet) -> Vec<usize> {
    let mut parent = vec![usize::MAX; a.len()];
    let mut seen = a.empty_set();
    let mut queue = VecDeque::new();
    for &s in from {
        if !seen.put(s) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        if to.contains(s) {
            let mut path = vec![s];
            let mut cur = s;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return path;
        }
        for &t in a.successors(s) {
            if !seen.put(t) {
                parent[t] = s;
                queue.push_back(t);
            }
        }
    }
    Vec::new()
}

/// A closed walk inside the strongly connected set `k` visiting all of it.
fn closed_walk<P: Probability>(a: &Arena<P>, k: &StateSet) -> Vec<usize> {
    let members: Vec<usize> = k.ones().collect();
    let Some(&first) = members.first() else { return Vec::new() };
    let mut walk = vec![first];
    let mut order = members[1..].to_vec();
    order.push(first);
    for target in order {
        let cur = *walk.last().expect("non-empty walk");
        let mut tgt = a.empty_set();
        tgt.insert(target);
        let seg = path_within(a, cur, &tgt, k);
        walk.extend(seg.into_iter().skip(1));
    }
    walk
}

/// Shortest path of length ≥ 1 from `s` into `to` inside `within`.
fn path_within<P: Probability>(a: &Arena<P>, s: usize, to: &StateSet, within: &StateSet) -> Vec<usize> {
    let mut parent = vec![usize::MAX; a.len()];
    let mut seen = a.empty_set();
    let mut queue = VecDeque::new();
    for &t in a.successors(s) {
        if within.contains(t) && !seen.put(t) {
            parent[t] = s;
            queue.push_back(t);
        }
    }
    while let Some(u) = queue.pop_front() {
        if to.contains(u) {
            let mut path = vec![u];
            let mut cur = u;
            while cur != s || path.len() == 1 {
                cur = parent[cur];
                path.push(cur);
                if cur == s {
                    break;
                }
            }
            path.reverse();
            return path;
        }
        for &t in a.successors(u) {
            if within.contains(t) && !seen.put(t) {
                parent[t] = u;
                queue.push_back(t);
            }
        }
    }
    vec![s]
}

/// All states of `arena` owned by `player`.
pub fn states_of<P: Probability>(arena: &Arena<P>, player: Player) -> Vec<StateId> {
    (0..arena.len()).filter(|&s| arena.owner(s) == Owner::from(player)).collect()
}
