//! JSON file formats for conditions, arenas, strategies, trees and solver
//! output. Probabilities are strings such as `"1/2"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arena::{Arena, ArenaBuilder, StateSet};
use crate::colour::{ColourAlphabet, ColourSet};
use crate::condition::MullerCondition;
use crate::error::{ArenaError, FormatError, StrategyError};
use crate::player::{Owner, Player};
use crate::scalar::Probability;
use crate::solver::{SolveResult, Trace};
use crate::strategy::StrategyTransducer;
use crate::zielonka::{CroppedDag, DagNode, ZielonkaDag, ZielonkaTree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionFile {
    pub colours: Vec<String>,
    pub winning: Vec<Vec<String>>,
    pub empty_wins: bool,
}

impl ConditionFile {
    /// Canonical form: winning sets in canonical order, `∅` only through
    /// `empty_wins`.
    pub fn from_condition(c: &MullerCondition) -> Self {
        let al = c.alphabet();
        ConditionFile {
            colours: al.names().to_vec(),
            winning: c.winning().filter(|s| !s.is_empty()).map(|s| al.names_of(s)).collect(),
            empty_wins: c.empty_wins(),
        }
    }

    pub fn to_condition(&self) -> Result<MullerCondition, FormatError> {
        Ok(MullerCondition::from_names(&self.colours, &self.winning, self.empty_wins)?)
    }
}

pub fn parse_condition(text: &str) -> Result<MullerCondition, FormatError> {
    serde_json::from_str::<ConditionFile>(text)?.to_condition()
}

pub fn condition_to_json(c: &MullerCondition) -> String {
    to_pretty(&ConditionFile::from_condition(c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub id: String,
    pub owner: Owner,
    #[serde(default)]
    pub colour: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaFile {
    /// Optional; defaults to the condition's alphabet or the colours used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colours: Option<Vec<String>>,
    pub states: Vec<StateEntry>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
}

impl ArenaFile {
    pub fn from_arena<P: Probability>(a: &Arena<P>) -> Self {
        let al = a.alphabet();
        let states = a
            .states()
            .iter()
            .map(|s| StateEntry {
                id: s.name.clone(),
                owner: s.owner,
                colour: s.colour.map(|c| al.name(c).to_string()),
            })
            .collect();
        let mut edges = Vec::with_capacity(a.edge_count());
        let mut delta = BTreeMap::new();
        for s in 0..a.len() {
            for &t in a.successors(s) {
                edges.push((a.name(s).to_string(), a.name(t).to_string()));
            }
            if a.owner(s) == Owner::Random {
                let d = a
                    .delta(s)
                    .iter()
                    .map(|(t, p)| (a.name(*t).to_string(), p.format_probability()))
                    .collect();
                delta.insert(a.name(s).to_string(), d);
            }
        }
        ArenaFile { colours: Some(al.names().to_vec()), states, edges, delta }
    }

    /// Builds and validates the arena. `alphabet` is used when the file
    /// does not list its colours; otherwise both must agree.
    pub fn to_arena<P: Probability>(&self, alphabet: Option<&ColourAlphabet>) -> Result<Arena<P>, FormatError> {
        let al = match (&self.colours, alphabet) {
            (Some(cs), given) => {
                let own = ColourAlphabet::new(cs.iter().cloned())?;
                if given.is_some_and(|g| *g != own) {
                    return Err(FormatError::Other(
                        "arena colours differ from the condition's colours".into(),
                    ));
                }
                own
            }
            (None, Some(g)) => g.clone(),
            (None, None) => {
                let mut names: Vec<String> = Vec::new();
                for s in &self.states {
                    if let Some(c) = &s.colour {
                        if !names.contains(c) {
                            names.push(c.clone());
                        }
                    }
                }
                if names.is_empty() {
                    names.push("c".into());
                }
                ColourAlphabet::new(names)?
            }
        };
        let mut b = ArenaBuilder::new(al);
        for s in &self.states {
            b.add_state(s.id.clone(), s.owner, s.colour.as_deref())?;
        }
        for (f, t) in &self.edges {
            b.add_edge_by_name(f, t)?;
        }
        for (s, dist) in &self.delta {
            let id = b.id(s)?;
            let mut d = Vec::with_capacity(dist.len());
            for (t, p) in dist {
                let q = P::parse_probability(p).ok_or_else(|| ArenaError::BadProbability(p.clone()))?;
                d.push((b.id(t)?, q));
            }
            b.set_delta(id, d);
        }
        b.fill_uniform_delta();
        Ok(b.build()?)
    }
}

pub fn parse_arena<P: Probability>(text: &str, alphabet: Option<&ColourAlphabet>) -> Result<Arena<P>, FormatError> {
    serde_json::from_str::<ArenaFile>(text)?.to_arena(alphabet)
}

pub fn arena_to_json<P: Probability>(a: &Arena<P>) -> String {
    to_pretty(&ArenaFile::from_arena(a))
}

fn default_owner() -> Player {
    Player::Eve
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    #[serde(default = "default_owner")]
    pub owner: Player,
    pub memory: Vec<String>,
    pub initial: String,
    pub next: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub update: BTreeMap<String, BTreeMap<String, String>>,
}

impl StrategyFile {
    pub fn from_strategy<P: Probability>(s: &StrategyTransducer<P>, a: &Arena<P>) -> Self {
        let key = |st: usize, m: usize| format!("{}|{}", a.name(st), s.memory_name(m));
        StrategyFile {
            owner: s.owner(),
            memory: s.memory_names().to_vec(),
            initial: s.memory_name(s.initial()).to_string(),
            next: s
                .next_entries()
                .map(|(&(st, m), d)| {
                    let d = d.iter().map(|(t, p)| (a.name(*t).to_string(), p.format_probability()));
                    (key(st, m), d.collect())
                })
                .collect(),
            update: s
                .update_entries()
                .map(|(&(st, m), d)| {
                    let d = d.iter().map(|(n, p)| (s.memory_name(*n).to_string(), p.format_probability()));
                    (key(st, m), d.collect())
                })
                .collect(),
        }
    }

    /// Builds the strategy and checks it against `arena`.
    pub fn to_strategy<P: Probability>(&self, arena: &Arena<P>) -> Result<StrategyTransducer<P>, FormatError> {
        let memory_id = |st: &StrategyTransducer<P>, m: &str| {
            st.memory_id(m).ok_or_else(|| StrategyError::UnknownMemory(m.to_string()))
        };
        let init = self
            .memory
            .iter()
            .position(|m| *m == self.initial)
            .ok_or_else(|| StrategyError::UnknownMemory(self.initial.clone()))?;
        let mut st = StrategyTransducer::new(self.owner, self.memory.clone(), init)?;
        let split = |k: &str| -> Result<(usize, String), FormatError> {
            let (s, m) = k.rsplit_once('|').ok_or_else(|| StrategyError::BadKey(k.to_string()))?;
            let id = arena.id(s).ok_or_else(|| ArenaError::UnknownState(s.to_string()))?;
            Ok((id, m.to_string()))
        };
        let prob = |p: &str| P::parse_probability(p).ok_or_else(|| ArenaError::BadProbability(p.to_string()));
        for (k, dist) in &self.next {
            let (s, m) = split(k)?;
            let m = memory_id(&st, &m)?;
            let mut d = Vec::new();
            for (t, p) in dist {
                let t = arena.id(t).ok_or_else(|| ArenaError::UnknownState(t.clone()))?;
                d.push((t, prob(p)?));
            }
            st.set_next(s, m, d);
        }
        for (k, dist) in &self.update {
            let (s, m) = split(k)?;
            let m = memory_id(&st, &m)?;
            let mut d = Vec::new();
            for (n, p) in dist {
                d.push((memory_id(&st, n)?, prob(p)?));
            }
            st.set_update(s, m, d);
        }
        st.validate(arena)?;
        Ok(st)
    }
}

pub fn parse_strategy<P: Probability>(text: &str, arena: &Arena<P>) -> Result<StrategyTransducer<P>, FormatError> {
    serde_json::from_str::<StrategyFile>(text)?.to_strategy(arena)
}

pub fn strategy_to_json<P: Probability>(s: &StrategyTransducer<P>, arena: &Arena<P>) -> String {
    to_pretty(&StrategyFile::from_strategy(s, arena))
}

/// Tree export mirroring [`ZielonkaTree`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub label: Vec<String>,
    pub owner: Player,
    pub children: Vec<TreeFile>,
}

impl TreeFile {
    pub fn from_tree(t: &ZielonkaTree, al: &ColourAlphabet) -> Self {
        TreeFile {
            label: al.names_of(t.label()),
            owner: t.owner(),
            children: t.children().iter().map(|c| TreeFile::from_tree(c, al)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagNodeFile {
    pub label: Vec<String>,
    pub owner: Player,
    pub children: Vec<usize>,
}

/// DAG or cropped-DAG export; `source` is set for cropped DAGs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagFile {
    pub root: usize,
    pub nodes: Vec<DagNodeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<usize>>,
}

fn dag_nodes(nodes: &[DagNode], al: &ColourAlphabet) -> Vec<DagNodeFile> {
    nodes
        .iter()
        .map(|n| DagNodeFile { label: al.names_of(n.label), owner: n.owner, children: n.children.clone() })
        .collect()
}

impl DagFile {
    pub fn from_dag(d: &ZielonkaDag, al: &ColourAlphabet) -> Self {
        DagFile { root: d.root(), nodes: dag_nodes(d.nodes(), al), source: None }
    }

    pub fn from_cropped(d: &CroppedDag, al: &ColourAlphabet) -> Self {
        DagFile { root: d.root(), nodes: dag_nodes(d.nodes(), al), source: Some(d.source().to_vec()) }
    }
}

fn names_of<P: Probability>(a: &Arena<P>, set: &StateSet) -> Vec<String> {
    set.ones().map(|s| a.name(s).to_string()).collect()
}

fn colours(al: &ColourAlphabet, set: ColourSet) -> Vec<String> {
    al.names_of(set)
}

/// Solver output with state and colour names.
pub fn solve_result_json<P: Probability>(a: &Arena<P>, r: &SolveResult) -> Value {
    json!({
        "eve_region": names_of(a, &r.eve_region),
        "adam_region": names_of(a, &r.adam_region),
        "trace": trace_json(a, &r.trace),
    })
}

fn moves_json<P: Probability>(a: &Arena<P>, m: &BTreeMap<usize, usize>) -> Value {
    Value::Object(
        m.iter()
            .map(|(s, t)| (a.name(*s).to_string(), Value::String(a.name(*t).to_string())))
            .collect(),
    )
}

pub fn trace_json<P: Probability>(a: &Arena<P>, t: &Trace) -> Value {
    let al = a.alphabet();
    match t {
        Trace::Leaf { label, owner, domain } => json!({
            "kind": "leaf",
            "label": colours(al, *label),
            "owner": owner,
            "domain": names_of(a, domain),
        }),
        Trace::Adam { label, domain, parts } => json!({
            "kind": "adam",
            "label": colours(al, *label),
            "domain": names_of(a, domain),
            "parts": parts.iter().map(|p| json!({
                "child": colours(al, p.child_label),
                "trap": names_of(a, &p.trap),
                "level": names_of(a, &p.level),
                "attractor": moves_json(a, &p.attractor),
                "sub": trace_json(a, &p.sub),
            })).collect::<Vec<_>>(),
        }),
        Trace::Eve { label, domain, children } => json!({
            "kind": "eve",
            "label": colours(al, *label),
            "domain": names_of(a, domain),
            "children": children.iter().map(|c| json!({
                "child": colours(al, c.child_label),
                "leaf": c.leaf,
                "avoid": names_of(a, &c.avoid),
                "reach": names_of(a, &c.reach),
                "attractor": moves_json(a, &c.attractor),
                "sub": trace_json(a, &c.sub),
            })).collect::<Vec<_>>(),
        }),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}
