//! Seeded Monte-Carlo runs of an Eve strategy against an Adam policy.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arena::{Arena, StateId};
use crate::colour::ColourSet;
use crate::condition::MullerCondition;
use crate::error::{StrategyError, VerifyError};
use crate::player::Owner;
use crate::scalar::Probability;
use crate::strategy::{MemoryId, StrategyTransducer};

/// How Adam moves during simulation.
#[derive(Debug)]
pub enum AdamPolicy<'a, P> {
    /// Uniformly among successors.
    Uniform,
    /// A finite-memory Adam strategy.
    Transducer(&'a StrategyTransducer<P>),
    /// Uniformly among the listed targets, keyed by state and Eve's current
    /// memory (the shape of a counterexample). Missing keys fall back to
    /// uniform.
    Table(&'a HashMap<(StateId, MemoryId), Vec<StateId>>),
}

impl<P> Clone for AdamPolicy<'_, P> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<P> Copy for AdamPolicy<'_, P> {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationConfig {
    pub episodes: usize,
    pub horizon: usize,
    pub seed: u64,
    /// Episode `i` starts at `starts[i % starts.len()]`.
    pub starts: Vec<StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub start: String,
    pub inf_colours: Vec<String>,
    pub win: bool,
    /// A random state in the window had a successor outside it.
    pub closure_warning: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationStats {
    pub episodes: usize,
    pub horizon: usize,
    pub seed: u64,
    pub wins: usize,
    pub losses: usize,
    pub win_rate: Option<f64>,
    pub closure_warnings: usize,
    pub details: Vec<EpisodeResult>,
}

/// Runs `config.episodes` independent plays. `Inf` is estimated as the set
/// of states visited in the second half of the horizon. Episodes run in
/// parallel; episode `i` draws from stream `i` of a generator seeded with
/// `config.seed`, so results do not depend on scheduling.
pub fn simulate<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
    eve: &StrategyTransducer<P>,
    adam: AdamPolicy<'_, P>,
    config: &SimulationConfig,
) -> Result<SimulationStats, VerifyError> {
    if config.episodes > 0 && config.starts.is_empty() {
        return Err(VerifyError::Unsupported("simulation needs a start state".into()));
    }
    let details = (0..config.episodes)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let start = config.starts[i % config.starts.len()];
            episode(arena, condition, eve, adam, start, config.horizon, &mut rng)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let wins = details.iter().filter(|d| d.win).count();
    Ok(SimulationStats {
        episodes: config.episodes,
        horizon: config.horizon,
        seed: config.seed,
        wins,
        losses: details.len() - wins,
        win_rate: (!details.is_empty()).then(|| wins as f64 / details.len() as f64),
        closure_warnings: details.iter().filter(|d| d.closure_warning).count(),
        details,
    })
}

fn draw<T: Copy, P: Probability, R: Rng>(dist: &[(T, P)], rng: &mut R) -> Option<T> {
    match dist {
        [] => None,
        [(x, _)] => Some(*x),
        _ => {
            let w = WeightedIndex::new(dist.iter().map(|(_, p)| p.to_f64())).ok()?;
            Some(dist[w.sample(rng)].0)
        }
    }
}

fn uniform<R: Rng>(xs: &[StateId], rng: &mut R) -> Option<StateId> {
    (!xs.is_empty()).then(|| xs[rng.gen_range(0..xs.len())])
}

fn episode<P: Probability, R: Rng>(
    arena: &Arena<P>,
    condition: &MullerCondition,
    eve: &StrategyTransducer<P>,
    adam: AdamPolicy<'_, P>,
    start: StateId,
    horizon: usize,
    rng: &mut R,
) -> Result<EpisodeResult, VerifyError> {
    let undefined = |s: StateId, name: &str| {
        VerifyError::Strategy(StrategyError::Undefined(arena.name(s).to_string(), name.to_string()))
    };
    let mut s = start;
    let mut m = eve.initial();
    let mut ma = match adam {
        AdamPolicy::Transducer(t) => t.initial(),
        _ => 0,
    };
    let mut window = arena.empty_set();
    for step in 0..horizon {
        if step >= horizon / 2 {
            window.insert(s);
        }
        let t = match arena.owner(s) {
            Owner::Eve => {
                draw(eve.next(s, m).ok_or_else(|| undefined(s, eve.memory_name(m)))?, rng)
            }
            Owner::Random => draw(arena.delta(s), rng),
            Owner::Adam => match adam {
                AdamPolicy::Uniform => uniform(arena.successors(s), rng),
                AdamPolicy::Transducer(tr) => {
                    draw(tr.next(s, ma).ok_or_else(|| undefined(s, tr.memory_name(ma)))?, rng)
                }
                AdamPolicy::Table(table) => match table.get(&(s, m)) {
                    Some(ts) => uniform(ts, rng),
                    None => uniform(arena.successors(s), rng),
                },
            },
        }
        .ok_or_else(|| undefined(s, eve.memory_name(m)))?;
        let m2 = eve.update_entry(s, m).and_then(|d| draw(d, rng)).unwrap_or(m);
        if let AdamPolicy::Transducer(tr) = adam {
            ma = tr.update_entry(s, ma).and_then(|d| draw(d, rng)).unwrap_or(ma);
        }
        s = t;
        m = m2;
    }
    let colours: ColourSet = arena.colours_of(&window);
    let closure_warning = window.ones().any(|x| {
        arena.owner(x) == Owner::Random && arena.successors(x).iter().any(|&y| !window.contains(y))
    });
    Ok(EpisodeResult {
        start: arena.name(start).to_string(),
        inf_colours: arena.alphabet().names_of(colours),
        win: condition.wins(colours),
        closure_warning,
    })
}
