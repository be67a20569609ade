//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arena::{Arena, ArenaBuilder};
use crate::colour::{ColourAlphabet, ColourSet};
use crate::condition::MullerCondition;
use crate::player::Owner;
use crate::scalar::Probability;

/// Shape of generated arenas.
#[derive(Clone, Debug, PartialEq)]
pub struct ArenaShape {
    pub min_states: usize,
    pub max_states: usize,
    pub colours: usize,
    /// Maximum out-degree (at least 1).
    pub max_degree: usize,
    /// Probability that a state is random; `0.0` gives two-player arenas.
    pub random_ratio: f64,
    /// Probability that a state is uncoloured.
    pub uncoloured_ratio: f64,
}

impl Default for ArenaShape {
    fn default() -> Self {
        ArenaShape {
            min_states: 1,
            max_states: 6,
            colours: 3,
            max_degree: 3,
            random_ratio: 0.0,
            uncoloured_ratio: 0.2,
        }
    }
}

/// A random valid arena with states `s0, s1, …` and uniform distributions
/// at random states.
pub fn random_arena<P: Probability, R: Rng>(rng: &mut R, shape: &ArenaShape) -> Arena<P> {
    let alphabet = ColourAlphabet::letters(shape.colours);
    let n = rng.gen_range(shape.min_states.max(1)..=shape.max_states.max(shape.min_states).max(1));
    let mut b = ArenaBuilder::new(alphabet);
    for i in 0..n {
        let owner = if rng.gen_bool(shape.random_ratio) {
            Owner::Random
        } else if rng.gen_bool(0.5) {
            Owner::Eve
        } else {
            Owner::Adam
        };
        let colour = (!rng.gen_bool(shape.uncoloured_ratio)).then(|| rng.gen_range(0..shape.colours));
        b.add_state_coloured(format!("s{i}"), owner, colour).expect("fresh names");
    }
    let all: Vec<usize> = (0..n).collect();
    for s in 0..n {
        let k = rng.gen_range(1..=shape.max_degree.max(1).min(n));
        for &t in all.choose_multiple(rng, k) {
            b.add_edge(s, t);
        }
    }
    b.fill_uniform_delta();
    b.build().expect("generated arenas are valid")
}

/// A uniformly random family over `alphabet`.
pub fn random_condition<R: Rng>(rng: &mut R, alphabet: &ColourAlphabet) -> MullerCondition {
    let subsets = alphabet.full().subsets().filter(|_| rng.gen_bool(0.5)).collect::<Vec<ColourSet>>();
    MullerCondition::new(alphabet.clone(), subsets).expect("subsets of the alphabet")
}
