#![allow(dead_code)]

use muller::{Arena, ArenaBuilder, ColourAlphabet, MullerCondition, Owner, Rational};
use muller::random::{random_arena, ArenaShape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn recurring() -> MullerCondition {
    MullerCondition::from_names(
        &["a", "b", "c", "d"],
        &[vec!["a", "b"], vec!["a", "b", "c"], vec!["a", "b", "c", "d"]],
        false,
    )
    .unwrap()
}

/// The game drawn for the recurring example: a central Eve state choosing
/// among four directions.
pub fn recurring_game() -> Arena<Rational> {
    let mut b = ArenaBuilder::new(ColourAlphabet::letters(4));
    let states = [
        ("n0", Owner::Eve, Some("c")),
        ("n1", Owner::Adam, Some("d")),
        ("n2", Owner::Adam, Some("a")),
        ("n3", Owner::Adam, Some("b")),
        ("centre", Owner::Eve, None),
        ("n5", Owner::Adam, None),
        ("n6", Owner::Adam, None),
        ("n7", Owner::Eve, Some("a")),
        ("n8", Owner::Eve, Some("b")),
        ("n9", Owner::Eve, Some("c")),
    ];
    for (name, owner, colour) in states {
        b.add_state(name, owner, colour).unwrap();
    }
    for (f, t) in [
        (0, 4), (1, 4), (2, 1), (3, 1), (4, 2), (4, 3), (4, 5), (4, 6),
        (5, 0), (5, 7), (6, 8), (6, 9), (7, 4), (8, 4), (9, 4),
    ] {
        b.add_edge(f, t);
    }
    b.build().unwrap()
}

pub fn arena(seed: u64, shape: &ArenaShape) -> Arena<Rational> {
    random_arena(&mut ChaCha8Rng::seed_from_u64(seed), shape)
}

pub fn two_player(seed: u64) -> Arena<Rational> {
    arena(seed, &ArenaShape::default())
}

pub fn stochastic(seed: u64) -> Arena<Rational> {
    arena(seed, &ArenaShape { random_ratio: 0.3, ..ArenaShape::default() })
}
