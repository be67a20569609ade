//! Muller conditions, Zielonka trees and DAGs, memory bounds, almost-sure
//! strategy synthesis for stochastic Muller games, lower-bound witness
//! arenas, and exact and statistical strategy verification.
//!
//! Every probability-carrying type is generic over a [`scalar::Probability`]
//! and defaults to exact [`Rational`]s.

pub mod arena;
pub mod colour;
pub mod condition;
pub mod error;
pub mod io;
pub mod player;
pub mod random;
pub mod scalar;
pub mod solver;
pub mod strategy;
pub mod verifier;
pub mod witness;
pub mod zielonka;

/// Exact probabilities, the default scalar everywhere.
pub type Rational = num_rational::Ratio<i64>;

pub type ExactArena = arena::Arena<Rational>;
pub type FloatArena = arena::Arena<f64>;
pub type ExactStrategy = strategy::StrategyTransducer<Rational>;
pub type FloatStrategy = strategy::StrategyTransducer<f64>;

pub use arena::{Arena, ArenaBuilder, StateId, StateSet};
pub use colour::{Colour, ColourAlphabet, ColourSet};
pub use condition::MullerCondition;
pub use player::{Owner, Player};
pub use scalar::Probability;
pub use solver::{solve, synthesize, synthesize_on_region, SolveResult};
pub use strategy::{product, StrategyTransducer, SupportStrategy};
pub use verifier::{check_almost_sure, check_sure_win, lar_parity_oracle, simulate, Verdict, VerificationReport};
pub use witness::{branch_strategy, build_witness, sure_strategy, WitnessArena};
pub use zielonka::{optimal_cropped_dag, CroppedDag, ZielonkaDag, ZielonkaTree};
