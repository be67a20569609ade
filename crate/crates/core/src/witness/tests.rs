use std::collections::BTreeSet;

use super::*;
use crate::condition::MullerCondition;
use crate::strategy::positional_moves;
use crate::zielonka::{optimal_cropped_dag, ZielonkaDag, ZielonkaTree};

fn recurring() -> (MullerCondition, CroppedDag) {
    let f = MullerCondition::from_names(
        &["a", "b", "c", "d"],
        &[vec!["a", "b"], vec!["a", "b", "c"], vec!["a", "b", "c", "d"]],
        false,
    )
    .unwrap();
    let e = optimal_cropped_dag(&ZielonkaDag::from_tree(&ZielonkaTree::build(&f)));
    (f, e)
}

fn set(alphabet: &ColourAlphabet, names: &[&str]) -> ColourSet {
    alphabet.set_of(names).unwrap()
}

/// Colour sets of all paths from `from` back to the root, optionally
/// following fixed Adam moves.
fn traversals(
    w: &WitnessArena,
    from: StateId,
    moves: Option<&std::collections::HashMap<StateId, StateId>>,
) -> BTreeSet<ColourSet> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(from, ColourSet::EMPTY)];
    while let Some((s, mut seen)) = stack.pop() {
        if let Some(c) = w.arena.colour(s) {
            seen.insert(c);
        }
        if s == w.root_state {
            out.insert(seen);
            continue;
        }
        match moves.and_then(|m| m.get(&s)) {
            Some(&t) => stack.push((t, seen)),
            None => stack.extend(w.arena.successors(s).iter().map(|&t| (t, seen))),
        }
    }
    out
}

#[test]
fn pick_star_realises_every_subset() {
    let al = ColourAlphabet::letters(3);
    let g: Gadget<Rational> = pick_star_gadget(&al, set(&al, &["a", "b"]));
    assert_eq!(g.arena.len(), 6);
    assert_eq!(g.traversals().len(), 4);
    let expected: BTreeSet<ColourSet> = set(&al, &["a", "b"]).subsets().collect();
    assert_eq!(g.realisable(), expected);
    let single: Gadget<Rational> = pick_star_gadget(&al, set(&al, &["a"]));
    assert_eq!(
        single.realisable(),
        BTreeSet::from([ColourSet::EMPTY, set(&al, &["a"])])
    );
    let three: Gadget<Rational> = pick_star_gadget(&al, al.full());
    assert_eq!(three.traversals().len(), 8);
}

#[test]
fn pick_visits_exactly_one_colour() {
    let al = ColourAlphabet::letters(3);
    let g: Gadget<Rational> = pick_gadget(&al, set(&al, &["a", "c"])).unwrap();
    assert_eq!(g.arena.len(), 4);
    assert_eq!(
        g.realisable(),
        BTreeSet::from([set(&al, &["a"]), set(&al, &["c"])])
    );
    assert_eq!(g.traversals().len(), 2);
    let d: Gadget<Rational> = pick_gadget(&al, set(&al, &["c"])).unwrap();
    assert_eq!(d.traversals(), vec![set(&al, &["c"])]);
    assert_eq!(
        pick_gadget::<Rational>(&al, ColourSet::EMPTY).unwrap_err(),
        WitnessError::EmptyChoice
    );
}

#[test]
fn recurring_witness_has_the_expected_shape() {
    let (f, e) = recurring();
    let w: WitnessArena = build_witness(&e, f.alphabet()).unwrap();
    assert_eq!(w.eve_nodes.len(), 2);
    assert_eq!(w.pair_states.len(), 5);
    assert!(w.arena.validate().is_empty());
    assert_eq!(w.arena.name(w.root_state), "E[abcd]");
    assert!(w.arena.id("E[ab]").is_some());
    for (s, role) in w.roles.iter().enumerate() {
        if !matches!(role, Role::Gadget { .. }) {
            assert_eq!(w.arena.colour(s), None);
        }
    }
    let side = w.sidecar(&e);
    assert_eq!(side.len(), w.arena.len());
    assert_eq!(side[w.root_state].role, "eve_node");
}

#[test]
fn stopping_at_acd_forces_colour_b() {
    let (f, e) = recurring();
    let al = f.alphabet();
    let w: WitnessArena = build_witness(&e, al).unwrap();
    let pair = w.arena.id("A[abcd/acd]").unwrap();
    let stop = *w
        .arena
        .successors(pair)
        .iter()
        .find(|&&t| matches!(w.roles[t], Role::Gadget { .. }))
        .unwrap();
    let got = traversals(&w, stop, None);
    let expected: BTreeSet<ColourSet> = al
        .full()
        .subsets()
        .filter(|s| s.contains(al.lookup("b").unwrap()))
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn branch_strategy_visits_the_branch_labels() {
    let (f, e) = recurring();
    let al = f.alphabet();
    let w: WitnessArena = build_witness(&e, al).unwrap();
    let branches = e.branches();
    let b = branches
        .iter()
        .find(|b| branch_name(&e, al, b) == "abcd·abd·ab·a")
        .unwrap();
    let tau = branch_strategy(&e, b, &w).unwrap();
    let moves = positional_moves(&tau).unwrap();
    let from = |pair: &str| {
        let s = w.arena.id(pair).unwrap();
        traversals(&w, moves[&s], Some(&moves))
    };
    let abd = set(al, &["a", "b", "d"]);
    assert_eq!(from("A[abcd/bcd]"), BTreeSet::from([abd]));
    assert_eq!(from("A[abcd/acd]"), BTreeSet::from([abd]));
    assert_eq!(from("A[ab/b]"), BTreeSet::from([set(al, &["a"])]));
    assert_eq!(from("A[ab/a]"), BTreeSet::from([set(al, &["a", "b"])]));
    // Proceeding along the branch.
    assert_eq!(
        moves[&w.arena.id("A[abcd/abd]").unwrap()],
        w.arena.id("E[ab]").unwrap()
    );
    let foreign = Branch(vec![0, 42]);
    assert_eq!(
        branch_strategy(&e, &foreign, &w).unwrap_err(),
        WitnessError::BranchMismatch
    );
}

#[test]
fn sure_strategy_has_one_memory_state_per_branch() {
    let (f, e) = recurring();
    let w: WitnessArena = build_witness(&e, f.alphabet()).unwrap();
    let s = sure_strategy(&e, &w);
    assert_eq!(s.memory_size(), 4);
    assert!(s.is_pure());
    s.validate(&w.arena).unwrap();

    let g = MullerCondition::from_names(&["a"], &[vec!["a"]], true).unwrap();
    let e1 = optimal_cropped_dag(&ZielonkaDag::from_tree(&ZielonkaTree::build(&g)));
    let w1: WitnessArena = build_witness(&e1, g.alphabet()).unwrap();
    // Root → Pick*({a}) → root.
    assert_eq!(w1.arena.len(), 1 + 4);
    assert_eq!(sure_strategy(&e1, &w1).memory_size(), 1);
}
