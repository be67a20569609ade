//! End components and the search for losing ones.

use crate::arena::{Arena, StateId, StateSet};
use crate::condition::MullerCondition;
use crate::player::Owner;
use crate::scalar::Probability;

/// Whether random nodes must keep all their successors inside a component
/// (`Stochastic`) or count as adversarial like every other node (`Sure`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Stochastic,
    Sure,
}

/// Strongly connected components of the subgraph induced by `domain`
/// (iterative Tarjan), in reverse topological order.
pub fn sccs<P: Probability>(arena: &Arena<P>, domain: &StateSet) -> Vec<Vec<StateId>> {
    let n = arena.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<StateId> = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in domain.ones() {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            let succ = arena.successors(v);
            if *i < succ.len() {
                let w = succ[*i];
                *i += 1;
                if !domain.contains(w) {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Maximal end components inside `domain`.
pub fn maximal_end_components<P: Probability>(
    arena: &Arena<P>,
    domain: &StateSet,
    semantics: Semantics,
) -> Vec<StateSet> {
    let mut result = Vec::new();
    let mut work = vec![domain.clone()];
    while let Some(d) = work.pop() {
        for comp in sccs(arena, &d) {
            let mut set = arena.empty_set();
            set.extend(comp.iter().copied());
            let bad: Vec<StateId> = comp
                .iter()
                .copied()
                .filter(|&s| {
                    let succ = arena.successors(s);
                    let leaks = semantics == Semantics::Stochastic
                        && arena.owner(s) == Owner::Random
                        && succ.iter().any(|&t| !set.contains(t));
                    leaks || !succ.iter().any(|&t| set.contains(t))
                })
                .collect();
            if bad.is_empty() {
                result.push(set);
            } else {
                for s in bad {
                    set.set(s, false);
                }
                if !set.is_clear() {
                    work.push(set);
                }
            }
        }
    }
    result.sort_by_key(|s| s.ones().next());
    result
}

/// An end component inside `domain` whose colour set loses for Eve, if any.
///
/// Every losing end component lies in a maximal end component `K`; either
/// `χ(K)` already loses, or the component's colours fit in a maximal losing
/// subset `A ⊂ χ(K)` and it survives restricting `K` to colours in `A`.
pub fn find_losing<P: Probability>(
    arena: &Arena<P>,
    domain: &StateSet,
    condition: &MullerCondition,
    semantics: Semantics,
) -> Option<StateSet> {
    for k in maximal_end_components(arena, domain, semantics) {
        let colours = arena.colours_of(&k);
        if !condition.wins(colours) {
            return Some(k);
        }
        for a in condition.maximal_opposite_subsets(colours) {
            let mut sub = arena.empty_set();
            sub.extend(
                k.ones()
                    .filter(|&s| arena.colour(s).is_none_or(|c| a.contains(c))),
            );
            if let Some(found) = find_losing(arena, &sub, condition, semantics) {
                return Some(found);
            }
        }
    }
    None
}

/// Whether `set` is an end component: every member keeps a successor
/// inside, random members (under stochastic semantics) keep all, and the
/// induced graph is strongly connected.
pub fn is_end_component<P: Probability>(arena: &Arena<P>, set: &StateSet, semantics: Semantics) -> bool {
    if set.is_clear() {
        return false;
    }
    let closed = set.ones().all(|s| {
        let succ = arena.successors(s);
        let leaks = semantics == Semantics::Stochastic
            && arena.owner(s) == Owner::Random
            && succ.iter().any(|&t| !set.contains(t));
        !leaks && succ.iter().any(|&t| set.contains(t))
    });
    closed && sccs(arena, set).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::colour::ColourAlphabet;
    use crate::Rational;

    // a (Adam) <-> r (random) -> b (Adam) -> b
    fn mdp() -> Arena<Rational> {
        let mut bld = ArenaBuilder::new(ColourAlphabet::letters(2));
        let a = bld.add_state("a", Owner::Adam, Some("a")).unwrap();
        let r = bld.add_state("r", Owner::Random, None).unwrap();
        let b = bld.add_state("b", Owner::Adam, Some("b")).unwrap();
        for (f, t) in [(a, r), (a, a), (r, a), (r, b), (b, b)] {
            bld.add_edge(f, t);
        }
        bld.fill_uniform_delta();
        bld.build().unwrap()
    }

    #[test]
    fn mecs_drop_leaking_random_states() {
        let m = mdp();
        let mecs = maximal_end_components(&m, &m.all_states(), Semantics::Stochastic);
        let as_vec: Vec<Vec<usize>> = mecs.iter().map(|s| s.ones().collect()).collect();
        assert_eq!(as_vec, vec![vec![0], vec![2]]);
        for k in &mecs {
            assert!(is_end_component(&m, k, Semantics::Stochastic));
        }
        let sure = maximal_end_components(&m, &m.all_states(), Semantics::Sure);
        let as_vec: Vec<Vec<usize>> = sure.iter().map(|s| s.ones().collect()).collect();
        assert_eq!(as_vec, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn losing_components_are_found_inside_winning_ones() {
        let m = mdp();
        // Only {a,b} wins; both MECs are single-coloured and lose.
        let f = MullerCondition::from_names(&["a", "b"], &[vec!["a", "b"]], false).unwrap();
        assert!(find_losing(&m, &m.all_states(), &f, Semantics::Stochastic).is_some());
        // Everything non-empty wins: no losing component.
        let g = MullerCondition::from_names(&["a", "b"], &[vec!["a"], vec!["b"], vec!["a", "b"]], false)
            .unwrap();
        assert!(find_losing(&m, &m.all_states(), &g, Semantics::Stochastic).is_none());
        // With {a} losing, the a-r loop refutes sure winning.
        let h = MullerCondition::from_names(&["a", "b"], &[vec!["b"], vec!["a", "b"]], false).unwrap();
        let k = find_losing(&m, &m.all_states(), &h, Semantics::Sure).unwrap();
        assert_eq!(m.colours_of(&k), m.alphabet().set_of(&["a"]).unwrap());
    }
}
