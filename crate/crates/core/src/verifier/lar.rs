//! Independent solver for two-player Muller games: product with the latest
//! appearance record, then a max-parity game solved recursively.

use std::collections::{HashMap, VecDeque};

use crate::arena::{Arena, StateId, StateSet};
use crate::colour::{Colour, ColourSet};
use crate::condition::MullerCondition;
use crate::error::{SolveError, VerifyError};
use crate::player::Owner;
use crate::scalar::Probability;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    state: StateId,
    record: Vec<Colour>,
    priority: usize,
}

struct ParityGame {
    eve: Vec<bool>,
    priority: Vec<usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

/// Eve's sure winning region, computed without the Zielonka tree.
///
/// Visiting a colour at position `h` of the record moves it to the front
/// and emits priority `2h+2` if the first `h+1` colours win, `2h+3`
/// otherwise. Uncoloured states emit `0` or `1` depending on whether the
/// empty set wins. Eve wins iff the largest priority seen infinitely often
/// is even.
pub fn lar_parity_oracle<P: Probability>(
    arena: &Arena<P>,
    condition: &MullerCondition,
) -> Result<StateSet, VerifyError> {
    if arena.alphabet() != condition.alphabet() {
        return Err(SolveError::AlphabetMismatch.into());
    }
    if !arena.is_two_player() {
        return Err(VerifyError::Unsupported("the LAR oracle needs a two-player arena".into()));
    }
    let n = condition.alphabet().len();
    let empty_priority = usize::from(!condition.wins(ColourSet::EMPTY));
    let step = |record: &[Colour], t: StateId| -> (Vec<Colour>, usize) {
        match arena.colour(t) {
            None => (record.to_vec(), empty_priority),
            Some(c) => {
                let h = record.iter().position(|&x| x == c).expect("records hold every colour");
                let mut hit = ColourSet::EMPTY;
                for &x in &record[..=h] {
                    hit.insert(x);
                }
                let mut next = Vec::with_capacity(n);
                next.push(c);
                next.extend(record.iter().copied().filter(|&x| x != c));
                let p = if condition.wins(hit) { 2 * h + 2 } else { 2 * h + 3 };
                (next, p)
            }
        }
    };

    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut queue = VecDeque::new();
    let identity: Vec<Colour> = (0..n).collect();
    let mut starts = Vec::with_capacity(arena.len());
    for s in 0..arena.len() {
        let (record, priority) = step(&identity, s);
        let node = Node { state: s, record, priority };
        let id = *index.entry(node.clone()).or_insert_with(|| {
            nodes.push(node);
            queue.push_back(nodes.len() - 1);
            nodes.len() - 1
        });
        starts.push(id);
    }
    let mut succ: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (state, record) = (nodes[id].state, nodes[id].record.clone());
        let mut out = Vec::new();
        for &t in arena.successors(state) {
            let (r, priority) = step(&record, t);
            let node = Node { state: t, record: r, priority };
            let j = *index.entry(node.clone()).or_insert_with(|| {
                nodes.push(node);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            out.push(j);
        }
        if succ.len() <= id {
            succ.resize_with(id + 1, Vec::new);
        }
        succ[id] = out;
    }
    succ.resize_with(nodes.len(), Vec::new);
    let mut pred = vec![Vec::new(); nodes.len()];
    for (i, out) in succ.iter().enumerate() {
        for &j in out {
            pred[j].push(i);
        }
    }
    let game = ParityGame {
        eve: nodes.iter().map(|x| arena.owner(x.state) == Owner::Eve).collect(),
        priority: nodes.iter().map(|x| x.priority).collect(),
        succ,
        pred,
    };
    let eve_wins = game.solve(&vec![true; nodes.len()]);
    let mut region = arena.empty_set();
    for (s, &id) in starts.iter().enumerate() {
        if eve_wins[id] {
            region.insert(s);
        }
    }
    Ok(region)
}

impl ParityGame {
    /// Attractor for `eve` (or Adam) to `target` inside `domain`.
    fn attract(&self, domain: &[bool], eve: bool, target: &[bool]) -> Vec<bool> {
        let n = domain.len();
        let mut region = vec![false; n];
        let mut count: Vec<usize> = (0..n)
            .map(|v| self.succ[v].iter().filter(|&&w| domain[w]).count())
            .collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in 0..n {
            if domain[v] && target[v] {
                region[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            for &v in &self.pred[w] {
                if !domain[v] || region[v] {
                    continue;
                }
                let joins = if self.eve[v] == eve {
                    true
                } else {
                    count[v] -= 1;
                    count[v] == 0
                };
                if joins {
                    region[v] = true;
                    queue.push_back(v);
                }
            }
        }
        region
    }

    /// Eve's winning nodes inside `domain` (classical recursive algorithm).
    fn solve(&self, domain: &[bool]) -> Vec<bool> {
        let n = domain.len();
        let Some(d) = (0..n).filter(|&v| domain[v]).map(|v| self.priority[v]).max() else {
            return vec![false; n];
        };
        let player_eve = d % 2 == 0;
        let top: Vec<bool> = (0..n).map(|v| domain[v] && self.priority[v] == d).collect();
        let a = self.attract(domain, player_eve, &top);
        let rest: Vec<bool> = (0..n).map(|v| domain[v] && !a[v]).collect();
        let w_eve = self.solve(&rest);
        let opp_win: Vec<bool> = (0..n).map(|v| rest[v] && w_eve[v] != player_eve).collect();
        if !opp_win.iter().any(|&x| x) {
            return if player_eve { domain.to_vec() } else { vec![false; n] };
        }
        let b = self.attract(domain, !player_eve, &opp_win);
        let rest: Vec<bool> = (0..n).map(|v| domain[v] && !b[v]).collect();
        let w2 = self.solve(&rest);
        (0..n)
            .map(|v| {
                if b[v] {
                    !player_eve
                } else {
                    rest[v] && w2[v]
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::colour::ColourAlphabet;
    use crate::Rational;

    fn choice() -> Arena<Rational> {
        // e (Eve) chooses between loops through a and through b.
        let mut b = ArenaBuilder::new(ColourAlphabet::letters(2));
        let e = b.add_state("e", Owner::Eve, None).unwrap();
        let a = b.add_state("a", Owner::Adam, Some("a")).unwrap();
        let bb = b.add_state("b", Owner::Adam, Some("b")).unwrap();
        for (f, t) in [(e, a), (e, bb), (a, e), (bb, e)] {
            b.add_edge(f, t);
        }
        b.build().unwrap()
    }

    #[test]
    fn eve_picks_the_winning_loop() {
        let a = choice();
        let f = MullerCondition::from_names(&["a", "b"], &[vec!["b"]], false).unwrap();
        assert_eq!(lar_parity_oracle(&a, &f).unwrap(), a.all_states());
        let g = MullerCondition::from_names(&["a", "b"], &[vec!["a", "b"]], false).unwrap();
        assert_eq!(lar_parity_oracle(&a, &g).unwrap(), a.all_states());
    }

    #[test]
    fn empty_family_loses_everywhere() {
        let a = choice();
        let f = MullerCondition::from_names(&["a", "b"], &[], false).unwrap();
        assert!(lar_parity_oracle(&a, &f).unwrap().is_clear());
    }

    #[test]
    fn adam_alternation_is_detected() {
        // Adam chooses: only {a} wins, so he visits b forever.
        let mut b = ArenaBuilder::<Rational>::new(ColourAlphabet::letters(2));
        let x = b.add_state("x", Owner::Adam, None).unwrap();
        let a = b.add_state("a", Owner::Eve, Some("a")).unwrap();
        let c = b.add_state("b", Owner::Eve, Some("b")).unwrap();
        for (f, t) in [(x, a), (x, c), (a, x), (c, x)] {
            b.add_edge(f, t);
        }
        let ar = b.build().unwrap();
        let f = MullerCondition::from_names(&["a", "b"], &[vec!["a"]], false).unwrap();
        assert!(lar_parity_oracle(&ar, &f).unwrap().is_clear());
    }
}
