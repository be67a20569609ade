//! Muller conditions as explicit families of colour sets.

use std::collections::BTreeSet;

use crate::colour::{ColourAlphabet, ColourSet};
use crate::error::ModelError;

/// A Muller winning condition: Eve wins a play iff the set of colours seen
/// infinitely often is one of the `winning` sets.
///
/// Whether `∅` is winning is recorded like any other member; it decides who
/// owns the leaves of the Zielonka tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MullerCondition {
    alphabet: ColourAlphabet,
    winning: BTreeSet<ColourSet>,
}

impl MullerCondition {
    pub fn new<I>(alphabet: ColourAlphabet, winning: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = ColourSet>,
    {
        let full = alphabet.full();
        let mut set = BTreeSet::new();
        for w in winning {
            if !w.is_subset(full) {
                return Err(ModelError::NotASubset(format!("{w}")));
            }
            set.insert(w);
        }
        Ok(MullerCondition {
            alphabet,
            winning: set,
        })
    }

    /// Builds a condition from colour names; `empty_wins` states whether `∅`
    /// is winning. An explicit `[]` entry in `winning` must agree with it.
    pub fn from_names<S: AsRef<str>>(
        colours: &[S],
        winning: &[Vec<S>],
        empty_wins: bool,
    ) -> Result<Self, ModelError> {
        let alphabet = ColourAlphabet::new(colours.iter().map(|c| c.as_ref().to_string()))?;
        let mut sets = Vec::with_capacity(winning.len() + 1);
        for w in winning {
            let s = alphabet.set_of(w)?;
            if s.is_empty() && !empty_wins {
                return Err(ModelError::InconsistentEmptySet);
            }
            sets.push(s);
        }
        if empty_wins {
            sets.push(ColourSet::EMPTY);
        }
        MullerCondition::new(alphabet, sets)
    }

    /// The family of every set satisfying `pred`.
    pub fn from_predicate(
        alphabet: ColourAlphabet,
        pred: impl Fn(ColourSet) -> bool,
    ) -> Self {
        let winning = alphabet.full().subsets().filter(|s| pred(*s)).collect();
        MullerCondition { alphabet, winning }
    }

    pub fn alphabet(&self) -> &ColourAlphabet {
        &self.alphabet
    }

    /// Winning sets in canonical order.
    pub fn winning(&self) -> impl Iterator<Item = ColourSet> + '_ {
        self.winning.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.winning.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winning.is_empty()
    }

    pub fn wins(&self, set: ColourSet) -> bool {
        self.winning.contains(&set)
    }

    pub fn empty_wins(&self) -> bool {
        self.wins(ColourSet::EMPTY)
    }

    /// `P(C) ∖ F`: the condition Adam plays for.
    pub fn complement(&self) -> MullerCondition {
        MullerCondition::from_predicate(self.alphabet.clone(), |s| !self.wins(s))
    }

    /// True iff every superset (within the alphabet) of a winning set wins.
    pub fn is_upward_closed(&self) -> bool {
        self.is_upward_closed_within(self.alphabet.full())
    }

    /// Upward closure of the restriction `F↾label`: for all `U ∈ F` with
    /// `U ⊆ V ⊆ label`, `V ∈ F`. One-colour extensions suffice.
    pub fn is_upward_closed_within(&self, label: ColourSet) -> bool {
        self.winning
            .iter()
            .filter(|u| u.is_subset(label))
            .all(|&u| {
                label.difference(u).iter().all(|c| {
                    let mut v = u;
                    v.insert(c);
                    self.wins(v)
                })
            })
    }

    /// Maximal strict subsets of `set` whose membership in `F` differs from
    /// that of `set`, in canonical order. These are the labels of the
    /// children of a Zielonka-tree node labelled `set`.
    pub fn maximal_opposite_subsets(&self, set: ColourSet) -> Vec<ColourSet> {
        let side = self.wins(set);
        let mut candidates: Vec<ColourSet> = set
            .subsets()
            .filter(|&u| u != set && self.wins(u) != side)
            .collect();
        candidates.sort_by_key(|u| std::cmp::Reverse(u.len()));
        let mut maximal: Vec<ColourSet> = Vec::new();
        for u in candidates {
            if !maximal.iter().any(|m| u.is_strict_subset(*m)) {
                maximal.push(u);
            }
        }
        maximal.sort();
        maximal
    }
}

/// Every condition over `alphabet`, i.e. all `2^(2^n)` families.
///
/// Only sensible for very small alphabets (n ≤ 4).
pub fn all_conditions(alphabet: &ColourAlphabet) -> impl Iterator<Item = MullerCondition> + '_ {
    let n = alphabet.len();
    assert!(n <= 4, "exhaustive enumeration is limited to 4 colours");
    let subsets = 1u64 << n;
    let families = 1u128 << subsets;
    (0..families).map(move |fam| {
        let winning = (0..subsets)
            .filter(|s| fam >> s & 1 == 1)
            .map(ColourSet::from_bits);
        MullerCondition::new(alphabet.clone(), winning).expect("subsets of the alphabet")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recurring() -> MullerCondition {
        MullerCondition::from_names(
            &["a", "b", "c", "d"],
            &[vec!["a", "b"], vec!["a", "b", "c"], vec!["a", "b", "c", "d"]],
            false,
        )
        .unwrap()
    }

    #[test]
    fn upward_closure_examples() {
        let ab = ColourAlphabet::letters(2);
        let nonempty = MullerCondition::from_predicate(ab.clone(), |s| !s.is_empty());
        assert!(nonempty.is_upward_closed());
        assert!(!recurring().is_upward_closed());
        let none = MullerCondition::new(ab, []).unwrap();
        assert!(none.is_upward_closed());
    }

    #[test]
    fn upward_closure_matches_brute_force() {
        let abc = ColourAlphabet::letters(3);
        for f in all_conditions(&abc) {
            let brute = f.winning().all(|u| {
                abc.full()
                    .subsets()
                    .filter(|v| u.is_subset(*v))
                    .all(|v| f.wins(v))
            });
            assert_eq!(f.is_upward_closed(), brute);
        }
    }

    #[test]
    fn maximal_losing_subsets_of_recurring_root() {
        let f = recurring();
        let a = f.alphabet().clone();
        let kids: Vec<String> = f
            .maximal_opposite_subsets(a.full())
            .into_iter()
            .map(|s| a.render(s))
            .collect();
        assert_eq!(kids, ["abd", "acd", "bcd"]);
    }

    #[test]
    fn empty_set_flag_must_agree() {
        let e: Vec<&str> = vec![];
        assert!(MullerCondition::from_names(&["a"], std::slice::from_ref(&e), false).is_err());
        let f = MullerCondition::from_names(&["a"], &[e], true).unwrap();
        assert!(f.empty_wins());
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn complement_is_involutive() {
        let f = recurring();
        assert_eq!(f.complement().complement(), f);
        assert_eq!(f.complement().len(), 16 - 3);
    }

    #[test]
    fn exhaustive_family_count() {
        assert_eq!(all_conditions(&ColourAlphabet::letters(2)).count(), 16);
        assert_eq!(all_conditions(&ColourAlphabet::letters(3)).count(), 256);
    }
}
