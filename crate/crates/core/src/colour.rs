//! Colours, colour alphabets and bitmask colour sets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::ModelError;

/// Maximum number of colours an alphabet may hold; sets are `u64` bitmasks.
pub const MAX_COLOURS: usize = 64;

/// Index of a colour inside its [`ColourAlphabet`].
pub type Colour = usize;

/// Ordered, duplicate-free list of colour names.
///
/// Iteration order is declaration order, and every derived output (tree
/// children, gadget layouts, DOT files) follows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourAlphabet {
    names: Vec<String>,
    index: HashMap<String, Colour>,
}

impl ColourAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        if names.len() > MAX_COLOURS {
            return Err(ModelError::TooManyColours(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateColour(name.clone()));
            }
        }
        Ok(ColourAlphabet { names, index })
    }

    /// Alphabet `a, b, c, ...` of the given size.
    pub fn letters(n: usize) -> Self {
        assert!(n > 0 && n <= 26, "letters() supports 1..=26 colours");
        ColourAlphabet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
            .expect("letters are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, colour: Colour) -> &str {
        &self.names[colour]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Colour> {
        self.index.get(name).copied()
    }

    /// The set of all colours.
    pub fn full(&self) -> ColourSet {
        ColourSet::full(self.len())
    }

    /// Parses a list of colour names into a set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ColourSet, ModelError> {
        let mut set = ColourSet::EMPTY;
        for n in names {
            let c = self
                .lookup(n.as_ref())
                .ok_or_else(|| ModelError::UnknownColour(n.as_ref().to_string()))?;
            set.insert(c);
        }
        Ok(set)
    }

    /// Colour names of a set in alphabet order.
    pub fn names_of(&self, set: ColourSet) -> Vec<String> {
        set.iter().map(|c| self.names[c].clone()).collect()
    }

    /// Compact rendering: concatenated names when all are single characters
    /// (`abd`), `{x,y}` otherwise, `∅` for the empty set.
    pub fn render(&self, set: ColourSet) -> String {
        if set.is_empty() {
            return "∅".to_string();
        }
        if set.iter().all(|c| self.names[c].chars().count() == 1) {
            set.iter().map(|c| self.names[c].as_str()).collect()
        } else {
            format!("{{{}}}", self.names_of(set).join(","))
        }
    }
}

/// A set of colours stored as a bitmask over alphabet indices.
///
/// `Ord` is the canonical order used for sorting tree children: the
/// lexicographic order of the increasing index sequences, so `{a,b,d}`
/// precedes `{a,c,d}` which precedes `{b,c,d}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColourSet(u64);

impl ColourSet {
    pub const EMPTY: ColourSet = ColourSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ColourSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ColourSet(u64::MAX)
        } else {
            ColourSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(c: Colour) -> Self {
        ColourSet(1u64 << c)
    }

    pub fn contains(self, c: Colour) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn insert(&mut self, c: Colour) {
        self.0 |= 1u64 << c;
    }

    pub fn remove(&mut self, c: Colour) {
        self.0 &= !(1u64 << c);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ColourSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: ColourSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn union(self, other: ColourSet) -> ColourSet {
        ColourSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColourSet) -> ColourSet {
        ColourSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColourSet) -> ColourSet {
        ColourSet(self.0 & !other.0)
    }

    /// Colours in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = Colour> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    /// All subsets of `self`, including `∅` and `self`.
    pub fn subsets(self) -> impl Iterator<Item = ColourSet> {
        // Standard submask enumeration, emitted from `self` down to `∅`.
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(ColourSet(cur))
        })
    }
}

impl Ord for ColourSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ColourSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Colour> for ColourSet {
    fn from_iter<T: IntoIterator<Item = Colour>>(iter: T) -> Self {
        let mut s = ColourSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Display for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_lexicographic_on_members() {
        let abd = ColourSet::from_iter([0, 1, 3]);
        let acd = ColourSet::from_iter([0, 2, 3]);
        let bcd = ColourSet::from_iter([1, 2, 3]);
        let mut v = vec![bcd, acd, abd];
        v.sort();
        assert_eq!(v, vec![abd, acd, bcd]);
        assert!(ColourSet::EMPTY < ColourSet::singleton(0));
        assert!(ColourSet::from_iter([0, 1]) < ColourSet::singleton(1));
    }

    #[test]
    fn subsets_enumerates_every_submask_once() {
        let s = ColourSet::from_iter([0, 2, 5]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(ColourSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn alphabet_rejects_duplicates_and_renders_sets() {
        assert!(ColourAlphabet::new(["a", "a"]).is_err());
        assert!(ColourAlphabet::new(Vec::<String>::new()).is_err());
        let abc = ColourAlphabet::letters(4);
        assert_eq!(abc.render(ColourSet::from_iter([0, 1, 3])), "abd");
        assert_eq!(abc.render(ColourSet::EMPTY), "∅");
        let long = ColourAlphabet::new(["red", "green"]).unwrap();
        assert_eq!(long.render(long.full()), "{red,green}");
    }
}
