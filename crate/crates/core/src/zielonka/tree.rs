use crate::colour::{ColourAlphabet, ColourSet};
use crate::condition::MullerCondition;
use crate::player::Player;

/// The Zielonka tree of a Muller condition.
///
/// Every node carries a colour set; it is Eve's iff the set is winning.
/// The children of a node labelled `X` are the maximal strict subsets of
/// `X` owned by the other player, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZielonkaTree {
    label: ColourSet,
    owner: Player,
    children: Vec<ZielonkaTree>,
}

impl ZielonkaTree {
    /// Builds the tree of `condition` rooted at the full alphabet. If the
    /// alphabet itself is losing the root is Adam's.
    pub fn build(condition: &MullerCondition) -> ZielonkaTree {
        Self::build_at(condition, condition.alphabet().full())
    }

    /// Builds the subtree of `condition` restricted to `label`.
    pub fn build_at(condition: &MullerCondition, label: ColourSet) -> ZielonkaTree {
        let owner = if condition.wins(label) {
            Player::Eve
        } else {
            Player::Adam
        };
        let children = condition
            .maximal_opposite_subsets(label)
            .into_iter()
            .map(|c| Self::build_at(condition, c))
            .collect();
        ZielonkaTree {
            label,
            owner,
            children,
        }
    }

    pub fn label(&self) -> ColourSet {
        self.label
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn children(&self) -> &[ZielonkaTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ZielonkaTree::size).sum::<usize>()
    }

    /// Preorder traversal.
    pub fn nodes(&self) -> Vec<&ZielonkaTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// The same tree with every owner swapped: the tree of the complement
    /// condition.
    pub fn dual(&self) -> ZielonkaTree {
        ZielonkaTree {
            label: self.label,
            owner: self.owner.opponent(),
            children: self.children.iter().map(ZielonkaTree::dual).collect(),
        }
    }

    /// Pure sure-strategy memory bound: 1 at leaves, max at Adam nodes,
    /// sum at Eve nodes.
    pub fn memory_m(&self) -> usize {
        if self.is_leaf() {
            return 1;
        }
        let kids = self.children.iter().map(ZielonkaTree::memory_m);
        match self.owner {
            Player::Adam => kids.max().unwrap_or(1),
            Player::Eve => kids.sum(),
        }
    }

    /// Like [`memory_m`](Self::memory_m) but 1 at every node whose
    /// restricted condition `F↾label` is upward-closed.
    pub fn memory_mu(&self, condition: &MullerCondition) -> usize {
        if self.is_leaf() || condition.is_upward_closed_within(self.label) {
            return 1;
        }
        let kids = self.children.iter().map(|c| c.memory_mu(condition));
        match self.owner {
            Player::Adam => kids.max().unwrap_or(1),
            Player::Eve => kids.sum(),
        }
    }

    /// Randomised almost-sure memory bound. Sibling leaves under an Eve
    /// node share a single unit of memory.
    pub fn memory_r(&self) -> usize {
        if self.is_leaf() {
            return 1;
        }
        let inner = self.children.iter().filter(|c| !c.is_leaf());
        match self.owner {
            Player::Adam => inner.map(ZielonkaTree::memory_r).max().unwrap_or(1).max(1),
            Player::Eve => {
                let has_leaf = self.children.iter().any(ZielonkaTree::is_leaf);
                inner.map(ZielonkaTree::memory_r).sum::<usize>() + usize::from(has_leaf)
            }
        }
    }

    /// Shape test for randomised memoryless strategies: every Eve node has a
    /// single child or only leaf children.
    pub fn admits_memoryless_randomised(&self) -> bool {
        let here = self.owner == Player::Adam
            || self.children.len() <= 1
            || self.children.iter().all(ZielonkaTree::is_leaf);
        here && self
            .children
            .iter()
            .all(ZielonkaTree::admits_memoryless_randomised)
    }

    /// Graphviz rendering; Eve nodes are ellipses, Adam nodes boxes.
    pub fn to_dot(&self, alphabet: &ColourAlphabet) -> String {
        let mut out = String::from("digraph zielonka_tree {\n");
        let mut next_id = 0usize;
        self.dot_rec(alphabet, &mut out, &mut next_id);
        out.push_str("}\n");
        out
    }

    fn dot_rec(&self, alphabet: &ColourAlphabet, out: &mut String, next_id: &mut usize) -> usize {
        let id = *next_id;
        *next_id += 1;
        out.push_str(&format!(
            "  n{id} [label=\"{}\", shape={}];\n",
            alphabet.render(self.label),
            shape(self.owner)
        ));
        for c in &self.children {
            let cid = c.dot_rec(alphabet, out, next_id);
            out.push_str(&format!("  n{id} -> n{cid};\n"));
        }
        id
    }
}

pub(crate) fn shape(owner: Player) -> &'static str {
    match owner {
        Player::Eve => "ellipse",
        Player::Adam => "box",
    }
}
