use std::collections::HashMap;

use crate::colour::{ColourAlphabet, ColourSet};
use crate::player::Player;

use super::tree::{shape, ZielonkaTree};

/// Node of a [`ZielonkaDag`] or of a cropped DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagNode {
    pub label: ColourSet,
    pub owner: Player,
    /// Children in canonical label order.
    pub children: Vec<usize>,
}

impl DagNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// The Zielonka tree with all nodes sharing a label merged.
///
/// Node indices follow the first preorder appearance of each label, so the
/// root is node 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZielonkaDag {
    nodes: Vec<DagNode>,
}

impl ZielonkaDag {
    pub fn from_tree(tree: &ZielonkaTree) -> ZielonkaDag {
        let mut nodes: Vec<DagNode> = Vec::new();
        let mut index: HashMap<ColourSet, usize> = HashMap::new();
        Self::insert(tree, &mut nodes, &mut index);
        ZielonkaDag { nodes }
    }

    fn insert(
        t: &ZielonkaTree,
        nodes: &mut Vec<DagNode>,
        index: &mut HashMap<ColourSet, usize>,
    ) -> usize {
        if let Some(&i) = index.get(&t.label()) {
            // The subtree under a label depends only on the label.
            debug_assert_eq!(nodes[i].owner, t.owner());
            return i;
        }
        let id = nodes.len();
        index.insert(t.label(), id);
        nodes.push(DagNode {
            label: t.label(),
            owner: t.owner(),
            children: Vec::new(),
        });
        let children = t
            .children()
            .iter()
            .map(|c| Self::insert(c, nodes, index))
            .collect();
        nodes[id].children = children;
        id
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &DagNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Parent → child pairs in node order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
            .collect()
    }

    /// The r-number of every node, computed on the DAG. Since the subtree of
    /// a label is unique, this is the r-number of any tree node with it.
    pub fn r_numbers(&self) -> Vec<usize> {
        r_numbers(&self.nodes)
    }

    pub fn to_dot(&self, alphabet: &ColourAlphabet) -> String {
        nodes_to_dot("zielonka_dag", &self.nodes, alphabet)
    }
}

/// Evaluates the r recursion on an acyclic node list (children have larger
/// labels' subsets, so memoised DFS terminates).
pub(crate) fn r_numbers(nodes: &[DagNode]) -> Vec<usize> {
    fn go(i: usize, nodes: &[DagNode], memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let n = &nodes[i];
        let v = if n.is_leaf() {
            1
        } else {
            let inner: Vec<usize> = n
                .children
                .iter()
                .filter(|&&c| !nodes[c].is_leaf())
                .map(|&c| go(c, nodes, memo))
                .collect();
            match n.owner {
                Player::Adam => inner.into_iter().max().unwrap_or(1).max(1),
                Player::Eve => {
                    let has_leaf = n.children.iter().any(|&c| nodes[c].is_leaf());
                    inner.into_iter().sum::<usize>() + usize::from(has_leaf)
                }
            }
        };
        memo[i] = Some(v);
        v
    }
    let mut memo = vec![None; nodes.len()];
    (0..nodes.len()).map(|i| go(i, nodes, &mut memo)).collect()
}

pub(crate) fn nodes_to_dot(name: &str, nodes: &[DagNode], alphabet: &ColourAlphabet) -> String {
    let mut out = format!("digraph {name} {{\n");
    for (i, n) in nodes.iter().enumerate() {
        out.push_str(&format!(
            "  n{i} [label=\"{}\", shape={}];\n",
            alphabet.render(n.label),
            shape(n.owner)
        ));
    }
    for (i, n) in nodes.iter().enumerate() {
        for c in &n.children {
            out.push_str(&format!("  n{i} -> n{c};\n"));
        }
    }
    out.push_str("}\n");
    out
}
