use std::collections::{BTreeMap, HashMap};

use crate::colour::{ColourAlphabet, ColourSet};
use crate::player::Player;

use super::dag::{nodes_to_dot, r_numbers, DagNode, ZielonkaDag};

/// A sub-DAG of a Zielonka DAG where every Eve node keeps all its children
/// and every non-leaf Adam node keeps exactly one.
///
/// Nodes are renumbered in preorder from the root (node 0); `source` maps
/// them back to the DAG they were cut from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CroppedDag {
    nodes: Vec<DagNode>,
    source: Vec<usize>,
}

/// A root-to-leaf path `E_1 A_1 … E_ℓ (A_ℓ)` of cropped-DAG node indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch(pub Vec<usize>);

impl Branch {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of `node` on the branch.
    pub fn position(&self, node: usize) -> Option<usize> {
        self.0.iter().position(|&n| n == node)
    }
}

impl CroppedDag {
    /// Materialises the cropped DAG rooted at `root` using `choice` at Adam
    /// nodes (DAG indices).
    fn materialise(dag: &ZielonkaDag, root: usize, choice: &BTreeMap<usize, usize>) -> CroppedDag {
        let mut order: Vec<usize> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut stack = vec![root];
        while let Some(d) = stack.pop() {
            if index.contains_key(&d) {
                continue;
            }
            index.insert(d, order.len());
            order.push(d);
            for &c in kept_children(dag, d, choice).iter().rev() {
                if !index.contains_key(&c) {
                    stack.push(c);
                }
            }
        }
        let nodes = order
            .iter()
            .map(|&d| {
                let n = dag.node(d);
                DagNode {
                    label: n.label,
                    owner: n.owner,
                    children: kept_children(dag, d, choice)
                        .iter()
                        .map(|c| index[c])
                        .collect(),
                }
            })
            .collect();
        CroppedDag {
            nodes,
            source: order,
        }
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

    /// Index of each node in the source DAG.
    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn label(&self, i: usize) -> ColourSet {
        self.nodes[i].label
    }

    /// The r recursion evaluated on the cropped DAG.
    pub fn r_number(&self) -> usize {
        r_numbers(&self.nodes)[self.root()]
    }

    /// Whether the leaves are Adam's (equivalently `∅ ∉ F`).
    pub fn adam_leaves(&self) -> bool {
        self.nodes
            .iter()
            .filter(|n| n.is_leaf())
            .all(|n| n.owner == Player::Adam)
    }

    /// All root-to-leaf paths in depth-first canonical order.
    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        let mut path = vec![self.root()];
        self.branches_rec(&mut path, &mut out);
        out
    }

    fn branches_rec(&self, path: &mut Vec<usize>, out: &mut Vec<Branch>) {
        let last = *path.last().expect("non-empty path");
        if self.nodes[last].is_leaf() {
            out.push(Branch(path.clone()));
            return;
        }
        for &c in &self.nodes[last].children {
            path.push(c);
            self.branches_rec(path, out);
            path.pop();
        }
    }

    /// Partition of `branches()` (as indices) into classes of branches that
    /// one memory state can serve: branches that coincide once a final Adam
    /// leaf is dropped. Classes are ordered by first member.
    pub fn branch_classes(&self) -> Vec<Vec<usize>> {
        let branches = self.branches();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_key: HashMap<&[usize], usize> = HashMap::new();
        for (i, b) in branches.iter().enumerate() {
            let key = self.class_key(b);
            match by_key.get(key) {
                Some(&k) => classes[k].push(i),
                None => {
                    by_key.insert(key, classes.len());
                    classes.push(vec![i]);
                }
            }
        }
        classes
    }

    fn class_key<'a>(&self, b: &'a Branch) -> &'a [usize] {
        let nodes = b.nodes();
        match nodes.last() {
            Some(&l) if self.nodes[l].owner == Player::Adam && nodes.len() > 1 => {
                &nodes[..nodes.len() - 1]
            }
            _ => nodes,
        }
    }

    pub fn to_dot(&self, alphabet: &ColourAlphabet) -> String {
        nodes_to_dot("cropped_dag", &self.nodes, alphabet)
    }
}

fn kept_children(dag: &ZielonkaDag, d: usize, choice: &BTreeMap<usize, usize>) -> Vec<usize> {
    let n = dag.node(d);
    match n.owner {
        Player::Eve => n.children.clone(),
        Player::Adam => choice.get(&d).map(|&c| vec![c]).unwrap_or_default(),
    }
}

fn root_candidates(dag: &ZielonkaDag) -> Vec<usize> {
    let root = dag.node(dag.root());
    if root.owner == Player::Eve || root.is_leaf() {
        vec![dag.root()]
    } else {
        root.children.clone()
    }
}

/// Lazily enumerates every cropped DAG of `dag`.
///
/// Choices are only made at Adam nodes reachable from the chosen root, in
/// canonical order, so each cropped DAG is produced exactly once.
pub fn enumerate_cropped_dags(dag: &ZielonkaDag) -> CroppedDags<'_> {
    let stack = root_candidates(dag)
        .into_iter()
        .rev()
        .map(|r| (r, BTreeMap::new()))
        .collect();
    CroppedDags { dag, stack }
}

pub struct CroppedDags<'a> {
    dag: &'a ZielonkaDag,
    stack: Vec<(usize, BTreeMap<usize, usize>)>,
}

impl Iterator for CroppedDags<'_> {
    type Item = CroppedDag;

    fn next(&mut self) -> Option<CroppedDag> {
        while let Some((root, choice)) = self.stack.pop() {
            match first_open_adam_node(self.dag, root, &choice) {
                None => return Some(CroppedDag::materialise(self.dag, root, &choice)),
                Some(a) => {
                    for &c in self.dag.node(a).children.iter().rev() {
                        let mut next = choice.clone();
                        next.insert(a, c);
                        self.stack.push((root, next));
                    }
                }
            }
        }
        None
    }
}

/// Smallest-index reachable Adam node with children but no choice yet.
fn first_open_adam_node(dag: &ZielonkaDag, root: usize, choice: &BTreeMap<usize, usize>) -> Option<usize> {
    let mut seen = vec![false; dag.len()];
    let mut stack = vec![root];
    let mut open: Option<usize> = None;
    while let Some(d) = stack.pop() {
        if std::mem::replace(&mut seen[d], true) {
            continue;
        }
        let n = dag.node(d);
        if n.owner == Player::Adam && !n.is_leaf() && !choice.contains_key(&d) {
            open = Some(open.map_or(d, |o| o.min(d)));
            continue;
        }
        stack.extend(kept_children(dag, d, choice));
    }
    open
}

/// A cropped DAG whose r-number is maximal, obtained by keeping at every
/// Adam node (and at an Adam root) a child of largest r-number, the first
/// such in canonical order.
pub fn optimal_cropped_dag(dag: &ZielonkaDag) -> CroppedDag {
    let r = dag.r_numbers();
    let best = |cands: &[usize]| -> usize {
        let mut best = cands[0];
        for &c in cands {
            if r[c] > r[best] {
                best = c;
            }
        }
        best
    };
    let root = best(&root_candidates(dag));
    let mut choice = BTreeMap::new();
    for (i, n) in dag.nodes().iter().enumerate() {
        if n.owner == Player::Adam && !n.is_leaf() {
            choice.insert(i, best(&n.children));
        }
    }
    CroppedDag::materialise(dag, root, &choice)
}
