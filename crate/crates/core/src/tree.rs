//! Weighted leaf-labeled trees, rooted orientations, paths, and hulls.

use crate::error::Error;
use crate::rational::Rational;
use crate::subsets::LeafSubset;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub type NodeId = usize;
pub type EdgeId = usize;

/// An undirected edge with a nonnegative rational length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub endpoints: (NodeId, NodeId),
    pub length: Rational,
}

/// A subset of a tree's edge indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    edges: BTreeSet<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: EdgeId) -> bool {
        self.edges.contains(&edge)
    }

    pub fn insert(&mut self, edge: EdgeId) {
        self.edges.insert(edge);
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

/// An unrooted tree whose degree-1 nodes carry the leaf labels `1..n`.
///
/// Nodes are dense indices `0..num_nodes`; edges are dense indices into a
/// fixed edge list, so edge identity survives any operation that does not
/// rebuild the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    leaf_of_label: Vec<NodeId>,
    label_of_node: Vec<Option<u32>>,
}

impl WeightedTree {
    /// Validates and assembles a tree: connected, acyclic, nonnegative
    /// lengths, and leaf labels `1..n` in bijection with the degree-1 nodes.
    pub fn from_edges(
        num_nodes: usize,
        edges: Vec<(NodeId, NodeId, Rational)>,
        leaf_labels: impl IntoIterator<Item = (u32, NodeId)>,
    ) -> Result<Self, Error> {
        if num_nodes < 2 {
            return Err(Error::TooFewLeaves(2));
        }
        if edges.len() + 1 != num_nodes {
            return Err(Error::InvalidTree(format!(
                "{} edges cannot span {} nodes",
                edges.len(),
                num_nodes
            )));
        }
        let mut adjacency = vec![Vec::new(); num_nodes];
        let mut tree_edges = Vec::with_capacity(edges.len());
        for (id, (a, b, length)) in edges.into_iter().enumerate() {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidTree(format!(
                    "edge ({a}, {b}) mentions a node outside 0..{num_nodes}"
                )));
            }
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at node {a}")));
            }
            if length < Rational::zero() {
                return Err(Error::InvalidTree(format!(
                    "edge ({a}, {b}) has negative length {length}"
                )));
            }
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
            tree_edges.push(TreeEdge {
                endpoints: (a, b),
                length,
            });
        }

        let mut seen = vec![false; num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }

        let mut label_of_node = vec![None; num_nodes];
        let mut count = 0usize;
        for (label, node) in leaf_labels {
            if label == 0 {
                return Err(Error::InvalidTree("leaf labels start at 1".into()));
            }
            if node >= num_nodes {
                return Err(Error::InvalidTree(format!(
                    "leaf label {label} assigned to missing node {node}"
                )));
            }
            if label_of_node[node].replace(label).is_some() {
                return Err(Error::InvalidTree(format!(
                    "node {node} carries two leaf labels"
                )));
            }
            count += 1;
        }
        let mut leaf_of_label = vec![usize::MAX; count];
        for (node, label) in label_of_node.iter().enumerate() {
            if let Some(label) = *label {
                let slot = label as usize - 1;
                if slot >= count {
                    return Err(Error::MissingLeaf(
                        (1..=count as u32)
                            .find(|l| {
                                !label_of_node.contains(&Some(*l))
                            })
                            .unwrap_or(1),
                    ));
                }
                if leaf_of_label[slot] != usize::MAX {
                    return Err(Error::DuplicateLeaf(label));
                }
                leaf_of_label[slot] = node;
            }
        }
        for (node, entry) in adjacency.iter().enumerate() {
            let is_leaf = entry.len() == 1;
            let labeled = label_of_node[node].is_some();
            if is_leaf && !labeled {
                return Err(Error::InvalidTree(format!(
                    "degree-1 node {node} has no leaf label"
                )));
            }
            if labeled && !is_leaf {
                return Err(Error::InvalidTree(format!(
                    "labeled node {node} has degree {}",
                    entry.len()
                )));
            }
        }

        Ok(WeightedTree {
            edges: tree_edges,
            adjacency,
            leaf_of_label,
            label_of_node,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of labeled leaves, i.e. the `n` in labels `1..n`.
    pub fn num_leaves(&self) -> usize {
        self.leaf_of_label.len()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, edge: EdgeId) -> Result<&TreeEdge, Error> {
        self.edges.get(edge).ok_or(Error::UnknownEdge(edge))
    }

    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn leaf_node(&self, label: u32) -> Result<NodeId, Error> {
        self.leaf_of_label
            .get(label.checked_sub(1).ok_or(Error::UnknownLeaf(0))? as usize)
            .copied()
            .ok_or(Error::UnknownLeaf(label))
    }

    pub fn node_label(&self, node: NodeId) -> Option<u32> {
        self.label_of_node.get(node).copied().flatten()
    }

    /// Total length of a set of edges.
    pub fn total_length(&self, set: &EdgeSet) -> Rational {
        set.iter().map(|e| &self.edges[e].length).sum()
    }

    /// Parent / parent-edge arrays for the orientation away from `root`.
    /// The returned order lists nodes so that parents precede children.
    fn orient(&self, root: NodeId) -> (Vec<Option<NodeId>>, Vec<Option<EdgeId>>, Vec<NodeId>) {
        let n = self.num_nodes();
        let mut parent = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, e) in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    parent_edge[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        (parent, parent_edge, order)
    }

    /// Edges on the unique path between two leaves; empty when `i == j`.
    pub fn leaf_path(&self, i: u32, j: u32) -> Result<EdgeSet, Error> {
        let source = self.leaf_node(i)?;
        let target = self.leaf_node(j)?;
        if source == target {
            return Ok(EdgeSet::new());
        }
        let (parent, parent_edge, _) = self.orient(source);
        let mut set = EdgeSet::new();
        let mut v = target;
        while v != source {
            set.insert(parent_edge[v].expect("tree is connected"));
            v = parent[v].expect("tree is connected");
        }
        Ok(set)
    }

    /// Edge set of the smallest subtree spanning the given leaves: an edge
    /// belongs to the hull exactly when both of its sides contain a member.
    pub fn convex_hull(&self, subset: &LeafSubset) -> Result<EdgeSet, Error> {
        let mut member = vec![false; self.num_nodes()];
        for &label in subset.members() {
            member[self.leaf_node(label)?] = true;
        }
        let m = subset.size();
        let (_, parent_edge, order) = self.orient(0);
        let mut below = vec![0usize; self.num_nodes()];
        let mut hull = EdgeSet::new();
        for &v in order.iter().rev() {
            below[v] += member[v] as usize;
            if let Some(e) = parent_edge[v] {
                if below[v] > 0 && below[v] < m {
                    hull.insert(e);
                }
                let (a, b) = self.edges[e].endpoints;
                let parent = if a == v { b } else { a };
                below[parent] += below[v];
            }
        }
        Ok(hull)
    }

    /// Splits `edge` at the given fraction of its length and roots the tree
    /// at the new node. Both halves remember the edge they came from.
    pub fn add_root(&self, edge: EdgeId, fraction: &Rational) -> Result<RootedTree, Error> {
        let split = self.edge(edge)?.clone();
        if fraction < &Rational::zero() || fraction > &Rational::from_integer(1.into()) {
            return Err(Error::FractionRange);
        }
        let root = self.num_nodes();
        let (a, b) = split.endpoints;
        let mut edges: Vec<(NodeId, NodeId, Rational)> = self
            .edges
            .iter()
            .map(|e| (e.endpoints.0, e.endpoints.1, e.length.clone()))
            .collect();
        edges[edge] = (a, root, fraction * &split.length);
        edges.push((
            root,
            b,
            (Rational::from_integer(1.into()) - fraction) * &split.length,
        ));
        let labels = self
            .leaf_of_label
            .iter()
            .enumerate()
            .map(|(i, &node)| (i as u32 + 1, node));
        let base = WeightedTree::from_edges(root + 1, edges, labels)?;
        let mut origin: Vec<EdgeId> = (0..self.edges.len()).collect();
        origin.push(edge);
        Ok(RootedTree::with_origin(base, root, origin))
    }
}

/// A weighted tree together with a distinguished root node and the
/// orientation pointing away from it.
#[derive(Clone, Debug)]
pub struct RootedTree {
    base: WeightedTree,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    parent_edge: Vec<Option<EdgeId>>,
    order: Vec<NodeId>,
    edge_origin: Vec<EdgeId>,
}

impl RootedTree {
    /// Roots an existing tree at one of its nodes without altering edges.
    pub fn at_node(base: WeightedTree, root: NodeId) -> Result<Self, Error> {
        if root >= base.num_nodes() {
            return Err(Error::InvalidTree(format!("root node {root} out of range")));
        }
        let origin = (0..base.num_edges()).collect();
        Ok(Self::with_origin(base, root, origin))
    }

    fn with_origin(base: WeightedTree, root: NodeId, edge_origin: Vec<EdgeId>) -> Self {
        let (parent, parent_edge, order) = base.orient(root);
        RootedTree {
            base,
            root,
            parent,
            parent_edge,
            order,
            edge_origin,
        }
    }

    pub fn base(&self) -> &WeightedTree {
        &self.base
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(node).copied().flatten()
    }

    pub fn parent_edge(&self, node: NodeId) -> Option<EdgeId> {
        self.parent_edge.get(node).copied().flatten()
    }

    /// Nodes listed with every parent before its children.
    pub fn top_down(&self) -> &[NodeId] {
        &self.order
    }

    /// The pre-split edge a given edge descends from. Identity unless the
    /// tree was built by splitting an edge for the root.
    pub fn edge_origin(&self, edge: EdgeId) -> EdgeId {
        self.edge_origin[edge]
    }

    /// Removes a degree-2 root, merging its two incident edges.
    pub fn unroot(&self) -> Result<WeightedTree, Error> {
        let incident = self.base.neighbors(self.root);
        if incident.len() != 2 {
            return Err(Error::RootDegree(incident.len()));
        }
        let ((a, ea), (b, eb)) = (incident[0], incident[1]);
        let merged_length = &self.base.edges[ea].length + &self.base.edges[eb].length;
        let renumber = |v: NodeId| if v > self.root { v - 1 } else { v };
        let mut edges: Vec<(NodeId, NodeId, Rational)> = self
            .base
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| *id != ea && *id != eb)
            .map(|(_, e)| (renumber(e.endpoints.0), renumber(e.endpoints.1), e.length.clone()))
            .collect();
        edges.push((renumber(a), renumber(b), merged_length));
        let labels = self
            .base
            .leaf_of_label
            .iter()
            .enumerate()
            .map(|(i, &node)| (i as u32 + 1, renumber(node)));
        WeightedTree::from_edges(self.base.num_nodes() - 1, edges, labels)
    }
}

/// Deterministic random trivalent tree: repeated leaf insertion into a
/// uniformly chosen edge, then lengths drawn as positive rationals whose
/// denominators stay at or below `max_denominator`.
pub fn random_tree(n: usize, seed: u64, max_denominator: u32) -> Result<WeightedTree, Error> {
    if n < 3 {
        return Err(Error::TooFewLeaves(3));
    }
    if max_denominator == 0 {
        return Err(Error::Parameter("max_denominator must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Leaf with label l sits at node l - 1; internal nodes follow.
    let mut next_node = n;
    let center = next_node;
    next_node += 1;
    let mut edges: Vec<(NodeId, NodeId)> = vec![(0, center), (1, center), (2, center)];
    for leaf in 3..n {
        let split = rng.gen_range(0..edges.len());
        let (a, b) = edges[split];
        let mid = next_node;
        next_node += 1;
        edges[split] = (a, mid);
        edges.push((mid, b));
        edges.push((leaf, mid));
    }
    let weighted = edges
        .into_iter()
        .map(|(a, b)| {
            let num = rng.gen_range(1..=2 * max_denominator as i64);
            let den = rng.gen_range(1..=max_denominator as i64);
            (a, b, crate::rational::ratio(num, den))
        })
        .collect();
    WeightedTree::from_edges(
        next_node,
        weighted,
        (0..n).map(|i| (i as u32 + 1, i)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::rational::{int, ratio};
    use crate::subsets::subsets;

    pub(crate) const BALANCED_EIGHT: &str =
        "(((1:1,2:1):1,(3:1,4:1):1):1,((5:1,6:1):1,(7:1,8:1):1):1);";

    /// Exhaustive simple-path search, independent of the BFS in `leaf_path`.
    fn all_simple_paths(
        tree: &WeightedTree,
        from: NodeId,
        to: NodeId,
        visited: &mut Vec<NodeId>,
        found: &mut Vec<Vec<EdgeId>>,
        trail: &mut Vec<EdgeId>,
    ) {
        if from == to {
            found.push(trail.clone());
            return;
        }
        for &(w, e) in tree.neighbors(from) {
            if !visited.contains(&w) {
                visited.push(w);
                trail.push(e);
                all_simple_paths(tree, w, to, visited, found, trail);
                trail.pop();
                visited.pop();
            }
        }
    }

    fn brute_path(tree: &WeightedTree, i: u32, j: u32) -> EdgeSet {
        let (s, t) = (tree.leaf_node(i).unwrap(), tree.leaf_node(j).unwrap());
        let mut found = Vec::new();
        all_simple_paths(tree, s, t, &mut vec![s], &mut found, &mut Vec::new());
        assert_eq!(found.len(), 1, "trees have unique simple paths");
        found.pop().unwrap().into_iter().collect()
    }

    pub(crate) fn brute_hull(tree: &WeightedTree, subset: &LeafSubset) -> EdgeSet {
        let mut acc = EdgeSet::new();
        for (a, &i) in subset.members().iter().enumerate() {
            for &j in &subset.members()[a + 1..] {
                acc = acc.union(&tree.leaf_path(i, j).unwrap());
            }
        }
        acc
    }

    #[test]
    fn from_edges_rejects_broken_structures() {
        let unit = || int(1);
        // Disconnected: two 2-node components.
        let err = WeightedTree::from_edges(
            4,
            vec![(0, 1, unit()), (2, 3, unit())],
            [(1, 0), (2, 1), (3, 2), (4, 3)],
        );
        assert!(matches!(err, Err(Error::InvalidTree(_))));
        // Cycle: 3 nodes, 3 edges.
        let err = WeightedTree::from_edges(
            3,
            vec![(0, 1, unit()), (1, 2, unit()), (2, 0, unit())],
            [(1, 0), (2, 1), (3, 2)],
        );
        assert!(matches!(err, Err(Error::InvalidTree(_))));
        // Negative length.
        let err = WeightedTree::from_edges(2, vec![(0, 1, int(-1))], [(1, 0), (2, 1)]);
        assert!(matches!(err, Err(Error::InvalidTree(_))));
        // Unlabeled degree-1 node.
        let err = WeightedTree::from_edges(3, vec![(0, 1, unit()), (1, 2, unit())], [(1, 0)]);
        assert!(matches!(err, Err(Error::InvalidTree(_))));
        // Gap in labels.
        let err = WeightedTree::from_edges(
            4,
            vec![(0, 3, unit()), (1, 3, unit()), (2, 3, unit())],
            [(1, 0), (2, 1), (4, 2)],
        );
        assert!(matches!(err, Err(Error::MissingLeaf(_))));
        // Zero-length edges are fine.
        assert!(WeightedTree::from_edges(2, vec![(0, 1, int(0))], [(1, 0), (2, 1)]).is_ok());
    }

    #[test]
    fn path_on_cherry_and_balanced_tree() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        assert_eq!(tree.leaf_path(1, 2).unwrap().len(), 2);
        assert_eq!(tree.leaf_path(1, 3).unwrap().len(), 4);
        assert_eq!(tree.leaf_path(1, 5).unwrap().len(), 6);
        assert!(tree.leaf_path(3, 3).unwrap().is_empty());
        assert!(matches!(tree.leaf_path(1, 9), Err(Error::UnknownLeaf(9))));
    }

    #[test]
    fn path_matches_exhaustive_search() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        for i in 1..=8 {
            for j in 1..=8 {
                assert_eq!(tree.leaf_path(i, j).unwrap(), brute_path(&tree, i, j));
            }
        }
        for seed in 0..8 {
            let tree = random_tree(7, seed, 8).unwrap();
            for i in 1..=7 {
                for j in i + 1..=7 {
                    assert_eq!(tree.leaf_path(i, j).unwrap(), brute_path(&tree, i, j));
                }
            }
        }
    }

    #[test]
    fn hull_of_pair_is_the_path() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        for i in 1..=8u32 {
            for j in i + 1..=8 {
                let pair = LeafSubset::pair(i, j).unwrap();
                assert_eq!(tree.convex_hull(&pair).unwrap(), tree.leaf_path(i, j).unwrap());
            }
        }
    }

    #[test]
    fn hull_matches_pairwise_union() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        for m in 2..=5 {
            for subset in subsets(8, m) {
                assert_eq!(
                    tree.convex_hull(&subset).unwrap(),
                    brute_hull(&tree, &subset),
                    "subset {subset}"
                );
            }
        }
    }

    #[test]
    fn hull_of_three_leaves_on_balanced_tree() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        let hull = tree
            .convex_hull(&LeafSubset::new(vec![1, 2, 3]).unwrap())
            .unwrap();
        assert_eq!(hull.len(), 5);
        assert_eq!(tree.total_length(&hull), int(5));
    }

    #[test]
    fn hull_of_all_leaves_covers_trivalent_tree() {
        let tree = random_tree(6, 11, 4).unwrap();
        let everyone = LeafSubset::new((1..=6).collect()).unwrap();
        assert_eq!(tree.convex_hull(&everyone).unwrap().len(), tree.num_edges());
    }

    #[test]
    fn add_root_splits_lengths() {
        let tree = parse_newick("((1:1,2:1):1,3:1);").unwrap();
        let edge = tree
            .edges()
            .iter()
            .position(|e| {
                tree.node_label(e.endpoints.0).is_none() && tree.node_label(e.endpoints.1).is_none()
            })
            .unwrap();
        let rooted = tree.add_root(edge, &ratio(1, 2)).unwrap();
        assert_eq!(rooted.base().num_nodes(), tree.num_nodes() + 1);
        assert_eq!(rooted.base().edges()[edge].length, ratio(1, 2));
        let new_edge = rooted.base().num_edges() - 1;
        assert_eq!(rooted.base().edges()[new_edge].length, ratio(1, 2));
        assert_eq!(rooted.edge_origin(new_edge), edge);
        assert_eq!(rooted.edge_origin(edge), edge);
        assert_eq!(rooted.base().degree(rooted.root()), 2);

        let zero = tree.add_root(edge, &int(0)).unwrap();
        assert_eq!(zero.base().edges()[edge].length, int(0));
        assert_eq!(zero.base().edges()[new_edge].length, int(1));
        assert!(matches!(tree.add_root(edge, &int(2)), Err(Error::FractionRange)));
        assert!(matches!(tree.add_root(99, &int(0)), Err(Error::UnknownEdge(99))));
    }

    #[test]
    fn add_root_preserves_hull_lengths() {
        for seed in 0..6 {
            let tree = random_tree(6, seed, 8).unwrap();
            for edge in [0, tree.num_edges() / 2, tree.num_edges() - 1] {
                let rooted = tree.add_root(edge, &ratio(1, 3)).unwrap();
                for subset in subsets(6, 3) {
                    let before = tree.total_length(&tree.convex_hull(&subset).unwrap());
                    let after = rooted
                        .base()
                        .total_length(&rooted.base().convex_hull(&subset).unwrap());
                    assert_eq!(before, after, "subset {subset} edge {edge}");
                }
            }
        }
    }

    #[test]
    fn unroot_merges_the_split_edge() {
        let tree = parse_newick(BALANCED_EIGHT).unwrap();
        // The serialized tree has a degree-2 node joining the two halves.
        let hub = (0..tree.num_nodes()).find(|&v| tree.degree(v) == 2).unwrap();
        let rooted = RootedTree::at_node(tree, hub).unwrap();
        let unrooted = rooted.unroot().unwrap();
        assert_eq!(unrooted.num_edges(), 13);
        let long: Vec<_> = unrooted
            .edges()
            .iter()
            .filter(|e| e.length == int(2))
            .collect();
        assert_eq!(long.len(), 1, "exactly one merged edge of length 2");

        let deg3 = (0..unrooted.num_nodes()).find(|&v| unrooted.degree(v) == 3).unwrap();
        let rooted3 = RootedTree::at_node(unrooted, deg3).unwrap();
        assert!(matches!(rooted3.unroot(), Err(Error::RootDegree(3))));
    }

    #[test]
    fn random_trees_are_deterministic_and_trivalent() {
        for n in [3, 5, 8, 10] {
            let a = random_tree(n, 42, 16).unwrap();
            let b = random_tree(n, 42, 16).unwrap();
            assert_eq!(a, b);
            let c = random_tree(n, 43, 16).unwrap();
            assert!(n == 3 || a != c, "different seeds should differ for n = {n}");
            assert_eq!(a.num_edges(), 2 * n - 3);
            for v in 0..a.num_nodes() {
                assert!(matches!(a.degree(v), 1 | 3));
            }
            for e in a.edges() {
                assert!(e.length > int(0));
                assert!(e.length.denom() <= &16.into());
            }
        }
        assert!(matches!(random_tree(2, 0, 4), Err(Error::TooFewLeaves(3))));
    }

    #[test]
    fn three_leaf_random_tree_is_a_star() {
        let tree = random_tree(3, 7, 4).unwrap();
        assert_eq!(tree.num_nodes(), 4);
        assert_eq!(tree.degree(tree.leaf_node(1).unwrap()), 1);
        let center = (0..4).find(|&v| tree.degree(v) == 3).unwrap();
        assert!(tree.node_label(center).is_none());
    }
}
