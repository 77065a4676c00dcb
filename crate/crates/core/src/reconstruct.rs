//! Tree reconstruction from leaf metrics and leaf-labeled tree comparison.

use crate::dissimilarity::{pairwise, DissimilarityVector};
use crate::error::Error;
use crate::rational::Rational;
use crate::tree::{NodeId, WeightedTree};
use num_traits::Zero;

/// Result of neighbor joining: the reconstructed tree plus how far its leaf
/// metric deviates from the input (zero exactly on tree metrics).
#[derive(Clone, Debug)]
pub struct NjOutcome {
    pub tree: WeightedTree,
    /// Largest absolute difference between input and realized distances.
    pub residual: Rational,
    pub exact: bool,
}

/// Neighbor joining over exact rationals. Q-criterion ties go to the
/// lexicographically smallest node pair; limb lengths are clamped at zero,
/// which a valid tree metric never triggers.
pub fn neighbor_joining(d2: &DissimilarityVector) -> Result<NjOutcome, Error> {
    assert_eq!(d2.m(), 2, "neighbor joining starts from a leaf metric");
    let n = d2.n();
    if n < 3 {
        return Err(Error::TooFewLeaves(3));
    }
    let mut ids: Vec<NodeId> = (0..n).collect();
    let mut dist: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    d2.distance(i as u32 + 1, j as u32 + 1)
                        .expect("complete metric")
                })
                .collect()
        })
        .collect();
    let mut edges: Vec<(NodeId, NodeId, Rational)> = Vec::new();
    let mut next_node = n;
    let two = Rational::from_integer(2.into());

    while ids.len() > 3 {
        let r = ids.len();
        let row_sums: Vec<Rational> = dist.iter().map(|row| row.iter().sum()).collect();
        let scale = Rational::from_integer((r as i64 - 2).into());
        let mut best: Option<(usize, usize, Rational)> = None;
        for i in 0..r {
            for j in i + 1..r {
                let q = &dist[i][j] * &scale - &row_sums[i] - &row_sums[j];
                if best.as_ref().is_none_or(|(_, _, q0)| &q < q0) {
                    best = Some((i, j, q));
                }
            }
        }
        let (f, g, _) = best.expect("at least two active nodes");
        let limb_f = &dist[f][g] / &two + (&row_sums[f] - &row_sums[g]) / (&scale * &two);
        let limb_g = &dist[f][g] - &limb_f;
        let joined = next_node;
        next_node += 1;
        edges.push((ids[f], joined, limb_f.max(Rational::zero())));
        edges.push((ids[g], joined, limb_g.max(Rational::zero())));

        let mut new_ids = Vec::with_capacity(r - 1);
        let mut keep = Vec::with_capacity(r - 2);
        for (i, &id) in ids.iter().enumerate() {
            if i != f && i != g {
                keep.push(i);
                new_ids.push(id);
            }
        }
        new_ids.push(joined);
        let mut new_dist: Vec<Vec<Rational>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| dist[i][j].clone()).collect())
            .collect();
        let joined_row: Vec<Rational> = keep
            .iter()
            .map(|&k| (&dist[f][k] + &dist[g][k] - &dist[f][g]) / &two)
            .collect();
        for (row, value) in new_dist.iter_mut().zip(&joined_row) {
            row.push(value.clone());
        }
        let mut last = joined_row;
        last.push(Rational::zero());
        new_dist.push(last);
        ids = new_ids;
        dist = new_dist;
    }

    let center = next_node;
    next_node += 1;
    for (a, b, c) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        let limb = (&dist[a][b] + &dist[a][c] - &dist[b][c]) / &two;
        edges.push((ids[a], center, limb.max(Rational::zero())));
    }

    let tree = WeightedTree::from_edges(
        next_node,
        edges,
        (0..n).map(|i| (i as u32 + 1, i)),
    )?;
    let realized = pairwise(&tree);
    let mut residual = Rational::zero();
    for (pair, value) in d2.iter() {
        let diff = value - realized.value(pair).expect("same shape");
        let diff = if diff < Rational::zero() { -diff } else { diff };
        residual = residual.max(diff);
    }
    let exact = residual.is_zero();
    Ok(NjOutcome {
        tree,
        residual,
        exact,
    })
}

/// How two leaf-labeled trees compare after suppressing degree-2 nodes.
#[derive(Clone, Debug)]
pub struct IsomorphismReport {
    pub isomorphic: bool,
    /// Topology matches and every corresponding edge has the same length.
    pub length_match: bool,
    /// Node correspondence (suppressed nodes of a, then of b) when isomorphic.
    pub mapping: Option<Vec<(NodeId, NodeId)>>,
}

/// Canonical rooted encoding of a suppressed tree, rooted at leaf 1.
struct Encoding {
    leaf: Option<u32>,
    min_label: u32,
    original: NodeId,
    children: Vec<(Rational, Encoding)>,
}

impl Encoding {
    fn same_topology(&self, other: &Encoding) -> bool {
        self.leaf == other.leaf
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|((_, a), (_, b))| a.same_topology(b))
    }

    fn same_lengths(&self, other: &Encoding) -> bool {
        self.leaf == other.leaf
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|((la, a), (lb, b))| la == lb && a.same_lengths(b))
    }

    fn visit_order(&self, out: &mut Vec<NodeId>) {
        out.push(self.original);
        for (_, child) in &self.children {
            child.visit_order(out);
        }
    }
}

/// Adjacency of the tree with every degree-2 node melted into its edges.
fn suppressed_adjacency(tree: &WeightedTree) -> Vec<Vec<(NodeId, Rational)>> {
    let mut adjacency: Vec<Vec<(NodeId, Rational)>> = vec![Vec::new(); tree.num_nodes()];
    for (u, slot) in adjacency.iter_mut().enumerate() {
        if tree.degree(u) == 2 {
            continue;
        }
        for &(mut v, e) in tree.neighbors(u) {
            let mut length = tree.edges()[e].length.clone();
            let mut prev = u;
            while tree.degree(v) == 2 {
                let &(next, next_edge) = tree
                    .neighbors(v)
                    .iter()
                    .find(|&&(w, _)| w != prev)
                    .expect("degree-2 node has another side");
                length += &tree.edges()[next_edge].length;
                prev = v;
                v = next;
            }
            slot.push((v, length));
        }
    }
    adjacency
}

fn encode_from(
    tree: &WeightedTree,
    adjacency: &[Vec<(NodeId, Rational)>],
    node: NodeId,
    from: Option<NodeId>,
) -> Encoding {
    let mut children: Vec<(Rational, Encoding)> = adjacency[node]
        .iter()
        .filter(|&&(next, _)| Some(next) != from)
        .map(|(next, length)| (length.clone(), encode_from(tree, adjacency, *next, Some(node))))
        .collect();
    children.sort_by_key(|(_, child)| child.min_label);
    let leaf = tree.node_label(node);
    let min_label = leaf
        .into_iter()
        .chain(children.iter().map(|(_, c)| c.min_label))
        .min()
        .expect("every subtree contains a leaf");
    Encoding {
        leaf,
        min_label,
        original: node,
        children,
    }
}

fn encode(tree: &WeightedTree) -> Encoding {
    let adjacency = suppressed_adjacency(tree);
    let root = tree.leaf_node(1).expect("leaf 1 always exists");
    encode_from(tree, &adjacency, root, None)
}

/// Compares two trees on the same leaf set up to leaf-labeled isomorphism,
/// ignoring degree-2 nodes; lengths along suppressed chains are summed.
pub fn tree_isomorphic(a: &WeightedTree, b: &WeightedTree) -> Result<IsomorphismReport, Error> {
    if a.num_leaves() != b.num_leaves() {
        return Err(Error::LeafSetMismatch(format!(
            "{} leaves vs {} leaves",
            a.num_leaves(),
            b.num_leaves()
        )));
    }
    let enc_a = encode(a);
    let enc_b = encode(b);
    let isomorphic = enc_a.same_topology(&enc_b);
    let length_match = isomorphic && enc_a.same_lengths(&enc_b);
    let mapping = isomorphic.then(|| {
        let mut order_a = Vec::new();
        let mut order_b = Vec::new();
        enc_a.visit_order(&mut order_a);
        enc_b.visit_order(&mut order_b);
        order_a.into_iter().zip(order_b).collect()
    });
    Ok(IsomorphismReport {
        isomorphic,
        length_match,
        mapping,
    })
}

/// The canonical representative of a tree: degree-2 nodes suppressed, nodes
/// renumbered in the rooted-at-leaf-1 canonical visit order, edges listed
/// parent before child. Idempotent.
pub fn canonicalize(tree: &WeightedTree) -> WeightedTree {
    let encoding = encode(tree);
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut next_id = 0;
    fn assign(
        enc: &Encoding,
        next_id: &mut NodeId,
        edges: &mut Vec<(NodeId, NodeId, Rational)>,
        labels: &mut Vec<(u32, NodeId)>,
    ) -> NodeId {
        let id = *next_id;
        *next_id += 1;
        if let Some(label) = enc.leaf {
            labels.push((label, id));
        }
        for (length, child) in &enc.children {
            let child_id = assign(child, next_id, edges, labels);
            edges.push((id, child_id, length.clone()));
        }
        id
    }
    assign(&encoding, &mut next_id, &mut edges, &mut labels);
    WeightedTree::from_edges(next_id, edges, labels)
        .expect("canonicalization preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::rational::{int, ratio};
    use crate::subsets::subsets;
    use crate::tree::random_tree;
    use std::collections::BTreeMap;

    fn metric(n: usize, assign: impl Fn(&[u32]) -> Rational) -> DissimilarityVector {
        let entries: BTreeMap<Vec<u32>, Rational> = subsets(n, 2)
            .map(|s| (s.members().to_vec(), assign(s.members())))
            .collect();
        DissimilarityVector::from_entries(n, 2, entries).unwrap()
    }

    #[test]
    fn three_leaf_closed_form() {
        let d = metric(3, |pair| match pair {
            [1, 2] => int(3),
            [1, 3] => int(4),
            _ => int(5),
        });
        let out = neighbor_joining(&d).unwrap();
        assert!(out.exact);
        let limb = |leaf: u32| {
            let node = out.tree.leaf_node(leaf).unwrap();
            out.tree.edges()[out.tree.neighbors(node)[0].1].length.clone()
        };
        assert_eq!(limb(1), int(1));
        assert_eq!(limb(2), int(2));
        assert_eq!(limb(3), int(3));
    }

    #[test]
    fn recovers_random_trees_exactly() {
        for seed in 0..12 {
            let n = 4 + (seed as usize % 7);
            let tree = random_tree(n, seed, 16).unwrap();
            let out = neighbor_joining(&pairwise(&tree)).unwrap();
            assert!(out.exact, "seed {seed}");
            assert!(out.residual.is_zero());
            let report = tree_isomorphic(&tree, &out.tree).unwrap();
            assert!(report.isomorphic, "seed {seed}");
            assert!(report.length_match, "seed {seed}");
        }
    }

    #[test]
    fn non_tree_metric_reports_residual() {
        let d = metric(4, |pair| match pair {
            [1, 2] | [3, 4] => int(2),
            _ => int(1),
        });
        let out = neighbor_joining(&d).unwrap();
        assert!(!out.exact);
        assert!(out.residual > int(0));
        assert!(out.tree.edges().iter().all(|e| e.length >= int(0)));
    }

    #[test]
    fn too_few_leaves_is_rejected() {
        let d = metric(2, |_| int(1));
        assert!(matches!(neighbor_joining(&d), Err(Error::TooFewLeaves(3))));
    }

    #[test]
    fn isomorphism_ignores_node_numbering_but_sees_topology() {
        let a = parse_newick("((1:1,2:1):1,(3:1,4:1):1);").unwrap();
        let b = parse_newick("((4:1,3:1):1,(2:1,1:1):1);").unwrap();
        let report = tree_isomorphic(&a, &b).unwrap();
        assert!(report.isomorphic && report.length_match);

        let c = parse_newick("((1:1,3:1):1,(2:1,4:1):1);").unwrap();
        let report = tree_isomorphic(&a, &c).unwrap();
        assert!(!report.isomorphic);
        assert!(report.mapping.is_none());
    }

    #[test]
    fn isomorphism_separates_lengths_from_topology() {
        let a = parse_newick("((1:1,2:1):1,3:1);").unwrap();
        let b = parse_newick("((1:1,2:1):1,3:2);").unwrap();
        let report = tree_isomorphic(&a, &b).unwrap();
        assert!(report.isomorphic);
        assert!(!report.length_match);
    }

    #[test]
    fn mapping_pairs_equal_leaves() {
        let a = random_tree(6, 5, 8).unwrap();
        let out = neighbor_joining(&pairwise(&a)).unwrap();
        let report = tree_isomorphic(&a, &out.tree).unwrap();
        for (na, nb) in report.mapping.unwrap() {
            assert_eq!(a.node_label(na), out.tree.node_label(nb));
        }
    }

    #[test]
    fn suppression_melts_degree_two_nodes() {
        let with_hub = parse_newick("(((1:1,2:1):1,(3:1,4:1):1):1,((5:1,6:1):1,(7:1,8:1):1):1);")
            .unwrap();
        let canonical = canonicalize(&with_hub);
        assert!((0..canonical.num_nodes()).all(|v| canonical.degree(v) != 2));
        assert_eq!(canonical.num_edges(), 13);
        assert_eq!(
            canonical.edges().iter().filter(|e| e.length == int(2)).count(),
            1
        );
        assert_eq!(pairwise(&canonical), pairwise(&with_hub));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for seed in 0..6 {
            let tree = random_tree(6, seed, 8).unwrap();
            let rooted = tree.add_root(seed as usize % tree.num_edges(), &ratio(1, 3)).unwrap();
            let once = canonicalize(rooted.base());
            let twice = canonicalize(&once);
            assert_eq!(once, twice, "seed {seed}");
        }
    }

    #[test]
    fn unroot_add_root_is_identity_up_to_isomorphism() {
        for seed in 0..6 {
            let tree = random_tree(7, seed, 8).unwrap();
            let edge = (seed as usize * 3 + 1) % tree.num_edges();
            let rooted = tree.add_root(edge, &ratio(2, 5)).unwrap();
            let back = rooted.unroot().unwrap();
            let report = tree_isomorphic(&tree, &back).unwrap();
            assert!(report.isomorphic && report.length_match, "seed {seed}");
        }
    }

    #[test]
    fn leaf_set_mismatch_is_an_error() {
        let a = random_tree(4, 0, 4).unwrap();
        let b = random_tree(5, 0, 4).unwrap();
        assert!(matches!(
            tree_isomorphic(&a, &b),
            Err(Error::LeafSetMismatch(_))
        ));
    }
}
