//! Acceptance gate: one test per release criterion, each with its stated
//! tolerance (always exact) and runtime budget. A failing criterion here
//! rejects the build.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treetrop::rational::{int, ratio};
use treetrop::subsets::subsets;
use treetrop::{
    check_all, exchange_relations, four_point_check, from_metric_tree, m_dissimilarity,
    m_from_pairwise, neighbor_joining, pairwise, parse_newick, random_tree, to_newick,
    tree_isomorphic, tropical_check, weight_vector, Convention, DissimilarityVector,
    QuadraticRelation, Rational, WeightVector, WeightedTree,
};

/// The shared 50-tree corpus: seeded trivalent trees with 4 to 8 leaves.
fn corpus() -> Vec<WeightedTree> {
    (0u64..50)
        .map(|seed| random_tree(4 + (seed as usize % 5), seed, 12).expect("valid parameters"))
        .collect()
}

fn budget(name: &str, elapsed: Duration, limit: Duration) {
    println!("{name}: finished in {elapsed:?} (budget {limit:?})");
    assert!(
        elapsed < limit,
        "{name} exceeded its runtime budget: {elapsed:?} >= {limit:?}"
    );
}

#[test]
fn criterion_1_golden_weights_on_the_balanced_eight_leaf_tree() {
    let start = Instant::now();
    // Unrooted form of the balanced rooted binary tree on 8 leaves with unit
    // edges; rooting the unique length-2 edge at its midpoint restores the
    // rooted tree in which every edge has length 1.
    let tree = parse_newick("((1:1,2:1):1,(3:1,4:1):1,((5:1,6:1):1,(7:1,8:1):1):2);").unwrap();
    let long_edges: Vec<usize> = (0..tree.num_edges())
        .filter(|&e| tree.edges()[e].length == int(2))
        .collect();
    assert_eq!(long_edges.len(), 1, "exactly one edge of length 2");

    let functional = from_metric_tree(&tree, 3, long_edges[0], &ratio(1, 2)).unwrap();
    let weights = weight_vector(&functional);
    assert!(weights.matches_dissimilarity(&m_dissimilarity(&tree, 3).unwrap()));

    let relations = exchange_relations(3, 8).unwrap();
    let wanted: Vec<(Vec<u32>, Vec<u32>)> = vec![
        (vec![1, 2, 3], vec![4, 5, 6]),
        (vec![1, 2, 4], vec![3, 5, 6]),
        (vec![1, 2, 5], vec![3, 4, 6]),
        (vec![1, 2, 6], vec![3, 4, 5]),
    ];
    let relation = relations
        .iter()
        .find(|rel| {
            rel.monomials()
                .iter()
                .map(|mono| (mono.left.members().to_vec(), mono.right.members().to_vec()))
                .collect::<Vec<_>>()
                == wanted
        })
        .expect("the four-term relation is generated");

    for convention in [Convention::Min, Convention::Max] {
        let check = tropical_check(relation, &weights, convention).unwrap();
        assert_eq!(
            check.weights,
            vec![int(12), int(12), int(14), int(14)],
            "monomial weights under {convention}"
        );
        assert!(
            check.achievers.len() >= 2,
            "{convention} optimum must be attained at least twice"
        );
        assert!(check.passed);
    }
    budget("criterion 1", start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_2_cyclic_formula_matches_hull_sums_on_the_corpus() {
    let start = Instant::now();
    let mut entries_checked = 0usize;
    for tree in corpus() {
        let n = tree.num_leaves();
        let d2 = pairwise(&tree);
        for m in 3..=5usize.min(n) {
            let direct = m_dissimilarity(&tree, m).unwrap();
            let cyclic = m_from_pairwise(&d2, m).unwrap();
            assert_eq!(direct, cyclic, "n = {n}, m = {m}");
            entries_checked += direct.entries().len();
        }
    }
    println!("criterion 2: {entries_checked} entries compared exactly");
    budget("criterion 2", start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_3_tree_vectors_pass_all_relations_under_max() {
    let start = Instant::now();
    let mut max_certificates = 0usize;
    let mut min_passes = 0usize;
    let mut min_total = 0usize;
    for tree in corpus() {
        let n = tree.num_leaves();
        for m in 2..=4usize.min(n) {
            let weights =
                WeightVector::from_dissimilarity(&m_dissimilarity(&tree, m).unwrap());
            let max_certificate = check_all(&weights, Convention::Max);
            assert!(
                max_certificate.passed,
                "max certificate failed for n = {n}, m = {m}: {} failures",
                max_certificate.failures.len()
            );
            max_certificates += 1;

            let min_certificate = check_all(&weights, Convention::Min);
            min_total += 1;
            if min_certificate.passed {
                min_passes += 1;
            }
        }
    }
    println!("criterion 3: {max_certificates} max certificates all pass");
    println!(
        "criterion 3: min convention reported (not asserted): {min_passes}/{min_total} certificates pass"
    );
    budget("criterion 3", start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_4_rooted_functionals_realize_dissimilarity_for_any_root() {
    let start = Instant::now();
    let fractions = [ratio(0, 1), ratio(1, 2), ratio(2, 3)];
    for (index, tree) in corpus().into_iter().enumerate() {
        let n = tree.num_leaves();
        let edge_count = tree.num_edges();
        let root_edges = [0, edge_count / 2, edge_count - 1];
        for m in 2..=5usize.min(n) {
            let expected = m_dissimilarity(&tree, m).unwrap();
            for (&root_edge, fraction) in root_edges.iter().zip(fractions.iter().cycle()) {
                let functional = from_metric_tree(&tree, m, root_edge, fraction).unwrap();
                let weights = weight_vector(&functional);
                assert!(
                    weights.matches_dissimilarity(&expected),
                    "tree {index}, m = {m}, root edge {root_edge}"
                );
            }
        }
    }
    budget("criterion 4", start.elapsed(), Duration::from_secs(30));
}

/// A pairwise vector with its {1,2} entry pushed past every competing pair
/// sum, so the quadruple {1,2,3,4} wrecks the four-point condition.
fn perturbed_metric(seed: u64) -> DissimilarityVector {
    let tree = random_tree(4 + (seed as usize % 5), seed, 12).unwrap();
    let d2 = pairwise(&tree);
    let total: Rational = d2.iter().map(|(_, v)| v.clone()).sum();
    let bump = total * int(2) + int(1);
    let entries: BTreeMap<Vec<u32>, Rational> = d2
        .iter()
        .map(|(subset, value)| {
            let value = if subset == [1, 2] { value + &bump } else { value.clone() };
            (subset.to_vec(), value)
        })
        .collect();
    DissimilarityVector::from_entries(d2.n(), 2, entries).unwrap()
}

#[test]
fn criterion_5_max_certification_agrees_with_the_four_point_condition() {
    let mut agreements = 0usize;
    for seed in 0u64..100 {
        let tree = random_tree(4 + (seed as usize % 5), seed, 12).unwrap();
        let d2 = pairwise(&tree);
        let four_point = four_point_check(&d2);
        let certificate = check_all(&WeightVector::from_dissimilarity(&d2), Convention::Max);
        assert!(four_point.passed, "tree metrics satisfy the four-point condition");
        assert!(certificate.passed, "tree metrics pass max certification");
        agreements += 1;
    }
    for seed in 0u64..100 {
        let d2 = perturbed_metric(seed);
        let four_point = four_point_check(&d2);
        let certificate = check_all(&WeightVector::from_dissimilarity(&d2), Convention::Max);
        assert!(!four_point.passed, "perturbed metrics violate the four-point condition");
        assert!(!certificate.passed, "perturbed metrics fail max certification");
        agreements += 1;
    }
    println!("criterion 5: {agreements}/200 vectors agree between the two checks");
    assert_eq!(agreements, 200);
}

fn det(matrix: &[Vec<Rational>]) -> Rational {
    let k = matrix.len();
    if k == 1 {
        return matrix[0][0].clone();
    }
    let mut total = int(0);
    for row in 0..k {
        if matrix[row][0] == int(0) {
            continue;
        }
        let rest: Vec<Vec<Rational>> = (0..k)
            .filter(|&r| r != row)
            .map(|r| matrix[r][1..].to_vec())
            .collect();
        let term = &matrix[row][0] * det(&rest);
        if row % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
                .collect()
        })
        .collect()
}

fn maximal_minors(matrix: &[Vec<Rational>], n: usize) -> BTreeMap<Vec<u32>, Rational> {
    let m = matrix.len();
    subsets(n, m)
        .map(|subset| {
            let square: Vec<Vec<Rational>> = (0..m)
                .map(|row| {
                    subset
                        .members()
                        .iter()
                        .map(|&col| matrix[row][col as usize - 1].clone())
                        .collect()
                })
                .collect();
            (subset.members().to_vec(), det(&square))
        })
        .collect()
}

fn evaluate_on_minors(
    relation: &QuadraticRelation,
    minors: &BTreeMap<Vec<u32>, Rational>,
) -> Rational {
    relation
        .monomials()
        .iter()
        .map(|mono| {
            int(mono.coefficient)
                * &minors[mono.left.members()]
                * &minors[mono.right.members()]
        })
        .sum()
}

#[test]
fn criterion_6_exchange_relations_vanish_on_maximal_minors() {
    let shapes = [(2, 4), (2, 5), (2, 6), (3, 5), (3, 6), (3, 7), (4, 6), (4, 8)];
    let mut evaluations = 0usize;
    for (shape_index, &(m, n)) in shapes.iter().enumerate() {
        let relations = exchange_relations(m, n).unwrap();
        assert!(!relations.is_empty(), "shape ({m}, {n}) generates relations");
        for trial in 0..20u64 {
            let seed = 1_000 * shape_index as u64 + trial;
            let minors = maximal_minors(&random_matrix(m, n, seed), n);
            for relation in &relations {
                assert_eq!(
                    evaluate_on_minors(relation, &minors),
                    int(0),
                    "shape ({m}, {n}), seed {seed}, relation {relation}"
                );
                evaluations += 1;
            }
        }
    }
    println!("criterion 6: {evaluations} relation evaluations, all exactly zero");
}

#[test]
fn criterion_7_neighbor_joining_round_trips_the_corpus() {
    for seed in 0u64..50 {
        let tree = random_tree(4 + (seed as usize % 7), seed, 12).unwrap();
        let outcome = neighbor_joining(&pairwise(&tree)).unwrap();
        assert!(outcome.exact, "seed {seed}: residual {}", outcome.residual);
        let report = tree_isomorphic(&tree, &outcome.tree).unwrap();
        assert!(report.isomorphic, "seed {seed}");
        assert!(report.length_match, "seed {seed}");
    }
    println!("criterion 7: 50 reconstruction round trips exact");
}

#[test]
fn criterion_8_formats_round_trip_exactly_on_the_corpus() {
    for (index, tree) in corpus().into_iter().enumerate() {
        let text = to_newick(&tree);
        let reparsed = parse_newick(&text).unwrap();
        let report = tree_isomorphic(&tree, &reparsed).unwrap();
        assert!(report.isomorphic && report.length_match, "tree {index}");
        assert_eq!(to_newick(&reparsed), text, "serialization is a fixed point");

        let d2 = pairwise(&tree);
        assert_eq!(
            DissimilarityVector::from_json_str(&d2.to_json_string()).unwrap(),
            d2,
            "tree {index} pairwise JSON"
        );
        let m = 3.min(tree.num_leaves());
        let higher = m_dissimilarity(&tree, m).unwrap();
        assert_eq!(
            DissimilarityVector::from_json_str(&higher.to_json_string()).unwrap(),
            higher,
            "tree {index} m = {m} JSON"
        );
        let functional = from_metric_tree(&tree, m, index % tree.num_edges(), &ratio(1, 3)).unwrap();
        let weights = weight_vector(&functional);
        assert_eq!(
            WeightVector::from_json_str(&weights.to_json_string()).unwrap(),
            weights,
            "tree {index} weight JSON"
        );
    }
    println!("criterion 8: all format round trips exact");
}
