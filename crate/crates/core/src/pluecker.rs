//! Quadratic Pluecker exchange relations and their tropical evaluation.
//!
//! For an (m-1)-subset I and an (m+1)-subset J of `{1..n}` the exchange
//! relation is `sum_t (-1)^t p_{I + j_t} p_{J - j_t}`, skipping the j_t
//! already in I and absorbing the index-sorting sign into the coefficient.
//! A weight vector w passes a relation tropically when the optimum of the
//! per-monomial weights `w(left) + w(right)` is attained at least twice;
//! `check_all` runs this over the whole generating set. The generating set
//! is the quadratic exchange family, so the certificate is exactly the
//! monomial-free condition for these generators, not a Groebner-basis
//! statement about the full ideal.

use crate::dissimilarity::{m_dissimilarity, m_from_pairwise, pairwise};
use crate::error::Error;
use crate::rational::{format_exact, ratio, Rational};
use crate::subsets::{subsets, LeafSubset};
use crate::tree::WeightedTree;
use crate::weights::{from_metric_tree, weight_vector, WeightVector};
use itertools::Itertools;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Whether the tropical optimum is the minimum or the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Min,
    Max,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convention::Min => "min",
            Convention::Max => "max",
        })
    }
}

/// One quadratic monomial `coefficient * p_left * p_right`, with the pair
/// stored in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadMonomial {
    pub coefficient: i64,
    pub left: LeafSubset,
    pub right: LeafSubset,
}

/// A normalized quadratic relation: at least two monomials, sorted by index
/// pair, leading coefficient positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRelation {
    m: usize,
    n: usize,
    monomials: Vec<QuadMonomial>,
}

/// Monomial list of a relation in comparable form, for duplicate removal.
type DedupKey = Vec<(Vec<u32>, Vec<u32>, i64)>;

impl QuadraticRelation {
    fn normalize(
        m: usize,
        n: usize,
        terms: impl IntoIterator<Item = (i64, Vec<u32>, Vec<u32>)>,
    ) -> Option<Self> {
        let mut merged: BTreeMap<(Vec<u32>, Vec<u32>), i64> = BTreeMap::new();
        for (coefficient, left, right) in terms {
            let key = if left <= right { (left, right) } else { (right, left) };
            *merged.entry(key).or_insert(0) += coefficient;
        }
        let mut monomials: Vec<QuadMonomial> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((left, right), coefficient)| QuadMonomial {
                coefficient,
                left: LeafSubset::new(left).expect("indices are sorted m-subsets"),
                right: LeafSubset::new(right).expect("indices are sorted m-subsets"),
            })
            .collect();
        if monomials.is_empty() {
            return None;
        }
        if monomials[0].coefficient < 0 {
            for monomial in &mut monomials {
                monomial.coefficient = -monomial.coefficient;
            }
        }
        Some(QuadraticRelation { m, n, monomials })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &[QuadMonomial] {
        &self.monomials
    }

    fn dedup_key(&self) -> DedupKey {
        self.monomials
            .iter()
            .map(|mono| {
                (
                    mono.left.members().to_vec(),
                    mono.right.members().to_vec(),
                    mono.coefficient,
                )
            })
            .collect()
    }
}

impl std::fmt::Display for QuadraticRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, mono) in self.monomials.iter().enumerate() {
            let sign = if mono.coefficient < 0 { "-" } else { "+" };
            if i > 0 || sign == "-" {
                write!(f, " {sign} ")?;
            }
            let scale = mono.coefficient.unsigned_abs();
            if scale != 1 {
                write!(f, "{scale}*")?;
            }
            write!(f, "p{}p{}", mono.left, mono.right)?;
        }
        Ok(())
    }
}

/// The classical three-term relations: for every `i < j < k < l`,
/// `p_ij p_kl - p_ik p_jl + p_il p_jk`.
pub fn three_term_relations(n: usize) -> Result<Vec<QuadraticRelation>, Error> {
    if n < 4 {
        return Err(Error::MOutOfRange { m: 2, n });
    }
    Ok(subsets(n, 4)
        .map(|quad| {
            let [i, j, k, l]: [u32; 4] = quad.members().try_into().expect("size 4");
            QuadraticRelation::normalize(
                2,
                n,
                [
                    (1, vec![i, j], vec![k, l]),
                    (-1, vec![i, k], vec![j, l]),
                    (1, vec![i, l], vec![j, k]),
                ],
            )
            .expect("three distinct monomials")
        })
        .collect())
}

/// All exchange relations for the given shape, deduplicated up to overall
/// sign, in the scan order of their defining subset pairs. Shapes with no
/// surviving relation yield an empty list.
pub fn exchange_relations(m: usize, n: usize) -> Result<Vec<QuadraticRelation>, Error> {
    if m < 2 || m > n {
        return Err(Error::MOutOfRange { m, n });
    }
    let labels: Vec<u32> = (1..=n as u32).collect();
    let mut seen: BTreeSet<DedupKey> = BTreeSet::new();
    let mut out = Vec::new();
    for small in labels.iter().copied().combinations(m - 1) {
        for large in labels.iter().copied().combinations(m + 1) {
            let terms = large.iter().enumerate().filter_map(|(t, &moved)| {
                if small.binary_search(&moved).is_ok() {
                    return None;
                }
                let displaced = small.iter().filter(|&&i| i > moved).count();
                let sign = if (t + 1 + displaced) % 2 == 0 { 1 } else { -1 };
                let mut left = small.clone();
                left.push(moved);
                left.sort_unstable();
                let right = large
                    .iter()
                    .copied()
                    .filter(|&j| j != moved)
                    .collect::<Vec<_>>();
                Some((sign, left, right))
            });
            if let Some(relation) = QuadraticRelation::normalize(m, n, terms) {
                if seen.insert(relation.dedup_key()) {
                    out.push(relation);
                }
            }
        }
    }
    Ok(out)
}

/// Tropical evaluation of one relation against a weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// `w(left) + w(right)` per monomial, in relation order.
    pub weights: Vec<Rational>,
    pub optimum: Rational,
    /// Indices of the monomials attaining the optimum.
    pub achievers: Vec<usize>,
    pub passed: bool,
}

/// Checks that the optimum monomial weight is attained at least twice.
pub fn tropical_check(
    relation: &QuadraticRelation,
    w: &WeightVector,
    convention: Convention,
) -> Result<RelationCheck, Error> {
    if relation.m != w.m() || relation.n != w.n() {
        return Err(Error::ShapeMismatch {
            rel_m: relation.m,
            rel_n: relation.n,
            vec_m: w.m(),
            vec_n: w.n(),
        });
    }
    let weights: Vec<Rational> = relation
        .monomials
        .iter()
        .map(|mono| {
            let left = w
                .value(mono.left.members())
                .ok_or_else(|| Error::Internal(format!("no entry for {}", mono.left)))?;
            let right = w
                .value(mono.right.members())
                .ok_or_else(|| Error::Internal(format!("no entry for {}", mono.right)))?;
            Ok(left + right)
        })
        .collect::<Result<_, Error>>()?;
    let optimum = match convention {
        Convention::Min => weights.iter().min(),
        Convention::Max => weights.iter().max(),
    }
    .expect("relations have monomials")
    .clone();
    let achievers: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, weight)| **weight == optimum)
        .map(|(i, _)| i)
        .collect();
    let passed = achievers.len() >= 2;
    Ok(RelationCheck {
        weights,
        optimum,
        achievers,
        passed,
    })
}

/// A failed relation, kept with its evidence.
#[derive(Clone, Debug)]
pub struct RelationFailure {
    pub relation: QuadraticRelation,
    pub check: RelationCheck,
}

/// Outcome of checking a weight vector against every exchange relation of
/// its shape under one convention.
#[derive(Clone, Debug)]
pub struct TropicalCertificate {
    pub m: usize,
    pub n: usize,
    pub convention: Convention,
    pub relations_checked: usize,
    pub passed: bool,
    /// Per-relation results, in generation order.
    pub results: Vec<RelationCheck>,
    pub failures: Vec<RelationFailure>,
}

#[derive(Serialize)]
struct CertificateJson {
    m: usize,
    n: usize,
    convention: String,
    relations_checked: usize,
    passed: bool,
    failures: Vec<FailureJson>,
}

#[derive(Serialize)]
struct FailureJson {
    relation: RelationJson,
    weights: Vec<String>,
    optimum: String,
    achievers: Vec<usize>,
}

#[derive(Serialize)]
struct RelationJson {
    monomials: Vec<MonomialJson>,
}

#[derive(Serialize)]
struct MonomialJson {
    coefficient: i64,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl TropicalCertificate {
    pub fn to_json_string(&self) -> String {
        let json = CertificateJson {
            m: self.m,
            n: self.n,
            convention: self.convention.to_string(),
            relations_checked: self.relations_checked,
            passed: self.passed,
            failures: self
                .failures
                .iter()
                .map(|failure| FailureJson {
                    relation: RelationJson {
                        monomials: failure
                            .relation
                            .monomials()
                            .iter()
                            .map(|mono| MonomialJson {
                                coefficient: mono.coefficient,
                                left: mono.left.members().to_vec(),
                                right: mono.right.members().to_vec(),
                            })
                            .collect(),
                    },
                    weights: failure.check.weights.iter().map(format_exact).collect(),
                    optimum: format_exact(&failure.check.optimum),
                    achievers: failure.check.achievers.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&json).expect("certificate serialization cannot fail")
    }
}

/// Runs `tropical_check` over the full exchange generating set of w's shape.
pub fn check_all(w: &WeightVector, convention: Convention) -> TropicalCertificate {
    let relations =
        exchange_relations(w.m(), w.n()).expect("weight vectors have valid shapes");
    let mut results = Vec::with_capacity(relations.len());
    let mut failures = Vec::new();
    for relation in &relations {
        let check = tropical_check(relation, w, convention)
            .expect("generated relations match the vector shape");
        if !check.passed {
            failures.push(RelationFailure {
                relation: relation.clone(),
                check: check.clone(),
            });
        }
        results.push(check);
    }
    TropicalCertificate {
        m: w.m(),
        n: w.n(),
        convention,
        relations_checked: relations.len(),
        passed: failures.is_empty(),
        results,
        failures,
    }
}

/// End-to-end demonstration for one tree: computes the m-dissimilarity by
/// hulls and by minimal cycles, realizes it through a rooted tree functional
/// on the first edge, insists all three agree, then certifies tropically.
pub struct MembershipDemo {
    pub vector: WeightVector,
    pub certificate: TropicalCertificate,
}

pub fn tree_membership_demo(
    tree: &WeightedTree,
    m: usize,
    convention: Convention,
) -> Result<MembershipDemo, Error> {
    let direct = m_dissimilarity(tree, m)?;
    let cyclic = m_from_pairwise(&pairwise(tree), m)?;
    if direct != cyclic {
        return Err(Error::Internal(
            "hull and cyclic-sum dissimilarities disagree".into(),
        ));
    }
    let tf = from_metric_tree(tree, m, 0, &ratio(1, 2))?;
    let realized = weight_vector(&tf);
    if !realized.matches_dissimilarity(&direct) {
        return Err(Error::Internal(
            "tree functional does not realize the dissimilarity vector".into(),
        ));
    }
    let certificate = check_all(&realized, convention);
    Ok(MembershipDemo {
        vector: realized,
        certificate,
    })
}
