//! Subtree-length vectors of weighted trees and checks on them.
//!
//! The m-dissimilarity of a leaf subset is the total edge length of the
//! smallest subtree spanning it. For m = 2 this is the leaf metric; larger
//! m can be recovered from the metric alone as half the minimal cyclic sum
//! of pairwise distances, and both routes are implemented independently.

use crate::error::Error;
use crate::rational::{format_exact, parse_number, Rational};
use crate::subsets::{binomial, subsets, LeafSubset};
use crate::tree::WeightedTree;
use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A complete vector of values, one per m-subset of `{1..n}`, kept in
/// lexicographic order. All values are nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissimilarityVector {
    n: usize,
    m: usize,
    entries: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    n: usize,
    m: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    subset: Vec<u32>,
    value: String,
}

impl DissimilarityVector {
    /// Validates completeness: exactly the C(n, m) subsets, nonnegative values.
    pub fn from_entries(
        n: usize,
        m: usize,
        entries: BTreeMap<Vec<u32>, Rational>,
    ) -> Result<Self, Error> {
        if m < 2 || m > n {
            return Err(Error::MOutOfRange { m, n });
        }
        if entries.len() != binomial(n, m) {
            return Err(Error::VectorFormat(format!(
                "expected {} entries for n = {n}, m = {m}, got {}",
                binomial(n, m),
                entries.len()
            )));
        }
        for (subset, value) in &entries {
            let checked = LeafSubset::new(subset.clone())
                .map_err(|e| Error::VectorFormat(e.to_string()))?;
            if checked.size() != m || subset.last().copied().unwrap_or(0) > n as u32 {
                return Err(Error::VectorFormat(format!(
                    "subset {checked} does not fit n = {n}, m = {m}"
                )));
            }
            if value < &Rational::zero() {
                return Err(Error::VectorFormat(format!(
                    "negative value {value} at {checked}"
                )));
            }
        }
        Ok(DissimilarityVector { n, m, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.entries
    }

    pub fn value(&self, subset: &[u32]) -> Option<&Rational> {
        self.entries.get(subset)
    }

    /// Leaf metric accessor for m = 2 vectors; `distance(i, i)` is zero.
    pub fn distance(&self, i: u32, j: u32) -> Result<Rational, Error> {
        assert_eq!(self.m, 2, "distance() reads an m = 2 vector");
        if i == j {
            if i == 0 || i > self.n as u32 {
                return Err(Error::UnknownLeaf(i));
            }
            return Ok(Rational::zero());
        }
        let key = [i.min(j), i.max(j)];
        self.entries
            .get(key.as_slice())
            .cloned()
            .ok_or(Error::UnknownLeaf(i.max(j)))
    }

    /// Entries in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn to_json_string(&self) -> String {
        let json = VectorJson {
            n: self.n,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(subset, value)| EntryJson {
                    subset: subset.clone(),
                    value: format_exact(value),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&json).expect("vector serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let json: VectorJson =
            serde_json::from_str(text).map_err(|e| Error::VectorFormat(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for entry in json.entries {
            let value = parse_number(&entry.value)
                .ok_or_else(|| Error::VectorFormat(format!("bad value {:?}", entry.value)))?;
            if entries.insert(entry.subset.clone(), value).is_some() {
                return Err(Error::VectorFormat(format!(
                    "subset {:?} appears twice",
                    entry.subset
                )));
            }
        }
        Self::from_entries(json.n, json.m, entries)
    }

    /// One line per subset: the members, then the value, tab-separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (subset, value) in &self.entries {
            for label in subset {
                out.push_str(&label.to_string());
                out.push('\t');
            }
            out.push_str(&format_exact(value));
            out.push('\n');
        }
        out
    }

    /// Reads the `to_tsv` format back; n is the largest label mentioned.
    pub fn from_tsv(text: &str) -> Result<Self, Error> {
        let mut entries = BTreeMap::new();
        let mut m = None;
        let mut n = 0u32;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(Error::VectorFormat(format!(
                    "line {}: need at least two labels and a value",
                    lineno + 1
                )));
            }
            let labels: Vec<u32> = fields[..fields.len() - 1]
                .iter()
                .map(|f| f.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| {
                    Error::VectorFormat(format!("line {}: bad leaf label", lineno + 1))
                })?;
            let value = parse_number(fields[fields.len() - 1]).ok_or_else(|| {
                Error::VectorFormat(format!("line {}: bad value", lineno + 1))
            })?;
            match m {
                None => m = Some(labels.len()),
                Some(m) if m != labels.len() => {
                    return Err(Error::VectorFormat(format!(
                        "line {}: subset size changed from {m}",
                        lineno + 1
                    )))
                }
                _ => {}
            }
            n = n.max(labels.last().copied().unwrap_or(0));
            if entries.insert(labels.clone(), value).is_some() {
                return Err(Error::VectorFormat(format!(
                    "line {}: subset {labels:?} appears twice",
                    lineno + 1
                )));
            }
        }
        let m = m.ok_or_else(|| Error::VectorFormat("no data lines".into()))?;
        Self::from_entries(n as usize, m, entries)
    }
}

/// The leaf metric: distances between all pairs of leaves.
pub fn pairwise(tree: &WeightedTree) -> DissimilarityVector {
    m_dissimilarity(tree, 2).expect("every tree has at least two leaves")
}

/// Total hull length for every m-subset of leaves.
pub fn m_dissimilarity(tree: &WeightedTree, m: usize) -> Result<DissimilarityVector, Error> {
    let n = tree.num_leaves();
    if m < 2 || m > n {
        return Err(Error::MOutOfRange { m, n });
    }
    let mut entries = BTreeMap::new();
    for subset in subsets(n, m) {
        let hull = tree.convex_hull(&subset)?;
        entries.insert(subset.members().to_vec(), tree.total_length(&hull));
    }
    DissimilarityVector::from_entries(n, m, entries)
}

/// Recovers the m-dissimilarity from the leaf metric alone: half the
/// minimum, over cyclic orders of the subset, of the sum of consecutive
/// pairwise distances. All (m-1)! cycles with a fixed starting leaf are
/// scanned, so each reversal pair is seen twice with equal sums.
pub fn m_from_pairwise(d2: &DissimilarityVector, m: usize) -> Result<DissimilarityVector, Error> {
    assert_eq!(d2.m(), 2, "m_from_pairwise starts from the leaf metric");
    let n = d2.n();
    if m < 2 || m > n {
        return Err(Error::MOutOfRange { m, n });
    }
    let mut dist = vec![vec![Rational::zero(); n + 1]; n + 1];
    for (pair, value) in d2.iter() {
        dist[pair[0] as usize][pair[1] as usize] = value.clone();
        dist[pair[1] as usize][pair[0] as usize] = value.clone();
    }
    let half = crate::rational::ratio(1, 2);
    let mut entries = BTreeMap::new();
    for subset in subsets(n, m) {
        let members = subset.members();
        let first = members[0] as usize;
        let mut best: Option<Rational> = None;
        for rest in members[1..].iter().permutations(m - 1) {
            let mut total = Rational::zero();
            let mut at = first;
            for &&next in &rest {
                total += &dist[at][next as usize];
                at = next as usize;
            }
            total += &dist[at][first];
            if best.as_ref().is_none_or(|b| &total < b) {
                best = Some(total);
            }
        }
        entries.insert(
            members.to_vec(),
            best.expect("at least one cyclic order") * &half,
        );
    }
    DissimilarityVector::from_entries(n, m, entries)
}

/// Outcome of the quadruple test on a leaf metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourPointCertificate {
    pub passed: bool,
    /// First failing quadruple in lexicographic order, with its three sums.
    pub witness: Option<FourPointWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourPointWitness {
    pub leaves: [u32; 4],
    pub sums: [Rational; 3],
}

/// Checks every quadruple `i < j < k < l`: among the three pairings
/// `d_ij + d_kl`, `d_ik + d_jl`, `d_il + d_jk`, the maximum must be
/// attained at least twice. Vacuously true when n < 4.
pub fn four_point_check(d2: &DissimilarityVector) -> FourPointCertificate {
    assert_eq!(d2.m(), 2, "four_point_check reads a leaf metric");
    let n = d2.n();
    if n >= 4 {
        for quad in subsets(n, 4) {
            let [i, j, k, l] = quad.members().try_into().expect("size 4");
            let d = |a: u32, b: u32| d2.distance(a, b).expect("complete metric");
            let sums = [d(i, j) + d(k, l), d(i, k) + d(j, l), d(i, l) + d(j, k)];
            let max = sums.iter().max().expect("three sums");
            if sums.iter().filter(|s| *s == max).count() < 2 {
                return FourPointCertificate {
                    passed: false,
                    witness: Some(FourPointWitness {
                        leaves: [i, j, k, l],
                        sums,
                    }),
                };
            }
        }
    }
    FourPointCertificate {
        passed: true,
        witness: None,
    }
}
