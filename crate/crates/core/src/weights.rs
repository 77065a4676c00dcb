//! Rooted-tree edge labels and the per-edge functionals that turn a tree
//! into a weight vector on Pluecker coordinates.
//!
//! Fix a rooted tree and an m-subset S of its leaves. Each edge e sees some
//! number n_e of members of S strictly above it (away from the root) and is
//! labeled with the fundamental weight of index `k = m - n_e`; indices 0 and
//! m are trivial and evaluate to zero. The nontrivially labeled edges are
//! exactly the hull of S, so assigning each edge its length times the
//! all-ones functional H recovers the m-dissimilarity entry by entry.

use crate::dissimilarity::DissimilarityVector;
use crate::error::Error;
use crate::rational::{format_exact, parse_number, Rational};
use crate::subsets::{binomial, subsets, LeafSubset};
use crate::tree::{EdgeId, RootedTree, WeightedTree};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Fundamental-weight index attached to an edge: `0..=m`, trivial at the ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightLabel {
    k: usize,
}

impl WeightLabel {
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn is_trivial(&self, m: usize) -> bool {
        self.k == 0 || self.k == m
    }
}

/// Labels every edge of the rooted tree for the given m-subset.
pub fn edge_labels(
    rooted: &RootedTree,
    subset: &LeafSubset,
    m: usize,
) -> Result<Vec<WeightLabel>, Error> {
    if subset.size() != m {
        return Err(Error::SubsetSize {
            expected: m,
            got: subset.size(),
        });
    }
    let base = rooted.base();
    let mut member = vec![false; base.num_nodes()];
    for &label in subset.members() {
        member[base.leaf_node(label)?] = true;
    }
    let mut above = vec![0usize; base.num_nodes()];
    let mut labels = vec![WeightLabel { k: 0 }; base.num_edges()];
    for &v in rooted.top_down().iter().rev() {
        above[v] += member[v] as usize;
        if let Some(e) = rooted.parent_edge(v) {
            labels[e] = WeightLabel { k: m - above[v] };
            above[rooted.parent(v).expect("non-root has a parent")] += above[v];
        }
    }
    Ok(labels)
}

/// Values of a linear functional on the nontrivial fundamental weights:
/// `values[k - 1]` is the value on index k, for k in `1..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFunctional {
    values: Vec<Rational>,
}

impl EdgeFunctional {
    pub fn new(values: Vec<Rational>) -> Self {
        EdgeFunctional { values }
    }

    /// The m this functional is sized for.
    pub fn rank(&self) -> usize {
        self.values.len() + 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn evaluate(&self, label: &WeightLabel) -> Rational {
        let m = self.rank();
        assert!(label.index() <= m, "label index {} exceeds m = {m}", label.index());
        if label.is_trivial(m) {
            Rational::zero()
        } else {
            self.values[label.index() - 1].clone()
        }
    }

    pub fn scaled(&self, factor: &Rational) -> EdgeFunctional {
        EdgeFunctional {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// True when the functional is nonnegative on every simple root:
/// `2h(k) - h(k-1) - h(k+1) >= 0` for `k = 1..m-1`, with the trivial ends
/// contributing zero.
pub fn validate_functional(h: &EdgeFunctional, m: usize) -> Result<bool, Error> {
    if m < 2 || h.values.len() != m - 1 {
        return Err(Error::FunctionalArity {
            expected: m.saturating_sub(1),
            got: h.values.len(),
        });
    }
    let zero = Rational::zero();
    let at = |k: usize| -> &Rational {
        if k == 0 || k == m {
            &zero
        } else {
            &h.values[k - 1]
        }
    };
    for k in 1..m {
        if at(k) * Rational::from_integer(2.into()) < at(k - 1) + at(k + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The all-ones functional: value 1 on every nontrivial index.
pub fn standard_h(m: usize) -> Result<EdgeFunctional, Error> {
    if m < 2 {
        return Err(Error::MOutOfRange { m, n: m });
    }
    Ok(EdgeFunctional {
        values: vec![Rational::from_integer(1.into()); m - 1],
    })
}

/// A rooted tree with a valid functional on every edge, evaluated against
/// the labels each leaf subset induces.
#[derive(Clone, Debug)]
pub struct TreeFunctional {
    rooted: RootedTree,
    m: usize,
    per_edge: Vec<EdgeFunctional>,
    provenance: Option<MetricProvenance>,
}

#[derive(Clone, Debug)]
struct MetricProvenance {
    root_edge: EdgeId,
    fraction: Rational,
}

impl TreeFunctional {
    /// Requires one valid functional of rank m per edge.
    pub fn new(
        rooted: RootedTree,
        m: usize,
        per_edge: Vec<EdgeFunctional>,
    ) -> Result<Self, Error> {
        if per_edge.len() != rooted.base().num_edges() {
            return Err(Error::FunctionalArity {
                expected: rooted.base().num_edges(),
                got: per_edge.len(),
            });
        }
        for (edge, h) in per_edge.iter().enumerate() {
            if !validate_functional(h, m)? {
                return Err(Error::FunctionalNotValid(format!(
                    "edge {edge} carries {:?}",
                    h.values
                )));
            }
        }
        Ok(TreeFunctional {
            rooted,
            m,
            per_edge,
            provenance: None,
        })
    }

    pub fn rooted(&self) -> &RootedTree {
        &self.rooted
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn per_edge(&self) -> &[EdgeFunctional] {
        &self.per_edge
    }
}

/// Evaluates the tree functional on one subset: the sum over edges of the
/// edge functional applied to that edge's label.
pub fn pluecker_weight(tf: &TreeFunctional, subset: &LeafSubset) -> Result<Rational, Error> {
    let labels = edge_labels(&tf.rooted, subset, tf.m)?;
    Ok(labels
        .iter()
        .zip(&tf.per_edge)
        .map(|(label, h)| h.evaluate(label))
        .sum())
}

/// Evaluates the tree functional on every m-subset.
pub fn weight_vector(tf: &TreeFunctional) -> WeightVector {
    let n = tf.rooted.base().num_leaves();
    let entries = subsets(n, tf.m)
        .map(|subset| {
            let value = pluecker_weight(tf, &subset).expect("subsets enumerate valid leaves");
            (subset.members().to_vec(), value)
        })
        .collect();
    WeightVector {
        n,
        m: tf.m,
        entries,
        source: tf.provenance.as_ref().map(|p| VectorSource {
            root_edge: p.root_edge,
            fraction: p.fraction.clone(),
            functional: FunctionalDescription::StandardH,
        }),
    }
}

/// Roots a metric tree by splitting `root_edge` at `fraction`, then puts
/// `length(e) * H` on every edge. The resulting weight vector equals the
/// m-dissimilarity of the tree, whichever edge carries the root.
pub fn from_metric_tree(
    tree: &WeightedTree,
    m: usize,
    root_edge: EdgeId,
    fraction: &Rational,
) -> Result<TreeFunctional, Error> {
    let n = tree.num_leaves();
    if m < 2 || m > n {
        return Err(Error::MOutOfRange { m, n });
    }
    let rooted = tree.add_root(root_edge, fraction)?;
    let h = standard_h(m)?;
    let per_edge = rooted
        .base()
        .edges()
        .iter()
        .map(|e| h.scaled(&e.length))
        .collect();
    let mut tf = TreeFunctional::new(rooted, m, per_edge)?;
    tf.provenance = Some(MetricProvenance {
        root_edge,
        fraction: fraction.clone(),
    });
    Ok(tf)
}

/// A value for every m-subset of `{1..n}`, with no sign constraint, plus an
/// optional record of the tree functional that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    n: usize,
    m: usize,
    entries: BTreeMap<Vec<u32>, Rational>,
    source: Option<VectorSource>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSource {
    pub root_edge: EdgeId,
    pub fraction: Rational,
    pub functional: FunctionalDescription,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalDescription {
    StandardH,
    PerEdge(Vec<Vec<Rational>>),
}

#[derive(Serialize, Deserialize)]
struct WeightVectorJson {
    n: usize,
    m: usize,
    entries: Vec<WeightEntryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<SourceJson>,
}

#[derive(Serialize, Deserialize)]
struct WeightEntryJson {
    subset: Vec<u32>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct SourceJson {
    tree_functional: TreeFunctionalJson,
}

#[derive(Serialize, Deserialize)]
struct TreeFunctionalJson {
    root_edge: usize,
    fraction: String,
    functional: serde_json::Value,
}

impl WeightVector {
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
        for subset in entries.keys() {
            let checked = LeafSubset::new(subset.clone())
                .map_err(|e| Error::VectorFormat(e.to_string()))?;
            if checked.size() != m || subset.last().copied().unwrap_or(0) > n as u32 {
                return Err(Error::VectorFormat(format!(
                    "subset {checked} does not fit n = {n}, m = {m}"
                )));
            }
        }
        Ok(WeightVector {
            n,
            m,
            entries,
            source: None,
        })
    }

    pub fn from_dissimilarity(d: &DissimilarityVector) -> Self {
        WeightVector {
            n: d.n(),
            m: d.m(),
            entries: d.entries().clone(),
            source: None,
        }
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

    pub fn source(&self) -> Option<&VectorSource> {
        self.source.as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Entry-wise equality against a dissimilarity vector.
    pub fn matches_dissimilarity(&self, d: &DissimilarityVector) -> bool {
        self.n == d.n() && self.m == d.m() && &self.entries == d.entries()
    }

    pub fn to_json_string(&self) -> String {
        let json = WeightVectorJson {
            n: self.n,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(subset, value)| WeightEntryJson {
                    subset: subset.clone(),
                    value: format_exact(value),
                })
                .collect(),
            source: self.source.as_ref().map(|s| SourceJson {
                tree_functional: TreeFunctionalJson {
                    root_edge: s.root_edge,
                    fraction: format_exact(&s.fraction),
                    functional: match &s.functional {
                        FunctionalDescription::StandardH => "H".into(),
                        FunctionalDescription::PerEdge(values) => serde_json::to_value(
                            values
                                .iter()
                                .map(|vs| vs.iter().map(format_exact).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        )
                        .expect("string arrays serialize"),
                    },
                },
            }),
        };
        serde_json::to_string_pretty(&json).expect("vector serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let json: WeightVectorJson =
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
        let mut vector = Self::from_entries(json.n, json.m, entries)?;
        if let Some(source) = json.source {
            let s = source.tree_functional;
            let fraction = parse_number(&s.fraction)
                .ok_or_else(|| Error::VectorFormat(format!("bad fraction {:?}", s.fraction)))?;
            let functional = match &s.functional {
                serde_json::Value::String(name) if name == "H" => FunctionalDescription::StandardH,
                serde_json::Value::Array(rows) => {
                    let mut parsed = Vec::with_capacity(rows.len());
                    for row in rows {
                        let row = row.as_array().ok_or_else(|| {
                            Error::VectorFormat("functional rows must be arrays".into())
                        })?;
                        parsed.push(
                            row.iter()
                                .map(|v| {
                                    v.as_str()
                                        .and_then(parse_number)
                                        .ok_or_else(|| {
                                            Error::VectorFormat("bad functional value".into())
                                        })
                                })
                                .collect::<Result<Vec<_>, _>>()?,
                        );
                    }
                    FunctionalDescription::PerEdge(parsed)
                }
                other => {
                    return Err(Error::VectorFormat(format!(
                        "unrecognized functional description {other}"
                    )))
                }
            };
            vector.source = Some(VectorSource {
                root_edge: s.root_edge,
                fraction,
                functional,
            });
        }
        Ok(vector)
    }
}
