//! Sorted leaf subsets and their lexicographic enumeration.

use crate::error::Error;
use itertools::Itertools;

/// A sorted set of at least two leaf labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafSubset {
    members: Vec<u32>,
}

impl LeafSubset {
    /// Builds a subset from strictly increasing labels `>= 1`.
    pub fn new(members: Vec<u32>) -> Result<Self, Error> {
        if members.len() < 2 {
            return Err(Error::InvalidSubset(format!(
                "need at least two members, got {}",
                members.len()
            )));
        }
        if members[0] == 0 {
            return Err(Error::InvalidSubset("leaf labels start at 1".into()));
        }
        if !members.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSubset(format!(
                "members must be strictly increasing, got {members:?}"
            )));
        }
        Ok(LeafSubset { members })
    }

    /// Sorts and deduplicate-checks an arbitrary label list.
    pub fn from_labels(mut labels: Vec<u32>) -> Result<Self, Error> {
        labels.sort_unstable();
        Self::new(labels)
    }

    /// The unordered pair `{i, j}`.
    pub fn pair(i: u32, j: u32) -> Result<Self, Error> {
        Self::from_labels(vec![i, j])
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, label: u32) -> bool {
        self.members.binary_search(&label).is_ok()
    }
}

impl AsRef<[u32]> for LeafSubset {
    fn as_ref(&self) -> &[u32] {
        &self.members
    }
}

impl std::fmt::Display for LeafSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.members.iter().join(","))
    }
}

/// All m-subsets of `{1..n}` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> impl Iterator<Item = LeafSubset> {
    (1..=n as u32)
        .combinations(m)
        .map(|members| LeafSubset { members })
}

/// Binomial coefficient as a usize; panics on overflow, which desk-scale
/// inputs never reach.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial fits in usize")
}
