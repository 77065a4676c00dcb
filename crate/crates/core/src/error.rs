use thiserror::Error;

/// Everything that can go wrong across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("newick syntax error at byte {position}: {message}")]
    NewickSyntax { position: usize, message: String },
    #[error("leaf name {name:?} at byte {position} is not a positive integer")]
    LeafName { position: usize, name: String },
    #[error("duplicate leaf label {0}")]
    DuplicateLeaf(u32),
    #[error("leaf labels must be 1..n with no gaps; label {0} is missing")]
    MissingLeaf(u32),
    #[error("negative edge length at byte {0}")]
    NegativeLength(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("unknown leaf label {0}")]
    UnknownLeaf(u32),
    #[error("edge index {0} out of range")]
    UnknownEdge(usize),
    #[error("root split fraction must lie in [0, 1]")]
    FractionRange,
    #[error("cannot unroot: root has degree {0}, expected 2")]
    RootDegree(usize),
    #[error("tree needs at least {0} leaves")]
    TooFewLeaves(usize),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("subset has {got} members, expected {expected}")]
    SubsetSize { expected: usize, got: usize },
    #[error("m = {m} out of range for n = {n}")]
    MOutOfRange { m: usize, n: usize },
    #[error("edge functional has {got} values, expected {expected}")]
    FunctionalArity { expected: usize, got: usize },
    #[error("edge functional is not nonnegative on the simple roots: {0}")]
    FunctionalNotValid(String),
    #[error("relation shape ({rel_m}, {rel_n}) does not match vector shape ({vec_m}, {vec_n})")]
    ShapeMismatch {
        rel_m: usize,
        rel_n: usize,
        vec_m: usize,
        vec_n: usize,
    },
    #[error("leaf sets differ: {0}")]
    LeafSetMismatch(String),
    #[error("bad parameter: {0}")]
    Parameter(String),
    #[error("malformed vector data: {0}")]
    VectorFormat(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
