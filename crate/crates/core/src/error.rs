use core::fmt;

use crate::hierarchy::NodeId;

/// A type alias for `Result<T, Error>`.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by hierarchy construction and evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A point's dimension differs from the dataset dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// The point index is not a leaf of the hierarchy.
    UnknownLeaf(usize),
    /// The point index is already a leaf of the hierarchy.
    DuplicateLeaf(usize),
    /// The node id does not refer to a live node.
    InvalidNode(NodeId),
    /// The node is not a leaf.
    NotALeaf(NodeId),
    /// Average intra-cluster similarity is undefined for fewer than two
    /// points (there are no pairs to average over).
    UndefinedAverage,
    /// Linkage requested for a cluster with no points.
    EmptyCluster,
    /// Two clusters that must be disjoint share leaves.
    OverlappingClusters,
    /// The operation needs more items than were supplied.
    TooFewItems { needed: usize, got: usize },
    /// The two hierarchies do not cover the same leaf index set.
    LeafSetMismatch,
    /// Node moments are absent or were built for a different dimension;
    /// call `Hierarchy::recompute_moments` first.
    MissingMoments,
    /// The instance exceeds the limit of an exhaustive computation.
    TooLarge { limit: usize, got: usize },
    /// The tree description is malformed.
    InvalidStructure(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "point has dimension {got}, dataset has dimension {expected}")
            }
            Error::UnknownLeaf(i) => write!(f, "point index {i} is not a leaf of the hierarchy"),
            Error::DuplicateLeaf(i) => write!(f, "point index {i} is already a leaf"),
            Error::InvalidNode(id) => write!(f, "node id {id} is not live"),
            Error::NotALeaf(id) => write!(f, "node {id} is not a leaf"),
            Error::UndefinedAverage => {
                write!(f, "average pairwise similarity is undefined for fewer than two points")
            }
            Error::EmptyCluster => write!(f, "linkage is undefined for an empty cluster"),
            Error::OverlappingClusters => write!(f, "cluster leaf sets overlap"),
            Error::TooFewItems { needed, got } => {
                write!(f, "needs at least {needed} items, got {got}")
            }
            Error::LeafSetMismatch => write!(f, "hierarchies cover different leaf sets"),
            Error::MissingMoments => {
                write!(f, "node moments are not populated for this dataset; recompute them first")
            }
            Error::TooLarge { limit, got } => {
                write!(f, "instance size {got} exceeds the exhaustive-search limit {limit}")
            }
            Error::InvalidStructure(msg) => write!(f, "malformed tree: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
