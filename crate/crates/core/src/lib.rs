//! Online and offline hierarchical clustering over streams of points.
//!
//! This crate maintains binary hierarchies (dendrograms) whose leaves are
//! point indices and whose internal nodes cache cluster moments, so that
//! average similarities and moment-based linkages evaluate in `O(d)` per
//! comparison. On top of that data model it provides:
//!
//! * [`offline::hac`] — agglomerative clustering with a lazy best-merge
//!   heap, plus [`offline::hac_forest`] which agglomerates a forest of
//!   pre-built subtrees without touching their internals.
//! * [`online::OnlineClusterer`] — streaming insertion under four update
//!   rules: a top-down descent (`otd`), a split–merge approximation of
//!   offline HAC (`ohac`), and two baselines (`naive1`, `naive2`).
//! * [`objectives`] — exact and sampled evaluators for the revenue and
//!   cost of a hierarchy under a similarity, and the triplet distance
//!   between two hierarchies.
//!
//! The crate is `no_std` (it requires `alloc`); file formats, dataset
//! generators, and the command-line interface live in the companion
//! `ohclust-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod dataset;
mod error;
mod hierarchy;
mod moments;

pub mod linkage;
pub mod objectives;
pub mod offline;
pub mod online;

pub use dataset::{Dataset, Similarity};
pub use error::{Error, Result};
pub use hierarchy::{Forest, Hierarchy, NodeId, TreeNode};
pub use linkage::{LinkageKind, LinkageSpec, Orientation};
pub use moments::ClusterMoments;
