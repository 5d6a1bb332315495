//! Cluster linkages computable from moments of order ≤ 2.
//!
//! Every shipped kind evaluates in `O(d)` from two [`ClusterMoments`]
//! summaries, so all-pairs linkage tables over `m` clusters cost
//! `O(m² · d)` once moments are accumulated. Single, complete, and
//! Ward-style linkages are deliberately absent: they cannot be computed
//! from bounded moments.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::moments::ClusterMoments;

/// The linkage formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkageKind {
    /// Dot product of the cluster centroids.
    CentroidDot,
    /// Mean dot product over all cross pairs. Evaluates to the same number
    /// as [`LinkageKind::CentroidDot`] on every cluster pair, through a
    /// different arithmetic path.
    AverageDot,
    /// Mean squared Euclidean distance over all cross pairs.
    AverageL2Sq,
    /// Squared Euclidean distance between the cluster centroids.
    CentroidL2Sq,
}

impl LinkageKind {
    /// The kind name used by the command-line vocabulary.
    pub fn name(&self) -> &'static str {
        match self {
            LinkageKind::CentroidDot => "centroid-dot",
            LinkageKind::AverageDot => "average-dot",
            LinkageKind::AverageL2Sq => "average-l2sq",
            LinkageKind::CentroidL2Sq => "centroid-l2sq",
        }
    }

    /// Dot-product linkages score similarity (merge the argmax pair);
    /// squared-distance linkages score dissimilarity (merge the argmin).
    pub fn default_orientation(&self) -> Orientation {
        match self {
            LinkageKind::CentroidDot | LinkageKind::AverageDot => Orientation::Maximize,
            LinkageKind::AverageL2Sq | LinkageKind::CentroidL2Sq => Orientation::Minimize,
        }
    }
}

/// Whether agglomeration merges the pair with the largest or smallest
/// linkage value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

/// A linkage kind together with its merge orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkageSpec {
    pub kind: LinkageKind,
    pub orientation: Orientation,
}

impl LinkageSpec {
    /// A linkage with its kind's default orientation.
    pub fn new(kind: LinkageKind) -> Self {
        LinkageSpec { kind, orientation: kind.default_orientation() }
    }

    pub fn with_orientation(kind: LinkageKind, orientation: Orientation) -> Self {
        LinkageSpec { kind, orientation }
    }

    /// Linkage value of two nonempty clusters, in `O(d)` from moments.
    pub fn value(&self, a: &ClusterMoments, b: &ClusterMoments) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let (na, nb) = (a.count() as f64, b.count() as f64);
        Ok(match self.kind {
            LinkageKind::AverageDot => a.sum_dot(b) / (na * nb),
            LinkageKind::CentroidDot => a
                .sum()
                .iter()
                .zip(b.sum().iter())
                .map(|(x, y)| (x / na) * (y / nb))
                .sum(),
            LinkageKind::AverageL2Sq => {
                a.total_sum_sq() / na + b.total_sum_sq() / nb - 2.0 * a.sum_dot(b) / (na * nb)
            }
            LinkageKind::CentroidL2Sq => a
                .sum()
                .iter()
                .zip(b.sum().iter())
                .map(|(x, y)| {
                    let d = x / na - y / nb;
                    d * d
                })
                .sum(),
        })
    }
}

/// Upper-triangular table of all pairwise linkage values over `m` clusters.
#[derive(Clone, Debug)]
pub struct LinkageMatrix {
    m: usize,
    values: Vec<f64>,
}

impl LinkageMatrix {
    /// Number of clusters the table was built over.
    pub fn clusters(&self) -> usize {
        self.m
    }

    /// Linkage value of clusters `i` and `j` (`i != j`, any order).
    pub fn value(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j && i < self.m && j < self.m);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // Condensed row-major index for the strict upper triangle.
        self.values[i * self.m - i * (i + 1) / 2 + (j - i - 1)]
    }
}

/// All `C(m, 2)` linkage values over the given clusters, `O(m² · d)` given
/// precomputed moments. Errors for fewer than two clusters or any empty
/// cluster.
pub fn pairwise_linkages(spec: LinkageSpec, clusters: &[ClusterMoments]) -> Result<LinkageMatrix> {
    let m = clusters.len();
    if m < 2 {
        return Err(Error::TooFewItems { needed: 2, got: m });
    }
    let mut values = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            values.push(spec.value(&clusters[i], &clusters[j])?);
        }
    }
    Ok(LinkageMatrix { m, values })
}
