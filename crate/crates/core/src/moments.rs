use alloc::vec;
use alloc::vec::Vec;

/// Order-(0,1,2) moments of a cluster of points: the point count, the
/// coordinate-wise sum, and the coordinate-wise sum of squares.
///
/// Moments are additive over disjoint clusters, which is what lets every
/// similarity average and linkage in this crate evaluate in `O(d)` from
/// two summaries instead of iterating over point pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterMoments {
    count: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl ClusterMoments {
    /// The empty cluster in `dim` dimensions.
    pub fn zero(dim: usize) -> Self {
        ClusterMoments { count: 0, sum: vec![0.0; dim], sum_sq: vec![0.0; dim] }
    }

    /// Moments of a single point.
    pub fn from_point(point: &[f64]) -> Self {
        ClusterMoments {
            count: 1,
            sum: point.to_vec(),
            sum_sq: point.iter().map(|x| x * x).collect(),
        }
    }

    /// Number of points in the cluster.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Coordinate-wise sum of the points.
    pub fn sum(&self) -> &[f64] {
        &self.sum
    }

    /// Coordinate-wise sum of squares of the points.
    pub fn sum_sq(&self) -> &[f64] {
        &self.sum_sq
    }

    pub fn dim(&self) -> usize {
        self.sum.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Squared norm of the coordinate-wise sum.
    pub fn sum_norm_sq(&self) -> f64 {
        self.sum.iter().map(|x| x * x).sum()
    }

    /// Sum of squares over all coordinates and points (the second moment
    /// collapsed to a scalar).
    pub fn total_sum_sq(&self) -> f64 {
        self.sum_sq.iter().sum()
    }

    /// Dot product of the two clusters' coordinate sums.
    pub fn sum_dot(&self, other: &ClusterMoments) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.sum.iter().zip(other.sum.iter()).map(|(a, b)| a * b).sum()
    }

    /// Accumulate another cluster's moments into this one.
    pub fn add_assign(&mut self, other: &ClusterMoments) {
        debug_assert_eq!(self.dim(), other.dim());
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(other.sum.iter()) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(other.sum_sq.iter()) {
            *a += b;
        }
    }

    /// Accumulate a single point.
    pub fn add_point(&mut self, point: &[f64]) {
        debug_assert_eq!(self.dim(), point.len());
        self.count += 1;
        for (a, x) in self.sum.iter_mut().zip(point.iter()) {
            *a += x;
        }
        for (a, x) in self.sum_sq.iter_mut().zip(point.iter()) {
            *a += x * x;
        }
    }

    /// Moments of the union of two disjoint clusters.
    pub fn merged(a: &ClusterMoments, b: &ClusterMoments) -> Self {
        let mut out = a.clone();
        out.add_assign(b);
        out
    }
}
