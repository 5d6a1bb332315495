use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::moments::ClusterMoments;

/// An append-only collection of points in `dim`-dimensional real space.
///
/// Point indices are assigned in insertion order and remain stable for the
/// lifetime of the dataset, so hierarchies can refer to points by index
/// while a stream is still arriving.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    dim: usize,
    data: Vec<f64>,
}

impl Dataset {
    /// An empty dataset of the given dimension.
    pub fn new(dim: usize) -> Self {
        Dataset { dim, data: Vec::new() }
    }

    /// Build a dataset from complete rows. All rows must share one dimension.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut out = Dataset::new(dim);
        for row in rows {
            out.push(row.as_ref())?;
        }
        Ok(out)
    }

    /// Append a point, returning its index.
    pub fn push(&mut self, point: &[f64]) -> Result<usize> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        self.data.extend_from_slice(point);
        Ok(self.len() - 1)
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `i`-th point as a coordinate slice.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Moments of the singleton cluster `{i}`.
    pub fn point_moments(&self, i: usize) -> ClusterMoments {
        ClusterMoments::from_point(self.point(i))
    }

    /// Iterate over all points in index order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }
}

/// Beyond this many points, `Similarity::nonnegative_on` no longer runs the
/// exact all-pairs scan and falls back to cheap sufficient conditions.
const NONNEG_SCAN_LIMIT: usize = 4096;

/// A pairwise similarity between points: larger means closer.
///
/// All three kinds admit `O(d)` cluster-average formulas over
/// [`ClusterMoments`], which keeps the online descent and the node-sum
/// objective evaluators free of pair iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Similarity {
    /// `w(x, y) = xᵀy`
    Dot,
    /// `w(x, y) = -‖x - y‖²`
    NegSqEuclidean,
    /// `w(x, y) = c - ‖x - y‖²` for the carried shift `c`.
    ShiftedNegSqEuclidean(f64),
}

impl Similarity {
    /// The kind name used by the command-line vocabulary.
    pub fn name(&self) -> &'static str {
        match self {
            Similarity::Dot => "dot-product",
            Similarity::NegSqEuclidean => "negative-sq-euclidean",
            Similarity::ShiftedNegSqEuclidean(_) => "shifted-negative-sq-euclidean",
        }
    }

    /// Similarity of a single pair of points. Symmetric in its arguments.
    pub fn pair(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match *self {
            Similarity::Dot => x.iter().zip(y).map(|(a, b)| a * b).sum(),
            Similarity::NegSqEuclidean => -sq_dist(x, y),
            Similarity::ShiftedNegSqEuclidean(c) => c - sq_dist(x, y),
        }
    }

    /// Sum of `w(i, j)` over all unordered pairs inside the cluster,
    /// computed from moments. Zero when the cluster has fewer than two
    /// points.
    pub fn total_intra(&self, c: &ClusterMoments) -> f64 {
        let m0 = c.count() as f64;
        if c.count() < 2 {
            return 0.0;
        }
        let pairs = m0 * (m0 - 1.0) / 2.0;
        // Σ_{i<j} xᵢᵀxⱼ = (‖Σx‖² − Σ‖x‖²)/2 and Σ_{i<j} ‖xᵢ−xⱼ‖² = m₀Σ‖x‖² − ‖Σx‖².
        let dot_pairs = (c.sum_norm_sq() - c.total_sum_sq()) / 2.0;
        match *self {
            Similarity::Dot => dot_pairs,
            Similarity::NegSqEuclidean => -(m0 * c.total_sum_sq() - c.sum_norm_sq()),
            Similarity::ShiftedNegSqEuclidean(shift) => {
                shift * pairs - (m0 * c.total_sum_sq() - c.sum_norm_sq())
            }
        }
    }

    /// Sum of `w(i, j)` over all cross pairs of two disjoint clusters,
    /// computed from moments.
    pub fn total_inter(&self, a: &ClusterMoments, b: &ClusterMoments) -> f64 {
        let (na, nb) = (a.count() as f64, b.count() as f64);
        let cross_dot = a.sum_dot(b);
        match *self {
            Similarity::Dot => cross_dot,
            Similarity::NegSqEuclidean => {
                -(nb * a.total_sum_sq() + na * b.total_sum_sq() - 2.0 * cross_dot)
            }
            Similarity::ShiftedNegSqEuclidean(shift) => {
                shift * na * nb
                    - (nb * a.total_sum_sq() + na * b.total_sum_sq() - 2.0 * cross_dot)
            }
        }
    }

    /// Average similarity over all unordered pairs inside the cluster.
    ///
    /// Undefined (an error) for clusters of fewer than two points; callers
    /// handling singleton subtrees must special-case them.
    pub fn mean_intra(&self, c: &ClusterMoments) -> Result<f64> {
        if c.count() < 2 {
            return Err(Error::UndefinedAverage);
        }
        let m0 = c.count() as f64;
        Ok(self.total_intra(c) / (m0 * (m0 - 1.0) / 2.0))
    }

    /// Average similarity over all cross pairs of two disjoint clusters.
    pub fn mean_inter(&self, a: &ClusterMoments, b: &ClusterMoments) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyCluster);
        }
        Ok(self.total_inter(a, b) / (a.count() as f64 * b.count() as f64))
    }

    /// Whether every pairwise similarity on `data` is certainly
    /// nonnegative.
    ///
    /// Nonnegativity gates the `fraction_of_max` field of revenue reports:
    /// the `(n−2)·Σw` bound is only an upper bound under nonnegative
    /// weights. Small datasets are scanned exactly; past
    /// `NONNEG_SCAN_LIMIT` points only cheap sufficient conditions are
    /// tried (all coordinates nonnegative for the dot product), so `false`
    /// here means "not certified", not "certainly negative".
    pub fn nonnegative_on(&self, data: &Dataset) -> bool {
        let n = data.len();
        if n < 2 {
            return true;
        }
        if let Similarity::Dot = self {
            if data.points().all(|p| p.iter().all(|&x| x >= 0.0)) {
                return true;
            }
        }
        if n > NONNEG_SCAN_LIMIT {
            return false;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.pair(data.point(i), data.point(j)) < 0.0 {
                    return false;
                }
            }
        }
        true
    }
}

fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}
