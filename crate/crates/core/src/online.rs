//! Streaming hierarchy maintenance: one point arrives per round and the
//! tree is updated in place.
//!
//! Four update rules share one driver:
//!
//! * `otd` — a single root-to-leaf descent. At each subtree the average
//!   similarity of the new point to the subtree is compared with the
//!   subtree's own average pairwise similarity; the point is attached as a
//!   sibling where the subtree wins, otherwise the descent follows the
//!   child the point is more similar to. `O(height · d)` per insert.
//! * `ohac` — find the nearest leaf, detach the sibling subtrees along its
//!   root path ([`Hierarchy::split`]), add the new point as a singleton,
//!   and re-agglomerate the forest ([`crate::offline::hac_forest`]).
//! * `naive1` — rerun offline agglomeration over all points each round;
//!   exact but `O(k² log k)` per insert.
//! * `naive2` — replace the nearest leaf with a two-leaf subtree; cheap
//!   but with arbitrarily poor worst cases (three collinear points
//!   arriving in order 0, 1, K already defeat it).
//!
//! The `otd` rule additionally records separation ratios (see
//! [`SeparationTrace`]): at every descent step, the average similarity
//! inside the child it walked past, divided by that child's average
//! similarity to the new point. The running minimum is the observed
//! separation level of the stream, and the revenue of the final tree is at
//! least a third of that fraction of the `(n−2)·Σw` bound.

use alloc::vec::Vec;
use core::mem;

use crate::dataset::{Dataset, Similarity};
use crate::error::Result;
use crate::hierarchy::Hierarchy;
use crate::linkage::LinkageSpec;
use crate::offline;

/// The streaming update rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnlineAlgorithm {
    Otd,
    Ohac,
    Naive1,
    Naive2,
}

impl OnlineAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            OnlineAlgorithm::Otd => "otd",
            OnlineAlgorithm::Ohac => "ohac",
            OnlineAlgorithm::Naive1 => "naive1",
            OnlineAlgorithm::Naive2 => "naive2",
        }
    }
}

/// Separation ratios observed during `otd` descents.
///
/// A ratio is recorded only where the separation antecedent holds on a
/// realized insertion: the descent moved past a sibling subtree of at
/// least two leaves with positive average similarity to the new point.
/// Subtrees of one leaf have no intra average, and nonpositive
/// denominators make the ratio meaningless; both are skipped. Because only
/// realized insertions are visible, the observed minimum upper-bounds the
/// separation level that would hold over all hypothetical arrivals.
#[derive(Clone, Debug, Default)]
pub struct SeparationTrace {
    ratios: Vec<f64>,
    min_ratio: Option<f64>,
}

impl SeparationTrace {
    fn record(&mut self, ratio: f64) {
        self.ratios.push(ratio);
        self.min_ratio = Some(match self.min_ratio {
            Some(m) => m.min(ratio),
            None => ratio,
        });
    }

    /// Every recorded ratio, in observation order.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    /// Minimum recorded ratio clamped to `[0, 1]`; absent when no
    /// qualifying event occurred.
    pub fn beta_observed(&self) -> Option<f64> {
        self.min_ratio.map(|m| m.clamp(0.0, 1.0))
    }
}

/// A streaming clusterer: an append-only dataset, the current hierarchy,
/// and the update rule. Single writer; completed states may be shared
/// read-only.
#[derive(Clone, Debug)]
pub struct OnlineClusterer {
    algorithm: OnlineAlgorithm,
    similarity: Similarity,
    linkage: LinkageSpec,
    data: Dataset,
    hierarchy: Hierarchy,
    separation: SeparationTrace,
}

impl OnlineClusterer {
    /// A clusterer for `dim`-dimensional points. `similarity` drives the
    /// `otd` comparisons and nearest-neighbor searches; `linkage` drives
    /// the agglomeration inside `ohac` and `naive1`.
    pub fn new(
        algorithm: OnlineAlgorithm,
        dim: usize,
        similarity: Similarity,
        linkage: LinkageSpec,
    ) -> Self {
        OnlineClusterer {
            algorithm,
            similarity,
            linkage,
            data: Dataset::new(dim),
            hierarchy: Hierarchy::new(),
            separation: SeparationTrace::default(),
        }
    }

    pub fn algorithm(&self) -> OnlineAlgorithm {
        self.algorithm
    }

    /// Number of points inserted so far.
    pub fn round(&self) -> usize {
        self.data.len()
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn separation_trace(&self) -> &SeparationTrace {
        &self.separation
    }

    /// Observed separation level so far (`otd` only; absent otherwise).
    pub fn beta_observed(&self) -> Option<f64> {
        self.separation.beta_observed()
    }

    pub fn into_parts(self) -> (Hierarchy, Dataset) {
        (self.hierarchy, self.data)
    }

    /// Insert the next stream point. After round `k` the hierarchy covers
    /// exactly the indices `0..k`.
    pub fn insert(&mut self, point: &[f64]) -> Result<()> {
        let idx = self.data.push(point)?;
        match self.algorithm {
            OnlineAlgorithm::Otd => otd_step(
                &mut self.hierarchy,
                &mut self.separation,
                &self.data,
                self.similarity,
                idx,
            ),
            OnlineAlgorithm::Ohac => {
                ohac_step(&mut self.hierarchy, &self.data, self.similarity, self.linkage, idx)
            }
            OnlineAlgorithm::Naive1 => {
                let (tree, _) = offline::hac(&self.data, self.linkage)?;
                self.hierarchy = tree;
                Ok(())
            }
            OnlineAlgorithm::Naive2 => {
                naive2_step(&mut self.hierarchy, &self.data, self.similarity, idx)
            }
        }
    }
}

/// The most similar existing leaf to point `idx`; ties go to the lowest
/// index. Linear scan, `O(k · d)`.
fn nearest_leaf(data: &Dataset, sim: Similarity, idx: usize) -> usize {
    let x = data.point(idx);
    let mut best = 0;
    let mut best_sim = sim.pair(x, data.point(0));
    for i in 1..idx {
        let s = sim.pair(x, data.point(i));
        if s > best_sim {
            best = i;
            best_sim = s;
        }
    }
    best
}

fn otd_step(
    h: &mut Hierarchy,
    trace: &mut SeparationTrace,
    data: &Dataset,
    sim: Similarity,
    idx: usize,
) -> Result<()> {
    let x = data.point(idx);
    let Some(root) = h.root() else {
        h.insert_leaf(idx, x)?;
        return Ok(());
    };
    let mut v = root;
    loop {
        if h.leaf_count(v)? == 1 {
            break;
        }
        let within = h.avg_intra(v, sim)?;
        let to_subtree = h.avg_to_point(v, x, sim)?;
        if within >= to_subtree {
            break;
        }
        let (left, right) = h.children(v)?.expect("two or more leaves");
        let to_left = h.avg_to_point(left, x, sim)?;
        let to_right = h.avg_to_point(right, x, sim)?;
        // Equal averages descend left.
        let (down, passed, to_passed) = if to_right > to_left {
            (right, left, to_left)
        } else {
            (left, right, to_right)
        };
        if h.leaf_count(passed)? >= 2 && to_passed > 0.0 {
            trace.record(h.avg_intra(passed, sim)? / to_passed);
        }
        v = down;
    }
    h.attach_sibling(v, idx, x)?;
    Ok(())
}

fn ohac_step(
    h: &mut Hierarchy,
    data: &Dataset,
    sim: Similarity,
    linkage: LinkageSpec,
    idx: usize,
) -> Result<()> {
    let x = data.point(idx);
    if h.is_empty() {
        h.insert_leaf(idx, x)?;
        return Ok(());
    }
    let y = nearest_leaf(data, sim, idx);
    let mut forest = mem::take(h).split(y)?;
    forest.push_leaf(idx, x)?;
    *h = offline::hac_forest(forest, linkage)?;
    Ok(())
}

fn naive2_step(h: &mut Hierarchy, data: &Dataset, sim: Similarity, idx: usize) -> Result<()> {
    let x = data.point(idx);
    if h.is_empty() {
        h.insert_leaf(idx, x)?;
        return Ok(());
    }
    let y = nearest_leaf(data, sim, idx);
    let at = h.leaf_node(y).expect("nearest neighbor is a leaf");
    h.attach_sibling(at, idx, x)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::LinkageKind;
    use crate::objectives::{mw_revenue, triplet_distance};
    use alloc::collections::BTreeSet;
    use alloc::vec;
    use alloc::vec::Vec;

    fn clusterer(algorithm: OnlineAlgorithm, dim: usize) -> OnlineClusterer {
        OnlineClusterer::new(
            algorithm,
            dim,
            Similarity::NegSqEuclidean,
            LinkageSpec::new(LinkageKind::AverageL2Sq),
        )
    }

    fn cluster_sets(h: &Hierarchy) -> BTreeSet<Vec<usize>> {
        h.node_ids()
            .filter(|&id| !h.is_leaf(id).unwrap())
            .map(|id| {
                let mut leaves = h.leaves_under(id).unwrap();
                leaves.sort_unstable();
                leaves
            })
            .collect()
    }

    #[test]
    fn otd_attaches_far_point_at_the_root() {
        // w_ab = 5, w_ac = w_bc = 1 under the dot product: the subtree
        // average 5 beats the point average 1, so c becomes the root's
        // sibling and the revenue gain is exactly w(T) = 5.
        let mut state = OnlineClusterer::new(
            OnlineAlgorithm::Otd,
            3,
            Similarity::Dot,
            LinkageSpec::new(LinkageKind::AverageDot),
        );
        state.insert(&[2.0, 1.0, 0.0]).unwrap();
        state.insert(&[2.0, 1.0, 0.0]).unwrap();
        state.insert(&[0.5, 0.0, 0.0]).unwrap();
        let sets = cluster_sets(state.hierarchy());
        assert!(sets.contains(&vec![0, 1]));
        let report = mw_revenue(state.hierarchy(), state.data(), Similarity::Dot).unwrap();
        assert_eq!(report.total, 5.0);
    }

    #[test]
    fn otd_descends_toward_the_similar_leaf() {
        // Base-case insertion: c far more similar to b than to a ends up
        // as b's sibling.
        let mut state = OnlineClusterer::new(
            OnlineAlgorithm::Otd,
            2,
            Similarity::Dot,
            LinkageSpec::new(LinkageKind::AverageDot),
        );
        state.insert(&[1.0, 0.0]).unwrap(); // a
        state.insert(&[0.0, 1.0]).unwrap(); // b
        state.insert(&[0.1, 2.0]).unwrap(); // c: w_bc = 2 > w_ac = 0.1
        let sets = cluster_sets(state.hierarchy());
        assert!(sets.contains(&vec![1, 2]), "{sets:?}");
        state.hierarchy().validate().unwrap();
    }

    #[test]
    fn every_round_leaves_a_valid_tree() {
        for algorithm in [
            OnlineAlgorithm::Otd,
            OnlineAlgorithm::Ohac,
            OnlineAlgorithm::Naive1,
            OnlineAlgorithm::Naive2,
        ] {
            let mut state = clusterer(algorithm, 2);
            let stream =
                [[0.0, 0.0], [1.0, 0.2], [5.0, 5.0], [0.4, 0.1], [5.2, 4.9], [2.5, 2.5]];
            for (k, p) in stream.iter().enumerate() {
                state.insert(p).unwrap();
                assert_eq!(state.round(), k + 1);
                assert_eq!(state.hierarchy().n_leaves(), k + 1);
                state.hierarchy().validate().unwrap();
            }
        }
    }

    #[test]
    fn naive2_fails_on_collinear_stream() {
        // 0, 1, K: the newcomer K pairs with 1.
        let mut state = clusterer(OnlineAlgorithm::Naive2, 1);
        for x in [0.0, 1.0, 100.0] {
            state.insert(&[x]).unwrap();
        }
        let sets = cluster_sets(state.hierarchy());
        assert!(sets.contains(&vec![1, 2]), "{sets:?}");
    }

    #[test]
    fn ohac_recovers_on_collinear_stream() {
        // Split pulls leaf 1 back out, and re-agglomeration pairs 0 with 1.
        let mut state = clusterer(OnlineAlgorithm::Ohac, 1);
        for x in [0.0, 1.0, 100.0] {
            state.insert(&[x]).unwrap();
        }
        let sets = cluster_sets(state.hierarchy());
        assert!(sets.contains(&vec![0, 1]), "{sets:?}");
    }

    #[test]
    fn naive1_matches_offline_hac_each_round() {
        let mut state = clusterer(OnlineAlgorithm::Naive1, 1);
        let stream = [4.0, 0.0, 9.0, 1.5, 8.1, 0.2, 4.4];
        for (k, &x) in stream.iter().enumerate() {
            state.insert(&[x]).unwrap();
            let (offline_tree, _) =
                offline::hac(state.data(), LinkageSpec::new(LinkageKind::AverageL2Sq)).unwrap();
            if k + 1 >= 3 {
                let d = triplet_distance(state.hierarchy(), &offline_tree).unwrap().distance;
                assert_eq!(d, 0.0);
            } else {
                assert_eq!(state.hierarchy().to_parts(), offline_tree.to_parts());
            }
        }
    }

    #[test]
    fn separation_trace_minimum_is_clamped() {
        let mut trace = SeparationTrace::default();
        assert_eq!(trace.beta_observed(), None);
        for r in [0.8, 1.4, 0.5] {
            trace.record(r);
        }
        assert_eq!(trace.beta_observed(), Some(0.5));
        trace.record(-0.25);
        assert_eq!(trace.beta_observed(), Some(0.0));
        trace.record(2.0);
        assert_eq!(trace.ratios().len(), 5);
    }

    #[test]
    fn well_separated_stream_observes_high_beta() {
        // Two tight, far-apart clusters in the positive orthant: every
        // descent passes a subtree whose intra average dwarfs its average
        // similarity to the point.
        let mut state = OnlineClusterer::new(
            OnlineAlgorithm::Otd,
            2,
            Similarity::Dot,
            LinkageSpec::new(LinkageKind::AverageDot),
        );
        for i in 0..10 {
            let eps = 0.01 * i as f64;
            state.insert(&[10.0 + eps, 1.0]).unwrap();
            state.insert(&[1.0, 10.0 + eps]).unwrap();
        }
        let beta = state.beta_observed().expect("descents occurred");
        assert!(beta >= 0.9, "beta_observed = {beta}");
    }
}
