//! Exact and sampled evaluators for the quality of a hierarchy.
//!
//! Two complementary objectives over a similarity matrix `w`:
//!
//! * revenue `Σ_{i<j} w_ij · |leaves(lca(i,j))ᶜ|` — larger is better;
//! * cost `Σ_{i<j} w_ij · |leaves(lca(i,j))|` — smaller is better.
//!
//! They satisfy `cost + revenue = n · Σ_{i<j} w_ij` on every tree, so a
//! hierarchy minimizing one maximizes the other. Revenue is reported
//! against the upper bound `(n−2) · Σ w_ij`, which is valid whenever all
//! weights are nonnegative.
//!
//! The exact evaluators come in two algebraic routes: a node-sum over
//! internal nodes using cached moments (pairs whose lca is `v` are exactly
//! the cross pairs of `v`'s children), and a direct pair enumeration over
//! any [`PairWeights`] source. The routes check each other in tests.
//!
//! Triplet distance compares two hierarchies by how they resolve leaf
//! triples: of any three leaves, exactly one lies outside the lca-cluster
//! of the other two.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Similarity};
use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, NodeId};

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateMethod {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// Revenue of a hierarchy, with normalizations.
#[derive(Clone, Debug, PartialEq)]
pub struct RevenueReport {
    /// `Σ_{i<j} w_ij · |leaves(lca(i,j))ᶜ|` (estimated in sampled mode).
    pub total: f64,
    /// `total / C(n,2)`.
    pub per_pair: f64,
    /// `total / ((n−2)·Σw)`, clamped to `[0,1]`. Present only when `n ≥ 3`
    /// and every pairwise weight is certified nonnegative (the bound is
    /// not an upper bound under mixed signs).
    pub fraction_of_max: Option<f64>,
    pub method: EstimateMethod,
}

/// Triplet distance between two hierarchies.
#[derive(Clone, Debug, PartialEq)]
pub struct TripletReport {
    /// Fraction of leaf triples the first tree resolves differently from
    /// the second, in `[0, 1]`; 0 iff the hierarchies are equivalent.
    pub distance: f64,
    pub method: EstimateMethod,
}

/// A source of pairwise similarities over points `0..len()`.
pub trait PairWeights {
    fn len(&self) -> usize;
    /// Similarity of points `i != j`; must be symmetric.
    fn weight(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum over all unordered pairs.
    fn total(&self) -> f64 {
        let n = self.len();
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += self.weight(i, j);
            }
        }
        sum
    }
}

/// Pairwise weights induced by a dataset and a similarity.
#[derive(Clone, Copy, Debug)]
pub struct DataWeights<'a> {
    pub data: &'a Dataset,
    pub sim: Similarity,
}

impl PairWeights for DataWeights<'_> {
    fn len(&self) -> usize {
        self.data.len()
    }

    fn weight(&self, i: usize, j: usize) -> f64 {
        self.sim.pair(self.data.point(i), self.data.point(j))
    }
}

/// An explicit symmetric weight matrix (condensed upper triangle).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWeights {
    n: usize,
    values: Vec<f64>,
}

impl MatrixWeights {
    /// Build from a function of unordered pairs `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                values.push(f(i, j));
            }
        }
        MatrixWeights { n, values }
    }
}

impl PairWeights for MatrixWeights {
    fn len(&self) -> usize {
        self.n
    }

    fn weight(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j && i < self.n && j < self.n);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.values[i * self.n - i * (i + 1) / 2 + (j - i - 1)]
    }
}

/// `(n−2) · total_weight`, the revenue upper bound under nonnegative
/// weights.
pub fn max_revenue_bound(n: usize, total_weight: f64) -> f64 {
    (n.saturating_sub(2) as f64) * total_weight
}

fn pairs_count(n: usize) -> u128 {
    let n = n as u128;
    n * (n - 1) / 2
}

fn triples_count(n: usize) -> u128 {
    let n = n as u128;
    n * (n - 1) * (n - 2) / 6
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// The hierarchy must cover exactly the leaf indices `0..n`.
fn check_coverage(h: &Hierarchy, n: usize) -> Result<()> {
    if h.n_leaves() != n || !(0..n).all(|i| h.leaf_node(i).is_some()) {
        return Err(Error::LeafSetMismatch);
    }
    Ok(())
}

fn check_moments(h: &Hierarchy, data: &Dataset) -> Result<NodeId> {
    let root = h.root().ok_or(Error::TooFewItems { needed: 2, got: 0 })?;
    let stats = h.moments(root)?;
    if stats.count() != data.len() || stats.dim() != data.dim() {
        return Err(Error::MissingMoments);
    }
    Ok(root)
}

fn fraction(total: f64, n: usize, total_weight: f64, nonnegative: bool) -> Option<f64> {
    if n < 3 || !nonnegative {
        return None;
    }
    let bound = max_revenue_bound(n, total_weight);
    (bound > 0.0).then(|| clamp01(total / bound))
}

/// Exact revenue by summation over internal nodes: the pairs whose lca is
/// `v` are exactly the cross pairs of `v`'s children, so each internal
/// node contributes `(n − |leaves(v)|) · w(left(v), right(v))`, with the
/// cross weight read from cached moments in `O(d)`.
///
/// Requires `n ≥ 2` and populated moments (see
/// [`Hierarchy::recompute_moments`]).
pub fn mw_revenue(h: &Hierarchy, data: &Dataset, sim: Similarity) -> Result<RevenueReport> {
    let n = data.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    check_coverage(h, n)?;
    let root = check_moments(h, data)?;

    let mut total = 0.0;
    for id in h.node_ids() {
        if let Some((l, r)) = h.children(id)? {
            let outside = (n - h.leaf_count(id)?) as f64;
            if outside > 0.0 {
                total += outside * sim.total_inter(h.moments(l)?, h.moments(r)?);
            }
        }
    }
    let total_weight = sim.total_intra(h.moments(root)?);
    Ok(RevenueReport {
        total,
        per_pair: total / pairs_count(n) as f64,
        fraction_of_max: fraction(total, n, total_weight, sim.nonnegative_on(data)),
        method: EstimateMethod::Exact,
    })
}

/// Exact revenue by direct enumeration of all pairs; the independent
/// algebraic route to [`mw_revenue`], usable with any weight source.
pub fn mw_revenue_pairwise(h: &Hierarchy, weights: &impl PairWeights) -> Result<RevenueReport> {
    let n = weights.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    check_coverage(h, n)?;

    let mut total = 0.0;
    let mut total_weight = 0.0;
    let mut all_nonnegative = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weights.weight(i, j);
            total_weight += w;
            all_nonnegative &= w >= 0.0;
            total += w * (n - h.leaf_count(h.lca(i, j)?)?) as f64;
        }
    }
    Ok(RevenueReport {
        total,
        per_pair: total / pairs_count(n) as f64,
        fraction_of_max: fraction(total, n, total_weight, all_nonnegative),
        method: EstimateMethod::Exact,
    })
}

/// Exact cost by node summation (see [`mw_revenue`] for the route).
pub fn dasgupta_cost(h: &Hierarchy, data: &Dataset, sim: Similarity) -> Result<f64> {
    let n = data.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    check_coverage(h, n)?;
    check_moments(h, data)?;

    let mut total = 0.0;
    for id in h.node_ids() {
        if let Some((l, r)) = h.children(id)? {
            total += h.leaf_count(id)? as f64 * sim.total_inter(h.moments(l)?, h.moments(r)?);
        }
    }
    Ok(total)
}

/// Exact cost by direct pair enumeration.
pub fn dasgupta_cost_pairwise(h: &Hierarchy, weights: &impl PairWeights) -> Result<f64> {
    let n = weights.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    check_coverage(h, n)?;

    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += weights.weight(i, j) * h.leaf_count(h.lca(i, j)?)? as f64;
        }
    }
    Ok(total)
}

/// Unbiased revenue estimate from `samples` unordered pairs drawn
/// uniformly with replacement; deterministic given `seed`. Falls back to
/// exact enumeration when `samples` covers all pairs.
///
/// `fraction_of_max` is gated on the sampled weights being nonnegative and
/// needs populated moments for the total-weight bound; it is omitted
/// otherwise.
pub fn mw_revenue_sampled(
    h: &Hierarchy,
    data: &Dataset,
    sim: Similarity,
    samples: usize,
    seed: u64,
) -> Result<RevenueReport> {
    let n = data.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    if samples == 0 {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    check_coverage(h, n)?;
    let method = EstimateMethod::Sampled { samples, seed };

    if samples as u128 >= pairs_count(n) {
        let exact = mw_revenue_pairwise(h, &DataWeights { data, sim })?;
        return Ok(RevenueReport { method, ..exact });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut all_nonnegative = true;
    for _ in 0..samples {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let w = sim.pair(data.point(i), data.point(j));
        all_nonnegative &= w >= 0.0;
        sum += w * (n - h.leaf_count(h.lca(i, j)?)?) as f64;
    }
    let per_pair = sum / samples as f64;
    let total = per_pair * pairs_count(n) as f64;

    let fraction_of_max = match h.root().map(|r| h.moments(r)).transpose()? {
        Some(stats) if stats.count() == n && stats.dim() == data.dim() => {
            fraction(total, n, sim.total_intra(stats), all_nonnegative)
        }
        _ => None,
    };
    Ok(RevenueReport { total, per_pair, fraction_of_max, method })
}

fn check_same_leaves(t1: &Hierarchy, t2: &Hierarchy) -> Result<Vec<usize>> {
    let mut leaves = t1.leaf_indices();
    if t2.n_leaves() != leaves.len() || leaves.iter().any(|&i| t2.leaf_node(i).is_none()) {
        return Err(Error::LeafSetMismatch);
    }
    leaves.sort_unstable();
    Ok(leaves)
}

/// Per-node leaf bitsets over the positions of `leaves` (sorted).
fn leaf_bitsets(h: &Hierarchy, leaves: &[usize]) -> Result<Vec<Vec<u64>>> {
    let words = leaves.len().div_ceil(64);
    let mut sets = vec![Vec::new(); h.arena.slots()];
    let root = h.root().expect("nonempty tree");
    let mut order = Vec::with_capacity(h.node_count());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        if let Some((l, r)) = h.children(v)? {
            stack.push(l);
            stack.push(r);
        }
    }
    for &v in order.iter().rev() {
        let mut bits = vec![0u64; words];
        match h.children(v)? {
            Some((l, r)) => {
                for (out, (a, b)) in bits
                    .iter_mut()
                    .zip(sets[l.index()].iter().zip(sets[r.index()].iter()))
                {
                    *out = a | b;
                }
            }
            None => {
                let leaf = h.leaf_index(v)?.expect("leaf node");
                let pos = leaves.binary_search(&leaf).expect("leaf present");
                bits[pos / 64] |= 1 << (pos % 64);
            }
        }
        sets[v.index()] = bits;
    }
    Ok(sets)
}

/// Exact triplet distance between two hierarchies over the same leaf set.
///
/// For strictly binary trees every triple is resolved exactly once, so the
/// distance is the fraction of the `C(n,3)` triples whose resolution
/// differs. Computed as a sum over leaf pairs: the triples both trees
/// resolve identically for pair `{i,j}` are the leaves outside both lcas,
/// counted with a bitset intersection. `O(n² · (depth + n/64))` time.
pub fn triplet_distance(t1: &Hierarchy, t2: &Hierarchy) -> Result<TripletReport> {
    let leaves = check_same_leaves(t1, t2)?;
    let n = leaves.len();
    if n < 3 {
        return Err(Error::TooFewItems { needed: 3, got: n });
    }
    let sets1 = leaf_bitsets(t1, &leaves)?;
    let sets2 = leaf_bitsets(t2, &leaves)?;

    let mut shared: u128 = 0;
    for (a, &i) in leaves.iter().enumerate() {
        for &j in leaves.iter().skip(a + 1) {
            let l1 = t1.lca(i, j)?;
            let l2 = t2.lca(i, j)?;
            let inside_both: u64 = sets1[l1.index()]
                .iter()
                .zip(sets2[l2.index()].iter())
                .map(|(x, y)| (x & y).count_ones() as u64)
                .sum();
            let union = (t1.leaf_count(l1)? + t2.leaf_count(l2)?) as u64 - inside_both;
            shared += (n as u64 - union) as u128;
        }
    }
    let all = triples_count(n);
    Ok(TripletReport {
        distance: (all - shared) as f64 / all as f64,
        method: EstimateMethod::Exact,
    })
}

/// Triplet distance estimated from `samples` leaf triples drawn uniformly
/// with replacement; deterministic given `seed`. Falls back to the exact
/// computation when `samples` covers all triples.
pub fn triplet_distance_sampled(
    t1: &Hierarchy,
    t2: &Hierarchy,
    samples: usize,
    seed: u64,
) -> Result<TripletReport> {
    let leaves = check_same_leaves(t1, t2)?;
    let n = leaves.len();
    if n < 3 {
        return Err(Error::TooFewItems { needed: 3, got: n });
    }
    if samples == 0 {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    let method = EstimateMethod::Sampled { samples, seed };
    if samples as u128 >= triples_count(n) {
        let exact = triplet_distance(t1, t2)?;
        return Ok(TripletReport { method, ..exact });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut differ = 0usize;
    for _ in 0..samples {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let mut c = rng.random_range(0..n - 2);
        let (lo, hi) = (a.min(b), a.max(b));
        if c >= lo {
            c += 1;
        }
        if c >= hi {
            c += 1;
        }
        let (i, j, k) = (leaves[a], leaves[b], leaves[c]);
        if resolve_triple(t1, i, j, k)? != resolve_triple(t2, i, j, k)? {
            differ += 1;
        }
    }
    Ok(TripletReport { distance: differ as f64 / samples as f64, method })
}

/// Of three distinct leaves, return the one outside the lca-cluster of the
/// other two. Permutation-invariant in its arguments.
pub fn resolve_triple(h: &Hierarchy, i: usize, j: usize, k: usize) -> Result<usize> {
    if i == j || j == k || i == k {
        return Err(Error::InvalidStructure("triple indices must be distinct"));
    }
    let dij = h.depth(h.lca(i, j)?)?;
    let dik = h.depth(h.lca(i, k)?)?;
    let djk = h.depth(h.lca(j, k)?)?;
    // In a strictly binary tree exactly one of the three pair-lcas is
    // strictly deepest; its complement element is the outsider.
    if dij > dik && dij > djk {
        Ok(k)
    } else if dik > dij && dik > djk {
        Ok(j)
    } else if djk > dij && djk > dik {
        Ok(i)
    } else {
        Err(Error::InvalidStructure("triple has no unique resolution"))
    }
}

/// Maximum revenue over every binary tree shape on `0..n` leaves, by
/// exhaustive enumeration (each shape arises once from inserting leaf `k`
/// as a sibling of each existing node). Exponential: guarded to `n ≤ 9`.
pub fn best_revenue_exhaustive(weights: &impl PairWeights) -> Result<f64> {
    const LIMIT: usize = 9;
    let n = weights.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    if n > LIMIT {
        return Err(Error::TooLarge { limit: LIMIT, got: n });
    }

    fn recurse(h: &Hierarchy, next: usize, n: usize, weights: &impl PairWeights, best: &mut f64) {
        if next == n {
            let rev = mw_revenue_pairwise(h, weights).expect("complete tree").total;
            if rev > *best {
                *best = rev;
            }
            return;
        }
        let ids: Vec<NodeId> = h.node_ids().collect();
        for at in ids {
            let mut branch = h.clone();
            branch.attach_sibling(at, next, &[]).expect("fresh leaf");
            recurse(&branch, next + 1, n, weights, best);
        }
    }

    let mut h = Hierarchy::new();
    h.insert_leaf(0, &[])?;
    h.attach_sibling(h.root().expect("nonempty"), 1, &[])?;
    let mut best = f64::NEG_INFINITY;
    recurse(&h, 2, n, weights, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Build a tree over leaves `0..n` with zero-dimensional stats from a
    /// nested description: attach order, each at a given existing leaf.
    fn chain_tree(n: usize) -> Hierarchy {
        // ((..((0,1),2)..),n-1): caterpillar.
        let mut h = Hierarchy::new();
        h.insert_leaf(0, &[]).unwrap();
        for i in 1..n {
            h.attach_sibling(h.root().unwrap(), i, &[]).unwrap();
        }
        h
    }

    fn balanced4() -> Hierarchy {
        // ((0,1),(2,3))
        let mut a = Hierarchy::new();
        a.insert_leaf(0, &[]).unwrap();
        a.attach_sibling(h_root(&a), 1, &[]).unwrap();
        let mut b = Hierarchy::new();
        b.insert_leaf(2, &[]).unwrap();
        b.attach_sibling(h_root(&b), 3, &[]).unwrap();
        let forest = crate::Forest::from_trees(vec![a, b]).unwrap();
        let [x, y] = forest.roots() else { panic!() };
        let (x, y) = (*x, *y);
        let mut f = forest;
        let root = f.arena.link_roots(x, y).unwrap();
        Hierarchy { arena: f.arena, root: Some(root) }
    }

    fn h_root(h: &Hierarchy) -> NodeId {
        h.root().unwrap()
    }

    fn triangle_weights() -> MatrixWeights {
        // w_ab=2, w_ac=1, w_bc=1
        MatrixWeights::from_fn(3, |i, j| if (i, j) == (0, 1) { 2.0 } else { 1.0 })
    }

    #[test]
    fn revenue_on_three_points() {
        let h = chain_tree(3); // ((a,b),c)
        let w = triangle_weights();
        let report = mw_revenue_pairwise(&h, &w).unwrap();
        assert_eq!(report.total, 2.0);
        assert_eq!(report.per_pair, 2.0 / 3.0);
        assert_eq!(report.fraction_of_max, Some(0.5));
    }

    #[test]
    fn cost_on_three_points_and_identity() {
        let h = chain_tree(3);
        let w = triangle_weights();
        let cost = dasgupta_cost_pairwise(&h, &w).unwrap();
        assert_eq!(cost, 10.0);
        let rev = mw_revenue_pairwise(&h, &w).unwrap().total;
        assert_eq!(cost + rev, 3.0 * w.total());
    }

    #[test]
    fn revenue_is_zero_on_two_points() {
        let h = chain_tree(2);
        let w = MatrixWeights::from_fn(2, |_, _| 5.0);
        let report = mw_revenue_pairwise(&h, &w).unwrap();
        assert_eq!(report.total, 0.0);
        assert_eq!(report.fraction_of_max, None);
    }

    #[test]
    fn revenue_requires_two_points() {
        let h = {
            let mut h = Hierarchy::new();
            h.insert_leaf(0, &[]).unwrap();
            h
        };
        let w = MatrixWeights::from_fn(1, |_, _| 0.0);
        assert_eq!(
            mw_revenue_pairwise(&h, &w).unwrap_err(),
            Error::TooFewItems { needed: 2, got: 1 }
        );
    }

    #[test]
    fn node_sum_matches_pair_enumeration() {
        let data = Dataset::from_rows(&[
            vec![0.2, 1.0],
            vec![1.5, 0.1],
            vec![0.9, 0.9],
            vec![2.0, 2.0],
            vec![0.0, 0.4],
        ])
        .unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        h.attach_sibling(h.leaf_node(0).unwrap(), 1, data.point(1)).unwrap();
        h.attach_sibling(h.root().unwrap(), 2, data.point(2)).unwrap();
        h.attach_sibling(h.leaf_node(1).unwrap(), 3, data.point(3)).unwrap();
        h.attach_sibling(h.root().unwrap(), 4, data.point(4)).unwrap();
        for sim in [
            Similarity::Dot,
            Similarity::NegSqEuclidean,
            Similarity::ShiftedNegSqEuclidean(3.0),
        ] {
            let fast = mw_revenue(&h, &data, sim).unwrap();
            let slow = mw_revenue_pairwise(&h, &DataWeights { data: &data, sim }).unwrap();
            assert!((fast.total - slow.total).abs() <= 1e-9 * (1.0 + slow.total.abs()));
            let fast_cost = dasgupta_cost(&h, &data, sim).unwrap();
            let slow_cost = dasgupta_cost_pairwise(&h, &DataWeights { data: &data, sim }).unwrap();
            assert!((fast_cost - slow_cost).abs() <= 1e-9 * (1.0 + slow_cost.abs()));
        }
    }

    #[test]
    fn triplet_distance_of_identical_trees_is_zero() {
        let h = chain_tree(5);
        let report = triplet_distance(&h, &h).unwrap();
        assert_eq!(report.distance, 0.0);
    }

    #[test]
    fn triplet_distance_balanced_vs_chain() {
        // T1=((a,b),(c,d)), T2=(((a,b),c),d): 2 of 4 triples differ.
        let t1 = balanced4();
        let t2 = chain_tree(4);
        assert_eq!(triplet_distance(&t2, &t1).unwrap().distance, 0.5);
        assert_eq!(triplet_distance(&t1, &t2).unwrap().distance, 0.5);
    }

    #[test]
    fn triplet_distance_rejects_mismatched_leaves() {
        let t1 = chain_tree(4);
        let t2 = chain_tree(5);
        assert_eq!(triplet_distance(&t1, &t2).unwrap_err(), Error::LeafSetMismatch);
    }

    #[test]
    fn sampled_triplet_exhaustive_equals_exact() {
        let t1 = balanced4();
        let t2 = chain_tree(4);
        let exact = triplet_distance(&t1, &t2).unwrap().distance;
        let sampled = triplet_distance_sampled(&t1, &t2, 100, 7).unwrap();
        assert_eq!(sampled.distance, exact);
        assert_eq!(sampled.method, EstimateMethod::Sampled { samples: 100, seed: 7 });
    }

    #[test]
    fn sampled_revenue_is_deterministic_and_exhaustive_matches_exact() {
        let data = Dataset::from_rows(&[
            vec![0.5, 0.1],
            vec![1.0, 0.7],
            vec![0.2, 0.9],
            vec![1.4, 1.1],
        ])
        .unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        for i in 1..4 {
            h.attach_sibling(h.root().unwrap(), i, data.point(i)).unwrap();
        }
        let sim = Similarity::Dot;
        let exact = mw_revenue(&h, &data, sim).unwrap();
        let a = mw_revenue_sampled(&h, &data, sim, 1000, 42).unwrap();
        let b = mw_revenue_sampled(&h, &data, sim, 1000, 42).unwrap();
        assert_eq!(a, b);
        assert!((a.total - exact.total).abs() <= 1e-9 * exact.total.abs());
    }

    #[test]
    fn resolve_triple_examples() {
        let h = chain_tree(4); // (((0,1),2),3)
        assert_eq!(resolve_triple(&h, 0, 1, 2).unwrap(), 2);
        assert_eq!(resolve_triple(&h, 0, 2, 3).unwrap(), 3);
        // Permutation invariance.
        for (i, j, k) in [(0, 2, 3), (2, 0, 3), (3, 2, 0), (2, 3, 0)] {
            assert_eq!(resolve_triple(&h, i, j, k).unwrap(), 3);
        }
        assert!(resolve_triple(&h, 1, 1, 2).is_err());
    }

    #[test]
    fn exhaustive_best_revenue_on_triangle() {
        // Pairing the heavy edge {a,b} first is optimal: revenue 2.
        let w = triangle_weights();
        assert_eq!(best_revenue_exhaustive(&w).unwrap(), 2.0);
        let big = MatrixWeights::from_fn(12, |_, _| 1.0);
        assert!(matches!(best_revenue_exhaustive(&big), Err(Error::TooLarge { .. })));
    }
}
