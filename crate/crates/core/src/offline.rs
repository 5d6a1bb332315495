//! Offline agglomerative clustering, from points or from a forest of
//! pre-built subtrees, plus a uniformly random merge-order baseline.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::hierarchy::{Forest, Hierarchy, NodeId};
use crate::linkage::{LinkageSpec, Orientation};

/// One merge: the creation indices of the two clusters joined and the
/// linkage value at which they merged. Creation indices are `0..m` for the
/// initial clusters, then `m, m+1, …` for merge products.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub value: f64,
}

/// The ordered merge log of one agglomeration run: exactly `m − 1` steps
/// for `m` initial clusters, each creation index consumed exactly once.
/// Identical inputs yield identical traces.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MergeTrace {
    pub steps: Vec<MergeStep>,
}

/// A merge candidate owned by one cluster. The heap pops the entry with
/// the smallest `(score, pair)`; `score` is the linkage value under
/// `Minimize` and its negation under `Maximize`, so equal-value ties break
/// toward the lexicographically smallest creation-index pair.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    score: f64,
    pair: (usize, usize),
    owner: usize,
    partner: usize,
    value: f64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // Inverted: BinaryHeap is a max-heap, we pop the smallest key.
        other
            .score
            .total_cmp(&self.score)
            .then_with(|| other.pair.cmp(&self.pair))
    }
}

fn score_sign(orientation: Orientation) -> f64 {
    match orientation {
        Orientation::Minimize => 1.0,
        Orientation::Maximize => -1.0,
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The best live partner of cluster `c` by `(score, pair)`.
fn best_candidate(
    forest: &Forest,
    nodes: &[NodeId],
    alive: &[bool],
    spec: LinkageSpec,
    sign: f64,
    c: usize,
) -> Result<Candidate> {
    let stats_c = forest.moments(nodes[c])?;
    let mut best: Option<Candidate> = None;
    for (x, &live) in alive.iter().enumerate() {
        if !live || x == c {
            continue;
        }
        let value = spec.value(stats_c, forest.moments(nodes[x])?)?;
        let cand = Candidate { score: sign * value, pair: ordered(c, x), owner: c, partner: x, value };
        let better = match &best {
            None => true,
            Some(b) => {
                cand.score.total_cmp(&b.score).then_with(|| cand.pair.cmp(&b.pair)) == Ordering::Less
            }
        };
        if better {
            best = Some(cand);
        }
    }
    best.ok_or(Error::TooFewItems { needed: 2, got: 1 })
}

/// Agglomerate a forest to a single tree with a lazy best-merge heap.
///
/// Each cluster keeps one heap entry pointing at its best partner at the
/// time it was (re)computed. A pair's linkage value never changes while
/// both endpoints are live, so a popped entry with two live endpoints is
/// exact and, by the heap order, the global best; entries whose owner died
/// are dropped, and entries whose partner died trigger a fresh scan for
/// the owner. `O(m² · d)` scans plus `O(m² log m)` heap traffic on typical
/// inputs.
fn agglomerate(mut forest: Forest, spec: LinkageSpec) -> Result<(Hierarchy, MergeTrace)> {
    let m = forest.len();
    let mut trace = MergeTrace::default();
    if m == 0 {
        return Ok((Hierarchy::new(), trace));
    }
    let mut nodes: Vec<NodeId> = forest.roots().to_vec();
    if m == 1 {
        return Ok((Hierarchy { root: Some(nodes[0]), arena: forest.arena }, trace));
    }

    let sign = score_sign(spec.orientation);
    let mut alive = vec![true; m];
    let mut alive_count = m;
    let mut heap = BinaryHeap::with_capacity(2 * m);
    for c in 0..m {
        heap.push(best_candidate(&forest, &nodes, &alive, spec, sign, c)?);
    }

    while alive_count > 1 {
        let cand = heap.pop().expect("live clusters always hold a candidate");
        if !alive[cand.owner] {
            continue;
        }
        if !alive[cand.partner] {
            heap.push(best_candidate(&forest, &nodes, &alive, spec, sign, cand.owner)?);
            continue;
        }
        let (a, b) = cand.pair;
        let joined = forest.arena.link_roots(nodes[a], nodes[b])?;
        trace.steps.push(MergeStep { left: a, right: b, value: cand.value });
        alive[a] = false;
        alive[b] = false;
        alive.push(true);
        nodes.push(joined);
        alive_count -= 1;
        if alive_count > 1 {
            let c = nodes.len() - 1;
            heap.push(best_candidate(&forest, &nodes, &alive, spec, sign, c)?);
        }
    }
    let root = *nodes.last().expect("at least one cluster");
    Ok((Hierarchy { root: Some(root), arena: forest.arena }, trace))
}

/// Agglomerative clustering from singletons: repeatedly merge the best
/// pair under the linkage orientation until one tree remains. An empty
/// dataset yields an empty hierarchy; two points merge unconditionally.
pub fn hac(data: &Dataset, spec: LinkageSpec) -> Result<(Hierarchy, MergeTrace)> {
    agglomerate(Forest::singletons(data), spec)
}

/// Agglomerate a forest of pre-built subtrees; their internal structure is
/// left untouched and initial linkages come from the cached root moments.
/// Disjointness of the subtrees is guaranteed by [`Forest`] construction.
pub fn hac_forest(forest: Forest, spec: LinkageSpec) -> Result<Hierarchy> {
    if forest.is_empty() {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    Ok(agglomerate(forest, spec)?.0)
}

/// Reference agglomeration that rescans every live pair at each step.
/// Shares the tie-break (smallest creation-index pair among equal values)
/// with [`hac`] but none of its priority machinery; kept as the oracle the
/// fast path is tested against.
pub fn hac_naive(data: &Dataset, spec: LinkageSpec) -> Result<(Hierarchy, MergeTrace)> {
    let mut forest = Forest::singletons(data);
    let m = forest.len();
    let mut trace = MergeTrace::default();
    if m == 0 {
        return Ok((Hierarchy::new(), trace));
    }
    let mut nodes: Vec<NodeId> = forest.roots().to_vec();
    let mut alive = vec![true; m];
    let mut alive_count = m;
    let sign = score_sign(spec.orientation);

    while alive_count > 1 {
        let mut best: Option<Candidate> = None;
        for i in 0..nodes.len() {
            if !alive[i] {
                continue;
            }
            for j in (i + 1)..nodes.len() {
                if !alive[j] {
                    continue;
                }
                let value = spec.value(forest.moments(nodes[i])?, forest.moments(nodes[j])?)?;
                let cand =
                    Candidate { score: sign * value, pair: (i, j), owner: i, partner: j, value };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        cand.score.total_cmp(&b.score).then_with(|| cand.pair.cmp(&b.pair))
                            == Ordering::Less
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let cand = best.expect("two or more live clusters");
        let (a, b) = cand.pair;
        let joined = forest.arena.link_roots(nodes[a], nodes[b])?;
        trace.steps.push(MergeStep { left: a, right: b, value: cand.value });
        alive[a] = false;
        alive[b] = false;
        alive.push(true);
        nodes.push(joined);
        alive_count -= 1;
    }
    let root = *nodes.last().expect("at least one cluster");
    Ok((Hierarchy { root: Some(root), arena: forest.arena }, trace))
}

/// A uniformly random binary merge order over `n` leaves: repeatedly join
/// two clusters chosen uniformly among the remaining ones. Deterministic
/// given `seed`. Node moments are left empty (no data is involved); call
/// [`Hierarchy::recompute_moments`] before moment-based evaluation.
pub fn random_tree(n: usize, seed: u64) -> Hierarchy {
    let mut forest = Forest::new();
    for i in 0..n {
        forest.push_leaf(i, &[]).expect("fresh indices");
    }
    if n == 0 {
        return Hierarchy::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<NodeId> = forest.roots().to_vec();
    while ids.len() > 1 {
        let i = rng.random_range(0..ids.len());
        let mut j = rng.random_range(0..ids.len() - 1);
        if j >= i {
            j += 1;
        }
        let (p, q) = (i.min(j), i.max(j));
        let b = ids.swap_remove(q);
        let a = ids.swap_remove(p);
        let joined = forest.arena.link_roots(a, b).expect("live roots");
        ids.push(joined);
    }
    Hierarchy { root: Some(ids[0]), arena: forest.arena }
}
