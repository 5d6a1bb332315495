use alloc::vec::Vec;
use core::fmt;

use crate::dataset::{Dataset, Similarity};
use crate::error::{Error, Result};
use crate::moments::ClusterMoments;

/// Stable handle to a node in a [`Hierarchy`] or [`Forest`] arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub(crate) fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Plain-data description of one node, used to rebuild a hierarchy from a
/// serialized document. Ids are positions in the node list.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode {
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub leaf_index: Option<usize>,
}

#[derive(Clone, Debug)]
struct Node {
    parent: Option<NodeId>,
    children: Option<(NodeId, NodeId)>,
    leaf_index: Option<usize>,
    stats: ClusterMoments,
    leaf_count: usize,
}

/// Slab of tree nodes with a free list, shared by [`Hierarchy`] and
/// [`Forest`]. Node ids stay stable while the node is live; slots freed by
/// `split` are reused by later merges.
#[derive(Clone, Debug, Default)]
pub(crate) struct Arena {
    nodes: Vec<Option<Node>>,
    free: Vec<usize>,
    leaf_of: Vec<Option<NodeId>>,
}

impl Arena {
    fn alloc(&mut self, node: Node) -> NodeId {
        match self.free.pop() {
            Some(slot) => {
                self.nodes[slot] = Some(node);
                NodeId(slot)
            }
            None => {
                self.nodes.push(Some(node));
                NodeId(self.nodes.len() - 1)
            }
        }
    }

    fn release(&mut self, id: NodeId) {
        debug_assert!(self.nodes[id.index()].is_some());
        self.nodes[id.index()] = None;
        self.free.push(id.index());
    }

    fn get(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id.index()).and_then(Option::as_ref).ok_or(Error::InvalidNode(id))
    }

    fn get_mut(&mut self, id: NodeId) -> Result<&mut Node> {
        self.nodes.get_mut(id.index()).and_then(Option::as_mut).ok_or(Error::InvalidNode(id))
    }

    fn live_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().map(|_| NodeId(i)))
    }

    fn live_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    /// Upper bound on raw slot indices, live or freed.
    pub(crate) fn slots(&self) -> usize {
        self.nodes.len()
    }

    /// Register a new leaf node for a point index not yet present.
    fn alloc_leaf(&mut self, leaf_index: usize, stats: ClusterMoments) -> Result<NodeId> {
        if self.leaf_of.get(leaf_index).copied().flatten().is_some() {
            return Err(Error::DuplicateLeaf(leaf_index));
        }
        let id = self.alloc(Node {
            parent: None,
            children: None,
            leaf_index: Some(leaf_index),
            stats,
            leaf_count: 1,
        });
        if self.leaf_of.len() <= leaf_index {
            self.leaf_of.resize(leaf_index + 1, None);
        }
        self.leaf_of[leaf_index] = Some(id);
        Ok(id)
    }

    /// Join two parentless subtrees under a fresh internal node.
    pub(crate) fn link_roots(&mut self, left: NodeId, right: NodeId) -> Result<NodeId> {
        let (l, r) = (self.get(left)?, self.get(right)?);
        debug_assert!(l.parent.is_none() && r.parent.is_none());
        let stats = ClusterMoments::merged(&l.stats, &r.stats);
        let leaf_count = l.leaf_count + r.leaf_count;
        let id = self.alloc(Node {
            parent: None,
            children: Some((left, right)),
            leaf_index: None,
            stats,
            leaf_count,
        });
        self.get_mut(left)?.parent = Some(id);
        self.get_mut(right)?.parent = Some(id);
        Ok(id)
    }

    fn depth(&self, id: NodeId) -> Result<usize> {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.get(cur)?.parent {
            d += 1;
            cur = p;
        }
        Ok(d)
    }

    /// Leaf indices under `id`, left-to-right.
    fn leaves_under(&self, id: NodeId) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(self.get(id)?.leaf_count);
        let mut stack = Vec::new();
        stack.push(id);
        while let Some(v) = stack.pop() {
            let node = self.get(v)?;
            match node.children {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                None => out.push(node.leaf_index.expect("leaf node has an index")),
            }
        }
        Ok(out)
    }

    /// Pre-order traversal from `root` (parents before children).
    fn preorder(&self, root: NodeId) -> Result<Vec<NodeId>> {
        let mut order = Vec::new();
        let mut stack = Vec::new();
        stack.push(root);
        while let Some(v) = stack.pop() {
            order.push(v);
            if let Some((l, r)) = self.get(v)?.children {
                stack.push(r);
                stack.push(l);
            }
        }
        Ok(order)
    }
}

/// A rooted strictly-binary tree whose leaves are point indices and whose
/// internal nodes cache cluster moments and leaf counts.
///
/// The tree is held in an index-based arena: ids are stable, parent/child
/// navigation is `O(1)`, and there is no recursive ownership to unwind.
/// One writer at a time; a constructed tree may be shared read-only.
#[derive(Clone, Debug, Default)]
pub struct Hierarchy {
    pub(crate) arena: Arena,
    pub(crate) root: Option<NodeId>,
}

impl Hierarchy {
    /// An empty hierarchy.
    pub fn new() -> Self {
        Hierarchy::default()
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Number of leaves (points) covered by the tree.
    pub fn n_leaves(&self) -> usize {
        self.root.map(|r| self.arena.get(r).expect("root is live").leaf_count).unwrap_or(0)
    }

    /// Number of live nodes, internal nodes included.
    pub fn node_count(&self) -> usize {
        self.arena.live_count()
    }

    /// Ids of all live nodes, in arena order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.arena.live_ids()
    }

    pub fn is_leaf(&self, id: NodeId) -> Result<bool> {
        Ok(self.arena.get(id)?.children.is_none())
    }

    pub fn parent(&self, id: NodeId) -> Result<Option<NodeId>> {
        Ok(self.arena.get(id)?.parent)
    }

    /// Children of an internal node, `None` for a leaf.
    pub fn children(&self, id: NodeId) -> Result<Option<(NodeId, NodeId)>> {
        Ok(self.arena.get(id)?.children)
    }

    /// The point index at a leaf node.
    pub fn leaf_index(&self, id: NodeId) -> Result<Option<usize>> {
        Ok(self.arena.get(id)?.leaf_index)
    }

    pub fn leaf_count(&self, id: NodeId) -> Result<usize> {
        Ok(self.arena.get(id)?.leaf_count)
    }

    /// Cached cluster moments of the subtree at `id`.
    pub fn moments(&self, id: NodeId) -> Result<&ClusterMoments> {
        Ok(&self.arena.get(id)?.stats)
    }

    /// The leaf node holding point `index`, if present.
    pub fn leaf_node(&self, index: usize) -> Option<NodeId> {
        self.arena.leaf_of.get(index).copied().flatten()
    }

    /// Edge count from the root down to `id`.
    pub fn depth(&self, id: NodeId) -> Result<usize> {
        self.arena.depth(id)
    }

    /// Maximum leaf depth; 0 for an empty or single-leaf tree.
    pub fn height(&self) -> usize {
        let Some(root) = self.root else { return 0 };
        let mut max = 0;
        let mut stack = Vec::new();
        stack.push((root, 0usize));
        while let Some((v, d)) = stack.pop() {
            match self.arena.get(v).expect("live node").children {
                Some((l, r)) => {
                    stack.push((l, d + 1));
                    stack.push((r, d + 1));
                }
                None => max = max.max(d),
            }
        }
        max
    }

    /// Leaf indices under `id`, left-to-right.
    pub fn leaves_under(&self, id: NodeId) -> Result<Vec<usize>> {
        self.arena.leaves_under(id)
    }

    /// All leaf indices of the tree, left-to-right.
    pub fn leaf_indices(&self) -> Vec<usize> {
        match self.root {
            Some(r) => self.arena.leaves_under(r).expect("root is live"),
            None => Vec::new(),
        }
    }

    /// Place the first leaf into an empty hierarchy.
    pub fn insert_leaf(&mut self, leaf_index: usize, point: &[f64]) -> Result<NodeId> {
        if self.root.is_some() {
            return Err(Error::InvalidStructure("insert_leaf requires an empty tree"));
        }
        let id = self.arena.alloc_leaf(leaf_index, ClusterMoments::from_point(point))?;
        self.root = Some(id);
        Ok(id)
    }

    /// Replace the subtree at `at` by a fresh internal node whose children
    /// are that subtree and a new leaf for `leaf_index`. Moments and leaf
    /// counts of all ancestors are updated in `O(depth · d)`.
    ///
    /// Returns the id of the new internal node.
    pub fn attach_sibling(&mut self, at: NodeId, leaf_index: usize, point: &[f64]) -> Result<NodeId> {
        let at_node = self.arena.get(at)?;
        if at_node.stats.dim() != point.len() {
            return Err(Error::DimensionMismatch {
                expected: at_node.stats.dim(),
                got: point.len(),
            });
        }
        let old_parent = at_node.parent;
        let leaf_stats = ClusterMoments::from_point(point);
        let leaf = self.arena.alloc_leaf(leaf_index, leaf_stats.clone())?;

        let at_node = self.arena.get(at)?;
        let joined = Node {
            parent: old_parent,
            children: Some((at, leaf)),
            leaf_index: None,
            stats: ClusterMoments::merged(&at_node.stats, &leaf_stats),
            leaf_count: at_node.leaf_count + 1,
        };
        let joined_id = self.arena.alloc(joined);
        self.arena.get_mut(at)?.parent = Some(joined_id);
        self.arena.get_mut(leaf)?.parent = Some(joined_id);

        match old_parent {
            None => self.root = Some(joined_id),
            Some(parent) => {
                let p = self.arena.get_mut(parent)?;
                let (l, r) = p.children.expect("parent is internal");
                p.children = Some(if l == at { (joined_id, r) } else { (l, joined_id) });
                // Walk up accumulating the new leaf into every ancestor.
                let mut cur = Some(parent);
                while let Some(v) = cur {
                    let node = self.arena.get_mut(v)?;
                    node.stats.add_assign(&leaf_stats);
                    node.leaf_count += 1;
                    cur = node.parent;
                }
            }
        }
        Ok(joined_id)
    }

    /// The deepest node whose subtree contains both leaves.
    ///
    /// `lca(i, i)` is the leaf itself.
    pub fn lca(&self, i: usize, j: usize) -> Result<NodeId> {
        let mut a = self.leaf_node(i).ok_or(Error::UnknownLeaf(i))?;
        let mut b = self.leaf_node(j).ok_or(Error::UnknownLeaf(j))?;
        let mut da = self.arena.depth(a)?;
        let mut db = self.arena.depth(b)?;
        while da > db {
            a = self.arena.get(a)?.parent.expect("node above depth 0 has a parent");
            da -= 1;
        }
        while db > da {
            b = self.arena.get(b)?.parent.expect("node above depth 0 has a parent");
            db -= 1;
        }
        while a != b {
            a = self.arena.get(a)?.parent.ok_or(Error::LeafSetMismatch)?;
            b = self.arena.get(b)?.parent.ok_or(Error::LeafSetMismatch)?;
        }
        Ok(a)
    }

    /// Average pairwise similarity among the leaves under `v`, in `O(d)`
    /// from cached moments. Errors for subtrees of fewer than two leaves.
    pub fn avg_intra(&self, v: NodeId, sim: Similarity) -> Result<f64> {
        sim.mean_intra(&self.arena.get(v)?.stats)
    }

    /// Average similarity over cross pairs of two disjoint subtrees.
    pub fn avg_inter(&self, a: NodeId, b: NodeId, sim: Similarity) -> Result<f64> {
        if a == b || self.is_ancestor(a, b)? || self.is_ancestor(b, a)? {
            return Err(Error::OverlappingClusters);
        }
        sim.mean_inter(&self.arena.get(a)?.stats, &self.arena.get(b)?.stats)
    }

    /// Average similarity between the leaves under `a` and one new point.
    pub fn avg_to_point(&self, a: NodeId, point: &[f64], sim: Similarity) -> Result<f64> {
        sim.mean_inter(&self.arena.get(a)?.stats, &ClusterMoments::from_point(point))
    }

    fn is_ancestor(&self, anc: NodeId, id: NodeId) -> Result<bool> {
        let mut cur = self.arena.get(id)?.parent;
        while let Some(v) = cur {
            if v == anc {
                return Ok(true);
            }
            cur = self.arena.get(v)?.parent;
        }
        Ok(false)
    }

    /// Detach the sibling subtrees along the root-to-`leaf` path, in order:
    /// the leaf itself first, then its sibling, then the sibling of each
    /// successive ancestor. The detached subtrees keep their internal
    /// structure and cached moments; their leaf sets partition the tree's
    /// leaves. Runs in `O(depth(leaf))`.
    pub fn split(mut self, leaf: usize) -> Result<Forest> {
        let y = self.leaf_node(leaf).ok_or(Error::UnknownLeaf(leaf))?;
        let mut roots = Vec::new();
        roots.push(y);
        let mut path = Vec::new();
        let mut cur = y;
        while let Some(p) = self.arena.get(cur)?.parent {
            let (l, r) = self.arena.get(p)?.children.expect("parent is internal");
            roots.push(if l == cur { r } else { l });
            path.push(p);
            cur = p;
        }
        for &id in &roots {
            self.arena.get_mut(id)?.parent = None;
        }
        for p in path {
            self.arena.release(p);
        }
        Ok(Forest { arena: self.arena, roots })
    }

    /// Rewrite every leaf's point index as `map[old_index]`. The mapped
    /// indices must be distinct. Used to express a tree built over a
    /// shuffled stream in the original point numbering.
    pub fn relabel_leaves(&mut self, map: &[usize]) -> Result<()> {
        let ids: Vec<NodeId> = self.arena.live_ids().collect();
        let mut new_leaf_of: Vec<Option<NodeId>> = Vec::new();
        for &id in &ids {
            let node = self.arena.get(id)?;
            let Some(old) = node.leaf_index else { continue };
            let new = *map.get(old).ok_or(Error::UnknownLeaf(old))?;
            if new_leaf_of.len() <= new {
                new_leaf_of.resize(new + 1, None);
            }
            if new_leaf_of[new].is_some() {
                return Err(Error::DuplicateLeaf(new));
            }
            new_leaf_of[new] = Some(id);
        }
        for &id in &ids {
            let node = self.arena.get_mut(id)?;
            if let Some(old) = node.leaf_index {
                node.leaf_index = Some(map[old]);
            }
        }
        self.arena.leaf_of = new_leaf_of;
        Ok(())
    }

    /// Recompute every node's moments and leaf count bottom-up from `data`.
    /// Needed after loading a structure-only tree before any moment-based
    /// evaluation.
    pub fn recompute_moments(&mut self, data: &Dataset) -> Result<()> {
        let Some(root) = self.root else { return Ok(()) };
        let order = self.arena.preorder(root)?;
        for &id in order.iter().rev() {
            let node = self.arena.get(id)?;
            match node.children {
                None => {
                    let leaf = node.leaf_index.expect("leaf node has an index");
                    if leaf >= data.len() {
                        return Err(Error::UnknownLeaf(leaf));
                    }
                    let stats = data.point_moments(leaf);
                    let node = self.arena.get_mut(id)?;
                    node.stats = stats;
                    node.leaf_count = 1;
                }
                Some((l, r)) => {
                    let stats =
                        ClusterMoments::merged(&self.arena.get(l)?.stats, &self.arena.get(r)?.stats);
                    let leaf_count = self.arena.get(l)?.leaf_count + self.arena.get(r)?.leaf_count;
                    let node = self.arena.get_mut(id)?;
                    node.stats = stats;
                    node.leaf_count = leaf_count;
                }
            }
        }
        Ok(())
    }

    /// Rebuild a hierarchy from plain node descriptions (ids are positions
    /// in `nodes`). Moments are left empty; call
    /// [`Hierarchy::recompute_moments`] before moment-based evaluation.
    pub fn from_parts(nodes: &[TreeNode], root: usize) -> Result<Hierarchy> {
        if nodes.is_empty() {
            return Err(Error::InvalidStructure("node list is empty"));
        }
        if root >= nodes.len() {
            return Err(Error::InvalidStructure("root id out of range"));
        }
        let mut referenced = alloc::vec![false; nodes.len()];
        for spec in nodes {
            match (spec.left, spec.right, spec.leaf_index) {
                (Some(l), Some(r), None) => {
                    for child in [l, r] {
                        if child >= nodes.len() {
                            return Err(Error::InvalidStructure("child id out of range"));
                        }
                        if referenced[child] {
                            return Err(Error::InvalidStructure("node has two parents"));
                        }
                        referenced[child] = true;
                    }
                    if l == r {
                        return Err(Error::InvalidStructure("children are the same node"));
                    }
                }
                (None, None, Some(_)) => {}
                _ => {
                    return Err(Error::InvalidStructure(
                        "node must have either two children or a leaf index",
                    ))
                }
            }
        }
        if referenced[root] {
            return Err(Error::InvalidStructure("root has a parent"));
        }

        let mut h = Hierarchy::new();
        for spec in nodes {
            let id = h.arena.alloc(Node {
                parent: None,
                children: spec.left.zip(spec.right).map(|(l, r)| (NodeId(l), NodeId(r))),
                leaf_index: spec.leaf_index,
                stats: ClusterMoments::zero(0),
                leaf_count: 1,
            });
            if let Some(leaf) = spec.leaf_index {
                if h.arena.leaf_of.get(leaf).copied().flatten().is_some() {
                    return Err(Error::InvalidStructure("duplicate leaf index"));
                }
                if h.arena.leaf_of.len() <= leaf {
                    h.arena.leaf_of.resize(leaf + 1, None);
                }
                h.arena.leaf_of[leaf] = Some(id);
            }
        }
        for (i, spec) in nodes.iter().enumerate() {
            if let (Some(l), Some(r)) = (spec.left, spec.right) {
                h.arena.get_mut(NodeId(l))?.parent = Some(NodeId(i));
                h.arena.get_mut(NodeId(r))?.parent = Some(NodeId(i));
            }
        }
        h.root = Some(NodeId(root));
        // Reachability: a pre-order walk from the root must visit every node
        // exactly once (in-degree ≤ 1 was checked above, so this rules out
        // cycles and disconnected nodes).
        let order = h.arena.preorder(NodeId(root))?;
        if order.len() != nodes.len() {
            return Err(Error::InvalidStructure("nodes unreachable from root"));
        }
        for &id in order.iter().rev() {
            if let Some((l, r)) = h.arena.get(id)?.children {
                let count = h.arena.get(l)?.leaf_count + h.arena.get(r)?.leaf_count;
                h.arena.get_mut(id)?.leaf_count = count;
            }
        }
        Ok(h)
    }

    /// Export the structure as plain node descriptions with dense pre-order
    /// ids. Returns `None` for an empty tree.
    pub fn to_parts(&self) -> Option<(Vec<TreeNode>, usize)> {
        let root = self.root?;
        let order = self.arena.preorder(root).expect("live tree");
        let mut dense = alloc::vec![usize::MAX; self.arena.nodes.len()];
        for (pos, id) in order.iter().enumerate() {
            dense[id.index()] = pos;
        }
        let nodes = order
            .iter()
            .map(|&id| {
                let node = self.arena.get(id).expect("live node");
                TreeNode {
                    left: node.children.map(|(l, _)| dense[l.index()]),
                    right: node.children.map(|(_, r)| dense[r.index()]),
                    leaf_index: node.leaf_index,
                }
            })
            .collect();
        Some((nodes, dense[root.index()]))
    }

    /// Check the structural invariants: strict binarity, consistent parent
    /// pointers, correct leaf counts, distinct leaf indices, and a live
    /// arena that exactly covers the tree.
    pub fn validate(&self) -> Result<()> {
        let Some(root) = self.root else {
            return if self.arena.live_count() == 0 {
                Ok(())
            } else {
                Err(Error::InvalidStructure("empty root with live nodes"))
            };
        };
        if self.arena.get(root)?.parent.is_some() {
            return Err(Error::InvalidStructure("root has a parent"));
        }
        let order = self.arena.preorder(root)?;
        if order.len() != self.arena.live_count() {
            return Err(Error::InvalidStructure("live nodes unreachable from root"));
        }
        let mut leaf_seen = 0usize;
        for &id in order.iter().rev() {
            let node = self.arena.get(id)?;
            match node.children {
                Some((l, r)) => {
                    if node.leaf_index.is_some() {
                        return Err(Error::InvalidStructure("internal node carries a leaf index"));
                    }
                    for child in [l, r] {
                        if self.arena.get(child)?.parent != Some(id) {
                            return Err(Error::InvalidStructure("child parent pointer mismatch"));
                        }
                    }
                    let count = self.arena.get(l)?.leaf_count + self.arena.get(r)?.leaf_count;
                    if node.leaf_count != count {
                        return Err(Error::InvalidStructure("leaf count mismatch"));
                    }
                }
                None => {
                    let leaf = node
                        .leaf_index
                        .ok_or(Error::InvalidStructure("leaf node without an index"))?;
                    if node.leaf_count != 1 {
                        return Err(Error::InvalidStructure("leaf count mismatch"));
                    }
                    if self.leaf_node(leaf) != Some(id) {
                        return Err(Error::InvalidStructure("leaf lookup table mismatch"));
                    }
                    leaf_seen += 1;
                }
            }
        }
        let registered = self.arena.leaf_of.iter().filter(|e| e.is_some()).count();
        if registered != leaf_seen {
            return Err(Error::InvalidStructure("leaf lookup table has stale entries"));
        }
        Ok(())
    }
}

/// An ordered list of disjoint subtrees sharing one arena, as produced by
/// [`Hierarchy::split`] or assembled from independent trees. The forest is
/// the input shape of HAC-style agglomeration over pre-built clusters.
#[derive(Clone, Debug, Default)]
pub struct Forest {
    pub(crate) arena: Arena,
    pub(crate) roots: Vec<NodeId>,
}

impl Forest {
    /// An empty forest.
    pub fn new() -> Self {
        Forest::default()
    }

    /// One singleton tree per dataset point, in index order.
    pub fn singletons(data: &Dataset) -> Forest {
        let mut forest = Forest::new();
        for i in 0..data.len() {
            forest
                .push_leaf(i, data.point(i))
                .expect("fresh indices cannot collide");
        }
        forest
    }

    /// Move independent trees into one forest. Their leaf sets must be
    /// disjoint.
    pub fn from_trees(trees: Vec<Hierarchy>) -> Result<Forest> {
        let mut forest = Forest::new();
        for tree in trees {
            let Some(root) = tree.root else { continue };
            let order = tree.arena.preorder(root)?;
            let mut remap = alloc::vec![NodeId(usize::MAX); tree.arena.nodes.len()];
            for &id in order.iter().rev() {
                let node = tree.arena.get(id)?;
                let new_id = match node.children {
                    None => forest
                        .arena
                        .alloc_leaf(node.leaf_index.expect("leaf has index"), node.stats.clone())
                        .map_err(|e| match e {
                            Error::DuplicateLeaf(_) => Error::OverlappingClusters,
                            other => other,
                        })?,
                    Some((l, r)) => {
                        forest.arena.link_roots(remap[l.index()], remap[r.index()])?
                    }
                };
                remap[id.index()] = new_id;
            }
            forest.roots.push(remap[root.index()]);
        }
        Ok(forest)
    }

    /// Append a fresh singleton tree for one point.
    pub fn push_leaf(&mut self, leaf_index: usize, point: &[f64]) -> Result<NodeId> {
        let id = self.arena.alloc_leaf(leaf_index, ClusterMoments::from_point(point))?;
        self.roots.push(id);
        Ok(id)
    }

    /// Roots of the subtrees, in forest order.
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Number of subtrees.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Cached moments of a subtree root.
    pub fn moments(&self, id: NodeId) -> Result<&ClusterMoments> {
        Ok(&self.arena.get(id)?.stats)
    }

    pub fn leaf_count(&self, id: NodeId) -> Result<usize> {
        Ok(self.arena.get(id)?.leaf_count)
    }

    /// Leaf indices under one subtree, left-to-right.
    pub fn leaves_under(&self, id: NodeId) -> Result<Vec<usize>> {
        self.arena.leaves_under(id)
    }

    /// Reinterpret a one-tree forest as a hierarchy.
    pub fn into_hierarchy(self) -> Result<Hierarchy> {
        match self.roots.as_slice() {
            [root] => Ok(Hierarchy { root: Some(*root), arena: self.arena }),
            _ => Err(Error::InvalidStructure("forest does not hold exactly one tree")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Similarity};
    use alloc::vec;

    /// ((a,b),c) over points 0,1,2 on the line.
    fn three_leaf_tree() -> (Hierarchy, Dataset) {
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0], vec![10.0]]).unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        let root = h.root().unwrap();
        h.attach_sibling(root, 1, data.point(1)).unwrap();
        let root = h.root().unwrap();
        h.attach_sibling(root, 2, data.point(2)).unwrap();
        (h, data)
    }

    #[test]
    fn lca_of_siblings_is_their_parent() {
        let (h, _) = three_leaf_tree();
        let ab = h.lca(0, 1).unwrap();
        assert_eq!(h.leaves_under(ab).unwrap(), vec![0, 1]);
        let ac = h.lca(0, 2).unwrap();
        assert_eq!(ac, h.root().unwrap());
        assert_eq!(h.lca(1, 2).unwrap(), h.root().unwrap());
        assert_eq!(h.lca(2, 1).unwrap(), h.lca(1, 2).unwrap());
    }

    #[test]
    fn lca_unknown_leaf_errors() {
        let (h, _) = three_leaf_tree();
        assert_eq!(h.lca(0, 7), Err(Error::UnknownLeaf(7)));
    }

    #[test]
    fn deep_lca_matches_ancestor_sets() {
        // (((a,b),c),d): walk parent chains against brute-force ancestor sets.
        let data =
            Dataset::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        h.attach_sibling(h.root().unwrap(), 1, data.point(1)).unwrap();
        h.attach_sibling(h.root().unwrap(), 2, data.point(2)).unwrap();
        h.attach_sibling(h.root().unwrap(), 3, data.point(3)).unwrap();
        let lca = h.lca(1, 2).unwrap();
        assert_eq!(h.leaves_under(lca).unwrap(), vec![0, 1, 2]);

        // Brute force: intersect ancestor chains, take the deepest.
        let mut anc = Vec::new();
        let mut cur = Some(h.leaf_node(1).unwrap());
        while let Some(v) = cur {
            anc.push(v);
            cur = h.parent(v).unwrap();
        }
        let mut cur = Some(h.leaf_node(2).unwrap());
        let deepest_common = loop {
            let v = cur.unwrap();
            if anc.contains(&v) {
                break v;
            }
            cur = h.parent(v).unwrap();
        };
        assert_eq!(lca, deepest_common);
    }

    #[test]
    fn attach_keeps_moments_and_counts() {
        let (mut h, data) = three_leaf_tree();
        // Attach a new point as sibling of leaf 1: ((a,(b,x)),c).
        let mut big = Dataset::from_rows(&[vec![0.0], vec![1.0], vec![10.0], vec![2.5]]).unwrap();
        let at = h.leaf_node(1).unwrap();
        h.attach_sibling(at, 3, big.point(3)).unwrap();
        h.validate().unwrap();
        assert_eq!(h.n_leaves(), 4);
        assert_eq!(h.leaf_indices(), vec![0, 1, 3, 2]);

        // Incremental moments equal a full recomputation.
        let cached: Vec<(NodeId, ClusterMoments)> = h
            .node_ids()
            .map(|id| (id, h.moments(id).unwrap().clone()))
            .collect();
        let mut fresh = h.clone();
        big.push(&[99.0]).unwrap(); // extra unrelated point must not matter
        fresh.recompute_moments(&big).unwrap();
        for (id, stats) in cached {
            assert_eq!(&stats, fresh.moments(id).unwrap());
        }
        let _ = data;
    }

    #[test]
    fn attach_rejects_duplicate_leaf() {
        let (mut h, data) = three_leaf_tree();
        let at = h.leaf_node(0).unwrap();
        assert_eq!(
            h.attach_sibling(at, 2, data.point(2)),
            Err(Error::DuplicateLeaf(2))
        );
    }

    #[test]
    fn avg_inter_rejects_overlap() {
        let (h, _) = three_leaf_tree();
        let root = h.root().unwrap();
        let (l, _) = h.children(root).unwrap().unwrap();
        assert_eq!(
            h.avg_inter(root, l, Similarity::Dot),
            Err(Error::OverlappingClusters)
        );
    }

    #[test]
    fn avg_inter_is_symmetric() {
        let (h, _) = three_leaf_tree();
        let root = h.root().unwrap();
        let (l, r) = h.children(root).unwrap().unwrap();
        let sim = Similarity::NegSqEuclidean;
        assert_eq!(h.avg_inter(l, r, sim).unwrap(), h.avg_inter(r, l, sim).unwrap());
    }

    #[test]
    fn split_unrolls_the_leaf_path() {
        // h=(((a,b),c),d), y=a -> [{a},{b},{c},{d}]
        let data =
            Dataset::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        h.attach_sibling(h.leaf_node(0).unwrap(), 1, data.point(1)).unwrap();
        h.attach_sibling(h.root().unwrap(), 2, data.point(2)).unwrap();
        h.attach_sibling(h.root().unwrap(), 3, data.point(3)).unwrap();
        // Built as (((a,b),c),d) with a at depth 3.
        let forest = h.split(0).unwrap();
        let parts: Vec<Vec<usize>> = forest
            .roots()
            .iter()
            .map(|&r| forest.leaves_under(r).unwrap())
            .collect();
        assert_eq!(parts, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn split_keeps_subtree_structure() {
        // h=((a,b),(c,d)), y=a -> [{a},{b},{c,d}] with the pair intact.
        let data =
            Dataset::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let ab = {
            let mut t = Hierarchy::new();
            t.insert_leaf(0, data.point(0)).unwrap();
            t.attach_sibling(t.root().unwrap(), 1, data.point(1)).unwrap();
            t
        };
        let cd = {
            let mut t = Hierarchy::new();
            t.insert_leaf(2, data.point(2)).unwrap();
            t.attach_sibling(t.root().unwrap(), 3, data.point(3)).unwrap();
            t
        };
        let forest = Forest::from_trees(vec![ab, cd]).unwrap();
        let [a, b] = forest.roots() else { panic!() };
        let mut arena_forest = forest.clone();
        let joined = arena_forest.arena.link_roots(*a, *b).unwrap();
        let h = Hierarchy { arena: arena_forest.arena, root: Some(joined) };
        h.validate().unwrap();

        let split = h.split(0).unwrap();
        let parts: Vec<Vec<usize>> = split
            .roots()
            .iter()
            .map(|&r| split.leaves_under(r).unwrap())
            .collect();
        assert_eq!(parts, vec![vec![0], vec![1], vec![2, 3]]);
        // The {c,d} subtree kept its cached moments.
        let cd_root = split.roots()[2];
        assert_eq!(split.moments(cd_root).unwrap().count(), 2);
        assert_eq!(split.moments(cd_root).unwrap().sum(), &[5.0]);
    }

    #[test]
    fn split_of_two_leaf_tree() {
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let mut h = Hierarchy::new();
        h.insert_leaf(0, data.point(0)).unwrap();
        h.attach_sibling(h.root().unwrap(), 1, data.point(1)).unwrap();
        let forest = h.split(0).unwrap();
        let parts: Vec<Vec<usize>> = forest
            .roots()
            .iter()
            .map(|&r| forest.leaves_under(r).unwrap())
            .collect();
        assert_eq!(parts, vec![vec![0], vec![1]]);
    }

    #[test]
    fn from_trees_rejects_overlap() {
        let data = Dataset::from_rows(&[vec![0.0]]).unwrap();
        let mut a = Hierarchy::new();
        a.insert_leaf(0, data.point(0)).unwrap();
        let mut b = Hierarchy::new();
        b.insert_leaf(0, data.point(0)).unwrap();
        assert_eq!(
            Forest::from_trees(vec![a, b]).unwrap_err(),
            Error::OverlappingClusters
        );
    }

    #[test]
    fn parts_round_trip() {
        let (h, _) = three_leaf_tree();
        let (nodes, root) = h.to_parts().unwrap();
        let rebuilt = Hierarchy::from_parts(&nodes, root).unwrap();
        rebuilt.validate().unwrap();
        assert_eq!(rebuilt.n_leaves(), 3);
        assert_eq!(rebuilt.leaf_indices(), h.leaf_indices());
    }

    #[test]
    fn from_parts_rejects_cycles_and_malformed_nodes() {
        // Node referring to itself.
        let cyclic = vec![TreeNode { left: Some(0), right: Some(1), leaf_index: None }, TreeNode {
            left: None,
            right: None,
            leaf_index: Some(0),
        }];
        assert!(Hierarchy::from_parts(&cyclic, 0).is_err());

        // A leaf with one child.
        let malformed = vec![TreeNode { left: Some(1), right: None, leaf_index: None }, TreeNode {
            left: None,
            right: None,
            leaf_index: Some(0),
        }];
        assert!(Hierarchy::from_parts(&malformed, 0).is_err());

        // Two nodes, one unreachable.
        let unreachable = vec![
            TreeNode { left: None, right: None, leaf_index: Some(0) },
            TreeNode { left: None, right: None, leaf_index: Some(1) },
        ];
        assert!(Hierarchy::from_parts(&unreachable, 0).is_err());
    }

    #[test]
    fn relabel_remaps_leaf_lookup() {
        let (mut h, _) = three_leaf_tree();
        h.relabel_leaves(&[2, 0, 1]).unwrap();
        h.validate().unwrap();
        assert_eq!(h.leaf_indices(), vec![2, 0, 1]);
        assert!(h.leaf_node(1).is_some());
    }
}
