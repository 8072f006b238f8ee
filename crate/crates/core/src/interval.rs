//! Balanced binary decomposition of the position range `(0, len]`.
//!
//! Node `(i, j]` with `j - i >= 2` splits at `m = ⌊(i + j) / 2⌋` into
//! `(i, m]` and `(m, j]`; the leaves are the unit intervals `(k - 1, k]`.
//! Nodes are stored in pre-order (root first, left subtree before right),
//! which is also the order of the proof label slots.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub lo: usize,
    pub hi: usize,
    pub parent: Option<usize>,
    pub children: Option<(usize, usize)>,
    pub depth: usize,
}

impl TreeNode {
    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTree {
    nodes: Vec<TreeNode>,
    leaves: Vec<usize>,
}

impl IntervalTree {
    /// Tree over `(0, len]`; `len >= 1`.
    pub fn new(len: usize) -> Self {
        assert!(len >= 1, "interval tree needs a non-empty range");
        let mut tree = IntervalTree {
            nodes: Vec::with_capacity(2 * len),
            leaves: vec![usize::MAX; len],
        };
        tree.build(0, len, None, 0);
        tree
    }

    fn build(&mut self, lo: usize, hi: usize, parent: Option<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            lo,
            hi,
            parent,
            children: None,
            depth,
        });
        if hi - lo == 1 {
            self.leaves[lo] = id;
        } else {
            let mid = (lo + hi) / 2;
            let left = self.build(lo, mid, Some(id), depth + 1);
            let right = self.build(mid, hi, Some(id), depth + 1);
            self.nodes[id].children = Some((left, right));
        }
        id
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Node id of the leaf `(k - 1, k]`, for `k` in `1..=len`.
    pub fn leaf(&self, k: usize) -> usize {
        self.leaves[k - 1]
    }

    /// Node ids from `node` up to and including the root.
    pub fn path_to_root(&self, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Number of levels (a single leaf has height 1).
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::ceil_log2;

    #[test]
    fn shape_invariants() {
        for len in 1..200 {
            let t = IntervalTree::new(len);
            assert_eq!(t.node(t.root()).lo, 0);
            assert_eq!(t.node(t.root()).hi, len);
            assert_eq!(t.nodes().len(), 2 * len - 1);
            assert!(t.height() <= ceil_log2(len) + 1);
            for k in 1..=len {
                let leaf = t.node(t.leaf(k));
                assert_eq!((leaf.lo, leaf.hi), (k - 1, k));
            }
            for node in t.nodes() {
                if let Some((l, r)) = node.children {
                    let (l, r) = (t.node(l), t.node(r));
                    assert_eq!(l.lo, node.lo);
                    assert_eq!(l.hi, (node.lo + node.hi) / 2);
                    assert_eq!(r.lo, l.hi);
                    assert_eq!(r.hi, node.hi);
                }
            }
        }
    }

    #[test]
    fn preorder_and_paths() {
        let t = IntervalTree::new(3);
        let spans: Vec<_> = t.nodes().iter().map(|n| (n.lo, n.hi)).collect();
        assert_eq!(spans, vec![(0, 3), (0, 1), (1, 3), (1, 2), (2, 3)]);
        let path: Vec<_> = t
            .path_to_root(t.leaf(3))
            .into_iter()
            .map(|id| (t.node(id).lo, t.node(id).hi))
            .collect();
        assert_eq!(path, vec![(2, 3), (1, 3), (0, 3)]);
    }
}
