//! Merge trees of sublevel sets of a vertex-weighted graph.
//!
//! Both the tau-sequence root (a weighted path) and the lattice oracle (a
//! weighted grid) are built here, so the two routes share only this
//! bookkeeping and not the weight computation.

use std::collections::BTreeMap;

use crate::union_find::DisjointSet;

/// A node of a compressed merge tree: leaves are births of sublevel
/// components, inner nodes are the levels where components join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub level: i64,
    /// Children ordered by anchor.
    pub children: Vec<usize>,
    /// Smallest point index in the component when the node was created.
    pub anchor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTree {
    nodes: Vec<TreeNode>,
    root: usize,
    truncated: bool,
}

impl MergeTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Set when a level cap left several components, joined artificially at the cap.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Leaf node indices ordered by anchor.
    pub fn leaves(&self) -> Vec<usize> {
        let mut leaves: Vec<usize> = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].children.is_empty())
            .collect();
        leaves.sort_by_key(|&i| self.nodes[i].anchor);
        leaves
    }

    pub fn leaf_levels(&self) -> Vec<i64> {
        self.leaves().iter().map(|&i| self.nodes[i].level).collect()
    }

    /// Canonical string, equal for isomorphic level-labelled trees.
    pub fn canonical_form(&self) -> String {
        fn walk(tree: &MergeTree, node: usize) -> String {
            let n = &tree.nodes[node];
            if n.children.is_empty() {
                return n.level.to_string();
            }
            let mut parts: Vec<String> = n.children.iter().map(|&c| walk(tree, c)).collect();
            parts.sort();
            format!("{}({})", n.level, parts.join(","))
        }
        walk(self, self.root)
    }

    /// Parent of each node (root maps to itself).
    pub fn parents(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                parent[c] = i;
            }
        }
        parent
    }
}

/// Builds the merge tree of the sublevel filtration of `weights` on a graph
/// whose adjacency is given by `neighbors`. Points above `level_cap` are
/// ignored.
pub fn build<F>(weights: &[i64], mut neighbors: F, level_cap: Option<i64>) -> MergeTree
where
    F: FnMut(usize, &mut Vec<usize>),
{
    let n = weights.len();
    assert!(n > 0, "merge tree of an empty graph");
    let mut order: Vec<u32> = (0..n as u32)
        .filter(|&p| level_cap.is_none_or(|cap| weights[p as usize] <= cap))
        .collect();
    order.sort_unstable_by_key(|&p| (weights[p as usize], p));

    let mut ds = DisjointSet::new(n);
    let mut active = vec![false; n];
    let mut node_of = vec![u32::MAX; n];
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut nbrs = Vec::new();
    let mut touched: Vec<(u32, u32)> = Vec::new();

    let mut start = 0;
    while start < order.len() {
        let level = weights[order[start] as usize];
        let end = start + order[start..].partition_point(|&p| weights[p as usize] == level);
        let batch = &order[start..end];

        touched.clear();
        for &p in batch {
            nbrs.clear();
            neighbors(p as usize, &mut nbrs);
            for &q in &nbrs {
                if active[q] && weights[q] < level {
                    let root = ds.find(q);
                    touched.push((p, node_of[root]));
                }
            }
        }
        for &p in batch {
            active[p as usize] = true;
        }
        for &p in batch {
            nbrs.clear();
            neighbors(p as usize, &mut nbrs);
            for &q in &nbrs {
                if active[q] {
                    ds.union(p as usize, q);
                }
            }
        }

        // Group the new points by component, keyed by smallest member.
        let mut groups: BTreeMap<usize, (usize, Vec<u32>)> = BTreeMap::new();
        let mut root_min: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in batch {
            let root = ds.find(p as usize);
            let m = root_min.entry(root).or_insert(p as usize);
            *m = (*m).min(p as usize);
        }
        for (&root, &min_p) in &root_min {
            groups.insert(min_p, (root, Vec::new()));
        }
        for &(p, old) in &touched {
            let root = ds.find(p as usize);
            let key = root_min[&root];
            groups.get_mut(&key).expect("group exists").1.push(old);
        }

        for (min_p, (root, mut olds)) in groups {
            olds.sort_unstable();
            olds.dedup();
            let node = match olds.len() {
                0 => {
                    nodes.push(TreeNode {
                        level,
                        children: Vec::new(),
                        anchor: min_p,
                    });
                    nodes.len() - 1
                }
                1 => olds[0] as usize,
                _ => {
                    let mut children: Vec<usize> = olds.iter().map(|&o| o as usize).collect();
                    children.sort_by_key(|&c| nodes[c].anchor);
                    let anchor = nodes[children[0]].anchor.min(min_p);
                    nodes.push(TreeNode {
                        level,
                        children,
                        anchor,
                    });
                    nodes.len() - 1
                }
            };
            node_of[root] = node as u32;
        }
        start = end;
    }

    // Components alive at the end.
    let mut tops: Vec<usize> = Vec::new();
    let mut seen_roots = BTreeMap::new();
    for &p in &order {
        let root = ds.find(p as usize);
        seen_roots.entry(root).or_insert_with(|| {
            tops.push(node_of[root] as usize);
        });
    }
    tops.sort_by_key(|&c| nodes[c].anchor);
    let (root, truncated) = if tops.len() == 1 {
        (tops[0], false)
    } else {
        let level = level_cap.unwrap_or_else(|| nodes.iter().map(|n| n.level).max().unwrap_or(0));
        let anchor = nodes[tops[0]].anchor;
        nodes.push(TreeNode {
            level,
            children: tops,
            anchor,
        });
        (nodes.len() - 1, true)
    };
    MergeTree {
        nodes,
        root,
        truncated,
    }
}

/// Merge tree of a weighted path `0 - 1 - ... - (n-1)`.
pub fn build_path(weights: &[i64]) -> MergeTree {
    let n = weights.len();
    build(
        weights,
        |p, out| {
            if p > 0 {
                out.push(p - 1);
            }
            if p + 1 < n {
                out.push(p + 1);
            }
        },
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_path_is_single_leaf() {
        let t = build_path(&[0, 1, 2, 3]);
        assert_eq!(t.leaf_levels(), vec![0]);
        assert_eq!(t.canonical_form(), "0");
    }

    #[test]
    fn two_valleys() {
        let t = build_path(&[0, 2, -1, 3]);
        assert_eq!(t.leaf_levels(), vec![0, -1]);
        assert_eq!(t.canonical_form(), "2(-1,0)");
    }

    #[test]
    fn plateau_counts_once() {
        let t = build_path(&[0, -1, -1, -1, 0, -1, 1]);
        assert_eq!(t.leaf_levels(), vec![-1, -1]);
        assert_eq!(t.canonical_form(), "0(-1,-1)");
        // Leftmost anchors.
        let anchors: Vec<usize> = t.leaves().iter().map(|&l| t.nodes()[l].anchor).collect();
        assert_eq!(anchors, vec![1, 5]);
    }

    #[test]
    fn three_way_merge_at_one_level() {
        let t = build_path(&[0, 1, 0, 1, 0, 5]);
        assert_eq!(t.canonical_form(), "1(0,0,0)");
        assert!(!t.truncated());
    }

    #[test]
    fn nested_merges() {
        let t = build_path(&[0, 1, 0, 3, -2, 4]);
        assert_eq!(t.canonical_form(), "3(-2,1(0,0))");
    }

    #[test]
    fn level_cap_truncates() {
        let weights = [0, 5, 0];
        let t = build(
            &weights,
            |p, out| {
                if p > 0 {
                    out.push(p - 1)
                }
                if p < 2 {
                    out.push(p + 1)
                }
            },
            Some(2),
        );
        assert!(t.truncated());
        assert_eq!(t.canonical_form(), "2(0,0)");
    }
}
