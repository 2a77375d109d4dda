//! Hash tree over candidate k-itemsets.
//!
//! An interior node at depth `d` hashes the `d`-th item of a candidate
//! (`item id mod bucket_count`) to pick a child. Leaves hold candidate
//! indices. To find the candidates contained in a transaction, every
//! suffix of the transaction is hashed down recursively; each leaf reached
//! is visited once and its candidates are checked for containment, since a
//! bucket path only over-approximates the candidate prefix.

use rayon::prelude::*;

use crate::dataset::{is_sorted_subset, ItemId, Itemset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashTreeConfig {
    pub bucket_count: usize,
    pub leaf_split_threshold: usize,
}

impl Default for HashTreeConfig {
    fn default() -> Self {
        HashTreeConfig {
            bucket_count: 8,
            leaf_split_threshold: 16,
        }
    }
}

#[derive(Debug)]
enum Node {
    Leaf { id: usize, entries: Vec<u32> },
    Interior(Vec<Node>),
}

#[derive(Debug)]
pub struct HashTree {
    k: usize,
    config: HashTreeConfig,
    candidates: Vec<Itemset>,
    root: Node,
    n_leaves: usize,
}

/// A leaf as seen from the outside: the bucket path leading to it and its candidates.
#[derive(Debug)]
pub struct LeafView<'a> {
    pub path: Vec<usize>,
    pub candidates: Vec<&'a Itemset>,
}

/// Per-worker scratch for the leaf visited set.
pub struct Scratch {
    visited: Vec<bool>,
    touched: Vec<usize>,
}

impl HashTree {
    /// Builds the tree over candidates of uniform size `k`.
    pub fn build(k: usize, candidates: Vec<Itemset>, config: HashTreeConfig) -> Self {
        assert!(config.bucket_count >= 1, "bucket_count must be positive");
        assert!(
            config.leaf_split_threshold >= 1,
            "leaf_split_threshold must be positive"
        );
        debug_assert!(candidates.iter().all(|c| c.len() == k));

        let mut tree = HashTree {
            k,
            config,
            candidates,
            root: Node::Leaf {
                id: 0,
                entries: Vec::new(),
            },
            n_leaves: 0,
        };
        let mut root = Node::Leaf {
            id: 0,
            entries: Vec::new(),
        };
        for idx in 0..tree.candidates.len() {
            tree.insert(&mut root, 0, idx as u32);
        }
        tree.n_leaves = number_leaves(&mut root, 0);
        tree.root = root;
        tree
    }

    fn bucket(&self, item: ItemId) -> usize {
        item.index() % self.config.bucket_count
    }

    fn insert(&self, node: &mut Node, depth: usize, idx: u32) {
        match node {
            Node::Interior(children) => {
                let b = self.bucket(self.candidates[idx as usize].items()[depth]);
                self.insert(&mut children[b], depth + 1, idx);
            }
            Node::Leaf { entries, .. } => {
                entries.push(idx);
                if entries.len() > self.config.leaf_split_threshold && depth < self.k {
                    let entries = std::mem::take(entries);
                    let mut children: Vec<Node> = (0..self.config.bucket_count)
                        .map(|_| Node::Leaf {
                            id: 0,
                            entries: Vec::new(),
                        })
                        .collect();
                    for e in entries {
                        let b = self.bucket(self.candidates[e as usize].items()[depth]);
                        self.insert(&mut children[b], depth + 1, e);
                    }
                    *node = Node::Interior(children);
                }
            }
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn config(&self) -> HashTreeConfig {
        self.config
    }

    pub fn candidates(&self) -> &[Itemset] {
        &self.candidates
    }

    pub fn scratch(&self) -> Scratch {
        Scratch {
            visited: vec![false; self.n_leaves],
            touched: Vec::new(),
        }
    }

    /// Calls `f` with the index of every candidate contained in `items`, once each.
    pub fn for_each_contained<F: FnMut(usize)>(&self, items: &[ItemId], scratch: &mut Scratch, mut f: F) {
        if self.candidates.is_empty() || items.len() < self.k {
            return;
        }
        self.descend(&self.root, 0, items, 0, scratch, &mut f);
        for leaf in scratch.touched.drain(..) {
            scratch.visited[leaf] = false;
        }
    }

    fn descend<F: FnMut(usize)>(
        &self,
        node: &Node,
        depth: usize,
        items: &[ItemId],
        start: usize,
        scratch: &mut Scratch,
        f: &mut F,
    ) {
        match node {
            Node::Leaf { id, entries } => {
                if scratch.visited[*id] {
                    return;
                }
                scratch.visited[*id] = true;
                scratch.touched.push(*id);
                for &e in entries {
                    if is_sorted_subset(self.candidates[e as usize].items(), items) {
                        f(e as usize);
                    }
                }
            }
            Node::Interior(children) => {
                let needed = self.k - depth;
                if items.len() - start < needed {
                    return;
                }
                for i in start..=items.len() - needed {
                    let child = &children[self.bucket(items[i])];
                    self.descend(child, depth + 1, items, i + 1, scratch, f);
                }
            }
        }
    }

    /// Candidates contained in `items`, in candidate order.
    pub fn subset(&self, items: &[ItemId]) -> Vec<Itemset> {
        let mut hits = Vec::new();
        let mut scratch = self.scratch();
        self.for_each_contained(items, &mut scratch, |i| hits.push(i));
        hits.sort_unstable();
        hits.into_iter().map(|i| self.candidates[i].clone()).collect()
    }

    /// Support count of every candidate over `transactions`, computed with
    /// per-worker tallies merged by addition.
    pub fn count<T>(&self, transactions: &[T]) -> Vec<u64>
    where
        T: AsRef<[ItemId]> + Sync,
    {
        let n = self.candidates.len();
        transactions
            .par_iter()
            .fold(
                || (vec![0u64; n], self.scratch()),
                |(mut counts, mut scratch), t| {
                    self.for_each_contained(t.as_ref(), &mut scratch, |i| counts[i] += 1);
                    (counts, scratch)
                },
            )
            .map(|(counts, _)| counts)
            .reduce(|| vec![0u64; n], add_counts)
    }

    /// Every leaf with its bucket path.
    pub fn leaves(&self) -> Vec<LeafView<'_>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_leaves(&self.root, &mut path, &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, node: &Node, path: &mut Vec<usize>, out: &mut Vec<LeafView<'a>>) {
        match node {
            Node::Leaf { entries, .. } => out.push(LeafView {
                path: path.clone(),
                candidates: entries.iter().map(|&e| &self.candidates[e as usize]).collect(),
            }),
            Node::Interior(children) => {
                for (b, child) in children.iter().enumerate() {
                    path.push(b);
                    self.collect_leaves(child, path, out);
                    path.pop();
                }
            }
        }
    }

    /// All candidates stored in the leaves.
    pub fn flatten(&self) -> Vec<Itemset> {
        self.leaves()
            .into_iter()
            .flat_map(|l| l.candidates.into_iter().cloned())
            .collect()
    }
}

fn number_leaves(node: &mut Node, next: usize) -> usize {
    match node {
        Node::Leaf { id, .. } => {
            *id = next;
            next + 1
        }
        Node::Interior(children) => children.iter_mut().fold(next, |n, c| number_leaves(c, n)),
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Counting without the tree: every candidate checked against every transaction.
pub fn naive_count<T>(candidates: &[Itemset], transactions: &[T]) -> Vec<u64>
where
    T: AsRef<[ItemId]> + Sync,
{
    let n = candidates.len();
    transactions
        .par_iter()
        .fold(
            || vec![0u64; n],
            |mut counts, t| {
                for (i, c) in candidates.iter().enumerate() {
                    if is_sorted_subset(c.items(), t.as_ref()) {
                        counts[i] += 1;
                    }
                }
                counts
            },
        )
        .reduce(|| vec![0u64; n], add_counts)
}
