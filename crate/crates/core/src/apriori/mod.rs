//! Level-wise frequent itemset generation.

mod candidates;
mod hash_tree;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

pub use candidates::{apriori_gen, apriori_gen_filtered, join_phase, prune_phase, CandidateSet};
pub use hash_tree::{naive_count, HashTree, HashTreeConfig, LeafView, Scratch};

use crate::dataset::{ItemId, Itemset, TransactionDatabase};
use crate::fraction::{SupportFraction, Threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    #[default]
    HashTree,
    /// Check every candidate against every transaction; the differential baseline.
    Naive,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MiningOptions {
    pub hash_tree: HashTreeConfig,
    pub counting: Counting,
}

impl MiningOptions {
    pub fn count<T>(&self, candidates: &CandidateSet, transactions: &[T]) -> Vec<u64>
    where
        T: AsRef<[ItemId]> + Sync,
    {
        match self.counting {
            Counting::Naive => naive_count(&candidates.candidates, transactions),
            Counting::HashTree => {
                HashTree::build(candidates.k, candidates.candidates.clone(), self.hash_tree).count(transactions)
            }
        }
    }
}

/// All frequent itemsets grouped by size, each with its exact support.
#[derive(Debug, Clone, Default)]
pub struct FrequentItemsets {
    total: u64,
    by_size: BTreeMap<usize, Vec<(Itemset, SupportFraction)>>,
    index: HashMap<Itemset, u64>,
}

impl PartialEq for FrequentItemsets {
    fn eq(&self, other: &Self) -> bool {
        self.total == other.total && self.by_size == other.by_size
    }
}

impl Eq for FrequentItemsets {}

impl FrequentItemsets {
    /// Builds from `(itemset, count)` pairs; levels are kept sorted.
    pub fn from_counts<I>(total: u64, itemsets: I) -> Self
    where
        I: IntoIterator<Item = (Itemset, u64)>,
    {
        let mut by_size: BTreeMap<usize, Vec<(Itemset, SupportFraction)>> = BTreeMap::new();
        let mut index = HashMap::new();
        for (itemset, count) in itemsets {
            index.insert(itemset.clone(), count);
            by_size
                .entry(itemset.len())
                .or_default()
                .push((itemset, SupportFraction::new(count, total)));
        }
        for level in by_size.values_mut() {
            level.sort_by(|a, b| a.0.cmp(&b.0));
        }
        FrequentItemsets { total, by_size, index }
    }

    pub fn n_transactions(&self) -> u64 {
        self.total
    }

    /// Frequent itemsets of size `k`, lexicographically ordered.
    pub fn level(&self, k: usize) -> &[(Itemset, SupportFraction)] {
        self.by_size.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn max_size(&self) -> usize {
        self.by_size.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Itemset, SupportFraction)> {
        self.by_size.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn support(&self, itemset: &Itemset) -> Option<SupportFraction> {
        self.index.get(itemset).map(|&c| SupportFraction::new(c, self.total))
    }

    pub fn contains(&self, itemset: &Itemset) -> bool {
        self.index.contains_key(itemset)
    }

    /// Keeps only the itemsets accepted by `keep`.
    pub fn filtered<F: Fn(&Itemset) -> bool>(&self, keep: F) -> Self {
        FrequentItemsets::from_counts(
            self.total,
            self.iter().filter(|(s, _)| keep(s)).map(|(s, f)| (s.clone(), f.count)),
        )
    }
}

/// Single-scan count of every item, filtered by `min_support`.
pub fn frequent_1_itemsets(db: &TransactionDatabase, min_support: Threshold) -> Vec<(Itemset, SupportFraction)> {
    let total = db.n_transactions() as u64;
    item_counts(db.n_items(), db.transactions())
        .into_iter()
        .enumerate()
        .map(|(i, c)| (Itemset::singleton(ItemId(i as u32)), SupportFraction::new(c, total)))
        .filter(|(_, s)| s.meets(min_support))
        .collect()
}

pub(crate) fn item_counts<T>(n_items: usize, transactions: &[T]) -> Vec<u64>
where
    T: AsRef<[ItemId]> + Sync,
{
    transactions
        .par_iter()
        .fold(
            || vec![0u64; n_items],
            |mut counts, t| {
                for id in t.as_ref() {
                    counts[id.index()] += 1;
                }
                counts
            },
        )
        .reduce(
            || vec![0u64; n_items],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Level-wise driver shared by plain and generalized mining.
///
/// `keep` filters candidates after join and prune; `count` returns the
/// support count of each candidate in order.
pub(crate) fn level_wise<K, C>(
    total: u64,
    min_support: Threshold,
    level1: Vec<(Itemset, u64)>,
    keep: K,
    mut count: C,
) -> FrequentItemsets
where
    K: Fn(&Itemset) -> bool,
    C: FnMut(&CandidateSet) -> Vec<u64>,
{
    let mut all: Vec<(Itemset, u64)> = Vec::new();
    let mut current: Vec<(Itemset, u64)> = level1;
    while !current.is_empty() {
        let previous: Vec<Itemset> = current.iter().map(|(s, _)| s.clone()).collect();
        all.append(&mut current);
        let candidates = apriori_gen_filtered(&previous, &keep);
        if candidates.is_empty() {
            break;
        }
        let counts = count(&candidates);
        current = candidates
            .candidates
            .into_iter()
            .zip(counts)
            .filter(|(_, c)| SupportFraction::new(*c, total).meets(min_support))
            .collect();
    }
    FrequentItemsets::from_counts(total, all)
}

/// Frequent itemsets with default options.
pub fn apriori(db: &TransactionDatabase, min_support: Threshold) -> FrequentItemsets {
    apriori_with(db, min_support, &MiningOptions::default())
}

pub fn apriori_with(db: &TransactionDatabase, min_support: Threshold, options: &MiningOptions) -> FrequentItemsets {
    apriori_filtered(db, min_support, options, |_| true)
}

/// Apriori where candidates rejected by `keep` are never counted. `keep`
/// should be anti-monotone (a rejected set has only rejected supersets),
/// otherwise supersets of rejected sets are lost.
pub fn apriori_filtered<K>(
    db: &TransactionDatabase,
    min_support: Threshold,
    options: &MiningOptions,
    keep: K,
) -> FrequentItemsets
where
    K: Fn(&Itemset) -> bool,
{
    let total = db.n_transactions() as u64;
    let level1 = frequent_1_itemsets(db, min_support)
        .into_iter()
        .map(|(s, f)| (s, f.count))
        .collect();
    level_wise(total, min_support, level1, keep, |candidates| {
        options.count(candidates, db.transactions())
    })
}
