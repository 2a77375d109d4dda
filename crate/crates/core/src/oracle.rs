//! Brute-force reference implementations for differential testing.
//!
//! Each one follows the definition directly, with no pruning or indexing.
//! Only feasible on small inputs.

use crate::apriori::{apriori_with, Counting, FrequentItemsets, MiningOptions};
use crate::dataset::{ItemId, Itemset, TransactionDatabase};
use crate::error::{Error, Result};
use crate::fraction::{SupportFraction, Threshold};
use crate::quantitative::{interval_support, Interval, Partitioning};
use crate::rules::{confidence, generate_rules, sort_rules, Rule};
use crate::taxonomy::{extend_database, TaxonomyGraph};

pub const MAX_ENUMERATED_ITEMS: usize = 16;

/// Counts all `2^n − 1` itemsets by direct scan.
pub fn bf_frequent_itemsets(db: &TransactionDatabase, min_support: Threshold) -> Result<FrequentItemsets> {
    let n = db.n_items();
    if n > MAX_ENUMERATED_ITEMS {
        return Err(Error::TooManyItems {
            limit: MAX_ENUMERATED_ITEMS,
            actual: n,
        });
    }
    let total = db.n_transactions() as u64;
    // each transaction as a bitmask
    let masks: Vec<u32> = db
        .transactions()
        .iter()
        .map(|t| t.items.iter().fold(0u32, |m, id| m | (1 << id.0)))
        .collect();
    let mut found = Vec::new();
    for subset in 1u32..(1u32 << n) {
        let count = masks.iter().filter(|&&m| m & subset == subset).count() as u64;
        if SupportFraction::new(count, total).meets(min_support) {
            let items = (0..n as u32).filter(|i| subset & (1 << i) != 0).map(ItemId).collect();
            found.push((Itemset::new(items), count));
        }
    }
    Ok(FrequentItemsets::from_counts(total, found))
}

/// Tests `s → (I − s)` for every frequent `I` and every non-empty proper subset `s`.
pub fn bf_rules(frequent: &FrequentItemsets, min_confidence: Threshold) -> Vec<Rule> {
    let mut rules = Vec::new();
    for (itemset, support) in frequent.iter() {
        let k = itemset.len();
        if !(2..=31).contains(&k) {
            continue;
        }
        for mask in 1u32..((1u32 << k) - 1) {
            let antecedent = Itemset::new(
                (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| itemset.items()[i])
                    .collect(),
            );
            let consequent = itemset.difference(&antecedent);
            let ante_support = frequent.support(&antecedent).expect("downward closed");
            let conf = confidence(*support, ante_support).expect("antecedent occurs");
            if conf >= min_confidence.ratio() {
                rules.push(Rule {
                    antecedent,
                    consequent,
                    support: *support,
                    confidence: conf,
                });
            }
        }
    }
    sort_rules(&mut rules);
    rules
}

/// Candidates contained in `transaction`, by plain filtering.
pub fn naive_subset(candidates: &[Itemset], transaction: &[ItemId]) -> Vec<Itemset> {
    candidates
        .iter()
        .filter(|c| c.is_subset_of(transaction))
        .cloned()
        .collect()
}

/// All `O(N²)` consecutive unions of base intervals, keeping the base
/// intervals and any union within `max_support`.
pub fn bf_interval_unions(
    partitioning: &Partitioning,
    db: &TransactionDatabase,
    max_support: Threshold,
) -> Vec<Interval> {
    let base = partitioning.intervals();
    let mut out = Vec::new();
    for i in 0..base.len() {
        for j in i..base.len() {
            let union = Interval::new(base[i].lo, base[j].hi);
            if i == j || interval_support(db, partitioning.attribute(), union).at_most(max_support) {
                out.push(union);
            }
        }
    }
    out.sort();
    out
}

/// Plain Apriori over fully extended transactions, then itemsets (and the
/// rules they generate) holding an item together with one of its ancestors
/// are discarded.
pub fn naive_generalized(
    db: &TransactionDatabase,
    taxonomy: &TaxonomyGraph,
    min_support: Threshold,
    min_confidence: Threshold,
) -> (FrequentItemsets, Vec<Rule>) {
    let extended = extend_database(db, taxonomy);
    let options = MiningOptions {
        counting: Counting::Naive,
        ..Default::default()
    };
    let all = apriori_with(&extended, min_support, &options);
    let rules = generate_rules(&all, min_confidence)
        .into_iter()
        .filter(|r| !taxonomy.has_item_and_ancestor(&r.itemset()))
        .collect();
    let itemsets = all.filtered(|s| !taxonomy.has_item_and_ancestor(s));
    (itemsets, rules)
}
