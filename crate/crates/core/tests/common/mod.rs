#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use armine::synth::item_name;
use armine::{Threshold, TransactionDatabase};

/// Rows of item indices below `n_items`; at least one row.
pub fn rows(n_items: usize, max_rows: usize) -> impl Strategy<Value = Vec<BTreeSet<usize>>> {
    prop::collection::vec(prop::collection::btree_set(0..n_items, 0..=n_items), 1..=max_rows)
}

pub fn database(rows: &[BTreeSet<usize>]) -> TransactionDatabase {
    let baskets: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&i| item_name(i)).collect()).collect();
    TransactionDatabase::from_baskets(&baskets)
}

pub fn threshold() -> impl Strategy<Value = Threshold> {
    (1u64..=20).prop_map(|n| Threshold::from_fraction(n, 20))
}

/// Basket text for one quantified attribute `Q`, with a boolean `x` riding along.
pub fn quantified_text(values: &[(Option<u64>, bool)]) -> String {
    let mut out = String::new();
    for (q, x) in values {
        let mut line = Vec::new();
        if let Some(q) = q {
            line.push(format!("Q:{q}"));
        }
        if *x {
            line.push("x".to_string());
        }
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
