//! Hash-tree vs plain-scan support counting on synthetic baskets.
//!
//! `cargo run --release --example counting_benchmark [transactions]`

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use armine::apriori::naive_count;
use armine::synth::random_database;
use armine::{apriori, apriori_gen, HashTree, HashTreeConfig, Itemset, Threshold};

fn time<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

fn main() {
    let n_transactions = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let mut rng = StdRng::seed_from_u64(1);
    let db = random_database(&mut rng, 60, n_transactions, 0.12);
    let transactions: Vec<&Itemset> = db.transactions().iter().map(|t| &t.items).collect();
    let frequent = apriori(&db, Threshold::from_fraction(1, 200));

    println!("{:>3} {:>10} {:>12} {:>12}", "k", "candidates", "hash tree", "scan");
    for k in 2..=frequent.max_size() + 1 {
        let previous: Vec<Itemset> = frequent.level(k - 1).iter().map(|(s, _)| s.clone()).collect();
        let candidates = apriori_gen(&previous).candidates;
        if candidates.is_empty() {
            break;
        }
        let (tree_counts, tree_time) =
            time(|| HashTree::build(k, candidates.clone(), HashTreeConfig::default()).count(&transactions));
        let (scan_counts, scan_time) = time(|| naive_count(&candidates, &transactions));
        assert_eq!(tree_counts, scan_counts);
        println!(
            "{k:>3} {:>10} {:>12.2?} {:>12.2?}",
            candidates.len(),
            tree_time,
            scan_time
        );
    }
}
