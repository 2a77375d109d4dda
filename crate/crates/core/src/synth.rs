//! Seeded synthetic data and the small reference datasets used in the docs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::{parse_basket, TransactionDatabase};

/// Item name for index `i`: `A`..`Z`, then `I26`, `I27`, ...
pub fn item_name(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("I{i}")
    }
}

/// Random baskets over `n_items` items, each item present with probability `density`.
pub fn random_baskets<R: Rng>(rng: &mut R, n_items: usize, n_transactions: usize, density: f64) -> Vec<Vec<String>> {
    (0..n_transactions)
        .map(|_| (0..n_items).filter(|_| rng.gen_bool(density)).map(item_name).collect())
        .collect()
}

pub fn random_database<R: Rng>(
    rng: &mut R,
    n_items: usize,
    n_transactions: usize,
    density: f64,
) -> TransactionDatabase {
    TransactionDatabase::from_baskets(&random_baskets(rng, n_items, n_transactions, density))
}

/// Basket text where item `Q` carries a quantity drawn from `1..=n_values`
/// (skewed towards small values) in a fraction `presence` of transactions,
/// plus a few boolean items.
pub fn random_quantitative_basket<R: Rng>(rng: &mut R, n_transactions: usize, n_values: u64, presence: f64) -> String {
    let mut out = String::new();
    for _ in 0..n_transactions {
        let mut line: Vec<String> = Vec::new();
        if rng.gen_bool(presence) {
            let a = rng.gen_range(1..=n_values);
            let b = rng.gen_range(1..=n_values);
            line.push(format!("Q:{}", a.min(b)));
        }
        for item in ["x", "y"] {
            if rng.gen_bool(0.5) {
                line.push(item.to_string());
            }
        }
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// A random forest over the items of `db`, at most `levels` category levels
/// deep, as `(parent, child)` edges. Not every item gets a parent.
pub fn random_tree_taxonomy<R: Rng>(rng: &mut R, db: &TransactionDatabase, levels: usize) -> Vec<(String, String)> {
    let mut edges = Vec::new();
    let mut frontier: Vec<String> = db.dictionary().names().to_vec();
    for level in 1..=levels {
        frontier.shuffle(rng);
        let n_groups = (frontier.len() / 2).max(1);
        let mut next = Vec::new();
        for (i, child) in frontier.iter().enumerate() {
            if rng.gen_bool(0.25) {
                continue;
            }
            let parent = format!("cat{level}_{}", i % n_groups);
            edges.push((parent.clone(), child.clone()));
            if !next.contains(&parent) {
                next.push(parent);
            }
        }
        if next.len() <= 1 {
            break;
        }
        frontier = next;
    }
    edges
}

/// The five-transaction market database: Aubergine, Beer, Charcoal, Dijon
/// mustard and Edam cheese abbreviated `A`..`E`.
pub fn market_example() -> TransactionDatabase {
    parse_basket("D\nA B C\nA C\nA D\nA B C D E\n").expect("valid basket")
}

/// A 100-transaction shop where 25 buy tea and coffee, 5 tea only, 65 coffee only, 5 neither.
pub fn tea_coffee() -> TransactionDatabase {
    let mut text = String::new();
    for (line, times) in [("Tea Coffee", 25), ("Tea", 5), ("Coffee", 65), ("", 5)] {
        for _ in 0..times {
            text.push_str(line);
            text.push('\n');
        }
    }
    parse_basket(&text).expect("valid basket")
}
