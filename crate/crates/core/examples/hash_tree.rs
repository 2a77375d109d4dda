// Builds a hash tree over candidate 3-itemsets, shows its leaves, and
// counts support by tree descent and by plain scan.

use std::fmt::Write;

use rand::rngs::StdRng;
use rand::SeedableRng;

use armine::apriori::naive_count;
use armine::synth::random_database;
use armine::{apriori, apriori_gen, HashTree, HashTreeConfig, Itemset, Threshold};

pub fn run_example() -> armine::Result<String> {
    let mut rng = StdRng::seed_from_u64(11);
    let db = random_database(&mut rng, 12, 400, 0.35);
    let frequent = apriori(&db, Threshold::from_fraction(1, 20));
    let l2: Vec<Itemset> = frequent.level(2).iter().map(|(s, _)| s.clone()).collect();
    let c3 = apriori_gen(&l2);

    let config = HashTreeConfig {
        bucket_count: 4,
        leaf_split_threshold: 6,
    };
    let tree = HashTree::build(3, c3.candidates.clone(), config);
    let mut out = String::new();
    writeln!(out, "{} candidates, {} leaves", c3.len(), tree.leaves().len()).unwrap();
    for leaf in tree.leaves().iter().take(5) {
        let names: Vec<String> = leaf.candidates.iter().map(|c| db.dictionary().render(c, "")).collect();
        writeln!(out, "leaf {:?}: {}", leaf.path, names.join(" ")).unwrap();
    }

    let transactions: Vec<&Itemset> = db.transactions().iter().map(|t| &t.items).collect();
    let by_tree = tree.count(&transactions);
    let by_scan = naive_count(&c3.candidates, &transactions);
    writeln!(out, "tree and scan agree: {}", by_tree == by_scan).unwrap();

    let first = &db.transactions()[0].items;
    let hits: Vec<String> = tree
        .subset(first.items())
        .iter()
        .map(|c| db.dictionary().render(c, ""))
        .collect();
    writeln!(
        out,
        "transaction {} contains {}",
        db.dictionary().render(first, ""),
        hits.join(" ")
    )
    .unwrap();
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("hash tree example"));
}
