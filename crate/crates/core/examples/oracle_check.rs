// Differential check of the miners against brute-force enumeration on
// random databases.

use std::fmt::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use armine::oracle::{bf_frequent_itemsets, bf_rules, naive_generalized};
use armine::synth::{random_database, random_tree_taxonomy};
use armine::taxonomy::mine_generalized;
use armine::{apriori, generate_rules, TaxonomyGraph, Threshold};

pub fn run_example() -> armine::Result<String> {
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut itemsets, mut rules, mut generalized) = (0, 0, 0);
    let runs = 40;
    for _ in 0..runs {
        let (n_items, n_transactions) = (rng.gen_range(2..=8), rng.gen_range(1..=50));
        let db = random_database(&mut rng, n_items, n_transactions, 0.4);
        let min_support = Threshold::from_fraction(rng.gen_range(1..=9), 10);
        let min_confidence = Threshold::from_fraction(rng.gen_range(1..=10), 10);

        let frequent = apriori(&db, min_support);
        let exhaustive = bf_frequent_itemsets(&db, min_support)?;
        itemsets += usize::from(frequent == exhaustive);
        rules += usize::from(generate_rules(&frequent, min_confidence) == bf_rules(&exhaustive, min_confidence));

        let edges = random_tree_taxonomy(&mut rng, &db, 3);
        let taxonomy = TaxonomyGraph::from_edges(&edges, db.dictionary())?;
        let mined = mine_generalized(&db, &taxonomy, min_support, min_confidence)?;
        let (naive_sets, naive_rules) = naive_generalized(&db, &taxonomy, min_support, min_confidence);
        generalized += usize::from(mined.itemsets == naive_sets && mined.rules == naive_rules);
    }
    let mut out = String::new();
    writeln!(out, "itemsets {itemsets}/{runs}").unwrap();
    writeln!(out, "rules {rules}/{runs}").unwrap();
    writeln!(out, "generalized {generalized}/{runs}").unwrap();
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("oracle example"));
}
