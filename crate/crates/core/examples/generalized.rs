// Generalized rules over an item taxonomy.

use std::fmt::Write;

use armine::taxonomy::parse_taxonomy;
use armine::{mine_generalized, parse_basket, Threshold};

pub fn run_example() -> armine::Result<String> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let db = parse_basket(&std::fs::read_to_string(format!("{dir}/veg.basket"))?)?;
    let taxonomy = parse_taxonomy(&std::fs::read_to_string(format!("{dir}/veg.tax"))?, &db)?;

    let mut out = String::new();
    let dict = taxonomy.dictionary();
    for name in ["Vegetables", "GrillGoods"] {
        let id = dict.id(name).expect("category");
        let children: u64 = taxonomy
            .children(id)
            .iter()
            .map(|c| taxonomy.generalized_support(&db, *c).count)
            .sum();
        // a transaction holding two children counts once for the category
        writeln!(
            out,
            "{name}: support {}, children sum {children}",
            taxonomy.generalized_support(&db, id)
        )
        .unwrap();
    }

    let mined = mine_generalized(&db, &taxonomy, "25%".parse::<Threshold>()?, "60%".parse()?)?;
    for (itemset, support) in mined.itemsets.iter().filter(|(s, _)| s.len() > 1) {
        writeln!(out, "{} {}", mined.dictionary.render(itemset, "+"), support).unwrap();
    }
    for rule in &mined.rules {
        writeln!(
            out,
            "{}  {}  {}",
            rule.render(&mined.dictionary),
            rule.support,
            rule.confidence
        )
        .unwrap();
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("generalized example"));
}
