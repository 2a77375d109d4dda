// Quantitative attribute to taxonomy and back.

use std::fmt::Write;

use armine::quantitative::{equi_depth_partition, QuantitativeAttribute};
use armine::taxonomy::parse_taxonomy;
use armine::transform::{
    booleanize_numbered, format_numbering, leaf_database, quantitative_to_taxonomy, taxonomy_to_quantitative,
    NumberedIntervals,
};
use armine::{apriori, parse_basket, Threshold};

pub fn run_example() -> armine::Result<String> {
    let mut out = String::new();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/grill.basket"))?;
    let db = parse_basket(&text)?;
    let beer = QuantitativeAttribute::from_db(&db, db.dictionary().id("Beer").expect("Beer"))?;

    let tree = quantitative_to_taxonomy(&equi_depth_partition(&beer, 3));
    writeln!(out, "depth {}", tree.depth()).unwrap();
    out.push_str(&tree.to_edge_text());

    // the tree over single-value items, back to numbered leaves
    let leaves = leaf_database(&db, std::slice::from_ref(&beer))?;
    let taxonomy = tree.to_graph(leaves.dictionary())?;
    let numbered = taxonomy_to_quantitative(&taxonomy)?;
    out.push_str(&format_numbering(&numbered));

    let spans = booleanize_numbered(&leaves, &numbered, NumberedIntervals::Tree)?;
    let frequent = apriori(&spans, "40%".parse::<Threshold>()?);
    let attribute = &numbered[0];
    for (itemset, support) in frequent.level(1) {
        let name = spans.dictionary().name(itemset.items()[0]).expect("item");
        let described = attribute
            .all_intervals()
            .into_iter()
            .find(|iv| attribute.interval_name(*iv) == name)
            .map(|iv| attribute.describe(iv))
            .unwrap_or_else(|| name.to_string());
        writeln!(out, "{described} {support}").unwrap();
    }

    let veg = parse_basket("Aubergine\n")?;
    let dag = parse_taxonomy("Vegetables Aubergine\nGrillGoods Aubergine\n", &veg)?;
    if let Err(e) = taxonomy_to_quantitative(&dag) {
        writeln!(out, "rejected: {e}").unwrap();
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("transform example"));
}
