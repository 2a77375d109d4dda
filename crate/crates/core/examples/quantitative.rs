// Quantitative attributes: partition, merge adjacent intervals, booleanize, mine.

use std::fmt::Write;

use armine::quantitative::{
    all_consecutive_intervals, booleanize, equi_depth_partition, format_partitionings, merge_adjacent, num_partitions,
    AttributeIntervals, Discretization, QuantitativeAttribute,
};
use armine::{apriori_filtered, generate_rules, parse_basket, MiningOptions, Rational, Threshold};

pub fn run_example() -> armine::Result<String> {
    let mut out = String::new();

    // every consecutive interval over three observed values
    let small = parse_basket("Beer:1\nBeer:2 Charcoal\nBeer:5\n")?;
    let beer = QuantitativeAttribute::from_db(&small, small.dictionary().id("Beer").expect("Beer"))?;
    let intervals = all_consecutive_intervals(&beer);
    let boolean = booleanize(
        &small,
        &[AttributeIntervals {
            attribute: beer,
            intervals,
        }],
    )?;
    let second = &boolean.transactions()[1].items;
    writeln!(out, "Beer:2 Charcoal -> {}", boolean.dictionary().render(second, " ")).unwrap();

    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/grill.basket"))?;
    let db = parse_basket(&text)?;
    let min_support: Threshold = "25%".parse()?;
    let completeness = Rational::new(3, 2);
    writeln!(
        out,
        "partitions for K=3/2: {}",
        num_partitions(1, min_support, completeness)?
    )
    .unwrap();

    let beer = QuantitativeAttribute::from_db(&db, db.dictionary().id("Beer").expect("Beer"))?;
    let base = equi_depth_partition(&beer, 4);
    out.push_str(&format_partitionings(std::slice::from_ref(&base)));
    let merged = merge_adjacent(&base, &db, min_support, "50%".parse()?)?;
    let names: Vec<String> = merged.iter().map(|iv| beer.interval_name(*iv)).collect();
    writeln!(out, "admitted: {}", names.join(" ")).unwrap();

    let discretization = Discretization {
        partitions: Some(4),
        max_support: Some("50%".parse()?),
        ..Default::default()
    };
    // two intervals of one attribute never share an itemset
    let (boolean, groups) = discretization.booleanize_grouped(&db, min_support)?;
    let frequent = apriori_filtered(&boolean, min_support, &MiningOptions::default(), |s| groups.distinct(s));
    for rule in generate_rules(&frequent, "70%".parse()?) {
        writeln!(
            out,
            "{}  {}  {}",
            rule.render(boolean.dictionary()),
            rule.support,
            rule.confidence
        )
        .unwrap();
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("quantitative example"));
}
