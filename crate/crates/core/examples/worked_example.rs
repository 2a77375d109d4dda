// Frequent itemsets and rules on the five-transaction market database.
//
// Run with `cargo run --example worked_example`.

use std::fmt::Write;

use armine::apriori::{join_phase, prune_phase};
use armine::{apriori, generate_rules, parse_basket, Itemset, Threshold};

pub fn run_example() -> armine::Result<String> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/market.basket"))?;
    let db = parse_basket(&text)?;
    let dict = db.dictionary();
    let min_support: Threshold = "30%".parse()?;
    let min_confidence: Threshold = "60%".parse()?;

    let mut out = String::new();
    let frequent = apriori(&db, min_support);
    for k in 1..=frequent.max_size() {
        let level: Vec<String> = frequent
            .level(k)
            .iter()
            .map(|(s, sup)| format!("{}={}", dict.render(s, ""), sup))
            .collect();
        writeln!(out, "L{k}: {}", level.join(" ")).unwrap();
    }

    // candidate generation for k = 3, shown phase by phase
    let l2: Vec<Itemset> = frequent.level(2).iter().map(|(s, _)| s.clone()).collect();
    let joined = join_phase(&l2);
    let (kept, pruned) = prune_phase(joined.clone(), &l2);
    let names = |sets: &[Itemset]| sets.iter().map(|s| dict.render(s, "")).collect::<Vec<_>>().join(" ");
    writeln!(out, "join: {}", names(&joined)).unwrap();
    writeln!(out, "pruned: {}", names(&pruned)).unwrap();
    writeln!(out, "C3: {}", names(&kept)).unwrap();

    for rule in generate_rules(&frequent, min_confidence) {
        writeln!(
            out,
            "{}  support {}  confidence {}",
            rule.render(dict),
            rule.support,
            rule.confidence
        )
        .unwrap();
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("worked example"));
}
