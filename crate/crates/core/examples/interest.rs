// A confident rule between negatively correlated items.

use std::fmt::Write;

use armine::interest::{annotate, chi_squared, contingency, InterestMode};
use armine::synth::tea_coffee;
use armine::{apriori, generate_rules, Threshold};

pub fn run_example() -> armine::Result<String> {
    let db = tea_coffee();
    let frequent = apriori(&db, "20%".parse::<Threshold>()?);
    let mut out = String::new();
    for rule in generate_rules(&frequent, "80%".parse()?) {
        let table = contingency(&db, &rule);
        let a = annotate(&db, &rule, InterestMode::Lift);
        writeln!(
            out,
            "{}  confidence {}  lift {}  chi2 {:.4}  {}",
            rule.render(db.dictionary()),
            rule.confidence,
            a.lift.map(|l| l.to_string()).unwrap_or_default(),
            chi_squared(&table)?,
            a.flag.map_or("", |f| f.label()),
        )
        .unwrap();
        writeln!(out, "  table {} {} {} {}", table.n11, table.n10, table.n01, table.n00).unwrap();
    }
    Ok(out)
}

fn main() {
    print!("{}", run_example().expect("interest example"));
}
