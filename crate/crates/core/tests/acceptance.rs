//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use armine::apriori::prune_phase;
use armine::cli;
use armine::interest::{annotate, contingency, Flag, InterestMode};
use armine::oracle::{bf_frequent_itemsets, bf_rules, naive_generalized, naive_subset};
use armine::quantitative::{
    all_consecutive_intervals, booleanize, equi_depth_partition, equi_width_partition, interval_support,
    num_partitions, AttributeIntervals, Interval, QuantitativeAttribute,
};
use armine::synth::{market_example, random_database, random_quantitative_basket, random_tree_taxonomy, tea_coffee};
use armine::taxonomy::{mine_generalized, parse_taxonomy};
use armine::transform::{leaf_database, quantitative_to_taxonomy, taxonomy_to_quantitative};
use armine::{
    apriori, apriori_gen, generate_rules, parse_basket, Error, HashTree, HashTreeConfig, ItemId, Itemset, Rational,
    SupportFraction, TaxonomyGraph, Threshold,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:.0?}"))
    }
}

fn pct(s: &str) -> Threshold {
    s.parse().unwrap()
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let db = market_example();
    let f = apriori(&db, pct("30%"));
    let rules = generate_rules(&f, pct("60%"));
    let elapsed = start.elapsed();

    let d = db.dictionary();
    let level = |k: usize| f.level(k).iter().map(|(s, _)| d.render(s, "")).collect::<Vec<_>>();
    if level(1) != ["A", "B", "C", "D"] || level(2) != ["AB", "AC", "AD", "BC"] || level(3) != ["ABC"] {
        return Err(format!("levels {:?} {:?} {:?}", level(1), level(2), level(3)));
    }
    if f.level(3)[0].1 != SupportFraction::new(2, 5) || !f.level(4).is_empty() {
        return Err("ABC support".into());
    }
    let mut got: Vec<(String, String, Rational)> = rules
        .iter()
        .filter(|r| r.itemset().len() == 3)
        .map(|r| (d.render(&r.antecedent, ""), d.render(&r.consequent, ""), r.confidence))
        .collect();
    got.sort();
    let r = Rational::new;
    let mut expected = vec![
        ("AB".to_string(), "C".to_string(), r(1, 1)),
        ("AC".into(), "B".into(), r(2, 3)),
        ("BC".into(), "A".into(), r(1, 1)),
        ("C".into(), "AB".into(), r(2, 3)),
        ("B".into(), "AC".into(), r(1, 1)),
    ];
    expected.sort();
    if got != expected {
        return Err(format!("rules from ABC: {got:?}"));
    }
    let a_bc = Rational::new(
        f.level(3)[0].1.count,
        f.support(&d.itemset(&["A"]).unwrap()).unwrap().count,
    );
    if a_bc != r(2, 4) || a_bc >= pct("60%").ratio() {
        return Err("A -> BC".into());
    }
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("5 rules from ABC, A -> BC rejected at 2/4, {elapsed:.2?}"))
}

fn candidate_pruning() -> Outcome {
    let db = market_example();
    let d = db.dictionary();
    let l2: Vec<Itemset> = ["AB", "AC", "AD", "BC"]
        .iter()
        .map(|s| d.itemset(&s.chars().map(String::from).collect::<Vec<_>>()).unwrap())
        .collect();
    let c3 = apriori_gen(&l2);
    let (_, pruned) = prune_phase(armine::apriori::join_phase(&l2), &l2);
    let names = |v: &[Itemset]| v.iter().map(|s| d.render(s, "")).collect::<Vec<_>>();
    check(
        names(&c3.candidates) == ["ABC"] && names(&pruned) == ["ABD", "ACD"],
        format!("C3 = {:?}, pruned {:?}", names(&c3.candidates), names(&pruned)),
    )
}

struct Corpus {
    mismatched_itemsets: usize,
    mismatched_rules: usize,
    runs: usize,
    elapsed: Duration,
}

fn oracle_corpus() -> Corpus {
    let mut rng = StdRng::seed_from_u64(3);
    let start = Instant::now();
    let (mut mismatched_itemsets, mut mismatched_rules) = (0, 0);
    let runs = 200;
    for _ in 0..runs {
        let n_items = rng.gen_range(1..=8);
        let n_transactions = rng.gen_range(1..=50);
        let density = rng.gen_range(0.1..0.9);
        let db = random_database(&mut rng, n_items, n_transactions, density);
        let min_support = Threshold::from_fraction(rng.gen_range(1..=9), 10);
        let min_confidence = Threshold::from_fraction(rng.gen_range(1..=10), 10);
        let frequent = apriori(&db, min_support);
        let exhaustive = bf_frequent_itemsets(&db, min_support).expect("at most 8 items");
        mismatched_itemsets += usize::from(frequent != exhaustive);
        mismatched_rules +=
            usize::from(generate_rules(&frequent, min_confidence) != bf_rules(&exhaustive, min_confidence));
    }
    Corpus {
        mismatched_itemsets,
        mismatched_rules,
        runs,
        elapsed: start.elapsed(),
    }
}

fn oracle_itemsets(c: &Corpus) -> Outcome {
    within(c.elapsed, Duration::from_secs(30))?;
    check(
        c.mismatched_itemsets == 0,
        format!(
            "{} mismatches over {} databases, {:.2?}",
            c.mismatched_itemsets, c.runs, c.elapsed
        ),
    )
}

fn oracle_rules(c: &Corpus) -> Outcome {
    check(
        c.mismatched_rules == 0,
        format!("{} mismatches over {} databases", c.mismatched_rules, c.runs),
    )
}

fn hash_tree() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let (mut pairs, mut mismatches) = (0, 0);
    for bucket_count in [2, 8, 32] {
        for leaf_split_threshold in [1, 4, 16] {
            let config = HashTreeConfig {
                bucket_count,
                leaf_split_threshold,
            };
            for _ in 0..12 {
                let k = rng.gen_range(1..=4);
                let n_items = rng.gen_range(k..=20) as u32;
                let n_candidates = rng.gen_range(0..=120);
                let mut candidates: Vec<Itemset> = (0..n_candidates)
                    .map(|_| Itemset::new((0..k).map(|_| ItemId(rng.gen_range(0..n_items))).collect()))
                    .filter(|s| s.len() == k)
                    .collect();
                candidates.sort();
                candidates.dedup();
                let tree = HashTree::build(k, candidates.clone(), config);
                for _ in 0..10 {
                    let density = rng.gen_range(0.0..1.0);
                    let t: Vec<ItemId> = (0..n_items).filter(|_| rng.gen_bool(density)).map(ItemId).collect();
                    let mut got = tree.subset(&t);
                    got.sort();
                    pairs += 1;
                    mismatches += usize::from(got != naive_subset(&candidates, &t));
                }
            }
        }
    }
    check(
        pairs >= 1000 && mismatches == 0,
        format!("{mismatches} mismatches over {pairs} pairs, 9 configurations"),
    )
}

fn booleanization() -> Outcome {
    let db = parse_basket("Beer:1\nBeer:2\nBeer:5\n").map_err(|e| e.to_string())?;
    let a = QuantitativeAttribute::from_db(&db, ItemId(0)).map_err(|e| e.to_string())?;
    let intervals = all_consecutive_intervals(&a);
    let out = booleanize(
        &db,
        &[AttributeIntervals {
            attribute: a,
            intervals,
        }],
    )
    .map_err(|e| e.to_string())?;
    let mut got = out.dictionary().item_names(&out.transactions()[1].items);
    got.sort();
    check(
        got == ["Beer[1,2]", "Beer[1,5]", "Beer[2,2]", "Beer[2,5]"],
        format!("quantity 2 -> {got:?}"),
    )
}

fn partial_completeness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let start = Instant::now();
    let (mut cases, mut holding, mut ranges, mut coarse) = (0, 0, 0, 0);
    let mut deviations = Vec::new();
    let ks = [
        Rational::new(3, 2),
        Rational::from_integer(2),
        Rational::from_integer(3),
    ];
    let minsups = [
        Threshold::from_fraction(1, 10),
        Threshold::from_fraction(1, 5),
        Threshold::from_fraction(3, 10),
    ];
    for i in 0..60 {
        let k = ks[i % 3];
        let min_support = minsups[(i / 3) % 3];
        let n_values = rng.gen_range(2..=20);
        let n_transactions = rng.gen_range(20..=100);
        let text = random_quantitative_basket(&mut rng, n_transactions, n_values, 0.9);
        let db = parse_basket(&text).unwrap();
        let Some(q) = db.dictionary().id("Q") else { continue };
        let attribute = QuantitativeAttribute::from_db(&db, q).unwrap();
        let n = num_partitions(1, min_support, k).unwrap();
        let p = equi_depth_partition(&attribute, n);
        cases += 1;
        coarse += usize::from(p.intervals().len() < attribute.n_ranks());

        let mut ok = true;
        let v = attribute.n_ranks();
        for lo in 0..v {
            for hi in lo..v {
                let range = Interval::new(lo, hi);
                let support = interval_support(&db, &attribute, range);
                if !support.meets(min_support) {
                    continue;
                }
                ranges += 1;
                // the narrowest union of base partitions covering the range
                let cover = Interval::new(
                    p.intervals()[p.locate(lo).unwrap()].lo,
                    p.intervals()[p.locate(hi).unwrap()].hi,
                );
                let cover_support = interval_support(&db, &attribute, cover);
                if Rational::new(cover_support.count, 1) > k * Rational::new(support.count, 1) {
                    ok = false;
                    deviations.push(format!(
                        "case {i}: K={k} m={} N={n} v={v} range {range:?} {support} cover {cover:?} {cover_support}",
                        min_support.ratio()
                    ));
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        holding += usize::from(ok);
    }
    let elapsed = start.elapsed();
    for d in &deviations {
        println!("    deviation {d}");
    }
    within(elapsed, Duration::from_secs(60))?;
    check(
        cases >= 50 && holding * 100 >= cases * 95,
        format!("{holding}/{cases} cases hold ({coarse} with multi-value partitions) over {ranges} frequent ranges, {elapsed:.2?}"),
    )
}

fn generalized() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let (mut runs, mut mismatches) = (0, 0);
    for _ in 0..120 {
        let n_items = rng.gen_range(2..=8);
        let n_transactions = rng.gen_range(1..=40);
        let density = rng.gen_range(0.2..0.7);
        let db = random_database(&mut rng, n_items, n_transactions, density);
        let edges = random_tree_taxonomy(&mut rng, &db, 3);
        let taxonomy = TaxonomyGraph::from_edges(&edges, db.dictionary()).unwrap();
        let min_support = Threshold::from_fraction(rng.gen_range(1..=6), 10);
        let min_confidence = Threshold::from_fraction(rng.gen_range(1..=10), 10);
        let mined = mine_generalized(&db, &taxonomy, min_support, min_confidence).unwrap();
        let (itemsets, rules) = naive_generalized(&db, &taxonomy, min_support, min_confidence);
        runs += 1;
        mismatches += usize::from(mined.itemsets != itemsets || mined.rules != rules);
    }

    let db = parse_basket("Aubergine Courgette\nAubergine\nCourgette\n").unwrap();
    let tax = parse_taxonomy("Vegetables Aubergine\nVegetables Courgette\n", &db).unwrap();
    let veg = tax.dictionary().id("Vegetables").unwrap();
    let category = tax.generalized_support(&db, veg).count;
    let children: u64 = tax
        .children(veg)
        .iter()
        .map(|c| tax.generalized_support(&db, *c).count)
        .sum();
    check(
        mismatches == 0 && category < children,
        format!("{mismatches} mismatches over {runs} pairs; category support {category} < children sum {children}"),
    )
}

fn negative_correlation() -> Outcome {
    let db = tea_coffee();
    let rules = generate_rules(&apriori(&db, pct("20%")), pct("80%"));
    let d = db.dictionary();
    let rule = rules
        .iter()
        .find(|r| r.antecedent == d.itemset(&["Tea"]).unwrap() && r.consequent == d.itemset(&["Coffee"]).unwrap())
        .ok_or("Tea -> Coffee not mined")?;
    let table = contingency(&db, rule);
    let a = annotate(&db, rule, InterestMode::Lift);
    check(
        rule.confidence == Rational::new(25, 30)
            && a.lift == Some(Rational::new(25, 27))
            && a.flag == Some(Flag::NegativeCorrelation)
            && (table.n11, table.n10, table.n01, table.n00) == (25, 5, 65, 5),
        format!(
            "confidence {}, lift {}, flag {:?}",
            rule.confidence,
            a.lift.map(|l| l.to_string()).unwrap_or_default(),
            a.flag
        ),
    )
}

fn intertransformation() -> Outcome {
    let db = parse_basket("Aubergine\n").unwrap();
    let dag = parse_taxonomy("Vegetables Aubergine\nGrillGoods Aubergine\n", &db).unwrap();
    if !matches!(taxonomy_to_quantitative(&dag), Err(Error::NonTreeTaxonomy(_))) {
        return Err("DAG accepted".into());
    }
    let mut rng = StdRng::seed_from_u64(13);
    let (mut runs, mut failures) = (0, 0);
    while runs < 60 {
        let (n_transactions, n_values) = (rng.gen_range(5..=80), rng.gen_range(2..=30));
        let text = random_quantitative_basket(&mut rng, n_transactions, n_values, 0.8);
        let db = parse_basket(&text).unwrap();
        let Some(q) = db.dictionary().id("Q") else { continue };
        let a = QuantitativeAttribute::from_db(&db, q).unwrap();
        if a.n_ranks() < 2 {
            continue;
        }
        let n = rng.gen_range(1..=a.n_ranks());
        let p = if rng.gen_bool(0.5) {
            equi_depth_partition(&a, n)
        } else {
            equi_width_partition(&a, n)
        };
        let leaves = leaf_database(&db, std::slice::from_ref(&a)).unwrap();
        let graph = quantitative_to_taxonomy(&p).to_graph(leaves.dictionary()).unwrap();
        let numbered = taxonomy_to_quantitative(&graph).unwrap();
        let expected: Vec<String> = (0..a.n_ranks())
            .map(|r| a.interval_name(Interval::singleton(r)))
            .collect();
        runs += 1;
        failures += usize::from(numbered.len() != 1 || numbered[0].leaves != expected);
    }
    check(
        failures == 0,
        format!("DAG rejected; {failures} order failures over {runs} round trips"),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("armine-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(17);
    let mut differing = 0;
    let runs = 24;
    for i in 0..runs {
        let path = dir.join(format!("input{i}.basket"));
        let quantitative = i % 3 == 2;
        let text = if quantitative {
            random_quantitative_basket(&mut rng, 300, 15, 0.8)
        } else {
            let n_items = rng.gen_range(5..=20);
            random_database(&mut rng, n_items, 500, 0.3).to_basket_string()
        };
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let path = path.to_str().unwrap().to_string();
        let format = ["table", "csv", "jsonl"][i % 3];
        let mut args = vec![
            "armine",
            "mine",
            "--min-support",
            "0.05",
            "--min-confidence",
            "0.3",
            "--format",
            format,
        ];
        args.extend(["--interest", "chi2", "--buckets", "3", "--leaf-split", "2"]);
        if quantitative {
            args.extend(["--discretize", "equi-depth", "--max-support", "0.5"]);
        }
        args.push(&path);

        let mut outputs = Vec::new();
        for threads in ["1", "4", "4", "8"] {
            let mut argv = args.clone();
            argv.extend(["--threads", threads]);
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = cli::run(argv, &mut out, &mut err);
            if code != 0 {
                return Err(format!("run {i} exited {code}: {}", String::from_utf8_lossy(&err)));
            }
            outputs.push(out);
        }
        differing += usize::from(outputs.windows(2).any(|w| w[0] != w[1]));
    }
    let _ = std::fs::remove_dir_all(&dir);
    check(
        differing == 0,
        format!("{differing} of {runs} inputs differ across 1, 4 and 8 threads"),
    )
}

fn main() {
    let corpus = oracle_corpus();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 worked example", worked_example()),
        ("2 candidate pruning", candidate_pruning()),
        ("3 itemsets equal exhaustive enumeration", oracle_itemsets(&corpus)),
        ("4 rules equal exhaustive enumeration", oracle_rules(&corpus)),
        ("5 hash-tree subset equals containment filter", hash_tree()),
        ("6 quantitative booleanization", booleanization()),
        ("7 K-partial completeness", partial_completeness()),
        ("8 generalized mining equals full extension", generalized()),
        ("9 negative correlation flagged", negative_correlation()),
        ("10 intertransformation", intertransformation()),
        ("11 deterministic output", determinism()),
    ];
    let mut failed = 0;
    for (name, outcome) in &criteria {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
