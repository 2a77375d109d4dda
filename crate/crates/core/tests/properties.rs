mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use armine::apriori::{apriori_gen, naive_count, Counting};
use armine::interest::{chi_squared, lift, ContingencyTable};
use armine::oracle::{bf_frequent_itemsets, bf_interval_unions, bf_rules, naive_generalized, naive_subset};
use armine::quantitative::{
    all_consecutive_intervals, booleanize, equi_depth_partition, equi_width_partition, format_partitionings,
    merge_adjacent, parse_partitionings, AttributeIntervals, Interval, QuantitativeAttribute,
};
use armine::report::{read_rules_csv, write_rules, OutputFormat};
use armine::synth::random_tree_taxonomy;
use armine::taxonomy::{extend_database, format_taxonomy, mine_generalized, parse_taxonomy};
use armine::transform::{
    leaf_database, natural_cmp, quantitative_to_taxonomy, quantitative_to_taxonomy_bisect, taxonomy_to_quantitative,
};
use armine::{
    apriori, apriori_with, generate_rules, parse_basket, HashTree, HashTreeConfig, ItemId, Itemset, MiningOptions,
    Rational, TaxonomyGraph, Threshold, TransactionDatabase,
};

use common::{database, quantified_text, rows, threshold};

fn quantified() -> impl Strategy<Value = Vec<(Option<u64>, bool)>> {
    (
        1u64..=20,
        prop::collection::vec((prop::option::weighted(0.8, 1u64..=20), any::<bool>()), 0..60),
    )
        .prop_map(|(first, mut rest)| {
            rest.insert(0, (Some(first), false));
            rest
        })
}

fn attribute_of(db: &TransactionDatabase) -> QuantitativeAttribute {
    QuantitativeAttribute::from_db(db, db.dictionary().id("Q").unwrap()).unwrap()
}

fn table() -> impl Strategy<Value = ContingencyTable> {
    (0u64..200, 0u64..200, 0u64..200, 0u64..200).prop_map(|(n11, n10, n01, n00)| ContingencyTable {
        n11,
        n10,
        n01,
        n00,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn support_is_anti_monotone(rows in rows(7, 30), t in threshold()) {
        let db = database(&rows);
        let frequent = apriori(&db, t);
        for (itemset, support) in frequent.iter() {
            prop_assert_eq!(db.support(itemset).unwrap(), *support);
            if itemset.len() < 2 {
                continue;
            }
            for i in 0..itemset.len() {
                let sub = frequent.support(&itemset.without(i)).expect("subsets of frequent itemsets are frequent");
                prop_assert!(sub.count >= support.count);
            }
        }
    }

    #[test]
    fn apriori_matches_exhaustive_enumeration(rows in rows(8, 40), t in threshold()) {
        let db = database(&rows);
        let expected = bf_frequent_itemsets(&db, t).unwrap();
        prop_assert_eq!(apriori(&db, t), expected.clone());
        let naive = MiningOptions { counting: Counting::Naive, ..Default::default() };
        prop_assert_eq!(apriori_with(&db, t, &naive), expected);
    }

    #[test]
    fn rules_match_exhaustive_enumeration(rows in rows(7, 30), t in threshold(), c in threshold()) {
        let frequent = apriori(&database(&rows), t);
        let rules = generate_rules(&frequent, c);
        prop_assert_eq!(&rules, &bf_rules(&frequent, c));
        for r in &rules {
            prop_assert!(r.confidence >= c.ratio());
            prop_assert!(r.confidence <= Rational::from_integer(1));
        }
    }

    #[test]
    fn hash_tree_subset_matches_containment(
        k in 1usize..=4,
        raw in prop::collection::vec(prop::collection::btree_set(0u32..12, 4), 0..60),
        txn in prop::collection::btree_set(0u32..12, 0..12),
        buckets in prop::sample::select(vec![1usize, 2, 3, 8, 32]),
        leaf in prop::sample::select(vec![1usize, 2, 4, 16]),
    ) {
        let mut candidates: Vec<Itemset> = raw
            .into_iter()
            .map(|s| Itemset::new(s.into_iter().take(k).map(ItemId).collect()))
            .collect();
        candidates.sort();
        candidates.dedup();
        let config = HashTreeConfig { bucket_count: buckets, leaf_split_threshold: leaf };
        let tree = HashTree::build(k, candidates.clone(), config);
        let t: Vec<ItemId> = txn.into_iter().map(ItemId).collect();
        let mut got = tree.subset(&t);
        got.sort();
        prop_assert_eq!(got, naive_subset(&candidates, &t));
        let mut flat = tree.flatten();
        flat.sort();
        prop_assert_eq!(flat, candidates.clone());
        let transactions = vec![Itemset::new(t.clone()), Itemset::new(t)];
        prop_assert_eq!(tree.count(&transactions), naive_count(&candidates, &transactions));
    }

    #[test]
    fn generated_candidates_have_frequent_subsets(rows in rows(8, 30), t in threshold()) {
        let frequent = apriori(&database(&rows), t);
        for k in 2..=frequent.max_size() + 1 {
            let previous: Vec<Itemset> = frequent.level(k - 1).iter().map(|(s, _)| s.clone()).collect();
            let candidates = apriori_gen(&previous);
            for c in &candidates.candidates {
                prop_assert_eq!(c.len(), k);
                for i in 0..k {
                    prop_assert!(frequent.contains(&c.without(i)));
                }
            }
            // every frequent k-itemset was a candidate
            for (s, _) in frequent.level(k) {
                prop_assert!(candidates.candidates.contains(s));
            }
        }
    }

    #[test]
    fn partitions_cover_every_rank_once(values in quantified(), n in 1usize..12) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let a = attribute_of(&db);
        for p in [equi_width_partition(&a, n), equi_depth_partition(&a, n)] {
            let covering: Vec<usize> = (0..a.n_ranks())
                .map(|r| p.intervals().iter().filter(|iv| iv.contains(r)).count())
                .collect();
            prop_assert!(covering.iter().all(|&c| c == 1));
            prop_assert!(p.intervals().len() <= n.min(a.n_ranks()));
        }
        let widths: Vec<usize> = equi_width_partition(&a, n).intervals().iter().map(|iv| iv.width()).collect();
        prop_assert!(widths.iter().max().unwrap() - widths.iter().min().unwrap() <= 1);
        prop_assert_eq!(widths.len(), n.min(a.n_ranks()));
    }

    #[test]
    fn merging_matches_exhaustive_unions(values in quantified(), n in 1usize..10, max in 1u64..=20) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let a = attribute_of(&db);
        let p = equi_depth_partition(&a, n);
        let max_support = Threshold::from_fraction(max, 20);
        let min_support = Threshold::from_fraction(1, 20).min(max_support);
        let mut merged = merge_adjacent(&p, &db, min_support, max_support).unwrap();
        merged.sort();
        prop_assert_eq!(merged, bf_interval_unions(&p, &db, max_support));
    }

    #[test]
    fn wider_intervals_have_more_support(values in quantified()) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let a = attribute_of(&db);
        let intervals = all_consecutive_intervals(&a);
        let boolean = booleanize(&db, &[AttributeIntervals { attribute: a.clone(), intervals: intervals.clone() }]).unwrap();
        let support = |iv: &Interval| {
            let id = boolean.dictionary().id(&a.interval_name(*iv)).unwrap();
            boolean.support(&Itemset::singleton(id)).unwrap()
        };
        for i in &intervals {
            for j in &intervals {
                if j.covers(i) {
                    prop_assert!(support(j).count >= support(i).count);
                }
            }
        }
        let x = db.dictionary().id("x");
        if let Some(x) = x {
            let before = db.support(&Itemset::singleton(x)).unwrap();
            let after = boolean.support(&Itemset::singleton(boolean.dictionary().id("x").unwrap())).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn generalized_mining_matches_full_extension(rows in rows(7, 25), t in threshold(), c in threshold(), seed in any::<u64>()) {
        let db = database(&rows);
        let mut rng = StdRng::seed_from_u64(seed);
        let edges = random_tree_taxonomy(&mut rng, &db, 3);
        let taxonomy = TaxonomyGraph::from_edges(&edges, db.dictionary()).unwrap();
        let mined = mine_generalized(&db, &taxonomy, t, c).unwrap();
        let (itemsets, rules) = naive_generalized(&db, &taxonomy, t, c);
        prop_assert_eq!(mined.itemsets, itemsets);
        prop_assert_eq!(mined.rules, rules);
    }

    #[test]
    fn categories_are_at_least_as_frequent_as_children(rows in rows(7, 25), seed in any::<u64>()) {
        let db = database(&rows);
        let mut rng = StdRng::seed_from_u64(seed);
        let taxonomy = TaxonomyGraph::from_edges(&random_tree_taxonomy(&mut rng, &db, 3), db.dictionary()).unwrap();
        let extended = extend_database(&db, &taxonomy);
        for id in taxonomy.dictionary().ids() {
            let own = extended.support(&Itemset::singleton(id)).unwrap();
            prop_assert_eq!(own, taxonomy.generalized_support(&db, id));
            for &child in taxonomy.children(id) {
                prop_assert!(own.count >= extended.support(&Itemset::singleton(child)).unwrap().count);
            }
        }
    }

    #[test]
    fn numbered_spans_match_category_support(rows in rows(7, 25), seed in any::<u64>()) {
        let db = database(&rows);
        let mut rng = StdRng::seed_from_u64(seed);
        let taxonomy = TaxonomyGraph::from_edges(&random_tree_taxonomy(&mut rng, &db, 3), db.dictionary()).unwrap();
        let dict = taxonomy.dictionary();
        for attribute in taxonomy_to_quantitative(&taxonomy).unwrap() {
            for (category, span) in &attribute.categories {
                let id = dict.id(category).unwrap();
                prop_assert_eq!(attribute.interval_support(&db, *span), taxonomy.generalized_support(&db, id));
                // the span holds exactly the category's leaf descendants
                let below: BTreeSet<&str> = dict
                    .ids()
                    .filter(|leaf| taxonomy.children(*leaf).is_empty() && taxonomy.ancestors(*leaf).contains(&id))
                    .map(|leaf| dict.name(leaf).unwrap())
                    .collect();
                let numbered: BTreeSet<&str> = attribute.leaves[span.lo..=span.hi].iter().map(String::as_str).collect();
                prop_assert_eq!(below, numbered);
            }
        }
    }

    #[test]
    fn interval_tree_round_trip_keeps_rank_order(values in quantified(), n in 1usize..8, bisect in any::<bool>()) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let a = attribute_of(&db);
        let tree = if bisect { quantitative_to_taxonomy_bisect(&a) } else { quantitative_to_taxonomy(&equi_depth_partition(&a, n)) };
        let leaves = leaf_database(&db, std::slice::from_ref(&a)).unwrap();
        let graph = tree.to_graph(leaves.dictionary()).unwrap();
        let numbered = taxonomy_to_quantitative(&graph).unwrap();
        let expected: Vec<String> = (0..a.n_ranks()).map(|r| a.interval_name(Interval::singleton(r))).collect();
        if a.n_ranks() > 1 {
            prop_assert_eq!(numbered.len(), 1);
            prop_assert_eq!(&numbered[0].leaves, &expected);
        } else {
            prop_assert!(numbered.is_empty());
        }
    }

    #[test]
    fn interval_taxonomy_equals_interval_booleanization(values in quantified(), n in 1usize..6, t in threshold()) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let a = attribute_of(&db);
        let p = equi_depth_partition(&a, n);
        let tree = quantitative_to_taxonomy(&p);

        let leaves = leaf_database(&db, std::slice::from_ref(&a)).unwrap();
        let graph = tree.to_graph(leaves.dictionary()).unwrap();
        let via_taxonomy = mine_generalized(&leaves, &graph, t, Threshold::from_fraction(1, 1)).unwrap();

        let mut intervals: Vec<Interval> = tree.nodes().iter().map(|node| node.interval).collect();
        intervals.sort();
        let boolean = booleanize(&db, &[AttributeIntervals { attribute: a, intervals }]).unwrap();
        let via_intervals = apriori(&boolean, t);

        let names = |dict: &armine::ItemDictionary, s: &Itemset| -> Vec<String> {
            let mut v: Vec<String> = dict.item_names(s).into_iter().map(String::from).collect();
            v.sort();
            v
        };
        let mut left: Vec<(Vec<String>, u64)> = via_taxonomy
            .itemsets
            .iter()
            .map(|(s, sup)| (names(&via_taxonomy.dictionary, s), sup.count))
            .collect();
        // nested intervals are an item together with its generalization
        let mut right: Vec<(Vec<String>, u64)> = via_intervals
            .iter()
            .filter(|(s, _)| !graph.has_item_and_ancestor(&graph.dictionary().itemset(&names(boolean.dictionary(), s)).unwrap()))
            .map(|(s, sup)| (names(boolean.dictionary(), s), sup.count))
            .collect();
        left.sort();
        right.sort();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn lift_is_symmetric(ct in table()) {
        match (lift(&ct), lift(&ct.transposed())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "lift defined in only one direction"),
        }
    }

    #[test]
    fn chi_squared_is_non_negative_and_scales(ct in table()) {
        if let Ok(x) = chi_squared(&ct) {
            prop_assert!(x >= 0.0);
            let doubled = ContingencyTable { n11: 2 * ct.n11, n10: 2 * ct.n10, n01: 2 * ct.n01, n00: 2 * ct.n00 };
            let y = chi_squared(&doubled).unwrap();
            prop_assert!((y - 2.0 * x).abs() <= 1e-9 * y.max(1.0));
        }
    }

    #[test]
    fn independent_tables_have_zero_statistic(a in 1u64..20, b in 1u64..20, c in 1u64..20, d in 1u64..20) {
        // outer product of (a, b) and (c, d)
        let ct = ContingencyTable { n11: a * c, n10: a * d, n01: b * c, n00: b * d };
        prop_assert_eq!(lift(&ct).unwrap(), Rational::from_integer(1));
        prop_assert!(chi_squared(&ct).unwrap().abs() < 1e-9);
    }

    #[test]
    fn basket_text_round_trips(values in quantified()) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let again = parse_basket(&db.to_basket_string()).unwrap();
        prop_assert_eq!(again.dictionary().names(), db.dictionary().names());
        prop_assert_eq!(again.transactions(), db.transactions());
    }

    #[test]
    fn partition_text_round_trips(values in quantified(), n in 1usize..8) {
        let db = parse_basket(&quantified_text(&values)).unwrap();
        let p = equi_depth_partition(&attribute_of(&db), n);
        let text = format_partitionings(std::slice::from_ref(&p));
        prop_assert_eq!(parse_partitionings(&text, &db).unwrap(), vec![p]);
    }

    #[test]
    fn taxonomy_text_round_trips(rows in rows(7, 10), seed in any::<u64>()) {
        let db = database(&rows);
        let mut rng = StdRng::seed_from_u64(seed);
        let taxonomy = TaxonomyGraph::from_edges(&random_tree_taxonomy(&mut rng, &db, 3), db.dictionary()).unwrap();
        let again = parse_taxonomy(&format_taxonomy(&taxonomy), &db).unwrap();
        prop_assert_eq!(again.dictionary().names(), taxonomy.dictionary().names());
        for id in taxonomy.dictionary().ids() {
            prop_assert_eq!(again.ancestors(id), taxonomy.ancestors(id));
        }
    }

    #[test]
    fn csv_rules_round_trip(rows in rows(6, 20), t in threshold(), c in threshold()) {
        let db = database(&rows);
        let rules = generate_rules(&apriori(&db, t), c);
        let mut buf = Vec::new();
        write_rules(&mut buf, OutputFormat::Csv, db.dictionary(), &rules, None).unwrap();
        prop_assert_eq!(read_rules_csv(&String::from_utf8(buf).unwrap(), db.dictionary()).unwrap(), rules);
    }

    #[test]
    fn thresholds_parse_in_every_notation(n in 1u64..=100) {
        let percent: Threshold = format!("{n}%").parse().unwrap();
        let fraction: Threshold = format!("{n}/100").parse().unwrap();
        let decimal: Threshold = format!("{}", n as f64 / 100.0).parse().unwrap();
        prop_assert_eq!(percent, fraction);
        prop_assert_eq!(percent, decimal);
        prop_assert_eq!(percent.ratio(), Rational::new(n, 100));
    }

    #[test]
    fn natural_order_is_numeric_on_interval_names(a in 0u64..5000, b in 0u64..5000) {
        prop_assert_eq!(natural_cmp(&format!("x[{a},{a}]"), &format!("x[{b},{b}]")), a.cmp(&b));
    }
}
