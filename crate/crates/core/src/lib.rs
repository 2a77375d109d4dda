//! # armine
//!
//! Frequent itemsets and association rules with the Apriori family of
//! algorithms: level-wise candidate generation with hash-tree counting,
//! consequent-growing rule extraction, quantitative attributes through
//! interval booleanization, generalized rules over an item taxonomy, the
//! conversion between the last two representations, and lift/chi-squared
//! correlation screening.
//!
//! All supports and confidences are exact rationals.
//!
//! ```
//! use armine::{apriori, generate_rules, parse_basket, Threshold};
//!
//! let db = parse_basket("D\nA B C\nA C\nA D\nA B C D E\n").unwrap();
//! let frequent = apriori(&db, "30%".parse::<Threshold>().unwrap());
//! let rules = generate_rules(&frequent, "60%".parse().unwrap());
//! assert_eq!(frequent.level(3).len(), 1);
//! assert!(rules.iter().any(|r| db.dictionary().render(&r.antecedent, "") == "AB"));
//! ```

pub mod apriori;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod fraction;
pub mod interest;
#[cfg(feature = "testing")]
pub mod oracle;
pub mod quantitative;
pub mod report;
pub mod rules;
pub mod synth;
pub mod taxonomy;
pub mod transform;

pub use apriori::{
    apriori, apriori_filtered, apriori_gen, apriori_with, FrequentItemsets, HashTree, HashTreeConfig, MiningOptions,
};
pub use dataset::{load_transactions, parse_basket, ItemDictionary, ItemId, Itemset, Transaction, TransactionDatabase};
pub use error::{Error, Result};
pub use fraction::{Rational, SupportFraction, Threshold};
pub use rules::{generate_rules, Rule};
pub use taxonomy::{mine_generalized, TaxonomyGraph};
