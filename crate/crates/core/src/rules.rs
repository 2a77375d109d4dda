//! Association rules from frequent itemsets.
//!
//! Consequents grow level-wise per itemset: start from single-item
//! consequents, drop those whose rule misses the confidence threshold, and
//! join the survivors into the next consequent level. A larger consequent
//! means a smaller antecedent with higher support, so its confidence can only
//! be lower; dropped consequents never need to be extended.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apriori::{apriori_gen, FrequentItemsets};
use crate::dataset::{ItemDictionary, Itemset};
use crate::error::{Error, Result};
use crate::fraction::{Rational, SupportFraction, Threshold};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    /// Support of antecedent ∪ consequent.
    pub support: SupportFraction,
    #[serde(with = "rational_serde")]
    pub confidence: Rational,
}

impl Rule {
    pub fn itemset(&self) -> Itemset {
        self.antecedent.union(&self.consequent)
    }

    pub fn render(&self, dictionary: &ItemDictionary) -> String {
        format!(
            "{{{}}} -> {{{}}}",
            dictionary.render(&self.antecedent, ", "),
            dictionary.render(&self.consequent, ", ")
        )
    }
}

/// Output order: itemset size, then antecedent, then consequent.
pub fn rule_order(a: &Rule, b: &Rule) -> Ordering {
    (a.antecedent.len() + a.consequent.len())
        .cmp(&(b.antecedent.len() + b.consequent.len()))
        .then_with(|| a.antecedent.cmp(&b.antecedent))
        .then_with(|| a.consequent.cmp(&b.consequent))
}

pub fn sort_rules(rules: &mut [Rule]) {
    rules.sort_by(rule_order);
}

/// `support(X ∪ Y) / support(X)` as an exact rational.
pub fn confidence(union: SupportFraction, antecedent: SupportFraction) -> Result<Rational> {
    if antecedent.count == 0 {
        return Err(Error::ZeroSupport);
    }
    debug_assert!(union.count <= antecedent.count);
    Ok(Rational::new(union.count, antecedent.count))
}

pub(crate) fn meets(confidence: &Rational, min_confidence: Threshold) -> bool {
    *confidence >= min_confidence.ratio()
}

/// All rules `X → Y` with `X ∪ Y` frequent and confidence ≥ `min_confidence`.
///
/// `frequent` must be downward closed.
pub fn generate_rules(frequent: &FrequentItemsets, min_confidence: Threshold) -> Vec<Rule> {
    let itemsets: Vec<_> = (2..=frequent.max_size())
        .flat_map(|k| frequent.level(k).iter())
        .collect();
    let mut rules: Vec<Rule> = itemsets
        .par_iter()
        .flat_map_iter(|(itemset, support)| {
            let mut out = Vec::new();
            let singles: Vec<Itemset> = itemset.iter().map(Itemset::singleton).collect();
            grow_consequents(frequent, itemset, *support, singles, min_confidence, &mut out);
            out
        })
        .collect();
    sort_rules(&mut rules);
    rules
}

fn grow_consequents(
    frequent: &FrequentItemsets,
    itemset: &Itemset,
    support: SupportFraction,
    mut consequents: Vec<Itemset>,
    min_confidence: Threshold,
    out: &mut Vec<Rule>,
) {
    loop {
        let m = match consequents.first() {
            Some(h) => h.len(),
            None => return,
        };
        if itemset.len() <= m {
            return;
        }
        consequents.retain(|consequent| {
            let antecedent = itemset.difference(consequent);
            let antecedent_support = frequent
                .support(&antecedent)
                .expect("frequent itemsets must be downward closed");
            let conf = confidence(support, antecedent_support).expect("antecedent occurs");
            if meets(&conf, min_confidence) {
                out.push(Rule {
                    antecedent,
                    consequent: consequent.clone(),
                    support,
                    confidence: conf,
                });
                true
            } else {
                false
            }
        });
        consequents = apriori_gen(&consequents).candidates;
    }
}

pub(crate) mod rational_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::fraction::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        (*value.numer(), *value.denom()).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let (n, d) = <(u64, u64)>::deserialize(deserializer)?;
        if d == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(n, d))
    }
}
