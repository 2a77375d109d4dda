//! Correlation screening for mined rules.
//!
//! A rule can clear support and confidence while its antecedent and
//! consequent are negatively correlated, when the consequent is common
//! everywhere. Lift below 1 exposes that; the chi-squared statistic of the
//! 2×2 presence table measures how far the rule departs from independence.

use serde::Serialize;

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::fraction::Rational;
use crate::rules::Rule;

/// 5% critical value of chi-squared with one degree of freedom.
pub const CHI2_CRITICAL_5PCT: f64 = 3.84;

/// Presence/absence counts of antecedent (first index) and consequent (second).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub n11: u64,
    pub n10: u64,
    pub n01: u64,
    pub n00: u64,
}

impl ContingencyTable {
    pub fn total(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    pub fn antecedent_count(&self) -> u64 {
        self.n11 + self.n10
    }

    pub fn consequent_count(&self) -> u64 {
        self.n11 + self.n01
    }

    /// The same table seen from the rule `consequent → antecedent`.
    pub fn transposed(&self) -> Self {
        ContingencyTable {
            n11: self.n11,
            n10: self.n01,
            n01: self.n10,
            n00: self.n00,
        }
    }
}

pub fn contingency(db: &TransactionDatabase, rule: &Rule) -> ContingencyTable {
    let mut table = ContingencyTable {
        n11: 0,
        n10: 0,
        n01: 0,
        n00: 0,
    };
    for t in db.transactions() {
        let a = rule.antecedent.is_subset_of(t.items.items());
        let c = rule.consequent.is_subset_of(t.items.items());
        match (a, c) {
            (true, true) => table.n11 += 1,
            (true, false) => table.n10 += 1,
            (false, true) => table.n01 += 1,
            (false, false) => table.n00 += 1,
        }
    }
    table
}

/// `n11·n / ((n11+n10)(n11+n01))`; below 1 means negative correlation.
pub fn lift(table: &ContingencyTable) -> Result<Rational> {
    let (a, c) = (table.antecedent_count(), table.consequent_count());
    if a == 0 || c == 0 {
        return Err(Error::NotApplicable("zero marginal"));
    }
    let num = table.n11 as u128 * table.total() as u128;
    let den = a as u128 * c as u128;
    let g = gcd(num, den);
    let (num, den) = (num / g.max(1), den / g.max(1));
    match (u64::try_from(num), u64::try_from(den)) {
        (Ok(n), Ok(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::NotApplicable("lift overflows")),
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pearson's statistic over the 2×2 table with expectations from the marginals.
pub fn chi_squared(table: &ContingencyTable) -> Result<f64> {
    let n = table.total() as f64;
    let rows = [table.antecedent_count(), table.n01 + table.n00];
    let cols = [table.consequent_count(), table.n10 + table.n00];
    if rows.contains(&0) || cols.contains(&0) {
        return Err(Error::NotApplicable("zero expected cell"));
    }
    let observed = [[table.n11, table.n10], [table.n01, table.n00]];
    let mut statistic = 0.0;
    for (i, row) in observed.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let expected = rows[i] as f64 * cols[j] as f64 / n;
            let diff = o as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    Ok(statistic)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InterestMode {
    #[default]
    None,
    /// Flag rules with lift below 1.
    Lift,
    /// Flag rules whose statistic exceeds the threshold.
    ChiSquared { threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    NegativeCorrelation,
    Significant,
}

impl Flag {
    pub fn label(&self) -> &'static str {
        match self {
            Flag::NegativeCorrelation => "negative",
            Flag::Significant => "significant",
        }
    }
}

/// Interest annotations for one rule; `None` where not requested or not applicable.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub lift: Option<Rational>,
    pub chi2: Option<f64>,
    pub flag: Option<Flag>,
}

pub fn annotate(db: &TransactionDatabase, rule: &Rule, mode: InterestMode) -> Annotation {
    let table = contingency(db, rule);
    match mode {
        InterestMode::None => Annotation {
            lift: None,
            chi2: None,
            flag: None,
        },
        InterestMode::Lift => {
            let lift = lift(&table).ok();
            let negative = lift.is_some_and(|l| l < Rational::from_integer(1));
            Annotation {
                lift,
                chi2: None,
                flag: negative.then_some(Flag::NegativeCorrelation),
            }
        }
        InterestMode::ChiSquared { threshold } => {
            let chi2 = chi_squared(&table).ok();
            let significant = chi2.is_some_and(|x| x > threshold);
            Annotation {
                lift: lift(&table).ok(),
                chi2,
                flag: significant.then_some(Flag::Significant),
            }
        }
    }
}
