//! Rule listings as an aligned table, CSV or JSON lines.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::{ItemDictionary, Itemset};
use crate::error::{Error, Result};
use crate::fraction::{decimal, Rational, SupportFraction};
use crate::interest::Annotation;
use crate::rules::Rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Jsonl,
}

/// One CSV record. Itemsets are space-separated item names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub antecedent: String,
    pub consequent: String,
    pub support_num: u64,
    pub support_den: u64,
    pub conf_num: u64,
    pub conf_den: u64,
    pub lift: String,
    pub chi2: String,
}

#[derive(Serialize)]
struct JsonRule<'a> {
    antecedent: Vec<&'a str>,
    consequent: Vec<&'a str>,
    support_num: u64,
    support_den: u64,
    conf_num: u64,
    conf_den: u64,
    confidence: f64,
    lift: Option<String>,
    chi2: Option<f64>,
    flag: Option<&'static str>,
}

fn fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

fn record(rule: &Rule, annotation: Option<&Annotation>, dictionary: &ItemDictionary) -> RuleRecord {
    RuleRecord {
        antecedent: dictionary.render(&rule.antecedent, " "),
        consequent: dictionary.render(&rule.consequent, " "),
        support_num: rule.support.count,
        support_den: rule.support.total,
        conf_num: *rule.confidence.numer(),
        conf_den: *rule.confidence.denom(),
        lift: annotation
            .and_then(|a| a.lift.as_ref())
            .map(fraction)
            .unwrap_or_default(),
        chi2: annotation
            .and_then(|a| a.chi2)
            .map(|x| format!("{x:.4}"))
            .unwrap_or_default(),
    }
}

/// Writes rules with optional per-rule annotations (same length as `rules`).
pub fn write_rules<W: Write + ?Sized>(
    out: &mut W,
    format: OutputFormat,
    dictionary: &ItemDictionary,
    rules: &[Rule],
    annotations: Option<&[Annotation]>,
) -> Result<()> {
    let annotation = |i: usize| annotations.map(|a| &a[i]);
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            for (i, rule) in rules.iter().enumerate() {
                writer
                    .serialize(record(rule, annotation(i), dictionary))
                    .map_err(csv_error)?;
            }
            if rules.is_empty() {
                writer
                    .write_record([
                        "antecedent",
                        "consequent",
                        "support_num",
                        "support_den",
                        "conf_num",
                        "conf_den",
                        "lift",
                        "chi2",
                    ])
                    .map_err(csv_error)?;
            }
            writer.flush()?;
        }
        OutputFormat::Jsonl => {
            for (i, rule) in rules.iter().enumerate() {
                let a = annotation(i);
                let row = JsonRule {
                    antecedent: dictionary.item_names(&rule.antecedent),
                    consequent: dictionary.item_names(&rule.consequent),
                    support_num: rule.support.count,
                    support_den: rule.support.total,
                    conf_num: *rule.confidence.numer(),
                    conf_den: *rule.confidence.denom(),
                    confidence: crate::fraction::to_f64(&rule.confidence),
                    lift: a.and_then(|a| a.lift.as_ref()).map(fraction),
                    chi2: a.and_then(|a| a.chi2),
                    flag: a.and_then(|a| a.flag.as_ref()).map(|f| f.label()),
                };
                serde_json::to_writer(&mut *out, &row).map_err(|e| Error::Io(e.into()))?;
                writeln!(out)?;
            }
        }
        OutputFormat::Table => {
            let mut rows: Vec<Vec<String>> = vec![vec![
                "rule".to_string(),
                "support".to_string(),
                "confidence".to_string(),
            ]];
            if annotations.is_some() {
                rows[0].extend(["lift".to_string(), "chi2".to_string(), "flag".to_string()]);
            }
            for (i, rule) in rules.iter().enumerate() {
                let mut row = vec![
                    rule.render(dictionary),
                    format!("{} ({})", rule.support, decimal(&rule.support.ratio())),
                    format!("{} ({})", fraction(&rule.confidence), decimal(&rule.confidence)),
                ];
                if let Some(a) = annotation(i) {
                    row.push(
                        a.lift
                            .as_ref()
                            .map(|l| format!("{} ({})", fraction(l), decimal(l)))
                            .unwrap_or_else(|| "-".to_string()),
                    );
                    row.push(a.chi2.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".to_string()));
                    row.push(a.flag.as_ref().map_or("", |f| f.label()).to_string());
                }
                rows.push(row);
            }
            let widths: Vec<usize> = (0..rows[0].len())
                .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
                .collect();
            for row in rows {
                let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
                writeln!(out, "{}", cells.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Parses CSV produced by [`write_rules`] back into rules over `dictionary`.
pub fn read_rules_csv(text: &str, dictionary: &ItemDictionary) -> Result<Vec<Rule>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rules = Vec::new();
    for (i, row) in reader.deserialize::<RuleRecord>().enumerate() {
        let row = row.map_err(|e| Error::parse(i + 2, e.to_string()))?;
        let itemset = |names: &str| -> Result<Itemset> {
            let names: Vec<&str> = names.split_whitespace().collect();
            dictionary.itemset(&names)
        };
        if row.conf_den == 0 || row.support_den == 0 {
            return Err(Error::parse(i + 2, "zero denominator"));
        }
        rules.push(Rule {
            antecedent: itemset(&row.antecedent)?,
            consequent: itemset(&row.consequent)?,
            support: SupportFraction::new(row.support_num, row.support_den),
            confidence: Rational::new(row.conf_num, row.conf_den),
        });
    }
    Ok(rules)
}
