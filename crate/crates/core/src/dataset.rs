//! Items, itemsets, transactions and the basket file format.
//!
//! A basket file holds one transaction per line. Items are separated by
//! whitespace or commas and may carry a `:<integer>` quantity suffix. Lines
//! starting with `#` are comments, blank lines are empty transactions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraction::SupportFraction;

/// Dense item identifier. Ids follow the dictionary's total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Strictly increasing sequence of item ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    /// Sorts and deduplicates.
    pub fn new(mut items: Vec<ItemId>) -> Self {
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    pub fn from_sorted(items: Vec<ItemId>) -> Result<Self> {
        if items.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedItemset);
        }
        Ok(Itemset(items))
    }

    pub(crate) fn from_sorted_unchecked(items: Vec<ItemId>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset(items)
    }

    pub fn singleton(item: ItemId) -> Self {
        Itemset(vec![item])
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn into_items(self) -> Vec<ItemId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains_item(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// Linear merge over both ordered sequences.
    pub fn is_subset_of(&self, superset: &[ItemId]) -> bool {
        is_sorted_subset(&self.0, superset)
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Itemset(out)
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(
            self.0
                .iter()
                .copied()
                .filter(|item| !other.contains_item(*item))
                .collect(),
        )
    }

    /// The itemset with the item at `position` removed.
    pub fn without(&self, position: usize) -> Itemset {
        let mut items = self.0.clone();
        items.remove(position);
        Itemset(items)
    }
}

impl AsRef<[ItemId]> for Itemset {
    fn as_ref(&self) -> &[ItemId] {
        &self.0
    }
}

impl From<Vec<ItemId>> for Itemset {
    fn from(items: Vec<ItemId>) -> Self {
        Itemset::new(items)
    }
}

pub(crate) fn is_sorted_subset(sub: &[ItemId], sup: &[ItemId]) -> bool {
    if sub.len() > sup.len() {
        return false;
    }
    let mut rest = sup.iter();
    'outer: for needle in sub {
        for candidate in rest.by_ref() {
            if candidate == needle {
                continue 'outer;
            }
            if candidate > needle {
                return false;
            }
        }
        return false;
    }
    true
}

/// Bidirectional map between item names and ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ItemDictionary {
    names: Vec<String>,
    index: HashMap<String, ItemId>,
}

impl ItemDictionary {
    /// Assigns ids by ascending lexicographic order of the (deduplicated) names.
    pub fn lexicographic<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        names.dedup();
        Self::from_ordered(names).expect("deduplicated")
    }

    /// Keeps the given order; names must be unique.
    pub fn from_ordered(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), ItemId(i as u32)).is_some() {
                return Err(Error::parse(0, format!("duplicate item name `{name}`")));
            }
        }
        Ok(ItemDictionary { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<ItemId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: ItemId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.names.len() as u32).map(ItemId)
    }

    /// Resolves names into an itemset.
    pub fn itemset<S: AsRef<str>>(&self, names: &[S]) -> Result<Itemset> {
        let ids = names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::UnknownItemName(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Itemset::new(ids))
    }

    pub fn item_names(&self, itemset: &Itemset) -> Vec<&str> {
        itemset.iter().map(|id| self.name(id).unwrap_or("?")).collect()
    }

    /// Item names joined by `separator`.
    pub fn render(&self, itemset: &Itemset, separator: &str) -> String {
        self.item_names(itemset).join(separator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tid: usize,
    pub items: Itemset,
    /// Quantity per quantified item; every key also appears in `items`.
    pub quantities: Option<BTreeMap<ItemId, u64>>,
}

impl Transaction {
    pub fn new(tid: usize, items: Itemset) -> Self {
        Transaction {
            tid,
            items,
            quantities: None,
        }
    }

    pub fn quantity(&self, item: ItemId) -> Option<u64> {
        self.quantities.as_ref()?.get(&item).copied()
    }
}

impl AsRef<[ItemId]> for Transaction {
    fn as_ref(&self) -> &[ItemId] {
        self.items.items()
    }
}

/// Whether every item of `itemset` occurs in `transaction`. Empty itemsets are rejected.
pub fn contains(transaction: &Transaction, itemset: &Itemset) -> Result<bool> {
    if itemset.is_empty() {
        return Err(Error::EmptyItemset);
    }
    Ok(itemset.is_subset_of(transaction.items.items()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDatabase {
    dictionary: ItemDictionary,
    transactions: Vec<Transaction>,
}

impl TransactionDatabase {
    /// Assembles a database; every referenced item id must exist in `dictionary`.
    pub fn from_parts(dictionary: ItemDictionary, transactions: Vec<Transaction>) -> Result<Self> {
        let n = dictionary.len() as u32;
        for t in &transactions {
            if let Some(bad) = t.items.iter().find(|id| id.0 >= n) {
                return Err(Error::UnknownItem(bad.0));
            }
            if let Some(q) = &t.quantities {
                if q.keys().any(|id| !t.items.contains_item(*id)) {
                    return Err(Error::parse(t.tid + 1, "quantity for an absent item"));
                }
            }
        }
        Ok(TransactionDatabase {
            dictionary,
            transactions,
        })
    }

    /// Builds a database from item-name baskets, without quantities.
    pub fn from_baskets<B, S>(baskets: &[B]) -> Self
    where
        B: AsRef<[S]>,
        S: AsRef<str>,
    {
        let dictionary = ItemDictionary::lexicographic(
            baskets
                .iter()
                .flat_map(|b| b.as_ref().iter().map(|s| s.as_ref().to_string())),
        );
        let transactions = baskets
            .iter()
            .enumerate()
            .map(|(tid, b)| Transaction::new(tid, dictionary.itemset(b.as_ref()).expect("known names")))
            .collect();
        TransactionDatabase {
            dictionary,
            transactions,
        }
    }

    pub fn dictionary(&self) -> &ItemDictionary {
        &self.dictionary
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn n_transactions(&self) -> usize {
        self.transactions.len()
    }

    pub fn n_items(&self) -> usize {
        self.dictionary.len()
    }

    /// Items that carry quantities in this database.
    pub fn quantified_items(&self) -> Vec<ItemId> {
        let mut seen = vec![false; self.n_items()];
        for q in self.transactions.iter().filter_map(|t| t.quantities.as_ref()) {
            for id in q.keys() {
                seen[id.index()] = true;
            }
        }
        self.dictionary.ids().filter(|id| seen[id.index()]).collect()
    }

    /// Exact number of transactions containing `itemset`.
    pub fn support(&self, itemset: &Itemset) -> Result<SupportFraction> {
        if itemset.is_empty() {
            return Err(Error::EmptyItemset);
        }
        let n = self.n_items() as u32;
        if let Some(bad) = itemset.iter().find(|id| id.0 >= n) {
            return Err(Error::UnknownItem(bad.0));
        }
        let count = self
            .transactions
            .par_iter()
            .filter(|t| itemset.is_subset_of(t.items.items()))
            .count();
        Ok(SupportFraction::new(count as u64, self.n_transactions() as u64))
    }

    /// Writes the database back in basket format.
    pub fn write_basket<W: Write>(&self, mut out: W) -> Result<()> {
        for t in &self.transactions {
            let line: Vec<String> = t
                .items
                .iter()
                .map(|id| {
                    let name = self.dictionary.name(id).expect("known id");
                    match t.quantity(id) {
                        Some(q) => format!("{name}:{q}"),
                        None => name.to_string(),
                    }
                })
                .collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_basket_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_basket(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8 names")
    }
}

type RawItem = (String, Option<u64>);

fn parse_token(token: &str, line: usize) -> Result<RawItem> {
    match token.rsplit_once(':') {
        Some((name, qty)) => {
            if name.is_empty() {
                return Err(Error::parse(line, format!("missing item name in `{token}`")));
            }
            let qty = qty
                .parse::<u64>()
                .map_err(|_| Error::parse(line, format!("invalid quantity in `{token}`")))?;
            Ok((name.to_string(), Some(qty)))
        }
        None => Ok((token.to_string(), None)),
    }
}

/// Reads a basket-format stream.
pub fn load_transactions<R: BufRead>(reader: R) -> Result<TransactionDatabase> {
    let mut raw: Vec<Vec<RawItem>> = Vec::new();
    // name -> quantified?
    let mut kind: HashMap<String, bool> = HashMap::new();

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        let mut basket = Vec::new();
        for token in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
        {
            let (name, qty) = parse_token(token, lineno)?;
            match kind.get(&name) {
                Some(&quantified) if quantified != qty.is_some() => {
                    return Err(Error::InconsistentQuantity {
                        line: lineno,
                        item: name,
                    });
                }
                Some(_) => {}
                None => {
                    kind.insert(name.clone(), qty.is_some());
                }
            }
            basket.push((name, qty));
        }
        raw.push(basket);
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let dictionary = ItemDictionary::lexicographic(kind.into_keys());
    let transactions = raw
        .into_iter()
        .enumerate()
        .map(|(tid, basket)| {
            let mut quantities: BTreeMap<ItemId, u64> = BTreeMap::new();
            let mut ids = Vec::with_capacity(basket.len());
            for (name, qty) in basket {
                let id = dictionary.id(&name).expect("registered");
                ids.push(id);
                if let Some(q) = qty {
                    // duplicate quantified occurrences add up
                    *quantities.entry(id).or_default() += q;
                }
            }
            Transaction {
                tid,
                items: Itemset::new(ids),
                quantities: (!quantities.is_empty()).then_some(quantities),
            }
        })
        .collect();
    Ok(TransactionDatabase {
        dictionary,
        transactions,
    })
}

pub fn parse_basket(text: &str) -> Result<TransactionDatabase> {
    load_transactions(text.as_bytes())
}
