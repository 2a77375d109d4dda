//! Quantitative attributes: value ranks, interval partitioning, adjacent
//! interval merging and booleanization into synthetic interval items.
//!
//! Observed quantities of an attribute are mapped to consecutive ranks
//! `0..v` preserving order. Intervals are closed over ranks; synthetic items
//! are named by their raw bounds, e.g. `Beer[1,5]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::dataset::{ItemDictionary, ItemId, Itemset, Transaction, TransactionDatabase};
use crate::error::{Error, Result};
use crate::fraction::{Rational, SupportFraction, Threshold};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantitativeAttribute {
    item: ItemId,
    name: String,
    /// Distinct observed raw values, ascending; index = rank.
    values: Vec<u64>,
    /// Number of transactions holding each rank.
    counts: Vec<u64>,
}

impl QuantitativeAttribute {
    /// Collects the observed quantities of `item` from `db`.
    pub fn from_db(db: &TransactionDatabase, item: ItemId) -> Result<Self> {
        let name = db
            .dictionary()
            .name(item)
            .ok_or(Error::UnknownItem(item.0))?
            .to_string();
        let observed = db.transactions().iter().filter_map(|t| t.quantity(item));
        Ok(Self::from_values(item, name, observed))
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(item: ItemId, name: impl Into<String>, observed: I) -> Self {
        let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
        for v in observed {
            *histogram.entry(v).or_default() += 1;
        }
        QuantitativeAttribute {
            item,
            name: name.into(),
            values: histogram.keys().copied().collect(),
            counts: histogram.values().copied().collect(),
        }
    }

    pub fn item(&self) -> ItemId {
        self.item
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_ranks(&self) -> usize {
        self.values.len()
    }

    pub fn rank(&self, raw: u64) -> Option<usize> {
        self.values.binary_search(&raw).ok()
    }

    pub fn raw(&self, rank: usize) -> u64 {
        self.values[rank]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Occurrence count per rank.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn occurrences(&self, interval: Interval) -> u64 {
        self.counts[interval.lo..=interval.hi].iter().sum()
    }

    pub fn full_range(&self) -> Option<Interval> {
        (!self.values.is_empty()).then(|| Interval::new(0, self.values.len() - 1))
    }

    /// Synthetic item name for an interval, using raw bounds.
    pub fn interval_name(&self, interval: Interval) -> String {
        format!("{}[{},{}]", self.name, self.raw(interval.lo), self.raw(interval.hi))
    }
}

/// Every quantified item of `db`, in item order.
pub fn quantitative_attributes(db: &TransactionDatabase) -> Vec<QuantitativeAttribute> {
    db.quantified_items()
        .into_iter()
        .map(|id| QuantitativeAttribute::from_db(db, id).expect("known item"))
        .collect()
}

/// Closed interval over ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "empty interval [{lo},{hi}]");
        Interval { lo, hi }
    }

    pub fn singleton(rank: usize) -> Self {
        Interval { lo: rank, hi: rank }
    }

    pub fn contains(&self, rank: usize) -> bool {
        self.lo <= rank && rank <= self.hi
    }

    pub fn covers(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }
}

/// Ordered, adjacent, covering intervals of one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    attribute: QuantitativeAttribute,
    intervals: Vec<Interval>,
}

impl Partitioning {
    pub fn new(attribute: QuantitativeAttribute, intervals: Vec<Interval>) -> Result<Self> {
        let mut next = 0;
        for iv in &intervals {
            if iv.lo != next || iv.hi < iv.lo {
                return Err(Error::InvalidPartitioning(format!(
                    "{}: interval [{},{}] does not start at rank {next}",
                    attribute.name, iv.lo, iv.hi
                )));
            }
            next = iv.hi + 1;
        }
        if next != attribute.n_ranks() {
            return Err(Error::InvalidPartitioning(format!(
                "{}: intervals cover {next} of {} ranks",
                attribute.name,
                attribute.n_ranks()
            )));
        }
        Ok(Partitioning { attribute, intervals })
    }

    pub fn attribute(&self) -> &QuantitativeAttribute {
        &self.attribute
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Index of the base interval containing `rank`.
    pub fn locate(&self, rank: usize) -> Option<usize> {
        let i = self.intervals.partition_point(|iv| iv.hi < rank);
        (i < self.intervals.len() && self.intervals[i].contains(rank)).then_some(i)
    }
}

/// `ceil(2n / (m (K - 1)))`, at least 1: partitions needed per attribute for
/// `K`-partial completeness with `n` quantitative attributes and minimum support `m`.
pub fn num_partitions(n_quantitative: usize, min_support: Threshold, completeness: Rational) -> Result<usize> {
    let one = Rational::from_integer(1);
    if completeness <= one {
        return Err(Error::InvalidCompleteness(completeness.to_string()));
    }
    let m = min_support.ratio();
    let excess = completeness - one;
    let num = 2 * n_quantitative as u128 * *m.denom() as u128 * *excess.denom() as u128;
    let den = *m.numer() as u128 * *excess.numer() as u128;
    Ok((num.div_ceil(den) as usize).max(1))
}

/// Splits the rank range into `n` (at most one per rank) contiguous
/// intervals of near-equal width: interval `b` ends at `ceil((b+1)·v/n) − 1`.
pub fn equi_width_partition(attribute: &QuantitativeAttribute, n: usize) -> Partitioning {
    let v = attribute.n_ranks();
    let n = n.max(1).min(v);
    let mut intervals = Vec::with_capacity(n);
    let mut lo = 0;
    for b in 0..n {
        let hi = ((b + 1) * v).div_ceil(n) - 1;
        intervals.push(Interval::new(lo, hi));
        lo = hi + 1;
    }
    Partitioning::new(attribute.clone(), intervals).expect("exact cover")
}

/// Splits the ranks so each interval holds about `1/n` of the occurrences.
///
/// A rank is never split; an interval closes after the rank whose cumulative
/// count first reaches the next quota multiple. Heavy ranks can yield fewer
/// than `n` intervals.
pub fn equi_depth_partition(attribute: &QuantitativeAttribute, n: usize) -> Partitioning {
    let n = n.max(1) as u128;
    let total: u128 = attribute.counts.iter().map(|&c| c as u128).sum();
    let mut intervals = Vec::new();
    let mut lo = 0;
    let mut cumulative: u128 = 0;
    let mut closed: u128 = 0;
    let last = attribute.n_ranks().saturating_sub(1);
    for (rank, &count) in attribute.counts.iter().enumerate() {
        cumulative += count as u128;
        if rank == last || cumulative * n >= (closed + 1) * total {
            intervals.push(Interval::new(lo, rank));
            lo = rank + 1;
            closed = (cumulative * n / total).min(n);
        }
    }
    Partitioning::new(attribute.clone(), intervals).expect("exact cover")
}

/// Support of the synthetic item for `interval`.
pub fn interval_support(
    db: &TransactionDatabase,
    attribute: &QuantitativeAttribute,
    interval: Interval,
) -> SupportFraction {
    SupportFraction::new(attribute.occurrences(interval), db.n_transactions() as u64)
}

/// Base intervals plus unions of consecutive base intervals whose support
/// stays within `max_support`. Extension from each start stops at the first
/// union exceeding `max_support`. Output is ordered by `(lo, hi)`.
pub fn merge_adjacent(
    partitioning: &Partitioning,
    db: &TransactionDatabase,
    min_support: Threshold,
    max_support: Threshold,
) -> Result<Vec<Interval>> {
    if max_support < min_support {
        return Err(Error::MaxBelowMinSupport);
    }
    let attribute = partitioning.attribute();
    let base = partitioning.intervals();
    let mut out = Vec::new();
    for (i, first) in base.iter().enumerate() {
        out.push(*first);
        for last in &base[i + 1..] {
            let union = Interval::new(first.lo, last.hi);
            if !interval_support(db, attribute, union).at_most(max_support) {
                break;
            }
            out.push(union);
        }
    }
    Ok(out)
}

/// Every consecutive rank interval: `v(v+1)/2` of them.
pub fn all_consecutive_intervals(attribute: &QuantitativeAttribute) -> Vec<Interval> {
    let v = attribute.n_ranks();
    (0..v)
        .flat_map(|lo| (lo..v).map(move |hi| Interval::new(lo, hi)))
        .collect()
}

/// Admitted intervals of one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeIntervals {
    pub attribute: QuantitativeAttribute,
    pub intervals: Vec<Interval>,
}

/// Replaces each quantified occurrence by one synthetic item per admitted
/// interval containing its rank. Unquantified items pass through.
pub fn booleanize(db: &TransactionDatabase, attributes: &[AttributeIntervals]) -> Result<TransactionDatabase> {
    let by_item: HashMap<ItemId, &AttributeIntervals> = attributes.iter().map(|a| (a.attribute.item(), a)).collect();
    for item in db.quantified_items() {
        if !by_item.contains_key(&item) {
            let name = db.dictionary().name(item).unwrap_or("?").to_string();
            return Err(Error::MissingPartitioning(name));
        }
    }

    let source = db.dictionary();
    let mut names: Vec<String> = source
        .ids()
        .filter(|id| !by_item.contains_key(id))
        .map(|id| source.name(id).expect("known").to_string())
        .collect();
    for a in attributes {
        names.extend(a.intervals.iter().map(|iv| a.attribute.interval_name(*iv)));
    }
    let dictionary = ItemDictionary::lexicographic(names);

    // per attribute, the synthetic ids for each rank
    let mut rank_items: HashMap<ItemId, Vec<Vec<ItemId>>> = HashMap::new();
    for a in attributes {
        let mut per_rank = vec![Vec::new(); a.attribute.n_ranks()];
        for iv in &a.intervals {
            let id = dictionary.id(&a.attribute.interval_name(*iv)).expect("registered");
            for slot in &mut per_rank[iv.lo..=iv.hi] {
                slot.push(id);
            }
        }
        rank_items.insert(a.attribute.item(), per_rank);
    }

    let mut transactions = Vec::with_capacity(db.n_transactions());
    for t in db.transactions() {
        let mut items = Vec::with_capacity(t.items.len());
        for id in t.items.iter() {
            match by_item.get(&id) {
                None => items.push(dictionary.id(source.name(id).expect("known")).expect("passed through")),
                Some(a) => {
                    let quantity = t
                        .quantity(id)
                        .ok_or_else(|| Error::MissingPartitioning(a.attribute.name().to_string()))?;
                    let rank = a.attribute.rank(quantity).ok_or_else(|| Error::QuantityOutOfRange {
                        item: a.attribute.name().to_string(),
                        quantity,
                    })?;
                    items.extend_from_slice(&rank_items[&id][rank]);
                }
            }
        }
        transactions.push(Transaction::new(t.tid, Itemset::new(items)));
    }
    TransactionDatabase::from_parts(dictionary, transactions)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    EquiWidth,
    EquiDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discretization {
    pub mode: PartitionMode,
    /// Fixed partition count; computed from `completeness` when absent.
    pub partitions: Option<usize>,
    pub completeness: Rational,
    /// Defaults to five times the minimum support.
    pub max_support: Option<Threshold>,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization {
            mode: PartitionMode::EquiDepth,
            partitions: None,
            completeness: Rational::new(3, 2),
            max_support: None,
        }
    }
}

impl Discretization {
    pub fn max_support(&self, min_support: Threshold) -> Threshold {
        self.max_support.unwrap_or_else(|| min_support.scaled(5))
    }

    /// Requested partition count per attribute, before clamping to the value count.
    pub fn requested_partitions(&self, n_quantitative: usize, min_support: Threshold) -> Result<usize> {
        match self.partitions {
            Some(n) => Ok(n.max(1)),
            None => num_partitions(n_quantitative, min_support, self.completeness),
        }
    }

    /// Base partitionings of every quantified attribute.
    pub fn partition(&self, db: &TransactionDatabase, min_support: Threshold) -> Result<Vec<Partitioning>> {
        let attributes = quantitative_attributes(db);
        if attributes.is_empty() {
            return Ok(Vec::new());
        }
        let n = self.requested_partitions(attributes.len(), min_support)?;
        Ok(attributes
            .iter()
            .map(|a| match self.mode {
                PartitionMode::EquiWidth => equi_width_partition(a, n),
                PartitionMode::EquiDepth => equi_depth_partition(a, n),
            })
            .collect())
    }

    /// Partitioned and merged intervals of every quantified attribute.
    pub fn admitted(&self, db: &TransactionDatabase, min_support: Threshold) -> Result<Vec<AttributeIntervals>> {
        let max_support = self.max_support(min_support);
        self.partition(db, min_support)?
            .into_iter()
            .map(|p| {
                Ok(AttributeIntervals {
                    intervals: merge_adjacent(&p, db, min_support, max_support)?,
                    attribute: p.attribute,
                })
            })
            .collect()
    }

    /// Partition, merge, and booleanize.
    pub fn booleanize(&self, db: &TransactionDatabase, min_support: Threshold) -> Result<TransactionDatabase> {
        booleanize(db, &self.admitted(db, min_support)?)
    }

    /// Booleanized database and the attribute of each synthetic item.
    pub fn booleanize_grouped(
        &self,
        db: &TransactionDatabase,
        min_support: Threshold,
    ) -> Result<(TransactionDatabase, AttributeGroups)> {
        let admitted = self.admitted(db, min_support)?;
        let boolean = booleanize(db, &admitted)?;
        let groups = AttributeGroups::new(&boolean, &admitted);
        Ok((boolean, groups))
    }
}

/// Source attribute of each item of a booleanized database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeGroups(Vec<Option<usize>>);

impl AttributeGroups {
    pub fn new(booleanized: &TransactionDatabase, attributes: &[AttributeIntervals]) -> Self {
        let mut groups = vec![None; booleanized.n_items()];
        for (g, a) in attributes.iter().enumerate() {
            for iv in &a.intervals {
                if let Some(id) = booleanized.dictionary().id(&a.attribute.interval_name(*iv)) {
                    groups[id.index()] = Some(g);
                }
            }
        }
        AttributeGroups(groups)
    }

    pub fn attribute(&self, item: ItemId) -> Option<usize> {
        self.0.get(item.index()).copied().flatten()
    }

    /// False when two items of `itemset` are intervals of one attribute.
    pub fn distinct(&self, itemset: &Itemset) -> bool {
        let mut seen: Vec<usize> = itemset.iter().filter_map(|id| self.attribute(id)).collect();
        let n = seen.len();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == n
    }
}

/// One line per interval: `attr lo hi raw_lo raw_hi count`.
pub fn format_partitionings(partitionings: &[Partitioning]) -> String {
    let mut out = String::new();
    for p in partitionings {
        let a = p.attribute();
        for iv in p.intervals() {
            writeln!(
                out,
                "{} {} {} {} {} {}",
                a.name(),
                iv.lo,
                iv.hi,
                a.raw(iv.lo),
                a.raw(iv.hi),
                a.occurrences(*iv)
            )
            .expect("string write");
        }
    }
    out
}

/// Reads the partitioning text format against the attributes observed in `db`.
pub fn parse_partitionings(text: &str, db: &TransactionDatabase) -> Result<Vec<Partitioning>> {
    let mut grouped: BTreeMap<ItemId, Vec<Interval>> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::parse(lineno, "expected `attr lo hi raw_lo raw_hi count`"));
        }
        let item = db
            .dictionary()
            .id(fields[0])
            .ok_or_else(|| Error::UnknownItemName(fields[0].to_string()))?;
        let num = |i: usize| -> Result<u64> {
            fields[i]
                .parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("invalid number `{}`", fields[i])))
        };
        let (lo, hi, raw_lo, raw_hi) = (num(1)? as usize, num(2)? as usize, num(3)?, num(4)?);
        if lo > hi {
            return Err(Error::parse(lineno, "lo exceeds hi"));
        }
        let attribute = QuantitativeAttribute::from_db(db, item)?;
        if hi >= attribute.n_ranks() || attribute.raw(lo) != raw_lo || attribute.raw(hi) != raw_hi {
            return Err(Error::parse(lineno, "interval does not match the observed values"));
        }
        grouped.entry(item).or_default().push(Interval::new(lo, hi));
    }
    grouped
        .into_iter()
        .map(|(item, mut intervals)| {
            intervals.sort();
            Partitioning::new(QuantitativeAttribute::from_db(db, item)?, intervals)
        })
        .collect()
}
