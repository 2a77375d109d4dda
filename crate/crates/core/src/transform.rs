//! Conversions between quantitative attributes and taxonomies.
//!
//! Quantitative to taxonomy: every interval becomes a category generalizing
//! its sub-intervals, down to single values. Taxonomy to quantitative: the
//! leaves of a tree are numbered left to right, so each category is a span
//! of consecutive leaf numbers. The second direction needs a tree; a node
//! with two parents has no single position in the numbering.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dataset::{ItemDictionary, ItemId, Itemset, Transaction, TransactionDatabase};
use crate::error::{Error, Result};
use crate::fraction::SupportFraction;
use crate::quantitative::{booleanize, AttributeIntervals, Interval, Partitioning, QuantitativeAttribute};
use crate::taxonomy::TaxonomyGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalNode {
    pub interval: Interval,
    pub children: Vec<usize>,
}

/// A tree of rank intervals for one attribute; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTaxonomy {
    attribute: QuantitativeAttribute,
    nodes: Vec<IntervalNode>,
}

impl IntervalTaxonomy {
    pub fn attribute(&self) -> &QuantitativeAttribute {
        &self.attribute
    }

    pub fn nodes(&self) -> &[IntervalNode] {
        &self.nodes
    }

    pub fn root(&self) -> &IntervalNode {
        &self.nodes[0]
    }

    pub fn node_name(&self, index: usize) -> String {
        self.attribute.interval_name(self.nodes[index].interval)
    }

    /// Leaf intervals, left to right.
    pub fn leaves(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        self.walk(0, &mut |node| {
            if node.children.is_empty() {
                out.push(node.interval);
            }
        });
        out
    }

    /// Levels including root and leaves.
    pub fn depth(&self) -> usize {
        fn depth_of(t: &IntervalTaxonomy, i: usize) -> usize {
            1 + t.nodes[i].children.iter().map(|&c| depth_of(t, c)).max().unwrap_or(0)
        }
        depth_of(self, 0)
    }

    fn walk<F: FnMut(&IntervalNode)>(&self, index: usize, f: &mut F) {
        let node = &self.nodes[index];
        f(node);
        for &c in &node.children {
            self.walk(c, f);
        }
    }

    /// `(parent, child)` names, preorder.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for &c in &self.nodes[i].children {
                out.push((self.node_name(i), self.node_name(c)));
            }
            stack.extend(self.nodes[i].children.iter().rev());
        }
        out
    }

    /// Edge list in the taxonomy file format.
    pub fn to_edge_text(&self) -> String {
        self.edges().into_iter().map(|(p, c)| format!("{p}\t{c}\n")).collect()
    }

    /// The tree as a taxonomy over `items`, which should hold the leaf names.
    pub fn to_graph(&self, items: &ItemDictionary) -> Result<TaxonomyGraph> {
        TaxonomyGraph::from_edges(&self.edges(), items)
    }

    fn push(&mut self, interval: Interval) -> usize {
        self.nodes.push(IntervalNode {
            interval,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    fn attach_singletons(&mut self, parent: usize) {
        let iv = self.nodes[parent].interval;
        if iv.width() > 1 {
            for rank in iv.lo..=iv.hi {
                let leaf = self.push(Interval::singleton(rank));
                self.nodes[parent].children.push(leaf);
            }
        }
    }
}

/// Three levels: the full range, the base partitions, and single values.
/// Levels that coincide (one partition, or singleton partitions) collapse.
pub fn quantitative_to_taxonomy(partitioning: &Partitioning) -> IntervalTaxonomy {
    let attribute = partitioning.attribute().clone();
    let full = attribute.full_range().expect("attribute has observed values");
    let mut tree = IntervalTaxonomy {
        attribute,
        nodes: Vec::new(),
    };
    let root = tree.push(full);
    let parts = partitioning.intervals();
    if parts.len() <= 1 {
        tree.attach_singletons(root);
        return tree;
    }
    for part in parts {
        let node = tree.push(*part);
        tree.nodes[root].children.push(node);
        tree.attach_singletons(node);
    }
    tree
}

/// Binary tree by recursive halving of the rank range.
pub fn quantitative_to_taxonomy_bisect(attribute: &QuantitativeAttribute) -> IntervalTaxonomy {
    let full = attribute.full_range().expect("attribute has observed values");
    let mut tree = IntervalTaxonomy {
        attribute: attribute.clone(),
        nodes: Vec::new(),
    };
    let root = tree.push(full);
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        let iv = tree.nodes[i].interval;
        if iv.width() > 1 {
            let mid = iv.lo + (iv.width() - 1) / 2;
            let left = tree.push(Interval::new(iv.lo, mid));
            let right = tree.push(Interval::new(mid + 1, iv.hi));
            tree.nodes[i].children = vec![left, right];
            stack.extend([left, right]);
        }
    }
    tree
}

/// Replaces every quantified occurrence by its single-value item, the
/// leaves of [`quantitative_to_taxonomy`].
pub fn leaf_database(db: &TransactionDatabase, attributes: &[QuantitativeAttribute]) -> Result<TransactionDatabase> {
    let singles: Vec<AttributeIntervals> = attributes
        .iter()
        .map(|a| AttributeIntervals {
            attribute: a.clone(),
            intervals: (0..a.n_ranks()).map(Interval::singleton).collect(),
        })
        .collect();
    booleanize(db, &singles)
}

/// Compares names with digit runs taken as numbers, so `x[2,2]` < `x[10,10]`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (trim_zeros(&a[..da]), trim_zeros(&b[..db]));
                let ord = na
                    .len()
                    .cmp(&nb.len())
                    .then_with(|| na.cmp(nb))
                    .then_with(|| da.cmp(&db));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits.iter().position(|&c| c != b'0').unwrap_or(digits.len());
    &digits[start..]
}

/// Leaves of one taxonomy tree numbered left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberedAttribute {
    pub root: String,
    /// Leaf names; index = number.
    pub leaves: Vec<String>,
    /// Every inner node (root included) with its leaf span, preorder.
    pub categories: Vec<(String, Interval)>,
}

impl NumberedAttribute {
    pub fn number(&self, leaf: &str) -> Option<usize> {
        self.leaves.iter().position(|l| l == leaf)
    }

    /// The inner node whose leaf span is exactly `interval`.
    pub fn category_for(&self, interval: Interval) -> Option<&str> {
        self.categories
            .iter()
            .find(|(_, span)| *span == interval)
            .map(|(name, _)| name.as_str())
    }

    /// Spans of the tree's nodes: one per leaf and one per inner node.
    pub fn tree_intervals(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = (0..self.leaves.len()).map(Interval::singleton).collect();
        out.extend(self.categories.iter().map(|(_, iv)| *iv));
        out.sort();
        out.dedup();
        out
    }

    /// Every consecutive span of leaf numbers.
    pub fn all_intervals(&self) -> Vec<Interval> {
        let v = self.leaves.len();
        (0..v)
            .flat_map(|lo| (lo..v).map(move |hi| Interval::new(lo, hi)))
            .collect()
    }

    pub fn interval_name(&self, interval: Interval) -> String {
        format!("{}[{},{}]", self.root, interval.lo, interval.hi)
    }

    /// `interval_name`, followed by ` (category)` when the span is exactly a node's.
    pub fn describe(&self, interval: Interval) -> String {
        let name = self.interval_name(interval);
        let category = match interval.width() {
            1 => self.leaves.get(interval.lo).map(String::as_str),
            _ => self.category_for(interval),
        };
        match category {
            Some(c) => format!("{name} ({c})"),
            None => name,
        }
    }

    /// Transactions holding some leaf numbered inside `interval`.
    pub fn interval_support(&self, db: &TransactionDatabase, interval: Interval) -> SupportFraction {
        let ids: Vec<ItemId> = self.leaves[interval.lo..=interval.hi]
            .iter()
            .filter_map(|l| db.dictionary().id(l))
            .collect();
        let count = db
            .transactions()
            .iter()
            .filter(|t| ids.iter().any(|id| t.items.contains_item(*id)))
            .count();
        SupportFraction::new(count as u64, db.n_transactions() as u64)
    }

    /// Leaf numbers held by each transaction of `db`.
    pub fn quantities(&self, db: &TransactionDatabase) -> Vec<Vec<usize>> {
        let numbered: HashMap<ItemId, usize> = self
            .leaves
            .iter()
            .enumerate()
            .filter_map(|(n, l)| db.dictionary().id(l).map(|id| (id, n)))
            .collect();
        db.transactions()
            .iter()
            .map(|t| t.items.iter().filter_map(|id| numbered.get(&id).copied()).collect())
            .collect()
    }
}

/// Numbers the leaves of every tree in `taxonomy`. Children are visited in
/// natural name order. Fails on a node with more than one parent.
pub fn taxonomy_to_quantitative(taxonomy: &TaxonomyGraph) -> Result<Vec<NumberedAttribute>> {
    let d = taxonomy.dictionary();
    let name = |id: ItemId| d.name(id).expect("known");
    if let Some(id) = d.ids().find(|id| taxonomy.parents(*id).len() > 1) {
        return Err(Error::NonTreeTaxonomy(name(id).to_string()));
    }
    let mut roots: Vec<ItemId> = d
        .ids()
        .filter(|id| taxonomy.parents(*id).is_empty() && !taxonomy.children(*id).is_empty())
        .collect();
    roots.sort_by(|a, b| natural_cmp(name(*a), name(*b)));

    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let mut numbered = NumberedAttribute {
            root: name(root).to_string(),
            leaves: Vec::new(),
            categories: Vec::new(),
        };
        number_subtree(taxonomy, root, &mut numbered);
        out.push(numbered);
    }
    Ok(out)
}

fn number_subtree(taxonomy: &TaxonomyGraph, node: ItemId, out: &mut NumberedAttribute) {
    let d = taxonomy.dictionary();
    let name = |id: ItemId| d.name(id).expect("known");
    let children = taxonomy.children(node);
    if children.is_empty() {
        out.leaves.push(name(node).to_string());
        return;
    }
    let slot = out.categories.len();
    let first = out.leaves.len();
    out.categories
        .push((name(node).to_string(), Interval::singleton(first)));
    let mut ordered = children.to_vec();
    ordered.sort_by(|a, b| natural_cmp(name(*a), name(*b)));
    for c in ordered {
        number_subtree(taxonomy, c, out);
    }
    out.categories[slot].1 = Interval::new(first, out.leaves.len() - 1);
}

/// Text form: `leaf <root> <leaf> <number>` and `span <root> <category> <lo> <hi>` lines.
pub fn format_numbering(attributes: &[NumberedAttribute]) -> String {
    let mut out = String::new();
    for a in attributes {
        for (n, leaf) in a.leaves.iter().enumerate() {
            writeln!(out, "leaf\t{}\t{}\t{}", a.root, leaf, n).expect("string write");
        }
        for (category, span) in &a.categories {
            writeln!(out, "span\t{}\t{}\t{}\t{}", a.root, category, span.lo, span.hi).expect("string write");
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberedIntervals {
    /// Spans of tree nodes only: O(v) intervals.
    Tree,
    /// Every consecutive span: O(v²) intervals.
    AllConsecutive,
}

/// Replaces numbered leaves by interval items `root[lo,hi]` for each admitted
/// interval containing one of the transaction's leaf numbers.
pub fn booleanize_numbered(
    db: &TransactionDatabase,
    attributes: &[NumberedAttribute],
    mode: NumberedIntervals,
) -> Result<TransactionDatabase> {
    let source = db.dictionary();
    let mut leaf_of: HashMap<ItemId, (usize, usize)> = HashMap::new();
    let mut admitted: Vec<Vec<Interval>> = Vec::with_capacity(attributes.len());
    for (ai, a) in attributes.iter().enumerate() {
        for (n, leaf) in a.leaves.iter().enumerate() {
            if let Some(id) = source.id(leaf) {
                leaf_of.insert(id, (ai, n));
            }
        }
        admitted.push(match mode {
            NumberedIntervals::Tree => a.tree_intervals(),
            NumberedIntervals::AllConsecutive => a.all_intervals(),
        });
    }

    let mut names: Vec<String> = source
        .ids()
        .filter(|id| !leaf_of.contains_key(id))
        .map(|id| source.name(id).expect("known").to_string())
        .collect();
    for (a, intervals) in attributes.iter().zip(&admitted) {
        names.extend(intervals.iter().map(|iv| a.interval_name(*iv)));
    }
    let dictionary = ItemDictionary::lexicographic(names);

    let transactions = db
        .transactions()
        .iter()
        .map(|t| {
            let mut items = Vec::new();
            for id in t.items.iter() {
                match leaf_of.get(&id) {
                    None => items.push(dictionary.id(source.name(id).expect("known")).expect("kept")),
                    Some(&(ai, n)) => {
                        let a = &attributes[ai];
                        items.extend(
                            admitted[ai]
                                .iter()
                                .filter(|iv| iv.contains(n))
                                .map(|iv| dictionary.id(&a.interval_name(*iv)).expect("registered")),
                        );
                    }
                }
            }
            Transaction::new(t.tid, Itemset::new(items))
        })
        .collect();
    TransactionDatabase::from_parts(dictionary, transactions)
}
