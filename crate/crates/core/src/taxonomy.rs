//! Generalized rules over an is-a hierarchy.
//!
//! The taxonomy is a DAG from generalizations to specializations whose
//! leaves include every database item. Transactions are extended with the
//! ancestors of their items before counting. Three refinements apply:
//! ancestor sets are precomputed once, a pass only adds ancestors that occur
//! in some candidate, and candidates holding both an item and one of its
//! ancestors are dropped before counting, since such an itemset has the
//! same support as the item alone.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use crate::apriori::{item_counts, level_wise, FrequentItemsets, MiningOptions};
use crate::dataset::{ItemDictionary, ItemId, Itemset, Transaction, TransactionDatabase};
use crate::error::{Error, Result};
use crate::fraction::{SupportFraction, Threshold};
use crate::rules::{generate_rules, Rule};

#[derive(Debug, Clone)]
pub struct TaxonomyGraph {
    /// Database items keep their ids; other nodes follow in lexicographic order.
    dictionary: ItemDictionary,
    n_database_items: usize,
    parents: Vec<Vec<ItemId>>,
    children: Vec<Vec<ItemId>>,
    ancestors: Vec<Vec<ItemId>>,
}

impl TaxonomyGraph {
    /// A taxonomy without edges over the items of `db`.
    pub fn empty(db: &TransactionDatabase) -> Self {
        Self::from_edges::<&str>(&[], db.dictionary()).expect("no edges")
    }

    /// Builds and validates the graph from `(parent, child)` name pairs.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)], items: &ItemDictionary) -> Result<Self> {
        let mut extra: BTreeSet<&str> = BTreeSet::new();
        for (p, c) in edges {
            for name in [p.as_ref(), c.as_ref()] {
                if items.id(name).is_none() {
                    extra.insert(name);
                }
            }
        }
        let mut names: Vec<String> = items.names().to_vec();
        names.extend(extra.into_iter().map(str::to_string));
        let dictionary = ItemDictionary::from_ordered(names)?;
        let n = dictionary.len();

        let mut parents: Vec<Vec<ItemId>> = vec![Vec::new(); n];
        let mut children: Vec<Vec<ItemId>> = vec![Vec::new(); n];
        for (p, c) in edges {
            let (p, c) = (p.as_ref(), c.as_ref());
            if p == c {
                return Err(Error::TaxonomyCycle(p.to_string()));
            }
            let pid = dictionary.id(p).expect("registered");
            let cid = dictionary.id(c).expect("registered");
            if pid.index() < items.len() {
                return Err(Error::ItemNotLeaf(p.to_string()));
            }
            if !children[pid.index()].contains(&cid) {
                children[pid.index()].push(cid);
                parents[cid.index()].push(pid);
            }
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm from the roots; parents are resolved before children.
        let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut queue: Vec<ItemId> = (0..n as u32)
            .map(ItemId)
            .filter(|id| pending[id.index()] == 0)
            .collect();
        let mut ancestors: Vec<Vec<ItemId>> = vec![Vec::new(); n];
        let mut done = 0;
        while let Some(node) = queue.pop() {
            done += 1;
            let mut closure: BTreeSet<ItemId> = BTreeSet::new();
            for &p in &parents[node.index()] {
                closure.insert(p);
                closure.extend(ancestors[p.index()].iter().copied());
            }
            ancestors[node.index()] = closure.into_iter().collect();
            for &c in &children[node.index()] {
                pending[c.index()] -= 1;
                if pending[c.index()] == 0 {
                    queue.push(c);
                }
            }
        }
        if done < n {
            let stuck = (0..n).find(|&i| pending[i] > 0).expect("cycle member");
            return Err(Error::TaxonomyCycle(dictionary.names()[stuck].clone()));
        }

        Ok(TaxonomyGraph {
            dictionary,
            n_database_items: items.len(),
            parents,
            children,
            ancestors,
        })
    }

    pub fn dictionary(&self) -> &ItemDictionary {
        &self.dictionary
    }

    pub fn n_database_items(&self) -> usize {
        self.n_database_items
    }

    pub fn n_nodes(&self) -> usize {
        self.dictionary.len()
    }

    pub fn is_database_item(&self, id: ItemId) -> bool {
        id.index() < self.n_database_items
    }

    /// All generalizations of `id`, sorted.
    pub fn ancestors(&self, id: ItemId) -> &[ItemId] {
        &self.ancestors[id.index()]
    }

    pub fn parents(&self, id: ItemId) -> &[ItemId] {
        &self.parents[id.index()]
    }

    pub fn children(&self, id: ItemId) -> &[ItemId] {
        &self.children[id.index()]
    }

    pub fn n_edges(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// `(parent, child)` name pairs in id order.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let name = |id: ItemId| self.dictionary.name(id).expect("known");
        self.dictionary
            .ids()
            .flat_map(|p| self.children(p).iter().map(move |&c| (name(p), name(c))))
            .collect()
    }

    /// Whether `itemset` holds some item together with one of its ancestors.
    pub fn has_item_and_ancestor(&self, itemset: &Itemset) -> bool {
        itemset
            .iter()
            .any(|x| self.ancestors(x).iter().any(|a| itemset.contains_item(*a)))
    }

    /// Number of transactions containing `id` or any of its descendants.
    pub fn generalized_support(&self, db: &TransactionDatabase, id: ItemId) -> SupportFraction {
        let count = db
            .transactions()
            .iter()
            .filter(|t| t.items.iter().any(|x| x == id || self.ancestors(x).contains(&id)))
            .count();
        SupportFraction::new(count as u64, db.n_transactions() as u64)
    }
}

/// Reads `parent child` edges, one per line, separated by tabs or spaces.
pub fn read_edges<R: BufRead>(reader: R) -> Result<Vec<(String, String)>> {
    let mut edges: Vec<(String, String)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(lineno + 1, "expected `parent child`"));
        }
        edges.push((fields[0].to_string(), fields[1].to_string()));
    }
    Ok(edges)
}

pub fn load_taxonomy<R: BufRead>(reader: R, db: &TransactionDatabase) -> Result<TaxonomyGraph> {
    TaxonomyGraph::from_edges(&read_edges(reader)?, db.dictionary())
}

pub fn parse_taxonomy(text: &str, db: &TransactionDatabase) -> Result<TaxonomyGraph> {
    load_taxonomy(text.as_bytes(), db)
}

pub fn format_taxonomy(taxonomy: &TaxonomyGraph) -> String {
    taxonomy
        .edges()
        .into_iter()
        .map(|(p, c)| format!("{p}\t{c}\n"))
        .collect()
}

/// Membership mask over item ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemFilter(Vec<bool>);

impl ItemFilter {
    pub fn from_items<I: IntoIterator<Item = ItemId>>(n_items: usize, items: I) -> Self {
        let mut mask = vec![false; n_items];
        for id in items {
            mask[id.index()] = true;
        }
        ItemFilter(mask)
    }

    pub fn contains(&self, id: ItemId) -> bool {
        self.0.get(id.index()).copied().unwrap_or(false)
    }
}

/// `t ∪ ancestors(t)`; with a filter, only ancestors passing it are added.
pub fn extend_transaction(t: &Transaction, taxonomy: &TaxonomyGraph, filter: Option<&ItemFilter>) -> Transaction {
    let mut items = t.items.items().to_vec();
    for x in t.items.iter() {
        items.extend(
            taxonomy
                .ancestors(x)
                .iter()
                .copied()
                .filter(|a| filter.is_none_or(|f| f.contains(*a))),
        );
    }
    Transaction {
        tid: t.tid,
        items: Itemset::new(items),
        quantities: t.quantities.clone(),
    }
}

/// Every transaction extended with all ancestors, over the taxonomy's dictionary.
pub fn extend_database(db: &TransactionDatabase, taxonomy: &TaxonomyGraph) -> TransactionDatabase {
    let transactions = db
        .transactions()
        .iter()
        .map(|t| extend_transaction(t, taxonomy, None))
        .collect();
    TransactionDatabase::from_parts(taxonomy.dictionary().clone(), transactions).expect("taxonomy ids")
}

/// Output of generalized mining; item ids refer to `dictionary`.
#[derive(Debug, Clone)]
pub struct GeneralizedMining {
    pub dictionary: ItemDictionary,
    pub itemsets: FrequentItemsets,
    pub rules: Vec<Rule>,
}

pub fn mine_generalized(
    db: &TransactionDatabase,
    taxonomy: &TaxonomyGraph,
    min_support: Threshold,
    min_confidence: Threshold,
) -> Result<GeneralizedMining> {
    mine_generalized_with(db, taxonomy, min_support, min_confidence, &MiningOptions::default())
}

pub fn mine_generalized_with(
    db: &TransactionDatabase,
    taxonomy: &TaxonomyGraph,
    min_support: Threshold,
    min_confidence: Threshold,
    options: &MiningOptions,
) -> Result<GeneralizedMining> {
    mine_generalized_filtered(db, taxonomy, min_support, min_confidence, options, |_| true)
}

/// Generalized mining with an extra anti-monotone candidate filter, applied
/// alongside the item/ancestor prune.
pub fn mine_generalized_filtered<K>(
    db: &TransactionDatabase,
    taxonomy: &TaxonomyGraph,
    min_support: Threshold,
    min_confidence: Threshold,
    options: &MiningOptions,
    keep: K,
) -> Result<GeneralizedMining>
where
    K: Fn(&Itemset) -> bool,
{
    if taxonomy.dictionary().names()[..taxonomy.n_database_items()] != *db.dictionary().names() {
        return Err(Error::TaxonomyMismatch);
    }
    let n_nodes = taxonomy.n_nodes();
    let total = db.n_transactions() as u64;

    let full: Vec<Itemset> = db
        .transactions()
        .iter()
        .map(|t| extend_transaction(t, taxonomy, None).items)
        .collect();
    let level1: Vec<(Itemset, u64)> = item_counts(n_nodes, &full)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| SupportFraction::new(*c, total).meets(min_support))
        .map(|(i, c)| (Itemset::singleton(ItemId(i as u32)), c))
        .collect();

    let itemsets = level_wise(
        total,
        min_support,
        level1,
        |candidate| !taxonomy.has_item_and_ancestor(candidate) && keep(candidate),
        |candidates| {
            let wanted = ItemFilter::from_items(n_nodes, candidates.candidates.iter().flat_map(|c| c.iter()));
            let extended: Vec<Itemset> = db
                .transactions()
                .iter()
                .map(|t| extend_transaction(t, taxonomy, Some(&wanted)).items)
                .collect();
            options.count(candidates, &extended)
        },
    );
    let rules = generate_rules(&itemsets, min_confidence);
    Ok(GeneralizedMining {
        dictionary: taxonomy.dictionary().clone(),
        itemsets,
        rules,
    })
}

/// Category name for each node id; handy for reports.
pub fn category_names(taxonomy: &TaxonomyGraph) -> HashMap<ItemId, &str> {
    taxonomy
        .dictionary()
        .ids()
        .filter(|id| !taxonomy.is_database_item(*id))
        .map(|id| (id, taxonomy.dictionary().name(id).expect("known")))
        .collect()
}
