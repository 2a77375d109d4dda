use std::collections::HashSet;

use crate::dataset::Itemset;

/// Candidate k-itemsets awaiting a counting pass.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateSet {
    pub k: usize,
    pub candidates: Vec<Itemset>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Joins every pair of (k-1)-itemsets that agree on their first k-2 items.
///
/// The input must be duplicate-free and of uniform size. Each joined
/// candidate is produced exactly once: from the two parents obtained by
/// dropping its last and its second-to-last item.
pub fn join_phase(previous: &[Itemset]) -> Vec<Itemset> {
    let mut sorted: Vec<&Itemset> = previous.iter().collect();
    sorted.sort_unstable();

    let mut joined = Vec::new();
    for (i, left) in sorted.iter().enumerate() {
        let prefix_len = left.len() - 1;
        let prefix = &left.items()[..prefix_len];
        for right in &sorted[i + 1..] {
            if &right.items()[..prefix_len] != prefix {
                break;
            }
            let mut items = left.items().to_vec();
            items.push(right.items()[prefix_len]);
            joined.push(Itemset::from_sorted_unchecked(items));
        }
    }
    joined
}

/// Splits joined candidates into those whose every (k-1)-subset is in
/// `previous` and those that were pruned.
pub fn prune_phase(joined: Vec<Itemset>, previous: &[Itemset]) -> (Vec<Itemset>, Vec<Itemset>) {
    let known: HashSet<&Itemset> = previous.iter().collect();
    joined
        .into_iter()
        .partition(|candidate| (0..candidate.len()).all(|p| known.contains(&candidate.without(p))))
}

/// Candidate generation: join followed by subset pruning.
pub fn apriori_gen(previous: &[Itemset]) -> CandidateSet {
    apriori_gen_filtered(previous, |_| true)
}

/// Like [`apriori_gen`], additionally dropping candidates rejected by `keep`.
pub fn apriori_gen_filtered<F>(previous: &[Itemset], keep: F) -> CandidateSet
where
    F: Fn(&Itemset) -> bool,
{
    let k = previous.first().map_or(0, |s| s.len() + 1);
    let (mut kept, _) = prune_phase(join_phase(previous), previous);
    kept.retain(|c| keep(c));
    kept.sort_unstable();
    CandidateSet { k, candidates: kept }
}
