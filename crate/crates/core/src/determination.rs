//! Empirical test that the theory of a tree is a function of the theory of
//! a branch labelled by the theories of its pieces.
//!
//! Each item is a tree, a branch `B` and predicates `Q`. The branch cuts the
//! tree into parts `T_η`; `P_t` collects the `η` whose part has theory `t`.
//! For a candidate depth `k` the key is `Th^k(B; B, B^c, P_t...)` and the
//! value `Th^n(T; Q)`. The map is functional when no key has two values.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::eval::eval_theory;
use crate::structure::{bit, subsets, FiniteStructure, Mask};
use crate::theory::{Budget, Theory, TheoryError};
use crate::tree::{cut_decomposition, FiniteTree, TreeError};

/// Which parts of the key are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KeyAblation {
    Full,
    DropCompletion,
    DropLabels,
}

impl fmt::Display for KeyAblation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeyAblation::Full => "full key",
            KeyAblation::DropCompletion => "without B^c",
            KeyAblation::DropLabels => "without P",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub tree: FiniteTree,
    /// Bottom-up branch.
    pub branch: Vec<usize>,
    pub predicates: Vec<Mask>,
}

/// Every tree with every branch and every assignment of `arity` predicates.
pub fn full_corpus(trees: &[FiniteTree], arity: usize) -> Vec<CorpusItem> {
    let mut out = Vec::new();
    for t in trees {
        for b in t.branches() {
            let mut tuples: Vec<Vec<Mask>> = vec![Vec::new()];
            for _ in 0..arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|v| {
                        subsets(t.universe()).map(move |m| {
                            let mut w = v.clone();
                            w.push(m);
                            w
                        })
                    })
                    .collect();
            }
            for q in tuples {
                out.push(CorpusItem { tree: t.clone(), branch: b.clone(), predicates: q });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthResult {
    pub k: usize,
    pub keys: usize,
    /// Keys mapped to more than one value.
    pub conflicts: usize,
}

impl DepthResult {
    pub fn functional(&self) -> bool {
        self.conflicts == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminationReport {
    pub n: usize,
    pub ablation: KeyAblation,
    pub items: usize,
    pub values: usize,
    pub depths: Vec<DepthResult>,
}

impl DeterminationReport {
    /// Least `k` tried whose map is functional.
    pub fn least_k(&self) -> Option<usize> {
        self.depths.iter().find(|d| d.functional()).map(|d| d.k)
    }
}

impl fmt::Display for DeterminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n = {}, {}: {} items, {} distinct values",
            self.n, self.ablation, self.items, self.values
        )?;
        for d in &self.depths {
            writeln!(
                f,
                "  k = {}: {} keys, {} conflicting, {}",
                d.k,
                d.keys,
                d.conflicts,
                if d.functional() { "functional" } else { "not functional" }
            )?;
        }
        match self.least_k() {
            Some(k) => write!(f, "least functional k = {k}"),
            None => write!(f, "least functional k: none <= {}", self.n + 3),
        }
    }
}

/// Labels of the branch positions and the value, for one item.
struct Prepared {
    len: usize,
    labels: BTreeMap<Theory, Mask>,
    value: Theory,
}

fn prepare(item: &CorpusItem, n: usize, budget: &Budget) -> Result<Prepared, TreeError> {
    let t = &item.tree;
    let b = item.branch.iter().fold(0, |m, &x| m | bit(x));
    let d = cut_decomposition(t, b)?;
    let mut labels: BTreeMap<Theory, Mask> = BTreeMap::new();
    for (i, &part) in d.parts.iter().enumerate() {
        let sub = t.induced(part);
        let qs: Vec<Mask> = item
            .predicates
            .iter()
            .map(|&q| crate::structure::compress(q & part, part))
            .collect();
        let th = eval_theory(&sub.structure(), &qs, n, budget)?;
        *labels.entry(th).or_default() |= bit(i);
    }
    let value = eval_theory(&t.structure(), &item.predicates, n, budget)?;
    Ok(Prepared { len: d.branch.len(), labels, value })
}

/// Runs the experiment for `k = n ..= n+3`, stopping at the first
/// functional depth.
pub fn determination_experiment(
    n: usize,
    corpus: &[CorpusItem],
    ablation: KeyAblation,
    budget: &Budget,
) -> Result<DeterminationReport, TreeError> {
    let prepared: Vec<Prepared> = corpus.iter().map(|it| prepare(it, n, budget)).collect::<Result<_, _>>()?;
    let values: BTreeSet<&Theory> = prepared.iter().map(|p| &p.value).collect();
    let mut depths = Vec::new();
    let mut cache: HashMap<(usize, Vec<Mask>, usize), Theory> = HashMap::new();
    for k in n..=n + 3 {
        let mut map: BTreeMap<(Vec<Theory>, Theory), BTreeSet<Theory>> = BTreeMap::new();
        for p in &prepared {
            let names: Vec<Theory> = match ablation {
                KeyAblation::DropLabels => Vec::new(),
                _ => p.labels.keys().cloned().collect(),
            };
            let mut sets: Vec<Mask> = vec![crate::structure::low_bits(p.len)];
            if ablation != KeyAblation::DropCompletion {
                sets.push(0);
            }
            if ablation != KeyAblation::DropLabels {
                sets.extend(p.labels.values().copied());
            }
            let key = branch_theory(&mut cache, p.len, sets, k, budget)?;
            map.entry((names, key)).or_default().insert(p.value.clone());
        }
        let result = DepthResult {
            k,
            keys: map.len(),
            conflicts: map.values().filter(|v| v.len() > 1).count(),
        };
        let done = result.functional();
        depths.push(result);
        if done {
            break;
        }
    }
    Ok(DeterminationReport { n, ablation, items: corpus.len(), values: values.len(), depths })
}

fn branch_theory(
    cache: &mut HashMap<(usize, Vec<Mask>, usize), Theory>,
    len: usize,
    sets: Vec<Mask>,
    k: usize,
    budget: &Budget,
) -> Result<Theory, TheoryError> {
    let key = (len, sets, k);
    if let Some(t) = cache.get(&key) {
        return Ok(t.clone());
    }
    let t = eval_theory(&FiniteStructure::chain(len)?, &key.1, k, budget)?;
    cache.insert(key, t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tree_corpus;

    #[test]
    fn chains_are_determined_at_once() {
        let chains: Vec<FiniteTree> = (1..=4).map(|k| FiniteTree::chain(k).unwrap()).collect();
        let corpus = full_corpus(&chains, 1);
        let r = determination_experiment(1, &corpus, KeyAblation::Full, &Budget::default()).unwrap();
        assert_eq!(r.least_k(), Some(1), "{r}");
    }

    #[test]
    fn small_trees_report_is_reproducible() {
        let corpus = full_corpus(&tree_corpus(4), 1);
        let a = determination_experiment(1, &corpus, KeyAblation::Full, &Budget::default()).unwrap();
        let b = determination_experiment(1, &corpus, KeyAblation::Full, &Budget::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.least_k().is_some(), "{a}");
        let dropped = determination_experiment(1, &corpus, KeyAblation::DropLabels, &Budget::default()).unwrap();
        assert_eq!(dropped.least_k(), None, "{dropped}");
    }
}
