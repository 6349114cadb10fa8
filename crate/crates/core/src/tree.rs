//! Finite trees: ordered sums, branch decompositions, the `~0`/`~1`
//! equivalences relative to a chain, and tameness parameters.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::structure::{bit, points, FiniteStructure, Mask};
use crate::theory::TheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node name '{0}' occurs twice")]
    Collision(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// A finite forest with named nodes; `x < y` when `x` is a proper ancestor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTree {
    parent: Vec<Option<usize>>,
    names: Vec<String>,
    below: Vec<Mask>,
}

impl FiniteTree {
    /// Nodes are named by their index.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let names = (0..parent.len()).map(|i| i.to_string()).collect();
        Self::with_names(parent, names)
    }

    pub fn with_names(parent: Vec<Option<usize>>, names: Vec<String>) -> Result<Self, TreeError> {
        if names.len() != parent.len() {
            return Err(TreeError::Domain("one name per node is required".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(TreeError::Collision(n.clone()));
            }
        }
        let s = FiniteStructure::tree(parent.clone())?;
        let below = (0..parent.len()).map(|y| s.below(y)).collect();
        Ok(FiniteTree { parent, names, below })
    }

    /// The chain `0 < 1 < ... < k-1` as a tree.
    pub fn chain(k: usize) -> Result<Self, TreeError> {
        Self::new((0..k).map(|i| i.checked_sub(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn universe(&self) -> Mask {
        crate::structure::low_bits(self.len())
    }

    /// Proper ancestors of `y`.
    pub fn below(&self, y: usize) -> Mask {
        self.below[y]
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y] & bit(x) != 0
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.less(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.parent[x].is_none()).collect()
    }

    /// The least node, if there is exactly one minimal node.
    pub fn root(&self) -> Option<usize> {
        match self.roots().as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    pub fn children(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(x)).collect()
    }

    /// `x` and everything above it.
    pub fn cone(&self, x: usize) -> Mask {
        (0..self.len()).filter(|&y| self.le(x, y)).fold(0, |m, y| m | bit(y))
    }

    pub fn is_chain(&self, set: Mask) -> bool {
        let pts: Vec<usize> = points(set).collect();
        pts.iter().all(|&x| pts.iter().all(|&y| self.comparable(x, y)))
    }

    /// Maximal chains, i.e. root-to-leaf paths, each listed bottom up.
    pub fn branches(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for leaf in (0..self.len()).filter(|&x| self.children(x).is_empty()) {
            let mut path: Vec<usize> = points(self.below[leaf]).collect();
            path.sort_by_key(|&x| self.below[x].count_ones());
            path.push(leaf);
            out.push(path);
        }
        out.sort();
        out
    }

    /// The substructure on `nodes`; links skip over removed ancestors.
    pub fn induced(&self, nodes: Mask) -> FiniteTree {
        let keep: Vec<usize> = points(nodes).collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let parent = keep
            .iter()
            .map(|&x| {
                let mut p = self.parent[x];
                while let Some(q) = p {
                    if let Some(&i) = index.get(&q) {
                        return Some(i);
                    }
                    p = self.parent[q];
                }
                None
            })
            .collect();
        let names = keep.iter().map(|&x| self.names[x].clone()).collect();
        FiniteTree::with_names(parent, names).expect("induced forest is valid")
    }

    pub fn structure(&self) -> FiniteStructure {
        FiniteStructure::tree(self.parent.clone()).expect("validated on construction")
    }

    fn encode(&self, x: usize) -> String {
        let mut parts: Vec<String> = self.children(x).into_iter().map(|c| self.encode(c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }

    /// Isomorphism invariant: equal exactly for isomorphic forests.
    pub fn canonical_form(&self) -> String {
        let mut parts: Vec<String> = self.roots().into_iter().map(|r| self.encode(r)).collect();
        parts.sort();
        format!("[{}]", parts.concat())
    }

    pub fn is_isomorphic(&self, other: &FiniteTree) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    /// The same shape renumbered in preorder, children sorted by encoding.
    pub fn canonical_relabel(&self) -> FiniteTree {
        let mut roots: Vec<(String, usize)> = self.roots().into_iter().map(|r| (self.encode(r), r)).collect();
        roots.sort();
        let mut parent = Vec::with_capacity(self.len());
        let mut stack: Vec<(usize, Option<usize>)> = roots.into_iter().rev().map(|(_, r)| (r, None)).collect();
        while let Some((x, p)) = stack.pop() {
            let id = parent.len();
            parent.push(p);
            let mut kids: Vec<(String, usize)> = self.children(x).into_iter().map(|c| (self.encode(c), c)).collect();
            kids.sort();
            stack.extend(kids.into_iter().rev().map(|(_, c)| (c, Some(id))));
        }
        FiniteTree::new(parent).expect("relabelled tree is valid")
    }

    /// Parses `id parent|-` lines followed by `NAME: ids` set lines.
    /// Returns the tree and its named sets in file order.
    pub fn parse(text: &str) -> Result<(FiniteTree, Vec<(String, Mask)>), TreeError> {
        let mut nodes: Vec<(String, Option<String>, usize)> = Vec::new();
        let mut sets: Vec<(String, Vec<String>, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| TreeError::Parse { line: i + 1, msg: msg.into() };
            if let Some((name, ids)) = line.split_once(':') {
                sets.push((name.trim().to_string(), ids.split_whitespace().map(String::from).collect(), i + 1));
                continue;
            }
            if !sets.is_empty() {
                return Err(err("node lines must precede set lines"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [id, p] = parts.as_slice() else {
                return Err(err("expected 'id parent' or 'id -'"));
            };
            nodes.push((id.to_string(), (*p != "-").then(|| p.to_string()), i + 1));
        }
        let names: Vec<String> = nodes.iter().map(|(n, _, _)| n.clone()).collect();
        let lookup = |n: &str, line: usize| {
            names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| TreeError::Parse { line, msg: format!("unknown node '{n}'") })
        };
        let mut parent = Vec::with_capacity(nodes.len());
        for (_, p, line) in &nodes {
            parent.push(match p {
                Some(p) => Some(lookup(p, *line)?),
                None => None,
            });
        }
        let tree = FiniteTree::with_names(parent, names.clone())?;
        let mut named = Vec::new();
        for (name, ids, line) in sets {
            let mut m = 0;
            for id in ids {
                m |= bit(lookup(&id, line)?);
            }
            named.push((name, m));
        }
        Ok((tree, named))
    }
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.len() {
            let p = self.parent[x].map_or("-", |p| self.names[p].as_str());
            writeln!(f, "{} {}", self.names[x], p)?;
        }
        Ok(())
    }
}

/// All trees with `n` nodes up to isomorphism, in canonical numbering.
pub fn trees_with(n: usize) -> Vec<FiniteTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeMap<String, FiniteTree> = BTreeMap::new();
    let one = FiniteTree::new(vec![None]).expect("single node");
    level.insert(one.canonical_form(), one);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            for x in 0..t.len() {
                let mut parent = t.parent.clone();
                parent.push(Some(x));
                let grown = FiniteTree::new(parent).expect("leaf added").canonical_relabel();
                next.entry(grown.canonical_form()).or_insert(grown);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// All trees with `1..=max_nodes` nodes up to isomorphism.
pub fn tree_corpus(max_nodes: usize) -> Vec<FiniteTree> {
    (1..=max_nodes).flat_map(trees_with).collect()
}

/// Ordered sum along a finite index chain: the root of an earlier part lies
/// below every node of later parts; a rootless part is merely disjoint.
pub fn tree_sum(parts: &[FiniteTree]) -> Result<FiniteTree, TreeError> {
    let mut parent = Vec::new();
    let mut names = Vec::new();
    let mut last_root: Option<usize> = None;
    for part in parts {
        let offset = parent.len();
        for x in 0..part.len() {
            parent.push(match part.parent[x] {
                Some(p) => Some(p + offset),
                None => last_root,
            });
            names.push(part.names[x].clone());
        }
        if let Some(r) = part.root() {
            last_root = Some(r + offset);
        }
    }
    FiniteTree::with_names(parent, names)
}

/// A rooted tree split along a branch `B`: every node cuts `B` at the
/// highest branch node below or equal to it, and `T_η` collects the nodes
/// cutting at `η`. On finite trees the completion points `B^c` never occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: FiniteTree,
    /// The branch, bottom up; it doubles as the index chain.
    pub branch: Vec<usize>,
    /// Nodes of the index chain that are not on the branch.
    pub completion: Vec<usize>,
    /// `parts[i]` is `T_η` for `η = branch[i]`.
    pub parts: Vec<Mask>,
}

impl TreeDecomposition {
    /// `⊕` of the parts in branch order.
    pub fn reconstruct(&self) -> FiniteTree {
        let trees: Vec<FiniteTree> = self.parts.iter().map(|&m| self.tree.induced(m)).collect();
        tree_sum(&trees).expect("parts carry distinct names")
    }

    /// Whether the reconstruction is the original tree.
    pub fn verify(&self) -> bool {
        let r = self.reconstruct();
        if r.len() != self.tree.len() {
            return false;
        }
        (0..r.len()).all(|i| {
            let x = self.tree.node(r.name(i)).expect("same names");
            let p = r.parent(i).map(|p| self.tree.node(r.name(p)).expect("same names"));
            self.tree.parent(x) == p
        })
    }
}

/// Checks that `branch` is a maximal chain of a rooted tree and returns it
/// bottom up.
fn ordered_branch(t: &FiniteTree, branch: Mask) -> Result<Vec<usize>, TreeError> {
    if t.root().is_none() {
        return Err(TreeError::Domain("cut decomposition needs a rooted tree".into()));
    }
    if branch & !t.universe() != 0 || branch == 0 || !t.is_chain(branch) {
        return Err(TreeError::Domain("B is not a chain of the tree".into()));
    }
    if (0..t.len()).any(|x| branch & bit(x) == 0 && points(branch).all(|y| t.comparable(x, y))) {
        return Err(TreeError::Domain("B is not maximal".into()));
    }
    let mut v: Vec<usize> = points(branch).collect();
    v.sort_by_key(|&x| t.below(x).count_ones());
    Ok(v)
}

pub fn cut_decomposition(t: &FiniteTree, branch: Mask) -> Result<TreeDecomposition, TreeError> {
    let path = ordered_branch(t, branch)?;
    let mut parts = vec![0; path.len()];
    for x in 0..t.len() {
        let i = path
            .iter()
            .rposition(|&eta| t.le(eta, x))
            .expect("the root lies on every branch");
        parts[i] |= bit(x);
    }
    Ok(TreeDecomposition {
        tree: t.clone(),
        branch: path,
        completion: Vec::new(),
        parts,
    })
}

/// Which relation of [`sim_classes`] to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimLevel {
    /// Same set of `A`-points below.
    Zero,
    /// `Zero`, refined by connectivity under comparability.
    One,
}

/// Classes of `T \ A` sorted by least member.
pub fn sim_classes(t: &FiniteTree, a: Mask, level: SimLevel) -> Result<Vec<Mask>, TreeError> {
    if !t.is_chain(a) {
        return Err(TreeError::Domain("A is not a chain".into()));
    }
    let mut by_locus: BTreeMap<Mask, Mask> = BTreeMap::new();
    for x in points(t.universe() & !a) {
        *by_locus.entry(t.below(x) & a).or_default() |= bit(x);
    }
    let mut out: Vec<Mask> = match level {
        SimLevel::Zero => by_locus.into_values().collect(),
        SimLevel::One => by_locus
            .into_values()
            .flat_map(|class| comparability_components(t, class))
            .collect(),
    };
    out.sort_by_key(|m| m.trailing_zeros());
    Ok(out)
}

pub(crate) fn comparability_components(t: &FiniteTree, set: Mask) -> Vec<Mask> {
    let mut left = set;
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = bit(left.trailing_zeros() as usize);
        loop {
            let grown = points(left)
                .filter(|&y| points(comp).any(|x| t.comparable(x, y)))
                .fold(comp, |m, y| m | bit(y));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

/// `n*`: most `~1` classes inside one `~0` class; `k*`: largest degree of a
/// branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TamenessProfile {
    pub n_star: usize,
    pub k_star: usize,
}

impl fmt::Display for TamenessProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n* = {}, k* = {}", self.n_star, self.k_star)
    }
}

/// Ranges over sub-branches, i.e. branches of the cone above each node,
/// with the classes taken inside that cone.
pub fn tameness_profile(t: &FiniteTree) -> TamenessProfile {
    let mut n_star = 0;
    let mut k_star = 0;
    for x in 0..t.len() {
        let cone = t.cone(x);
        let sub = t.induced(cone);
        for b in sub.branches() {
            k_star = k_star.max(usize::from(b.len() > 1));
            let a = b.iter().fold(0, |m, &y| m | bit(y));
            let zero = sim_classes(&sub, a, SimLevel::Zero).expect("branch is a chain");
            for class in zero {
                n_star = n_star.max(comparability_components(&sub, class).len());
            }
        }
    }
    TamenessProfile { n_star, k_star }
}

/// Distinct canonical forms among `trees`.
pub fn shape_count(trees: &[FiniteTree]) -> usize {
    trees.iter().map(FiniteTree::canonical_form).collect::<BTreeSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry() -> FiniteTree {
        FiniteTree::with_names(vec![None, Some(0), Some(0)], vec!["r".into(), "x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn corpus_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| trees_with(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48]);
        assert_eq!(shape_count(&tree_corpus(5)), 17);
    }

    #[test]
    fn sums() {
        let a = FiniteTree::with_names(vec![None, Some(0)], vec!["a0".into(), "a1".into()]).unwrap();
        let b = FiniteTree::with_names(vec![None, Some(0), Some(0)], vec!["b0".into(), "b1".into(), "b2".into()]).unwrap();
        let s = tree_sum(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.root(), Some(0));
        assert!((2..5).all(|y| s.less(0, y)));
        assert!((2..5).all(|y| !s.comparable(1, y)));
        let singles: Vec<FiniteTree> = (0..4)
            .map(|i| FiniteTree::with_names(vec![None], vec![format!("s{i}")]).unwrap())
            .collect();
        assert!(tree_sum(&singles).unwrap().is_isomorphic(&FiniteTree::chain(4).unwrap()));
        let c = FiniteTree::with_names(vec![None], vec!["c".into()]).unwrap();
        let flat = tree_sum(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let right = tree_sum(&[a.clone(), tree_sum(&[b.clone(), c.clone()]).unwrap()]).unwrap();
        assert!(flat.is_isomorphic(&right));
        // only the root of the first summand stays below later parts
        let left = tree_sum(&[tree_sum(&[a.clone(), b]).unwrap(), c]).unwrap();
        assert!(!left.is_isomorphic(&right));
        assert!(matches!(tree_sum(&[a.clone(), a]), Err(TreeError::Collision(_))));
    }

    #[test]
    fn decompositions() {
        let t = cherry();
        let d = cut_decomposition(&t, 0b011).unwrap();
        assert_eq!(d.parts, [0b101, 0b010]);
        assert!(d.verify());
        assert!(cut_decomposition(&t, 0b001).is_err());
        let chain = FiniteTree::chain(3).unwrap();
        assert_eq!(cut_decomposition(&chain, 0b111).unwrap().parts, [1, 2, 4]);
        for t in tree_corpus(6) {
            for b in t.branches() {
                let m = b.iter().fold(0, |m, &y| m | bit(y));
                assert!(cut_decomposition(&t, m).unwrap().verify());
            }
        }
    }

    #[test]
    fn classes() {
        let t = cherry();
        assert_eq!(sim_classes(&t, 0b011, SimLevel::Zero).unwrap(), [0b100]);
        assert_eq!(sim_classes(&t, 0b011, SimLevel::One).unwrap(), [0b100]);
        let star = FiniteTree::new(vec![None, Some(0), Some(0), Some(0)]).unwrap();
        assert_eq!(sim_classes(&star, 0b0011, SimLevel::Zero).unwrap(), [0b1100]);
        assert_eq!(sim_classes(&star, 0b0011, SimLevel::One).unwrap(), [0b0100, 0b1000]);
        assert!(sim_classes(&FiniteTree::chain(3).unwrap(), 0b111, SimLevel::One).unwrap().is_empty());
        assert!(sim_classes(&star, 0b0110, SimLevel::Zero).is_err());
    }

    #[test]
    fn tameness() {
        assert_eq!(tameness_profile(&FiniteTree::chain(4).unwrap()).n_star, 0);
        assert_eq!(tameness_profile(&cherry()).n_star, 1);
        let star = FiniteTree::new(vec![None, Some(0), Some(0), Some(0), Some(0)]).unwrap();
        assert_eq!(tameness_profile(&star), TamenessProfile { n_star: 3, k_star: 1 });
    }

    #[test]
    fn file_format() {
        let text = "r -\nx r\ny r  # leaf\nQ: x y\n";
        let (t, sets) = FiniteTree::parse(text).unwrap();
        assert_eq!(t, cherry());
        assert_eq!(sets, [("Q".to_string(), 0b110)]);
        assert_eq!(FiniteTree::parse(&t.to_string()).unwrap().0, t);
        let Err(TreeError::Parse { line, .. }) = FiniteTree::parse("r -\nx q\n") else {
            panic!("expected a parse error");
        };
        assert_eq!(line, 2);
    }
}
