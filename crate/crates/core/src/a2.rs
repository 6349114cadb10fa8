//! A definable well order of a finite tree.
//!
//! The tree is cut into sub-branches `A_η` indexed by a well-founded tree
//! `Γ`: a branch is taken, the rest splits into `~1` classes, and each class
//! is handled the same way. A colouring makes "same sub-branch" definable,
//! and points are ordered by sub-branch first, then lexicographically along
//! `Γ` with siblings ordered by where they leave their parent sub-branch and
//! then by colour.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::structure::{bit, points, Mask};
use crate::tree::{comparability_components, FiniteTree};

/// A node `η` of the index tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaNode {
    /// Position in `Γ` as a sequence of child indices.
    pub index: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// `T_η`.
    pub members: Mask,
    /// `A_η`, bottom up.
    pub branch: Vec<usize>,
    /// `s_η`, the least point of `A_η`.
    pub rep: usize,
    /// Points of the parent sub-branch below this class; equal loci mean
    /// `~0`-equivalent siblings.
    pub locus: Mask,
    pub colour: usize,
}

/// The decomposition together with the resulting order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2WellOrder {
    pub tree: FiniteTree,
    pub gamma: Vec<GammaNode>,
    /// Index into `gamma` of the sub-branch holding each point.
    pub block_of: Vec<usize>,
    /// `h`, constant on each sub-branch.
    pub colour: Vec<usize>,
    /// Points in increasing order.
    pub order: Vec<usize>,
}

/// Greedy branch of `members` from its least minimal point, always stepping
/// to the least child.
fn least_branch(t: &FiniteTree, members: Mask) -> Vec<usize> {
    let start = points(members)
        .find(|&x| t.below(x) & members == 0)
        .expect("nonempty class");
    let mut path = vec![start];
    while let Some(&c) = t.children(*path.last().expect("nonempty")).iter().find(|&&c| members & bit(c) != 0) {
        path.push(c);
    }
    path
}

pub fn a2_wellorder(t: &FiniteTree) -> A2WellOrder {
    let mut gamma: Vec<GammaNode> = Vec::new();
    let mut block_of = vec![0; t.len()];
    if t.is_empty() {
        return A2WellOrder { tree: t.clone(), gamma, block_of, colour: Vec::new(), order: Vec::new() };
    }
    let mut queue = vec![(t.universe(), None, Vec::new(), 0usize, 0 as Mask)];
    while let Some((members, parent, index, colour, locus)) = queue.pop() {
        let id = gamma.len();
        let branch = least_branch(t, members);
        let a = branch.iter().fold(0, |m, &x| m | bit(x));
        for &x in &branch {
            block_of[x] = id;
        }
        let mut by_locus: BTreeMap<(u32, Mask), Vec<Mask>> = BTreeMap::new();
        let mut loci: BTreeMap<Mask, Mask> = BTreeMap::new();
        for x in points(members & !a) {
            *loci.entry(t.below(x) & a).or_default() |= bit(x);
        }
        for (key, class) in loci {
            by_locus.insert((key.count_ones(), key), comparability_components(t, class));
        }
        let mut kids = Vec::new();
        for ((_, key), comps) in by_locus {
            let palette = (0..).filter(|&c| c != colour);
            for (comp, c) in comps.into_iter().zip(palette) {
                kids.push((comp, key, c));
            }
        }
        if let Some(p) = parent {
            let g: &mut GammaNode = &mut gamma[p];
            g.children.push(id);
        }
        gamma.push(GammaNode {
            index: index.clone(),
            parent,
            children: Vec::new(),
            members,
            rep: branch[0],
            branch,
            locus,
            colour,
        });
        for (i, (comp, key, c)) in kids.into_iter().enumerate().rev() {
            let mut idx = index.clone();
            idx.push(i);
            queue.push((comp, Some(id), idx, c, key));
        }
    }
    let colour = (0..t.len()).map(|x| gamma[block_of[x]].colour).collect();
    let mut w = A2WellOrder { tree: t.clone(), gamma, block_of, colour, order: Vec::new() };
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&x, &y| w.compare(x, y));
    w.order = order;
    w
}

impl A2WellOrder {
    fn ancestors(&self, g: usize) -> Vec<usize> {
        let mut out = vec![g];
        let mut cur = g;
        while let Some(p) = self.gamma[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Order of immediate successors of one sub-branch: by cut position,
    /// then by colour inside a `~0` class.
    fn sibling_key(&self, g: usize) -> (u32, usize) {
        (self.gamma[g].locus.count_ones(), self.gamma[g].colour)
    }

    /// The order, by clauses: same sub-branch, `Γ`-comparable sub-branches,
    /// then comparison of the successors below the meet.
    pub fn less(&self, x: usize, y: usize) -> bool {
        let (eta, nu) = (self.block_of[x], self.block_of[y]);
        if eta == nu {
            return self.tree.less(x, y);
        }
        let (pe, pn) = (self.ancestors(eta), self.ancestors(nu));
        let common = pe.iter().zip(&pn).take_while(|(a, b)| a == b).count();
        if common == pe.len() {
            return true;
        }
        if common == pn.len() {
            return false;
        }
        self.sibling_key(pe[common]) < self.sibling_key(pn[common])
    }

    fn compare(&self, x: usize, y: usize) -> Ordering {
        if x == y {
            Ordering::Equal
        } else if self.less(x, y) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn colours(&self) -> usize {
        self.colour.iter().max().map_or(0, |c| c + 1)
    }

    /// `D_i`: points of colour `i`.
    pub fn colour_sets(&self) -> Vec<Mask> {
        (0..self.colours())
            .map(|c| (0..self.tree.len()).filter(|&x| self.colour[x] == c).fold(0, |m, x| m | bit(x)))
            .collect()
    }

    /// `Q`: the representatives.
    pub fn representatives(&self) -> Mask {
        self.gamma.iter().fold(0, |m, g| m | bit(g.rep))
    }

    /// Checks the order is strict and total, that every sub-branch is convex
    /// and ordered as in the tree, and that the colours recover sub-branches.
    pub fn verify(&self) -> Result<(), String> {
        let n = self.tree.len();
        for x in 0..n {
            if self.less(x, x) {
                return Err(format!("{x} < {x}"));
            }
            for y in 0..n {
                if x != y && self.less(x, y) == self.less(y, x) {
                    return Err(format!("{x} and {y} are not compared exactly once"));
                }
                for z in 0..n {
                    if self.less(x, y) && self.less(y, z) && !self.less(x, z) {
                        return Err(format!("{x} < {y} < {z} but not {x} < {z}"));
                    }
                }
            }
        }
        let mut pos = vec![0; n];
        for (i, &x) in self.order.iter().enumerate() {
            pos[x] = i;
        }
        for g in &self.gamma {
            let ps: Vec<usize> = g.branch.iter().map(|&x| pos[x]).collect();
            if ps.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(format!("sub-branch {:?} is not convex", g.index));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let same = self.block_of[x] == self.block_of[y];
                let (lo, hi) = if self.tree.le(x, y) { (x, y) } else { (y, x) };
                let by_colour = self.tree.comparable(x, y)
                    && (0..n)
                        .filter(|&z| self.tree.le(lo, z) && self.tree.le(z, hi))
                        .all(|z| self.colour[z] == self.colour[x]);
                if same != by_colour {
                    return Err(format!("colours misjudge whether {x} and {y} share a sub-branch"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for A2WellOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.order.iter().map(|&x| self.tree.name(x)).collect();
        writeln!(f, "order: {}", names.join(" < "))?;
        for g in &self.gamma {
            let branch: Vec<&str> = g.branch.iter().map(|&x| self.tree.name(x)).collect();
            writeln!(
                f,
                "A{:?} = {{{}}} rep {} colour {}",
                g.index,
                branch.join(", "),
                self.tree.name(g.rep),
                g.colour
            )?;
        }
        Ok(())
    }
}
