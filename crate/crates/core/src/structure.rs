//! Finite chains and trees with named predicate sets, and exhaustive MSO
//! model checking over them.
//!
//! Subsets of the universe are `u64` bit masks, so universes hold at most 64
//! points. Exhaustive quantification is exponential well before that.

use std::collections::HashMap;

use crate::formula::Formula;
use crate::theory::{Budget, TheoryError};

pub const MAX_UNIVERSE: usize = 64;

/// A set of universe points.
pub type Mask = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `0 < 1 < ... < N-1`.
    Chain,
    /// Parent links; `x < y` iff `x` is a proper ancestor of `y`.
    Tree { parent: Vec<Option<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    size: usize,
    relation: Relation,
    /// `below[y]` = points strictly below `y`.
    below: Vec<Mask>,
    named: Vec<(String, Mask)>,
}

impl FiniteStructure {
    pub fn chain(size: usize) -> Result<Self, TheoryError> {
        if size > MAX_UNIVERSE {
            return Err(TheoryError::Domain(format!(
                "universe of {size} points exceeds {MAX_UNIVERSE}"
            )));
        }
        let below = (0..size).map(|y| low_bits(y)).collect();
        Ok(FiniteStructure {
            size,
            relation: Relation::Chain,
            below,
            named: Vec::new(),
        })
    }

    /// A tree (or forest) given by parent links.
    pub fn tree(parent: Vec<Option<usize>>) -> Result<Self, TheoryError> {
        let size = parent.len();
        if size > MAX_UNIVERSE {
            return Err(TheoryError::Domain(format!(
                "universe of {size} points exceeds {MAX_UNIVERSE}"
            )));
        }
        let mut below = vec![0u64; size];
        for (v, slot) in below.iter_mut().enumerate() {
            let mut seen = 0u64;
            let mut cur = parent[v];
            while let Some(p) = cur {
                if p >= size {
                    return Err(TheoryError::Domain(format!("parent {p} out of range")));
                }
                if p == v || seen & bit(p) != 0 {
                    return Err(TheoryError::Domain("parent links contain a cycle".into()));
                }
                seen |= bit(p);
                cur = parent[p];
            }
            *slot = seen;
        }
        Ok(FiniteStructure {
            size,
            relation: Relation::Tree { parent },
            below,
            named: Vec::new(),
        })
    }

    /// Parses a chain file: `size N`, then `NAME: i j ...` lines. `#`
    /// starts a comment.
    pub fn parse_chain(text: &str) -> Result<Self, TheoryError> {
        let mut out: Option<FiniteStructure> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |col: usize, msg: &str| TheoryError::Syntax(format!("line {}, column {col}: {msg}", i + 1));
            let col = raw.len() - raw.trim_start().len() + 1;
            match &out {
                None => {
                    let n = line
                        .strip_prefix("size")
                        .and_then(|r| r.trim().parse::<usize>().ok())
                        .ok_or_else(|| err(col, "expected 'size N'"))?;
                    out = Some(FiniteStructure::chain(n)?);
                }
                Some(s) => {
                    let (name, ids) = line.split_once(':').ok_or_else(|| err(col, "expected 'NAME: points'"))?;
                    let mut m = 0;
                    for id in ids.split_whitespace() {
                        let p: usize = id
                            .parse()
                            .map_err(|_| err(col + raw.trim_start().find(id).unwrap_or(0), "expected a point"))?;
                        if p >= s.size {
                            return Err(err(col, &format!("point {p} outside the chain")));
                        }
                        m |= bit(p);
                    }
                    out = Some(s.clone().with_set(name.trim(), m)?);
                }
            }
        }
        out.ok_or_else(|| TheoryError::Syntax("line 1, column 1: missing 'size N'".into()))
    }

    /// Adds (or replaces) a named predicate.
    pub fn with_set(mut self, name: impl Into<String>, set: Mask) -> Result<Self, TheoryError> {
        if set & !self.universe() != 0 {
            return Err(TheoryError::Domain(
                "predicate set is not contained in the universe".into(),
            ));
        }
        let name = name.into();
        self.named.retain(|(n, _)| *n != name);
        self.named.push((name, set));
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn is_chain(&self) -> bool {
        matches!(self.relation, Relation::Chain)
    }

    pub fn universe(&self) -> Mask {
        low_bits(self.size)
    }

    pub fn below(&self, y: usize) -> Mask {
        self.below[y]
    }

    /// Strict order: `x < y` (chain order, or proper ancestry in a tree).
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y] & bit(x) != 0
    }

    pub fn named(&self) -> &[(String, Mask)] {
        &self.named
    }

    pub fn set(&self, name: &str) -> Option<Mask> {
        self.named.iter().find(|(n, _)| n == name).map(|(_, m)| *m)
    }

    /// Substructure on `nodes`, relabelled `0..k` in increasing index order.
    /// Named sets are intersected. The order relation is inherited.
    pub fn induced(&self, nodes: Mask) -> FiniteStructure {
        let idx: Vec<usize> = points(nodes).collect();
        let mut below = vec![0u64; idx.len()];
        for (j, &y) in idx.iter().enumerate() {
            for (i, &x) in idx.iter().enumerate() {
                if self.less(x, y) {
                    below[j] |= bit(i);
                }
            }
        }
        let relation = match &self.relation {
            Relation::Chain => Relation::Chain,
            Relation::Tree { .. } => {
                // nearest inherited ancestor
                let parent = (0..idx.len())
                    .map(|j| {
                        let b = below[j];
                        (0..idx.len()).find(|&i| b & bit(i) != 0 && below[j] & !bit(i) == below[i])
                    })
                    .collect();
                Relation::Tree { parent }
            }
        };
        let named = self
            .named
            .iter()
            .map(|(n, m)| (n.clone(), compress(*m, nodes)))
            .collect();
        FiniteStructure {
            size: idx.len(),
            relation,
            below,
            named,
        }
    }

    /// Restricts a mask of this structure onto the numbering used by
    /// `induced(nodes)`.
    pub fn restrict(&self, set: Mask, nodes: Mask) -> Mask {
        compress(set, nodes)
    }
}

pub fn bit(i: usize) -> Mask {
    1u64 << i
}

pub fn low_bits(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn points(m: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m & (1u64 << i) != 0)
}

/// Packs the bits of `set` that lie in `nodes` into consecutive low bits.
pub fn compress(set: Mask, nodes: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in points(nodes).enumerate() {
        if set & bit(i) != 0 {
            out |= bit(j);
        }
    }
    out
}

/// Inverse of [`compress`].
pub fn expand(local: Mask, nodes: Mask) -> Mask {
    let mut out = 0;
    for (j, i) in points(nodes).enumerate() {
        if local & bit(j) != 0 {
            out |= bit(i);
        }
    }
    out
}

/// Iterates all subsets of `m`.
pub fn subsets(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == m {
            None
        } else {
            Some(cur.wrapping_sub(m) & m)
        };
        Some(cur)
    })
}

fn single(m: Mask) -> Option<usize> {
    (m.count_ones() == 1).then(|| m.trailing_zeros() as usize)
}

/// Exhaustive satisfaction of `phi` over `s`. Free variables are looked up in
/// `assignment` first, then among the structure's named sets.
pub fn model_check(
    s: &FiniteStructure,
    phi: &Formula,
    assignment: &[(&str, Mask)],
    budget: &Budget,
) -> Result<bool, TheoryError> {
    let mut env: HashMap<String, Mask> = HashMap::new();
    for (n, m) in s.named() {
        env.insert(n.clone(), *m);
    }
    for (n, m) in assignment {
        if *m & !s.universe() != 0 {
            return Err(TheoryError::Domain(format!(
                "assignment for {n} is not contained in the universe"
            )));
        }
        env.insert(n.to_string(), *m);
    }
    for v in phi.free_vars() {
        if !env.contains_key(&v) {
            return Err(TheoryError::Arity(format!("free variable {v} is unassigned")));
        }
    }
    let q = phi.dp();
    budget.check_exponent(s.size() * q)?;
    Ok(eval(s, phi, &mut env))
}

fn eval(s: &FiniteStructure, phi: &Formula, env: &mut HashMap<String, Mask>) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Sing(v) => env[v].count_ones() == 1,
        Formula::Empty(v) => env[v] == 0,
        Formula::Sub(a, b) => env[a] & !env[b] == 0,
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Less(a, b) => match (single(env[a]), single(env[b])) {
            (Some(x), Some(y)) => s.less(x, y),
            _ => false,
        },
        Formula::Not(f) => !eval(s, f, env),
        Formula::And(a, b) => eval(s, a, env) && eval(s, b, env),
        Formula::Or(a, b) => eval(s, a, env) || eval(s, b, env),
        Formula::Implies(a, b) => !eval(s, a, env) || eval(s, b, env),
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            let universal = matches!(phi, Formula::Forall(..));
            let saved = env.get(v).copied();
            let mut result = universal;
            for m in subsets(s.universe()) {
                env.insert(v.clone(), m);
                if eval(s, f, env) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(m) => env.insert(v.clone(), m),
                None => env.remove(v),
            };
            result
        }
    }
}


#[cfg(test)]
mod file_tests {
    use super::*;

    #[test]
    fn chain_files() {
        let s = FiniteStructure::parse_chain("# three points\nsize 3\nQ: 0 2\n").unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.set("Q"), Some(0b101));
        let e = FiniteStructure::parse_chain("size 2\nQ: 5\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(FiniteStructure::parse_chain("sise 2").is_err());
    }
}
