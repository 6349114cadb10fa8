//! Formally possible type spaces.
//!
//! Level 0: atom assignments realized by some chain of at most `2l+1` points
//! (the search bound is configurable). Level n+1: nonempty sets of formally
//! possible (n, l+1) types sharing a drop-last projection `p` and containing
//! the padding of `p`, which is the type of the empty set.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use dashmap::DashMap;

use crate::eval::{atoms_of, insert_empty_var, reduce_one};
use crate::structure::{bit, FiniteStructure, Mask};
use crate::theory::{AtomType, Budget, Theory, TheoryError};

/// A type space `T_{n,l}`: membership is decided lazily, enumeration is
/// explicit and budgeted.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    pub level: usize,
    pub arity: usize,
    members: Vec<Theory>,
}

impl TypeSpace {
    pub fn members(&self) -> &[Theory] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &Theory) -> bool {
        t.level() == self.level && t.arity() == self.arity && self.members.binary_search(t).is_ok()
    }
}

/// Level-0 types over `arity` variables realized on chains of at most
/// `max_points` points.
pub fn level0_types(arity: usize, max_points: usize, budget: &Budget) -> Result<Vec<Theory>, TheoryError> {
    let letters: Vec<Mask> = (1..(1u64 << arity)).collect();
    let mut found: HashSet<AtomType> = HashSet::new();
    let mut word: Vec<Mask> = Vec::new();
    let mut uses = vec![0u8; letters.len()];
    let mut visited = 0usize;
    fn realize(word: &[Mask], arity: usize) -> AtomType {
        let s = FiniteStructure::chain(word.len()).expect("small");
        let sets: Vec<Mask> = (0..arity)
            .map(|v| {
                word.iter()
                    .enumerate()
                    .filter(|(_, &w)| w & bit(v) != 0)
                    .fold(0, |m, (p, _)| m | bit(p))
            })
            .collect();
        atoms_of(&s, &sets)
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        word: &mut Vec<Mask>,
        uses: &mut [u8],
        letters: &[Mask],
        arity: usize,
        max_points: usize,
        found: &mut HashSet<AtomType>,
        visited: &mut usize,
        budget: &Budget,
    ) -> Result<(), TheoryError> {
        *visited += 1;
        budget.check_count("level-0 realizer search", *visited)?;
        found.insert(realize(word, arity));
        if word.len() == max_points {
            return Ok(());
        }
        for (k, &letter) in letters.iter().enumerate() {
            // a third copy of a letter changes no atom
            if uses[k] < 2 {
                uses[k] += 1;
                word.push(letter);
                dfs(word, uses, letters, arity, max_points, found, visited, budget)?;
                word.pop();
                uses[k] -= 1;
            }
        }
        Ok(())
    }
    dfs(&mut word, &mut uses, &letters, arity, max_points, &mut found, &mut visited, budget)?;
    let mut out: Vec<Theory> = found.into_iter().map(Theory::atoms).collect();
    out.sort();
    Ok(out)
}

fn level0_cache(arity: usize) -> Result<Vec<Theory>, TheoryError> {
    static CACHE: OnceLock<DashMap<usize, Vec<Theory>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(v) = cache.get(&arity) {
        return Ok(v.clone());
    }
    let v = level0_types(arity, 2 * arity + 1, &Budget::default())?;
    cache.insert(arity, v.clone());
    Ok(v)
}

/// Membership in `T_{level(t), arity(t)}` without enumerating the space.
pub fn is_formally_possible(t: &Theory) -> Result<bool, TheoryError> {
    static MEMO: OnceLock<DashMap<u32, bool>> = OnceLock::new();
    let memo = MEMO.get_or_init(DashMap::new);
    if let Some(v) = memo.get(&t.id()) {
        return Ok(*v);
    }
    let v = if t.level() == 0 {
        level0_cache(t.arity())?.binary_search(t).is_ok()
    } else {
        let mut ok = true;
        for m in t.members() {
            if !is_formally_possible(m)? {
                ok = false;
                break;
            }
        }
        ok && match reduce_one(t) {
            Ok(p) => t.contains(&insert_empty_var(&p, t.arity())?),
            Err(TheoryError::Coherence(_)) => false,
            Err(e) => return Err(e),
        }
    };
    memo.insert(t.id(), v);
    Ok(v)
}

/// Explicit enumeration of `T_{n,l}`.
pub fn enumerate_types(n: usize, l: usize, budget: &Budget) -> Result<TypeSpace, TheoryError> {
    if n == 0 {
        return Ok(TypeSpace {
            level: 0,
            arity: l,
            members: level0_cache(l)?,
        });
    }
    let below = enumerate_types(n - 1, l + 1, budget)?;
    let mut groups: BTreeMap<Theory, Vec<Theory>> = BTreeMap::new();
    for u in below.members() {
        let p = crate::eval::drop_var(u, l)?;
        groups.entry(p).or_default().push(u.clone());
    }
    let mut members = Vec::new();
    for (p, group) in groups {
        let pad = insert_empty_var(&p, l)?;
        let rest: Vec<Theory> = group.into_iter().filter(|u| *u != pad).collect();
        if rest.len() >= 62 {
            return Err(TheoryError::Budget(format!("{} optional members", rest.len())));
        }
        let count = 1usize << rest.len();
        budget.check_count("type space size", members.len() + count)?;
        for mask in 0..count as u64 {
            let mut chosen = vec![pad.clone()];
            chosen.extend(
                rest.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & bit(*i) != 0)
                    .map(|(_, u)| u.clone()),
            );
            members.push(Theory::set(l, chosen)?);
        }
    }
    members.sort();
    Ok(TypeSpace {
        level: n,
        arity: l,
        members,
    })
}
