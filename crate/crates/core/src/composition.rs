//! The theory semigroup: addition, finite and ω-indexed sums, generalized
//! sums, and the ω-power tower.

use std::collections::{BTreeMap, HashSet};

use crate::eval::empty_theory;
use crate::structure::FiniteStructure;
use crate::theory::{AtomType, Budget, Memo, Theory, TheoryError};

/// Theory of the concatenation `C + D` from the theories of `C` and `D`.
///
/// Theories carry no record of the structure class, so tree theories cannot
/// be told apart here; callers must only add chain theories.
pub fn add(a: &Theory, b: &Theory) -> Result<Theory, TheoryError> {
    static MEMO: Memo<(u32, u32)> = Memo::new();
    a.same_shape(b)?;
    MEMO.get_or_try((a.id(), b.id()), || {
        if let (Some(x), Some(y)) = (a.atom_type(), b.atom_type()) {
            return Ok(Theory::atoms(add_atoms(x, y)));
        }
        let mut out = HashSet::new();
        for u in a.members() {
            for v in b.members() {
                out.insert(add(u, v)?);
            }
        }
        Theory::set(a.arity(), out)
    })
}

fn add_atoms(x: &AtomType, y: &AtomType) -> AtomType {
    let l = x.arity();
    let mut t = AtomType::new(l);
    let only_left = |i: usize| x.sing(i) && y.empty(i);
    let only_right = |i: usize| x.empty(i) && y.sing(i);
    for i in 0..l {
        t.set_empty(i, x.empty(i) && y.empty(i));
        t.set_sing(i, only_left(i) || only_right(i));
        for j in 0..l {
            t.set_sub(i, j, x.sub(i, j) && y.sub(i, j));
            let lt = (only_left(i) && only_left(j) && x.lt(i, j))
                || (only_right(i) && only_right(j) && y.lt(i, j))
                || (only_left(i) && only_right(j));
            t.set_lt(i, j, lt);
        }
    }
    t
}

/// Theory of `ω` copies of a structure whose theory is `t`.
pub fn omega_power(t: &Theory, budget: &Budget) -> Result<Theory, TheoryError> {
    static MEMO: Memo<u32> = Memo::new();
    MEMO.get_or_try(t.id(), || {
        if let Some(x) = t.atom_type() {
            let l = x.arity();
            let mut o = AtomType::new(l);
            for i in 0..l {
                o.set_empty(i, x.empty(i));
                for j in 0..l {
                    o.set_sub(i, j, x.sub(i, j));
                }
            }
            return Ok(Theory::atoms(o));
        }
        let g = semigroup_closure(t.members(), budget)?;
        let mut starts = g.clone();
        starts.push(empty_theory(t.level() - 1, t.arity() + 1));
        let mut out = HashSet::new();
        for e in &g {
            if add(e, e)? == *e {
                let tail = omega_power(e, budget)?;
                for s in &starts {
                    out.insert(add(s, &tail)?);
                }
            }
        }
        Theory::set(t.arity(), out)
    })
}

/// Closure of `gens` under [`add`], in discovery order.
pub fn semigroup_closure(gens: &[Theory], budget: &Budget) -> Result<Vec<Theory>, TheoryError> {
    let mut seen: HashSet<Theory> = gens.iter().cloned().collect();
    let mut all: Vec<Theory> = Vec::new();
    for g in gens {
        if !all.contains(g) {
            all.push(g.clone());
        }
    }
    let mut k = 0;
    while k < all.len() {
        let x = all[k].clone();
        for g in gens {
            let y = add(&x, g)?;
            if seen.insert(y.clone()) {
                all.push(y);
                budget.check_count("semigroup closure", all.len())?;
            }
        }
        k += 1;
    }
    Ok(all)
}

/// An ultimately periodic sequence of theories of uniform shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySequence {
    pub level: usize,
    pub arity: usize,
    pub prefix: Vec<Theory>,
    pub period: Option<Vec<Theory>>,
}

impl TheorySequence {
    pub fn finite(level: usize, arity: usize, prefix: Vec<Theory>) -> Result<Self, TheoryError> {
        Self::build(level, arity, prefix, None)
    }

    pub fn periodic(
        level: usize,
        arity: usize,
        prefix: Vec<Theory>,
        period: Vec<Theory>,
    ) -> Result<Self, TheoryError> {
        if period.is_empty() {
            return Err(TheoryError::Domain("the period of an ω-sequence is nonempty".into()));
        }
        Self::build(level, arity, prefix, Some(period))
    }

    fn build(
        level: usize,
        arity: usize,
        prefix: Vec<Theory>,
        period: Option<Vec<Theory>>,
    ) -> Result<Self, TheoryError> {
        for t in prefix.iter().chain(period.iter().flatten()) {
            if t.level() != level || t.arity() != arity {
                return Err(TheoryError::Arity(format!(
                    "sequence entry of level {} arity {} in a level {level} arity {arity} sequence",
                    t.level(),
                    t.arity()
                )));
            }
        }
        Ok(TheorySequence {
            level,
            arity,
            prefix,
            period,
        })
    }
}

/// Left fold of [`add`]; the empty sum is the theory of the empty chain.
pub fn sum_finite(seq: &TheorySequence) -> Result<Theory, TheoryError> {
    if seq.period.is_some() {
        return Err(TheoryError::Domain("sum_finite needs a sequence without period".into()));
    }
    fold(seq.level, seq.arity, &seq.prefix)
}

fn fold(level: usize, arity: usize, items: &[Theory]) -> Result<Theory, TheoryError> {
    let mut acc = empty_theory(level, arity);
    for t in items {
        acc = add(&acc, t)?;
    }
    Ok(acc)
}

/// Theory of `prefix` followed by ω repetitions of `period`.
pub fn omega_sum(seq: &TheorySequence, budget: &Budget) -> Result<Theory, TheoryError> {
    let Some(period) = &seq.period else {
        return Err(TheoryError::Domain("omega_sum needs a periodic sequence".into()));
    };
    let head = fold(seq.level, seq.arity, &seq.prefix)?;
    let block = fold(seq.level, seq.arity, period)?;
    add(&head, &omega_power(&block, budget)?)
}

/// Sum along a finite index chain of the theories assigned to its points.
pub fn generalized_sum(
    index: &FiniteStructure,
    partition: &BTreeMap<usize, Theory>,
) -> Result<Theory, TheoryError> {
    if !index.is_chain() {
        return Err(TheoryError::Domain("the index of a generalized sum is a chain".into()));
    }
    let mut items = Vec::with_capacity(index.size());
    for i in 0..index.size() {
        match partition.get(&i) {
            Some(t) => items.push(t.clone()),
            None => return Err(TheoryError::Domain(format!("index point {i} is unmapped"))),
        }
    }
    if let Some(&k) = partition.keys().find(|&&k| k >= index.size()) {
        return Err(TheoryError::Domain(format!("index point {k} is outside the index chain")));
    }
    let Some(first) = items.first() else {
        return Err(TheoryError::Domain("empty index chain has no determined shape".into()));
    };
    let (level, arity) = (first.level(), first.arity());
    sum_finite(&TheorySequence::finite(level, arity, items)?)
}

/// `t(ω^1), t(ω^2), ...` with stabilization data.
#[derive(Debug, Clone)]
pub struct Tower {
    /// `values[r]` is the theory of `ω^(r+1)` copies.
    pub values: Vec<Theory>,
    /// Least `p` with `values[p+1] == values[p]`, if reached.
    pub stabilization: Option<usize>,
    /// Size of the closure of `{t}` under addition and ω-power.
    pub reachable: usize,
}

impl Tower {
    pub fn stable_value(&self) -> Option<&Theory> {
        self.stabilization.map(|p| &self.values[p])
    }
}

/// The first `depth` values of the ω-power tower over `t`.
pub fn omega_power_tower(t: &Theory, depth: usize, budget: &Budget) -> Result<Tower, TheoryError> {
    let mut values: Vec<Theory> = Vec::with_capacity(depth);
    for r in 0..depth {
        let base = if r == 0 { t } else { &values[r - 1] };
        values.push(omega_power(base, budget)?);
    }
    let stabilization = (0..values.len().saturating_sub(1)).find(|&p| values[p + 1] == values[p]);
    Ok(Tower {
        values,
        stabilization,
        reachable: reachable_size(t, budget)?,
    })
}

/// Closure of `{t}` under [`add`] and [`omega_power`].
pub fn reachable_size(t: &Theory, budget: &Budget) -> Result<usize, TheoryError> {
    let mut all = vec![t.clone()];
    let mut seen: HashSet<Theory> = all.iter().cloned().collect();
    let mut k = 0;
    while k < all.len() {
        let x = all[k].clone();
        let mut fresh = vec![omega_power(&x, budget)?];
        for y in all.clone() {
            fresh.push(add(&x, &y)?);
            fresh.push(add(&y, &x)?);
        }
        for f in fresh {
            if seen.insert(f.clone()) {
                all.push(f);
                budget.check_count("reachable closure", all.len())?;
            }
        }
        k += 1;
    }
    Ok(all.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{decide, eval_theory, reduce};
    use crate::formula::parse;
    use crate::structure::Mask;

    fn th(n: usize, sets: &[Mask], level: usize) -> Theory {
        eval_theory(&FiniteStructure::chain(n).unwrap(), sets, level, &Budget::default()).unwrap()
    }

    #[test]
    fn singleton_plus_empty() {
        assert_eq!(add(&th(1, &[1], 0), &th(1, &[0], 0)).unwrap(), th(1, &[1], 0));
    }

    #[test]
    fn sums_of_points() {
        let one = th(1, &[], 1);
        assert_eq!(add(&one, &one).unwrap(), th(2, &[], 1));
        for k in 0..=5 {
            let seq = TheorySequence::finite(1, 0, vec![one.clone(); k]).unwrap();
            assert_eq!(sum_finite(&seq).unwrap(), th(k, &[], 1));
        }
        assert!(add(&one, &th(1, &[], 2)).is_err());
    }

    #[test]
    fn add_matches_concatenation_with_a_set() {
        for (n, m) in [(1, 2), (2, 2), (3, 1), (0, 3)] {
            for a in 0..(1u64 << n) {
                for b in 0..(1u64 << m) {
                    let left = th(n, &[a], 2);
                    let right = th(m, &[b], 2);
                    assert_eq!(add(&left, &right).unwrap(), th(n + m, &[a | b << n], 2));
                }
            }
        }
    }

    #[test]
    fn omega_sums_at_level_zero() {
        let b = Budget::default();
        let empty = th(1, &[0], 0);
        let seq = TheorySequence::periodic(0, 1, vec![], vec![empty.clone()]).unwrap();
        assert_eq!(omega_sum(&seq, &b).unwrap(), empty);
        let single = th(1, &[1], 0);
        let seq = TheorySequence::periodic(0, 1, vec![], vec![single]).unwrap();
        assert_eq!(omega_sum(&seq, &b).unwrap(), th(2, &[3], 0));
        assert!(TheorySequence::periodic(0, 1, vec![], vec![]).is_err());
    }

    #[test]
    fn omega_has_no_maximum() {
        let b = Budget::default();
        let max = parse("EX X. (sing(X) & ALL Y. (sing(Y) -> (Y<X | Y=X)))").unwrap();
        let no_max = parse("~EX X. (sing(X) & ALL Y. (sing(Y) -> (Y<X | Y=X)))").unwrap();
        let seq = TheorySequence::periodic(2, 0, vec![], vec![th(1, &[], 2)]).unwrap();
        let omega = omega_sum(&seq, &b).unwrap();
        assert!(!decide(&max, &omega).unwrap());
        assert!(decide(&no_max, &omega).unwrap());
        assert!(decide(&max, &th(3, &[], 2)).unwrap());
    }

    #[test]
    fn omega_sum_absorbs_a_period() {
        let b = Budget::default();
        let p = vec![th(1, &[1], 1), th(2, &[0], 1)];
        let base = TheorySequence::periodic(1, 1, vec![th(1, &[0], 1)], p.clone()).unwrap();
        let mut longer = base.clone();
        longer.prefix.extend(p);
        assert_eq!(omega_sum(&base, &b).unwrap(), omega_sum(&longer, &b).unwrap());
    }

    #[test]
    fn reduce_commutes_with_sums() {
        let b = Budget::default();
        let x = th(2, &[1], 2);
        let y = th(3, &[6], 2);
        let seq = TheorySequence::periodic(2, 1, vec![x.clone()], vec![y.clone()]).unwrap();
        let low = TheorySequence::periodic(1, 1, vec![reduce(&x, 1).unwrap()], vec![reduce(&y, 1).unwrap()]).unwrap();
        assert_eq!(reduce(&omega_sum(&seq, &b).unwrap(), 1).unwrap(), omega_sum(&low, &b).unwrap());
        assert_eq!(
            reduce(&add(&x, &y).unwrap(), 0).unwrap(),
            add(&reduce(&x, 0).unwrap(), &reduce(&y, 0).unwrap()).unwrap()
        );
    }

    #[test]
    fn generalized_sums() {
        let idx = FiniteStructure::chain(2).unwrap();
        let parts = BTreeMap::from([(0, th(1, &[1], 1)), (1, th(2, &[2], 1))]);
        assert_eq!(generalized_sum(&idx, &parts).unwrap(), th(3, &[0b101], 1));
        let missing = BTreeMap::from([(0, th(1, &[1], 1))]);
        assert!(generalized_sum(&idx, &missing).is_err());
    }

    #[test]
    fn tower_over_a_point() {
        let b = Budget::default();
        let tower = omega_power_tower(&th(1, &[], 1), 4, &b).unwrap();
        let p = tower.stabilization.expect("stabilizes");
        let v = tower.stable_value().unwrap();
        assert_eq!(add(v, v).unwrap(), *v);
        assert!(p <= tower.reachable);
        assert!(omega_power_tower(&th(1, &[], 1), 0, &b).unwrap().values.is_empty());
    }
}
